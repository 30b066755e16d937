//! Exact Horn inequalities for the Mumford cone of a quiver representation
//! space, with independent cross-checks.
//!
//! Given an acyclic [`Quiver`] and a [`LabeledFamily`] (a dimension vector
//! together with complete filtrations), this crate
//!
//! * computes the recursive Horn set of subfamilies ([`horn`]),
//! * emits the inequality description of the Mumford cone and of the
//!   semi-invariant subcone, decides membership and prunes redundant
//!   inequalities by exact linear programming ([`cone`], [`lp`]),
//! * checks all of it against a randomized rank oracle over a prime field
//!   ([`oracle`]) and against Littlewood-Richardson coefficients for star
//!   quivers ([`lr`]).

pub mod cli;
pub mod cone;
pub mod error;
pub mod euler;
pub mod field;
pub mod harness;
pub mod horn;
pub mod lp;
pub mod lr;
pub mod model;
pub mod oracle;
pub mod par;

pub use error::{Error, Result};
pub use model::{canonicalize, parse_quiver, parse_subfamily, subquotient};
pub use model::{DimensionVector, LabeledFamily, Quiver, Subfamily};
pub use par::Parallelism;
