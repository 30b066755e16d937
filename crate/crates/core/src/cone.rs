//! Inequality descriptions of the Mumford cone `Cone_Q(J)` and of the
//! semi-invariant subcone `Σ_Q(J)`, membership tests, classification of the
//! elements `H(K)`, and redundancy pruning.
//!
//! A weight `λ` lies in `Cone_Q(J)` iff it is dominant, its coordinates sum
//! to zero, and `Σ_x Σ_{k∈K_x} λ_x(k) ≤ 0` for every (essential) Horn member
//! `K` of `J`.

use std::fmt::Write as _;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, Signed, Zero};

use crate::error::{Error, Result};
use crate::euler::{self, Weight};
use crate::horn::HornEngine;
use crate::lp::{self, HomogeneousSystem};
use crate::model::{canonicalize, DimensionVector, LabeledFamily, Quiver, Subfamily};

/// A weight whose values weakly decrease along ascending labels at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominantWeight(Weight);

impl DominantWeight {
    pub fn new(quiver: &Quiver, ambient: &LabeledFamily, weight: Weight) -> Result<Self> {
        if !weight.shape_matches(ambient) {
            return Err(Error::SizeMismatch("weight does not match the label sets of the family".into()));
        }
        for x in 0..ambient.vertex_count() {
            if weight.vertex(x).windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::NotDominant(quiver.name(x).to_string()));
            }
        }
        Ok(DominantWeight(weight))
    }

    pub fn weight(&self) -> &Weight {
        &self.0
    }

    /// Values scaled by the common denominator; membership is scale invariant.
    fn integral(&self) -> Result<Vec<Vec<i128>>> {
        let mut denom: i128 = 1;
        for v in self.0.values().iter().flatten() {
            denom = denom.lcm(&i128::from(*v.denom()));
            if denom > i128::from(i64::MAX) {
                return Err(Error::Overflow("weight denominators"));
            }
        }
        Ok(self
            .0
            .values()
            .iter()
            .map(|vals| vals.iter().map(|v| i128::from(*v.numer()) * (denom / i128::from(*v.denom()))).collect())
            .collect())
    }
}

/// `Σ_x Σ_{k∈K_x} λ_x(k) ≤ 0` for one Horn member `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub sub: Subfamily,
    pub eul: i64,
    /// `K = ∅` or `K = J`; implied by the trace equality.
    pub trivial: bool,
}

impl Inequality {
    /// 0/1 indicator of `K`, per vertex in label order.
    pub fn coefficients(&self, ambient: &LabeledFamily) -> Vec<Vec<i64>> {
        (0..ambient.vertex_count())
            .map(|x| (0..ambient.labels(x).len()).map(|i| (self.sub.mask(x) >> i & 1) as i64).collect())
            .collect()
    }

    fn evaluate(&self, values: &[Vec<i128>]) -> Option<i128> {
        let mut sum: i128 = 0;
        for (x, vals) in values.iter().enumerate() {
            let mut m = self.sub.mask(x);
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                sum = sum.checked_add(vals[i])?;
                m &= m - 1;
            }
        }
        Some(sum)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    Trace,
    /// Index into [`ConeSystem::inequalities`].
    Inequality(usize),
}

/// Trace equality plus one inequality per Horn member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSystem {
    quiver: Quiver,
    ambient: LabeledFamily,
    pub inequalities: Vec<Inequality>,
}

impl ConeSystem {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn ambient(&self) -> &LabeledFamily {
        &self.ambient
    }

    /// Drops the `K = ∅` and `K = J` rows.
    pub fn without_trivial(mut self) -> Self {
        self.inequalities.retain(|i| !i.trivial);
        self
    }

    pub fn contains(&self, weight: &DominantWeight) -> Result<bool> {
        Ok(self.first_violation(weight)?.is_none())
    }

    /// The first failed condition, checking the trace before the inequalities.
    pub fn first_violation(&self, weight: &DominantWeight) -> Result<Option<Violation>> {
        if !weight.weight().shape_matches(&self.ambient) {
            return Err(Error::SizeMismatch("weight does not match the label sets of the family".into()));
        }
        let values = weight.integral()?;
        let mut trace: i128 = 0;
        for v in values.iter().flatten() {
            trace = trace.checked_add(*v).ok_or(Error::Overflow("weight trace"))?;
        }
        if trace != 0 {
            return Ok(Some(Violation::Trace));
        }
        for (i, ineq) in self.inequalities.iter().enumerate() {
            let s = ineq.evaluate(&values).ok_or(Error::Overflow("inequality evaluation"))?;
            if s > 0 {
                return Ok(Some(Violation::Inequality(i)));
            }
        }
        Ok(None)
    }

    /// Removes every inequality implied by the rest together with the trace
    /// equality and dominance.
    pub fn prune(&self, cap: usize) -> Result<ConeSystem> {
        let dims = self.ambient.dims();
        let vars = dims.total();
        let mut offsets = Vec::with_capacity(dims.len());
        let mut acc = 0;
        for &n in &dims.0 {
            offsets.push(acc);
            acc += n;
        }
        let mut fixed = Vec::new();
        for (x, &n) in dims.0.iter().enumerate() {
            for i in 0..n.saturating_sub(1) {
                let mut row = vec![0i64; vars];
                row[offsets[x] + i] = -1;
                row[offsets[x] + i + 1] = 1;
                fixed.push(row);
            }
        }
        let sys = HomogeneousSystem {
            vars,
            equalities: vec![vec![1; vars]],
            fixed,
            inequalities: self.inequalities.iter().map(|i| i.coefficients(&self.ambient).concat()).collect(),
        };
        let keep = lp::prune_redundant(&sys, cap)?;
        Ok(ConeSystem {
            quiver: self.quiver.clone(),
            ambient: self.ambient.clone(),
            inequalities: keep.into_iter().map(|i| self.inequalities[i].clone()).collect(),
        })
    }

    /// Tab-separated records, equality first.
    pub fn render(&self) -> String {
        let mut out = String::from("EQ\tsum[all] = 0\n");
        for ineq in &self.inequalities {
            let terms: Vec<String> = ineq
                .sub
                .labels(&self.ambient)
                .iter()
                .enumerate()
                .flat_map(|(x, ls)| ls.iter().map(move |l| (x, *l)))
                .map(|(x, l)| format!("{}:{}", self.quiver.name(x), l))
                .collect();
            let _ = writeln!(
                out,
                "K\t{}\teul={}\tsum[{}] <= 0",
                ineq.sub.to_braced(&self.quiver, &self.ambient),
                ineq.eul,
                terms.join(",")
            );
        }
        out
    }
}

/// Inequalities for `Cone_Q(J)` from all Horn members, or only those with
/// `eul = 0` when `essential_only`.
pub fn cone_inequalities(engine: &HornEngine<'_>, family: &LabeledFamily, essential_only: bool) -> Result<ConeSystem> {
    let quiver = engine.quiver();
    let members = if essential_only { engine.essential_horn(family)? } else { engine.horn_families(family)? };
    let inequalities = members
        .into_iter()
        .map(|m| {
            let trivial = m.sub.is_empty() || m.sub.is_full(family);
            Inequality { sub: m.sub, eul: m.eul, trivial }
        })
        .collect();
    Ok(ConeSystem { quiver: quiver.clone(), ambient: family.clone(), inequalities })
}

/// Membership of a dominant weight in `Cone_Q(J)`.
pub fn cone_contains(engine: &HornEngine<'_>, family: &LabeledFamily, weight: &DominantWeight) -> Result<bool> {
    cone_inequalities(engine, family, true)?.contains(weight)
}

/// A weight of the form `(σ_x z_x)`: constant `σ_x` on vertex `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaVector(pub Vec<Rational64>);

impl SigmaVector {
    pub fn from_integers(v: &[i64]) -> Self {
        SigmaVector(v.iter().map(|&a| Rational64::from_integer(a)).collect())
    }
}

/// `Σ_x n_x σ_x = 0` and `Σ_x α_x σ_x ≤ 0` for each cardinality vector `α`
/// of a Horn member, deduplicated in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaSystem {
    quiver: Quiver,
    pub dims: DimensionVector,
    pub rows: Vec<DimensionVector>,
}

impl SigmaSystem {
    pub fn contains(&self, sigma: &SigmaVector) -> Result<bool> {
        if sigma.0.len() != self.dims.len() {
            return Err(Error::SizeMismatch(format!(
                "sigma has {} entries, quiver has {} vertices",
                sigma.0.len(),
                self.dims.len()
            )));
        }
        let dot = |alpha: &DimensionVector| -> Result<Rational64> {
            let mut s = Rational64::zero();
            for (a, v) in alpha.0.iter().zip(&sigma.0) {
                let a = i64::try_from(*a).map_err(|_| Error::Overflow("sigma pairing"))?;
                let term = v.checked_mul(&Rational64::from_integer(a)).ok_or(Error::Overflow("sigma pairing"))?;
                s = s.checked_add(&term).ok_or(Error::Overflow("sigma pairing"))?;
            }
            Ok(s)
        };
        if !dot(&self.dims)?.is_zero() {
            return Ok(false);
        }
        for alpha in &self.rows {
            if dot(alpha)?.is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn functional(&self, alpha: &DimensionVector) -> String {
        let terms: Vec<String> =
            alpha.0.iter().enumerate().map(|(x, a)| format!("{}:{}", self.quiver.name(x), a)).collect();
        format!("sigma[{}]", terms.join(","))
    }

    pub fn render(&self) -> String {
        let mut out = format!("EQ\t{} = 0\n", self.functional(&self.dims));
        for alpha in &self.rows {
            let _ = writeln!(out, "S\t{} <= 0", self.functional(alpha));
        }
        out
    }
}

pub fn sigma_inequalities(engine: &HornEngine<'_>, family: &LabeledFamily) -> Result<SigmaSystem> {
    let mut rows: Vec<DimensionVector> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for m in engine.horn_families(family)? {
        let alpha = m.sub.dims();
        if seen.insert(alpha.clone()) {
            rows.push(alpha);
        }
    }
    Ok(SigmaSystem { quiver: engine.quiver().clone(), dims: family.dims(), rows })
}

pub fn sigma_contains(engine: &HornEngine<'_>, family: &LabeledFamily, sigma: &SigmaVector) -> Result<bool> {
    sigma_inequalities(engine, family)?.contains(sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub eul: i64,
    pub admissible: bool,
    pub covering: bool,
    pub ressayre: bool,
    pub horn_element: bool,
}

/// Classifies `H(K)`. The Horn-element test splits `κ_{H(K)}` into its `K`
/// and `J∖K` parts and checks each against the cone of the (canonicalized)
/// factor family.
pub fn classify_element(engine: &HornEngine<'_>, family: &LabeledFamily, sub: &Subfamily) -> Result<Classification> {
    let quiver = engine.quiver();
    sub.check_within(quiver, family)?;
    let eul = euler::eul_sub(quiver, family, sub)?;
    let covering = engine.is_q_intersecting(family, sub)?;
    let ressayre = covering && eul == 0;
    let horn_element = eul == 0 && {
        let kappa = euler::kappa(quiver, family, sub)?;
        let rest = sub.complement(family);
        factor_in_cone(engine, family, sub, &kappa)? && factor_in_cone(engine, family, &rest, &kappa)?
    };
    Ok(Classification { eul, admissible: true, covering, ressayre, horn_element })
}

fn factor_in_cone(engine: &HornEngine<'_>, family: &LabeledFamily, part: &Subfamily, kappa: &Weight) -> Result<bool> {
    let quiver = engine.quiver();
    let factor = canonicalize(&LabeledFamily::new(part.labels(family))?);
    match DominantWeight::new(quiver, &factor, kappa.restrict(part)) {
        Ok(w) => cone_contains(engine, &factor, &w),
        // the cone lies in the dominant chamber
        Err(Error::NotDominant(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::DEFAULT_LP_CAP;
    use crate::model::{parse_quiver, parse_subfamily};

    fn a2(n: u64) -> (Quiver, LabeledFamily) {
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let l = labels.join(" ");
        parse_quiver(&format!("vertex x {l}\nvertex y {l}\narrow x y\n")).unwrap()
    }

    fn dw(q: &Quiver, j: &LabeledFamily, v: &[Vec<i64>]) -> DominantWeight {
        DominantWeight::new(q, j, Weight::from_integers(v)).unwrap()
    }

    #[test]
    fn zero_representation_single_vertex() {
        let (q, j) = parse_quiver("vertex x 1 2\n").unwrap();
        let engine = HornEngine::new(&q);
        let sys = cone_inequalities(&engine, &j, true).unwrap();
        let coeffs: Vec<Vec<Vec<i64>>> = sys.inequalities.iter().map(|i| i.coefficients(&j)).collect();
        assert_eq!(coeffs, vec![vec![vec![0, 0]], vec![vec![1, 0]], vec![vec![1, 1]]]);
        assert!(sys.contains(&dw(&q, &j, &[vec![0, 0]])).unwrap());
        assert!(!sys.contains(&dw(&q, &j, &[vec![1, -1]])).unwrap());
    }

    #[test]
    fn a2_system_contains_cauchy_constraints() {
        let (q, j) = a2(2);
        let engine = HornEngine::new(&q);
        let sys = cone_inequalities(&engine, &j, true).unwrap();
        let text = sys.render();
        assert!(text.starts_with("EQ\tsum[all] = 0\n"));
        assert!(text.contains("K\tx:{1};y:{2}\teul=0\tsum[x:1,y:2] <= 0\n"), "{text}");
        assert!(text.contains("K\tx:{2};y:{1}\teul=0\tsum[x:2,y:1] <= 0\n"), "{text}");
        assert!(text.contains("K\tx:{};y:{}\teul=0\tsum[] <= 0\n"), "{text}");
    }

    #[test]
    fn a2_membership() {
        let (q, j) = a2(2);
        let engine = HornEngine::new(&q);
        assert!(cone_contains(&engine, &j, &dw(&q, &j, &[vec![2, 1], vec![-1, -2]])).unwrap());
        // degree-one functions: the pair (1,0) and its dual
        assert!(cone_contains(&engine, &j, &dw(&q, &j, &[vec![1, 0], vec![0, -1]])).unwrap());
        // fails K = ({1},{2}): 2 - 1 > 0
        assert!(!cone_contains(&engine, &j, &dw(&q, &j, &[vec![2, 0], vec![-1, -1]])).unwrap());
        assert!(cone_contains(&engine, &j, &dw(&q, &j, &[vec![0, 0], vec![0, 0]])).unwrap());
        // rational weights scale
        let half = Weight::from_values(vec![
            vec![Rational64::new(1, 2), Rational64::new(1, 3)],
            vec![Rational64::new(-1, 3), Rational64::new(-1, 2)],
        ]);
        assert!(cone_contains(&engine, &j, &DominantWeight::new(&q, &j, half).unwrap()).unwrap());
    }

    #[test]
    fn membership_rejects_bad_weights() {
        let (q, j) = a2(2);
        let err = DominantWeight::new(&q, &j, Weight::from_integers(&[vec![0, 1], vec![0, 0]])).unwrap_err();
        assert_eq!(err, Error::NotDominant("x".into()));
        assert!(matches!(
            DominantWeight::new(&q, &j, Weight::from_integers(&[vec![0, 0, 0], vec![0, 0]])),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn sigma_examples() {
        let (q, j) = a2(2);
        let engine = HornEngine::new(&q);
        let sys = sigma_inequalities(&engine, &j).unwrap();
        assert!(sys.rows.contains(&DimensionVector(vec![1, 1])));
        assert!(sys.rows.contains(&DimensionVector(vec![0, 1])));
        assert!(sys.rows.contains(&DimensionVector(vec![1, 2])));
        assert!(sys.contains(&SigmaVector::from_integers(&[1, -1])).unwrap());
        assert!(!sys.contains(&SigmaVector::from_integers(&[-1, 1])).unwrap());
        assert!(!sys.contains(&SigmaVector::from_integers(&[1, 0])).unwrap());
        assert!(sys.contains(&SigmaVector::from_integers(&[0, 0])).unwrap());
        assert!(sys.contains(&SigmaVector::from_integers(&[1, 1, 1])).is_err());
        let text = sys.render();
        assert!(text.starts_with("EQ\tsigma[x:2,y:2] = 0\n"), "{text}");
    }

    #[test]
    fn classification_examples() {
        let (q, j) = a2(2);
        let engine = HornEngine::new(&q);
        let k = parse_subfamily(&q, &j, "x:1;y:2").unwrap();
        let c = classify_element(&engine, &j, &k).unwrap();
        assert!(c.admissible && c.covering && c.ressayre && c.horn_element);
        let k = parse_subfamily(&q, &j, "x:1;y:1").unwrap();
        let c = classify_element(&engine, &j, &k).unwrap();
        assert!(!c.covering && !c.ressayre && !c.horn_element);
        assert_eq!(c.eul, -1);
        let c = classify_element(&engine, &j, &j.full()).unwrap();
        assert!(c.covering && c.ressayre && c.horn_element);
    }

    #[test]
    fn prune_removes_trivial_and_keeps_the_cone() {
        let (q, j) = a2(2);
        let engine = HornEngine::new(&q);
        let sys = cone_inequalities(&engine, &j, true).unwrap();
        let pruned = sys.prune(DEFAULT_LP_CAP).unwrap();
        assert!(pruned.inequalities.iter().all(|i| !i.trivial));
        assert!(pruned.inequalities.len() < sys.inequalities.len());
        for a in -3..=3i64 {
            for b in -3..=a {
                for c in -3..=3i64 {
                    for d in -3..=c {
                        let w = dw(&q, &j, &[vec![a, b], vec![c, d]]);
                        assert_eq!(sys.contains(&w).unwrap(), pruned.contains(&w).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn prune_handles_duplicates() {
        let (q, j) = a2(2);
        let engine = HornEngine::new(&q);
        let mut sys = cone_inequalities(&engine, &j, true).unwrap().without_trivial();
        let first = sys.inequalities[0].clone();
        sys.inequalities.push(first.clone());
        let pruned = sys.prune(DEFAULT_LP_CAP).unwrap();
        assert!(pruned.inequalities.iter().filter(|i| **i == first).count() <= 1);
    }
}
