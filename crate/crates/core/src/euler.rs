//! Exact dimension counts: hom spaces, filtration-compatible maps, the Euler
//! form, filtered Euler numbers and the weight `κ` of an element `H(K)`.
//!
//! Sign conventions: positive roots at a vertex are `e_i - e_j` for labels
//! `i < j`, and the coordinate of `Hom(V_x, V_y)` sending `e_i` to `e_j`
//! has weight `e^y_j - e^x_i`.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{DimensionVector, LabeledFamily, Mask, Quiver, Subfamily};

fn checked_mul(a: usize, b: usize) -> Result<i64> {
    a.checked_mul(b).and_then(|p| i64::try_from(p).ok()).ok_or(Error::Overflow("dimension count"))
}

fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("dimension count"))
}

fn check_dims(quiver: &Quiver, dims: &DimensionVector) -> Result<()> {
    if dims.len() != quiver.vertex_count() {
        return Err(Error::SizeMismatch(format!(
            "dimension vector has {} entries, quiver has {} vertices",
            dims.len(),
            quiver.vertex_count()
        )));
    }
    Ok(())
}

/// `Σ_x α_x β_x − Σ_{a:x→y} α_x β_y`.
pub fn euler_form(quiver: &Quiver, alpha: &DimensionVector, beta: &DimensionVector) -> Result<i64> {
    check_dims(quiver, alpha)?;
    check_dims(quiver, beta)?;
    let mut diag = 0i64;
    for (a, b) in alpha.0.iter().zip(&beta.0) {
        diag = checked_add(diag, checked_mul(*a, *b)?)?;
    }
    diag.checked_sub(dim_hom_space(quiver, alpha, beta)?).ok_or(Error::Overflow("euler form"))
}

/// Dimension of `⊕_{a:x→y} Hom(V_x, W_y)`, counting parallel arrows.
pub fn dim_hom_space(quiver: &Quiver, alpha: &DimensionVector, beta: &DimensionVector) -> Result<i64> {
    check_dims(quiver, alpha)?;
    check_dims(quiver, beta)?;
    quiver.arrows().iter().try_fold(0i64, |acc, a| checked_add(acc, checked_mul(alpha[a.source], beta[a.target])?))
}

/// Number of elementary maps `e_k ↦ e_j` (same vertex, `j ≤ k`) that respect
/// both filtrations; this is the dimension of the compatible-map space.
pub fn dim_compatible(quiver: &Quiver, source: &LabeledFamily, target: &LabeledFamily) -> Result<i64> {
    source.check_on(quiver)?;
    target.check_on(quiver)?;
    let mut total = 0i64;
    for x in 0..quiver.vertex_count() {
        let ws = target.labels(x);
        let mut below = 0usize;
        for &k in source.labels(x) {
            while below < ws.len() && ws[below] <= k {
                below += 1;
            }
            total = checked_add(total, below as i64)?;
        }
    }
    Ok(total)
}

/// Filtered Euler number: compatible maps minus arrow homs.
pub fn eul(quiver: &Quiver, source: &LabeledFamily, target: &LabeledFamily) -> Result<i64> {
    let compat = dim_compatible(quiver, source, target)?;
    let hom = dim_hom_space(quiver, &source.dims(), &target.dims())?;
    compat.checked_sub(hom).ok_or(Error::Overflow("filtered Euler number"))
}

/// Filtered Euler number of the sub/quotient pair `(K, J/K)`.
pub fn eul_sub(quiver: &Quiver, ambient: &LabeledFamily, sub: &Subfamily) -> Result<i64> {
    sub.check_within(quiver, ambient)?;
    Ok(eul_masks(quiver, &ambient.dims().0, sub.masks()))
}

/// Number of pairs `(k, j)` with `k` in the mask, `j` outside it and `j < k`.
#[inline]
pub(crate) fn inversions(mask: Mask) -> i64 {
    let mut m = mask;
    let mut total = 0i64;
    while m != 0 {
        let k = m.trailing_zeros();
        let below = mask & ((1u64 << k) - 1);
        total += (k - below.count_ones()) as i64;
        m &= m - 1;
    }
    total
}

/// `eul_Q(K, J/K)` from position masks; only relative order matters.
/// Dimensions are bounded by 64 labels per vertex so this cannot overflow.
#[inline]
pub(crate) fn eul_masks(quiver: &Quiver, dims: &[usize], masks: &[Mask]) -> i64 {
    let compat: i64 = masks.iter().map(|&m| inversions(m)).sum();
    let hom: i64 = quiver
        .arrows()
        .iter()
        .map(|a| {
            let k = masks[a.source].count_ones() as i64;
            let q = dims[a.target] as i64 - masks[a.target].count_ones() as i64;
            k * q
        })
        .sum();
    compat - hom
}

/// A weight: one rational coordinate per (vertex, label) of an ambient family,
/// stored in ascending label order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    values: Vec<Vec<Rational64>>,
}

impl Weight {
    pub fn zero(ambient: &LabeledFamily) -> Self {
        Weight { values: ambient.all_labels().iter().map(|ls| vec![Rational64::zero(); ls.len()]).collect() }
    }

    pub fn from_values(values: Vec<Vec<Rational64>>) -> Self {
        Weight { values }
    }

    pub fn from_integers(values: &[Vec<i64>]) -> Self {
        Weight { values: values.iter().map(|v| v.iter().map(|&a| Rational64::from_integer(a)).collect()).collect() }
    }

    pub fn values(&self) -> &[Vec<Rational64>] {
        &self.values
    }

    pub fn vertex(&self, x: usize) -> &[Rational64] {
        &self.values[x]
    }

    pub fn get(&self, x: usize, pos: usize) -> Rational64 {
        self.values[x][pos]
    }

    fn add(&mut self, x: usize, pos: usize, delta: i64) {
        self.values[x][pos] += Rational64::from_integer(delta);
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(Zero::is_zero)
    }

    pub fn total(&self) -> Rational64 {
        self.values.iter().flatten().fold(Rational64::zero(), |a, b| a + b)
    }

    /// `⟨H(K), self⟩ = Σ_x Σ_{k∈K_x} self_x(k)`.
    pub fn pair(&self, sub: &Subfamily) -> Rational64 {
        let mut sum = Rational64::zero();
        for (x, vals) in self.values.iter().enumerate() {
            let m = sub.mask(x);
            for (i, v) in vals.iter().enumerate() {
                if m >> i & 1 == 1 {
                    sum += v;
                }
            }
        }
        sum
    }

    /// Coordinates on `sub` only, relabeled in ascending order.
    pub fn restrict(&self, sub: &Subfamily) -> Weight {
        Weight {
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(x, vals)| {
                    let m = sub.mask(x);
                    vals.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, v)| *v).collect()
                })
                .collect(),
        }
    }

    pub fn shape_matches(&self, ambient: &LabeledFamily) -> bool {
        self.values.len() == ambient.vertex_count()
            && self.values.iter().enumerate().all(|(x, v)| v.len() == ambient.labels(x).len())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, vals) in self.values.iter().enumerate() {
            if x > 0 {
                f.write_str("; ")?;
            }
            let parts: Vec<String> = vals.iter().map(ToString::to_string).collect();
            f.write_str(&parts.join(","))?;
        }
        Ok(())
    }
}

/// `κ_{H(K)}`: the sum of positive roots negative on `H(K)` minus the sum of
/// representation weights negative on `H(K)`.
pub fn kappa(quiver: &Quiver, ambient: &LabeledFamily, sub: &Subfamily) -> Result<Weight> {
    ambient.check_on(quiver)?;
    sub.check_within(quiver, ambient)?;
    let mut w = Weight::zero(ambient);
    for x in 0..quiver.vertex_count() {
        let n = ambient.labels(x).len();
        let m = sub.mask(x);
        for j in 0..n {
            if m >> j & 1 == 0 {
                continue;
            }
            for i in 0..j {
                if m >> i & 1 == 0 {
                    w.add(x, i, 1);
                    w.add(x, j, -1);
                }
            }
        }
    }
    for a in quiver.arrows() {
        let (x, y) = (a.source, a.target);
        let (mx, my) = (sub.mask(x), sub.mask(y));
        for i in 0..ambient.labels(x).len() {
            if mx >> i & 1 == 0 {
                continue;
            }
            for j in 0..ambient.labels(y).len() {
                if my >> j & 1 == 1 {
                    continue;
                }
                w.add(y, j, -1);
                w.add(x, i, 1);
            }
        }
    }
    Ok(w)
}
