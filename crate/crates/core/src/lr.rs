//! Littlewood-Richardson coefficients by tableau enumeration, and the
//! star-quiver comparison against cone membership.

use std::collections::BTreeMap;
use std::fmt;

use crate::cone::{ConeSystem, DominantWeight};
use crate::error::{Error, Result};
use crate::euler::Weight;
use crate::horn::HornEngine;
use crate::model::{DimensionVector, LabeledFamily, Quiver};

/// A weakly decreasing sequence of nonnegative integers. Trailing zeros are
/// dropped on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Parts padded with zeros to `n` entries.
    pub fn padded(&self, n: usize) -> Result<Vec<i64>> {
        if self.len() > n {
            return Err(Error::Invalid(format!("partition {self} has more than {n} rows")));
        }
        Ok((0..n).map(|i| i64::from(self.part(i))).collect())
    }

    /// `(-μ_n, ..., -μ_1)`.
    pub fn dual(&self, n: usize) -> Result<Vec<i64>> {
        let mut v = self.padded(n)?;
        v.reverse();
        Ok(v.into_iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| Error::Invalid(format!("`{t}` is not a nonnegative integer"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

struct Filler<'a> {
    outer: &'a Partition,
    inner: &'a Partition,
    content: &'a Partition,
    grid: Vec<Vec<u32>>,
    used: Vec<u32>,
    count: u64,
}

impl Filler<'_> {
    fn in_skew(&self, r: usize, c: usize) -> bool {
        (c as u32) >= self.inner.part(r) && (c as u32) < self.outer.part(r)
    }

    // Cells are filled row by row, right to left: exactly the reading order
    // of the lattice-word condition.
    fn fill(&mut self, r: usize, c: Option<usize>) {
        let rows = self.outer.len();
        if r == rows {
            self.count += 1;
            return;
        }
        let c = match c {
            Some(c) => c,
            None => {
                if self.outer.part(r) == self.inner.part(r) {
                    return self.fill(r + 1, None);
                }
                self.outer.part(r) as usize - 1
            }
        };
        let max_right = if self.in_skew(r, c + 1) { self.grid[r][c + 1] } else { u32::MAX };
        let min_above = if r > 0 && self.in_skew(r - 1, c) { self.grid[r - 1][c] + 1 } else { 1 };
        let top = (self.content.len() as u32).min(max_right);
        for v in min_above..=top {
            let vi = v as usize - 1;
            if self.used[vi] >= self.content.part(vi) {
                continue;
            }
            if vi > 0 && self.used[vi] + 1 > self.used[vi - 1] {
                continue;
            }
            self.used[vi] += 1;
            self.grid[r][c] = v;
            if c as u32 == self.inner.part(r) {
                self.fill(r + 1, None);
            } else {
                self.fill(r, Some(c - 1));
            }
            self.used[vi] -= 1;
        }
    }
}

/// Multiplicity of `V_ν` in `V_λ ⊗ V_μ`: the number of LR tableaux of
/// shape `ν/λ` and content `μ`.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if nu.size() != lambda.size() + mu.size() || !nu.contains(lambda) || !nu.contains(mu) {
        return 0;
    }
    let width = nu.part(0) as usize + 1;
    let mut f = Filler {
        outer: nu,
        inner: lambda,
        content: mu,
        grid: vec![vec![0; width]; nu.len()],
        used: vec![0; mu.len()],
        count: 0,
    };
    f.fill(0, None);
    f.count
}

/// Partitions of `size` contained in `bound`.
pub fn partitions_within(bound: &Partition, size: u32) -> Vec<Partition> {
    fn rec(bound: &Partition, row: usize, cap: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if row >= bound.len() {
            return;
        }
        let hi = cap.min(bound.part(row)).min(left);
        for p in (1..=hi).rev() {
            cur.push(p);
            rec(bound, row + 1, p, left - p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(bound, 0, u32::MAX, size, &mut Vec::new(), &mut out);
    out
}

/// Multiplicity of `V_μ` in `V_{λ_1} ⊗ ... ⊗ V_{λ_s}`. Intermediate
/// products only need components contained in `μ`.
pub fn multi_lr(lambdas: &[Partition], mu: &Partition) -> Result<u64> {
    let (first, rest) =
        lambdas.split_first().ok_or_else(|| Error::Invalid("at least one factor is required".into()))?;
    let mut current: BTreeMap<Partition, u64> = BTreeMap::new();
    if mu.contains(first) {
        current.insert(first.clone(), 1);
    }
    for lam in rest {
        let mut next: BTreeMap<Partition, u64> = BTreeMap::new();
        for (rho, mult) in &current {
            let size = rho.size() + lam.size();
            if size > mu.size() {
                continue;
            }
            for sigma in partitions_within(mu, size) {
                let c = lr_coefficient(rho, lam, &sigma);
                if c > 0 {
                    let e = next.entry(sigma).or_insert(0);
                    *e = e
                        .checked_add(mult.checked_mul(c).ok_or(Error::Overflow("LR multiplicity"))?)
                        .ok_or(Error::Overflow("LR multiplicity"))?;
                }
            }
        }
        current = next;
    }
    Ok(current.get(mu).copied().unwrap_or(0))
}

/// Outcome of one star-quiver comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarCheck {
    pub multiplicity: u64,
    pub cone: bool,
}

impl StarCheck {
    pub fn agree(&self) -> bool {
        (self.multiplicity > 0) == self.cone
    }
}

/// Compares `multi_lr(λ_1..λ_s; μ) > 0` with membership of
/// `(λ_1, ..., λ_s, μ*)` in the Mumford cone of the star quiver with all
/// dimensions `n`. The essential inequality system is built once.
pub struct StarChecker {
    n: usize,
    s: usize,
    system: ConeSystem,
}

impl StarChecker {
    pub fn new(n: usize, s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::Invalid("the star quiver needs at least one source".into()));
        }
        let quiver = Quiver::star(s);
        let family = LabeledFamily::canonical(&DimensionVector(vec![n; s + 1]));
        let engine = HornEngine::new(&quiver);
        let system = crate::cone::cone_inequalities(&engine, &family, true)?;
        Ok(StarChecker { n, s, system })
    }

    pub fn check(&self, lambdas: &[Partition], mu: &Partition) -> Result<StarCheck> {
        if lambdas.len() != self.s {
            return Err(Error::Invalid(format!("expected {} partitions, got {}", self.s, lambdas.len())));
        }
        let mut values = Vec::with_capacity(self.s + 1);
        for lam in lambdas {
            values.push(lam.padded(self.n)?);
        }
        values.push(mu.dual(self.n)?);
        let weight = DominantWeight::new(self.system.quiver(), self.system.ambient(), Weight::from_integers(&values))?;
        Ok(StarCheck { multiplicity: multi_lr(lambdas, mu)?, cone: self.system.contains(&weight)? })
    }
}

pub fn star_cone_check(n: usize, lambdas: &[Partition], mu: &Partition) -> Result<StarCheck> {
    StarChecker::new(n, lambdas.len())?.check(lambdas, mu)
}
