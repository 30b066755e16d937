//! Exact rational simplex (dense tableau, Bland's rule) and redundancy
//! pruning for homogeneous inequality systems.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest tableau (rows x columns) `prune_redundant` will build.
pub const DEFAULT_LP_CAP: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(BigRational),
    Unbounded,
}

/// Maximizes `c·x` subject to `A x ≤ b`, `x ≥ 0`, with `b ≥ 0` so the slack
/// basis is feasible from the start.
pub fn maximize(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> Result<LpOutcome> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::SizeMismatch("linear program dimensions".into()));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(Error::Invalid("right-hand side must be nonnegative".into()));
    }
    let width = n + m + 1;
    let rhs = n + m;
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let mut r = vec![BigRational::zero(); width];
        r[..n].clone_from_slice(row);
        r[n + i] = BigRational::one();
        r[rhs] = b[i].clone();
        tab.push(r);
    }
    // objective row holds -c; optimal once no entry is negative
    let mut obj = vec![BigRational::zero(); width];
    for (j, cj) in c.iter().enumerate() {
        obj[j] = -cj.clone();
    }
    tab.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| tab[m][j].is_negative()) else {
            return Ok(LpOutcome::Optimal(tab[m][rhs].clone()));
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][rhs] / &tab[i][enter];
            let better = match &leave {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pr, _)) = leave else {
            return Ok(LpOutcome::Unbounded);
        };
        pivot(&mut tab, pr, enter);
        basis[pr] = enter;
    }
}

fn pivot(tab: &mut [Vec<BigRational>], pr: usize, pc: usize) {
    let inv = tab[pr][pc].recip();
    for v in tab[pr].iter_mut() {
        *v *= &inv;
    }
    let pivot_row = tab[pr].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, p) in row.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
}

/// Homogeneous linear system over free variables: `eq·x = 0` for each
/// equality row and `row·x ≤ 0` for each inequality row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousSystem {
    pub vars: usize,
    pub equalities: Vec<Vec<i64>>,
    /// Constraints that are never candidates for removal (dominance).
    pub fixed: Vec<Vec<i64>>,
    pub inequalities: Vec<Vec<i64>>,
}

fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Decides whether `target·x ≤ 0` holds on the cone cut out by `rows` (all
/// `≤ 0`) and `equalities`.
pub fn implied(vars: usize, equalities: &[Vec<i64>], rows: &[&[i64]], target: &[i64]) -> Result<bool> {
    if target.iter().all(|&t| t == 0) {
        return Ok(true);
    }
    // free x = p - q; maximize target·x with target·x ≤ 1 added
    let split =
        |row: &[i64]| -> Vec<BigRational> { row.iter().map(|&v| big(v)).chain(row.iter().map(|&v| big(-v))).collect() };
    let mut a = Vec::new();
    for eq in equalities {
        a.push(split(eq));
        a.push(split(&eq.iter().map(|v| -v).collect::<Vec<_>>()));
    }
    for row in rows {
        a.push(split(row));
    }
    a.push(split(target));
    let mut b = vec![BigRational::zero(); a.len()];
    *b.last_mut().unwrap() = BigRational::one();
    debug_assert!(a.iter().all(|r| r.len() == 2 * vars));
    match maximize(&split(target), &a, &b)? {
        LpOutcome::Optimal(v) => Ok(!v.is_positive()),
        LpOutcome::Unbounded => unreachable!("objective is bounded by its own row"),
    }
}

/// Indices of a minimal subset of `sys.inequalities` defining the same cone.
///
/// Inequalities are visited in order; one is dropped when the others still
/// kept (together with equalities and fixed rows) imply it.
pub fn prune_redundant(sys: &HomogeneousSystem, cap: usize) -> Result<Vec<usize>> {
    let rows = 2 * sys.equalities.len() + sys.fixed.len() + sys.inequalities.len() + 1;
    let cols = 2 * sys.vars + rows + 1;
    if rows.saturating_mul(cols) > cap {
        return Err(Error::LpTooLarge { vars: sys.vars, rows, cap });
    }
    let mut keep: Vec<bool> = vec![true; sys.inequalities.len()];
    for i in 0..sys.inequalities.len() {
        let target = &sys.inequalities[i];
        if target.iter().all(|&t| t == 0) {
            keep[i] = false;
            continue;
        }
        // a later identical copy makes this one redundant; keep the last
        if sys.inequalities[i + 1..].iter().any(|r| r == target) {
            keep[i] = false;
            continue;
        }
        let others: Vec<&[i64]> = sys
            .fixed
            .iter()
            .map(Vec::as_slice)
            .chain(sys.inequalities.iter().enumerate().filter(|(j, _)| *j != i && keep[*j]).map(|(_, r)| r.as_slice()))
            .collect();
        if implied(sys.vars, &sys.equalities, &others, target)? {
            keep[i] = false;
        }
    }
    Ok(keep.iter().enumerate().filter(|(_, k)| **k).map(|(i, _)| i).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_lp() {
        // max x + y, x + 2y ≤ 4, 3x + y ≤ 6 → (8/5, 6/5), value 14/5
        let c = vec![r(1, 1), r(1, 1)];
        let a = vec![vec![r(1, 1), r(2, 1)], vec![r(3, 1), r(1, 1)]];
        let b = vec![r(4, 1), r(6, 1)];
        assert_eq!(maximize(&c, &a, &b).unwrap(), LpOutcome::Optimal(r(14, 5)));
    }

    #[test]
    fn unbounded_lp() {
        let c = vec![r(1, 1), r(0, 1)];
        let a = vec![vec![r(-1, 1), r(1, 1)]];
        assert_eq!(maximize(&c, &a, &[r(1, 1)]).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn bland_terminates_on_beale() {
        // Beale's cycling example; the optimum is 5/4 at x4 = x6 = 1
        let c = vec![r(3, 4), r(-20, 1), r(1, 2), r(-6, 1)];
        let a = vec![
            vec![r(1, 4), r(-8, 1), r(-1, 1), r(9, 1)],
            vec![r(1, 2), r(-12, 1), r(-1, 2), r(3, 1)],
            vec![r(0, 1), r(0, 1), r(1, 1), r(0, 1)],
        ];
        let b = vec![r(0, 1), r(0, 1), r(1, 1)];
        assert_eq!(maximize(&c, &a, &b).unwrap(), LpOutcome::Optimal(r(5, 4)));
    }

    #[test]
    fn implication() {
        // x ≤ 0, y ≤ 0 imply x + y ≤ 0 but not x - y ≤ 0
        let rows: Vec<&[i64]> = vec![&[1, 0], &[0, 1]];
        assert!(implied(2, &[], &rows, &[1, 1]).unwrap());
        assert!(!implied(2, &[], &rows, &[1, -1]).unwrap());
        // with x + y = 0, x ≤ 0 implies -y ≤ 0
        assert!(implied(2, &[vec![1, 1]], &[&[1, 0]], &[0, -1]).unwrap());
    }

    #[test]
    fn prune_duplicates_and_vacuous() {
        let sys = HomogeneousSystem {
            vars: 2,
            equalities: vec![],
            fixed: vec![],
            inequalities: vec![vec![1, 0], vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
        };
        assert_eq!(prune_redundant(&sys, DEFAULT_LP_CAP).unwrap(), vec![2, 3]);
        assert!(matches!(prune_redundant(&sys, 10), Err(Error::LpTooLarge { .. })));
    }
}
