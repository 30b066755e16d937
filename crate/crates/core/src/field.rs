//! Dense matrices over a prime field `F_p` with `p < 2^32`.

use crate::error::{Error, Result};

/// `2^31 - 1`.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(Error::Invalid(format!("prime {p} must be below 2^32")));
        }
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-major dense matrix with entries in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    rows: usize,
    cols: usize,
    field: PrimeField,
    data: Vec<u64>,
}

impl PrimeFieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        PrimeFieldMatrix { rows, cols, field, data: vec![0; rows * cols] }
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::SizeMismatch("ragged matrix rows".into()));
        }
        let p = field.modulus();
        let data = rows.iter().flatten().map(|&v| v % p).collect();
        Ok(PrimeFieldMatrix { rows: rows.len(), cols, field, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.field.modulus();
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Row-echelon form in place; returns `(rank, determinant sign-and-pivot product)`.
    fn eliminate(&mut self) -> (usize, u64) {
        let f = self.field;
        let mut rank = 0;
        let mut det = 1 % f.modulus();
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(piv) = (rank..self.rows).find(|&r| self.get(r, c) != 0) else {
                det = 0;
                continue;
            };
            if piv != rank {
                for k in 0..self.cols {
                    self.data.swap(piv * self.cols + k, rank * self.cols + k);
                }
                det = f.neg(det);
            }
            let pv = self.get(rank, c);
            det = f.mul(det, pv);
            let inv = f.inv(pv);
            for r in rank + 1..self.rows {
                let factor = self.get(r, c);
                if factor == 0 {
                    continue;
                }
                let factor = f.mul(factor, inv);
                for k in c..self.cols {
                    let v = f.sub(self.get(r, k), f.mul(factor, self.get(rank, k)));
                    self.data[r * self.cols + k] = v;
                }
            }
            rank += 1;
        }
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().0
    }

    /// Determinant of a square matrix; `1` for the empty matrix.
    pub fn determinant(&self) -> Result<u64> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let (rank, det) = self.clone().eliminate();
        Ok(if rank == self.rows { det } else { 0 })
    }

    /// Dimension of the right kernel.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// `self · v`.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let f = self.field;
        (0..self.rows).map(|r| (0..self.cols).fold(0, |acc, c| f.add(acc, f.mul(self.get(r, c), v[c])))).collect()
    }
}
