//! Arithmetic over Z/pZ and Z/p²Z, dense matrices over Z/pZ, and
//! quadratic residuosity.
//!
//! Residues are plain `u32` values kept in `[0, p)`. The prime is capped at
//! 2^15 so that every product of two residues modulo p² fits in a `u64`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Residue = u32;

/// Largest admissible modulus (exclusive).
pub const PRIME_LIMIT: u32 = 1 << 15;

/// An odd prime `3 <= p < 2^15`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p >= PRIME_LIMIT as u64 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_u64(self) -> u64 {
        self.0 as u64
    }

    #[inline]
    pub fn squared(self) -> u64 {
        self.as_u64() * self.as_u64()
    }

    /// Reduces any signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, x: i64) -> Residue {
        x.rem_euclid(self.0 as i64) as Residue
    }

    #[inline]
    pub fn add(self, a: Residue, b: Residue) -> Residue {
        ((a as u64 + b as u64) % self.as_u64()) as Residue
    }

    #[inline]
    pub fn sub(self, a: Residue, b: Residue) -> Residue {
        ((a as u64 + self.as_u64() - b as u64) % self.as_u64()) as Residue
    }

    #[inline]
    pub fn mul(self, a: Residue, b: Residue) -> Residue {
        ((a as u64 * b as u64) % self.as_u64()) as Residue
    }

    #[inline]
    pub fn neg(self, a: Residue) -> Residue {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: Residue) -> Option<Residue> {
        if a.is_multiple_of(self.0) {
            None
        } else {
            Some(pow_mod(a as u64, self.as_u64() - 2, self.as_u64()) as Residue)
        }
    }

    /// Whether `n` is divisible by p.
    #[inline]
    pub fn divides(self, n: i64) -> bool {
        n.rem_euclid(self.0 as i64) == 0
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.as_u64()
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `base^exp mod modulus` by square-and-multiply. `modulus` must be at least 2
/// and below 2^32.
pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    debug_assert!(modulus >= 2);
    let mut result = 1 % modulus;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % modulus;
        }
        b = b * b % modulus;
        exp >>= 1;
    }
    result
}

/// Default enumeration budget.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// `base^exponent` if it is at most `cap`, otherwise a budget error.
pub fn check_budget(base: u64, exponent: usize, cap: u64) -> Result<u64> {
    match base.checked_pow(exponent as u32) {
        Some(n) if n <= cap => Ok(n),
        _ => Err(Error::BudgetExceeded {
            needed: num_bigint::BigUint::from(base)
                .pow(exponent as u32)
                .to_string(),
            cap,
        }),
    }
}

/// Outcome of a quadratic residuosity test modulo an odd prime. Zero is kept
/// apart from both residues and nonresidues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Residuosity {
    Zero,
    Residue,
    NonResidue,
}

impl Residuosity {
    pub fn is_nonzero_residue(self) -> bool {
        self == Residuosity::Residue
    }
}

/// Euler's criterion: `a^((p-1)/2) mod p`.
pub fn is_quadratic_residue(a: Residue, p: Prime) -> Residuosity {
    let a = a % p.get();
    if a == 0 {
        return Residuosity::Zero;
    }
    match pow_mod(a as u64, (p.as_u64() - 1) / 2, p.as_u64()) {
        1 => Residuosity::Residue,
        _ => Residuosity::NonResidue,
    }
}

/// A square root of a nonzero quadratic residue, found by search.
pub fn sqrt_mod(a: Residue, p: Prime) -> Option<Residue> {
    let a = a % p.get();
    (0..p.get()).find(|&x| p.mul(x, x) == a)
}

/// Dense row-major matrix over Z/pZ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixModP {
    rows: usize,
    cols: usize,
    entries: Vec<Residue>,
    p: Prime,
}

impl MatrixModP {
    pub fn zeros(rows: usize, cols: usize, p: Prime) -> Self {
        MatrixModP {
            rows,
            cols,
            entries: vec![0; rows * cols],
            p,
        }
    }

    pub fn identity(n: usize, p: Prime) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed rows, reducing every entry mod p.
    pub fn from_rows(rows: &[Vec<i64>], p: Prime) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| p.reduce(x)));
        }
        Ok(MatrixModP {
            rows: rows.len(),
            cols,
            entries,
            p,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Residue {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Residue) {
        self.entries[r * self.cols + c] = v % self.p.get();
    }

    pub fn row(&self, r: usize) -> &[Residue] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Residue>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    pub fn mul(&self, other: &MatrixModP) -> MatrixModP {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        assert_eq!(self.p, other.p, "matrix product over different primes");
        let p = self.p.as_u64();
        let mut out = MatrixModP::zeros(self.rows, other.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] =
                        ((out.entries[idx] as u64 + a * other.get(k, j) as u64) % p) as Residue;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Residue]) -> Vec<Residue> {
        assert_eq!(v.len(), self.cols);
        let p = self.p.as_u64();
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &x)| (acc + a as u64 * x as u64) % p)
                    as Residue
            })
            .collect()
    }

    /// Non-negative matrix power by repeated squaring.
    pub fn pow(&self, mut exp: u64) -> MatrixModP {
        assert_eq!(self.rows, self.cols);
        let mut result = MatrixModP::identity(self.rows, self.p);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `self - I` for a square matrix.
    pub fn minus_identity(&self) -> MatrixModP {
        assert_eq!(self.rows, self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = self.p.sub(out.get(i, i), 1);
            out.set(i, i, v);
        }
        out
    }

    /// Reduced row-echelon form together with its pivot columns.
    pub fn rref(&self) -> (MatrixModP, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(src) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(row, src);
            let inv = p.inv(m.get(row, col)).expect("nonzero pivot");
            for c in col..m.cols {
                let v = p.mul(m.get(row, c), inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                let factor = m.get(r, col);
                if r == row || factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = p.sub(m.get(r, c), p.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Determinant of a square matrix by elimination.
    pub fn determinant(&self) -> Residue {
        assert_eq!(self.rows, self.cols);
        let p = self.p;
        let mut m = self.clone();
        let mut det: Residue = 1;
        for col in 0..m.cols {
            let Some(src) = (col..m.rows).find(|&r| m.get(r, col) != 0) else {
                return 0;
            };
            if src != col {
                m.swap_rows(col, src);
                det = p.neg(det);
            }
            let pivot = m.get(col, col);
            det = p.mul(det, pivot);
            let inv = p.inv(pivot).expect("nonzero pivot");
            for r in col + 1..m.rows {
                let factor = p.mul(m.get(r, col), inv);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = p.sub(m.get(r, c), p.mul(factor, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        det
    }
}

/// Basis of `{v : Mv = 0}` in canonical form: the basis vectors, stacked as
/// rows, form a matrix in reduced row-echelon form.
pub fn kernel_basis(m: &MatrixModP) -> Vec<Vec<Residue>> {
    let p = m.prime();
    let (reduced, pivots) = m.rref();
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return Vec::new();
    }
    let raw: Vec<Vec<i64>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![0i64; m.cols()];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = p.neg(reduced.get(r, f)) as i64;
            }
            v
        })
        .collect();
    let stacked = MatrixModP::from_rows(&raw, p).expect("rows share a length");
    let (canonical, _) = stacked.rref();
    canonical.to_rows()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(3).is_ok());
        assert!(Prime::new(32749).is_ok());
        for bad in [0, 1, 2, 4, 9, 15, 32768, 65537] {
            assert_eq!(Prime::new(bad), Err(Error::InvalidPrime(bad)));
        }
    }

    #[test]
    fn pow_mod_examples() {
        assert_eq!(pow_mod(2, 3, 9), 8);
        assert_eq!(pow_mod(7, 0, 11), 1);
        assert_eq!(pow_mod(0, 0, 11), 1);
        // 5^7 = 78125 = 49 * 1594 + 19; only the reduction mod 7 is 5
        let mut acc = 1u64;
        for _ in 0..7 {
            acc = acc * 5 % 49;
        }
        assert_eq!(acc, 19);
        assert_eq!(pow_mod(5, 7, 49), 19);
        assert_eq!(pow_mod(5, 7, 49) % 7, 5);
    }

    #[test]
    fn residuosity_examples() {
        assert_eq!(is_quadratic_residue(1, p(7)), Residuosity::Residue);
        assert_eq!(is_quadratic_residue(6, p(7)), Residuosity::NonResidue);
        assert_eq!(is_quadratic_residue(3, p(11)), Residuosity::Residue);
        assert_eq!(is_quadratic_residue(0, p(11)), Residuosity::Zero);
    }

    #[test]
    fn residuosity_matches_squaring() {
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let q = p(q);
            let squares: Vec<Residue> = (1..q.get()).map(|x| q.mul(x, x)).collect();
            for a in 0..q.get() {
                let expected = if a == 0 {
                    Residuosity::Zero
                } else if squares.contains(&a) {
                    Residuosity::Residue
                } else {
                    Residuosity::NonResidue
                };
                assert_eq!(is_quadratic_residue(a, q), expected, "a={a} p={q}");
            }
        }
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        let q = p(3);
        let zero = MatrixModP::zeros(2, 2, q);
        assert_eq!(kernel_basis(&zero), vec![vec![1, 0], vec![0, 1]]);
        assert!(kernel_basis(&MatrixModP::identity(2, q)).is_empty());
    }

    #[test]
    fn kernel_rank_one() {
        let q = p(3);
        let m = MatrixModP::from_rows(&[vec![1, 1], vec![2, 2]], q).unwrap();
        // brute force: the only nonzero solutions are (1,2) and (2,1)
        let sols: Vec<(u32, u32)> = (0..3)
            .flat_map(|a| (0..3).map(move |b| (a, b)))
            .filter(|&(a, b)| (a + b) % 3 == 0)
            .collect();
        assert_eq!(sols, vec![(0, 0), (1, 2), (2, 1)]);
        assert_eq!(kernel_basis(&m), vec![vec![1, 2]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn determinant_and_pow() {
        let q = p(5);
        let a = MatrixModP::from_rows(&[vec![0, 1], vec![-1, 2]], q).unwrap();
        assert_eq!(a.determinant(), 1);
        assert!(a.pow(5).is_identity());
        assert!(!a.pow(4).is_identity());
        let swap = MatrixModP::from_rows(&[vec![0, 1], vec![1, 0]], q).unwrap();
        assert_eq!(swap.determinant(), 4);
    }

    #[test]
    fn shifted_square_sets_have_half_plus_one_elements() {
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let q = p(q);
            for n in 1..q.get() {
                for shift in 0..q.get() {
                    let mut seen = vec![false; q.get() as usize];
                    for x in 0..q.get() {
                        seen[q.add(q.mul(n, q.mul(x, x)), shift) as usize] = true;
                    }
                    let count = seen.iter().filter(|&&b| b).count();
                    assert_eq!(count as u32, q.get().div_ceil(2));
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix() -> impl Strategy<Value = (MatrixModP, u32)> {
            (prop::sample::select(vec![3u64, 5]), 1usize..=4, 1usize..=4).prop_flat_map(
                |(q, rows, cols)| {
                    prop::collection::vec(0i64..q as i64, rows * cols).prop_map(move |flat| {
                        let rs: Vec<Vec<i64>> = flat.chunks(cols).map(|c| c.to_vec()).collect();
                        (MatrixModP::from_rows(&rs, p(q)).unwrap(), q as u32)
                    })
                },
            )
        }

        proptest! {
            #[test]
            fn kernel_matches_brute_force((m, q) in small_matrix()) {
                let basis = kernel_basis(&m);
                prop_assert_eq!(basis.len(), m.cols() - m.rank());
                for v in &basis {
                    prop_assert!(m.apply(v).iter().all(|&x| x == 0));
                }
                let mut count = 0u64;
                let total = (q as u64).pow(m.cols() as u32);
                for idx in 0..total {
                    let mut v = Vec::with_capacity(m.cols());
                    let mut r = idx;
                    for _ in 0..m.cols() {
                        v.push((r % q as u64) as u32);
                        r /= q as u64;
                    }
                    if m.apply(&v).iter().all(|&x| x == 0) {
                        count += 1;
                    }
                }
                prop_assert_eq!(count, (q as u64).pow(basis.len() as u32));
                // canonical form: the stacked basis is its own RREF
                if !basis.is_empty() {
                    let rows: Vec<Vec<i64>> = basis.iter().map(|v| v.iter().map(|&x| x as i64).collect()).collect();
                    let stacked = MatrixModP::from_rows(&rows, m.prime()).unwrap();
                    prop_assert_eq!(stacked.rref().0, stacked);
                }
            }
        }
    }
}
