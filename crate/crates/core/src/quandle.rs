//! The dihedral quandle `R_p`, the braid action on strand colors, and the
//! space of p-colorings of a closed braid.
//!
//! `A_b` acts on the colors of the initial arcs. A word is read left to
//! right, so `A_{σ b₁} = A_{b₁} ∘ A_σ`: the first letter acts first. At a
//! letter `σ_i` the strand at position `i+1` passes over and keeps its color.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::braid::{full_twist, BraidWord, Letter, Sign};
use crate::error::{Error, Result};
use crate::modp::{kernel_basis, MatrixModP, Prime, Residue};

/// `R_p = Z/pZ` with `x * y = 2y - x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralQuandle {
    p: Prime,
}

impl DihedralQuandle {
    pub fn new(p: Prime) -> Self {
        DihedralQuandle { p }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn op(&self, x: Residue, y: Residue) -> Residue {
        self.p.sub(self.p.add(y, y), x)
    }

    /// `x *̄ y`; the dihedral operation is an involution in `x`, so this is `x * y`.
    #[inline]
    pub fn op_inv(&self, x: Residue, y: Residue) -> Residue {
        self.op(x, y)
    }

    /// `R_{y_k} ∘ ⋯ ∘ R_{y_1}` applied to `x`.
    pub fn fold(&self, x: Residue, ys: &[Residue]) -> Residue {
        ys.iter().fold(x, |acc, &y| self.op(acc, y))
    }
}

/// `R_{(y_1, …, y_k)}(x)`, applying `R_{y_1}` first.
pub fn fold(x: Residue, ys: &[Residue], p: Prime) -> Residue {
    DihedralQuandle::new(p).fold(x, ys)
}

/// Applies one letter to the strand colors in place.
#[inline]
pub fn act_letter(colors: &mut [Residue], letter: Letter, q: &DihedralQuandle) {
    let i = letter.index - 1;
    let (a, c) = (colors[i], colors[i + 1]);
    match letter.sign {
        Sign::Pos => {
            colors[i] = c;
            colors[i + 1] = q.op(a, c);
        }
        Sign::Neg => {
            colors[i] = q.op_inv(c, a);
            colors[i + 1] = a;
        }
    }
}

/// `A_b(x)` by walking the word.
pub fn act(b: &BraidWord, colors: &[Residue], p: Prime) -> Vec<Residue> {
    let q = DihedralQuandle::new(p);
    let mut z = colors.to_vec();
    for &l in b.letters() {
        act_letter(&mut z, l, &q);
    }
    z
}

fn letter_matrix(m: usize, letter: Letter, p: Prime) -> MatrixModP {
    let mut a = MatrixModP::identity(m, p);
    let i = letter.index - 1;
    a.set(i, i, 0);
    a.set(i + 1, i + 1, 0);
    match letter.sign {
        // (…, x_{i+1}, 2x_{i+1} - x_i, …)
        Sign::Pos => {
            a.set(i, i + 1, 1);
            a.set(i + 1, i, p.neg(1));
            a.set(i + 1, i + 1, 2 % p.get());
        }
        // (…, 2x_i - x_{i+1}, x_i, …)
        Sign::Neg => {
            a.set(i, i, 2 % p.get());
            a.set(i, i + 1, p.neg(1));
            a.set(i + 1, i, 1);
        }
    }
    a
}

/// Matrix of `A_b` over Z/pZ.
pub fn action_matrix(b: &BraidWord, p: Prime) -> MatrixModP {
    let m = b.degree();
    b.letters()
        .iter()
        .fold(MatrixModP::identity(m, p), |acc, &l| {
            letter_matrix(m, l, p).mul(&acc)
        })
}

/// `Col_p` of a closed braid as a subspace of `(Z/pZ)^m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringSpace {
    pub p: Prime,
    pub degree: usize,
    pub basis: Vec<Vec<Residue>>,
}

impl ColoringSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `p^k`.
    pub fn size(&self) -> BigUint {
        BigUint::from(self.p.get()).pow(self.dimension() as u32)
    }

    /// `p^k` if it fits in a `u64`.
    pub fn size_u64(&self) -> Option<u64> {
        self.p.as_u64().checked_pow(self.dimension() as u32)
    }

    pub fn contains(&self, v: &[Residue]) -> bool {
        if v.len() != self.degree {
            return false;
        }
        // basis rows are in RREF: reduce v by them and test for zero
        let p = self.p;
        let mut r = v.to_vec();
        for row in &self.basis {
            let pivot = row
                .iter()
                .position(|&x| x != 0)
                .expect("basis rows are nonzero");
            let c = r[pivot];
            if c != 0 {
                for (x, &b) in r.iter_mut().zip(row) {
                    *x = p.sub(*x, p.mul(c, b));
                }
            }
        }
        r.iter().all(|&x| x == 0)
    }

    /// Every coloring, in lexicographic order of basis coefficients.
    pub fn iter(&self) -> impl Iterator<Item = Vec<Residue>> + '_ {
        let p = self.p;
        let k = self.dimension();
        let mut coeffs = vec![0u32; k];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let mut v = vec![0u32; self.degree];
            for (c, row) in coeffs.iter().zip(&self.basis) {
                if *c == 0 {
                    continue;
                }
                for (x, &b) in v.iter_mut().zip(row) {
                    *x = p.add(*x, p.mul(*c, b));
                }
            }
            // odometer increment, last coefficient fastest
            let mut i = k;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < p.get() {
                    break;
                }
                coeffs[i] = 0;
            }
            Some(v)
        })
    }
}

/// Kernel of `A_b - I`.
pub fn coloring_space(b: &BraidWord, p: Prime) -> ColoringSpace {
    let basis = kernel_basis(&action_matrix(b, p).minus_identity());
    ColoringSpace {
        p,
        degree: b.degree(),
        basis,
    }
}

/// The order `l` with `A_Δ^l = I`: 2 for odd `m`, p for even `m`. The claim is
/// checked by a matrix power before returning.
pub fn delta_order_check(m: usize, p: Prime) -> Result<u64> {
    if m < 2 {
        return Err(Error::Hypothesis(
            "full twist needs at least 2 strands".into(),
        ));
    }
    let l = delta_order(m, p);
    let a = action_matrix(&full_twist(m, 1), p);
    if !a.pow(l).is_identity() {
        return Err(Error::Internal(format!(
            "A_Δ^{l} is not the identity for m={m}, p={p}"
        )));
    }
    Ok(l)
}

/// 2 for odd `m`, p for even `m`, without verification.
pub fn delta_order(m: usize, p: Prime) -> u64 {
    if m % 2 == 1 {
        2
    } else {
        p.as_u64()
    }
}

/// Whether `A_Δ^e = I` on `(Z/pZ)^m`.
pub fn twist_acts_trivially(m: usize, e: i64, p: Prime) -> bool {
    action_matrix(&full_twist(m, 1), p)
        .pow(e.unsigned_abs())
        .is_identity()
}
