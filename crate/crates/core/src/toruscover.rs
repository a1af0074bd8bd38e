//! Quandle cocycle invariants `Φ_p(S_m(b, Δ^e))` of torus-covering links.
//!
//! Three routes are provided. The direct route evaluates, per coloring, the
//! 2-cocycle invariant of `b̂` for the twist cocycle minus the double sum of
//! shadow invariants over the iterated colorings. The simplified route uses
//! `-m·e·Ψ*_p(b̂; C, 0)`. The closed form applies to power-block words and
//! needs no coloring enumeration at all.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bounds::{nu_vector, QuadraticForm};
use crate::braid::{BraidWord, PowerBlockWord};
use crate::cocycle::{shadow_invariant, twist_is_trivial, two_cocycle_invariant, TwistCocycle};
use crate::error::{Error, Result};
use crate::modp::{check_budget, Prime, Residue};
use crate::quandle::{coloring_space, delta_order, twist_acts_trivially, DihedralQuandle};

pub use crate::multiset::InvariantMultiset;

/// How the user-supplied `n` maps to the exponent of the full twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ExponentMode {
    /// `Δ^n`
    #[default]
    #[serde(rename = "raw")]
    Raw,
    /// `Δ^{l·n}` with `l = 2` for odd `m` and `l = p` for even `m`.
    #[serde(rename = "ln")]
    LTimes,
    /// `Δ^{2n}`
    #[serde(rename = "2n")]
    Twice,
}

impl ExponentMode {
    pub fn delta_exponent(self, m: usize, p: Prime, n: i64) -> i64 {
        match self {
            ExponentMode::Raw => n,
            ExponentMode::LTimes => delta_order(m, p) as i64 * n,
            ExponentMode::Twice => 2 * n,
        }
    }
}

impl fmt::Display for ExponentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExponentMode::Raw => "raw",
            ExponentMode::LTimes => "ln",
            ExponentMode::Twice => "2n",
        })
    }
}

impl FromStr for ExponentMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(ExponentMode::Raw),
            "ln" => Ok(ExponentMode::LTimes),
            "2n" => Ok(ExponentMode::Twice),
            other => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown exponent mode {other:?} (expected raw, ln or 2n)"),
            }),
        }
    }
}

/// The first basis braid, either as a plain word or as power blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisBraid {
    Word(BraidWord),
    Blocks(PowerBlockWord),
}

impl BasisBraid {
    pub fn degree(&self) -> usize {
        match self {
            BasisBraid::Word(w) => w.degree(),
            BasisBraid::Blocks(b) => b.degree(),
        }
    }

    pub fn word(&self, p: Prime) -> BraidWord {
        match self {
            BasisBraid::Word(w) => w.clone(),
            BasisBraid::Blocks(b) => b.expand(p),
        }
    }

    pub fn blocks(&self) -> Option<&PowerBlockWord> {
        match self {
            BasisBraid::Blocks(b) => Some(b),
            BasisBraid::Word(_) => None,
        }
    }
}

/// `S_m(b, Δ^e)` with `e` derived from `(n, mode)`. `Δ` is central, so the two
/// basis braids always commute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusCoveringKnot {
    pub basis: BasisBraid,
    pub p: Prime,
    pub n: i64,
    pub mode: ExponentMode,
}

impl TorusCoveringKnot {
    pub fn new(basis: BasisBraid, p: Prime, n: i64, mode: ExponentMode) -> Self {
        TorusCoveringKnot { basis, p, n, mode }
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn delta_exponent(&self) -> i64 {
        self.mode.delta_exponent(self.degree(), self.p, self.n)
    }

    pub fn word(&self) -> BraidWord {
        self.basis.word(self.p)
    }

    /// Whether the closure of the first basis braid is a knot.
    pub fn is_knot(&self) -> bool {
        self.word().is_knot()
    }
}

fn require_trivial_twist(m: usize, e: i64, p: Prime) -> Result<()> {
    if twist_acts_trivially(m, e, p) {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!(
            "A_Δ^{e} is not the identity for m={m}, p={p}"
        )))
    }
}

/// `Φ_p(S_m(b, Δ^e))` by the direct double sum.
pub fn phi_direct(b: &BraidWord, e: i64, p: Prime, cap: u64) -> Result<InvariantMultiset> {
    if e < 0 {
        return Ok(phi_direct(b, -e, p, cap)?.negated());
    }
    let m = b.degree();
    require_trivial_twist(m, e, p)?;
    let space = coloring_space(b, p);
    check_budget(p.as_u64(), space.dimension(), cap)?;
    let q = DihedralQuandle::new(p);
    let mut ms = InvariantMultiset::new(p);
    for c in space.iter() {
        // y = x_1 x_2 ⋯ x_e with x_{j+1} = R_{x_j}(x_j)
        let mut y = Vec::with_capacity(m * e as usize);
        let mut cur = c.clone();
        for _ in 0..e {
            y.extend_from_slice(&cur);
            cur = cur.iter().map(|&v| q.fold(v, &cur)).collect();
        }
        if !twist_is_trivial(&y, p) {
            return Err(Error::Internal(format!(
                "R_y is not the identity for coloring {c:?}"
            )));
        }
        let f = TwistCocycle::new(y, p);
        let mut value = two_cocycle_invariant(b, &c, |s, t| f.eval(s, t), p)?;
        // shifted = R_x^j(C); its i-th entry is R_x^j(x_i)
        let mut shifted = c.clone();
        for _ in 0..e {
            for i in 0..m {
                value = p.sub(value, shadow_invariant(b, &shifted, shifted[i], p)?);
            }
            shifted = shifted.iter().map(|&v| q.fold(v, &c)).collect();
        }
        ms.insert(value);
    }
    Ok(ms)
}

/// `Φ_p(S_m(b, Δ^e)) = {-m·e·Ψ*_p(b̂; C, 0)}`.
pub fn phi_simplified(b: &BraidWord, e: i64, p: Prime, cap: u64) -> Result<InvariantMultiset> {
    let m = b.degree();
    require_trivial_twist(m, e, p)?;
    let space = coloring_space(b, p);
    check_budget(p.as_u64(), space.dimension(), cap)?;
    let coef = p.reduce(-(m as i64) * e);
    let mut ms = InvariantMultiset::new(p);
    for c in space.iter() {
        let v = if coef == 0 {
            0
        } else {
            p.mul(coef, shadow_invariant(b, &c, 0, p)?)
        };
        ms.insert(v);
    }
    Ok(ms)
}

/// Closed form for `Φ_p(S_m(w, Δ^{2n}))` with `w` a power-block word:
/// `p` copies of `2mn·Σ ν_i y_i²` for each `y ∈ (Z/pZ)^{m-1}`.
pub fn phi_power_block(w: &PowerBlockWord, n: i64, p: Prime) -> InvariantMultiset {
    let m = w.degree() as i64;
    let form = QuadraticForm::new(nu_vector(w, p), p);
    let coef = p.reduce(2 * m * (n % p.as_u64() as i64));
    let mut ms = InvariantMultiset::new(p);
    for (v, count) in form.value_counts().into_iter().enumerate() {
        ms.insert_many(p.mul(coef, v as Residue), count * p.as_u64());
    }
    ms
}

/// Closed form for `Ψ*_p(ŵ)` with `w` a power-block word: `p²` copies of
/// `-Σ ν_i y_i²` for each `y`.
pub fn shadow_power_block(w: &PowerBlockWord, p: Prime) -> InvariantMultiset {
    let form = QuadraticForm::new(nu_vector(w, p), p);
    let mut ms = InvariantMultiset::new(p);
    for (v, count) in form.value_counts().into_iter().enumerate() {
        ms.insert_many(p.neg(v as Residue), count * p.squared());
    }
    ms
}

/// Number of zeros in a multiset.
pub fn a0(ms: &InvariantMultiset) -> BigUint {
    ms.a0()
}
