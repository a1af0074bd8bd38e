//! Unknotting number and triple point cancelling number bounds for
//! `S_m(b, Δ^e)`.
//!
//! Each bound is attached to a [`BoundRule`] and fires only when every one of
//! its hypotheses checks out. Rules that do not fire are still reported with
//! the hypotheses that failed.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::braid::PowerBlockWord;
use crate::cocycle::shadow_multiset;
use crate::error::{Error, Result};
use crate::modp::{check_budget, is_quadratic_residue, Prime, Residue};
use crate::quandle::{coloring_space, delta_order_check};
use crate::toruscover::{shadow_power_block, BasisBraid, ExponentMode, TorusCoveringKnot};

/// `ν_i`: block multiples on generator `i`, summed and reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuVector(pub Vec<Residue>);

impl NuVector {
    pub fn as_slice(&self) -> &[Residue] {
        &self.0
    }

    pub fn all_nonzero(&self) -> bool {
        self.0.iter().all(|&v| v != 0)
    }
}

pub fn nu_vector(w: &PowerBlockWord, p: Prime) -> NuVector {
    NuVector(w.multiple_sums().into_iter().map(|c| p.reduce(c)).collect())
}

/// `g(y) = Σ ν_i y_i²` over Z/pZ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    nu: NuVector,
    p: Prime,
}

impl QuadraticForm {
    pub fn new(nu: NuVector, p: Prime) -> Self {
        QuadraticForm { nu, p }
    }

    pub fn nu(&self) -> &NuVector {
        &self.nu
    }

    pub fn arity(&self) -> usize {
        self.nu.0.len()
    }

    pub fn eval(&self, y: &[Residue]) -> Residue {
        let p = self.p;
        self.nu
            .0
            .iter()
            .zip(y)
            .fold(0, |acc, (&n, &v)| p.add(acc, p.mul(n, p.mul(v, v))))
    }

    /// `counts[v] = #{y ∈ (Z/pZ)^{m-1} : g(y) = v}`, by convolving the value
    /// distribution of each term.
    pub fn value_counts(&self) -> Vec<BigUint> {
        let p = self.p;
        let size = p.get() as usize;
        let mut dist = vec![BigUint::zero(); size];
        dist[0] = BigUint::from(1u32);
        for &n in &self.nu.0 {
            let mut term = vec![0u64; size];
            for y in 0..p.get() {
                term[p.mul(n, p.mul(y, y)) as usize] += 1;
            }
            let mut next = vec![BigUint::zero(); size];
            for (a, da) in dist.iter().enumerate() {
                if da.is_zero() {
                    continue;
                }
                for (b, &tb) in term.iter().enumerate() {
                    if tb != 0 {
                        next[(a + b) % size] += da * tb;
                    }
                }
            }
            dist = next;
        }
        dist
    }

    /// Whether some `y` with nonzero entries exactly on `support` has `g(y) = 0`.
    fn zero_on_support(&self, support: &[usize]) -> bool {
        let p = self.p;
        let size = p.get() as usize;
        let mut reachable = vec![false; size];
        reachable[0] = true;
        for &i in support {
            let mut terms = vec![false; size];
            for y in 1..p.get() {
                terms[p.mul(self.nu.0[i], p.mul(y, y)) as usize] = true;
            }
            let mut next = vec![false; size];
            for a in (0..size).filter(|&a| reachable[a]) {
                for b in (0..size).filter(|&b| terms[b]) {
                    next[(a + b) % size] = true;
                }
            }
            reachable = next;
        }
        reachable[0]
    }
}

/// Minimal number of nonzero coordinates of a zero of `g`, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimalSupport {
    Size(usize),
    Unattainable,
}

impl fmt::Display for MinimalSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimalSupport::Size(j) => write!(f, "{j}"),
            MinimalSupport::Unattainable => f.write_str("none"),
        }
    }
}

/// Smallest `j` such that `g` vanishes somewhere on `U_j`, the vectors with
/// exactly `j` nonzero entries.
pub fn p_prime(q: &QuadraticForm) -> MinimalSupport {
    let n = q.arity();
    for j in 1..=n {
        if (0..n).combinations(j).any(|s| q.zero_on_support(&s)) {
            return MinimalSupport::Size(j);
        }
    }
    MinimalSupport::Unattainable
}

/// Minimal `k'` with `a0 < p^{k'}`.
pub fn k_prime(a0: &BigUint, p: Prime) -> u32 {
    let mut j = 0u32;
    let mut power = BigUint::from(1u32);
    while &power <= a0 {
        power *= p.get();
        j += 1;
    }
    j
}

/// The individual bounds, named by the invariant they rest on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundRule {
    /// `u ≤ m - 1` for every `b` and every exponent.
    DegreeUpper,
    /// `u ≥ k - 1` for knot closures and exponent `l·n`.
    ColoringDimension,
    /// `u = m - 1` for power-block knots and exponent `l·n`.
    PowerBlockExact,
    /// `τ ≥ k - k' + 2` from the zero count of the shadow invariant.
    ShadowZeroCount,
    /// `τ ≥ (m - 1)/2` when every `ν_i` is a nonzero square.
    SquareWeights,
    /// `τ = u = 2` for three strands when `g` has no zero on `U_2`.
    AnisotropicPair,
    /// `τ = u = 2` for three strands, `p ≡ 3 mod 4`, square weights.
    ThreeModFour,
}

impl fmt::Display for BoundRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundRule::DegreeUpper => "degree_upper",
            BoundRule::ColoringDimension => "coloring_dimension",
            BoundRule::PowerBlockExact => "power_block_exact",
            BoundRule::ShadowZeroCount => "shadow_zero_count",
            BoundRule::SquareWeights => "square_weights",
            BoundRule::AnisotropicPair => "anisotropic_pair",
            BoundRule::ThreeModFour => "three_mod_four",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCheck {
    pub rule: BoundRule,
    pub fired: bool,
    /// The bound this rule yields when it fires.
    pub value: Option<i64>,
    pub hypotheses: Vec<Hypothesis>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundValue {
    pub rule: BoundRule,
    pub value: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordForm {
    Word,
    Blocks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub degree: usize,
    pub p: Prime,
    pub n: i64,
    pub mode: ExponentMode,
    pub delta_exponent: i64,
    pub l: u64,
    pub word_form: WordForm,
    pub k: usize,
    pub components: usize,
    pub is_knot: bool,
    pub nu: Option<NuVector>,
    pub p_prime: Option<MinimalSupport>,
    #[serde(with = "opt_decimal")]
    pub a0_shadow: Option<BigUint>,
    pub k_prime: Option<u32>,
    pub u_upper: i64,
    pub u_lower: Option<BoundValue>,
    pub u_exact: Option<i64>,
    pub tau_lower: Vec<BoundValue>,
    pub tau_exact: Option<i64>,
    pub checks: Vec<RuleCheck>,
    pub notes: Vec<String>,
}

impl BoundsReport {
    pub fn check(&self, rule: BoundRule) -> &RuleCheck {
        self.checks
            .iter()
            .find(|c| c.rule == rule)
            .expect("every rule is evaluated")
    }

    pub fn fired(&self, rule: BoundRule) -> bool {
        self.check(rule).fired
    }

    /// Best lower bound on `τ` among the rules that fired.
    pub fn tau_best(&self) -> Option<i64> {
        self.tau_lower.iter().map(|b| b.value).max()
    }
}

mod opt_decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(n) => s.serialize_some(&n.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        let v: Option<String> = Option::deserialize(d)?;
        v.map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

struct RuleBuilder {
    rule: BoundRule,
    hypotheses: Vec<Hypothesis>,
}

impl RuleBuilder {
    fn new(rule: BoundRule) -> Self {
        RuleBuilder {
            rule,
            hypotheses: Vec::new(),
        }
    }

    fn require(mut self, name: impl Into<String>, holds: bool) -> Self {
        self.hypotheses.push(Hypothesis {
            name: name.into(),
            holds,
        });
        self
    }

    fn all_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }

    fn finish(self, value: i64) -> RuleCheck {
        let fired = self.all_hold();
        RuleCheck {
            rule: self.rule,
            fired,
            value: fired.then_some(value),
            hypotheses: self.hypotheses,
        }
    }
}

/// Evaluates every bound for `input`. Enumeration is only needed for the zero
/// count of the shadow invariant of a plain word; `cap` bounds it.
pub fn bounds_report(input: &TorusCoveringKnot, cap: u64) -> Result<BoundsReport> {
    let p = input.p;
    let m = input.degree();
    if m < 2 {
        return Err(Error::Hypothesis("bounds need at least 2 strands".into()));
    }
    let word = input.word();
    let e = input.delta_exponent();
    let l = delta_order_check(m, p)?;
    let k = coloring_space(&word, p).dimension();
    let components = word.closure_components();
    let is_knot = components == 1;
    let blocks = input.basis.blocks();
    let nu = blocks.map(|w| nu_vector(w, p));
    let form = nu.clone().map(|v| QuadraticForm::new(v, p));
    let pp = form.as_ref().map(p_prime);

    let m_i = m as i64;
    let p_i = p.as_u64() as i64;
    let e_multiple_of_l = e.rem_euclid(l as i64) == 0;
    let doubled = e % 2 == 0;
    let half_unit = doubled && !p.divides(e / 2);
    let m_odd = m % 2 == 1;
    let m_unit = !p.divides(m_i);
    let nu_nonzero = nu.as_ref().is_some_and(NuVector::all_nonzero);
    let nu_squares = nu.as_ref().is_some_and(|v| {
        v.0.iter()
            .all(|&x| is_quadratic_residue(x, p).is_nonzero_residue())
    });
    let mut notes = Vec::new();

    let degree_upper = RuleBuilder::new(BoundRule::DegreeUpper).finish(m_i - 1);

    let coloring_dimension = RuleBuilder::new(BoundRule::ColoringDimension)
        .require("closure is a knot", is_knot)
        .require(
            format!("Δ exponent {e} is a multiple of l={l}"),
            e_multiple_of_l,
        )
        .finish(k as i64 - 1);

    let power_block_exact = RuleBuilder::new(BoundRule::PowerBlockExact)
        .require("word is in power-block form", blocks.is_some())
        .require("closure is a knot", is_knot)
        .require(
            format!("Δ exponent {e} is a multiple of l={l}"),
            e_multiple_of_l,
        )
        .finish(m_i - 1);

    let shadow_rule = RuleBuilder::new(BoundRule::ShadowZeroCount)
        .require("m is odd", m_odd)
        .require(format!("m={m} is nonzero mod {p}"), m_unit)
        .require(format!("Δ exponent {e} is 2n"), doubled)
        .require(format!("n={} is nonzero mod {p}", e / 2), half_unit);
    let a0_shadow = match blocks {
        Some(w) => Some(shadow_power_block(w, p).a0()),
        None if shadow_rule.all_hold() => Some(shadow_multiset(&word, p, cap)?.a0()),
        None => match check_budget(p.as_u64(), k + 1, cap) {
            Ok(_) => Some(shadow_multiset(&word, p, cap)?.a0()),
            Err(_) => None,
        },
    };
    let kp = a0_shadow.as_ref().map(|a| k_prime(a, p));
    if a0_shadow.as_ref().is_some_and(Zero::is_zero) {
        notes.push("shadow invariant has no zeros; k' taken as 0".into());
    }
    let shadow_zero_count = shadow_rule.finish(k as i64 - kp.unwrap_or(0) as i64 + 2);

    let square_weights = RuleBuilder::new(BoundRule::SquareWeights)
        .require("m is odd", m_odd)
        .require(format!("m={m} is nonzero mod {p}"), m_unit)
        .require(format!("Δ exponent {e} is 2n"), doubled)
        .require(format!("n={} is nonzero mod {p}", e / 2), half_unit)
        .require("word is in power-block form", blocks.is_some())
        .require("closure is a knot", is_knot)
        .require("every ν_i is a nonzero square", nu_squares)
        .finish((m_i - 1) / 2);

    let anisotropic_pair = RuleBuilder::new(BoundRule::AnisotropicPair)
        .require("m = 3", m == 3)
        .require(format!("p={p} > 3"), p_i > 3)
        .require("word is in power-block form", blocks.is_some())
        .require("closure is a knot", is_knot)
        .require("ν_1, ν_2 are nonzero", nu_nonzero)
        .require(
            format!(
                "p'={} differs from 2",
                pp.map_or("n/a".to_string(), |v| v.to_string())
            ),
            pp.is_some_and(|v| v != MinimalSupport::Size(2)),
        )
        .require(format!("Δ exponent {e} is 2n"), doubled)
        .require(format!("n={} is nonzero mod {p}", e / 2), half_unit)
        .finish(2);

    let three_mod_four = RuleBuilder::new(BoundRule::ThreeModFour)
        .require(format!("p={p} > 3"), p_i > 3)
        .require(format!("p={p} ≡ 3 mod 4"), p_i % 4 == 3)
        .require("m = 3", m == 3)
        .require("word is in power-block form", blocks.is_some())
        .require("closure is a knot", is_knot)
        .require("every ν_i is a nonzero square", nu_squares)
        .require(format!("Δ exponent {e} is 2n"), doubled)
        .require(format!("n={} is nonzero mod {p}", e / 2), half_unit)
        .finish(2);

    let checks = vec![
        degree_upper,
        coloring_dimension,
        power_block_exact,
        shadow_zero_count,
        square_weights,
        anisotropic_pair,
        three_mod_four,
    ];

    let fired_value = |rule: BoundRule| {
        checks
            .iter()
            .find(|c| c.rule == rule && c.fired)
            .and_then(|c| c.value)
            .map(|value| BoundValue { rule, value })
    };

    let u_upper = m_i - 1;
    let u_lower = [
        BoundRule::ColoringDimension,
        BoundRule::PowerBlockExact,
        BoundRule::AnisotropicPair,
        BoundRule::ThreeModFour,
    ]
    .into_iter()
    .filter_map(fired_value)
    .max_by_key(|b| b.value);
    let tau_lower: Vec<BoundValue> = [
        BoundRule::ShadowZeroCount,
        BoundRule::SquareWeights,
        BoundRule::AnisotropicPair,
        BoundRule::ThreeModFour,
    ]
    .into_iter()
    .filter_map(fired_value)
    .collect();

    let exact_two = fired_value(BoundRule::AnisotropicPair)
        .or_else(|| fired_value(BoundRule::ThreeModFour))
        .map(|b| b.value);
    let u_exact = fired_value(BoundRule::PowerBlockExact)
        .map(|b| b.value)
        .or(exact_two)
        .or_else(|| {
            u_lower
                .as_ref()
                .filter(|b| b.value == u_upper)
                .map(|b| b.value)
        });
    if let Some(lower) = &u_lower {
        if lower.value > u_upper {
            return Err(Error::Internal(format!(
                "lower bound {} from {} exceeds upper bound {u_upper}",
                lower.value, lower.rule
            )));
        }
    }
    if let Some(exact) = u_exact {
        if u_lower.as_ref().is_some_and(|b| b.value > exact) || exact > u_upper {
            return Err(Error::Internal(format!(
                "inconsistent exact value u={exact}"
            )));
        }
    }

    Ok(BoundsReport {
        degree: m,
        p,
        n: input.n,
        mode: input.mode,
        delta_exponent: e,
        l,
        word_form: if blocks.is_some() {
            WordForm::Blocks
        } else {
            WordForm::Word
        },
        k,
        components,
        is_knot,
        nu,
        p_prime: pp,
        a0_shadow,
        k_prime: kp,
        u_upper,
        u_lower,
        u_exact,
        tau_lower,
        tau_exact: exact_two,
        checks,
        notes,
    })
}

/// Convenience wrapper taking the basis braid directly.
pub fn bounds_for(
    basis: BasisBraid,
    p: Prime,
    n: i64,
    mode: ExponentMode,
    cap: u64,
) -> Result<BoundsReport> {
    bounds_report(&TorusCoveringKnot::new(basis, p, n, mode), cap)
}
