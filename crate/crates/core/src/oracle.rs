//! Brute-force verifiers for the identities the fast paths rely on.
//!
//! Each verifier enumerates its whole range and returns `Ok(false)` on the
//! first counterexample. Enumeration sizes are bounded by fixed budgets.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::braid::{full_twist, BraidWord};
use crate::cocycle::{f_p, shadow_invariant, two_cocycle_invariant, TwistCocycle};
use crate::error::{Error, Result};
use crate::modp::{check_budget, Prime, Residue};
use crate::quandle::{
    act, act_letter, action_matrix, coloring_space, delta_order, DihedralQuandle,
};

/// Budget for [`brute_colorings`].
pub const COLORING_BUDGET: u64 = 10_000_000;
/// Budget for the lemma verifiers.
pub const LEMMA_BUDGET: u64 = 100_000;

/// Every tuple in `(Z/pZ)^m`, in lexicographic order.
fn tuples(m: usize, p: Prime) -> impl Iterator<Item = Vec<Residue>> {
    let n = p.get();
    let total = (n as u64).pow(m as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![0; m];
        for slot in v.iter_mut().rev() {
            *slot = (idx % n as u64) as Residue;
            idx /= n as u64;
        }
        v
    })
}

/// All fixed points of the braid action, found by walking every tuple through
/// the word.
pub fn brute_colorings(b: &BraidWord, p: Prime) -> Result<Vec<Vec<Residue>>> {
    check_budget(p.as_u64(), b.degree(), COLORING_BUDGET)?;
    Ok(tuples(b.degree(), p)
        .filter(|x| act(b, x, p) == *x)
        .collect())
}

/// Whether the brute-force colorings are exactly the span of the kernel basis.
pub fn verify_coloring_space(b: &BraidWord, p: Prime) -> Result<bool> {
    let brute = brute_colorings(b, p)?;
    let space = coloring_space(b, p);
    let mut spanned: Vec<Vec<Residue>> = space.iter().collect();
    spanned.sort();
    Ok(spanned == brute)
}

/// `A_Δ^l = I` with `l = 2` for odd `m` and `l = p` for even `m`.
pub fn verify_delta_lemma(m: usize, p: Prime) -> bool {
    let l = delta_order(m, p);
    action_matrix(&full_twist(m, 1), p).pow(l).is_identity()
}

/// `A_Δ^i(x) = R_x^i(x)` coordinatewise for every `x` and `0 ≤ i ≤ imax`.
pub fn verify_fold_lemma(m: usize, p: Prime, imax: u64) -> Result<bool> {
    check_budget(p.as_u64(), m, LEMMA_BUDGET)?;
    let delta = full_twist(m, 1);
    let q = DihedralQuandle::new(p);
    let mut lhs = vec![0; m];
    let mut rhs = vec![0; m];
    for x in tuples(m, p) {
        lhs.copy_from_slice(&x);
        rhs.copy_from_slice(&x);
        for _ in 0..imax {
            for &l in delta.letters() {
                act_letter(&mut lhs, l, &q);
            }
            for v in rhs.iter_mut() {
                *v = q.fold(*v, &x);
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `f_p(s, t) = K(s - t)` for all `s, t`, with `K` from Fermat quotients and
/// `f_p` from its defining sum. Requires `k` even and `R_y = id`.
pub fn verify_fp_closed_form(y: &[Residue], p: Prime) -> Result<bool> {
    let k = TwistCocycle::new(y.to_vec(), p).linear_constant()?;
    let n = p.get();
    for s in 0..n {
        for t in 0..n {
            if f_p(s, t, y, p) != p.mul(k, p.sub(s, t)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Φ_f(b̂; C) = 0` for `f(s, t) = s - t` and every coloring `C`.
pub fn verify_linear_vanishing(b: &BraidWord, p: Prime) -> Result<bool> {
    check_budget(p.as_u64(), b.degree(), LEMMA_BUDGET)?;
    for c in brute_colorings(b, p)? {
        if two_cocycle_invariant(b, &c, |s, t| p.sub(s, t), p)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Ψ*(b̂; C, x) = Ψ*(b̂; C, y)` and `Ψ*(b̂; R_z(C), x) = Ψ*(b̂; C, x)` for
/// all colorings `C` and all `x, y, z`.
pub fn verify_shadow_lemmas(b: &BraidWord, p: Prime) -> Result<bool> {
    check_budget(p.as_u64(), b.degree() + 1, LEMMA_BUDGET)?;
    let q = DihedralQuandle::new(p);
    for c in brute_colorings(b, p)? {
        let reference = shadow_invariant(b, &c, 0, p)?;
        for x in 0..p.get() {
            if shadow_invariant(b, &c, x, p)? != reference {
                return Ok(false);
            }
            let moved: Vec<Residue> = c.iter().map(|&v| q.op(v, x)).collect();
            if shadow_invariant(b, &moved, 0, p)? != reference {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Idempotence, right invertibility and right self-distributivity of `R_p`.
pub fn verify_quandle_axioms(p: Prime) -> bool {
    let q = DihedralQuandle::new(p);
    let n = p.get();
    (0..n).all(|x| {
        q.op(x, x) == x
            && (0..n).all(|y| {
                (0..n).filter(|&s| q.op(s, y) == x).count() == 1
                    && (0..n).all(|z| q.op(q.op(x, y), z) == q.op(q.op(x, z), q.op(y, z)))
            })
    })
}

/// `θ_p` by exact integer arithmetic.
pub fn theta_exact(s: Residue, t: Residue, u: Residue, p: Prime) -> Residue {
    let e = p.get();
    let (s, t, u) = (BigInt::from(s), BigInt::from(t), BigInt::from(u));
    let two = BigInt::from(2);
    let inner = (&two * &u - &t).pow(e) + t.pow(e) - &two * u.pow(e);
    let pb = BigInt::from(e);
    debug_assert!((&inner % &pb).is_zero());
    let v = ((s - t) * (inner / &pb)) % &pb;
    let v = if v < BigInt::zero() { v + pb } else { v };
    u32::try_from(v).expect("reduced below p")
}

/// The 3-cocycle condition for `θ_p`, with `θ_p` evaluated exactly, plus
/// `θ(s, s, t) = θ(s, t, t) = 0`.
pub fn verify_theta_cocycle(p: Prime) -> bool {
    let q = DihedralQuandle::new(p);
    let n = p.get();
    let table: Vec<Residue> = tuples(3, p)
        .map(|v| theta_exact(v[0], v[1], v[2], p))
        .collect();
    let th = |a: Residue, b: Residue, c: Residue| table[((a * n + b) * n + c) as usize];
    for s in 0..n {
        for t in 0..n {
            if th(s, s, t) != 0 || th(s, t, t) != 0 {
                return false;
            }
            for u in 0..n {
                for v in 0..n {
                    let lhs = p.add(
                        p.add(th(s, t, u), th(q.op(s, u), q.op(t, u), v)),
                        th(s, u, v),
                    );
                    let rhs = p.add(
                        p.add(th(q.op(s, t), u, v), th(s, t, v)),
                        th(q.op(s, v), q.op(t, v), q.op(u, v)),
                    );
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `{n x² + n' : x ∈ Z/pZ}` has `(p + 1)/2` elements for every `n ≠ 0`, `n'`.
pub fn verify_shifted_squares(p: Prime) -> bool {
    let size = p.get() as usize;
    (1..p.get()).all(|n| {
        (0..p.get()).all(|shift| {
            let mut seen = vec![false; size];
            for x in 0..p.get() {
                seen[p.add(p.mul(n, p.mul(x, x)), shift) as usize] = true;
            }
            seen.iter().filter(|&&b| b).count() == size.div_ceil(2)
        })
    })
}

/// Outcome of one verifier run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub name: String,
    /// `None` when the verifier could not run (budget or precondition).
    pub passed: Option<bool>,
    pub detail: Option<String>,
}

impl Verification {
    fn from_result(name: &str, r: Result<bool>) -> Self {
        match r {
            Ok(passed) => Verification {
                name: name.into(),
                passed: Some(passed),
                detail: None,
            },
            Err(e) => Verification {
                name: name.into(),
                passed: None,
                detail: Some(e.to_string()),
            },
        }
    }
}

/// Runs every verifier that applies to `b` at prime `p`.
pub fn verify_all(b: &BraidWord, p: Prime) -> Vec<Verification> {
    let m = b.degree();
    let mut out = vec![
        Verification::from_result("quandle_axioms", Ok(verify_quandle_axioms(p))),
        Verification::from_result("theta_cocycle", Ok(verify_theta_cocycle(p))),
        Verification::from_result("shifted_squares", Ok(verify_shifted_squares(p))),
        Verification::from_result("delta_order", Ok(verify_delta_lemma(m, p))),
        Verification::from_result("fold", verify_fold_lemma(m, p, 2 * delta_order(m, p))),
        Verification::from_result("coloring_space", verify_coloring_space(b, p)),
        Verification::from_result("linear_vanishing", verify_linear_vanishing(b, p)),
        Verification::from_result("shadow_invariance", verify_shadow_lemmas(b, p)),
    ];
    // a trivial twist of length 2: (1, 1)
    out.push(Verification::from_result(
        "twist_closed_form",
        verify_fp_closed_form(&[1, 1], p),
    ));
    out
}

/// Raises an error naming the first verifier that failed.
pub fn require_all(results: &[Verification]) -> Result<()> {
    match results.iter().find(|v| v.passed == Some(false)) {
        Some(v) => Err(Error::Internal(format!("verifier {} failed", v.name))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::theta;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn w(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn brute_coloring_examples() {
        assert_eq!(
            brute_colorings(&BraidWord::identity(2), p(3))
                .unwrap()
                .len(),
            9
        );
        assert_eq!(
            brute_colorings(&w("m=2: s1"), p(3)).unwrap(),
            vec![vec![0, 0], vec![1, 1], vec![2, 2]]
        );
        assert_eq!(
            brute_colorings(&w("m=3: (s1 s2^-1)^4"), p(3))
                .unwrap()
                .len(),
            27
        );
        assert!(matches!(
            brute_colorings(&BraidWord::identity(9), p(7)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn brute_colorings_match_kernel() {
        for s in [
            "m=2: s1^3",
            "m=3: s1^3 s2^3",
            "m=3: (s1 s2^-1)^4",
            "m=4: s1 s2^-1 s3^5",
        ] {
            for q in [3u64, 5] {
                assert!(verify_coloring_space(&w(s), p(q)).unwrap(), "{s} p={q}");
            }
        }
    }

    #[test]
    fn delta_examples() {
        assert!(verify_delta_lemma(3, p(3)));
        assert!(verify_delta_lemma(4, p(5)));
        assert!(verify_delta_lemma(2, p(3)));
    }

    #[test]
    fn fold_examples() {
        assert!(verify_fold_lemma(2, p(3), 3).unwrap());
        assert!(verify_fold_lemma(3, p(3), 2).unwrap());
        assert!(verify_fold_lemma(3, p(5), 0).unwrap());
        assert!(verify_fold_lemma(9, p(7), 1).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let q = p(5);
        for a in 0..5 {
            assert!(verify_fp_closed_form(&[a, a], q).unwrap());
            assert_eq!(
                TwistCocycle::new(vec![a, a], q).linear_constant().unwrap(),
                0
            );
        }
        assert!(verify_fp_closed_form(&[1, 2, 3], q).is_err());
    }

    #[test]
    fn vanishing_examples() {
        assert!(verify_linear_vanishing(&w("m=2: s1^3"), p(3)).unwrap());
        assert!(verify_linear_vanishing(&BraidWord::identity(3), p(3)).unwrap());
        assert!(verify_linear_vanishing(&w("m=3: (s1 s2^-1)^4"), p(3)).unwrap());
    }

    #[test]
    fn shadow_examples() {
        assert!(verify_shadow_lemmas(&w("m=2: s1^3"), p(3)).unwrap());
        assert!(verify_shadow_lemmas(&w("m=2: s1^5"), p(5)).unwrap());
        assert!(verify_shadow_lemmas(&w("m=3: s1^2 s2^-3 s1"), p(3)).unwrap());
    }

    #[test]
    fn exact_theta_matches_fast_path() {
        for q in [3u64, 5, 7, 11] {
            let pr = p(q);
            for v in tuples(3, pr) {
                assert_eq!(
                    theta_exact(v[0], v[1], v[2], pr),
                    theta(v[0], v[1], v[2], pr)
                );
            }
        }
    }

    #[test]
    fn small_identities() {
        for q in [3u64, 5, 7] {
            assert!(verify_quandle_axioms(p(q)));
            assert!(verify_theta_cocycle(p(q)));
            assert!(verify_shifted_squares(p(q)));
        }
    }

    #[test]
    fn verify_all_passes() {
        let results = verify_all(&w("m=3: s1^3 s2^3"), p(3));
        assert!(
            results.iter().all(|v| v.passed == Some(true)),
            "{results:?}"
        );
        assert!(require_all(&results).is_ok());
    }
}
