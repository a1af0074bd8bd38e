//! Mochizuki's 3-cocycle `θ_p`, the twist 2-cocycle `f_p`, and the 2-cocycle
//! and shadow cocycle invariants of closed braids.
//!
//! Crossing conventions. At a letter `σ_i` with incoming colors `a` (position
//! i) and `c` (position i+1), the over-strand carries `c` and the under-strand
//! goes from `a` to `a * c`; at `σ_i⁻¹` the over-strand carries `a` and the
//! under-strand goes from `c` to `c * a`.
//!
//! * 2-cocycle weight: `+f(a, c)` for `σ_i`, `-f(c * a, a)` for `σ_i⁻¹`.
//! * shadow weight with left-region color `w`: `+θ(w, a, c)` for `σ_i`,
//!   `-θ(w, c * a, a)` for `σ_i⁻¹`.
//!
//! The region left of position `i` has color `R_{(z_1, …, z_{i-1})}(x)` where
//! `x` colors the leftmost region. These conventions are pinned by three
//! identities exercised in the tests: `Ψ*(σ_i^p; C, 0) = -(x_i - x_{i+1})²`,
//! independence of `Ψ*` from the base color and from `C ↦ R_z(C)`, and the
//! vanishing of `Φ_f` for `f(s, t) = s - t`.

use crate::braid::{BraidWord, Sign};
use crate::error::{Error, Result};
use crate::modp::{check_budget, pow_mod, Prime, Residue};
use crate::multiset::InvariantMultiset;
use crate::quandle::{act_letter, coloring_space, DihedralQuandle};

/// `θ_p(s, t, u) = (s - t)((2u - t)^p + t^p - 2u^p)/p mod p`, evaluated with
/// arithmetic mod p².
pub fn theta(s: Residue, t: Residue, u: Residue, p: Prime) -> Residue {
    match theta_checked(s, t, u, p) {
        Ok(v) => v,
        Err(e) => panic!("{e}"),
    }
}

/// As [`theta`], reporting a lifting failure instead of panicking.
pub fn theta_checked(s: Residue, t: Residue, u: Residue, p: Prime) -> Result<Residue> {
    let (s, t, u) = (s % p.get(), t % p.get(), u % p.get());
    let n = p.as_u64();
    let n2 = p.squared();
    let (t, u) = (t as u64, u as u64);
    let lifted = (2 * u + n2 - t) % n2;
    let numerator =
        (pow_mod(lifted, n, n2) + pow_mod(t, n, n2) + 2 * (n2 - pow_mod(u, n, n2))) % n2;
    if !numerator.is_multiple_of(n) {
        return Err(Error::Internal(format!(
            "θ numerator {numerator} not divisible by {p}"
        )));
    }
    let quotient = (numerator / n) as Residue;
    Ok(p.mul(p.sub(s, t as Residue), quotient))
}

/// `f_p(s, t) = Σ_j θ_p(R_{y_<j}(s), R_{y_<j}(t), y_j)`.
pub fn f_p(s: Residue, t: Residue, y: &[Residue], p: Prime) -> Residue {
    let q = DihedralQuandle::new(p);
    let (mut sj, mut tj) = (s % p.get(), t % p.get());
    let mut acc = 0;
    for &yj in y {
        acc = p.add(acc, theta(sj, tj, yj, p));
        sj = q.op(sj, yj);
        tj = q.op(tj, yj);
    }
    acc
}

/// The 2-cocycle `f_p` built from `θ_p` and a twist vector `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistCocycle {
    p: Prime,
    y: Vec<Residue>,
    trivial_twist: bool,
}

impl TwistCocycle {
    pub fn new(y: Vec<Residue>, p: Prime) -> Self {
        let y: Vec<Residue> = y.into_iter().map(|v| v % p.get()).collect();
        let trivial_twist = twist_is_trivial(&y, p);
        TwistCocycle {
            p,
            y,
            trivial_twist,
        }
    }

    pub fn twist(&self) -> &[Residue] {
        &self.y
    }

    /// Whether `R_y` is the identity on `R_p`.
    pub fn has_trivial_twist(&self) -> bool {
        self.trivial_twist
    }

    pub fn eval(&self, s: Residue, t: Residue) -> Residue {
        f_p(s, t, &self.y, self.p)
    }

    /// The constant `K` with `f_p(s, t) = K(s - t)`, from Fermat quotients:
    /// `K = -2 (y_1^p - y_2^p + … - y_k^p)/p`. Requires `k` even and positive
    /// and `R_y = id`.
    pub fn linear_constant(&self) -> Result<Residue> {
        let k = self.y.len();
        if k == 0 || k % 2 == 1 {
            return Err(Error::Hypothesis(format!(
                "twist vector length {k} must be positive and even"
            )));
        }
        if !self.trivial_twist {
            return Err(Error::Hypothesis("R_y is not the identity".into()));
        }
        let p = self.p;
        let n2 = p.squared();
        let alternating = self.y.iter().enumerate().fold(0u64, |acc, (j, &yj)| {
            let power = pow_mod(yj as u64, p.as_u64(), n2);
            if j % 2 == 0 {
                (acc + power) % n2
            } else {
                (acc + n2 - power) % n2
            }
        });
        if alternating % p.as_u64() != 0 {
            return Err(Error::Internal(format!(
                "alternating sum {alternating} not divisible by {p}"
            )));
        }
        let quotient = (alternating / p.as_u64()) as Residue;
        Ok(p.neg(p.mul(2, quotient)))
    }
}

/// Whether `R_{(y_1, …, y_k)} = id` on `R_p`.
pub fn twist_is_trivial(y: &[Residue], p: Prime) -> bool {
    let q = DihedralQuandle::new(p);
    // R_y is affine: x ↦ ±x + c, so checking two points suffices
    q.fold(0, y) == 0 && q.fold(1, y) == 1
}

fn walk<F>(b: &BraidWord, coloring: &[Residue], p: Prime, mut weight: F) -> Result<Residue>
where
    F: FnMut(usize, Sign, &[Residue]) -> Residue,
{
    if coloring.len() != b.degree() {
        return Err(Error::DimensionMismatch {
            expected: b.degree(),
            got: coloring.len(),
        });
    }
    let q = DihedralQuandle::new(p);
    let mut z: Vec<Residue> = coloring.iter().map(|&c| c % p.get()).collect();
    let start = z.clone();
    let mut acc = 0;
    for &l in b.letters() {
        acc = p.add(acc, weight(l.index - 1, l.sign, &z));
        act_letter(&mut z, l, &q);
    }
    if z != start {
        return Err(Error::NotAColoring { colors: start });
    }
    Ok(acc)
}

/// `Φ_f(b̂; C)` for a 2-cocycle `f`, where `C` is given by its initial colors.
pub fn two_cocycle_invariant<F>(
    b: &BraidWord,
    coloring: &[Residue],
    f: F,
    p: Prime,
) -> Result<Residue>
where
    F: Fn(Residue, Residue) -> Residue,
{
    let q = DihedralQuandle::new(p);
    walk(b, coloring, p, |i, sign, z| {
        let (a, c) = (z[i], z[i + 1]);
        match sign {
            Sign::Pos => f(a, c) % p.get(),
            Sign::Neg => p.neg(f(q.op(c, a), a) % p.get()),
        }
    })
}

/// `Ψ*_p(b̂; C, x)`.
pub fn shadow_invariant(
    b: &BraidWord,
    coloring: &[Residue],
    base: Residue,
    p: Prime,
) -> Result<Residue> {
    let q = DihedralQuandle::new(p);
    let base = base % p.get();
    walk(b, coloring, p, |i, sign, z| {
        let w = q.fold(base, &z[..i]);
        let (a, c) = (z[i], z[i + 1]);
        match sign {
            Sign::Pos => theta(w, a, c, p),
            Sign::Neg => p.neg(theta(w, q.op(c, a), a, p)),
        }
    })
}

/// `Ψ*_p(b̂)` over all colorings and base colors. Base-color independence
/// holds because `R_p` is connected, so each coloring contributes `p` copies
/// of `Ψ*_p(b̂; C, 0)`.
pub fn shadow_multiset(b: &BraidWord, p: Prime, cap: u64) -> Result<InvariantMultiset> {
    let space = coloring_space(b, p);
    check_budget(p.as_u64(), space.dimension() + 1, cap)?;
    let mut ms = InvariantMultiset::new(p);
    for c in space.iter() {
        ms.insert(shadow_invariant(b, &c, 0, p)?);
    }
    Ok(ms.repeated(p.as_u64()))
}

/// `Ψ*_p(b̂)` evaluated at every base color separately.
pub fn shadow_multiset_exhaustive(b: &BraidWord, p: Prime, cap: u64) -> Result<InvariantMultiset> {
    let space = coloring_space(b, p);
    check_budget(p.as_u64(), space.dimension() + 1, cap)?;
    let mut ms = InvariantMultiset::new(p);
    for c in space.iter() {
        for x in 0..p.get() {
            ms.insert(shadow_invariant(b, &c, x, p)?);
        }
    }
    Ok(ms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{Letter, PowerBlockWord};
    use crate::modp::DEFAULT_CAP;
    use num_bigint::{BigInt, BigUint};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn w(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    /// Exact integer evaluation, independent of the mod-p² path.
    fn theta_exact(s: u32, t: u32, u: u32, q: u32) -> u32 {
        let (s, t, u) = (BigInt::from(s), BigInt::from(t), BigInt::from(u));
        let two = BigInt::from(2);
        let num = (&two * &u - &t).pow(q) + t.pow(q) - &two * u.pow(q);
        let qq = BigInt::from(q);
        assert_eq!(&num % &qq, BigInt::from(0));
        let v = (s - t) * (num / &qq);
        let r = ((v % &qq) + &qq) % &qq;
        u32::try_from(r).unwrap()
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(1, 0, 1, p(3)), 2);
        assert_eq!(theta_exact(1, 0, 1, 3), 2);
        assert_eq!(theta(2, 1, 3, p(5)), theta_exact(2, 1, 3, 5));
        for q in [3u64, 5, 7] {
            for s in 0..q as u32 {
                for u in 0..q as u32 {
                    assert_eq!(theta(s, s, u, p(q)), 0);
                }
            }
        }
    }

    #[test]
    fn theta_matches_exact_integers() {
        for q in [3u32, 5, 7, 11] {
            for s in 0..q {
                for t in 0..q {
                    for u in 0..q {
                        assert_eq!(theta(s, t, u, p(q as u64)), theta_exact(s, t, u, q));
                    }
                }
            }
        }
    }

    #[test]
    fn theta_is_a_three_cocycle() {
        for q in [3u64, 5, 7] {
            let pr = p(q);
            let r = DihedralQuandle::new(pr);
            let n = q as u32;
            let th = |a, b, c| theta(a, b, c, pr);
            for s in 0..n {
                for t in 0..n {
                    assert_eq!(th(s, s, t), 0);
                    assert_eq!(th(s, t, t), 0);
                    for u in 0..n {
                        for v in 0..n {
                            let lhs = pr.add(
                                pr.add(th(s, t, u), th(r.op(s, u), r.op(t, u), v)),
                                th(s, u, v),
                            );
                            let rhs = pr.add(
                                pr.add(th(r.op(s, t), u, v), th(s, t, v)),
                                th(r.op(s, v), r.op(t, v), r.op(u, v)),
                            );
                            assert_eq!(lhs, rhs, "p={q} ({s},{t},{u},{v})");
                        }
                    }
                }
            }
        }
    }

    fn trivial_twists(q: u32, k: usize) -> Vec<Vec<u32>> {
        let pr = p(q as u64);
        (0..(q as usize).pow(k as u32))
            .map(|mut idx| {
                (0..k)
                    .map(|_| {
                        let d = (idx % q as usize) as u32;
                        idx /= q as usize;
                        d
                    })
                    .collect::<Vec<u32>>()
            })
            .filter(|y| twist_is_trivial(y, pr))
            .collect()
    }

    #[test]
    fn f_p_is_a_two_cocycle() {
        for (q, kmax) in [(3u32, 4usize), (5, 4), (7, 4)] {
            let pr = p(q as u64);
            let r = DihedralQuandle::new(pr);
            for k in 1..=kmax {
                let twists = trivial_twists(q, k);
                let step = if q == 7 && k == 4 { 7 } else { 1 };
                for y in twists.iter().step_by(step) {
                    let f = |a, b| f_p(a, b, y, pr);
                    for s in 0..q {
                        assert_eq!(f(s, s), 0);
                        for t in 0..q {
                            for u in 0..q {
                                let lhs = pr.add(f(s, u), f(r.op(s, u), r.op(t, u)));
                                let rhs = pr.add(f(s, t), f(r.op(s, t), u));
                                assert_eq!(lhs, rhs, "p={q} y={y:?}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn f_p_closed_form() {
        for q in [3u32, 5, 7] {
            let pr = p(q as u64);
            for k in [2usize, 4] {
                for y in trivial_twists(q, k) {
                    let tc = TwistCocycle::new(y.clone(), pr);
                    let kc = tc.linear_constant().unwrap();
                    for s in 0..q {
                        for t in 0..q {
                            assert_eq!(tc.eval(s, t), pr.mul(kc, pr.sub(s, t)), "y={y:?}");
                        }
                    }
                }
            }
            for a in 0..q {
                let tc = TwistCocycle::new(vec![a, a], pr);
                assert_eq!(tc.linear_constant(), Ok(0));
                assert!((0..q).all(|s| (0..q).all(|t| tc.eval(s, t) == 0)));
            }
        }
        let odd = TwistCocycle::new(vec![1, 2, 3], p(5));
        assert!(matches!(odd.linear_constant(), Err(Error::Hypothesis(_))));
        let nontrivial = TwistCocycle::new(vec![0, 1], p(5));
        assert!(!nontrivial.has_trivial_twist());
        assert!(matches!(
            nontrivial.linear_constant(),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn two_cocycle_invariant_examples() {
        let q = p(5);
        let b = w("m=3: s1 s2^-1 s1^3 s2^2 s1^-1");
        let space = coloring_space(&b, q);
        for c in space.iter() {
            let lin = two_cocycle_invariant(&b, &c, |s, t| q.sub(s, t), q).unwrap();
            assert_eq!(lin, 0);
        }
        for c in 0..5 {
            let v = two_cocycle_invariant(&b, &[c, c, c], |s, t| theta(s, t, 3, q), q).unwrap();
            assert_eq!(v, 0);
        }
        let bad = two_cocycle_invariant(&w("m=2: s1"), &[0, 1], |s, t| q.sub(s, t), q);
        assert!(matches!(bad, Err(Error::NotAColoring { .. })));
    }

    #[test]
    fn twist_cocycle_invariant_vanishes() {
        let q = p(5);
        let b = PowerBlockWord::staircase(3).expand(q);
        let tc = TwistCocycle::new(vec![1, 3, 2, 0], q);
        assert!(tc.has_trivial_twist());
        for c in coloring_space(&b, q).iter() {
            assert_eq!(
                two_cocycle_invariant(&b, &c, |s, t| tc.eval(s, t), q),
                Ok(0)
            );
        }
    }

    #[test]
    fn shadow_calibration() {
        for (m, q) in [(2usize, 3u64), (2, 5), (3, 3), (3, 5)] {
            let pr = p(q);
            for i in 1..m {
                let letters = vec![Letter::pos(i); q as usize];
                let b = BraidWord::new(m, letters).unwrap();
                for c in coloring_space(&b, pr).iter() {
                    let d = pr.sub(c[i - 1], c[i]);
                    let expected = pr.neg(pr.mul(d, d));
                    assert_eq!(shadow_invariant(&b, &c, 0, pr), Ok(expected));
                }
            }
        }
        assert_eq!(shadow_invariant(&w("m=2: s1^3"), &[0, 1], 0, p(3)), Ok(2));
    }

    #[test]
    fn shadow_constant_coloring() {
        let q = p(7);
        let b = w("m=4: s1 s2^-1 s3 s2 s1^-2 s3^5");
        for c in 0..7 {
            for x in 0..7 {
                assert_eq!(shadow_invariant(&b, &[c; 4], x, q), Ok(0));
            }
        }
    }

    #[test]
    fn shadow_multiset_examples() {
        let q = p(3);
        let ms = shadow_multiset(&BraidWord::identity(1), q, DEFAULT_CAP).unwrap();
        assert_eq!(ms.a0(), BigUint::from(9u32));
        assert_eq!(ms.total(), BigUint::from(9u32));

        let ms = shadow_multiset(&w("m=2: s1^3"), q, DEFAULT_CAP).unwrap();
        assert_eq!(ms.count(0), &BigUint::from(9u32));
        assert_eq!(ms.count(2), &BigUint::from(18u32));
        assert_eq!(ms.count(1), &BigUint::from(0u32));
        assert_eq!(
            ms,
            shadow_multiset_exhaustive(&w("m=2: s1^3"), q, DEFAULT_CAP).unwrap()
        );

        let b = w("m=5: s1^3 s2^3 s3^3 s4^3");
        let ms = shadow_multiset(&b, q, DEFAULT_CAP).unwrap();
        assert_eq!(ms.a0(), BigUint::from(297u32));
        assert_eq!(ms.total(), BigUint::from(729u32));

        assert!(matches!(
            shadow_multiset(&b, q, 700),
            Err(Error::BudgetExceeded { cap: 700, .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word(max_m: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
            (2..=max_m).prop_flat_map(move |m| {
                prop::collection::vec((1..m, any::<bool>()), 0..=max_len).prop_map(move |ls| {
                    let letters = ls
                        .into_iter()
                        .map(|(i, s)| if s { Letter::pos(i) } else { Letter::neg(i) })
                        .collect();
                    BraidWord::new(m, letters).unwrap()
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn base_color_and_inner_action_invariance(b in word(4, 8), q in prop::sample::select(vec![3u64, 5])) {
                let pr = p(q);
                let r = DihedralQuandle::new(pr);
                for c in coloring_space(&b, pr).iter() {
                    let v0 = shadow_invariant(&b, &c, 0, pr).unwrap();
                    for x in 1..pr.get() {
                        prop_assert_eq!(shadow_invariant(&b, &c, x, pr).unwrap(), v0);
                    }
                    for z in 0..pr.get() {
                        let moved: Vec<u32> = c.iter().map(|&v| r.op(v, z)).collect();
                        prop_assert_eq!(shadow_invariant(&b, &moved, 0, pr).unwrap(), v0);
                    }
                }
            }

            #[test]
            fn markov_invariance(b in word(3, 7), conj in word(3, 4), pos in any::<bool>()) {
                let pr = p(3);
                let base = shadow_multiset(&b, pr, DEFAULT_CAP).unwrap();
                if conj.degree() == b.degree() {
                    prop_assert_eq!(&shadow_multiset(&b.conjugate_by(&conj), pr, DEFAULT_CAP).unwrap(), &base);
                }
                let sign = if pos { Sign::Pos } else { Sign::Neg };
                prop_assert_eq!(&shadow_multiset(&b.stabilize(sign), pr, DEFAULT_CAP).unwrap(), &base);
            }

            #[test]
            fn linear_cocycle_vanishes(b in word(4, 10), q in prop::sample::select(vec![3u64, 5, 7])) {
                let pr = p(q);
                for c in coloring_space(&b, pr).iter() {
                    prop_assert_eq!(two_cocycle_invariant(&b, &c, |s, t| pr.sub(s, t), pr).unwrap(), 0);
                }
            }
        }
    }
}
