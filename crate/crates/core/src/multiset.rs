//! Multisets of Z/pZ values with arbitrary-precision multiplicities.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::modp::{Prime, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MultisetRepr", into = "MultisetRepr")]
pub struct InvariantMultiset {
    p: Prime,
    counts: Vec<BigUint>,
}

impl InvariantMultiset {
    pub fn new(p: Prime) -> Self {
        InvariantMultiset {
            p,
            counts: vec![BigUint::zero(); p.get() as usize],
        }
    }

    pub fn from_values(p: Prime, values: impl IntoIterator<Item = Residue>) -> Self {
        let mut ms = Self::new(p);
        for v in values {
            ms.insert(v);
        }
        ms
    }

    /// `copies` copies of `value`.
    pub fn constant(p: Prime, value: Residue, copies: BigUint) -> Self {
        let mut ms = Self::new(p);
        ms.insert_many(value, copies);
        ms
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn insert(&mut self, value: Residue) {
        self.counts[(value % self.p.get()) as usize] += 1u32;
    }

    pub fn insert_many(&mut self, value: Residue, count: BigUint) {
        self.counts[(value % self.p.get()) as usize] += count;
    }

    pub fn count(&self, value: Residue) -> &BigUint {
        &self.counts[(value % self.p.get()) as usize]
    }

    /// Number of zeros.
    pub fn a0(&self) -> BigUint {
        self.counts[0].clone()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(Zero::is_zero)
    }

    /// `(value, count)` for every value with nonzero count, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (Residue, &BigUint)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| (v as Residue, c))
    }

    /// Multiset union.
    pub fn merge(&mut self, other: &InvariantMultiset) {
        assert_eq!(self.p, other.p);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Applies `v ↦ f(v)` to every element.
    pub fn map(&self, f: impl Fn(Residue) -> Residue) -> InvariantMultiset {
        let mut out = Self::new(self.p);
        for (v, c) in self.iter() {
            out.insert_many(f(v), c.clone());
        }
        out
    }

    pub fn negated(&self) -> InvariantMultiset {
        let p = self.p;
        self.map(|v| p.neg(v))
    }

    pub fn scaled(&self, factor: i64) -> InvariantMultiset {
        let p = self.p;
        let f = p.reduce(factor);
        self.map(|v| p.mul(f, v))
    }

    /// Every multiplicity multiplied by `k`.
    pub fn repeated(&self, k: u64) -> InvariantMultiset {
        InvariantMultiset {
            p: self.p,
            counts: self.counts.iter().map(|c| c * k).collect(),
        }
    }
}

impl fmt::Display for InvariantMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} ×{c}")?;
        }
        write!(f, "}}")
    }
}

/// JSON layout: counts as decimal strings keyed by value.
#[derive(Serialize, Deserialize)]
struct MultisetRepr {
    p: Prime,
    counts: BTreeMap<Residue, String>,
    total: String,
}

impl From<InvariantMultiset> for MultisetRepr {
    fn from(ms: InvariantMultiset) -> Self {
        MultisetRepr {
            p: ms.p,
            counts: ms.iter().map(|(v, c)| (v, c.to_string())).collect(),
            total: ms.total().to_string(),
        }
    }
}

impl TryFrom<MultisetRepr> for InvariantMultiset {
    type Error = String;
    fn try_from(r: MultisetRepr) -> Result<Self, String> {
        let mut ms = InvariantMultiset::new(r.p);
        for (v, c) in r.counts {
            if v >= r.p.get() {
                return Err(format!("value {v} not reduced mod {}", r.p));
            }
            let c: BigUint = c.parse().map_err(|_| format!("bad count {c:?}"))?;
            ms.insert_many(v, c);
        }
        let total: BigUint = r
            .total
            .parse()
            .map_err(|_| format!("bad total {:?}", r.total))?;
        if total != ms.total() {
            return Err(format!("total {total} does not match counts"));
        }
        Ok(ms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn zero_counts() {
        let ms = InvariantMultiset::constant(p(5), 0, BigUint::from(12u32));
        assert_eq!(ms.a0(), BigUint::from(12u32));
        assert!(InvariantMultiset::new(p(5)).a0().is_zero());
        assert!(InvariantMultiset::new(p(5)).is_empty());
    }

    #[test]
    fn negate_and_scale() {
        let ms = InvariantMultiset::from_values(p(5), [1, 1, 2, 0]);
        let neg = ms.negated();
        assert_eq!(neg.count(4), &BigUint::from(2u32));
        assert_eq!(neg.count(3), &BigUint::from(1u32));
        assert_eq!(ms.scaled(-1), neg);
        assert_eq!(ms.scaled(5).a0(), BigUint::from(4u32));
    }

    #[test]
    fn json_uses_decimal_strings() {
        let big = BigUint::from(3u32).pow(60);
        let ms = InvariantMultiset::constant(p(3), 2, big.clone());
        let json = serde_json::to_value(&ms).unwrap();
        assert_eq!(json["counts"]["2"], big.to_string());
        assert_eq!(json["total"], big.to_string());
        let back: InvariantMultiset = serde_json::from_value(json).unwrap();
        assert_eq!(back, ms);
    }

    #[test]
    fn json_rejects_inconsistent_total() {
        let bad = r#"{"p":3,"counts":{"0":"2"},"total":"3"}"#;
        assert!(serde_json::from_str::<InvariantMultiset>(bad).is_err());
        let bad = r#"{"p":3,"counts":{"4":"2"},"total":"2"}"#;
        assert!(serde_json::from_str::<InvariantMultiset>(bad).is_err());
    }
}
