//! Braid words, power-block words, permutations and the full twist.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modp::Prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// A generator `σ_index` (1-based) or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub index: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn pos(index: usize) -> Self {
        Letter {
            index,
            sign: Sign::Pos,
        }
    }

    pub fn neg(index: usize) -> Self {
        Letter {
            index,
            sign: Sign::Neg,
        }
    }

    pub fn inverse(self) -> Self {
        Letter {
            index: self.index,
            sign: self.sign.flip(),
        }
    }
}

/// A braid on `degree` strands, stored fully expanded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    degree: usize,
    letters: Vec<Letter>,
}

fn check_index(index: usize, degree: usize) -> Result<()> {
    if index == 0 || index >= degree {
        return Err(Error::IndexOutOfRange {
            index,
            max: degree.saturating_sub(1),
            degree,
        });
    }
    Ok(())
}

impl BraidWord {
    pub fn new(degree: usize, letters: Vec<Letter>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Hypothesis("braid degree must be positive".into()));
        }
        for l in &letters {
            check_index(l.index, degree)?;
        }
        Ok(BraidWord { degree, letters })
    }

    /// Builds a word from `(index, ±1)` pairs.
    pub fn from_pairs(degree: usize, pairs: &[(usize, i8)]) -> Result<Self> {
        let letters = pairs
            .iter()
            .map(|&(i, e)| {
                if e > 0 {
                    Letter::pos(i)
                } else {
                    Letter::neg(i)
                }
            })
            .collect();
        Self::new(degree, letters)
    }

    pub fn identity(degree: usize) -> Self {
        BraidWord {
            degree,
            letters: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Word concatenation `self · other`.
    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        assert_eq!(
            self.degree, other.degree,
            "concatenating braids of different degree"
        );
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord {
            degree: self.degree,
            letters,
        }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            degree: self.degree,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> BraidWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        BraidWord {
            degree: self.degree,
            letters,
        }
    }

    /// `w · self · w⁻¹`.
    pub fn conjugate_by(&self, w: &BraidWord) -> BraidWord {
        w.concat(self).concat(&w.inverse())
    }

    /// Markov stabilization: `self · σ_m^{±1}` on `m + 1` strands.
    pub fn stabilize(&self, sign: Sign) -> BraidWord {
        let mut letters = self.letters.clone();
        letters.push(Letter {
            index: self.degree,
            sign,
        });
        BraidWord {
            degree: self.degree + 1,
            letters,
        }
    }

    /// Image in the symmetric group; `σ_i` swaps positions `i` and `i+1`.
    pub fn permutation(&self) -> Permutation {
        // position[s] = current position of the strand that started at s
        let mut at: Vec<usize> = (0..self.degree).collect();
        for l in &self.letters {
            at.swap(l.index - 1, l.index);
        }
        // at[pos] = starting strand now at pos; invert to get start -> end
        let mut images = vec![0; self.degree];
        for (pos, &start) in at.iter().enumerate() {
            images[start] = pos;
        }
        Permutation { images }
    }

    /// Number of components of the closure.
    pub fn closure_components(&self) -> usize {
        self.permutation().cycle_count()
    }

    pub fn is_knot(&self) -> bool {
        self.closure_components() == 1
    }

    /// Signed letter count per generator, `σ_1` first.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.degree.saturating_sub(1)];
        for l in &self.letters {
            sums[l.index - 1] += l.sign.as_i64();
        }
        sums
    }
}

impl fmt::Display for BraidWord {
    /// Canonical form: runs of equal letters are written `s<i>^<e>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}:", self.degree)?;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.sign.as_i64();
            if run == 1 {
                write!(f, " s{}", l.index)?;
            } else {
                write!(f, " s{}^{}", l.index, run)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_braid_word(s)
    }
}

/// The full twist `Δ = (σ_1 ⋯ σ_{m-1})^m` raised to `n`.
pub fn full_twist(m: usize, n: i64) -> BraidWord {
    let half: Vec<Letter> = (1..m).map(Letter::pos).collect();
    let mut delta = Vec::with_capacity(m * half.len());
    for _ in 0..m {
        delta.extend_from_slice(&half);
    }
    BraidWord {
        degree: m,
        letters: delta,
    }
    .pow(n)
}

/// A permutation of `{0, …, m-1}`: strand starting at `i` ends at `images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation {
            images: (0..m).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation { images })
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.images.len()];
        let mut cycles = 0;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
            }
        }
        cycles
    }
}

/// One block `σ_index^(multiple · p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub index: usize,
    pub multiple: i64,
}

/// A braid presented as a product of powers `σ_i^(c·p)`. The prime is
/// supplied when the word is expanded, so membership in the subgroup
/// generated by the `σ_i^p` holds by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerBlockWord {
    degree: usize,
    blocks: Vec<Block>,
}

impl PowerBlockWord {
    pub fn new(degree: usize, blocks: Vec<Block>) -> Result<Self> {
        if degree < 2 {
            return Err(Error::Hypothesis(
                "power-block words need at least 2 strands".into(),
            ));
        }
        for b in &blocks {
            check_index(b.index, degree)?;
            if b.multiple == 0 {
                return Err(Error::Hypothesis(format!(
                    "block on s{} has zero multiple",
                    b.index
                )));
            }
        }
        Ok(PowerBlockWord { degree, blocks })
    }

    /// `σ_1^p σ_2^p ⋯ σ_{m-1}^p`.
    pub fn staircase(degree: usize) -> Self {
        PowerBlockWord {
            degree,
            blocks: (1..degree)
                .map(|index| Block { index, multiple: 1 })
                .collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn expand(&self, p: Prime) -> BraidWord {
        let mut letters = Vec::new();
        for b in &self.blocks {
            let l = if b.multiple > 0 {
                Letter::pos(b.index)
            } else {
                Letter::neg(b.index)
            };
            let count = b.multiple.unsigned_abs() as usize * p.get() as usize;
            letters.extend(std::iter::repeat_n(l, count));
        }
        BraidWord {
            degree: self.degree,
            letters,
        }
    }

    /// Sum of block multiples per generator (the exponent sums divided by p).
    pub fn multiple_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.degree - 1];
        for b in &self.blocks {
            sums[b.index - 1] += b.multiple;
        }
        sums
    }
}

impl fmt::Display for PowerBlockWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}:", self.degree)?;
        for b in &self.blocks {
            write!(f, " {}:{}", b.index, b.multiple)?;
        }
        Ok(())
    }
}

impl FromStr for PowerBlockWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_power_blocks(s)
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.err(format!("expected '{}', found '{}'", c as char, x as char)),
            None => self.err(format!("expected '{}', found end of input", c as char)),
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<i64>().or_else(|_| {
            self.pos = start;
            self.err("integer out of range")
        })
    }

    fn header(&mut self) -> Result<usize> {
        self.expect(b'm')?;
        self.expect(b'=')?;
        let at = self.pos;
        let m = self.int()?;
        if m < 1 {
            self.pos = at;
            return self.err("degree must be positive");
        }
        self.expect(b':')?;
        Ok(m as usize)
    }

    fn index(&mut self, degree: usize) -> Result<usize> {
        let at = self.pos;
        let i = self.int()?;
        if i < 1 || i as usize >= degree {
            self.pos = at;
            return Err(Error::IndexOutOfRange {
                index: i.max(0) as usize,
                max: degree.saturating_sub(1),
                degree,
            });
        }
        Ok(i as usize)
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.int()
        } else {
            Ok(1)
        }
    }

    /// `term*` up to (not including) `)` or end of input.
    fn terms(&mut self, degree: usize, out: &mut Vec<Letter>) -> Result<()> {
        loop {
            match self.peek() {
                None | Some(b')') => return Ok(()),
                Some(b's') => {
                    self.pos += 1;
                    let index = self.index(degree)?;
                    let e = self.exponent()?;
                    let l = if e < 0 {
                        Letter::neg(index)
                    } else {
                        Letter::pos(index)
                    };
                    out.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
                }
                Some(b'(') => {
                    self.pos += 1;
                    let mut inner = Vec::new();
                    self.terms(degree, &mut inner)?;
                    self.expect(b')')?;
                    if self.peek() != Some(b'^') {
                        return self.err("parenthesized group needs an exponent '^<int>'");
                    }
                    let e = self.exponent()?;
                    let group = BraidWord {
                        degree,
                        letters: inner,
                    }
                    .pow(e);
                    out.extend(group.letters);
                }
                Some(c) => return self.err(format!("unexpected character '{}'", c as char)),
            }
        }
    }
}

/// Parses `m=<int>: <term>*` with `term := s<i> | s<i>^<int> | ( <term>* )^<int>`.
pub fn parse_braid_word(text: &str) -> Result<BraidWord> {
    let mut cur = Cursor::new(text);
    let degree = cur.header()?;
    let mut letters = Vec::new();
    cur.terms(degree, &mut letters)?;
    if cur.peek().is_some() {
        return cur.err("unbalanced ')'");
    }
    Ok(BraidWord { degree, letters })
}

/// Parses `m=<int>: <i>:<c> …`, each block meaning `σ_i^(c·p)`.
pub fn parse_power_blocks(text: &str) -> Result<PowerBlockWord> {
    let mut cur = Cursor::new(text);
    let degree = cur.header()?;
    if degree < 2 {
        return cur.err("power-block words need at least 2 strands");
    }
    let mut blocks = Vec::new();
    while cur.peek().is_some() {
        let index = cur.index(degree)?;
        cur.expect(b':')?;
        let at = cur.pos;
        let multiple = cur.int()?;
        if multiple == 0 {
            cur.pos = at;
            return cur.err("block multiple must be nonzero");
        }
        blocks.push(Block { index, multiple });
    }
    Ok(PowerBlockWord { degree, blocks })
}
