//! Words over the generators `a`, `x` (and `t` for the extended group).
//!
//! Concrete syntax is one character per letter, uppercase for inverses:
//! `a`/`A` (both read as the involution `a`), `x`, `X`, `t`, `T`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    X,
    XInv,
    T,
    TInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::A,
            Letter::X => Letter::XInv,
            Letter::XInv => Letter::X,
            Letter::T => Letter::TInv,
            Letter::TInv => Letter::T,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::X => 'x',
            Letter::XInv => 'X',
            Letter::T => 't',
            Letter::TInv => 'T',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' | 'A' => Some(Letter::A),
            'x' => Some(Letter::X),
            'X' => Some(Letter::XInv),
            't' => Some(Letter::T),
            'T' => Some(Letter::TInv),
            _ => None,
        }
    }

    /// Contribution to the x-exponent sum.
    pub fn x_exponent(self) -> i64 {
        match self {
            Letter::X => 1,
            Letter::XInv => -1,
            _ => 0,
        }
    }

    pub fn t_exponent(self) -> i64 {
        match self {
            Letter::T => 1,
            Letter::TInv => -1,
            _ => 0,
        }
    }

    /// True for letters that cancel against their inverse under free
    /// reduction. `a` is excluded: `aa` is a relator and costs a cell.
    pub fn is_freely_invertible(self) -> bool {
        !matches!(self, Letter::A)
    }
}

/// A word in the free group on `{a, x}` (optionally `t`), with `a⁻¹` stored
/// as `a`. Words label edge paths, so nothing is reduced on construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GroupWord { letters }
    }

    pub fn empty() -> Self {
        GroupWord::default()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(s.len());
        for (position, c) in s.chars().enumerate() {
            if c.is_whitespace() {
                continue;
            }
            let letter =
                Letter::from_char(c).ok_or(Error::InvalidLetter { letter: c, position })?;
            letters.push(letter);
        }
        Ok(GroupWord { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.letters.iter().copied()
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        GroupWord { letters }
    }

    /// `letter^n`, using the inverse letter for negative `n`.
    pub fn power(letter: Letter, n: i64) -> GroupWord {
        let l = if n < 0 { letter.inverse() } else { letter };
        GroupWord { letters: vec![l; n.unsigned_abs() as usize] }
    }

    pub fn x_power(n: i64) -> GroupWord {
        GroupWord::power(Letter::X, n)
    }

    /// Formal inverse: reversed, each letter inverted (`a` stays `a`).
    pub fn inverse(&self) -> GroupWord {
        GroupWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn rotated(&self, i: usize) -> GroupWord {
        if self.letters.is_empty() {
            return self.clone();
        }
        let i = i % self.letters.len();
        let mut letters = Vec::with_capacity(self.letters.len());
        letters.extend_from_slice(&self.letters[i..]);
        letters.extend_from_slice(&self.letters[..i]);
        GroupWord { letters }
    }

    /// Cancels adjacent `xX`, `Xx`, `tT`, `Tt` until none remain.
    pub fn free_reduce(&self) -> GroupWord {
        GroupWord { letters: free_reduce_letters(self.letters.iter().copied()) }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !cancels(w[0], w[1]))
    }

    pub fn freely_equal(&self, other: &GroupWord) -> bool {
        self.free_reduce() == other.free_reduce()
    }

    pub fn x_exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.x_exponent()).sum()
    }

    pub fn t_exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.t_exponent()).sum()
    }

    pub fn count_a(&self) -> usize {
        self.letters.iter().filter(|&&l| l == Letter::A).count()
    }

    pub fn uses_t(&self) -> bool {
        self.letters.iter().any(|l| matches!(l, Letter::T | Letter::TInv))
    }

    /// Errors if the word contains a `t`-letter.
    pub fn require_at_free(&self) -> Result<()> {
        match self.letters.iter().find(|l| matches!(l, Letter::T | Letter::TInv)) {
            Some(l) => Err(Error::AlphabetViolation { letter: l.to_char() }),
            None => Ok(()),
        }
    }
}

pub(crate) fn cancels(l: Letter, r: Letter) -> bool {
    l.is_freely_invertible() && l.inverse() == r
}

pub(crate) fn free_reduce_letters(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last().is_some_and(|&p| cancels(p, l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupWord::parse(s)
    }
}

impl From<Vec<Letter>> for GroupWord {
    fn from(letters: Vec<Letter>) -> Self {
        GroupWord { letters }
    }
}

impl Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GroupWord::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// The commutator relator `a x^{-k} a x^k a x^{-k} a x^k`; `relator(0)` is `aa`.
pub fn relator(k: i64) -> Result<GroupWord> {
    if k < 0 {
        return Err(Error::NegativeRelatorIndex(k));
    }
    if k == 0 {
        return Ok(GroupWord::new(vec![Letter::A, Letter::A]));
    }
    let mut w = GroupWord::empty();
    for _ in 0..2 {
        w.push(Letter::A);
        w.letters.extend(GroupWord::x_power(-k).letters);
        w.push(Letter::A);
        w.letters.extend(GroupWord::x_power(k).letters);
    }
    Ok(w)
}

/// `relator(k)` conjugated by `x^{-k}`, i.e. `x^{-k} relator(k) x^{k}` reduced:
/// the commutator `[a, x^{k} a x^{-k}]`.
pub fn conjugated_relator(k: i64) -> Result<GroupWord> {
    let r = relator(k)?;
    Ok(GroupWord::x_power(-k).concat(&r).concat(&GroupWord::x_power(k)).free_reduce())
}

/// Every cyclic rotation of the relators of `𝓡_{n-1}` and of their inverses,
/// deduplicated and sorted.
pub fn relator_rotations(level: u32) -> Vec<GroupWord> {
    let mut out = std::collections::BTreeSet::new();
    for k in 0..level as i64 {
        let r = relator(k).expect("k is non-negative");
        for base in [r.clone(), r.inverse()] {
            for i in 0..base.len() {
                out.insert(base.rotated(i));
            }
        }
    }
    out.into_iter().collect()
}

/// Identifies which relator of `𝓡_{n-1}` (up to rotation and inversion) a
/// cyclic word reads, returning its index `k` (0 for `aa`).
pub fn match_relator(word: &GroupWord, level: u32) -> Option<i64> {
    for k in 0..level as i64 {
        let r = relator(k).expect("k is non-negative");
        if r.len() != word.len() {
            continue;
        }
        for base in [r.clone(), r.inverse()] {
            if (0..base.len()).any(|i| base.rotated(i) == *word) {
                return Some(k);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_normalizes_a_inverse() {
        let w = GroupWord::parse("aAxX").unwrap();
        assert_eq!(w.to_string(), "aaxX");
    }

    #[test]
    fn parse_rejects_unknown_letters() {
        assert_eq!(
            GroupWord::parse("ab"),
            Err(Error::InvalidLetter { letter: 'b', position: 1 })
        );
    }

    #[test]
    fn relator_one() {
        assert_eq!(relator(1).unwrap().to_string(), "aXaxaXax");
        assert_eq!(relator(0).unwrap().to_string(), "aa");
        assert!(relator(-1).is_err());
    }

    #[test]
    fn relator_length() {
        for k in 1..=10 {
            assert_eq!(relator(k).unwrap().len() as i64, 4 * k + 4);
        }
    }

    #[test]
    fn x_exponent_sums() {
        assert_eq!(GroupWord::empty().x_exponent_sum(), 0);
        for k in 1..6 {
            let w = GroupWord::parse("a")
                .unwrap()
                .concat(&GroupWord::x_power(-k))
                .concat(&GroupWord::parse("a").unwrap());
            assert_eq!(w.x_exponent_sum(), -k);
            assert_eq!(relator(k).unwrap().x_exponent_sum(), 0);
        }
    }

    #[test]
    fn free_reduction_keeps_aa() {
        let w = GroupWord::parse("axXaxxXt T").unwrap();
        assert_eq!(w.free_reduce().to_string(), "aax");
    }

    #[test]
    fn inverse_of_relator_is_a_rotation() {
        // With a⁻¹ written as a, r⁻¹ is a cyclic rotation of r.
        for k in 1..5 {
            let r = relator(k).unwrap();
            let inv = r.inverse();
            assert!((0..r.len()).any(|i| r.rotated(i) == inv));
        }
    }

    #[test]
    fn matches_relators_up_to_rotation() {
        let r2 = relator(2).unwrap();
        assert_eq!(match_relator(&r2.rotated(5), 3), Some(2));
        assert_eq!(match_relator(&r2, 2), None);
        assert_eq!(match_relator(&GroupWord::parse("aa").unwrap(), 1), Some(0));
        assert_eq!(match_relator(&GroupWord::parse("xX").unwrap(), 3), None);
    }
}
