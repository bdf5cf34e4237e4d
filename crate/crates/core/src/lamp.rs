//! Exact arithmetic in the Lamplighter group `L = ℤ₂ ≀ ℤ`.
//!
//! An element is a finite set of lit lamps together with the walker's
//! position. Words are evaluated left to right: `x` moves the walker right,
//! `X` moves it left, `a` toggles the lamp under the walker.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{GroupWord, Letter};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LampElement {
    pub lamps: BTreeSet<i64>,
    pub shift: i64,
}

impl LampElement {
    pub fn identity() -> Self {
        LampElement::default()
    }

    pub fn new(lamps: impl IntoIterator<Item = i64>, shift: i64) -> Self {
        let mut set = BTreeSet::new();
        for i in lamps {
            // toggling semantics: repeated positions cancel
            if !set.insert(i) {
                set.remove(&i);
            }
        }
        LampElement { lamps: set, shift }
    }

    pub fn is_identity(&self) -> bool {
        self.lamps.is_empty() && self.shift == 0
    }

    pub fn generator(letter: Letter) -> Result<Self> {
        match letter {
            Letter::A => Ok(LampElement::new([0], 0)),
            Letter::X => Ok(LampElement::new([], 1)),
            Letter::XInv => Ok(LampElement::new([], -1)),
            l => Err(Error::AlphabetViolation { letter: l.to_char() }),
        }
    }

    /// Right multiplication by a single generator, in place.
    pub fn apply(&mut self, letter: Letter) -> Result<()> {
        match letter {
            Letter::A => toggle(&mut self.lamps, self.shift),
            Letter::X => self.shift += 1,
            Letter::XInv => self.shift -= 1,
            l => return Err(Error::AlphabetViolation { letter: l.to_char() }),
        }
        Ok(())
    }

    pub fn mul(&self, other: &LampElement) -> LampElement {
        lamp_mul(self, other)
    }

    pub fn inv(&self) -> LampElement {
        lamp_inv(self)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("lamp elements always serialize")
    }
}

fn toggle(lamps: &mut BTreeSet<i64>, i: i64) {
    if !lamps.remove(&i) {
        lamps.insert(i);
    }
}

/// Evaluates a word over `{a, x, X}` in `L`.
pub fn eval_word(w: &GroupWord) -> Result<LampElement> {
    let mut g = LampElement::identity();
    for l in w.iter() {
        g.apply(l)?;
    }
    Ok(g)
}

/// `(P, s)·(Q, t) = (P Δ (Q + s), s + t)`.
pub fn lamp_mul(p: &LampElement, q: &LampElement) -> LampElement {
    let mut lamps = p.lamps.clone();
    for &i in &q.lamps {
        toggle(&mut lamps, i + p.shift);
    }
    LampElement { lamps, shift: p.shift + q.shift }
}

pub fn lamp_inv(p: &LampElement) -> LampElement {
    LampElement { lamps: p.lamps.iter().map(|i| i - p.shift).collect(), shift: -p.shift }
}

/// The homomorphism `L → ℤ` killing the normal closure of `a`.
pub fn x_exponent_sum(w: &GroupWord) -> i64 {
    w.x_exponent_sum()
}

/// Canonical word for `p`: visit the lit lamps in increasing order, toggling
/// each, then walk to the final shift.
pub fn normal_word(p: &LampElement) -> GroupWord {
    let mut w = GroupWord::empty();
    let mut pos = 0i64;
    for &i in &p.lamps {
        for l in GroupWord::x_power(i - pos).iter() {
            w.push(l);
        }
        w.push(Letter::A);
        pos = i;
    }
    for l in GroupWord::x_power(p.shift - pos).iter() {
        w.push(l);
    }
    w
}

impl fmt::Display for LampElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lamps=[")?;
        for (n, i) in self.lamps.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "];shift={}", self.shift)
    }
}

impl FromStr for LampElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected `lamps=[..];shift=m`, got {s:?}"));
        let rest = s.trim().strip_prefix("lamps=[").ok_or_else(bad)?;
        let (list, rest) = rest.split_once(']').ok_or_else(bad)?;
        let shift = rest.strip_prefix(";shift=").ok_or_else(bad)?;
        let shift: i64 = shift.trim().parse().map_err(|_| bad())?;
        let mut lamps = BTreeSet::new();
        for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let i: i64 = part.parse().map_err(|_| bad())?;
            if !lamps.insert(i) {
                return Err(Error::Parse(format!("duplicate lamp {i}")));
            }
        }
        Ok(LampElement { lamps, shift })
    }
}
