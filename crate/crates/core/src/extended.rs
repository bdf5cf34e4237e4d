//! The Extended Lamplighter group `E = ⟨x, a, t : a², [x,t], t⁻¹at = x⁻¹axa⟩`.
//!
//! `E` is `N ⋊ ℤ²` where `N` is the additive group of the ring
//! `F₂[x^{±1}, (1+x)^{-1}]`. An element `(ν, m, q)` stands for `ν · x^m t^q`,
//! with a lamp at position `i` written as the monomial `x^i`. Conjugation by
//! `x` multiplies `N` by `x`; conjugation by `t` multiplies it by `x/(1+x)`,
//! because `t⁻¹at = x⁻¹axa` lights the lamps at `-1` and `0`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lamp::LampElement;
use crate::word::{GroupWord, Letter};

/// A Laurent polynomial over `F₂`, stored as its support.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaurentF2 {
    support: BTreeSet<i64>,
}

impl LaurentF2 {
    pub fn zero() -> Self {
        LaurentF2::default()
    }

    pub fn one() -> Self {
        LaurentF2::monomial(0)
    }

    pub fn monomial(i: i64) -> Self {
        LaurentF2 { support: BTreeSet::from([i]) }
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = i64>) -> Self {
        let mut p = LaurentF2::zero();
        for i in exps {
            p.toggle(i);
        }
        p
    }

    pub fn support(&self) -> &BTreeSet<i64> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    fn toggle(&mut self, i: i64) {
        if !self.support.remove(&i) {
            self.support.insert(i);
        }
    }

    pub fn add(&self, other: &LaurentF2) -> LaurentF2 {
        let support = self.support.symmetric_difference(&other.support).copied().collect();
        LaurentF2 { support }
    }

    pub fn shift(&self, k: i64) -> LaurentF2 {
        LaurentF2 { support: self.support.iter().map(|i| i + k).collect() }
    }

    /// Multiplication by `(1+x)^e`.
    pub fn mul_one_plus_x(&self, e: u32) -> LaurentF2 {
        let mut p = self.clone();
        for _ in 0..e {
            p = p.add(&p.shift(1));
        }
        p
    }

    /// `(1+x)` divides a Laurent polynomial over `F₂` exactly when it has an
    /// even number of terms.
    pub fn divisible_by_one_plus_x(&self) -> bool {
        self.support.len().is_multiple_of(2)
    }

    /// Exact division by `(1+x)`; `None` when it does not divide.
    pub fn div_one_plus_x(&self) -> Option<LaurentF2> {
        if !self.divisible_by_one_plus_x() {
            return None;
        }
        // quotient coefficient at i is the parity of terms at positions ≤ i
        let mut out = BTreeSet::new();
        let terms: Vec<i64> = self.support.iter().copied().collect();
        for pair in terms.chunks(2) {
            out.extend(pair[0]..pair[1]);
        }
        Some(LaurentF2 { support: out })
    }
}

/// `num / (1+x)^denpow` in lowest terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fraction {
    pub num: LaurentF2,
    pub denpow: u32,
}

impl Fraction {
    pub fn zero() -> Self {
        Fraction::default()
    }

    pub fn new(num: LaurentF2, denpow: u32) -> Self {
        let mut f = Fraction { num, denpow };
        f.normalize();
        f
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.denpow = 0;
            return;
        }
        while self.denpow > 0 {
            match self.num.div_one_plus_x() {
                Some(q) => {
                    self.num = q;
                    self.denpow -= 1;
                }
                None => break,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_canonical(&self) -> bool {
        (self.denpow == 0 || !self.num.divisible_by_one_plus_x()) && !(self.num.is_zero() && self.denpow > 0)
    }

    pub fn add(&self, other: &Fraction) -> Fraction {
        let d = self.denpow.max(other.denpow);
        let a = self.num.mul_one_plus_x(d - self.denpow);
        let b = other.num.mul_one_plus_x(d - other.denpow);
        Fraction::new(a.add(&b), d)
    }

    /// Multiplication by `x^m · (x/(1+x))^q`, the action of `x^m t^q`.
    pub fn act(&self, m: i64, q: i64) -> Fraction {
        let num = self.num.shift(m + q);
        if q >= 0 {
            Fraction::new(num, self.denpow + q as u32)
        } else {
            Fraction::new(num.mul_one_plus_x(q.unsigned_abs() as u32), self.denpow)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EElement {
    pub nu: Fraction,
    pub m: i64,
    pub q: i64,
}

#[derive(Serialize, Deserialize)]
struct EJson {
    num: Vec<i64>,
    denpow: u32,
    m: i64,
    q: i64,
}

impl Serialize for EElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EJson {
            num: self.nu.num.support.iter().copied().collect(),
            denpow: self.nu.denpow,
            m: self.m,
            q: self.q,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = EJson::deserialize(d)?;
        let mut seen = BTreeSet::new();
        if let Some(i) = j.num.iter().find(|i| !seen.insert(**i)) {
            return Err(serde::de::Error::custom(format!("repeated exponent {i}")));
        }
        let nu = Fraction { num: LaurentF2 { support: seen }, denpow: j.denpow };
        if !nu.is_canonical() {
            return Err(serde::de::Error::custom("fraction is not in lowest terms"));
        }
        Ok(EElement { nu, m: j.m, q: j.q })
    }
}

impl EElement {
    pub fn identity() -> Self {
        EElement::default()
    }

    pub fn is_identity(&self) -> bool {
        self.nu.is_zero() && self.m == 0 && self.q == 0
    }

    pub fn generator(l: Letter) -> Self {
        let (nu, m, q) = match l {
            Letter::A => (Fraction::new(LaurentF2::one(), 0), 0, 0),
            Letter::X => (Fraction::zero(), 1, 0),
            Letter::XInv => (Fraction::zero(), -1, 0),
            Letter::T => (Fraction::zero(), 0, 1),
            Letter::TInv => (Fraction::zero(), 0, -1),
        };
        EElement { nu, m, q }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("elements serialize")
    }
}

impl fmt::Display for EElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num: Vec<String> = self.nu.num.support.iter().map(|i| i.to_string()).collect();
        write!(f, "num=[{}];denpow={};m={};q={}", num.join(","), self.nu.denpow, self.m, self.q)
    }
}

pub fn e_mul(p: &EElement, q: &EElement) -> EElement {
    EElement { nu: p.nu.add(&q.nu.act(p.m, p.q)), m: p.m + q.m, q: p.q + q.q }
}

pub fn e_inv(p: &EElement) -> EElement {
    EElement { nu: p.nu.act(-p.m, -p.q), m: -p.m, q: -p.q }
}

pub fn e_from_word(w: &GroupWord) -> EElement {
    w.iter().fold(EElement::identity(), |acc, l| e_mul(&acc, &EElement::generator(l)))
}

/// Parses and evaluates a word over `{a, x, X, t, T}`.
pub fn e_from_str(s: &str) -> Result<EElement> {
    Ok(e_from_word(&GroupWord::parse(s)?))
}

/// `(u v u⁻¹ v⁻¹)²`.
pub fn commutator_square(u: &EElement, v: &EElement) -> EElement {
    let c = e_mul(&e_mul(u, v), &e_mul(&e_inv(u), &e_inv(v)));
    e_mul(&c, &c)
}

/// The quotient `E → ℤ × ℤ` by `N`.
pub fn abelian_image(p: &EElement) -> (i64, i64) {
    (p.m, p.q)
}

/// The embedding `L → E`.
pub fn e_from_lamp(p: &LampElement) -> EElement {
    EElement {
        nu: Fraction::new(LaurentF2::from_exponents(p.lamps.iter().copied()), 0),
        m: p.shift,
        q: 0,
    }
}

/// Inverse of [`e_from_lamp`] on its image.
pub fn e_to_lamp(p: &EElement) -> Result<LampElement> {
    if p.q != 0 || p.nu.denpow != 0 {
        return Err(Error::AlphabetViolation { letter: 't' });
    }
    Ok(LampElement::new(p.nu.num.support.iter().copied(), p.m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamp::eval_word;

    fn e(s: &str) -> EElement {
        e_from_str(s).unwrap()
    }

    #[test]
    fn presentation_relations() {
        assert!(e("aa").is_identity());
        assert!(e("xtXT").is_identity());
        assert_eq!(e("Tat"), e("Xaxa"));
    }

    #[test]
    fn divisibility_rule() {
        let p = LaurentF2::from_exponents([0, 1]);
        assert_eq!(p.div_one_plus_x(), Some(LaurentF2::one()));
        let p = LaurentF2::from_exponents([0, 2]);
        assert_eq!(p.div_one_plus_x(), Some(LaurentF2::from_exponents([0, 1])));
        assert_eq!(LaurentF2::from_exponents([0, 1, 5]).div_one_plus_x(), None);
        for e in 0..6 {
            let q = LaurentF2::from_exponents([-2, 0, 3]);
            let mut p = q.mul_one_plus_x(e);
            for _ in 0..e {
                p = p.div_one_plus_x().unwrap();
            }
            assert_eq!(p, q);
        }
    }

    #[test]
    fn canonical_after_operations() {
        let p = e("taTxtaaXTa");
        assert!(p.nu.is_canonical());
        let f = Fraction::new(LaurentF2::from_exponents([0, 1]), 3);
        assert_eq!(f, Fraction::new(LaurentF2::one(), 2));
        assert!(Fraction::new(LaurentF2::zero(), 4).is_canonical());
    }

    #[test]
    fn t_conjugation_needs_denominators() {
        // t a t⁻¹ = a · x/(1+x)
        let p = e("taT");
        assert_eq!(p.nu, Fraction::new(LaurentF2::monomial(1), 1));
        assert_eq!(abelian_image(&p), (0, 0));
    }

    #[test]
    fn abelian_image_counts_letters() {
        assert_eq!(abelian_image(&e("xxxTT")), (3, -2));
        assert_eq!(abelian_image(&e("a")), (0, 0));
    }

    #[test]
    fn lamp_dictionary() {
        for s in ["", "a", "xaX", "Xax", "axxaXaXX", "xxxaXXXXXa"] {
            let w = GroupWord::parse(s).unwrap();
            assert_eq!(e_from_word(&w), e_from_lamp(&eval_word(&w).unwrap()), "{s}");
            assert_eq!(e_to_lamp(&e_from_word(&w)).unwrap(), eval_word(&w).unwrap());
        }
    }

    #[test]
    fn commutator_of_a_and_t() {
        assert!(commutator_square(&e("a"), &e("t")).is_identity());
        let u = e("txaT");
        assert!(commutator_square(&u, &u).is_identity());
    }

    #[test]
    fn json_form() {
        let p = e("taTxx");
        let j = p.to_json();
        assert_eq!(j, r#"{"num":[1],"denpow":1,"m":2,"q":0}"#);
        let back: EElement = serde_json::from_str(&j).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<EElement>(r#"{"num":[0,1],"denpow":1,"m":0,"q":0}"#).is_err());
    }
}
