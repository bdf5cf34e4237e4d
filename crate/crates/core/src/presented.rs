//! Word problem for `G₁(n) = ⟨a, x : 𝓡_{n-1}⟩`.
//!
//! Rewriting each `a` against the running x-exponent `c` turns a word into
//! `a_{c₁} a_{c₂} ⋯ a_{c_m} · x^s`, where `a_c = x^c a x^{-c}`. The kernel of
//! `G₁(n) → ℤ` is the right-angled Coxeter group on `{a_c : c ∈ ℤ}` in which
//! `a_i` and `a_j` commute exactly when `1 ≤ |i − j| ≤ n − 1`, so equality is
//! decided by a reduced word taken in lexicographically least form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lamp::LampElement;
use crate::word::{GroupWord, Letter};

fn check_level(level: u32) -> Result<()> {
    if level == 0 {
        return Err(Error::InvalidLevel(0));
    }
    Ok(())
}

#[inline]
fn commute(i: i64, j: i64, level: u32) -> bool {
    i != j && (i - j).unsigned_abs() < level as u64
}

/// Reduces a sequence of involution indices and returns its canonical
/// (lexicographically least) representative.
pub fn normalize_indices(gens: &[i64], level: u32) -> Vec<i64> {
    let mut reduced: Vec<i64> = Vec::with_capacity(gens.len());
    for &g in gens {
        let mut cancel = None;
        for (p, &h) in reduced.iter().enumerate().rev() {
            if h == g {
                cancel = Some(p);
                break;
            }
            if !commute(h, g, level) {
                break;
            }
        }
        match cancel {
            Some(p) => {
                reduced.remove(p);
            }
            None => reduced.push(g),
        }
    }
    lex_least(reduced, level)
}

fn lex_least(mut rest: Vec<i64>, level: u32) -> Vec<i64> {
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for p in 0..rest.len() {
            if rest[..p].iter().all(|&h| commute(h, rest[p], level))
                && best.is_none_or(|b| rest[p] < rest[b])
            {
                best = Some(p);
            }
        }
        let p = best.expect("the first letter is always movable");
        out.push(rest.remove(p));
    }
    out
}

/// A kernel element in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceWord {
    gens: Vec<i64>,
    level: u32,
}

impl TraceWord {
    pub fn new(gens: &[i64], level: u32) -> Result<Self> {
        check_level(level)?;
        Ok(TraceWord { gens: normalize_indices(gens, level), level })
    }

    pub fn gens(&self) -> &[i64] {
        &self.gens
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }
}

/// An element `k · x^shift` of `G₁(level)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct G1Element {
    kernel: TraceWord,
    shift: i64,
}

impl G1Element {
    pub fn identity(level: u32) -> Result<Self> {
        Ok(G1Element { kernel: TraceWord::new(&[], level)?, shift: 0 })
    }

    pub fn from_parts(kernel: &[i64], shift: i64, level: u32) -> Result<Self> {
        Ok(G1Element { kernel: TraceWord::new(kernel, level)?, shift })
    }

    pub fn kernel(&self) -> &TraceWord {
        &self.kernel
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn level(&self) -> u32 {
        self.kernel.level
    }

    pub fn is_identity(&self) -> bool {
        g1_is_identity(self)
    }

    pub fn mul(&self, other: &G1Element) -> Result<G1Element> {
        g1_mul(self, other)
    }

    pub fn inv(&self) -> G1Element {
        g1_inv(self)
    }
}

impl fmt::Display for G1Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kernel=(")?;
        for (n, i) in self.kernel.gens.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ");shift={};level={}", self.shift, self.kernel.level)
    }
}

#[derive(Serialize, Deserialize)]
struct G1Json {
    level: u32,
    shift: i64,
    kernel: Vec<i64>,
}

impl Serialize for G1Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        G1Json { level: self.kernel.level, shift: self.shift, kernel: self.kernel.gens.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for G1Element {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = G1Json::deserialize(d)?;
        G1Element::from_parts(&j.kernel, j.shift, j.level).map_err(serde::de::Error::custom)
    }
}

/// Emits the index sequence of a word's `a`-letters against the running
/// x-exponent, along with the final exponent.
pub fn kernel_indices(w: &GroupWord) -> Result<(Vec<i64>, i64)> {
    let mut c = 0i64;
    let mut out = Vec::with_capacity(w.count_a());
    for l in w.iter() {
        match l {
            Letter::A => out.push(c),
            Letter::X => c += 1,
            Letter::XInv => c -= 1,
            other => return Err(Error::AlphabetViolation { letter: other.to_char() }),
        }
    }
    Ok((out, c))
}

pub fn g1_from_word(w: &GroupWord, level: u32) -> Result<G1Element> {
    check_level(level)?;
    let (gens, shift) = kernel_indices(w)?;
    G1Element::from_parts(&gens, shift, level)
}

pub fn g1_mul(p: &G1Element, q: &G1Element) -> Result<G1Element> {
    if p.level() != q.level() {
        return Err(Error::LevelMismatch { left: p.level(), right: q.level() });
    }
    let mut gens = p.kernel.gens.clone();
    gens.extend(q.kernel.gens.iter().map(|i| i + p.shift));
    G1Element::from_parts(&gens, p.shift + q.shift, p.level())
}

pub fn g1_inv(p: &G1Element) -> G1Element {
    let gens: Vec<i64> = p.kernel.gens.iter().rev().map(|i| i - p.shift).collect();
    G1Element::from_parts(&gens, -p.shift, p.level()).expect("level already validated")
}

pub fn g1_is_identity(p: &G1Element) -> bool {
    p.kernel.is_empty() && p.shift == 0
}

/// Decides whether `w` lies in the normal closure of `𝓡_{n-1}`.
pub fn is_relation(w: &GroupWord, level: u32) -> Result<bool> {
    Ok(g1_is_identity(&g1_from_word(w, level)?))
}

/// The quotient `G₁(n) → L`.
pub fn g1_to_lamp(p: &G1Element) -> LampElement {
    LampElement::new(p.kernel.gens.iter().copied(), p.shift)
}

/// An element of the infinite dihedral group, as the affine map
/// `z ↦ (-1)^flip · z + translation`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DInfty {
    pub translation: i64,
    pub flip: bool,
}

impl DInfty {
    pub fn is_identity(&self) -> bool {
        self.translation == 0 && !self.flip
    }

    pub fn compose(self, other: DInfty) -> DInfty {
        let t = if self.flip { -other.translation } else { other.translation };
        DInfty { translation: self.translation + t, flip: self.flip ^ other.flip }
    }
}

/// Image of a kernel index sequence under the retraction `a_i ↦ r_i = (0,1)`,
/// `a_j ↦ r_j = (1,1)`, every other `a_c ↦ 1`.
pub fn dinfty_of_indices(gens: &[i64], i: i64, j: i64, level: u32) -> Result<DInfty> {
    if (i - j).unsigned_abs() < level as u64 {
        return Err(Error::RetractionNotDefined { i, j, level });
    }
    let r_i = DInfty { translation: 0, flip: true };
    let r_j = DInfty { translation: 1, flip: true };
    Ok(gens.iter().fold(DInfty::default(), |acc, &c| {
        if c == i {
            acc.compose(r_i)
        } else if c == j {
            acc.compose(r_j)
        } else {
            acc
        }
    }))
}

/// Retraction of the kernel part of `w` onto `D∞ = ⟨r_i, r_j⟩`. A non-identity
/// image certifies that `w` is not a relation of `G₁(n)`.
pub fn dinfty_image(w: &GroupWord, i: i64, j: i64, level: u32) -> Result<DInfty> {
    check_level(level)?;
    let (gens, _) = kernel_indices(w)?;
    dinfty_of_indices(&gens, i, j, level)
}

/// Searches index pairs occurring in the normal form for a retraction with
/// non-identity image.
pub fn dinfty_certificate(p: &G1Element) -> Option<(i64, i64, DInfty)> {
    let mut idx: Vec<i64> = p.kernel.gens.clone();
    idx.sort_unstable();
    idx.dedup();
    let level = p.level();
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            if j - i < level as i64 {
                continue;
            }
            let img = dinfty_of_indices(&p.kernel.gens, i, j, level).expect("pair is far enough");
            if !img.is_identity() {
                return Some((i, j, img));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamp::eval_word;
    use crate::word::relator;

    fn w(s: &str) -> GroupWord {
        GroupWord::parse(s).unwrap()
    }

    #[test]
    fn relators_below_level_are_trivial() {
        for n in 1..6u32 {
            for k in 0..n as i64 {
                assert!(is_relation(&relator(k).unwrap(), n).unwrap(), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn relator_at_level_is_nontrivial() {
        for n in 1..6u32 {
            let p = g1_from_word(&relator(n as i64).unwrap(), n).unwrap();
            assert!(!p.is_identity());
            let n = n as i64;
            assert_eq!(p.kernel().gens(), &[0, -n, 0, -n][..]);
            assert_eq!(p.shift(), 0);
        }
    }

    #[test]
    fn pure_x_word() {
        let p = g1_from_word(&w("xxxxx"), 3).unwrap();
        assert!(p.kernel().is_empty());
        assert_eq!(p.shift(), 5);
    }

    #[test]
    fn aa_is_trivial() {
        assert!(is_relation(&w("aa"), 1).unwrap());
    }

    #[test]
    fn commutators_of_close_conjugates() {
        // [a_i, a_j] written out as a_i a_j a_i a_j
        let n = 4u32;
        for i in -3i64..3 {
            for j in -3i64..3 {
                let seg = |c: i64| {
                    GroupWord::x_power(c).concat(&w("a")).concat(&GroupWord::x_power(-c))
                };
                let word = seg(i).concat(&seg(j)).concat(&seg(i)).concat(&seg(j));
                let expected = (i - j).abs() < n as i64;
                assert_eq!(is_relation(&word, n).unwrap(), expected, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn dinfty_on_relator_at_level() {
        for n in 1..5u32 {
            let r = relator(n as i64).unwrap();
            let img = dinfty_image(&r, 0, -(n as i64), n).unwrap();
            assert!(!img.flip);
            assert_eq!(img.translation.abs(), 2);
            for k in 0..n as i64 {
                let img = dinfty_image(&relator(k).unwrap(), 0, -(n as i64), n).unwrap();
                assert!(img.is_identity());
            }
        }
        assert!(dinfty_image(&GroupWord::empty(), 0, 5, 2).unwrap().is_identity());
        assert!(dinfty_image(&w("a"), 0, 1, 2).is_err());
    }

    #[test]
    fn level_mismatch_rejected() {
        let p = G1Element::identity(2).unwrap();
        let q = G1Element::identity(3).unwrap();
        assert!(g1_mul(&p, &q).is_err());
    }

    #[test]
    fn quotient_to_lamplighter() {
        let n = 3;
        let p = G1Element::from_parts(&[0, n, 0, n], 0, n as u32).unwrap();
        assert!(!p.is_identity());
        assert!(g1_to_lamp(&p).is_identity());
        let word = w("axaXXaxxXXa");
        assert_eq!(g1_to_lamp(&g1_from_word(&word, 2).unwrap()), eval_word(&word).unwrap());
    }

    #[test]
    fn json_form() {
        let p = G1Element::from_parts(&[0, 2, 0, 2], -1, 2).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"level":2,"shift":-1,"kernel":[0,2,0,2]}"#);
        let back: G1Element = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn normal_form_examples() {
        // a_0 a_1 at level 2 commute; lex-least puts 0 first either way
        assert_eq!(normalize_indices(&[1, 0], 2), vec![0, 1]);
        assert_eq!(normalize_indices(&[1, 0], 1), vec![1, 0]);
        assert_eq!(normalize_indices(&[0, 1, 0], 2), vec![1]);
        assert_eq!(normalize_indices(&[0, 2, 0], 2), vec![0, 2, 0]);
        assert_eq!(normalize_indices(&[3, 3, 3], 1), vec![3]);
    }
}
