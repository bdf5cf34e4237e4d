//! Bounded-area filling search.
//!
//! States are freely reduced words over `{a, x, X}`. A move picks a boundary
//! position `i`, a cyclic rotation `r` of a relator or its inverse and a
//! prefix length `p` with `W[i..i+p] = r[..p]`, and replaces that arc by
//! `r[p..]⁻¹`, then freely reduces. Read backwards, a move glues a cell
//! reading `r⁻¹` onto the arc after unfolding the cancelled letters, so a
//! path from `w` to `ε` of `A` moves is replayed as a diagram for `w` with
//! `A` cells.

use std::collections::HashSet;

use serde::Serialize;

use super::{CombMap, Diagram};
use crate::error::{Error, Result};
use crate::word::{cancels, free_reduce_letters, relator_rotations, GroupWord, Letter};

/// Extra boundary length allowed above the query's reduced length.
pub const DEFAULT_LENGTH_SLACK: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FillOutcome {
    Found(Diagram),
    /// No diagram of area at most `max_area` whose intermediate boundaries
    /// stay within `length_cap` letters.
    NotFoundWithinBound { max_area: usize, length_cap: usize },
}

impl FillOutcome {
    pub fn diagram(&self) -> Option<&Diagram> {
        match self {
            FillOutcome::Found(d) => Some(d),
            FillOutcome::NotFoundWithinBound { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, FillOutcome::Found(_))
    }
}

/// One cell attachment: the arc `[pos, pos+p)` is matched against rotation
/// `rot` of the level's relator rotations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub pos: usize,
    pub rot: usize,
    pub p: usize,
}

struct Rules {
    rotations: Vec<Vec<Letter>>,
    // inverse of every suffix: tails[r][p] = rotations[r][p..]⁻¹
    tails: Vec<Vec<Vec<Letter>>>,
}

impl Rules {
    fn new(level: u32) -> Self {
        let rotations: Vec<Vec<Letter>> =
            relator_rotations(level).into_iter().map(GroupWord::into_letters).collect();
        let tails = rotations
            .iter()
            .map(|r| {
                (0..=r.len())
                    .map(|p| r[p..].iter().rev().map(|l| l.inverse()).collect())
                    .collect()
            })
            .collect();
        Rules { rotations, tails }
    }

    fn apply(&self, w: &[Letter], m: Move) -> Vec<Letter> {
        let tail = &self.tails[m.rot][m.p];
        free_reduce_letters(
            w[..m.pos].iter().chain(tail.iter()).chain(w[m.pos + m.p..].iter()).copied(),
        )
    }

    /// Calls `f` with every move from `w` and its reduced result of length
    /// at most `cap`.
    fn for_each_move(&self, w: &[Letter], cap: usize, mut f: impl FnMut(Move, Vec<Letter>) -> bool) {
        for (rot, r) in self.rotations.iter().enumerate() {
            let len = r.len();
            for pos in 0..=w.len() {
                let mut p = 0;
                loop {
                    let next = self.apply(w, Move { pos, rot, p });
                    if next.len() <= cap && f(Move { pos, rot, p }, next) {
                        return;
                    }
                    if p == len || pos + p >= w.len() || w[pos + p] != r[p] {
                        break;
                    }
                    p += 1;
                }
            }
        }
    }
}

/// Index pairs cancelled while freely reducing `letters`, in the order the
/// cancellations happen.
fn cancellation_pairs(letters: &[Letter]) -> Vec<(usize, usize)> {
    let mut stack: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    for (j, &l) in letters.iter().enumerate() {
        match stack.last() {
            Some(&i) if cancels(letters[i], l) => {
                stack.pop();
                pairs.push((i, j));
            }
            _ => stack.push(j),
        }
    }
    pairs
}

/// Breadth-first search from the query towards `ε`. Returns the moves in
/// search order.
fn search(rules: &Rules, target: &[Letter], max_area: usize, length_cap: usize) -> Option<Vec<(Vec<Letter>, Move)>> {
    if target.is_empty() {
        return Some(Vec::new());
    }
    let mut states = vec![target.to_vec()];
    let mut parent: Vec<Option<(usize, Move)>> = vec![None];
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    seen.insert(target.to_vec());
    let mut frontier = vec![0usize];
    for _ in 0..max_area {
        let mut next_frontier = Vec::new();
        let mut hit = None;
        for &s in &frontier {
            let w = std::mem::take(&mut states[s]);
            rules.for_each_move(&w, length_cap, |m, next| {
                if !seen.insert(next.clone()) {
                    return false;
                }
                let done = next.is_empty();
                if done {
                    hit = Some(states.len());
                }
                states.push(next);
                parent.push(Some((s, m)));
                next_frontier.push(states.len() - 1);
                done
            });
            states[s] = w;
            if let Some(mut cur) = hit {
                let mut steps = Vec::new();
                while let Some((prev, m)) = parent[cur] {
                    steps.push((states[prev].clone(), m));
                    cur = prev;
                }
                steps.reverse();
                return Some(steps);
            }
        }
        if next_frontier.is_empty() {
            break;
        }
        frontier = next_frontier;
    }
    None
}

/// Replays search steps backwards from the empty diagram. Undoing a step
/// first re-inserts the letters its free reduction cancelled, as spurs,
/// then glues the deleted cell back over the inserted arc.
fn materialize(rules: &Rules, level: u32, steps: &[(Vec<Letter>, Move)]) -> Diagram {
    let mut map = CombMap::empty(level);
    for (before, m) in steps.iter().rev() {
        let tail = &rules.tails[m.rot][m.p];
        let unreduced: Vec<Letter> = before[..m.pos]
            .iter()
            .chain(tail.iter())
            .chain(before[m.pos + m.p..].iter())
            .copied()
            .collect();
        let pairs = cancellation_pairs(&unreduced);
        let mut present = vec![true; unreduced.len()];
        for &(i, j) in &pairs {
            present[i] = false;
            present[j] = false;
        }
        for &(i, j) in pairs.iter().rev() {
            let rank = present[..i].iter().filter(|&&b| b).count();
            map.insert_spur(rank, unreduced[i]);
            present[i] = true;
            present[j] = true;
        }
        debug_assert_eq!(map.boundary_letters(), unreduced);
        map.glue(m.pos, tail.len(), &before[m.pos..m.pos + m.p]);
        assert_eq!(&map.boundary_letters(), before, "replayed boundary differs from the search state");
    }
    map.finish()
}

/// Reusable filling search for one level and one pair of bounds.
pub struct Filler {
    level: u32,
    max_area: usize,
    length_cap: usize,
    rules: Rules,
}

impl Filler {
    pub fn new(level: u32, max_area: usize, length_cap: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidLevel(0));
        }
        Ok(Filler { level, max_area, length_cap, rules: Rules::new(level) })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn max_area(&self) -> usize {
        self.max_area
    }

    pub fn length_cap(&self) -> usize {
        self.length_cap
    }

    /// Searches for a diagram with boundary `w` (freely reduced). The cap on
    /// intermediate boundary length is raised to `|w|` when shorter.
    pub fn fill(&self, w: &GroupWord) -> Result<FillOutcome> {
        w.require_at_free()?;
        let target = free_reduce_letters(w.iter());
        let length_cap = self.length_cap.max(target.len());
        Ok(match search(&self.rules, &target, self.max_area, length_cap) {
            Some(steps) => FillOutcome::Found(materialize(&self.rules, self.level, &steps)),
            None => FillOutcome::NotFoundWithinBound { max_area: self.max_area, length_cap },
        })
    }
}

/// Finds a diagram over `𝓡_{n-1}` with boundary `w` (freely reduced) and at
/// most `max_area` cells, keeping intermediate boundaries within
/// `|w| + DEFAULT_LENGTH_SLACK` letters.
pub fn fill(w: &GroupWord, level: u32, max_area: usize) -> Result<FillOutcome> {
    let target = free_reduce_letters(w.iter());
    fill_with_cap(w, level, max_area, target.len() + DEFAULT_LENGTH_SLACK)
}

/// [`fill`] with an explicit cap on intermediate boundary length.
pub fn fill_with_cap(
    w: &GroupWord,
    level: u32,
    max_area: usize,
    length_cap: usize,
) -> Result<FillOutcome> {
    Filler::new(level, max_area, length_cap)?.fill(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{area, boundary_word, validate};
    use crate::presented::{g1_from_word, g1_is_identity};
    use crate::word::relator;

    fn w(s: &str) -> GroupWord {
        GroupWord::parse(s).unwrap()
    }

    fn found(o: FillOutcome) -> Diagram {
        match o {
            FillOutcome::Found(d) => d,
            other => panic!("expected a diagram, got {other:?}"),
        }
    }

    #[test]
    fn bigon() {
        let d = found(fill(&w("aa"), 1, 3).unwrap());
        assert!(validate(&d).is_empty());
        assert_eq!(area(&d), 1);
        assert_eq!(boundary_word(&d).unwrap(), w("aa"));
    }

    #[test]
    fn single_relators() {
        for n in 1..=4u32 {
            for k in 0..n as i64 {
                let r = relator(k).unwrap();
                let d = found(fill(&r, n, 2).unwrap());
                assert!(validate(&d).is_empty(), "{:?}", validate(&d));
                assert_eq!(area(&d), 1);
                assert_eq!(boundary_word(&d).unwrap(), r);
            }
        }
    }

    #[test]
    fn relator_above_level_is_not_found() {
        for n in 1..=2u32 {
            let r = relator(n as i64).unwrap();
            let out = fill(&r, n, 6).unwrap();
            assert!(!out.is_found());
            assert!(!g1_is_identity(&g1_from_word(&r, n).unwrap()));
        }
    }

    #[test]
    fn empty_word() {
        let d = found(fill(&GroupWord::empty(), 2, 0).unwrap());
        assert_eq!(area(&d), 0);
        assert!(validate(&d).is_empty());
    }

    #[test]
    fn reduces_query() {
        let d = found(fill(&w("xXaa"), 1, 2).unwrap());
        assert_eq!(boundary_word(&d).unwrap(), w("aa"));
    }

    #[test]
    fn conjugated_bigon_has_area_one() {
        for q in ["XXaaxx", "xaaX", "axaXaaxaXa"] {
            let d = found(fill(&w(q), 2, 4).unwrap());
            assert!(validate(&d).is_empty(), "{q}: {:?}", validate(&d));
            assert_eq!(boundary_word(&d).unwrap(), w(q));
        }
        assert_eq!(area(&found(fill(&w("XXaaxx"), 2, 4).unwrap())), 1);
    }

    #[test]
    fn reports_bounds() {
        let r = relator(2).unwrap();
        assert_eq!(
            fill_with_cap(&r, 2, 3, 14).unwrap(),
            FillOutcome::NotFoundWithinBound { max_area: 3, length_cap: 14 }
        );
    }

    #[test]
    fn rejects_t() {
        assert!(fill(&w("tT"), 1, 1).is_err());
    }
}
