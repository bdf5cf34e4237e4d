//! Mutable combinatorial map used to build diagrams.
//!
//! A map is a set of half-edges with an involution `twin` and a face
//! permutation `next`. Vertices are the orbits of `next ∘ twin` and are never
//! stored, so gluing and folding only re-pair half-edges; vertex merges and
//! splits fall out of the permutation algebra. The outer face is kept as an
//! explicit sequence starting at the basepoint.

use std::collections::HashMap;

use super::{DEdge, Diagram, Outer};
use crate::cayley::EdgeLabel;
use crate::word::{cancels, Letter};

#[derive(Clone, Debug)]
pub(crate) struct CombMap {
    letter: Vec<Letter>,
    twin: Vec<usize>,
    next: Vec<usize>,
    alive: Vec<bool>,
    pub(crate) boundary: Vec<usize>,
    level: u32,
}

impl CombMap {
    pub(crate) fn empty(level: u32) -> Self {
        CombMap {
            letter: Vec::new(),
            twin: Vec::new(),
            next: Vec::new(),
            alive: Vec::new(),
            boundary: Vec::new(),
            level,
        }
    }

    pub(crate) fn from_diagram(d: &Diagram) -> Self {
        let n = 2 * d.edges.len();
        let mut map = CombMap::empty(d.level);
        map.letter = (0..n).map(|h| d.letter(h)).collect();
        map.twin = (0..n).map(|h| h ^ 1).collect();
        map.alive = vec![true; n];
        let sigma = d.sigma();
        map.next = (0..n).map(|h| sigma[h ^ 1]).collect();
        if let Some(start) = d.outer.basepoint {
            let mut h = start;
            loop {
                map.boundary.push(h);
                h = map.next[h];
                if h == start {
                    break;
                }
            }
        }
        map
    }

    pub(crate) fn boundary_letters(&self) -> Vec<Letter> {
        self.boundary.iter().map(|&h| self.letter[h]).collect()
    }

    fn new_pair(&mut self, l: Letter) -> usize {
        let h = self.letter.len();
        self.letter.extend([l, l.inverse()]);
        self.twin.extend([h + 1, h]);
        self.next.extend([usize::MAX, usize::MAX]);
        self.alive.extend([true, true]);
        h
    }

    fn close_cycle(&mut self, cycle: &[usize]) {
        for (m, &h) in cycle.iter().enumerate() {
            self.next[h] = cycle[(m + 1) % cycle.len()];
        }
    }

    /// Attaches a new 2-cell along the boundary arc `[i, i+p)`. The cell's
    /// other side is a fresh path reading `path` from the start of the arc to
    /// its end, which replaces the arc on the boundary. The new cell reads
    /// the arc followed by the inverse of `path`.
    pub(crate) fn glue(&mut self, i: usize, p: usize, path: &[Letter]) {
        assert!(i + p <= self.boundary.len(), "arc outside the boundary");
        assert!(p + path.len() > 0, "empty cell");
        let fresh: Vec<usize> = path.iter().map(|&l| self.new_pair(l)).collect();
        let mut cell: Vec<usize> = self.boundary[i..i + p].to_vec();
        cell.extend(fresh.iter().rev().map(|&g| g + 1));
        self.close_cycle(&cell);
        self.boundary.splice(i..i + p, fresh);
        self.prune();
    }

    /// Inserts a spur reading `l l⁻¹` before boundary position `pos`.
    pub(crate) fn insert_spur(&mut self, pos: usize, l: Letter) {
        let h = self.new_pair(l);
        self.boundary.splice(pos..pos, [h, h + 1]);
        self.sync_outer();
    }

    /// Adds a lollipop at the end of the boundary: a stem reading
    /// `stem`, a loop reading `face`, and the stem traversed back.
    pub(crate) fn push_lollipop(&mut self, stem: &[Letter], face: &[Letter]) {
        let s: Vec<usize> = stem.iter().map(|&l| self.new_pair(l)).collect();
        let f: Vec<usize> = face.iter().map(|&l| self.new_pair(l)).collect();
        let inner: Vec<usize> = f.iter().rev().map(|&g| g + 1).collect();
        if !inner.is_empty() {
            self.close_cycle(&inner);
        }
        self.boundary.extend(s.iter().copied());
        self.boundary.extend(f.iter().copied());
        self.boundary.extend(s.iter().rev().map(|&g| g + 1));
    }

    /// Folds adjacent boundary half-edges reading `s s⁻¹` until the boundary
    /// word is freely reduced. Returns the number of folds.
    pub(crate) fn fold_all(&mut self) -> usize {
        let mut folds = 0;
        loop {
            let pos = self.boundary.windows(2).position(|w| {
                cancels(self.letter[w[0]], self.letter[w[1]])
            });
            let Some(j) = pos else { break };
            let (h1, h2) = (self.boundary[j], self.boundary[j + 1]);
            if self.twin[h1] != h2 {
                let (a, b) = (self.twin[h1], self.twin[h2]);
                self.twin[a] = b;
                self.twin[b] = a;
            }
            self.alive[h1] = false;
            self.alive[h2] = false;
            self.boundary.drain(j..j + 2);
            folds += 1;
            self.prune();
        }
        folds
    }

    /// Removes the given inner faces and glues the remaining half-edges of
    /// each pair `(u, v)` to each other.
    pub(crate) fn excise(&mut self, faces: &[Vec<usize>], reglue: &[(usize, usize)]) {
        for f in faces {
            for &h in f {
                self.alive[h] = false;
            }
        }
        for &(u, v) in reglue {
            self.twin[u] = v;
            self.twin[v] = u;
        }
        self.prune();
    }

    fn sync_outer(&mut self) {
        if !self.boundary.is_empty() {
            let b = self.boundary.clone();
            self.close_cycle(&b);
        }
    }

    /// Drops every component not containing the outer boundary; such
    /// components are spheres split off by a fold or a full-boundary cell.
    fn prune(&mut self) {
        self.sync_outer();
        let mut keep = vec![false; self.letter.len()];
        let mut stack: Vec<usize> = self.boundary.clone();
        for &h in &stack {
            keep[h] = true;
        }
        while let Some(h) = stack.pop() {
            for g in [self.twin[h], self.next[h]] {
                if self.alive[g] && !keep[g] {
                    keep[g] = true;
                    stack.push(g);
                }
            }
        }
        for (h, k) in keep.into_iter().enumerate() {
            if !k {
                self.alive[h] = false;
            }
        }
    }

    pub(crate) fn finish(mut self) -> Diagram {
        self.prune();
        let level = self.level;
        if self.boundary.is_empty() {
            return Diagram::single_vertex(level);
        }
        // Canonical half-edge numbering: walk the live half-edges in id order.
        let mut new_edge: HashMap<usize, usize> = HashMap::new();
        let mut forward: Vec<usize> = Vec::new();
        for h in 0..self.letter.len() {
            if !self.alive[h] || new_edge.contains_key(&h) {
                continue;
            }
            let t = self.twin[h];
            let fwd = match self.letter[h] {
                Letter::X => h,
                Letter::XInv => t,
                _ => h.min(t),
            };
            let e = forward.len();
            forward.push(fwd);
            new_edge.insert(h, e);
            new_edge.insert(t, e);
        }
        let new_id = |h: usize| -> usize {
            let e = new_edge[&h];
            if forward[e] == h {
                2 * e
            } else {
                2 * e + 1
            }
        };
        let n = 2 * forward.len();
        let mut old_of = vec![0usize; n];
        for e in 0..forward.len() {
            old_of[2 * e] = forward[e];
            old_of[2 * e + 1] = self.twin[forward[e]];
        }
        // σ(g) = next(twin(g)) in new ids
        let sigma: Vec<usize> = (0..n).map(|g| new_id(self.next[self.twin[old_of[g]]])).collect();
        let mut vertex_of = vec![usize::MAX; n];
        let mut rotation: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            if vertex_of[g] != usize::MAX {
                continue;
            }
            let v = rotation.len();
            let mut orbit = Vec::new();
            let mut cur = g;
            loop {
                vertex_of[cur] = v;
                orbit.push(cur);
                cur = sigma[cur];
                if cur == g {
                    break;
                }
            }
            rotation.push(orbit);
        }
        let edges = (0..forward.len())
            .map(|e| DEdge {
                tail: vertex_of[2 * e],
                head: vertex_of[2 * e + 1],
                label: match self.letter[forward[e]] {
                    Letter::A => EdgeLabel::A,
                    _ => EdgeLabel::X,
                },
            })
            .collect();
        let basepoint = new_id(self.boundary[0]);
        Diagram {
            level,
            vertex_count: rotation.len(),
            edges,
            rotation,
            outer: Outer {
                basepoint: Some(basepoint),
                base_vertex: vertex_of[basepoint],
                traversal: super::TRAVERSAL.to_string(),
            },
        }
    }
}
