//! Finite balls in the Cayley graph `Γ(L, {a, x})` and the 2-complexes
//! `Γ(L, {a, x}, 𝓡_{n-1})`, with iterated star neighbourhoods.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lamp::{lamp_inv, lamp_mul, LampElement};
use crate::word::{relator, Letter};

const MOVES: [Letter; 3] = [Letter::A, Letter::X, Letter::XInv];

fn step(g: &LampElement, l: Letter) -> LampElement {
    let mut h = g.clone();
    h.apply(l).expect("ball moves are a, x, X");
    h
}

/// All elements within a given word-metric radius of the identity, with
/// their distances.
#[derive(Clone, Debug)]
pub struct WordBall {
    radius: usize,
    dist: HashMap<LampElement, usize>,
}

impl WordBall {
    pub fn new(radius: usize) -> Self {
        let mut dist = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(LampElement::identity(), 0);
        queue.push_back(LampElement::identity());
        while let Some(g) = queue.pop_front() {
            let d = dist[&g];
            if d == radius {
                continue;
            }
            for l in MOVES {
                let h = step(&g, l);
                if !dist.contains_key(&h) {
                    dist.insert(h.clone(), d + 1);
                    queue.push_back(h);
                }
            }
        }
        WordBall { radius, dist }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn contains(&self, g: &LampElement) -> bool {
        self.dist.contains_key(g)
    }

    /// Distance from the identity, or `None` if `g` lies outside the ball.
    pub fn distance(&self, g: &LampElement) -> Option<usize> {
        self.dist.get(g).copied()
    }

    pub fn elements(&self) -> impl Iterator<Item = (&LampElement, usize)> {
        self.dist.iter().map(|(g, &d)| (g, d))
    }
}

/// Word length of `g` over `{a, x}`: one `a` per lit lamp plus the shortest
/// walk from 0 to the final shift covering every lit lamp.
pub fn word_length(g: &LampElement) -> usize {
    let lo = g.lamps.first().copied().unwrap_or(0).min(0).min(g.shift);
    let hi = g.lamps.last().copied().unwrap_or(0).max(0).max(g.shift);
    let left_first = -lo + (hi - lo) + (hi - g.shift);
    let right_first = hi + (hi - lo) + (g.shift - lo);
    g.lamps.len() + left_first.min(right_first) as usize
}

/// Word-metric distance between `p` and `q`, or `None` when it exceeds `bound`.
pub fn distance(p: &LampElement, q: &LampElement, bound: usize) -> Option<usize> {
    let target = lamp_mul(&lamp_inv(p), q);
    if target.is_identity() {
        return Some(0);
    }
    let mut seen = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(LampElement::identity(), 0usize);
    queue.push_back(LampElement::identity());
    while let Some(g) = queue.pop_front() {
        let d = seen[&g];
        if d == bound {
            continue;
        }
        for l in MOVES {
            let h = step(&g, l);
            if h == target {
                return Some(d + 1);
            }
            if !seen.contains_key(&h) {
                seen.insert(h.clone(), d + 1);
                queue.push_back(h);
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeLabel {
    A,
    X,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexEdge {
    pub source: usize,
    pub target: usize,
    pub label: EdgeLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub base: usize,
    /// Index `k` of `relator(k)`; 0 is the `a²` cell.
    pub relator: i64,
    /// Edge ids in boundary order; an `a²` cell runs over its edge twice.
    pub boundary: Vec<usize>,
    pub vertices: Vec<usize>,
}

/// A ball in `Γ(L, {a,x}, 𝓡_{n-1})`. Vertices are ordered by distance from
/// the identity, then by element order.
#[derive(Clone, Debug)]
pub struct Complex2 {
    vertices: Vec<LampElement>,
    dist: Vec<usize>,
    index: HashMap<LampElement, usize>,
    edges: Vec<ComplexEdge>,
    edge_index: HashMap<(usize, usize, EdgeLabel), usize>,
    cells: Vec<Cell>,
    radius: usize,
    level: u32,
}

pub fn build_ball(radius: usize, level: u32) -> Result<Complex2> {
    if level == 0 {
        return Err(Error::InvalidLevel(0));
    }
    let ball = WordBall::new(radius);
    let mut verts: Vec<(usize, LampElement)> =
        ball.elements().map(|(g, d)| (d, g.clone())).collect();
    verts.sort();
    let dist: Vec<usize> = verts.iter().map(|(d, _)| *d).collect();
    let vertices: Vec<LampElement> = verts.into_iter().map(|(_, g)| g).collect();
    let index: HashMap<LampElement, usize> =
        vertices.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();

    let mut edges = Vec::new();
    let mut edge_index = HashMap::new();
    for (id, g) in vertices.iter().enumerate() {
        if let Some(&t) = index.get(&step(g, Letter::A)) {
            if id < t {
                edge_index.insert((id, t, EdgeLabel::A), edges.len());
                edges.push(ComplexEdge { source: id, target: t, label: EdgeLabel::A });
            }
        }
        if let Some(&t) = index.get(&step(g, Letter::X)) {
            edge_index.insert((id, t, EdgeLabel::X), edges.len());
            edges.push(ComplexEdge { source: id, target: t, label: EdgeLabel::X });
        }
    }

    let mut complex = Complex2 {
        vertices,
        dist,
        index,
        edges,
        edge_index,
        cells: Vec::new(),
        radius,
        level,
    };
    let relators: Vec<_> = (0..level as i64).map(|k| relator(k).expect("k >= 0")).collect();
    let mut cells = Vec::new();
    for base in 0..complex.vertices.len() {
        for (k, r) in relators.iter().enumerate() {
            if let Some((boundary, verts)) = complex.trace_path(base, r.letters()) {
                cells.push(Cell { base, relator: k as i64, boundary, vertices: verts });
            }
        }
    }
    complex.cells = cells;
    Ok(complex)
}

impl Complex2 {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[LampElement] {
        &self.vertices
    }

    pub fn edges(&self) -> &[ComplexEdge] {
        &self.edges
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn vertex_id(&self, g: &LampElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn vertex_distance(&self, v: usize) -> usize {
        self.dist[v]
    }

    pub fn identity_vertex(&self) -> usize {
        0
    }

    fn edge_between(&self, u: usize, l: Letter, v: usize) -> Option<usize> {
        match l {
            Letter::A => self.edge_index.get(&(u.min(v), u.max(v), EdgeLabel::A)).copied(),
            Letter::X => self.edge_index.get(&(u, v, EdgeLabel::X)).copied(),
            Letter::XInv => self.edge_index.get(&(v, u, EdgeLabel::X)).copied(),
            _ => None,
        }
    }

    /// Follows `letters` from `base`; `None` if the path leaves the ball.
    fn trace_path(&self, base: usize, letters: &[Letter]) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut cur = base;
        let mut boundary = Vec::with_capacity(letters.len());
        let mut verts = vec![base];
        for &l in letters {
            let next = *self.index.get(&step(&self.vertices[cur], l))?;
            boundary.push(self.edge_between(cur, l, next)?);
            cur = next;
            verts.push(cur);
        }
        verts.pop();
        verts.sort_unstable();
        verts.dedup();
        Some((boundary, verts))
    }

    fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        MOVES.iter().filter_map(move |&l| self.index.get(&step(&self.vertices[v], l)).copied())
    }

    pub fn subcomplex(&self, vertices: impl IntoIterator<Item = usize>) -> SubComplex<'_> {
        SubComplex::from_vertices(self, vertices.into_iter().collect())
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph ball {\n");
        for (i, g) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{g}\"];");
        }
        for e in &self.edges {
            match e.label {
                EdgeLabel::A => {
                    let _ = writeln!(s, "  v{} -> v{} [label=\"a\", dir=none];", e.source, e.target);
                }
                EdgeLabel::X => {
                    let _ = writeln!(s, "  v{} -> v{} [label=\"x\"];", e.source, e.target);
                }
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Vertex<'a> {
            id: usize,
            element: &'a LampElement,
            distance: usize,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            radius: usize,
            level: u32,
            vertices: Vec<Vertex<'a>>,
            edges: &'a [ComplexEdge],
            cells: &'a [Cell],
        }
        let out = Out {
            radius: self.radius,
            level: self.level,
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(id, element)| Vertex { id, element, distance: self.dist[id] })
                .collect(),
            edges: &self.edges,
            cells: &self.cells,
        };
        serde_json::to_string_pretty(&out).expect("complex serializes")
    }
}

/// A subcomplex determined by its vertex set: an edge or cell belongs iff
/// all of its vertices do.
#[derive(Clone, Debug)]
pub struct SubComplex<'a> {
    ambient: &'a Complex2,
    vertices: BTreeSet<usize>,
    edges: BTreeSet<usize>,
    cells: BTreeSet<usize>,
}

impl<'a> SubComplex<'a> {
    pub fn from_vertices(ambient: &'a Complex2, vertices: BTreeSet<usize>) -> Self {
        let edges = ambient
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| vertices.contains(&e.source) && vertices.contains(&e.target))
            .map(|(i, _)| i)
            .collect();
        let cells = ambient
            .cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.vertices.iter().all(|v| vertices.contains(v)))
            .map(|(i, _)| i)
            .collect();
        SubComplex { ambient, vertices, edges, cells }
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<usize> {
        &self.edges
    }

    pub fn cells(&self) -> &BTreeSet<usize> {
        &self.cells
    }

    pub fn contains_element(&self, g: &LampElement) -> bool {
        self.ambient.vertex_id(g).is_some_and(|v| self.vertices.contains(&v))
    }

    pub fn is_subset_of(&self, other: &SubComplex<'_>) -> bool {
        self.vertices.is_subset(&other.vertices)
            && self.edges.is_subset(&other.edges)
            && self.cells.is_subset(&other.cells)
    }

    /// `st(Q)`.
    pub fn star(&self) -> Result<SubComplex<'a>> {
        let mut out = self.vertices.clone();
        for &v in &self.vertices {
            if self.ambient.dist[v] >= self.ambient.radius {
                return Err(Error::AmbientTooSmall(format!(
                    "vertex {} lies on the frontier of the radius-{} ball",
                    self.ambient.vertices[v], self.ambient.radius
                )));
            }
            out.extend(self.ambient.neighbours(v));
        }
        Ok(SubComplex::from_vertices(self.ambient, out))
    }

    /// `st^k(Q)`, with `st⁰(Q) = Q`.
    pub fn star_k(&self, k: usize) -> Result<SubComplex<'a>> {
        let mut cur = self.clone();
        for _ in 0..k {
            cur = cur.star()?;
        }
        Ok(cur)
    }
}

/// The elements of `⟨a_0, …, a_{n-1}⟩`: every lamp subset of `{0, …, n-1}`.
pub fn finite_subgroup(level: u32) -> Vec<LampElement> {
    (0u64..1 << level)
        .map(|mask| LampElement::new((0..level as i64).filter(|i| mask >> i & 1 == 1), 0))
        .collect()
}

/// Least `K` with the finite subgroup `⟨a_0, …, a_{n-1}⟩ ⊂ st^K(∗)`, computed
/// by iterating stars inside a ball of the given radius.
pub fn compute_k(level: u32, ambient_radius: usize) -> Result<usize> {
    let complex = build_ball(ambient_radius, level)?;
    let subgroup = finite_subgroup(level);
    if let Some(g) = subgroup.iter().find(|g| complex.vertex_id(g).is_none()) {
        return Err(Error::AmbientTooSmall(format!("subgroup element {g} is outside the ball")));
    }
    let mut st = complex.subcomplex([complex.identity_vertex()]);
    let mut k = 0;
    loop {
        if subgroup.iter().all(|g| st.contains_element(g)) {
            return Ok(k);
        }
        st = st.star()?;
        k += 1;
    }
}
