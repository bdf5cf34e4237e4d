//! Van Kampen diagrams over `𝓡_{n-1}` as combinatorial planar maps.
//!
//! A diagram is stored as a rotation system: every edge has two half-edges
//! (`2e` runs tail → head, `2e+1` head → tail) and each vertex lists its
//! outgoing half-edges in clockwise order. Faces are traced with
//! `φ(h) = σ(twin(h))`, where `σ` is the rotation successor, which keeps each
//! face on the right; the outer face is therefore read counterclockwise
//! starting at the basepoint half-edge. `a`-edges are orientation-free.

mod fill;
mod map;

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use fill::{fill, fill_with_cap, FillOutcome, Filler, Move, DEFAULT_LENGTH_SLACK};
pub(crate) use map::CombMap;

use crate::cayley::EdgeLabel;
use crate::error::{Error, Result};
use crate::word::{match_relator, relator, GroupWord, Letter};

pub(crate) const TRAVERSAL: &str = "ccw";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DEdge {
    pub tail: usize,
    pub head: usize,
    pub label: EdgeLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outer {
    /// A half-edge on the outer face; `None` only for the one-vertex diagram.
    pub basepoint: Option<usize>,
    pub base_vertex: usize,
    pub traversal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub level: u32,
    pub vertex_count: usize,
    pub edges: Vec<DEdge>,
    pub rotation: Vec<Vec<usize>>,
    pub outer: Outer,
}

/// Faces traced from a diagram's rotation system.
#[derive(Clone, Debug)]
pub struct Faces {
    pub cycles: Vec<Vec<usize>>,
    pub face_of: Vec<usize>,
    /// Index into `cycles` of the outer face, `None` for the one-vertex diagram.
    pub outer: Option<usize>,
}

impl Faces {
    pub fn inner(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.cycles.len()).filter(move |&f| Some(f) != self.outer)
    }

    pub fn is_outer(&self, f: usize) -> bool {
        Some(f) == self.outer
    }
}

/// One problem found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    Structure(String),
    Disconnected,
    Euler { vertices: usize, edges: usize, faces: usize },
    FaceLabel { face: usize, word: String },
    Basepoint(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Structure(s) => write!(f, "structure: {s}"),
            Violation::Disconnected => write!(f, "diagram is not connected"),
            Violation::Euler { vertices, edges, faces } => write!(
                f,
                "euler characteristic {vertices} - {edges} + {faces} != 2"
            ),
            Violation::FaceLabel { face, word } => {
                write!(f, "face {face} reads {word}, which is not a relator")
            }
            Violation::Basepoint(s) => write!(f, "basepoint: {s}"),
        }
    }
}

impl Diagram {
    pub fn single_vertex(level: u32) -> Self {
        Diagram {
            level,
            vertex_count: 1,
            edges: Vec::new(),
            rotation: vec![Vec::new()],
            outer: Outer { basepoint: None, base_vertex: 0, traversal: TRAVERSAL.to_string() },
        }
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edge_of(h: usize) -> usize {
        h / 2
    }

    pub fn letter(&self, h: usize) -> Letter {
        let e = &self.edges[h / 2];
        match (e.label, h % 2) {
            (EdgeLabel::A, _) => Letter::A,
            (EdgeLabel::X, 0) => Letter::X,
            (EdgeLabel::X, _) => Letter::XInv,
        }
    }

    pub fn tail(&self, h: usize) -> usize {
        let e = &self.edges[h / 2];
        if h.is_multiple_of(2) {
            e.tail
        } else {
            e.head
        }
    }

    pub fn head(&self, h: usize) -> usize {
        self.tail(h ^ 1)
    }

    /// Rotation successor of every half-edge; `usize::MAX` for half-edges
    /// missing from the rotation lists.
    pub(crate) fn sigma(&self) -> Vec<usize> {
        let mut sigma = vec![usize::MAX; self.half_edge_count()];
        for rot in &self.rotation {
            for (m, &h) in rot.iter().enumerate() {
                if h < sigma.len() {
                    sigma[h] = rot[(m + 1) % rot.len()];
                }
            }
        }
        sigma
    }

    /// Traces every face. Assumes the rotation system is structurally sound.
    pub fn faces(&self) -> Faces {
        let n = self.half_edge_count();
        let sigma = self.sigma();
        let mut face_of = vec![usize::MAX; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if face_of[start] != usize::MAX {
                continue;
            }
            let f = cycles.len();
            let mut cycle = Vec::new();
            let mut h = start;
            while face_of[h] == usize::MAX {
                face_of[h] = f;
                cycle.push(h);
                h = sigma[h ^ 1];
                if h == usize::MAX {
                    break;
                }
            }
            cycles.push(cycle);
        }
        let outer = self.outer.basepoint.map(|b| face_of[b]);
        // Rotate the outer cycle to start at the basepoint.
        if let (Some(f), Some(b)) = (outer, self.outer.basepoint) {
            let c = &mut cycles[f];
            if let Some(p) = c.iter().position(|&h| h == b) {
                c.rotate_left(p);
            }
        }
        Faces { cycles, face_of, outer }
    }

    pub fn cycle_word(&self, cycle: &[usize]) -> GroupWord {
        GroupWord::new(cycle.iter().map(|&h| self.letter(h)).collect())
    }

    /// Outer boundary word from the basepoint, without validating.
    pub fn outer_word(&self) -> GroupWord {
        let faces = self.faces();
        match faces.outer {
            Some(f) => self.cycle_word(&faces.cycles[f]),
            None => GroupWord::empty(),
        }
    }

    /// Boundary vertices in traversal order (one per boundary half-edge).
    pub fn boundary_half_edges(&self) -> Vec<usize> {
        let faces = self.faces();
        faces.outer.map(|f| faces.cycles[f].clone()).unwrap_or_default()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph diagram {\n");
        for v in 0..self.vertex_count {
            let shape = if v == self.outer.base_vertex { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  v{v} [shape={shape}, label=\"{v}\"];");
        }
        for (e, edge) in self.edges.iter().enumerate() {
            match edge.label {
                EdgeLabel::A => {
                    let _ = writeln!(
                        s,
                        "  v{} -> v{} [label=\"a{e}\", dir=none, color=red];",
                        edge.tail, edge.head
                    );
                }
                EdgeLabel::X => {
                    let _ = writeln!(s, "  v{} -> v{} [label=\"x{e}\"];", edge.tail, edge.head);
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Checks every diagram invariant and lists what fails.
pub fn validate(d: &Diagram) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = d.half_edge_count();
    if d.rotation.len() != d.vertex_count {
        out.push(Violation::Structure(format!(
            "{} rotation lists for {} vertices",
            d.rotation.len(),
            d.vertex_count
        )));
        return out;
    }
    for (e, edge) in d.edges.iter().enumerate() {
        if edge.tail >= d.vertex_count || edge.head >= d.vertex_count {
            out.push(Violation::Structure(format!("edge {e} has an endpoint out of range")));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let mut seen = vec![false; n];
    for (v, rot) in d.rotation.iter().enumerate() {
        for &h in rot {
            if h >= n {
                out.push(Violation::Structure(format!("vertex {v} lists unknown half-edge {h}")));
                continue;
            }
            if seen[h] {
                out.push(Violation::Structure(format!("half-edge {h} listed twice")));
            }
            seen[h] = true;
            if d.tail(h) != v {
                out.push(Violation::Structure(format!(
                    "half-edge {h} listed at vertex {v} but starts at {}",
                    d.tail(h)
                )));
            }
        }
        if rot.is_empty() && d.vertex_count > 1 {
            out.push(Violation::Structure(format!("vertex {v} is isolated")));
        }
    }
    if let Some(h) = seen.iter().position(|s| !s) {
        out.push(Violation::Structure(format!("half-edge {h} missing from the rotation")));
    }
    if !out.is_empty() {
        return out;
    }
    match d.outer.basepoint {
        Some(b) if b >= n => out.push(Violation::Basepoint(format!("half-edge {b} out of range"))),
        Some(b) if d.tail(b) != d.outer.base_vertex => out.push(Violation::Basepoint(format!(
            "base vertex {} is not the tail of half-edge {b}",
            d.outer.base_vertex
        ))),
        None if n > 0 => out.push(Violation::Basepoint("missing basepoint".into())),
        None if d.vertex_count != 1 => {
            out.push(Violation::Basepoint("edgeless diagram must have one vertex".into()))
        }
        _ => {}
    }
    if d.outer.traversal != TRAVERSAL {
        out.push(Violation::Basepoint(format!(
            "unsupported traversal {:?}",
            d.outer.traversal
        )));
    }
    if !out.is_empty() {
        return out;
    }

    // connectivity over the 1-skeleton
    let mut reached = vec![false; d.vertex_count];
    let mut stack = vec![0usize];
    reached[0] = true;
    while let Some(v) = stack.pop() {
        for &h in &d.rotation[v] {
            let w = d.head(h);
            if !reached[w] {
                reached[w] = true;
                stack.push(w);
            }
        }
    }
    if reached.iter().any(|r| !r) {
        out.push(Violation::Disconnected);
    }

    let faces = d.faces();
    let f = if n == 0 { 1 } else { faces.cycles.len() };
    if d.vertex_count + f != d.edges.len() + 2 {
        out.push(Violation::Euler { vertices: d.vertex_count, edges: d.edges.len(), faces: f });
    }
    for face in faces.inner() {
        let word = d.cycle_word(&faces.cycles[face]);
        if match_relator(&word, d.level).is_none() {
            out.push(Violation::FaceLabel { face, word: word.to_string() });
        }
    }
    out
}

pub(crate) fn require_valid(d: &Diagram) -> Result<()> {
    let v = validate(d);
    if v.is_empty() {
        Ok(())
    } else {
        let msgs: Vec<String> = v.iter().map(|v| v.to_string()).collect();
        Err(Error::InvalidDiagram(msgs.join("; ")))
    }
}

/// Boundary word read from the basepoint.
pub fn boundary_word(d: &Diagram) -> Result<GroupWord> {
    require_valid(d)?;
    Ok(d.outer_word())
}

/// Number of inner faces.
pub fn area(d: &Diagram) -> usize {
    if d.edges.is_empty() {
        return 0;
    }
    d.faces().cycles.len() - 1
}

/// One factor `u · relator(k)^{±1} · u⁻¹` of a product of conjugates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugateFactor {
    pub conjugator: GroupWord,
    pub relator: i64,
    pub inverse: bool,
}

impl ConjugateFactor {
    pub fn new(conjugator: GroupWord, relator: i64, inverse: bool) -> Self {
        ConjugateFactor { conjugator, relator, inverse }
    }

    pub fn word(&self) -> Result<GroupWord> {
        let r = relator(self.relator)?;
        let r = if self.inverse { r.inverse() } else { r };
        Ok(self.conjugator.concat(&r).concat(&self.conjugator.inverse()))
    }
}

/// Wedge of lollipops reading `∏ uᵢ rᵢ^{±1} uᵢ⁻¹` without reduction.
pub fn diagram_from_conjugates(factors: &[ConjugateFactor], level: u32) -> Result<Diagram> {
    if level == 0 {
        return Err(Error::InvalidLevel(0));
    }
    let mut map = CombMap::empty(level);
    for f in factors {
        if f.relator >= level as i64 {
            return Err(Error::Config(format!(
                "relator({}) is not in the relator set of level {level}",
                f.relator
            )));
        }
        f.conjugator.require_at_free()?;
        let r = relator(f.relator)?;
        let r = if f.inverse { r.inverse() } else { r };
        map.push_lollipop(f.conjugator.letters(), r.letters());
    }
    Ok(map.finish())
}

/// Identifies adjacent boundary edges reading `s s⁻¹` until the boundary is
/// freely reduced. Spherical pieces pinched off in the process are dropped.
pub fn fold(d: &Diagram) -> Result<Diagram> {
    require_valid(d)?;
    let mut map = CombMap::from_diagram(d);
    map.fold_all();
    Ok(map.finish())
}

/// Distinct edge ids carrying the label `a`.
pub fn a_edges(d: &Diagram) -> BTreeSet<usize> {
    d.edges.iter().enumerate().filter(|(_, e)| e.label == EdgeLabel::A).map(|(i, _)| i).collect()
}
