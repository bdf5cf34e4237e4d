//! `a`-bands in van Kampen diagrams.
//!
//! Every cell has an even number of `a`-edges along its boundary and each is
//! paired with the one halfway around: a commutator cell reading
//! `a x^{-k} a x^k a x^{-k} a x^k` pairs its first and third `a`, and its
//! second and fourth; a bigon pairs its two edges. A band is a maximal chain
//! of cells linked through these pairs.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::diagram::{require_valid, CombMap, Diagram, Faces};
use crate::error::{Error, Result};
use crate::word::{GroupWord, Letter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandKind {
    BoundaryToBoundary,
    Annulus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Band {
    /// Face ids in band order.
    pub cells: Vec<usize>,
    /// Edge ids; one more than `cells` for a boundary-to-boundary band.
    pub connecting_edges: Vec<usize>,
    pub kind: BandKind,
    /// Half-edge through which the band enters each cell.
    #[serde(skip)]
    entries: Vec<usize>,
    #[serde(skip)]
    sides: (GroupWord, GroupWord),
}

impl Band {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }
}

/// Position of `h` among the `a`-letters of its face, and the whole list.
fn a_positions(d: &Diagram, cycle: &[usize]) -> Vec<usize> {
    (0..cycle.len()).filter(|&i| d.letter(cycle[i]) == Letter::A).collect()
}

fn position_in(cycle: &[usize], h: usize) -> usize {
    cycle.iter().position(|&g| g == h).expect("half-edge lies on its face")
}

/// The half-edge paired with `h` inside its (inner) face.
fn opposite_half(d: &Diagram, faces: &Faces, h: usize) -> usize {
    let cycle = &faces.cycles[faces.face_of[h]];
    let apos = a_positions(d, cycle);
    let i = position_in(cycle, h);
    let idx = apos.iter().position(|&p| p == i).expect("h is an a-letter");
    cycle[apos[(idx + apos.len() / 2) % apos.len()]]
}

/// The `a`-edge of `face` opposite to `edge`.
pub fn opposite_a_edge(d: &Diagram, face: usize, edge: usize) -> Result<usize> {
    require_valid(d)?;
    let faces = d.faces();
    if face >= faces.cycles.len() || faces.is_outer(face) {
        return Err(Error::EdgeNotInFace { edge, face });
    }
    let cycle = &faces.cycles[face];
    let h = cycle
        .iter()
        .copied()
        .find(|&h| h / 2 == edge && d.letter(h) == Letter::A)
        .ok_or(Error::EdgeNotInFace { edge, face })?;
    Ok(opposite_half(d, &faces, h) / 2)
}

/// Arcs of `face` strictly between the entry half-edge and its opposite, and
/// strictly between the opposite and the entry again.
fn arcs(d: &Diagram, faces: &Faces, entry: usize) -> (Vec<usize>, Vec<usize>) {
    let cycle = &faces.cycles[faces.face_of[entry]];
    let exit = opposite_half(d, faces, entry);
    let i = position_in(cycle, entry);
    let j = position_in(cycle, exit);
    let len = cycle.len();
    let span = |from: usize, to: usize| -> Vec<usize> {
        let mut out = Vec::new();
        let mut p = (from + 1) % len;
        while p != to {
            out.push(cycle[p]);
            p = (p + 1) % len;
        }
        out
    };
    (span(i, j), span(j, i))
}

/// Walks from half-edge `h` through inner faces. Returns the visited
/// `(entry half-edge)` list and whether the walk closed up at `h`.
fn walk(d: &Diagram, faces: &Faces, h: usize) -> (Vec<usize>, bool) {
    let mut entries = Vec::new();
    let mut seen_edges = BTreeSet::from([h / 2]);
    let mut cur = h;
    loop {
        if faces.is_outer(faces.face_of[cur]) {
            return (entries, false);
        }
        entries.push(cur);
        let next = opposite_half(d, faces, cur) ^ 1;
        if next == h {
            return (entries, true);
        }
        if !seen_edges.insert(next / 2) {
            // only possible in a non-planar stitching; stop rather than loop
            return (entries, true);
        }
        cur = next;
    }
}

fn side_words(d: &Diagram, faces: &Faces, entries: &[usize]) -> (GroupWord, GroupWord) {
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    for &e in entries {
        let (a1, a2) = arcs(d, faces, e);
        s1.extend(a1.iter().map(|&h| d.letter(h)));
        s2.push(a2);
    }
    // the second side runs against the band direction; read it forwards
    let s2: Vec<Letter> = s2.iter().rev().flatten().map(|&h| d.letter(h)).collect();
    (GroupWord::new(s1), GroupWord::new(s2).inverse())
}

fn build_band(d: &Diagram, faces: &Faces, entries: Vec<usize>, edges: Vec<usize>, kind: BandKind) -> Band {
    let cells = entries.iter().map(|&h| faces.face_of[h]).collect();
    let sides = side_words(d, faces, &entries);
    Band { cells, connecting_edges: edges, kind, entries, sides }
}

fn trace_with(d: &Diagram, faces: &Faces, edge: usize) -> Band {
    let (fwd, closed) = walk(d, faces, 2 * edge);
    if closed {
        let edges: Vec<usize> = fwd.iter().map(|&h| h / 2).collect();
        // start at the least connecting edge, keeping the direction
        let start = (0..edges.len()).min_by_key(|&i| edges[i]).unwrap_or(0);
        let mut entries = fwd;
        entries.rotate_left(start);
        let edges = entries.iter().map(|&h| h / 2).collect();
        return build_band(d, faces, entries, edges, BandKind::Annulus);
    }
    let (back, _) = walk(d, faces, 2 * edge + 1);
    // Re-express the backward walk as entries in the forward direction:
    // entering a cell through g and leaving through its opposite becomes
    // entering through the opposite's twin.
    let mut entries: Vec<usize> = back.iter().rev().map(|&g| opposite_half(d, faces, g)).collect();
    entries.extend(fwd);
    let mut edges: Vec<usize> = entries.iter().map(|&h| h / 2).collect();
    let last = match entries.last() {
        Some(&h) => opposite_half(d, faces, h) / 2,
        None => edge,
    };
    edges.push(last);
    let band = build_band(d, faces, entries, edges, BandKind::BoundaryToBoundary);
    if band.connecting_edges[0] > *band.connecting_edges.last().unwrap() {
        reverse_band(d, faces, band)
    } else {
        band
    }
}

fn reverse_band(d: &Diagram, faces: &Faces, b: Band) -> Band {
    let entries: Vec<usize> = b.entries.iter().rev().map(|&h| opposite_half(d, faces, h)).collect();
    let mut edges = b.connecting_edges;
    edges.reverse();
    build_band(d, faces, entries, edges, b.kind)
}

/// The band through `start`, which must be an `a`-edge.
pub fn trace_band(d: &Diagram, start: usize) -> Result<Band> {
    require_valid(d)?;
    match d.edges.get(start) {
        Some(e) if e.label == crate::cayley::EdgeLabel::A => {}
        _ => return Err(Error::InvalidDiagram(format!("edge {start} is not an a-edge"))),
    }
    Ok(trace_with(d, &d.faces(), start))
}

/// Every band of `d`, ordered by least connecting edge.
pub fn all_bands(d: &Diagram) -> Result<Vec<Band>> {
    require_valid(d)?;
    let faces = d.faces();
    let mut covered = BTreeSet::new();
    let mut out = Vec::new();
    for e in crate::diagram::a_edges(d) {
        if covered.contains(&e) {
            continue;
        }
        let b = trace_with(d, &faces, e);
        covered.extend(b.connecting_edges.iter().copied());
        out.push(b);
    }
    out.sort_by_key(|b| b.connecting_edges.iter().min().copied());
    Ok(out)
}

/// True when some cell occurs twice along the band.
pub fn self_crosses(b: &Band) -> bool {
    let mut seen = BTreeSet::new();
    b.cells.iter().any(|c| !seen.insert(*c))
}

/// For each repeated cell of a self-crossing band: the cell, the x-exponent
/// sum along the band side between the two visits, and the x-exponent sum
/// along the cell boundary between the two entry edges. In `L` the two
/// paths join the same vertices, so unequal sums expose the crossing.
pub fn self_crossing_exponents(d: &Diagram, b: &Band) -> Vec<(usize, i64, i64)> {
    let faces = d.faces();
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for (i, &c) in b.cells.iter().enumerate() {
        if let Some(&j) = first.get(&c) {
            let along_band: i64 = b.entries[j..i]
                .iter()
                .map(|&h| {
                    let (a1, _) = arcs(d, &faces, h);
                    a1.iter().map(|&g| d.letter(g).x_exponent()).sum::<i64>()
                })
                .sum();
            let cycle = &faces.cycles[c];
            let (p, q) = (position_in(cycle, b.entries[j]), position_in(cycle, b.entries[i]));
            let mut around = 0;
            let mut t = p;
            while t != q {
                around += d.letter(cycle[t]).x_exponent();
                t = (t + 1) % cycle.len();
            }
            out.push((c, along_band, around));
        } else {
            first.insert(c, i);
        }
    }
    out
}

/// Pairs of bands (by index into `bands`) sharing a cell.
pub fn crossings(bands: &[Band]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..bands.len() {
        let ci: BTreeSet<usize> = bands[i].cells.iter().copied().collect();
        for (j, bj) in bands.iter().enumerate().skip(i + 1) {
            for &c in &bj.cells {
                if ci.contains(&c) {
                    out.push((i, j, c));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The two boundary arcs of the band, both read from its first connecting
/// edge towards its last. Each cell contributes `x^{∓k} a x^{±k}` to both,
/// the sign depending on the direction the band runs through it.
pub fn band_side_words(b: &Band) -> (GroupWord, GroupWord) {
    b.sides.clone()
}

/// Cuts out an annular band and glues its two side circles together.
pub fn remove_annulus(d: &Diagram, b: &Band) -> Result<Diagram> {
    require_valid(d)?;
    if b.kind != BandKind::Annulus {
        return Err(Error::NotAnnulus);
    }
    let faces = d.faces();
    if b.entries.iter().any(|&h| h >= d.half_edge_count()) || b.entries.is_empty() {
        return Err(Error::InvalidDiagram("band does not belong to this diagram".into()));
    }
    let band_faces: BTreeSet<usize> = b.entries.iter().map(|&h| faces.face_of[h]).collect();
    let mut side1 = Vec::new();
    let mut side2 = Vec::new();
    for &e in &b.entries {
        let (a1, a2) = arcs(d, &faces, e);
        side1.extend(a1);
        side2.push(a2);
    }
    // Half-edges of the second side, inside the band, aligned with side 1.
    let side2: Vec<usize> = side2.iter().rev().flat_map(|a| a.iter().rev().copied()).collect();
    if side1.len() != side2.len() {
        return Err(Error::DegenerateAnnulus("sides have different lengths".into()));
    }
    let inside = |h: usize| band_faces.contains(&faces.face_of[h]);
    let mut zip: BTreeMap<usize, usize> = BTreeMap::new();
    for (&s, &w) in side1.iter().zip(&side2) {
        if d.letter(s) != d.letter(w).inverse() {
            return Err(Error::DegenerateAnnulus("side labels differ".into()));
        }
        zip.insert(s, w);
        zip.insert(w, s);
    }
    // Identifying the sides zips each side edge to its partner; edges with
    // band cells on both sides (spurs inside the ring) are zipped through.
    let mut reglue = Vec::new();
    let mut done = BTreeSet::new();
    for &start in zip.keys() {
        let o = start ^ 1;
        if inside(o) || done.contains(&o) {
            continue;
        }
        let mut g = start;
        let mut steps = 0;
        let partner = loop {
            let w = *zip.get(&g).ok_or_else(|| {
                Error::DegenerateAnnulus(format!("edge {} borders the band off its sides", g / 2))
            })?;
            let t = w ^ 1;
            if !inside(t) {
                break t;
            }
            g = t;
            steps += 1;
            if steps > zip.len() {
                return Err(Error::DegenerateAnnulus("side identification does not terminate".into()));
            }
        };
        done.insert(o);
        done.insert(partner);
        reglue.push((o, partner));
    }
    let cells: Vec<Vec<usize>> = band_faces.iter().map(|&f| faces.cycles[f].clone()).collect();
    let mut map = CombMap::from_diagram(d);
    map.excise(&cells, &reglue);
    let out = map.finish();
    require_valid(&out)?;
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BandEntry {
    pub cells: Vec<usize>,
    pub connecting_edges: Vec<usize>,
    pub kind: BandKind,
    pub sides: [String; 2],
    pub side_exponent_sums: [i64; 2],
    pub self_crosses: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BandReport {
    pub level: u32,
    pub area: usize,
    pub a_edges: usize,
    pub bands: Vec<BandEntry>,
    /// `[band, band, shared cell]`.
    pub crossings: Vec<[usize; 3]>,
}

pub fn band_report(d: &Diagram) -> Result<BandReport> {
    let bands = all_bands(d)?;
    let entries = bands
        .iter()
        .map(|b| {
            let (s1, s2) = band_side_words(b);
            BandEntry {
                cells: b.cells.clone(),
                connecting_edges: b.connecting_edges.clone(),
                kind: b.kind,
                side_exponent_sums: [s1.x_exponent_sum(), s2.x_exponent_sum()],
                sides: [s1.to_string(), s2.to_string()],
                self_crosses: self_crosses(b),
            }
        })
        .collect();
    Ok(BandReport {
        level: d.level,
        area: crate::diagram::area(d),
        a_edges: crate::diagram::a_edges(d).len(),
        bands: entries,
        crossings: crossings(&bands).into_iter().map(|(i, j, c)| [i, j, c]).collect(),
    })
}

impl BandReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("band reports serialize")
    }
}

/// Hand-built diagrams with known band structure.
pub mod fixtures {
    use super::*;
    use crate::diagram::{diagram_from_conjugates, ConjugateFactor};
    use crate::word::relator;

    /// A bigon with a stem `x^k` at each vertex, wrapped by a ring of two
    /// `relator(k)` cells whose connecting edges form an annular band.
    /// Boundary `(x^{-k} a x^k)²`, area 3, at level `k + 1`.
    pub fn annulus(k: i64) -> Result<Diagram> {
        if k < 1 {
            return Err(Error::Config("annulus fixture needs k >= 1".into()));
        }
        let level = (k + 1) as u32;
        let ku = k as usize;
        let mut map = CombMap::empty(level);
        map.glue(0, 0, &[Letter::A, Letter::A]);
        for i in 0..ku {
            map.insert_spur(1 + i, Letter::X);
        }
        let end = map.boundary.len();
        for i in 0..ku {
            map.insert_spur(end + i, Letter::X);
        }
        // boundary now reads a x^k x^{-k} a x^k x^{-k}; start it at the last stem
        let len = map.boundary.len();
        map.boundary.rotate_left(len - ku);
        let r = relator(k)?;
        let rot = r.rotated(1);
        let side = 2 * ku + 1;
        let tail: Vec<Letter> = rot.letters()[side..].iter().rev().map(|l| l.inverse()).collect();
        map.glue(0, side, &tail);
        map.boundary.rotate_left(tail.len() - 1);
        let arc = side + 2;
        let tail2: Vec<Letter> = r.letters()[arc..].iter().rev().map(|l| l.inverse()).collect();
        map.glue(0, arc, &tail2);
        let d = map.finish();
        require_valid(&d)?;
        Ok(d)
    }

    /// Two `relator(1)` cells wedged at the basepoint.
    pub fn wedge() -> Result<Diagram> {
        let f = ConjugateFactor::new(GroupWord::empty(), 1, false);
        diagram_from_conjugates(&[f.clone(), f], 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{a_edges, area, boundary_word, diagram_from_conjugates, validate, ConjugateFactor};
    use crate::word::relator;

    fn single(k: i64, level: u32) -> Diagram {
        diagram_from_conjugates(&[ConjugateFactor::new(GroupWord::empty(), k, false)], level).unwrap()
    }

    fn inner_face(d: &Diagram) -> usize {
        d.faces().inner().next().unwrap()
    }

    #[test]
    fn opposite_in_commutator_cell() {
        for k in 1..4 {
            let d = single(k, k as u32 + 1);
            let f = inner_face(&d);
            let cycle = d.faces().cycles[f].clone();
            let apos = a_positions(&d, &cycle);
            let k = k as usize;
            // the cell is read from its basepoint, which is its first a
            assert_eq!(apos, vec![0, k + 1, 2 * k + 2, 3 * k + 3]);
            let e0 = cycle[0] / 2;
            assert_eq!(opposite_a_edge(&d, f, e0).unwrap(), cycle[2 * k + 2] / 2);
            for &p in &apos {
                let e = cycle[p] / 2;
                let o = opposite_a_edge(&d, f, e).unwrap();
                assert_eq!(opposite_a_edge(&d, f, o).unwrap(), e);
                assert_ne!(o, e);
            }
        }
    }

    #[test]
    fn opposite_in_bigon() {
        let d = single(0, 1);
        let f = inner_face(&d);
        assert_eq!(opposite_a_edge(&d, f, 0).unwrap(), 1);
        assert_eq!(opposite_a_edge(&d, f, 1).unwrap(), 0);
    }

    #[test]
    fn opposite_rejects_foreign_edges() {
        let d = single(1, 2);
        let f = inner_face(&d);
        let x_edge = d.edges.iter().position(|e| e.label == crate::cayley::EdgeLabel::X).unwrap();
        assert!(matches!(opposite_a_edge(&d, f, x_edge), Err(Error::EdgeNotInFace { .. })));
        let outer = d.faces().outer.unwrap();
        assert!(opposite_a_edge(&d, outer, 0).is_err());
    }

    #[test]
    fn single_cell_bands() {
        let d = single(1, 2);
        let bands = all_bands(&d).unwrap();
        assert_eq!(bands.len(), 2);
        for b in &bands {
            assert_eq!(b.len(), 1);
            assert_eq!(b.kind, BandKind::BoundaryToBoundary);
            assert_eq!(b.connecting_edges.len(), 2);
            assert!(!self_crosses(b));
            let (s1, s2) = band_side_words(b);
            assert_eq!(s1, s2);
            assert!(["Xax", "xaX"].contains(&s1.to_string().as_str()), "{s1}");
        }
    }

    #[test]
    fn side_words_for_larger_k() {
        let d = single(3, 4);
        for b in all_bands(&d).unwrap() {
            let (s1, s2) = band_side_words(&b);
            assert!(["XXXaxxx", "xxxaXXX"].contains(&s1.to_string().as_str()), "{s1}");
            assert_eq!(s2, s1);
            assert_eq!(s1.x_exponent_sum(), 0);
        }
    }

    #[test]
    fn bigon_band() {
        let d = single(0, 1);
        let bands = all_bands(&d).unwrap();
        assert_eq!(bands.len(), 1);
        assert_eq!(bands[0].cells.len(), 1);
        let (s1, s2) = band_side_words(&bands[0]);
        assert!(s1.is_empty() && s2.is_empty());
    }

    #[test]
    fn empty_diagram_has_no_bands() {
        assert!(all_bands(&Diagram::single_vertex(2)).unwrap().is_empty());
    }

    #[test]
    fn wedge_has_four_bands() {
        let d = fixtures::wedge().unwrap();
        let bands = all_bands(&d).unwrap();
        assert_eq!(bands.len(), 4);
        assert!(crossings(&bands).iter().all(|&(i, j, _)| i != j));
    }

    #[test]
    fn bands_partition_a_edges() {
        let d = fixtures::annulus(1).unwrap();
        let bands = all_bands(&d).unwrap();
        let mut all: Vec<usize> = bands.iter().flat_map(|b| b.connecting_edges.clone()).collect();
        all.sort();
        let expected: Vec<usize> = a_edges(&d).into_iter().collect();
        assert_eq!(all, expected);
    }

    #[test]
    fn annulus_fixture_shape() {
        for k in 1..=3 {
            let d = fixtures::annulus(k).unwrap();
            assert!(validate(&d).is_empty(), "{:?}", validate(&d));
            assert_eq!(area(&d), 3);
            let x = GroupWord::x_power(-k).concat(&GroupWord::parse("a").unwrap()).concat(&GroupWord::x_power(k));
            assert_eq!(boundary_word(&d).unwrap(), x.concat(&x));
            let bands = all_bands(&d).unwrap();
            let annuli: Vec<&Band> = bands.iter().filter(|b| b.kind == BandKind::Annulus).collect();
            assert_eq!(annuli.len(), 1);
            assert_eq!(annuli[0].len(), 2);
            assert_eq!(annuli[0].connecting_edges.len(), 2);
            // the band through the bigon crosses the ring twice
            assert_eq!(crossings(&bands).len(), 2);
        }
    }

    #[test]
    fn annulus_removal() {
        for k in 1..=3 {
            let d = fixtures::annulus(k).unwrap();
            let before = boundary_word(&d).unwrap();
            let ring = all_bands(&d).unwrap().into_iter().find(|b| b.kind == BandKind::Annulus).unwrap();
            let (s1, s2) = band_side_words(&ring);
            assert_eq!(s1, s2);
            let out = remove_annulus(&d, &ring).unwrap();
            assert!(validate(&out).is_empty(), "{:?}", validate(&out));
            assert_eq!(boundary_word(&out).unwrap(), before);
            assert_eq!(area(&out), area(&d) - ring.len());
            assert!(all_bands(&out).unwrap().iter().all(|b| b.kind != BandKind::Annulus));
        }
    }

    #[test]
    fn remove_rejects_open_bands() {
        let d = single(1, 2);
        let b = &all_bands(&d).unwrap()[0];
        assert_eq!(remove_annulus(&d, b), Err(Error::NotAnnulus));
    }

    #[test]
    fn stitched_band_self_crosses() {
        // a band record revisiting a cell, as a broken stitching would produce
        let d = single(1, 2);
        let mut b = all_bands(&d).unwrap()[0].clone();
        assert!(!self_crosses(&b));
        let other = all_bands(&d).unwrap()[1].clone();
        b.cells.extend(other.cells.iter().copied());
        b.entries.extend(other.entries.iter().copied());
        assert!(self_crosses(&b));
        let diag = self_crossing_exponents(&d, &b);
        assert_eq!(diag.len(), 1);
        let (_, along, around) = diag[0];
        assert_eq!(along, 0);
        assert_ne!(along, around);
    }

    #[test]
    fn trace_from_each_edge_agrees() {
        let d = fixtures::annulus(2).unwrap();
        let bands = all_bands(&d).unwrap();
        for b in &bands {
            for &e in &b.connecting_edges {
                let t = trace_band(&d, e).unwrap();
                let mut x = t.connecting_edges.clone();
                let mut y = b.connecting_edges.clone();
                x.sort();
                y.sort();
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn report_json() {
        let d = single(1, 2);
        let r = band_report(&d).unwrap();
        assert_eq!(r.bands.len(), 2);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["bands"][0]["kind"], "boundary-to-boundary");
        assert_eq!(v["bands"][0]["side_exponent_sums"][0], 0);
        let _ = relator(1);
    }
}
