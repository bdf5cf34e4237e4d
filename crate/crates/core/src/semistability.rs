//! The push-out experiment behind the non-semistability of `L`.
//!
//! A loop `α = relator(n)` is based at `v = x^m` on the ray `x^∞`. Pushing it
//! out by `k` means finding a loop `β` at `x^{m+k}` that avoids the ball of
//! radius `N` and for which `α · x^k · β⁻¹ · x^{-k}` bounds a diagram over
//! `𝓡_{n-1}`. The experiment enumerates every short `β` and decides each
//! push-out exactly with the `G₁(n)` word problem.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::bands::{all_bands, band_side_words, Band, BandKind};
use crate::cayley::{word_length, WordBall};
use crate::diagram::{boundary_word, fill, Diagram, FillOutcome};
use crate::error::{Error, Result};
use crate::lamp::{eval_word, LampElement};
use crate::presented::{dinfty_certificate, g1_from_word, DInfty, G1Element};
use crate::word::{relator, GroupWord, Letter};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub n: u32,
    pub m: i64,
    pub k: i64,
    pub beta_len_max: usize,
    /// Radius `N` of the forbidden ball around the identity.
    pub ball_radius: usize,
    /// `false` drops the ball constraint (the control run).
    pub ball: bool,
    pub area_bound: usize,
    pub materialize: bool,
}

impl ExperimentConfig {
    pub fn new(n: u32, m: i64, k: i64, beta_len_max: usize, ball_radius: usize) -> Self {
        ExperimentConfig {
            n,
            m,
            k,
            beta_len_max,
            ball_radius,
            ball: true,
            area_bound: 16,
            materialize: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidLevel(0));
        }
        if self.k < 0 {
            return Err(Error::Config(format!("push distance must be non-negative, got {}", self.k)));
        }
        if self.m < 0 {
            return Err(Error::Config(format!("base offset must be non-negative, got {}", self.m)));
        }
        Ok(())
    }

    pub fn basepoint(&self) -> LampElement {
        LampElement::new([], self.m + self.k)
    }

    fn without_ball(&self) -> Self {
        ExperimentConfig { ball: false, ..self.clone() }
    }
}

/// `a x^{-n} a x^n a x^{-n} a x^n`, which is `relator(n)`.
pub fn alpha_loop(n: u32) -> Result<GroupWord> {
    if n == 0 {
        return Err(Error::InvalidLevel(0));
    }
    relator(n as i64)
}

/// `α · x^k · β⁻¹ · x^{-k}`.
pub fn pushout_word(alpha: &GroupWord, k: i64, beta: &GroupWord) -> GroupWord {
    alpha.concat(&GroupWord::x_power(k)).concat(&beta.inverse()).concat(&GroupWord::x_power(-k))
}

/// The β that runs back to `v`, around `α` and out again.
pub fn backtracking_beta(alpha: &GroupWord, k: i64) -> GroupWord {
    GroupWord::x_power(-k).concat(alpha).concat(&GroupWord::x_power(k))
}

const MOVES: [Letter; 3] = [Letter::A, Letter::X, Letter::XInv];

/// Every word of length at most `beta_len_max` that is a loop at `x^{m+k}`
/// and, with the ball active, never visits a vertex within distance `N` of
/// the identity. Words are listed by length, then lexicographically in the
/// order `a < x < X`.
pub fn enumerate_beta(cfg: &ExperimentConfig) -> Result<Vec<GroupWord>> {
    cfg.validate()?;
    let ball = cfg.ball.then(|| WordBall::new(cfg.ball_radius));
    let allowed = |g: &LampElement| ball.as_ref().is_none_or(|b| !b.contains(g));
    let start = cfg.basepoint();
    if !allowed(&start) {
        return Ok(Vec::new());
    }
    // prune walks that cannot get home in the remaining steps
    let home_dist = |g: &LampElement| {
        let rel = crate::lamp::lamp_mul(&crate::lamp::lamp_inv(&start), g);
        word_length(&rel)
    };
    let mut out: Vec<GroupWord> = Vec::new();
    let mut path: Vec<Letter> = Vec::new();
    fn dfs(
        g: &LampElement,
        path: &mut Vec<Letter>,
        cfg: &ExperimentConfig,
        allowed: &dyn Fn(&LampElement) -> bool,
        home_dist: &dyn Fn(&LampElement) -> usize,
        start: &LampElement,
        out: &mut Vec<GroupWord>,
    ) {
        if g == start {
            out.push(GroupWord::new(path.clone()));
        }
        if path.len() == cfg.beta_len_max {
            return;
        }
        for l in MOVES {
            let mut h = g.clone();
            h.apply(l).expect("β letters are a, x, X");
            if !allowed(&h) || home_dist(&h) > cfg.beta_len_max - path.len() - 1 {
                continue;
            }
            path.push(l);
            dfs(&h, path, cfg, allowed, home_dist, start, out);
            path.pop();
        }
    }
    dfs(&start, &mut path, cfg, &allowed, &home_dist, &start, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| key(a).cmp(&key(b))));
    Ok(out)
}

fn key(w: &GroupWord) -> Vec<u8> {
    w.iter()
        .map(|l| match l {
            Letter::A => 0,
            Letter::X => 1,
            _ => 2,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    /// The push-out is a relation of `G₁(n)`; `diagram` is a witness when
    /// one was requested and found within the area bound.
    Fillable { diagram: Option<Diagram> },
    /// The push-out is not a relation: its normal form, and a `D∞` image
    /// separating it from the identity when one exists.
    NotFillable { normal_form: G1Element, dinfty: Option<DInftyWitness> },
}

impl Verdict {
    pub fn is_fillable(&self) -> bool {
        matches!(self, Verdict::Fillable { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DInftyWitness {
    pub i: i64,
    pub j: i64,
    pub image: DInfty,
}

/// Decides whether `α x^k β⁻¹ x^{-k}` is a relation of `G₁(n)`.
pub fn check_pushout(cfg: &ExperimentConfig, beta: &GroupWord) -> Result<Verdict> {
    let alpha = alpha_loop(cfg.n)?;
    let w = pushout_word(&alpha, cfg.k, beta);
    let g = g1_from_word(&w, cfg.n)?;
    if g.is_identity() {
        let diagram = if cfg.materialize {
            match fill(&w, cfg.n, cfg.area_bound)? {
                FillOutcome::Found(d) => Some(d),
                FillOutcome::NotFoundWithinBound { .. } => None,
            }
        } else {
            None
        };
        return Ok(Verdict::Fillable { diagram });
    }
    let dinfty = dinfty_certificate(&g).map(|(i, j, image)| DInftyWitness { i, j, image });
    Ok(Verdict::NotFillable { normal_form: g, dinfty })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub beta: GroupWord,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub candidates: usize,
    pub fillable: usize,
    pub verdicts: Vec<Candidate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub alpha: GroupWord,
    pub candidates: usize,
    pub fillable: usize,
    pub verdicts: Vec<Candidate>,
    /// Same enumeration with the ball removed.
    pub control: RunSummary,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn summary_line(&self) -> String {
        format!(
            "n={} m={} k={} betas={} fillable={}",
            self.config.n, self.config.m, self.config.k, self.candidates, self.fillable
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn check_all(cfg: &ExperimentConfig, betas: &[GroupWord], workers: usize) -> Result<RunSummary> {
    let check = |b: &GroupWord| check_pushout(cfg, b).map(|verdict| Candidate { beta: b.clone(), verdict });
    // one worker stays on the calling thread, so no pool is needed
    let verdicts: Vec<Candidate> = if workers <= 1 {
        betas.iter().map(check).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        pool.install(|| betas.par_iter().map(check).collect::<Result<_>>())?
    };
    let fillable = verdicts.iter().filter(|c| c.verdict.is_fillable()).count();
    Ok(RunSummary { candidates: verdicts.len(), fillable, verdicts })
}

/// Milliseconds since the call; always 0 in the browser, which has no
/// monotonic clock in `std`.
#[cfg(not(target_arch = "wasm32"))]
fn stopwatch() -> impl FnOnce() -> u128 {
    let t = std::time::Instant::now();
    move || t.elapsed().as_millis()
}

#[cfg(target_arch = "wasm32")]
fn stopwatch() -> impl FnOnce() -> u128 {
    || 0
}

/// The enumerated loops; without the ball the backtracking β is appended,
/// since it is longer than any enumerated word.
fn candidates(cfg: &ExperimentConfig, alpha: &GroupWord) -> Result<Vec<GroupWord>> {
    let mut betas = enumerate_beta(cfg)?;
    let back = backtracking_beta(alpha, cfg.k);
    if !cfg.ball && !betas.contains(&back) {
        betas.push(back);
    }
    Ok(betas)
}

/// Runs the experiment and its control on `workers` threads. The report
/// does not depend on `workers` apart from `elapsed_ms`.
pub fn run_experiment(cfg: &ExperimentConfig, workers: usize) -> Result<Report> {
    let elapsed = stopwatch();
    cfg.validate()?;
    let alpha = alpha_loop(cfg.n)?;
    let main = check_all(cfg, &candidates(cfg, &alpha)?, workers)?;
    let control_cfg = cfg.without_ball();
    let control = check_all(&control_cfg, &candidates(&control_cfg, &alpha)?, workers)?;
    Ok(Report {
        config: cfg.clone(),
        alpha,
        candidates: main.candidates,
        fillable: main.fillable,
        verdicts: main.verdicts,
        control,
        elapsed_ms: elapsed(),
    })
}

/// Where on the push-out boundary a band ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Segment {
    Alpha,
    PushOut,
    Beta,
    PushBack,
}

#[derive(Clone, Debug, Serialize)]
pub struct TracedBand {
    /// Name of the start vertex of the `a`-edge of `α`: `v`, `w1`, `v2`, `w2`.
    pub start: String,
    pub start_edge: usize,
    pub terminal_edge: usize,
    pub terminal_segment: Segment,
    /// 1-based index among `α`'s `a`-edges when the band ends on `α`.
    pub terminal_alpha_edge: Option<usize>,
    pub cells: Vec<usize>,
    pub kind: BandKind,
    /// Largest word-metric distance from `v` of a vertex on the band's cells.
    pub max_distance_from_v: usize,
    pub side_exponent_sums: [i64; 2],
    /// x-exponent sum of the stretch of `α` between the band's two ends,
    /// when both lie on `α`; equal to the side sums in any valid diagram.
    pub alpha_arc_exponent: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Crossing {
    pub bands: [usize; 2],
    pub cell: usize,
    /// Index `k` of the relator read by the shared cell.
    pub relator: i64,
    /// x-exponent sum along the cell from one band's entry to the other's.
    pub path_exponent: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionTrace {
    pub alpha: GroupWord,
    pub k: i64,
    pub beta: GroupWord,
    pub bands: Vec<TracedBand>,
    pub crossings: Vec<Crossing>,
    pub self_crossings: usize,
}

/// Splits a boundary word as `α · x^k · β⁻¹ · x^{-k}` with `α = relator(j)`
/// for some `j ≥ 1`, taking `k` as large as possible.
pub fn parse_pushout(w: &GroupWord) -> Result<(GroupWord, i64, GroupWord)> {
    let letters = w.letters();
    let alpha = (1..)
        .map(|j| relator(j).expect("j >= 1"))
        .take_while(|r| r.len() <= letters.len())
        .find(|r| letters.starts_with(r.letters()))
        .ok_or_else(|| Error::BoundaryParse(format!("{w} does not start with a relator α")))?;
    let rest = &letters[alpha.len()..];
    let mut k = 0;
    while 2 * (k + 1) <= rest.len() && rest[k] == Letter::X && rest[rest.len() - 1 - k] == Letter::XInv {
        k += 1;
    }
    let beta_inv = GroupWord::new(rest[k..rest.len() - k].to_vec());
    Ok((alpha, k as i64, beta_inv.inverse()))
}

/// Group elements of the diagram's vertices, with the base vertex at the
/// identity.
fn vertex_elements(d: &Diagram) -> Vec<LampElement> {
    let mut label: Vec<Option<LampElement>> = vec![None; d.vertex_count];
    label[d.outer.base_vertex] = Some(LampElement::identity());
    let mut queue = VecDeque::from([d.outer.base_vertex]);
    while let Some(v) = queue.pop_front() {
        let g = label[v].clone().expect("queued vertices are labelled");
        for &h in &d.rotation[v] {
            let u = d.head(h);
            if label[u].is_none() {
                let mut gh = g.clone();
                gh.apply(d.letter(h)).expect("diagram letters are a, x, X");
                label[u] = Some(gh);
                queue.push_back(u);
            }
        }
    }
    label.into_iter().map(|g| g.unwrap_or_default()).collect()
}

/// Follows the four bands leaving `α`'s `a`-edges and reports how they end,
/// how far they stray from `v`, and how they cross.
pub fn analyze_obstruction(d: &Diagram) -> Result<ObstructionTrace> {
    let w = boundary_word(d)?;
    let (alpha, k, beta) = parse_pushout(&w)?;
    let faces = d.faces();
    let outer = faces.outer.expect("a non-empty boundary has an outer face");
    let boundary = &faces.cycles[outer];
    let elements = vertex_elements(d);
    let alpha_len = alpha.len();
    let beta_len = beta.len();
    let ku = k as usize;
    let segment = |pos: usize| {
        if pos < alpha_len {
            Segment::Alpha
        } else if pos < alpha_len + ku {
            Segment::PushOut
        } else if pos < alpha_len + ku + beta_len {
            Segment::Beta
        } else {
            Segment::PushBack
        }
    };
    let mut pos_of_edge: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (p, &h) in boundary.iter().enumerate() {
        pos_of_edge.entry(h / 2).or_default().push(p);
    }
    let alpha_a: Vec<usize> = (0..alpha_len).filter(|&p| alpha.letters()[p] == Letter::A).collect();
    let bands = all_bands(d)?;
    let band_of: HashMap<usize, usize> = bands
        .iter()
        .enumerate()
        .flat_map(|(i, b)| b.connecting_edges.iter().map(move |&e| (e, i)))
        .collect();
    let names = ["v", "w1", "v2", "w2"];
    let mut traced = Vec::new();
    let mut traced_ids = Vec::new();
    for (idx, &p) in alpha_a.iter().enumerate() {
        let edge = boundary[p] / 2;
        let bi = band_of[&edge];
        let b: &Band = &bands[bi];
        let ends = [b.connecting_edges[0], *b.connecting_edges.last().expect("bands have edges")];
        let terminal_edge = if ends[0] == edge { ends[1] } else { ends[0] };
        let terminal_pos = pos_of_edge
            .get(&terminal_edge)
            .and_then(|ps| ps.iter().copied().find(|&q| q != p).or(ps.first().copied()))
            .unwrap_or(p);
        let terminal_segment = segment(terminal_pos);
        let terminal_alpha_edge =
            alpha_a.iter().position(|&q| q == terminal_pos).filter(|_| terminal_segment == Segment::Alpha);
        let alpha_arc_exponent = (terminal_segment == Segment::Alpha).then(|| {
            let (s, e) = (p.min(terminal_pos), p.max(terminal_pos));
            alpha.letters()[s + 1..e].iter().map(|l| l.x_exponent()).sum()
        });
        let mut verts = BTreeSet::new();
        for &c in &b.cells {
            for &h in &faces.cycles[c] {
                verts.insert(d.tail(h));
            }
        }
        let max_distance_from_v = verts.iter().map(|&u| word_length(&elements[u])).max().unwrap_or(0);
        let (s1, s2) = band_side_words(b);
        traced.push(TracedBand {
            start: names.get(idx).map_or_else(|| format!("a{}", idx + 1), |s| s.to_string()),
            start_edge: edge,
            terminal_edge,
            terminal_segment,
            terminal_alpha_edge: terminal_alpha_edge.map(|i| i + 1),
            cells: b.cells.clone(),
            kind: b.kind,
            max_distance_from_v,
            side_exponent_sums: [s1.x_exponent_sum(), s2.x_exponent_sum()],
            alpha_arc_exponent,
        });
        traced_ids.push(bi);
    }
    let mut crossings = Vec::new();
    for i in 0..traced_ids.len() {
        for j in i + 1..traced_ids.len() {
            let (bi, bj) = (&bands[traced_ids[i]], &bands[traced_ids[j]]);
            if traced_ids[..j].contains(&traced_ids[j]) || traced_ids[..i].contains(&traced_ids[i]) {
                continue;
            }
            for (x, &c) in bi.cells.iter().enumerate() {
                let Some(y) = bj.cells.iter().position(|&c2| c2 == c) else { continue };
                let cycle = &faces.cycles[c];
                let pi = cycle.iter().position(|&h| h == bi.entries()[x]).expect("entry on cell");
                let pj = cycle.iter().position(|&h| h == bj.entries()[y]).expect("entry on cell");
                let mut t = pi;
                let mut exp = 0;
                while t != pj {
                    exp += d.letter(cycle[t]).x_exponent();
                    t = (t + 1) % cycle.len();
                }
                let relator = crate::word::match_relator(&d.cycle_word(cycle), d.level).unwrap_or(-1);
                crossings.push(Crossing { bands: [i, j], cell: c, relator, path_exponent: exp });
            }
        }
    }
    let self_crossings = bands.iter().filter(|b| crate::bands::self_crosses(b)).count();
    Ok(ObstructionTrace { alpha, k, beta, bands: traced, crossings, self_crossings })
}

/// Evaluates `β` from the push-out basepoint; used to confirm loops.
pub fn beta_endpoint(cfg: &ExperimentConfig, beta: &GroupWord) -> Result<LampElement> {
    Ok(crate::lamp::lamp_mul(&cfg.basepoint(), &eval_word(beta)?))
}
