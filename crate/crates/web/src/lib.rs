//! Browser bindings. Every export takes plain values and returns a JSON
//! string; failures come back as `{"error": "..."}`.

use bandlab::cayley::build_ball;
use bandlab::extended::e_from_word;
use bandlab::lamp::eval_word;
use bandlab::presented::{dinfty_certificate, g1_from_word};
use bandlab::semistability::{run_experiment, ExperimentConfig, Verdict};
use bandlab::GroupWord;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest radius the page may request; radius 7 already has a few thousand
/// vertices.
pub const MAX_RADIUS: u32 = 7;
/// Enumeration cap so a click cannot hang the tab.
pub const MAX_BETA_LEN: u32 = 10;

fn wrap(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

pub fn word_problem_value(word: &str, target: &str) -> Result<Value, String> {
    let w = GroupWord::parse(word.trim()).map_err(|e| e.to_string())?;
    match target {
        "L" => {
            let g = eval_word(&w).map_err(|e| e.to_string())?;
            Ok(json!({ "trivial": g.is_identity(), "form": g.to_string() }))
        }
        "E" => {
            let g = e_from_word(&w);
            Ok(json!({ "trivial": g.is_identity(), "form": g.to_string() }))
        }
        t => {
            let n: u32 = t
                .strip_prefix("G1:")
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| format!("unknown target {t}"))?;
            let g = g1_from_word(&w, n).map_err(|e| e.to_string())?;
            let cert = dinfty_certificate(&g)
                .map(|(i, j, img)| json!({ "i": i, "j": j, "translation": img.translation, "flip": img.flip }));
            Ok(json!({ "trivial": g.is_identity(), "form": g.to_string(), "dinfty": cert }))
        }
    }
}

/// Trivial or not in `L`, `G1:n` or `E`, with the normal form.
#[wasm_bindgen]
pub fn word_problem(word: &str, target: &str) -> String {
    wrap(word_problem_value(word, target))
}

pub fn cayley_ball_value(radius: u32, level: u32) -> Result<Value, String> {
    if radius > MAX_RADIUS {
        return Err(format!("radius is capped at {MAX_RADIUS}"));
    }
    let c = build_ball(radius as usize, level).map_err(|e| e.to_string())?;
    let vertices: Vec<Value> = c
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            json!({
                "label": g.to_string(),
                "lamps": g.lamps,
                "shift": g.shift,
                "distance": c.vertex_distance(i),
            })
        })
        .collect();
    let edges: Vec<Value> = c.edges().iter().map(|e| json!([e.source, e.target, e.label])).collect();
    let cells = c.cells().iter().filter(|cell| cell.relator > 0).count();
    Ok(json!({ "vertices": vertices, "edges": edges, "commutator_cells": cells, "bigons": c.cells().len() - cells }))
}

/// Vertices and edges of the ball of the given radius, for drawing.
#[wasm_bindgen]
pub fn cayley_ball(radius: u32, level: u32) -> String {
    wrap(cayley_ball_value(radius, level))
}

pub fn experiment_value(n: u32, m: i32, k: i32, beta_len: u32, ball: i32) -> Result<Value, String> {
    if beta_len > MAX_BETA_LEN {
        return Err(format!("β length is capped at {MAX_BETA_LEN}"));
    }
    let mut cfg = ExperimentConfig::new(n, m as i64, k as i64, beta_len as usize, ball.max(0) as usize);
    cfg.ball = ball >= 0;
    let r = run_experiment(&cfg, 1).map_err(|e| e.to_string())?;
    let fillable: Vec<String> = r
        .verdicts
        .iter()
        .filter(|c| c.verdict.is_fillable())
        .map(|c| c.beta.to_string())
        .collect();
    let sample: Vec<Value> = r
        .verdicts
        .iter()
        .take(12)
        .map(|c| match &c.verdict {
            Verdict::Fillable { .. } => json!({ "beta": c.beta.to_string(), "fillable": true }),
            Verdict::NotFillable { normal_form, dinfty } => json!({
                "beta": c.beta.to_string(),
                "fillable": false,
                "normal_form": normal_form.to_string(),
                "dinfty": dinfty.map(|d| d.image.translation),
            }),
        })
        .collect();
    Ok(json!({
        "summary": r.summary_line(),
        "alpha": r.alpha.to_string(),
        "fillable_betas": fillable,
        "sample": sample,
        "control": { "betas": r.control.candidates, "fillable": r.control.fillable },
    }))
}

/// Runs the push-out experiment; a negative `ball` drops the ball.
#[wasm_bindgen]
pub fn experiment(n: u32, m: i32, k: i32, beta_len: u32, ball: i32) -> String {
    wrap(experiment_value(n, m, k, beta_len, ball))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn word_problem_targets() {
        assert_eq!(parse(word_problem("aa", "L"))["trivial"], true);
        let v = parse(word_problem("aXXaxxaXXaxx", "G1:2"));
        assert_eq!(v["trivial"], false);
        assert_eq!(v["dinfty"]["translation"], 2);
        assert_eq!(parse(word_problem("xtXT", "E"))["trivial"], true);
        assert!(parse(word_problem("aq", "L"))["error"].is_string());
        assert!(parse(word_problem("aa", "H"))["error"].is_string());
    }

    #[test]
    fn ball_sizes() {
        let v = parse(cayley_ball(2, 2));
        assert_eq!(v["vertices"].as_array().unwrap().len(), 10);
        assert_eq!(v["vertices"][0]["label"], "lamps=[];shift=0");
        assert!(parse(cayley_ball(MAX_RADIUS + 1, 1))["error"].is_string());
    }

    #[test]
    fn experiment_runs_single_threaded() {
        let v = parse(experiment(2, 15, 6, 8, 12));
        assert_eq!(v["summary"], "n=2 m=15 k=6 betas=653 fillable=0");
        assert_eq!(v["control"]["fillable"], 1);
        let free = parse(experiment(2, 15, 6, 8, -1));
        assert_eq!(free["fillable_betas"].as_array().unwrap().len(), 1);
    }
}
