use std::fs;
use std::io::Write;
use std::process::ExitCode;

use bandlab::bands::band_report;
use bandlab::cayley::build_ball;
use bandlab::diagram::{area, fill, validate, Diagram, FillOutcome};
use bandlab::extended::{abelian_image, e_from_word};
use bandlab::lamp::eval_word;
use bandlab::presented::{dinfty_certificate, g1_from_word};
use bandlab::semistability::{analyze_obstruction, run_experiment, ExperimentConfig};
use bandlab::GroupWord;
use clap::{Args, Parser, Subcommand};

mod power;

#[derive(Parser)]
#[command(name = "bandlab", version, about = "Lamplighter groups, van Kampen diagrams and a-bands")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a word is trivial in L, G1(n) or E.
    Wp {
        #[arg(long)]
        word: String,
        /// L, G1:n or E
        #[arg(long = "in", default_value = "L")]
        target: String,
    },
    /// Search for a van Kampen diagram over the level-n relators.
    Fill {
        #[arg(long)]
        word: String,
        #[arg(long)]
        level: u32,
        #[arg(long, default_value_t = 16)]
        max_area: usize,
        #[command(flatten)]
        out: Outputs,
    },
    /// Trace the a-bands of a diagram stored as JSON.
    Bands {
        #[arg(long)]
        diagram: String,
        /// Also follow the bands leaving α on a push-out boundary.
        #[arg(long)]
        obstruction: bool,
        #[arg(long)]
        json: Option<String>,
    },
    /// Build a ball of the Cayley 2-complex.
    Ball {
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[command(flatten)]
        out: Outputs,
    },
    /// Push α out along the ray and try every short loop β.
    Experiment {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        base: i64,
        #[arg(long)]
        push: i64,
        #[arg(long)]
        beta_len: usize,
        #[arg(long, conflicts_with = "no_ball", required_unless_present = "no_ball")]
        ball: Option<usize>,
        #[arg(long)]
        no_ball: bool,
        #[arg(long, default_value_t = 16)]
        area_bound: usize,
        #[arg(long)]
        materialize_diagrams: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        json: Option<String>,
    },
    /// Evaluate a word in the extended lamplighter group.
    Ext {
        #[arg(long)]
        word: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Outputs {
    /// Write JSON to a file, or `-` for stdout.
    #[arg(long)]
    json: Option<String>,
    /// Write Graphviz DOT to a file, or `-` for stdout.
    #[arg(long)]
    dot: Option<String>,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<bandlab::Error> for Failure {
    fn from(e: bandlab::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn parse_word(s: &str) -> Result<GroupWord, Failure> {
    let expanded = power::expand(s).map_err(Failure::Usage)?;
    Ok(GroupWord::parse(&expanded)?)
}

fn emit(dest: &str, content: &str) -> Result<(), Failure> {
    if dest == "-" {
        let mut out = std::io::stdout().lock();
        writeln!(out, "{content}").map_err(|e| Failure::Io(e.to_string()))
    } else {
        fs::write(dest, format!("{content}\n")).map_err(|e| Failure::Io(format!("{dest}: {e}")))
    }
}

fn verdict(trivial: bool) -> ExitCode {
    println!("{}", if trivial { "trivial" } else { "nontrivial" });
    ExitCode::from(if trivial { 0 } else { 1 })
}

fn wp(word: &str, target: &str) -> Outcome {
    let w = parse_word(word)?;
    match target {
        "L" => {
            let g = eval_word(&w)?;
            let code = verdict(g.is_identity());
            println!("{g}");
            Ok(code)
        }
        "E" => {
            let g = e_from_word(&w);
            let code = verdict(g.is_identity());
            println!("{g}");
            Ok(code)
        }
        t => {
            let n: u32 = t
                .strip_prefix("G1:")
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| Failure::Usage(format!("unknown target {t:?}; use L, G1:n or E")))?;
            let g = g1_from_word(&w, n)?;
            let code = verdict(g.is_identity());
            println!("{g}");
            if let Some((i, j, img)) = dinfty_certificate(&g) {
                println!("dinfty i={i} j={j} translation={} flip={}", img.translation, img.flip);
            }
            Ok(code)
        }
    }
}

fn run_fill(word: &str, level: u32, max_area: usize, out: &Outputs) -> Outcome {
    let w = parse_word(word)?;
    match fill(&w, level, max_area)? {
        FillOutcome::Found(d) => {
            println!("found area={} boundary={}", area(&d), d.outer_word());
            if let Some(p) = &out.json {
                emit(p, &d.to_json())?;
            }
            if let Some(p) = &out.dot {
                emit(p, &d.to_dot())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        FillOutcome::NotFoundWithinBound { max_area, length_cap } => {
            println!("not found max_area={max_area} length_cap={length_cap}");
            Ok(ExitCode::from(1))
        }
    }
}

fn bands(path: &str, obstruction: bool, json: Option<&str>) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?;
    let d = Diagram::from_json(&text)?;
    let violations = validate(&d);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        return Err(Failure::Usage(format!("invalid diagram:\n{}", list.join("\n"))));
    }
    let report = band_report(&d)?;
    for (i, b) in report.bands.iter().enumerate() {
        let kind = serde_json::to_value(b.kind).expect("kinds serialize");
        println!(
            "band {i} {} cells={:?} edges={:?} sides={:?}/{:?} sums={}/{}",
            kind.as_str().unwrap_or_default(),
            b.cells,
            b.connecting_edges,
            b.sides[0],
            b.sides[1],
            b.side_exponent_sums[0],
            b.side_exponent_sums[1]
        );
    }
    for [i, j, c] in &report.crossings {
        println!("cross {i} {j} cell={c}");
    }
    let mut doc = serde_json::to_value(&report).expect("reports serialize");
    if obstruction {
        let trace = analyze_obstruction(&d)?;
        for b in &trace.bands {
            let seg = serde_json::to_value(b.terminal_segment).expect("segments serialize");
            println!(
                "{} ends on {} edge={} max_dist={} sums={}/{}",
                b.start,
                seg.as_str().unwrap_or_default(),
                b.terminal_edge,
                b.max_distance_from_v,
                b.side_exponent_sums[0],
                b.side_exponent_sums[1]
            );
        }
        doc["obstruction"] = serde_json::to_value(&trace).expect("traces serialize");
    }
    if let Some(p) = json {
        emit(p, &serde_json::to_string_pretty(&doc).expect("values serialize"))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn ball(radius: usize, level: u32, out: &Outputs) -> Outcome {
    let c = build_ball(radius, level)?;
    if out.json.is_none() && out.dot.is_none() {
        println!("vertices={} edges={} cells={}", c.vertex_count(), c.edges().len(), c.cells().len());
    }
    if let Some(p) = &out.json {
        emit(p, &c.to_json())?;
    }
    if let Some(p) = &out.dot {
        emit(p, &c.to_dot())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn ext(word: &str, json: bool) -> Outcome {
    let g = e_from_word(&parse_word(word)?);
    if json {
        println!("{}", g.to_json());
    } else {
        let (m, q) = abelian_image(&g);
        println!("{g}");
        println!("abelian=({m},{q})");
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Wp { word, target } => wp(&word, &target),
        Command::Fill { word, level, max_area, out } => run_fill(&word, level, max_area, &out),
        Command::Bands { diagram, obstruction, json } => bands(&diagram, obstruction, json.as_deref()),
        Command::Ball { radius, level, out } => ball(radius, level, &out),
        Command::Experiment {
            level,
            base,
            push,
            beta_len,
            ball,
            no_ball,
            area_bound,
            materialize_diagrams,
            workers,
            json,
        } => {
            if workers == 0 {
                return Err(Failure::Usage("--workers must be at least 1".into()));
            }
            let mut cfg = ExperimentConfig::new(level, base, push, beta_len, ball.unwrap_or(0));
            cfg.ball = !no_ball;
            cfg.area_bound = area_bound;
            cfg.materialize = materialize_diagrams;
            let report = run_experiment(&cfg, workers)?;
            println!("{}", report.summary_line());
            if cfg.ball {
                println!("control betas={} fillable={}", report.control.candidates, report.control.fillable);
            }
            if let Some(p) = json {
                emit(&p, &report.to_json())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ext { word, json } => ext(&word, json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) | Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
