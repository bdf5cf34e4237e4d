use std::process::{Command, Output};

fn bandlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bandlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("bandlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn word_problem_exit_codes() {
    let o = bandlab(&["wp", "--word", "aa", "--in", "L"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("trivial\n"));

    let o = bandlab(&["wp", "--word", "aXXaxxaXXaxx", "--in", "G1:2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("nontrivial\n"));
    assert!(stdout(&o).contains("dinfty"));

    let o = bandlab(&["wp", "--word", "(aX^2ax^2)^2", "--in", "G1:3"]);
    assert_eq!(o.status.code(), Some(0));

    assert_eq!(bandlab(&["wp", "--word", "xtXT", "--in", "E"]).status.code(), Some(0));
    assert_eq!(bandlab(&["wp", "--word", "Tat", "--in", "E"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["wp", "--word", "aq"][..],
        &["wp", "--word", "x3"],
        &["wp", "--word", "aa", "--in", "G2"],
        &["wp", "--word", "aa", "--bogus"],
        &["wp", "--word", "t", "--in", "L"],
        &["ball", "--level", "1"],
        &["experiment", "--level", "2", "--base", "15", "--push", "6", "--beta-len", "8"],
        &["experiment", "--level", "2", "--base", "15", "--push", "6", "--beta-len", "8", "--ball", "3", "--no-ball"],
        &["experiment", "--level", "0", "--base", "15", "--push", "6", "--beta-len", "8", "--ball", "3"],
    ] {
        assert_eq!(bandlab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn ball_dot_is_deterministic() {
    let a = bandlab(&["ball", "--radius", "1", "--level", "2", "--dot", "-"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a).matches("label=\"lamps").count(), 4);
    let b = bandlab(&["ball", "--radius", "1", "--level", "2", "--dot", "-"]);
    assert_eq!(a.stdout, b.stdout);
    let j1 = bandlab(&["ball", "--radius", "2", "--level", "2", "--json", "-"]);
    let j2 = bandlab(&["ball", "--radius", "2", "--level", "2", "--json", "-"]);
    assert_eq!(j1.stdout, j2.stdout);
    assert_eq!(stdout(&bandlab(&["ball", "--radius", "2", "--level", "2"])).lines().next().unwrap().split(' ').next(), Some("vertices=10"));
}

#[test]
fn experiment_summary_and_control() {
    let json = tmp("report.json");
    let args = ["experiment", "--level", "2", "--base", "15", "--push", "6", "--beta-len", "8", "--ball", "12"];
    let o = bandlab(&[&args[..], &["--json", &json]].concat());
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    let summary = lines.next().unwrap();
    assert!(summary.starts_with("n=2 m=15 k=6 betas="), "{summary}");
    assert!(summary.ends_with(" fillable=0"), "{summary}");
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["fillable"], 0);
    let n = report["verdicts"].as_array().unwrap().len();
    assert_eq!(summary, format!("n=2 m=15 k=6 betas={n} fillable=0"));

    let four = bandlab(&[&args[..], &["--workers", "4"]].concat());
    assert_eq!(four.stdout, o.stdout);

    let control = bandlab(&["experiment", "--level", "2", "--base", "15", "--push", "6", "--beta-len", "8", "--no-ball"]);
    let line = stdout(&control);
    let fillable: usize = line.trim().rsplit("fillable=").next().unwrap().parse().unwrap();
    assert!(fillable >= 1, "{line}");
}

#[test]
fn fill_then_bands() {
    let path = tmp("diagram.json");
    let o = bandlab(&["fill", "--word", "(aXax)^2", "--level", "2", "--max-area", "4", "--json", &path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("found area=1"));
    let b = bandlab(&["bands", "--diagram", &path]);
    assert!(b.status.success());
    let text = stdout(&b);
    assert_eq!(text.lines().filter(|l| l.starts_with("band ")).count(), 2);
    assert!(text.contains("cross 0 1"));

    let o = bandlab(&["fill", "--word", "(aX^2ax^2)^2", "--level", "2", "--max-area", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("not found"));
}

#[test]
fn obstruction_trace() {
    let path = tmp("pushout.json");
    // α·x·(x⁻¹α⁻¹x)·x⁻¹ for α = relator(1): a pushed-out copy of α
    let o = bandlab(&["fill", "--word", "(aXax)^2x(Xaxa)^2X", "--level", "2", "--max-area", "4", "--json", &path]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let json = tmp("trace.json");
    let b = bandlab(&["bands", "--diagram", &path, "--obstruction", "--json", &json]);
    assert!(b.status.success(), "{}", String::from_utf8_lossy(&b.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["obstruction"]["bands"].as_array().unwrap().len(), 4);
}

#[test]
fn invalid_diagram_is_rejected() {
    let path = tmp("good.json");
    bandlab(&["fill", "--word", "aXaxaXax", "--level", "2", "--json", &path]);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let edges = v["edges"].as_array_mut().unwrap();
    let x = edges.iter_mut().find(|e| e["label"] == "x").unwrap();
    x["label"] = "a".into();
    let bad = tmp("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = bandlab(&["bands", "--diagram", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid diagram"));
    assert_eq!(bandlab(&["bands", "--diagram", &tmp("missing.json")]).status.code(), Some(2));
}

#[test]
fn ext_prints_canonical_form() {
    let o = bandlab(&["ext", "--word", "x^3t^-2"]);
    assert_eq!(stdout(&o), "num=[];denpow=0;m=3;q=-2\nabelian=(3,-2)\n");
    let o = bandlab(&["ext", "--word", "taTxx", "--json"]);
    assert_eq!(stdout(&o).trim(), r#"{"num":[1],"denpow":1,"m":2,"q":0}"#);
}
