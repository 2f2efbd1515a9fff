use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn curvchain(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvchain"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn pipeline_replays_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = curvchain(out, &["pipeline-yk", "--k", "1"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ra = report(&a.join("pipeline-yk/k1/report.json"));
    let rb = report(&b.join("pipeline-yk/k1/report.json"));
    assert_eq!(ra["pass"], true);
    assert_eq!(ra["certificates"]["cover_girth"], 8);
    assert_eq!(without_timing(ra), without_timing(rb));
    for f in ["yk.complex", "cover.complex", "link.dot", "monodromy.txt"] {
        let x = std::fs::read(a.join("pipeline-yk/k1").join(f)).unwrap();
        let y = std::fs::read(b.join("pipeline-yk/k1").join(f)).unwrap();
        assert!(x == y, "{f} differs between runs");
    }

    let text = std::fs::read_to_string(a.join("pipeline-yk/k1/monodromy.txt")).unwrap();
    assert!(text.lines().any(|l| l.starts_with("t_1: ") && l.contains(" -> ")));
    assert!(text.lines().any(|l| l.starts_with("t_1^-1: ")));

    let o = curvchain(&a, &["monodromy", "--from-pipeline", a.join("pipeline-yk/k1/report.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&a.join("monodromy/k1/report.json"))["certificates"]["replay_matches"], true);

    let o = curvchain(&a, &["check-npc", "--strict", a.join("pipeline-yk/k1/yk.complex").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let o = curvchain(&a, &["export", "link", "--from", a.join("pipeline-yk/k1/yk.complex").to_str().unwrap(), "--format", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    let exported = std::fs::read_to_string(a.join("export/link_yk_dot/link_yk.dot")).unwrap();
    let recorded = std::fs::read_to_string(a.join("pipeline-yk/k1/link.dot")).unwrap();
    let g = curvchain::link::DotGraph::parse(&exported).unwrap();
    let h = curvchain::link::DotGraph::parse(&recorded).unwrap();
    assert_eq!(g.nodes, h.nodes);
    assert_eq!(g.edges, h.edges);
}

#[test]
fn zero_rank_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["pipeline-yk", "--k", "0"][..], &["build-xk", "--k", "0"], &["chain", "--ks", "0"]] {
        let o = curvchain(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unknown_export_format_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = curvchain(dir.path(), &["build-xk", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let f = dir.path().join("build-xk/k1/xk.complex");
    let o = curvchain(dir.path(), &["export", "link", "--from", f.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
    let o = curvchain(dir.path(), &["export", "link", "--from", f.to_str().unwrap(), "--format", "svg"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_input_fails_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let o = curvchain(dir.path(), &["check-npc", "/nonexistent/x.complex"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing artifact"));
}

#[test]
fn chain_onto_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let o = curvchain(dir.path(), &["chain", "--ks", "2", "--base", "gamma", "--base-rank", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&dir.path().join("chain/gamma2_2/report.json"));
    assert_eq!(r["certificates"]["chain"]["steps"][0]["npc"]["pass"], true);

    let o = curvchain(dir.path(), &["chain", "--ks", "1", "--base", "gamma", "--base-rank", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rank"));

    let o = curvchain(dir.path(), &["chain", "--base", "gamma", "--base-rank", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&dir.path().join("chain/gamma2_none/report.json"));
    assert_eq!(r["certificates"]["chain"]["steps"].as_array().unwrap().len(), 0);
}

#[test]
fn presentations_have_symmetric_segments() {
    let dir = tempfile::tempdir().unwrap();
    let o = curvchain(dir.path(), &["presentations", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&dir.path().join("presentations/n2_example1/report.json"));
    assert_eq!(r["certificates"]["vertex_blocks_per_side"], 6);
    assert_eq!(r["certificates"]["independent_tally"]["matches"], true);
    let p = dir.path().join("presentations/n2_example1/presentations.txt");
    let o = curvchain(dir.path(), &["export", "presentations", "--from", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn group_demos_pass() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(curvchain(dir.path(), &["bs-demo"]).status.code(), Some(0));
    assert_eq!(curvchain(dir.path(), &["bass-test", "--samples", "100", "--seed", "3"]).status.code(), Some(0));
    let r = report(&dir.path().join("bass-test/all/report.json"));
    assert_eq!(r["seed"], 3);
}

#[test]
fn config_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, format!("out = {:?}\nk = 2\nnmax = 30\n", dir.path().join("cfg").display().to_string())).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_curvchain"))
        .args(["--config", cfg.to_str().unwrap(), "distort", "example1"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&dir.path().join("cfg/distort/example1_k2/report.json"));
    assert_eq!(r["inputs"]["nmax"], 30);
    let csv = dir.path().join("cfg/distort/example1_k2/witness.csv");
    let o = curvchain(dir.path(), &["distort", "fit", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}
