use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ldes_boundary::report::tables::{from_csv, CurveRow, SolutionRow, SOLUTION_HEADER};
use ldes_boundary::report::{sweep_exit_code, tables::to_csv, RunManifest};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldes-boundary"))
        .args(args)
        .env_remove("LDES_CONFIG")
        .env_remove("LDES_OUT_DIR")
        .env_remove("LDES_SOLVER")
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

#[test]
fn baseline_writes_results_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = data("toy_a/config.toml");
    let o = run(&["--config", s(&cfg), "--out-dir", s(&out), "baseline"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&out.join("baseline_result.json"));
    assert!((r["q_star"].as_f64().unwrap() - 154.5).abs() < 1e-9);
    assert_eq!(r["num_variables"], 17);
    for f in ["cost_breakdown.csv", "dispatch.csv", "solution.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let m: RunManifest = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m.command, "baseline");
    assert_eq!(m.inputs.len(), 2);
    assert!(m.stale_inputs().is_empty());
    assert!(m.stages.iter().any(|s| s.stage == "baseline_solve"));
}

#[test]
fn bad_input_exits_2_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(&["--config", "/nonexistent/config.toml", "--out-dir", s(&out), "baseline"]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "config");
    assert!(!out.exists());

    // An availability factor out of range, with the offending line named.
    let src = data("toy_b");
    for f in ["generators.csv", "demand.csv", "config.toml"] {
        fs::copy(src.join(f), dir.path().join(f)).unwrap();
    }
    fs::write(dir.path().join("availability.csv"), "asset_id,hour,factor\nsolar,1,1\nsolar,2,1.5\nsolar,3,0\n").unwrap();
    let cfg = dir.path().join("config.toml");
    let o = run(&["--config", s(&cfg), "--out-dir", s(&out), "sweep"]);
    assert_eq!(o.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("availability.csv:3:") && msg.contains("factor"), "{msg}");
    assert!(!out.exists());
}

#[test]
fn sweep_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = data("toy_b/config.toml");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = run(&["--config", s(&cfg), "--out-dir", s(out), "--workers", "2", "sweep"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let mut files: Vec<PathBuf> = Vec::new();
    for e in fs::read_dir(&a).unwrap().chain(fs::read_dir(a.join("points")).unwrap()) {
        let p = e.unwrap().path();
        if p.is_file() && p.file_name().unwrap() != "manifest.json" {
            files.push(p);
        }
    }
    assert!(files.len() >= 10);
    for f in files {
        let rel = f.strip_prefix(&a).unwrap();
        assert_eq!(fs::read(&f).unwrap(), fs::read(b.join(rel)).unwrap(), "{}", rel.display());
    }
    let curve: Vec<CurveRow> = from_csv(&fs::read(a.join("boundary_curve.csv")).unwrap()).unwrap();
    let at10 = curve.iter().find(|r| r.capacity_mw == 10.0).unwrap();
    assert!((at10.boundary_cost_usd_per_mw.unwrap() - 12.0).abs() < 1e-9);
    let summary = json(&a.join("sweep_summary.json"));
    assert_eq!(summary["min_viable_capacity_mw"], 10.0);
    let bis = summary["bisected_min_viable_mw"].as_f64().unwrap();
    assert!(bis > 5.0 && bis <= 10.0);
}

#[test]
fn sweep_capacities_from_flag_and_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = data("toy_b/config.toml");
    let list = dir.path().join("caps.txt");
    fs::write(&list, "10\n20\n").unwrap();
    let out = dir.path().join("f");
    let o = run(&["--config", s(&cfg), "--out-dir", s(&out), "sweep", "--capacities-file", s(&list)]);
    assert_eq!(o.status.code(), Some(0));
    let curve: Vec<CurveRow> = from_csv(&fs::read(out.join("boundary_curve.csv")).unwrap()).unwrap();
    assert_eq!(curve.iter().map(|r| r.capacity_mw).collect::<Vec<_>>(), vec![10.0, 20.0]);

    let out = dir.path().join("bad");
    let o = run(&["--config", s(&cfg), "--out-dir", s(&out), "sweep", "--capacities", "10,-5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn opportunity_reports_boundary_cost() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let cfg = data("toy_b/config.toml");
    let o = run(&["--config", s(&cfg), "--out-dir", s(&out), "opportunity", "--ldes-power-mw", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&out.join("opportunity_result.json"));
    assert!((r["boundary_cost_usd_per_mw"].as_f64().unwrap() - 12.0).abs() < 1e-9);
    assert_eq!(r["budget_overrun"], 0.0);
    assert_eq!(r["viable"], true);
}

#[test]
fn emit_model_and_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = data("toy_a/config.toml");
    let e = dir.path().join("e");
    let b = dir.path().join("b");
    assert_eq!(run(&["--config", s(&cfg), "--out-dir", s(&e), "emit-model"]).status.code(), Some(0));
    assert_eq!(run(&["--config", s(&cfg), "--out-dir", s(&b), "baseline"]).status.code(), Some(0));
    let registry = fs::read_to_string(e.join("registry.csv")).unwrap();
    assert_eq!(registry.lines().filter(|l| l.starts_with("row,")).count(), 17);

    let sol = b.join("solution.csv");
    let model = e.join("model.mps");
    let c = dir.path().join("c");
    let o = run(&["--out-dir", s(&c), "check", "--solution", s(&sol), "--model", s(&model)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&c.join("check_report.json"))["max_bound_violation"], 0.0);
    // Without --model the baseline is rebuilt from the config.
    let o = run(&["--config", s(&cfg), "--out-dir", s(&c), "check", "--solution", s(&sol)]);
    assert_eq!(o.status.code(), Some(0));

    let mut rows: Vec<SolutionRow> = from_csv(&fs::read(&sol).unwrap()).unwrap();
    rows[0].value += 1.0;
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, to_csv(&rows, SOLUTION_HEADER)).unwrap();
    let o = run(&["--out-dir", s(&c), "check", "--solution", s(&bad), "--model", s(&model)]);
    assert_eq!(o.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "check");
}

#[test]
fn zero_ldes_opportunity_model_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z");
    let cfg = data("toy_b/config.toml");
    let o = run(&[
        "--config", s(&cfg), "--out-dir", s(&out), "emit-model", "--mode", "opportunity", "--ldes-power-mw", "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unbounded boundary cost"));
    assert!(!out.exists());

    let o = run(&["--config", s(&cfg), "--out-dir", s(&out), "emit-model", "--mode", "opportunity", "--ldes-power-mw", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let mps = fs::read_to_string(out.join("model.mps")).unwrap();
    assert!(mps.contains("OBJSENSE") && mps.contains("MAX"));
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("s.csv");
    fs::write(&sol, "name,label,value\n").unwrap();
    let o = run(&["--out-dir", s(dir.path()), "check", "--solution", s(&sol)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--config"));
}

#[test]
fn partial_sweep_failures_exit_4() {
    assert_eq!(sweep_exit_code(0, 3), 0);
    assert_eq!(sweep_exit_code(1, 3), 4);
    assert_eq!(sweep_exit_code(3, 3), 3);
}
