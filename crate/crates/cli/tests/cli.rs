use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_monolab");

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn monolab(out: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("MONOLAB_OUT_DIR")
        .output()
        .expect("spawn monolab")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))).unwrap()
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let s = read_json(&crate_dir().join("schema").join(format!("{name}.schema.json")));
    jsonschema::JSONSchema::options()
        .with_draft(jsonschema::Draft::Draft202012)
        .compile(&s)
        .expect("schema compiles")
}

fn assert_valid(schema: &jsonschema::JSONSchema, v: &Value, what: &str) {
    if let Err(errs) = schema.validate(v) {
        let msgs: Vec<String> = errs.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{what} violates schema: {msgs:?}");
    }
}

#[test]
fn bps_table_has_header_and_increasing_radii() {
    let dir = tempfile::tempdir().unwrap();
    let out = monolab(dir.path(), &["bps", "--mass", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_path(dir.path().join("bps.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["r", "a", "phi", "abs_phi", "e", "f"]);
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 200);
    assert_eq!(rows[0][0], 0.01);
    assert_eq!(rows[199][0], 10.0);
    for w in rows.windows(2) {
        assert!(w[1][0] > w[0][0]);
        assert!(w[1][3] > w[0][3], "|Φ| should increase with r");
    }
}

#[test]
fn unknown_parameter_exits_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = monolab(dir.path(), &["bps", "--mass", "1", "--set", "mas=2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`mas`"));
    let m = read_json(&dir.path().join("bps.manifest.json"));
    assert_eq!(m["exit_code"], 1);
    assert!(m["error"].as_str().unwrap().contains("mas"));
}

#[test]
fn out_of_range_mass_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = monolab(dir.path(), &["bps", "--mass", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parameters.mass"));
}

#[test]
fn unknown_tolerance_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = monolab(dir.path(), &["bps", "--mass", "1", "--tol", "thetta=0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("thetta"));
}

#[test]
fn help_exits_zero() {
    let out = Command::new(BIN).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("blowup"));
}

#[test]
fn fixed_center_blowup_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = monolab(dir.path(), &["blowup"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = read_json(&dir.path().join("blowup.report.json"));
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["measured"]["sets_equal"], true);
    assert!(r["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn corrupted_scenario_exits_two_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = crate_dir().join("configs/blowup-corrupted.json");
    let out = monolab(dir.path(), &["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = read_json(&dir.path().join("blowup.report.json"));
    assert_eq!(r["verdict"], "fail");
    let cx = r["counterexamples"].as_array().unwrap();
    assert!(!cx.is_empty());
    assert_eq!(cx[0]["kind"], "non-monopole-labeled-monopole");
    assert!(cx[0]["violation"]["residual"].as_f64().unwrap() > 1e-6);
    assert_eq!(read_json(&dir.path().join("blowup.manifest.json"))["exit_code"], 2);
}

#[test]
fn drifting_scenario_reports_escape() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = crate_dir().join("configs/blowup-drifting.json");
    let out = monolab(dir.path(), &["--config", cfg.to_str().unwrap(), "blowup"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read_json(&dir.path().join("blowup.report.json"))["verdict"], "escaped");
}

#[test]
fn wrong_degree_expectation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = monolab(dir.path(), &["degree", "--set", "expected=2"]);
    assert_eq!(out.status.code(), Some(2));
    let r = read_json(&dir.path().join("degree.report.json"));
    assert_eq!(r["measured"]["degree"], 1);
}

#[test]
fn flags_override_config_and_subcommand_must_match() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = crate_dir().join("configs/bps.json");
    let cfg = cfg.to_str().unwrap();
    let out = monolab(dir.path(), &["--config", cfg, "bps", "--mass", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read_json(&dir.path().join("bps.report.json"))["inputs"]["parameters"]["mass"], 3.0);
    let out = monolab(dir.path(), &["--config", cfg, "radius"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn env_var_sets_output_dir_but_flag_wins() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let run = |extra: &[&str]| {
        Command::new(BIN)
            .args(extra)
            .args(["bps", "--mass", "1"])
            .env("MONOLAB_OUT_DIR", env_dir.path())
            .output()
            .unwrap()
    };
    assert_eq!(run(&[]).status.code(), Some(0));
    assert!(env_dir.path().join("bps.csv").exists());
    assert_eq!(run(&["--out", flag_dir.path().to_str().unwrap()]).status.code(), Some(0));
    assert!(flag_dir.path().join("bps.csv").exists());
}

#[test]
fn gnuplot_and_json_formats() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(monolab(dir.path(), &["--format", "gnuplot", "bps", "--mass", "2"]).status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("bps.dat")).unwrap();
    assert!(text.starts_with("# r a phi abs_phi e f\n"));
    assert_eq!(monolab(dir.path(), &["--format", "json", "bps", "--mass", "2"]).status.code(), Some(0));
    let t = read_json(&dir.path().join("bps.json"));
    assert_eq!(t["rows"].as_array().unwrap().len(), 200);
}

#[test]
fn repeated_runs_give_identical_artifacts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert_eq!(monolab(d.path(), &["--seed", "11", "lowerbound"]).status.code(), Some(0));
        assert_eq!(monolab(d.path(), &["blowup"]).status.code(), Some(0));
    }
    let mut compared = 0;
    for e in fs::read_dir(a.path()).unwrap() {
        let name = e.unwrap().file_name();
        if name.to_string_lossy().ends_with(".manifest.json") {
            continue;
        }
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap(),
            "{name:?} differs"
        );
        compared += 1;
    }
    assert_eq!(compared, 4);
}

#[test]
fn seed_changes_sampled_balls() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    monolab(a.path(), &["--seed", "1", "lowerbound"]);
    monolab(b.path(), &["--seed", "2", "lowerbound"]);
    assert_ne!(
        fs::read(a.path().join("lowerbound.report.json")).unwrap(),
        fs::read(b.path().join("lowerbound.report.json")).unwrap()
    );
}

#[test]
fn artifacts_and_shipped_configs_match_schemas() {
    let (config, report, manifest, table) = (schema("config"), schema("report"), schema("manifest"), schema("table"));
    for e in fs::read_dir(crate_dir().join("configs")).unwrap() {
        let p = e.unwrap().path();
        assert_valid(&config, &read_json(&p), &p.display().to_string());
    }
    let bad = serde_json::json!({ "command": "bps", "parameters": { "mas": 1 } });
    assert!(!config.is_valid(&bad));

    let dir = tempfile::tempdir().unwrap();
    monolab(dir.path(), &["--format", "json", "bubble"]);
    monolab(dir.path(), &["bps", "--mass", "0"]);
    assert_valid(&report, &read_json(&dir.path().join("bubble.report.json")), "bubble.report.json");
    for name in ["bubble.manifest.json", "bps.manifest.json"] {
        assert_valid(&manifest, &read_json(&dir.path().join(name)), name);
    }
    assert_valid(&table, &read_json(&dir.path().join("bubble.json")), "bubble.json");
}

#[test]
fn audit_command_passes_every_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let out = monolab(dir.path(), &["audit"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert_eq!(stdout.lines().filter(|l| l.starts_with("[PASS]")).count(), 13);
    let r = read_json(&dir.path().join("audit.report.json"));
    assert_valid(&schema("report"), &r, "audit.report.json");
}
