use std::path::PathBuf;
use std::process::{Command, Output};

fn write_config(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdmosc"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const BASE: &str = r#"{
  "model": {"omega": 1, "a": 1},
  "ambiguity": {"alpha": -0.25, "beta": -0.5},
  "simulate": {"initial": {"x": 0.25, "xdot": 0}, "t_end": 3, "samples": 4},
  "period_sweep": {"energies": [0.5, 2, 5]},
  "spectrum": {"levels": 4},
  "eigensolve": {"levels": 3, "space": "xi"}
}"#;

#[test]
fn missing_key_reports_its_path() {
    let cfg = write_config("missing.json", r#"{"model": {"omega": 1}}"#);
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.contains("`model`") && err.contains("missing field `a`"),
        "{err}"
    );
}

#[test]
fn unknown_key_is_rejected() {
    let cfg = write_config(
        "unknown.json",
        r#"{"model": {"omega": 1, "a": 1, "omgea": 2}}"#,
    );
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("model.omgea"));
}

#[test]
fn unreadable_config_is_a_config_error() {
    let out = run(&["spectrum", "--config", "/nonexistent/run.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fixed_point_simulation_is_constant() {
    let cfg = write_config("fixed_point_simulation_is_constant.json", BASE);
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("t,x,xdot,p,H\n"));
    let table = rows(&text);
    assert_eq!(table.len(), 4);
    for row in &table {
        assert_eq!(row[1].parse::<f64>().unwrap(), 0.25);
        assert_eq!(row[2].parse::<f64>().unwrap(), 0.0);
        assert_eq!(row[4].parse::<f64>().unwrap(), 1.0);
    }
}

#[test]
fn period_sweep_flags_forbidden_energies_per_row() {
    let cfg = write_config("period_sweep_flags_forbidden_energies_per_row.json", BASE);
    let out = run(&["period-sweep", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let table = rows(&stdout(&out));
    assert_eq!(table.len(), 3);
    assert!(table[0][3].starts_with("forbidden"));
    assert!(table[0][1].is_empty());
    for row in &table[1..] {
        assert_eq!(row[3], "ok");
        let ratio: f64 = row[2].parse().unwrap();
        assert!((ratio - 1.0).abs() < 1e-6);
    }
    assert!(stderr(&out).contains("E = 0.5"));
}

#[test]
fn flags_override_the_config() {
    let cfg = write_config("flags_override_the_config.json", BASE);
    let out = run(&[
        "period-sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--omega",
        "2",
        "--energies",
        "4,10",
    ]);
    assert!(out.status.success());
    let table = rows(&stdout(&out));
    assert_eq!(table.len(), 2);
    for row in &table {
        let t: f64 = row[1].parse().unwrap();
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
    }
}

#[test]
fn spectrum_report_has_even_spacing() {
    let cfg = write_config("spectrum_report_has_even_spacing.json", BASE);
    let out = run(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let runs = doc["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 1);
    let gaps = &runs[0]["gaps"];
    for g in gaps["analytic"].as_array().unwrap() {
        assert_eq!(g.as_f64(), Some(2.0));
    }
    for space in ["xi_space", "x_space"] {
        for g in gaps[space].as_array().unwrap() {
            assert!((g.as_f64().unwrap() - 2.0).abs() < 1e-3);
        }
    }
}

#[test]
fn eigensolve_rejects_too_many_levels_for_grid() {
    let cfg = write_config("eigensolve_rejects_too_many_levels_for_grid.json", BASE);
    let out = run(&[
        "eigensolve",
        "--config",
        cfg.to_str().unwrap(),
        "--levels",
        "100",
        "--n-points",
        "64",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn unbound_ordering_exits_four() {
    let cfg = write_config("unbound_ordering_exits_four.json", BASE);
    let out = run(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--a",
        "0.1",
        "--alpha",
        "0",
        "--beta",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(out.stdout.is_empty());
}
