use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ltlab::constants::{BoundReport, Verdict};
use serde_json::Value;
use tempfile::TempDir;

fn ltlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with(config: &str, dir: &Path, args: &[&str]) -> Output {
    let cfg = dir.join("config.json");
    fs::write(&cfg, config).unwrap();
    let mut all = vec![
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ];
    all.extend_from_slice(args);
    ltlab(&all)
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

const POTENTIALS: &str = r#"
  "potentials": [
    {"dim": 1, "family": "PoschlTeller", "params": {"lambda": 1.0}, "truncation_radius": 20.0},
    {"dim": 1, "family": "PoschlTeller", "params": {"lambda": 2.0}, "truncation_radius": 20.0},
    {"dim": 1, "family": "GaussianWell", "params": {"depth": -1.0, "width": 1.0}, "truncation_radius": 10.0}
  ]"#;

#[test]
fn constants_table_has_three_halves_row() {
    let dir = TempDir::new().unwrap();
    let out = ltlab(&["constants", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let table = read(dir.path(), "constants.csv");
    assert!(table.starts_with("kind,gamma,n,value,source\n"));
    let found = table.lines().skip(1).any(|line| {
        let f: Vec<&str> = line.split(',').collect();
        f[0] == "L_semiclassical"
            && f[1] == "1.5"
            && f[2] == "1"
            && (f[3].parse::<f64>().unwrap() - 0.1875).abs() < 1e-12
    });
    assert!(found, "{table}");
    assert!(table.contains("L_sharp,0.5,1,0.5,sharp_known"));
    assert!(table
        .lines()
        .any(|l| l.starts_with("K_n,1.0,1,3.289868133696")));
}

#[test]
fn spectrum_json_for_poschl_teller_and_positive_potential() {
    let dir = TempDir::new().unwrap();
    let out = run_with(&format!("{{{POTENTIALS}}}"), dir.path(), &["spectrum"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Value = serde_json::from_str(&read(dir.path(), "spectrum_1.json")).unwrap();
    let values: Vec<f64> = doc["result"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 2);
    assert!(
        (values[0] + 4.0).abs() < 1e-4 && (values[1] + 1.0).abs() < 1e-4,
        "{values:?}"
    );
    assert_eq!(doc["potential"]["family"], "PoschlTeller");
    let positive: Value = serde_json::from_str(&read(dir.path(), "spectrum_2.json")).unwrap();
    assert!(positive["result"]["eigenvalues"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn malformed_config_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let out = run_with("{\n  \"gammas\": [1.0,,]\n}", dir.path(), &["spectrum"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = run_with(r#"{"gamma": [1.0]}"#, dir.path(), &["spectrum"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field `gamma`"));

    let out = run_with(
        &format!("{{{POTENTIALS}, \"gammas\": [0.25]}}"),
        dir.path(),
        &["bound-check"],
    );
    assert_eq!(out.status.code(), Some(2));

    let bad_family = r#"{"potentials": [{"dim": 1, "family": "SquareWell", "params": {"depth": 1.0, "half_width": -1.0}, "truncation_radius": 5.0}]}"#;
    assert_eq!(
        run_with(bad_family, dir.path(), &["spectrum"])
            .status
            .code(),
        Some(2)
    );

    let missing = ltlab(&["spectrum", "--config", "/nonexistent/config.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"kinetic": {"families": [{"kind": "gaussians", "centers": [0.0, 0.0], "width": 1.0, "radius": 5.0, "interior": 99}]}}"#;
    let out = run_with(config, dir.path(), &["kinetic"]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn bound_check_rows() {
    let dir = TempDir::new().unwrap();
    let config = format!(
        r#"{{{POTENTIALS}, "gammas": [1.0, 1.5], "sources": ["sharp_known", "semiclassical"]}}"#
    );
    let out = run_with(&config, dir.path(), &["bound-check"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = read(dir.path(), "bound_check.csv");
    assert!(csv.starts_with("potential,gamma,n,lhs,rhs,ratio,source,verdict\n"));
    assert_eq!(csv.lines().count(), 1 + 3 * 2 * 2);
    let reports: Vec<BoundReport> =
        serde_json::from_str(&read(dir.path(), "bound_check.json")).unwrap();
    assert_eq!(reports.len(), 12);
    for r in reports
        .iter()
        .filter(|r| r.subject.starts_with("PoschlTeller") && r.gamma == 1.5)
    {
        assert!((r.ratio - 1.0).abs() < 1e-3, "{r:?}");
    }
    for r in reports
        .iter()
        .filter(|r| r.subject.starts_with("GaussianWell"))
    {
        assert!(r.lhs == 0.0 || r.verdict == Verdict::NotApplicable);
    }
    let na: Vec<_> = reports
        .iter()
        .filter(|r| r.verdict == Verdict::NotApplicable)
        .collect();
    assert_eq!(na.len(), 3);
    assert!(na.iter().all(|r| r.gamma == 1.0));
}

#[test]
fn outputs_are_deterministic_across_job_counts() {
    let config = format!(
        r#"{{{POTENTIALS}, "gammas": [0.5, 1.0, 1.5], "grid_points": 1000, "seed": 7,
            "kinetic": {{"families": [{{"kind": "random_gaussians", "count": 3, "width": 0.8, "radius": 6.0, "interior": 599}},
                                     {{"kind": "box_modes", "count": 4, "radius": 1.0, "interior": 399}}]}}}}"#
    );
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for (dir, jobs) in [(&a, "1"), (&b, "4")] {
        for cmd in ["bound-check", "kinetic", "spectrum"] {
            let out = run_with(&config, dir.path(), &[cmd, "--jobs", jobs]);
            assert!(
                out.status.success(),
                "{}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
    }
    for name in [
        "bound_check.csv",
        "bound_check.json",
        "kinetic.csv",
        "kinetic_extras.csv",
        "density_0.csv",
        "spectrum_1.json",
    ] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
    let c = TempDir::new().unwrap();
    assert!(run_with(&config, c.path(), &["kinetic", "--seed", "8"])
        .status
        .success());
    assert_ne!(
        read(a.path(), "density_0.csv"),
        read(c.path(), "density_0.csv")
    );
}

#[test]
fn bs_counts_agree_with_sturm_counts() {
    let dir = TempDir::new().unwrap();
    let config = format!(
        r#"{{{POTENTIALS}, "bs": {{"grid_points": 200, "ladder_points": 8, "export_matrix": true}}}}"#
    );
    let out = run_with(&config, dir.path(), &["bs"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = read(dir.path(), "bs_counts.csv");
    assert_eq!(csv.lines().count(), 1 + 3 * 8);
    for row in csv::Reader::from_reader(csv.as_bytes()).records() {
        let row = row.unwrap();
        assert_eq!(&row[3], &row[4], "{row:?}");
    }
    assert!(read(dir.path(), "bs_kernel_0.csv").starts_with("i,j,x_i,x_j,value"));
}

#[test]
fn kinetic_imports_csv_families() {
    let dir = TempDir::new().unwrap();
    let n = 201;
    let mut family = String::from("x,f1,f2\n");
    for i in 0..n {
        let x = -4.0 + 8.0 * i as f64 / (n - 1) as f64;
        family.push_str(&format!("{x},{},{}\n", (-x * x).exp(), x * (-x * x).exp()));
    }
    fs::write(dir.path().join("family.csv"), family).unwrap();
    let config = r#"{"kinetic": {"families": [{"kind": "csv", "path": "family.csv"}], "sources": ["semiclassical", "sharp_known"]}}"#;
    let out = run_with(config, dir.path(), &["kinetic"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = read(dir.path(), "kinetic.csv");
    assert!(csv.contains("semiclassical,satisfied") || csv.contains("semiclassical,violated"));
    assert!(csv.contains("sharp_known,not_applicable"));
    let extras = read(dir.path(), "kinetic_extras.csv");
    let row: Vec<&str> = extras.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "2");
    assert!(row[7].parse::<f64>().unwrap() < 1e-8 && row[8].parse::<f64>().unwrap() < 1e-8);
    let missing = r#"{"kinetic": {"families": [{"kind": "csv", "path": "nope.csv"}]}}"#;
    assert_eq!(
        run_with(missing, dir.path(), &["kinetic"]).status.code(),
        Some(2)
    );
}

#[test]
fn accept_passes_and_is_reproducible() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        let out = run_with("{}", dir.path(), &["accept"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
    let text = read(a.path(), "acceptance.txt");
    assert_eq!(text.lines().filter(|l| l.contains("[PASS]")).count(), 12);
    assert_eq!(text, read(b.path(), "acceptance.txt"));
    assert_eq!(
        read(a.path(), "acceptance.json"),
        read(b.path(), "acceptance.json")
    );
}

#[test]
fn accept_with_wrong_constant_fails() {
    let dir = TempDir::new().unwrap();
    let out = run_with(
        r#"{"acceptance": {"constant_scale": 1.01}}"#,
        dir.path(),
        &["accept"],
    );
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("1 (constants table)"), "{stderr}");
    assert!(read(dir.path(), "acceptance.txt").contains("criterion  1 [FAIL]"));
}
