use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rapidec_cli::presets::{self, PRESETS};
use rapidec_cli::{load, parse_config, CliError};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rapidec"))
}

fn run_file(dir: &Path, text: &str, extra: &[&str]) -> Output {
    let cfg = dir.join("scenario.cfg");
    fs::write(&cfg, text).unwrap();
    bin()
        .args(["run", cfg.to_str().unwrap(), "--out", dir.join("out").to_str().unwrap()])
        .args(extra)
        .output()
        .unwrap()
}

const GAUSSIAN: &str = r#"
schema_version = 1
seed = 3

[[scenario]]
name = "g"
net = { family = "gaussian_peak", p = 1.0 }
eps_grid = { eps0 = 0.5, ratio = 0.75, count = 8 }
max_q = 2
max_l = 2
checks = ["sweep", "classify"]
"#;

#[test]
fn preset_names_are_stable() {
    let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
    assert_eq!(
        names,
        [
            "suite_gs",
            "suite_gsinf",
            "delta_table",
            "oscillatory_fourier",
            "null_checks",
            "taylor_bound",
            "affine_scale",
            "half_line"
        ]
    );
    let out = bin().arg("list-presets").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), PRESETS.len());
    assert!(text.lines().all(|l| l.split_whitespace().count() > 1));
}

#[test]
fn every_preset_parses() {
    for p in PRESETS {
        let cfg = load(p.name).unwrap_or_else(|e| panic!("{}: {e}", p.name));
        assert!(!cfg.scenarios.is_empty());
        assert!(!p.description().is_empty());
    }
    assert!(presets::find("suite_gs.cfg").is_some());
    assert!(matches!(load("no_such_preset"), Err(CliError::UnknownConfig(_))));
}

#[test]
fn missing_eps_grid_is_reported_with_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let text = GAUSSIAN.replace("eps_grid = { eps0 = 0.5, ratio = 0.75, count = 8 }\n", "");
    let out = run_file(dir.path(), &text, &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("scenario[0].eps_grid: required field missing"), "{err}");
}

#[test]
fn all_schema_errors_are_listed() {
    let text = r#"
schema_version = 2
colour = "blue"

[defaults]
eps_grid = { eps0 = 1.5, ratio = 0.75, count = 8 }

[[scenario]]
name = "a"
net = { family = "gaussian_pk", p = 1.0 }
checks = ["sweep", "plot"]

[[scenario]]
name = "b"
net = { family = "gaussian_peak", domain = "positive_half_line", p = 1.0 }
checks = ["fourier"]
spec = { kind = "bounded", generators = [[1.0]] }
"#;
    let errs = match parse_config(text, "t", Path::new(".")) {
        Err(e) => e.0,
        Ok(_) => panic!("config should be rejected"),
    };
    let joined = errs.join("\n");
    for needle in [
        "colour: unknown field",
        "schema_version: expected 1",
        "scenario[0].eps_grid",
        "scenario[0].checks",
        "scenario[0].net.family: unknown family `gaussian_pk`",
        "scenario[1].eps_grid",
        "scenario[1].spec.generators: not used by kind `bounded`",
    ] {
        assert!(joined.contains(needle), "missing `{needle}` in\n{joined}");
    }
}

#[test]
fn fourier_needs_the_whole_space() {
    let text = GAUSSIAN
        .replace("p = 1.0 }", "p = 1.0, domain = \"positive_half_line\" }")
        .replace("[\"sweep\", \"classify\"]", "[\"fourier\"]");
    let errs = parse_config(&text, "t", Path::new(".")).unwrap_err().0;
    assert!(errs.iter().any(|e| e.contains("`fourier` requires a net on the whole space")), "{errs:?}");
}

#[test]
fn timestamp_line_is_optional() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_file(dir.path(), GAUSSIAN, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("out/g.mixed.csv")).unwrap();
    assert!(csv.starts_with("# generated: "));
    let json = fs::read_to_string(dir.path().join("out/report.json")).unwrap();
    assert!(json.contains("\"generated\""));

    let out = run_file(dir.path(), GAUSSIAN, &["--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("out/g.mixed.csv")).unwrap();
    assert!(csv.starts_with("q,l,exponent,residual,decay_class\n"));
    let json = fs::read_to_string(dir.path().join("out/report.json")).unwrap();
    assert!(!json.contains("\"generated\"") && !json.contains("elapsed_ms"));
    let report: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["pass"], true);
}

#[test]
fn failed_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{GAUSSIAN}expect = {{ moderate = true, negligible = true }}\n");
    let out = run_file(dir.path(), &text, &["--no-timestamp"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("overall: FAIL"));
}

#[test]
fn summary_prints_two_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_file(dir.path(), GAUSSIAN, &["--no-timestamp"]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("  1.00"), "{stdout}");
}

#[test]
fn tabulated_nets_run_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let grid = rapidec::EpsilonGrid::new(0.5, 0.75, 8).unwrap();
    let mut data = String::from("eps,x,value_re\n");
    for eps in grid.values() {
        for i in 0..=1600 {
            let x = -8.0 + 0.01 * i as f64;
            data.push_str(&format!("{eps},{x},{}\n", (-x * x).exp() / eps));
        }
    }
    fs::write(dir.path().join("peak.csv"), data).unwrap();
    let text = GAUSSIAN.replace(
        "net = { family = \"gaussian_peak\", p = 1.0 }",
        "net = { family = \"tabulated\", path = \"peak.csv\" }",
    );
    let out = run_file(dir.path(), &text, &["--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("out/g.derivative.csv")).unwrap();
    let exponents: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(exponents.iter().all(|e| (e - 1.0).abs() < 1e-6), "{exponents:?}");
}
