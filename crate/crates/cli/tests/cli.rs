use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lulu::lulu::{SemigroupElement, SmootherConfig};
use lulu::PLFunction;
use serde_json::Value;
use tempfile::TempDir;

const PULSE_JSON: &str = r#"{"domain":[0,10],"breakpoints":[0,4,4.4,10],"values":[0,1,1,0],"right_limits":[0,1,0],"left_limits":[0,1,0]}"#;
/// The pulse with ramps of width 1e-7, as CSV cannot carry jumps.
const PULSE_CSV: &str = "x,y\n0,0\n4,0\n4.0000001,1\n4.4,1\n4.4000001,0\n10,0\n";

fn lulu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lulu"))
        .args(args)
        .env_remove("LULU_TOL")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited")
}

#[test]
fn pulse_csv_lu_report() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "pulse.csv", PULSE_CSV);
    let output = dir.path().join("out.csv");
    let out = lulu(&["smooth", "-i", &input, "--word", "LU", "--delta", "1", "-o", output.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["reduced"], "LU");
    assert!((r["error"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((r["before"]["mu_hat"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(r["verdicts"]["interior_bound"], true);
    assert_eq!(r["verdicts"]["finite_domain_bound"], true);
    assert!(r.get("runtime_ms").is_none());
    let smoothed = fs::read_to_string(output).unwrap();
    for line in smoothed.lines().skip(1) {
        assert_eq!(line.split(',').nth(1).unwrap().parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn exact_pulse_with_oracle() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "pulse.json", PULSE_JSON);
    let out = lulu(&["smooth", "-i", &input, "--format", "json-pl", "--delta", "1", "--oracle", "--assert-bounds"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["before"]["mu"], 1.0);
    assert_eq!(r["after"]["mu"], 0.0);
    assert_eq!(r["oracle"]["result_gap"], 0.0);
    assert_eq!(r["oracle"]["grid_mu"], 1.0);
}

#[test]
fn constant_signal_is_unchanged() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "c.csv", "0,2.5\n3,2.5\n10,2.5\n");
    let output = dir.path().join("out.csv");
    for word in ["L", "U", "UL", "LULU"] {
        let out = lulu(&["smooth", "-i", &input, "--word", word, "--delta", "1.7", "-o", output.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        assert_eq!(report(&out)["error"], 0.0);
        let body = fs::read_to_string(&output).unwrap();
        assert!(body.lines().skip(1).all(|l| l.ends_with(",2.5")));
    }
}

#[test]
fn word_is_reduced_by_table() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "pulse.json", PULSE_JSON);
    let r = report(&lulu(&["smooth", "-i", &input, "--format", "json-pl", "--word", "ULU", "--delta", "1"]));
    assert_eq!(r["word"], "ULU");
    assert_eq!(r["reduced"], "LU");
    let r = report(&lulu(&["smooth", "-i", &input, "--format", "json-pl", "--word", "L∘U∘L", "--delta", "1"]));
    assert_eq!(r["reduced"], "UL");
}

#[test]
fn json_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "pulse.json", PULSE_JSON);
    let output = dir.path().join("out.json");
    let out = lulu(&["smooth", "-i", &input, "--format", "json-pl", "--word", "U", "--delta", "1.5", "-o", output.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let back: PLFunction = serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
    let f: PLFunction = serde_json::from_str(PULSE_JSON).unwrap();
    let expected = SemigroupElement::U.apply(&f, &SmootherConfig::new(1.5).unwrap());
    assert_eq!(back, expected);
    // and once more through the command itself
    let again = dir.path().join("again.json");
    let out = lulu(&["smooth", "-i", output.to_str().unwrap(), "--format", "json-pl", "--word", "U", "--delta", "1.5", "-o", again.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["error"], 0.0);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "pulse.json", PULSE_JSON);
    let args = ["smooth", "-i", &input, "--format", "json-pl", "--word", "UL", "--delta", "0.7"];
    assert_eq!(lulu(&args).stdout, lulu(&args).stdout);
    let timed = report(&lulu(&[&args[..], &["--timing"]].concat()));
    assert!(timed["runtime_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn tolerance_from_environment() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "pulse.json", PULSE_JSON);
    let out = Command::new(env!("CARGO_BIN_EXE_lulu"))
        .args(["smooth", "-i", &input, "--format", "json-pl", "--delta", "1"])
        .env("LULU_TOL", "0.001")
        .output()
        .unwrap();
    assert_eq!(report(&out)["tolerance"], 0.001);
}

#[test]
fn discrete_sequence() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.csv", "value\n0\n0\n5\n0\n0\n");
    let output = dir.path().join("out.csv");
    let out = lulu(&["smooth", "-i", &input, "--format", "csv-seq", "--word", "L", "--n", "1", "-o", output.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["n"], 1);
    assert_eq!(r["boundary"], "clamp");
    assert!(r["verdicts"].is_null());
    assert_eq!(r["error"], 5.0);
    assert_eq!(fs::read_to_string(output).unwrap(), "0\n0\n0\n0\n0\n");
    let out = lulu(&["smooth", "-i", &input, "--format", "csv-seq", "--n", "1", "--boundary", "extend-constant", "--fill", "9"]);
    assert_eq!(report(&out)["boundary"]["extend-constant"], 9.0);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let pulse = write(&dir, "pulse.json", PULSE_JSON);
    let empty = write(&dir, "empty.csv", "");
    let junk = write(&dir, "junk.json", "{\"domain\": [0, 1]}");
    let unwritable = "/nonexistent-dir/out.svg";

    assert_eq!(code(&lulu(&["plot", "-i", &empty, "--delta", "1", "-o", "x.svg"])), 2);
    assert_eq!(code(&lulu(&["smooth", "-i", &junk, "--format", "json-pl", "--delta", "1"])), 2);
    assert_eq!(code(&lulu(&["smooth", "-i", "/no/such/file.csv", "--delta", "1"])), 2);
    assert_eq!(code(&lulu(&["smooth", "-i", &pulse, "--format", "json-pl", "--delta", "0"])), 3);
    assert_eq!(code(&lulu(&["smooth", "-i", &pulse, "--format", "json-pl", "--delta", "1", "--word", "LQ"])), 3);
    assert_eq!(code(&lulu(&["smooth", "-i", &pulse, "--format", "json-pl"])), 3);
    assert_eq!(code(&lulu(&["smooth", "--bogus"])), 3);
    assert_eq!(code(&lulu(&["plot", "-i", &pulse, "--format", "json-pl", "--delta", "1", "-o", unwritable])), 5);
    assert_eq!(code(&lulu(&["smooth", "-i", &pulse, "--format", "json-pl", "--delta", "1", "-o", unwritable])), 5);
}

fn panel<'a>(svg: &'a str, name: &str) -> &'a str {
    let start = svg.find(&format!("<g id=\"panel-{name}\">")).expect("panel present");
    let end = start + svg[start..].find("</g>").unwrap();
    &svg[start..end]
}

#[test]
fn plot_has_four_panels() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "pulse.json", PULSE_JSON);
    let out_path = dir.path().join("p.svg");
    let out = lulu(&["plot", "-i", &input, "--format", "json-pl", "--delta", "1", "-o", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let svg = fs::read_to_string(&out_path).unwrap();
    assert!(svg.starts_with("<?xml") && svg.contains("version=\"1.1\""));
    assert_eq!(svg.matches("<g id=\"panel-").count(), 4);
    for name in ["L", "U", "LU", "UL"] {
        let p = panel(&svg, name);
        assert!(p.contains("stroke-dasharray"), "f is dotted in {name}");
    }
    // L removes the pulse: its solid path is flat
    let l = panel(&svg, "L");
    let solid = l.lines().find(|s| s.contains("<path") && !s.contains("dasharray")).unwrap();
    let d = &solid[solid.find("d=\"").unwrap() + 3..];
    let d = &d[..d.find('"').unwrap()];
    let ys: Vec<&str> = d
        .split_whitespace()
        .map(|t| t.trim_start_matches(['M', 'L']).split(',').nth(1).unwrap())
        .collect();
    assert!(ys.windows(2).all(|w| w[0] == w[1]), "{d}");

    let again = dir.path().join("q.svg");
    lulu(&["plot", "-i", &input, "--format", "json-pl", "--delta", "1", "-o", again.to_str().unwrap()]);
    assert_eq!(fs::read(out_path).unwrap(), fs::read(again).unwrap());
}

#[test]
fn verify_default_run_passes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = lulu(&["verify", "--seed", "42", "--count", "100", "--artifact-dir", d]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS smoother_bounds") && !text.contains("FAIL"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn verify_zero_cases_is_vacuous() {
    assert_eq!(code(&lulu(&["verify", "--count", "0"])), 0);
}

#[test]
fn verify_is_reproducible() {
    let args = ["verify", "--seed", "7", "--count", "12", "--jump-prob", "0.5"];
    assert_eq!(lulu(&args).stdout, lulu(&args).stdout);
}

#[test]
fn injected_fault_fails_with_counterexample() {
    let dir = TempDir::new().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = lulu(&["verify", "--seed", "42", "--count", "5", "--inject-fault", "--artifact-dir", d]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL smoother_bounds"));
    let files: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(!files.is_empty());
    let c: Value = serde_json::from_str(&fs::read_to_string(&files[0]).unwrap()).unwrap();
    assert_eq!(c["seed"], 42);
    assert_eq!(c["failed"][0]["name"], "smoother_bounds");
    let f: PLFunction = serde_json::from_value(c["function"].clone()).unwrap();
    assert_eq!(f.domain(), (0.0, 10.0));
}

#[test]
fn verify_rejects_bad_ranges() {
    assert_eq!(code(&lulu(&["verify", "--delta-min", "2", "--delta-max", "1"])), 3);
    assert_eq!(code(&lulu(&["verify", "--breakpoints-min", "1"])), 3);
    let unwritable = Path::new("/nonexistent-dir");
    let out = lulu(&["verify", "--count", "2", "--inject-fault", "--artifact-dir", unwritable.to_str().unwrap()]);
    assert_eq!(code(&out), 5);
}

#[test]
fn experiment_reports_both_mappings() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.csv", "0\n0\n5\n0\n0\n3\n1\n4\n1\n5\n9\n2\n6\n");
    let out = lulu(&["experiment", "-i", &input, "--n", "1"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let m = r["mappings"].as_array().unwrap();
    assert_eq!(m[0]["delta"], 2.0);
    assert_eq!(m[1]["delta"], 1.0);
    assert_eq!(m[1]["gap"], 0.0);
    assert_eq!(code(&lulu(&["experiment", "-i", &input, "--n", "0"])), 3);
}
