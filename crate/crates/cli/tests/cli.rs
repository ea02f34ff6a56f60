use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cone-ab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn flat_zero_flux_phase_shifts_vanish() {
    let o = run(&["phase-shifts", "--alpha", "1", "--flux", "0", "--m", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(num(&row[9]), 0.0);
    }
}

#[test]
fn cone_phase_shift_example() {
    let o = run(&["phase-shifts", "--alpha", "0.8", "--flux", "0.25", "--m", "1"]);
    let rows = csv_rows(&o);
    assert!((num(&rows[0][9]) - (-0.811_838_808_456_820_5)).abs() < 1e-12);
}

#[test]
fn unsupported_channel_is_flagged_with_warning() {
    let o = run(&[
        "phase-shifts",
        "--alpha",
        "0.5",
        "--flux",
        "0",
        "--m",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["rows"][0]["status"], "unsupported");
    assert_eq!(doc["summary"]["warnings"], 1);
    assert_eq!(doc["diagnostics"][0]["level"], "warning");
    assert!(stderr(&o).contains("1 warnings"));
}

#[test]
fn smatrix_examples() {
    let o = run(&["smatrix", "--alpha", "1", "--flux", "0.5", "--m", "0"]);
    let row = &csv_rows(&o)[0];
    assert!(num(&row[7]).abs() < 1e-15);
    assert!((num(&row[8]) + 1.0).abs() < 1e-15);

    let o = run(&["smatrix", "--alpha", "1", "--flux", "0", "--m-max", "5"]);
    for row in csv_rows(&o) {
        assert!((num(&row[7]) - 1.0).abs() < 1e-15 && num(&row[8]).abs() < 1e-15);
    }

    let o = run(&[
        "smatrix", "--alpha", "0.7,0.9", "--flux", "0.3", "--k", "0.5,3", "--rho", "-2", "--m-max", "4",
    ]);
    for row in csv_rows(&o).iter().filter(|r| r[11] == "ok") {
        assert!((num(&row[9]) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn flat_zero_flux_amplitude_is_zero() {
    let o = run(&["amplitude", "--alpha", "1", "--flux", "0", "--k", "0.5,2"]);
    assert_eq!(o.status.code(), Some(0));
    for row in csv_rows(&o) {
        assert!(num(&row[6]) < 1e-10);
        assert_eq!(row[11], "ok");
    }
}

#[test]
fn amplitude_depends_on_energy() {
    let o = run(&[
        "amplitude",
        "--alpha",
        "0.8",
        "--flux",
        "0.25",
        "--k",
        "1,4",
        "--theta",
        "90",
        "--degrees",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(num(&rows[0][3]), 90.0);
    let (f1, f4) = (num(&rows[0][6]), num(&rows[1][6]));
    let spreads = num(&rows[0][8]) + num(&rows[1][8]);
    assert!((f1 - f4).abs() > spreads);
}

#[test]
fn divergent_direction_exits_with_non_convergence() {
    let theta = format!("{}", PI / 4.0);
    let o = run(&["amplitude", "--alpha", "0.8", "--flux", "0.25", "--theta", &theta]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(csv_rows(&o)[0][11], "not_converged");
}

#[test]
fn bound_states_examples() {
    let o = run(&[
        "bound-states",
        "--alpha",
        "1",
        "--flux",
        "0.5",
        "--rho",
        "-1",
        "--m",
        "0",
    ]);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 1);
    assert!((num(&rows[0][5]) - 1.0).abs() < 1e-10);
    assert_eq!(rows[0][7], "true");

    for rho in ["1", "zero"] {
        let o = run(&[
            "bound-states",
            "--alpha",
            "1",
            "--flux",
            "0.5",
            "--rho",
            rho,
            "--m",
            "0",
        ]);
        assert!(csv_rows(&o).is_empty());
    }
}

#[test]
fn per_channel_override_selects_bound_state() {
    let o = run(&["bound-states", "--flux", "0.5", "--m-max", "2", "--rho-m", "0=-1"]);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][2], "0");
}

#[test]
fn verify_reports_pass_and_controlled_failures() {
    let o = run(&["verify", "--alpha", "0.95", "--flux", "0.4", "--m", "0,1", "--rho", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(csv_rows(&o).iter().all(|r| r[11] == "pass"));

    let o = run(&[
        "verify",
        "--alpha",
        "0.95",
        "--flux",
        "0.4",
        "--m",
        "0",
        "--tolerance",
        "1e-12",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(csv_rows(&o)[0][11], "fail");
}

#[test]
fn default_verify_grid_passes() {
    let o = run(&["verify", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["summary"]["failed"], 0);
    assert!(doc["rows"].as_array().unwrap().len() >= 81);
}

#[test]
fn validation_errors_exit_with_one() {
    assert_eq!(run(&["phase-shifts", "--alpha", "1.5"]).status.code(), Some(1));
    assert_eq!(run(&["amplitude", "--theta", "0"]).status.code(), Some(1));
    assert_eq!(run(&["phase-shifts", "--rho", "abc"]).status.code(), Some(1));
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_cone-ab"))
        .args(["smatrix"])
        .env("CONE_AB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        "alpha = [0.9]\nflux = 0.3\nrho = \"inf\"\nm = [0, 1]\nformat = \"json\"\n\n[rho_overrides]\n1 = -0.5\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let doc = json(&run(&["smatrix", "--config", p]));
    assert_eq!(doc["meta"]["config"]["rho"], "inf");
    assert_eq!(doc["rows"][0]["rho"], "inf");
    assert_eq!(doc["rows"][1]["rho"], "-0.5");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);

    let o = run(&["smatrix", "--config", p, "--format", "csv", "--alpha", "1"]);
    let rows = csv_rows(&o);
    assert_eq!(num(&rows[0][0]), 1.0);

    std::fs::write(&path, "alpha = 0.9\nunknown_key = 1\n").unwrap();
    let o = run(&["smatrix", "--config", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown_key"));
}

#[test]
fn output_is_deterministic_and_thread_independent() {
    let args = [
        "amplitude",
        "--alpha",
        "0.9,1",
        "--flux",
        "0.1,0.5",
        "--k",
        "0.5,2",
        "--format",
        "json",
    ];
    let serial = Command::new(env!("CARGO_BIN_EXE_cone-ab"))
        .args(args)
        .env("CONE_AB_THREADS", "1")
        .output()
        .unwrap();
    let parallel = Command::new(env!("CARGO_BIN_EXE_cone-ab"))
        .args(args)
        .env("CONE_AB_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(serial.stdout, parallel.stdout);
    assert_eq!(stdout(&serial), stdout(&run(&args)));
}

#[test]
fn output_file_and_float_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let o = run(&[
        "smatrix",
        "--alpha",
        "1",
        "--flux",
        "0",
        "--m",
        "0",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let data = text.lines().nth(1).unwrap();
    assert!(data.starts_with("1.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0,0,"));
}
