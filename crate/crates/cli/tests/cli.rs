use std::path::PathBuf;
use std::process::{Command, Output};

const CONFIG: &str = r#"{
  "spectral": {"kind": "ohmic", "eta": 0.1, "omega_c": 1.0},
  "temperature": 0.1,
  "drive": {"eps1": 0.2, "eps2": 0.1, "j": {"breakpoints": [0], "values": [0.1]}},
  "initial_state": {"kind": "product", "first": [0.7071067811865476, 0.7071067811865476], "second": [0.6, 0.8]},
  "pair": {"kind": "product", "first": [0.7071067811865476, -0.7071067811865476], "second": [0.6, 0.8]},
  "grid": {"t_end": 10, "n_points": 11},
  "outputs": ["rhp"]
}"#;

fn knob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knob")).args(args).output().unwrap()
}

fn write_config(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("knob-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn rates_writes_csv_to_stdout() {
    let cfg = write_config("rates.json", CONFIG);
    let out = knob(&["rates", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("# "));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("t,gamma,Gamma,gamma_tilde,j_tilde,gamma_aux"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 12);
}

#[test]
fn grid_override_and_json_output_to_file() {
    let cfg = write_config("blp.json", CONFIG);
    let dest = cfg.with_file_name("blp-out.json");
    let out = knob(&[
        "blp",
        "--config",
        cfg.to_str().unwrap(),
        "--grid",
        "5:6",
        "--format",
        "json",
        "--out",
        dest.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(json["times"].as_array().unwrap().len(), 6);
    assert_eq!(json["config"]["grid"]["n_points"], 6);
}

#[test]
fn config_errors_exit_with_two() {
    let empty = write_config("empty.json", &CONFIG.replace(r#"["rhp"]"#, "[]"));
    assert_eq!(knob(&["run", "--config", empty.to_str().unwrap()]).status.code(), Some(2));

    let typo = write_config("typo.json", &CONFIG.replace("\"temperature\"", "\"temp\""));
    assert_eq!(knob(&["run", "--config", typo.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(knob(&["run", "--config", "/nonexistent/knob.json"]).status.code(), Some(2));
    assert_eq!(knob(&["run"]).status.code(), Some(2));
    assert_eq!(knob(&["preset", "fig9"]).status.code(), Some(2));
    assert_eq!(knob(&["rates", "--grid", "10"]).status.code(), Some(2));

    let cfg = write_config("sweep.json", CONFIG);
    let out = knob(&["sweep", "--config", cfg.to_str().unwrap(), "--axis", "colour", "--values", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn numerical_failure_exits_with_three() {
    let starved = CONFIG.replace(
        r#""outputs": ["rhp"]"#,
        r#""outputs": ["rhp"], "quadrature": {"rel_tol": 1e-15, "abs_tol": 1e-300, "omega_max_factor": 40, "max_intervals": 1}"#,
    );
    let cfg = write_config("starved.json", &starved);
    let out = knob(&["rhp", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn preset_dump_lists_panel_configs() {
    let out = knob(&["preset", "fig1c", "--dump"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 2);
}

#[test]
fn casestudy_defaults_to_the_preset() {
    let out = knob(&["casestudy", "--grid", "100:11"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("S_x coupling"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 12);

    let cfg = write_config("nocase.json", CONFIG);
    assert_eq!(knob(&["casestudy", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn sweep_prints_one_row_per_value() {
    let cfg = write_config("sweep-ok.json", CONFIG);
    let out = knob(&["sweep", "--config", cfg.to_str().unwrap(), "--axis", "T", "--values", "0,0.1,1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("T,min_gamma,min_gamma_tilde,blp_composite,blp_reduced"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
}
