use std::process::Command;

fn lab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_bergman-lab")).args(args).output().unwrap()
}

#[test]
fn lln_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lln.csv");
    let o = lab(&["lln", "--n-list", "1,2", "--trials", "10", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"s": 1.3, "n_list": [1], "trials": 5}"#).unwrap();
    let o = lab(&["lln", "--config", cfg.to_str().unwrap(), "--trials", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["metadata"]["trials"], 3);
    assert_eq!(v["metadata"]["s"].as_f64(), Some(1.3));
}

#[test]
fn moments_and_sample_run() {
    let o = lab(&["moments", "--n-list", "3,10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 3);
    let o = lab(&["sample", "--n-list", "2", "--z", "0.1,-0.2", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["points"].is_array());
}

#[test]
fn exit_codes() {
    assert_eq!(lab(&["lln", "--s", "1.6"]).status.code(), Some(1));
    assert_eq!(lab(&["lln", "--config", "/nonexistent/c.json"]).status.code(), Some(3));
    assert_eq!(lab(&["moments", "--n-list", "13"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("nope").join("x.json");
    assert_eq!(lab(&["moments", "--n-list", "2", "--out", bad.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn check_subcommand_passes() {
    let o = lab(&["check", "--trials", "200", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("check,passed,detail\n"));
}
