use std::process::{Command, Output};

fn qtms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtms")).args(args).output().expect("run qtms")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table3_csv() {
    let o = qtms(&["table3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("system,q_adv,"));
    assert!(lines[4].starts_with("Proposed,4.58257569,"));
}

#[test]
fn eval_json() {
    let o = qtms(&["eval", "--scenario", "table3:luong", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = v["derived"]["r_max_closed"]["value"].as_f64().unwrap();
    assert!((r - 50.2).abs() < 0.25);
    assert_eq!(v["derived"]["r_max_closed"]["op"], "max_range_nr_closed_form");
    assert_eq!(v["inputs"]["model"], "qtms");
}

#[test]
fn eval_csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let o = qtms(&["eval", "--scenario", "table1", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("quantity,value\n"));
    assert!(text.contains("\nr_max_exact,"));
}

#[test]
fn validation_error_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/proposed.toml")).unwrap();
    std::fs::write(&path, text.replace("bandwidth = 9e9", "bandwidth = -9e9")).unwrap();
    let o = qtms(&["eval", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("source.bandwidth"));

    let o = qtms(&["eval", "--scenario", "table3:nowhere"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn undetectable_warns_but_succeeds() {
    let o = qtms(&[
        "sweep",
        "--scenario",
        "table3:proposed",
        "--axis",
        "detection.integration_time=1e-5",
        "--output",
        "r_max_exact,rho_th",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("1e-5,,"), "{row}");
}

#[test]
fn sweep_grid_and_errors() {
    let o = qtms(&[
        "sweep",
        "--scenario",
        "table3:proposed",
        "--axis",
        "detection.integration_time=0.001,0.5",
        "--axis",
        "detection.p_fa=1e-5,0.5",
        "--output",
        "r_max_exact",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ranges: Vec<f64> = v.as_array().unwrap().iter().map(|r| r["r_max_exact"].as_f64().unwrap()).collect();
    for (got, want) in ranges.iter().zip([55.0, 113.0, 1250.0, 2520.0]) {
        assert!((got / want - 1.0).abs() < 0.03, "{got} vs {want}");
    }

    let o = qtms(&["sweep", "--scenario", "table3:proposed", "--axis", "detection.p_fa=0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qtms(&["sweep", "--scenario", "table3:proposed", "--axis", "source.colour=1", "--output", "r_adv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_is_seeded() {
    let args = ["simulate", "--photons", "0.5", "--samples", "2000", "--seeds", "10", "--seed", "42"];
    let a = stdout(&qtms(&args));
    let b = stdout(&qtms(&args));
    assert_eq!(a, b);
    let c = stdout(&qtms(&["simulate", "--photons", "0.5", "--samples", "2000", "--seeds", "10", "--seed", "43"]));
    assert_ne!(a, c);

    let o = qtms(&["simulate", "--mode", "false-alarm", "--samples", "100", "--trials", "2000", "--p-fa", "0.5", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let obs = v[0]["observed_rate"].as_f64().unwrap();
    let exp = v[0]["expected_rate"].as_f64().unwrap();
    assert!((obs - exp).abs() < 0.05);
}

#[test]
fn entanglement_table() {
    let o = qtms(&["entanglement", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["state"], "source");
    assert!(rows[0]["simon_f"].as_f64().unwrap() < 0.0);
    assert!(rows[1..].iter().all(|r| r["simon_f"].as_f64().unwrap() > 0.0));

    let o = qtms(&["entanglement", "--scenario", "table3:luong"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn precision_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_qtms"))
        .args(["table3"])
        .env("QTMS_PRECISION", "3")
        .output()
        .unwrap();
    let text = stdout(&o);
    assert!(text.lines().nth(4).unwrap().starts_with("Proposed,4.58,4.58,2.14,2.14,1420,"), "{text}");
}
