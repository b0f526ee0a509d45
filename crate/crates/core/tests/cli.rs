use std::process::{Command, Output};

fn thinfrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thinfrac"))
        .args(args)
        .env_remove("THINFRAC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn constants_default_table() {
    let o = thinfrac(&["constants"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,s,d,p,closed,quad,rel_gap"));
    let row: Vec<&str> = text.lines().find(|l| l.starts_with("C,0.5,2,2,")).unwrap().split(',').collect();
    assert!((row[4].parse::<f64>().unwrap() - 2.0).abs() < 1e-12);
    assert!((row[5].parse::<f64>().unwrap() - 2.0).abs() < 1e-12);
    assert!(row[6].parse::<f64>().unwrap() < 1e-8);
}

#[test]
fn constants_usage_errors_and_closed_only_rows() {
    assert_eq!(thinfrac(&["constants", "--d", "5"]).status.code(), Some(1));
    assert_eq!(thinfrac(&["constants", "--s", "abc"]).status.code(), Some(1));
    let o = thinfrac(&["constants", "--s", "1.0", "--d", "2,3"]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines().skip(1) {
        assert!(line.ends_with(",n/a,n/a"), "{line}");
    }
    let json: serde_json::Value =
        serde_json::from_slice(&thinfrac(&["constants", "--s", "0.75", "--format", "json"]).stdout).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 4);
}

#[test]
fn energy_output_is_independent_of_threads() {
    let base = ["energy", "--fn", "planar-sine:k=1", "--s", "0.5", "--eps", "0.1", "--engine", "mc", "--samples", "200000", "--seed", "7"];
    let one = thinfrac(&[&base[..], &["--threads", "1"]].concat());
    let four = thinfrac(&[&base[..], &["--threads", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let json: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(json["engine"], "mc");
    assert_eq!(json["config"]["seed"], 7);
    assert!(json["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn seed_defaults_to_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_thinfrac"))
        .args(["energy", "--fn", "vertical-linear", "--s", "0.3", "--eps", "0.05", "--engine", "mc", "--samples", "20000"])
        .env("THINFRAC_SEED", "4242")
        .output()
        .unwrap();
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["config"]["seed"], 4242);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"fn": "vertical-linear", "s": 0.3, "eps": 0.01, "engine": "grid", "panels": 8}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let a: serde_json::Value = serde_json::from_slice(&thinfrac(&["energy", "--config", cfg]).stdout).unwrap();
    let b: serde_json::Value =
        serde_json::from_slice(&thinfrac(&["energy", "--config", cfg, "--s", "0.6"]).stdout).unwrap();
    assert_eq!(a["config"]["s"], 0.3);
    assert_eq!(b["config"]["s"], 0.6);
    assert_ne!(a["value"], b["value"]);
    std::fs::write(dir.path().join("bad.json"), r#"{"colour": 1}"#).unwrap();
    let bad = thinfrac(&["energy", "--config", dir.path().join("bad.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn sweep_writes_report_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let csv = dir.path().join("table.csv");
    let svg = dir.path().join("plot.svg");
    let o = thinfrac(&[
        "sweep", "--fn", "planar-linear:a=1", "--s", "0.75", "--eps-from", "0.125", "--eps-to", "0.0078125",
        "--panels", "8", "--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap(), "--plot", svg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["eps_ladder"].as_array().unwrap().len(), 5);
    assert_eq!(report["regime"]["label"], "super-critical");
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().next(), Some("eps,raw,scaled,predicted"));
    assert_eq!(table.lines().count(), 6);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
}

#[test]
fn sweep_usage_errors() {
    assert_eq!(thinfrac(&["sweep", "--s", "0.5"]).status.code(), Some(1));
    assert_eq!(thinfrac(&["sweep", "--fn", "vertical-linear"]).status.code(), Some(1));
    assert_eq!(
        thinfrac(&["sweep", "--fn", "vertical-linear", "--s", "0.5", "--s-schedule", "bbm-log"]).status.code(),
        Some(1)
    );
    assert_eq!(
        thinfrac(&["sweep", "--fn", "vertical-linear", "--s-schedule", "bbm-fast"]).status.code(),
        Some(1)
    );
}

#[test]
fn verify_exit_codes() {
    assert_eq!(thinfrac(&["verify", "nonsense"]).status.code(), Some(1));
    let o = thinfrac(&["verify", "constants", "quick"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["results"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_exit_code_follows_the_report() {
    let o = thinfrac(&["verify", "scaling", "quick", "--format", "csv"]);
    let stderr = String::from_utf8_lossy(&o.stderr);
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let failing: Vec<String> = reader
        .records()
        .map(|r| r.unwrap())
        .filter(|r| &r[2] == "false")
        .map(|r| format!("{} ({})", &r[0], &r[1]))
        .collect();
    if failing.is_empty() {
        assert_eq!(o.status.code(), Some(0), "{stderr}");
    } else {
        assert_eq!(o.status.code(), Some(2), "{stderr}");
        for name in &failing {
            assert!(stderr.contains(name.as_str()), "{name} missing from {stderr}");
        }
    }
}
