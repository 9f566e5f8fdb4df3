use std::path::Path;
use std::process::{Command, Output};

fn circreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circreg"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn body_lines(s: &str) -> Vec<&str> {
    s.lines().filter(|l| !l.starts_with('#')).collect()
}

fn write_direction_sample(path: &Path) {
    let mut s = String::from("distance,direction_radians\n");
    for i in 0..31 {
        let d = 10.0 + 7.0 * i as f64;
        let dir = 1.0 + 0.01 * d + 0.2 * ((i * 37 % 11) as f64 / 11.0 - 0.5);
        s.push_str(&format!("{d},{dir}\n"));
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn reliability_tables() {
    let o = circreg(&["reliability", "--model", "lc", "--sigma-eps", "0.1"]);
    assert!(o.status.success());
    assert_eq!(body_lines(&stdout(&o))[1].split(',').nth(1), Some("0.80"));
    let o = circreg(&["reliability", "--model", "cc", "--lambda-eps", "2.54"]);
    assert_eq!(body_lines(&stdout(&o))[1].split(',').nth(1), Some("0.88"));
}

#[test]
fn missing_c0_is_usage_error() {
    let o = circreg(&["simulate", "--model", "lc", "--sigma-eps", "0.075", "--n", "50", "--reps", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(circreg(&["simulate", "--bogus"]).status.code(), Some(2));
    let o = circreg(&["simulate", "--model", "lc", "--sigma-eps", "0.1", "--c0", "0.4", "--ss", "gamma=1,rho=2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = circreg(&["simulate", "--model", "cc", "--noise", "laplace:0.1", "--c0", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = circreg(&["reliability", "--model", "lc", "--sigma-eps", "0.1", "--format", "xml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let common = ["simulate", "--model", "cc", "--lambda-eps", "2.54", "--n", "80", "--reps", "6", "--c0", "0.08", "--seed", "3", "--format", "json"];
    let mut args: Vec<&str> = common.to_vec();
    args.extend(["--threads", "1", "--out", a.to_str().unwrap()]);
    assert!(circreg(&args).status.success());
    let mut args: Vec<&str> = common.to_vec();
    args.extend(["--threads", "4", "--out", b.to_str().unwrap()]);
    assert!(circreg(&args).status.success());
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["tool"], "circreg");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["seed"], 3);
    assert_eq!(v["config"]["noise"], "wrapped_laplace:2.54");
    assert!(v["result"]["mean_error"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["result"]["replications"].as_array().unwrap().len(), 6);
}

#[test]
fn simulate_lc_csv_has_mean_error() {
    let o = circreg(&["simulate", "--model", "lc", "--sigma-eps", "0.075", "--n", "60", "--x", "0.2", "--reps", "3", "--c0", "0.4", "--seed", "1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("# circreg "));
    assert!(s.contains("# mean_error: "));
    assert!(s.contains("\"c0\":[0.4,0.4]"));
    assert_eq!(body_lines(&s).len(), 4);
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "reps = 2\nseed = 11\nc0 = \"0.3\"\n").unwrap();
    let o = circreg(&["simulate", "--model", "lc", "--sigma-eps", "0.1", "--n", "40", "--reps", "9", "--c0", "0.4", "--format", "json", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["reps"], 2);
    assert_eq!(v["config"]["seed"], 11);
    assert_eq!(v["config"]["c0"][0], 0.3);
    std::fs::write(&cfg, "unknown_key = 1\n").unwrap();
    let o = circreg(&["reliability", "--model", "lc", "--sigma-eps", "0.1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn calibrate_default_and_custom_grid() {
    let o = circreg(&["calibrate", "--model", "lc", "--sigma-eps", "0.1", "--n", "40", "--reps", "2", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["grid"].as_array().unwrap().len(), 17);
    assert!(v["result"].get("plateau").is_some());
    let o = circreg(&["calibrate", "--model", "cc", "--lambda-eps", "2.54", "--n", "40", "--reps", "2", "--grid", "0.08"]);
    assert!(o.status.success());
    assert_eq!(body_lines(&stdout(&o)).len(), 2);
    let o = circreg(&["calibrate", "--model", "cc", "--lambda-eps", "2.54", "--n", "40", "--reps", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["grid"].as_array().unwrap().len(), 18);
}

#[test]
fn estimate_curve_with_baselines() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("p.csv");
    write_direction_sample(&data);
    let o = circreg(&["estimate", data.to_str().unwrap(), "--noise", "laplace:0.1", "--baselines"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    let body = body_lines(&s);
    assert_eq!(body[0], "x,m_hat,selected_sine,selected_cosine,fisher_lee,spml,trig");
    assert_eq!(body.len(), 102);
    let o = circreg(&["estimate", data.to_str().unwrap(), "--noise", "gaussian:0.1", "--ss", "gamma=0.005,rho=2", "--x", "50,100"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(body_lines(&stdout(&o)).len(), 3);
}

#[test]
fn estimate_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "distance,direction_radians\n").unwrap();
    let o = circreg(&["estimate", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "distance,direction_radians\n1,0.5\n2,oops\n").unwrap();
    let o = circreg(&["estimate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = circreg(&["estimate", dir.path().join("missing.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}
