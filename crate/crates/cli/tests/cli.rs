use std::path::PathBuf;
use std::process::{Command, Output};

fn hsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsym")).args(args).env_remove("HSYM_SEED").output().unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn bspline_examples() {
    let o = hsym(&["bspline", "--knots", "0,1", "--grid", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r[1][1].parse::<f64>().unwrap(), 1.0);

    let o = hsym(&["bspline", "--knots", "2,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("knots must be nondecreasing"));

    let o = hsym(&["bspline", "--knots", "0,0,1", "--grid", "3"]);
    assert_eq!(rows(&o)[1][1].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn chs_examples() {
    let o = hsym(&["chs", "--z", "-3", "--points", "1,2,3"]);
    let v: f64 = rows(&o)[0][2].parse().unwrap();
    assert!((v - 1.0 / 6.0).abs() < 1e-15);

    let o = hsym(&["chs", "--z", "-1.5", "--points", "1,1,1"]);
    let r = &rows(&o)[0];
    assert_eq!(r[4], "all_equal_formula");
    assert_eq!(r[2].parse::<f64>().unwrap(), -0.125);

    let o = hsym(&["chs", "--z", "0.5", "--points", "1,2,3", "--cross-check"]);
    assert!(rows(&o)[0][8].parse::<f64>().unwrap() < 1e-8);

    let o = hsym(&["chs", "--z", "3", "--points", "1,-2,0.5", "--path", "monomial"]);
    let a = rows(&o)[0][2].parse::<f64>().unwrap();
    let o = hsym(&["chs", "--z", "3", "--points", "1,-2,0.5"]);
    let b = rows(&o)[0][2].parse::<f64>().unwrap();
    assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));

    assert_eq!(hsym(&["chs", "--z", "-1.5", "--points", "0,1"]).status.code(), Some(2));
    assert_eq!(hsym(&["chs", "--z", "0.5", "--points", "1,2", "--path", "monomial"]).status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let o = hsym(&["verify", "theorem2", "--mu", "2", "--n", "4", "--samples", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let o = hsym(&["verify", "ex2", "--p", "2", "--q", "3", "--n", "4", "--samples", "20"]);
    assert!(stdout(&o).contains("(8,4,2,0)"));
    let o = hsym(&["verify", "hunter", "--p", "1", "--n", "3", "--samples", "2000", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["passed"], true);
    assert!(v["cases"][0]["detail"].as_str().unwrap().contains("bound 0.5"));
    assert_eq!(hsym(&["verify", "theorem9"]).status.code(), Some(2));
}

#[test]
fn combo_examples() {
    let o = hsym(&["combo", "--file", &fixture("one.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Positive"));
    let o = hsym(&["combo", "--file", &fixture("motzkin_first.json"), "--interval", "all"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("status,") && stdout(&o).contains("Falsified"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"kind": "linear", "n": 2, "c": [1], "extra": 1}"#).unwrap();
    assert_eq!(hsym(&["combo", "--file", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(hsym(&["combo", "--file", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn semigroup_examples() {
    let o = hsym(&["semigroup", "--gens", "2,3", "--m", "12", "--histogram"]);
    let text = stdout(&o);
    let hist: Vec<&str> = text.split("\n\n").nth(1).unwrap().lines().skip(1).collect();
    assert_eq!(hist, ["12,4,1", "12,5,1", "12,6,1"]);

    let o = hsym(&["semigroup", "--gens", "1,2", "--m-range", "100:10000:10x"]);
    let d: Vec<f64> = rows(&o).iter().map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(d.len(), 3);
    assert!(d[0] > d[1] && d[1] > d[2]);

    let o = hsym(&["semigroup", "--gens", "3,5", "--m", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&o)[0], ["7", "0", "0", ""]);
}

#[test]
fn output_file_config_and_seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.json");
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"format": "json", "seed": 11, "samples": 300}"#).unwrap();

    let o = hsym(&["--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap(), "verify", "prop2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["seed"], 11);

    let o = hsym(&["--config", cfg.to_str().unwrap(), "--seed", "12", "--format", "csv", "combo", "--file", &fixture("one.json")]);
    assert!(stdout(&o).starts_with("status,"));

    let o = hsym(&["--config", cfg.to_str().unwrap(), "--seed", "12", "combo", "--file", &fixture("one.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 12);

    let env = Command::new(env!("CARGO_BIN_EXE_hsym"))
        .args(["--format", "json", "combo", "--file", &fixture("one.json")])
        .env("HSYM_SEED", "99")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(v["seed"], 99);

    let o = hsym(&["--format", "json", "combo", "--file", &fixture("one.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 0x4853594D);

    std::fs::write(&cfg, r#"{"sead": 1}"#).unwrap();
    assert_eq!(hsym(&["--config", cfg.to_str().unwrap(), "verify", "prop2"]).status.code(), Some(2));
}
