//! Golden-file cases shared by the golden test and the acceptance harness.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

/// Name and arguments; `{fixtures}` expands to the fixture directory.
pub const GOLDEN_CASES: [(&str, &[&str]); 6] = [
    ("bspline_hat", &["bspline", "--knots", "0,1,2", "--grid", "5", "--form", "truncated"]),
    ("chs_cross_check", &["chs", "--z", "0.5", "--points", "1,2,3", "--cross-check", "--format", "json"]),
    ("verify_hunter", &["verify", "hunter", "--p", "1", "--n", "3", "--samples", "5000", "--seed", "7"]),
    ("combo_motzkin", &["combo", "--file", "{fixtures}/motzkin.json", "--interval", "all"]),
    ("combo_h1", &["combo", "--file", "{fixtures}/h1.json", "--interval", "all", "--format", "json"]),
    ("semigroup_gcd", &["semigroup", "--gens", "4,6"]),
];

pub fn dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

/// Exit code, stdout and stderr in one comparable blob.
pub fn run(args: &[&str]) -> String {
    let fixtures = dir("fixtures").to_string_lossy().into_owned();
    let args: Vec<String> = args.iter().map(|a| a.replace("{fixtures}", &fixtures)).collect();
    let out = Command::new(env!("CARGO_BIN_EXE_hsym"))
        .args(&args)
        .env_remove("HSYM_SEED")
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs");
    format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap().replace(&fixtures, "<fixtures>"),
    )
}

pub fn golden_path(name: &str) -> PathBuf {
    dir("golden").join(format!("{name}.txt"))
}

/// Runs a case twice; `Err` describes the first mismatch.
pub fn check_case(name: &str, args: &[&str]) -> Result<(), String> {
    let first = run(args);
    if run(args) != first {
        return Err(format!("{name}: two runs differ"));
    }
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &first).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|_| format!("missing {}; run with UPDATE_GOLDEN=1", path.display()))?;
    if first != expected {
        return Err(format!("{name}: output differs from {}", path.display()));
    }
    Ok(())
}
