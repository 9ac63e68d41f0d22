use std::path::PathBuf;
use std::process::{Command, Output};

fn dehnlog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dehnlog"))
        .args(args)
        .env_remove("DEHNLOG_DATA_DIR")
        .output()
        .expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn built_expansion_file_passes_check() {
    let path = scratch("g1_n6.json");
    let p = path.to_str().unwrap();
    let o = dehnlog(&["build-expansion", "--genus", "1", "--degree", "6", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[PASS] is_symplectic"));
    let o = dehnlog(&["check-expansion", "--in", p, "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"status\": \"pass\""));
}

#[test]
fn degree_one_is_a_usage_error() {
    let o = dehnlog(&["build-expansion", "--genus", "1", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_symplectic_expansion_fails_check() {
    let o = dehnlog(&["check-expansion", "--expansion", "builtin:exp", "--degree", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL]"));
}

#[test]
fn eval_on_fixture() {
    let o = dehnlog(&["eval", "--expansion", "fixture:g1", "--word", "a1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("theta(a1) = 1 + A1 + 1/2 A1A1 + 1/2 A1B1 - 1/2 B1A1"));
    let o = dehnlog(&["eval", "--expansion", "fixture:g1", "--word", "a1", "--log"]);
    assert!(stdout(&o).starts_with("log theta(a1) = A1 + 1/2 [A1,B1]"));
}

#[test]
fn parse_errors_and_fixture_limits_exit_two() {
    let o = dehnlog(&["eval", "--word", "a1 x2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at 3"));
    let o = dehnlog(&["eval", "--expansion", "fixture:g1", "--degree", "6", "--word", "a1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = dehnlog(&["johnson", "--curve", "sep:3", "--genus", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn separating_tau2_is_minus_l4() {
    let o = dehnlog(&["johnson", "--expansion", "fixture:g2", "--curve", "sep:1", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("tau_2(A1) = A1A1B1 - 2 A1B1A1 + B1A1A1"), "{out}");
    assert!(out.contains("tau_2(A2) = 0"));
}

#[test]
fn curve_from_file() {
    let path = scratch("conj.json");
    std::fs::write(&path, r#"{"genus":2,"factorization":["beta:1","alpha:2"]}"#).unwrap();
    let arg = format!("conj:{}", path.display());
    let o = dehnlog(&["verify", "--curve", &arg, "--expansion", "fixture:g2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("[PASS] dehn_twist_formula"));
}

#[test]
fn sigma_and_l_invariant_json() {
    let o = dehnlog(&["sigma", "--expansion", "fixture:g1", "--loop", "(log a1)^2", "--word", "b1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("= 2 A1 + A1B1 + B1A1"));
    let o = dehnlog(&["l-invariant", "--expansion", "fixture:g1", "--word", "a1", "--output", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["view"], "tensor");
    assert_eq!(v["terms"][0]["mono"], serde_json::json!([0, 0]));
    assert_eq!(v["terms"][0]["coeff"], "1/1");
}

#[test]
fn verify_suite_subset() {
    let o = dehnlog(&["verify", "--suite", "1,2,5,8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("[PASS]")).count(), 4);
    let o = dehnlog(&["verify", "--suite", "99"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn data_dir_overrides_embedded_fixtures() {
    let dir = scratch("data");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(
        dir.join("genus1.expansion"),
        "genus 1\ntruncation 2\nkind fixture-genus1\na1 = A1\nb1 = B1 + [A1,B1]\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_dehnlog"))
        .args(["eval", "--expansion", "fixture:g1", "--degree", "2", "--word", "b1", "--log"])
        .env("DEHNLOG_DATA_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "log theta(b1) = B1 + [A1,B1]");
}
