use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn strata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strata"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ideal_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("duration_ms");
            m.values_mut().for_each(strip_timings);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

#[test]
fn uni_shape_two_reports_agreement() {
    let o = strata(&["uni", "--shape", "2", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS uni/(2)/gcd-oracle: 200/200 agree"));
}

#[test]
fn poisson_json_on_stdout() {
    let o = strata(&["poisson-check", "--r", "2", "--k", "2", "--json", "-"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    assert_eq!(checks[1]["name"], "poisson/r2k2/explicit");
    assert_eq!(checks[1]["status"], "pass");
    assert!(stderr(&o).contains("2 passed, 0 failed"));
}

#[test]
fn gm_limit_from_file() {
    let f = ideal_file("y - x^2\nx^3\n");
    let o = strata(&["gm-limit", "--ideal", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("limit (x^2, x*y, y^2)"));
}

#[test]
fn ideal_syntax_error_exits_two() {
    let f = ideal_file("x ++ y");
    let o = strata(&["gm-limit", "--ideal", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));
}

#[test]
fn empty_ideal_file_exits_two() {
    let f = ideal_file("\n");
    let o = strata(&["gm-limit", "--ideal", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&strata(&["uni", "--field", "fp:11"])), 2);
    assert_eq!(code(&strata(&["uni", "--bogus"])), 2);
    assert_eq!(code(&strata(&["suite", "--name", "nope"])), 2);
    assert_eq!(code(&strata(&["charts", "--recursion", "other"])), 2);
    assert_eq!(code(&strata(&["hilb", "--s", "1"])), 2);
    assert_eq!(code(&strata(&["charts", "--shape", "2,2", "--steps", "1,1", "--stratum", "3"])), 2);
}

#[test]
fn chart_tower_from_flags() {
    let o = strata(&["charts", "--shape", "2,2", "--steps", "1,1", "--stratum", "2", "--recursion", "euclid"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS charts/euclid/(2,2)/smoothness"));
}

#[test]
fn hilb_with_params_file() {
    let p = ideal_file(r#"{"b": [["1"], ["0"]], "a": [["2"], ["-1"]]}"#);
    let o = strata(&["hilb", "--s", "1,1", "--t", "1,1", "--params", p.path().to_str().unwrap(), "--json", "-"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let red = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "hilb/x-axis-reduction").unwrap();
    assert_eq!(red["status"], "pass");
    assert!(red["witness"]["ideal"].is_string());
}

#[test]
fn prime_field_mode() {
    let o = strata(&["hilb", "--s", "2", "--t", "1", "--field", "fp:65521"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn suite_all_is_deterministic_and_exit_matches_failures() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.to_str().unwrap();
    let mut runs = Vec::new();
    for _ in 0..2 {
        let o = strata(&["suite", "--all", "--seed", "7", "--json", p]);
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let failed = v["summary"]["fail"].as_u64().unwrap();
        assert_eq!(code(&o), if failed > 0 { 1 } else { 0 });
        strip_timings(&mut v);
        runs.push(v);
    }
    assert_eq!(runs[0], runs[1]);
}
