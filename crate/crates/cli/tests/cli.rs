use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn twistlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistlab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen_curve(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let path = dir.path().join(name);
    let p = path.to_str().unwrap().to_string();
    let mut full = vec!["gen", "curve"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &p]);
    let o = twistlab(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn fix_c1(dir: &TempDir) -> String {
    gen_curve(dir, "c1.json", &["--genera", "2,1", "--edges", "0-1:1", "--deg", "L=3,2"])
}

#[test]
fn generated_curve_has_expected_degrees() {
    let dir = TempDir::new().unwrap();
    let p = fix_c1(&dir);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["components"], serde_json::json!(["Y1", "Y2"]));
    let o = twistlab(&["validate", &p]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn enumerate_finds_single_twist() {
    let dir = TempDir::new().unwrap();
    let p = fix_c1(&dir);
    let o = twistlab(&["--format", "machine", "enumerate", &p]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["twists"], serde_json::json!([[0, 1]]));
    assert_eq!(v["classification"], "stable");
}

#[test]
fn check_names_the_destabilizing_component() {
    let dir = TempDir::new().unwrap();
    let p = fix_c1(&dir);
    let o = twistlab(&["check", &p]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("{Y1}: e = 1/2"), "{out}");

    let o = twistlab(&["check", &p, "--twist", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("semistable"));
}

#[test]
fn cycle_is_refused_as_precondition() {
    let dir = TempDir::new().unwrap();
    let p = gen_curve(&dir, "tri.json", &["--genera", "1,1,1", "--edges", "0-1,1-2,0-2"]);
    let o = twistlab(&["enumerate", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dual graph is not a tree"));
}

#[test]
fn genus_one_interval_is_degenerate() {
    let dir = TempDir::new().unwrap();
    let p = gen_curve(&dir, "g1.json", &["--genera", "1,0", "--edges", "0-1:1"]);
    let o = twistlab(&["interval", &p, "--union", "Y1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Degenerate"));
    let o = twistlab(&["--format", "machine", "interval", &p, "--union", "Y1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "degenerate");
    assert_eq!(v["kx"]["classification"], "Inconclusive");
}

#[test]
fn generation_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let read = |p: &str| std::fs::read(Path::new(p)).unwrap();
    let a = gen_curve(&dir, "a.json", &["--seed", "41"]);
    let b = gen_curve(&dir, "b.json", &["--seed", "41"]);
    assert_eq!(read(&a), read(&b));
    let s1 = twistlab(&["gen", "synth", "--seed", "5", "--components", "4"]);
    let s2 = twistlab(&["gen", "synth", "--seed", "5", "--components", "4"]);
    assert_eq!(s1.status.code(), Some(0));
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn bad_input_exits_three() {
    assert_eq!(twistlab(&["check", "--no-such-flag", "x.json"]).status.code(), Some(3));
    assert_eq!(twistlab(&["check", "/nonexistent/config.json"]).status.code(), Some(3));
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("junk.json");
    std::fs::write(&p, "{\"dimension\": 1}").unwrap();
    let o = twistlab(&["--format", "machine", "enumerate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "malformed");
}

#[test]
fn oracles_agree_on_fixture() {
    let dir = TempDir::new().unwrap();
    let p = fix_c1(&dir);
    let o = twistlab(&["oracle", "brute", &p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("enumeration agrees"));
    assert_eq!(twistlab(&["oracle", "identities", &p, "--samples", "20"]).status.code(), Some(0));
    assert_eq!(twistlab(&["oracle", "degrees", &p, "--union", "Y1"]).status.code(), Some(0));
    let o = twistlab(&["oracle", "balanced", &p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("sign test agrees"));
    let o = twistlab(&["oracle", "balanced", &p, "--bundle", "L + Y2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn approx_marks_decimals() {
    let dir = TempDir::new().unwrap();
    let p = fix_c1(&dir);
    let o = twistlab(&["--approx", "e", &p, "--union", "Y1"]);
    assert!(stdout(&o).contains("1/2 (~0.500000)"));
}
