//! End-to-end runs of the `thv` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use thv_core::algebra::AlgebraElement;
use thv_core::modules::{ModuleDescriptor, ModuleVector};

fn thv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn bracket_prints_text() {
    let o = thv(&["bracket", "--t", "1", "--x", "L[2]", "--y", "L[-2]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "4*L[0] + 1/2*c1\n");
}

#[test]
fn aut_reports_z2() {
    let o = thv(&["aut", "--l2", "0", "--l3", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["case"], "Z2");
    assert_eq!(v["constraints"][1]["constraint"], "l3*a^2 - l3 = 0");
}

#[test]
fn commutator_sweep_example() {
    let o = thv(&[
        "check-commutator",
        "--t",
        "3",
        "--max-mode",
        "3",
        "--max-level",
        "3",
        "--l3",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert_eq!(v["passed"], true);
}

#[test]
fn usage_errors_exit_2_and_name_the_field() {
    let o = thv(&["bracket", "--x", "L[1/2]", "--y", "L[1]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`x`"), "{}", stderr(&o));
    let o = thv(&["act", "--t", "2", "--x", "L[1]", "--v", "|L[-1] I[-1/2]>"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`v`"), "{}", stderr(&o));
    let o = thv(&["check-conformal", "--l1", "1", "--l2", "0", "--l3", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`l3`"), "{}", stderr(&o));
    let o = thv(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = thv(&["character", "--t", "2", "--max-level", "1"]);
    assert_eq!(o.status.code(), Some(2), "symbolic parameters are rejected");
}

#[test]
fn delta_check_status() {
    // outside the hypothesis m > n the identity is reported but not a failure
    let o = thv(&["check-delta", "--m", "1", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    // a too-small window is a usage error
    let o = thv(&[
        "check-delta",
        "--m",
        "4",
        "--n",
        "0",
        "--window-min",
        "0",
        "--window-max",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["gram", "--t", "2", "--level", "3/2"][..],
        &[
            "character",
            "--t",
            "2",
            "--k1",
            "1",
            "--k3",
            "1",
            "--h",
            "0",
            "--max-level",
            "2",
        ][..],
        &["basis", "--t", "3", "--level", "5/3", "--format", "json"][..],
        &["check-jacobi", "--t", "2", "--bound", "3"][..],
    ] {
        let a = thv(args);
        let b = thv(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn printed_values_round_trip() {
    let o = thv(&["bracket", "--x", "L[1] + I[1]", "--y", "I[-1]"]);
    let text = stdout(&o);
    let parsed: AlgebraElement = text.trim().parse().unwrap();
    assert_eq!(parsed.to_string(), text.trim());

    let desc = ModuleDescriptor::twisted_symbolic(2).unwrap();
    let o = thv(&[
        "act",
        "--t",
        "2",
        "--x",
        "L[-1] + I[-1/2]",
        "--v",
        "h*|I[-1/2]> + |L[-1]>",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let parsed = ModuleVector::parse(text.trim(), &desc).unwrap();
    assert_eq!(parsed.to_text(&desc), text.trim());

    let o = thv(&[
        "act",
        "--t",
        "2",
        "--x",
        "L[1]",
        "--v",
        "|I[-1/2] I[-1/2]>",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let from_json = ModuleVector::from_json(&v["result"]).unwrap();
    let from_text = ModuleVector::parse(v["text"].as_str().unwrap(), &desc).unwrap();
    assert_eq!(from_json, from_text);
}

#[test]
fn config_file_with_flag_override() {
    let path = scratch("aut.toml");
    std::fs::write(
        &path,
        "command = \"aut\"\nl2 = 1\nl3 = 5\nformat = \"text\"\n",
    )
    .unwrap();
    let o = thv(&["--config", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "Trivial\n");
    let o = thv(&["--config", path.to_str().unwrap(), "--l2", "0"]);
    assert_eq!(stdout(&o), "Z2\n");

    let bad = scratch("bad.toml");
    std::fs::write(&bad, "command = \"aut\"\nell2 = 0\n").unwrap();
    let o = thv(&["--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`ell2`"));
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("character.csv");
    let _ = std::fs::remove_file(&path);
    let o = thv(&[
        "character",
        "--t",
        "3",
        "--k1",
        "1",
        "--k3",
        "0",
        "--h",
        "1",
        "--max-level",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(
        csv.starts_with("level,verma_dim,irr_dim,nullity\n0,1,1,0\n1/3,0,0,0\n2/3,1,0,1\n"),
        "{csv}"
    );
}

#[test]
fn conformal_check_passes() {
    let o = thv(&[
        "check-conformal",
        "--l1",
        "26",
        "--l2",
        "1",
        "--l3",
        "1",
        "--max-level",
        "2",
        "--max-mode",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["central_charge"], "37");
}
