use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsplines")).args(args).output().expect("spawn gsplines")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// TSV body as rows of fields, header dropped.
fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().skip(1).map(|l| l.split('\t').map(str::to_owned).collect()).collect()
}

#[test]
fn dim_reproduces_cube_table() {
    let cube = fixture("cube.json");
    let o = run(&["dim", cube.to_str().unwrap(), "--degree", "4..6", "--grading", "total"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().next(), Some("degree\tdim"));
    let got: Vec<(String, String)> = rows(&o).into_iter().map(|r| (r[0].clone(), r[1].clone())).collect();
    let want = [("4", "6"), ("5", "18"), ("6", "36")].map(|(a, b)| (a.to_string(), b.to_string()));
    assert_eq!(got, want);
}

#[test]
fn euler_and_homology() {
    let o = run(&["euler", "builtin:cube", "--degree", "1", "--grading", "bidegree"]);
    assert_eq!(rows(&o), vec![vec!["1".to_string(), "0".to_string()]]);
    let o = run(&["homology", "builtin:star3", "--degree", "4", "--grading", "total"]);
    assert_eq!(stdout(&o).lines().next(), Some("degree\tH0\tH1\tH2\tchi\tdim"));
    assert_eq!(rows(&o)[0], ["4", "0", "0", "15", "15", "15"]);
}

#[test]
fn json_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["dim", "builtin:two_patch_34", "--degree", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v.to_string().contains("11"), "{v}");
}

#[test]
fn basis_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("basis.json");
    let cube = fixture("cube.json");
    let o = run(&["basis", cube.to_str().unwrap(), "--degree", "2", "--grading", "bidegree", "--out", b.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(rows(&o), vec![vec!["2".to_string(), "6".to_string()]]);
    let o = run(&["verify", cube.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().last(), Some("pass"));
    // arguments in either order
    assert!(run(&["verify", b.to_str().unwrap(), cube.to_str().unwrap()]).status.success());
}

#[test]
fn verify_across_domains() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("basis.json");
    assert!(run(&["basis", "builtin:cube", "--degree", "4", "--grading", "total", "--out", b.to_str().unwrap()]).status.success());
    // the reflected variant has the same lifts
    assert!(run(&["verify", "builtin:cube_reflected", b.to_str().unwrap()]).status.success());
    // same star mesh, different 𝔞
    assert!(run(&["basis", "builtin:star4", "--degree", "4", "--grading", "total", "--out", b.to_str().unwrap()]).status.success());
    let o = run(&["verify", "builtin:star4_w3", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().last(), Some("FAIL"));
}

#[test]
fn fit_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("surface.json");
    let mesh = dir.path().join("surface.txt");
    let o = run(&["fit", "builtin:cube", "--degree", "2", "--grading", "bidegree", "--out", spec.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&o)[0][3], "true");
    let o = run(&["export", "builtin:cube", "--spec", spec.to_str().unwrap(), "--out", mesh.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&mesh).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 54);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 24);
}

#[test]
fn check_reports_incompatibility() {
    let o = run(&["check", "builtin:cube"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("compatible\t8 "));
    let o = run(&["check", "builtin:cube", "--r", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violation\tC3"));
}

#[test]
fn missing_transition_names_the_edge() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("two_patch_explicit.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["facets"]["0"].as_object_mut().unwrap().remove("transition");
    let p = dir.path().join("broken.json");
    std::fs::write(&p, v.to_string()).unwrap();
    let o = run(&["dim", p.to_str().unwrap(), "--degree", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("facet 0") || err.contains("edge 0"), "{err}");
    assert!(err.contains("missing its transition"), "{err}");
}

#[test]
fn bad_degree_range() {
    let o = run(&["dim", "builtin:cube", "--degree", "5..2"]);
    assert_eq!(o.status.code(), Some(2));
}
