use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pottsloop")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_emits_gaussian_table() {
    let o = run(&["solve", "--ng", "0", "--lmax", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["00"]["0"], "1");
    assert_eq!(v["01"]["0"], "c");
    assert_eq!(v["11"]["0"], "1");
}

#[test]
fn curve_passes_at_symbolic_coupling() {
    let o = run(&["check-curve", "--ng", "6", "--c", "symbolic", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passing_variant"], "1202");
    let o = run(&["check-curve", "--ng", "6", "--moment-variant", "1212"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["check-curve", "--ng", "4", "--printed"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn loop_catalog_at_rational_coupling() {
    let o = run(&["check-loops", "--ng", "4", "--c", "1/4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("24/24 PASS"));
    let o = run(&["check-loops", "--ng", "2", "--nx", "2", "--c", "1/4", "--printed"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("3.26   printed    FAIL"));
}

#[test]
fn recurrences_and_oracle() {
    assert_eq!(run(&["check-recurrences", "--ng", "6", "--c", "1/3"]).status.code(), Some(0));
    let o = run(&["oracle", "--word", "0011", "--nvertices", "0"]);
    assert_eq!(stdout(&o).trim(), "1 + c^2");
    let o = run(&["oracle", "--word", "000", "--nvertices", "1", "--model", "gravity"]);
    assert_eq!(stdout(&o).trim(), "4");
    let o = run(&["compare", "--ng", "2", "--lmax", "3", "--c", "2/5"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["check-curve", "--c", "1"][..],
        &["check-curve", "--c", "-1/2"],
        &["check-curve", "--moment-variant", "1111"],
        &["solve", "--lmax", "0"],
        &["bogus"],
        &["oracle", "--word", "013", "--nvertices", "1"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a.json", "b.json"].iter().map(|f| dir.path().join(f)).collect();
    for p in &paths {
        let o = run(&["check-sd", "--ng", "3", "--nx", "3", "--c", "1/5", "--format", "json", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["passed"], 23);
}

#[test]
fn export_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.csv");
    let o = run(&["export", "--ng", "2", "--c", "1/4", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let body = std::fs::read_to_string(&p).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("moment,order,value"));
    assert!(body.contains("p11,0,1\n"));
    assert!(body.contains("p12,0,1/4\n"));
    assert_eq!(body.lines().count(), 1 + 10 * 3);
}
