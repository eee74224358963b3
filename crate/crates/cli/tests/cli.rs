use std::path::PathBuf;
use std::process::{Command, Output};

use lierigid::cohomology::Verdict;
use lierigid::rigidity::RigidityVerdict;

fn lierigid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lierigid")).args(args).env_remove("ORACLE_DIM_MAX").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn has_float(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(n) => n.is_f64(),
        serde_json::Value::Array(xs) => xs.iter().any(has_float),
        serde_json::Value::Object(m) => m.values().any(has_float),
        _ => false,
    }
}

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

#[test]
fn vogel_e8() {
    let o = lierigid(&["vogel", "--params", "-2,12,20", "--k", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "248");
    let o = lierigid(&["vogel", "--params", "-2,12,20"]);
    assert_eq!(stdout(&o).trim(), "248");
}

#[test]
fn vogel_degenerate_is_input_error() {
    let o = lierigid(&["vogel", "--params", "-2,0,3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--params"));
    assert!(stderr(&o).contains("β"));
}

#[test]
fn grading_g24() {
    let o = lierigid(&["grading", "--type", "A3", "--marked", "2", "--weight", "0,1,0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("module: {0:1, -1:4, -2:1}"));
    let o = lierigid(&["--format", "json", "grading", "--type", "A3", "--marked", "2", "--weight", "0,1,0"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["module"]["shifted"]["-1"], 4);
    assert_eq!(v["module"]["top_eigenvalue"], "1");
}

#[test]
fn input_errors_exit_2_and_name_the_field() {
    for (args, field) in [
        (vec!["grading", "--type", "Q3", "--marked", "1"], "--type"),
        (vec!["grading", "--type", "A3", "--marked", "5"], "--marked"),
        (vec!["gperp", "--type", "A2", "--weight", "1,-1"], "--weight"),
        (vec!["gperp", "--type", "A2", "--weight", "1,x"], "--weight"),
        (vec!["adjoint", "--type", "A1"], "--type"),
        (vec!["rigidity", "--scenario", "no-such-thing"], "--scenario"),
    ] {
        let o = lierigid(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(field), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn malformed_scenario_names_field() {
    let dir = std::env::temp_dir().join(format!("lierigid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"algebra":["A2"],"marked":[1],"highest_weight":[1,1],"p":-1}"#).unwrap();
    let o = lierigid(&["rigidity", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("marked"));
    std::fs::write(&path, r#"{"algebra":["A2"],"marked":[1,2],"highest_weight":[1,1],"p":-3}"#).unwrap();
    let o = lierigid(&["rigidity", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p:"));
}

#[test]
fn scenario_reports_round_trip() {
    for name in ["adjoint-a2.json", "segre-1-1.json", "veronese-a1.json", "grassmannian-a3-p2.json"] {
        let o = lierigid(&["--format", "json", "rigidity", "--scenario", &fixture(name)]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        let text = stdout(&o);
        let v: RigidityVerdict = serde_json::from_str(&text).unwrap();
        assert_eq!(v.verdict == Verdict::Rigid, v.offending_pieces.is_empty());
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
        assert!(!has_float(&serde_json::from_str(&text).unwrap()), "{name}: floating point in output");
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = lierigid(&["--format", "json", "rigidity", "--scenario", "segre-2-2"]);
    let b = lierigid(&["--format", "json", "rigidity", "--scenario", "segre-2-2"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("Kostant path alone decided"));
}

#[test]
fn inline_rigidity_and_adjoint() {
    let o = lierigid(&["rigidity", "--type", "A1", "--marked", "1", "--weight", "2", "--p", "2"]);
    assert!(stdout(&o).contains("verdict: RIGID"));
    let o = lierigid(&["adjoint", "--type", "G2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verdict: RIGID"));
}

#[test]
fn list_fixtures() {
    let o = lierigid(&["rigidity", "--list-fixtures"]);
    let names = stdout(&o);
    for n in ["adjoint-a2", "adjoint-g2", "adjoint-c2", "segre-1-1", "segre-2-2", "veronese-a1", "grassmannian-a3-p2"] {
        assert!(names.lines().any(|l| l == n), "{n}");
    }
}

#[test]
fn cohomology_with_oracle() {
    let o = lierigid(&["cohomology", "--type", "A1", "--marked", "1", "--weight", "4", "--oracle"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("direct computation agrees"));
    let o = lierigid(&["--format", "json", "cohomology", "--type", "A2", "--marked", "1,2", "--weight", "3,0", "--oracle"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["by_degree"], v["direct_by_degree"]);
}

#[test]
fn tableau_commands() {
    let dir = std::env::temp_dir().join(format!("lierigid-tab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let t = dir.join("cr.json");
    std::fs::write(&t, r#"{"dim_V":2,"dim_W":2,"basis":[["1","0","0","1"],["0","1","-1","0"]]}"#).unwrap();
    let o = lierigid(&["--format", "json", "tableau", "--input", t.to_str().unwrap(), "--flag-seed", "9"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["involutivity"]["dim_prolongation"], 2);
    assert_eq!(v["involutivity"]["involutive"], true);
    assert_eq!(v["torsion_quotient_dim"], 0);

    let f = dir.join("xy.json");
    std::fs::write(&f, r#"{"dim_T":2,"components":[["0","1","1","0"]]}"#).unwrap();
    let o = lierigid(&["tableau", "--second-form", f.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("block space: 6  dim r: 3  dim r⊥: 3"));

    std::fs::write(&t, r#"{"dim_V":2,"dim_W":1,"basis":[["1","0"],["1/0","0"]]}"#).unwrap();
    let o = lierigid(&["tableau", "--input", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--input"));
}
