use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weaktype")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn norm_of_unit_vector_contains_exact_value() {
    let o = run(&["norm", "g:3:1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let (lo, hi) = (v["enclosure"]["lo"].as_str().unwrap(), v["enclosure"]["hi"].as_str().unwrap());
    let parse = |s: &str| weaktype::numeric::parse_rational(s).unwrap();
    let exact = weaktype::numeric::rat(80, 81);
    assert!(parse(lo) <= exact && exact <= parse(hi));
    assert_eq!(v["config"]["selector"], "g:3:1");
}

#[test]
fn flag_selectors_match_explicit_ones() {
    assert_eq!(stdout(&run(&["export", "--n", "4", "--k", "2"])), stdout(&run(&["export", "F:4:2"])));
    assert_eq!(stdout(&run(&["export", "--n", "4", "--j", "2"])), stdout(&run(&["export", "g:4:2"])));
}

#[test]
fn exported_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    assert_eq!(run(&["export", "g:3:2", "--out", path.to_str().unwrap()]).status.code(), Some(0));
    let from_file = json(&run(&["norm", &format!("@{}", path.display())]));
    let direct = json(&run(&["norm", "g:3:2"]));
    assert_eq!(from_file["enclosure"], direct["enclosure"]);
}

#[test]
fn unit_indicator_file_has_norm_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.json");
    fs::write(&path, r#"{"segments":[{"a":"0","b":"1","constant":"1","terms":[]}]}"#).unwrap();
    let v = json(&run(&["norm", &format!("@{}", path.display())]));
    assert_eq!(v["enclosure"]["lo"], "1/1");
    assert_eq!(v["enclosure"]["hi"], "1/1");
}

#[test]
fn step_file_gives_exact_rearrangement() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    fs::write(
        &path,
        r#"[{"a":"0","b":"1/4","constant":"1","terms":[]},{"a":"1/4","b":"1","constant":"3","terms":[]}]"#,
    )
    .unwrap();
    let o = run(&["rearrange", &format!("@{}", path.display()), "--points", "3"]);
    assert_eq!(o.status.code(), Some(0));
    // d(λ) = 3/4 on [1, 3), so the right-continuous f* drops to 1 at t = 3/4
    let rows: Vec<String> =
        stdout(&o).lines().skip(1).map(|l| l.split(',').take(3).collect::<Vec<_>>().join(",")).collect();
    assert_eq!(rows, ["1/4,3/1,3/1", "1/2,3/1,3/1", "3/4,1/1,1/1"]);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["verify-lemma", "--n", "4", "--tol", "1e-4", "--signs", "sample:5", "--seed", "11"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["statistical"], true);
    assert_eq!(v["config"]["seed"], 11);
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["unit-norms", "--n", "3", "--tol", "1e-4"]).status.code(), Some(0));
    assert_eq!(run(&["norm", "F:10:1", "--budget", "10"]).status.code(), Some(2));
    assert_eq!(run(&["norm", "F:10:1", "--tol", "0"]).status.code(), Some(3));
    assert_eq!(run(&["verify-lemma"]).status.code(), Some(3));
    assert_eq!(run(&["norm", "nonsense"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    // the discrete table is descriptive only
    assert_eq!(run(&["discrete", "--n", "3"]).status.code(), Some(0));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# probe settings\nn = 4\ntol = 1e-3\nformat = csv\n").unwrap();
    let c = conf.to_str().unwrap();
    let from_file = run(&["--config", c, "unit-norms"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert!(stdout(&from_file).starts_with("label,lo,hi"));
    let overridden = run(&["--config", c, "unit-norms", "--n", "3", "--format", "json"]);
    let v = json(&overridden);
    assert_eq!(v["n"], 3);
    assert_eq!(v["config"]["tol"], "1/1000");
}

#[test]
fn ratio_table_and_sequence_export() {
    let o = run(&["type-ratio", "--n-min", "3", "--n-max", "4", "--tol", "1e-4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3);
    let dir = tempfile::tempdir().unwrap();
    let seqs = dir.path().join("seqs");
    assert_eq!(run(&["discrete", "--n", "3", "--sequences", seqs.to_str().unwrap()]).status.code(), Some(0));
    let x1 = fs::read_to_string(seqs.join("x1.csv")).unwrap();
    assert_eq!(x1.lines().count(), 82);
}

#[test]
fn gstar_closed_form_via_cli() {
    let o = run(&["gstar", "--n", "4", "--j", "2", "--points", "20", "--tol", "1e-5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",pass")));
}
