use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/examples").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcdual")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// The value printed for `label`, e.g. `v(P)`.
fn value_of<'a>(out: &'a str, label: &str) -> &'a str {
    out.lines()
        .map(str::trim)
        .find_map(|l| l.strip_prefix(label).map(|rest| rest.trim_start().trim_start_matches("= ")))
        .unwrap_or_else(|| panic!("no {label} in {out}"))
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_boundary_jump() {
    let o = run(&["analyze", path_str(&corpus("boundary_jump.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(value_of(&out, "v(P)"), "-1 (attained at x = 0)");
    assert!(value_of(&out, "v(D_L)").starts_with("-1 (attained"));
    assert!(value_of(&out, "v(D_bar_L)").starts_with("0 (attained"));
    assert!(out.contains("bar  weak=false zero_gap=false strong=false"), "{out}");
}

#[test]
fn analyze_json_is_stable_and_machine_readable() {
    let file = corpus("boundary_jump.json");
    let a = run(&["analyze", "--json", path_str(&file)]);
    let b = run(&["analyze", "--json", path_str(&file)]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["values"]["P"]["value"], "-1");
    assert_eq!(v["values"]["D_bar_L"]["value"], "0");
    assert_eq!(v["values"]["D_bar_L"]["attained"], true);
    assert_eq!(v["rays"]["kprime"]["threshold"], "0");
    assert_eq!(v["rays"]["kprime"]["includes_threshold"], true);
}

#[test]
fn analyze_fenchel_lagrange_pair() {
    let o = run(&["analyze", "--pair", "fl", path_str(&corpus("boundary_jump_fenchel_lagrange.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(value_of(&out, "v(D_bar_FL)").starts_with("0 (attained"));
    assert!(out.contains("fl   weak=false"), "{out}");
    assert!(!out.contains("bar  weak"), "{out}");
}

#[test]
fn analyze_slater_all_strong() {
    let o = run(&["analyze", path_str(&corpus("slater.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("strong=true").count(), 3, "{out}");
}

#[test]
fn verify_shipped_corpus() {
    let o = run(&["verify", path_str(&corpus(""))]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verified 3 instances"));
}

#[test]
fn verify_flags_corrupted_expectation() {
    let text = std::fs::read_to_string(corpus("boundary_jump.json")).unwrap();
    let bad = text.replace("\"D_bar_L\": \"0\"", "\"D_bar_L\": \"-1\"");
    assert_ne!(text, bad);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corrupted.json");
    std::fs::write(&path, bad).unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL") && out.contains("expected value") && out.contains("D_bar_L"), "{out}");
}

#[test]
fn verify_generated_econvex_corpus() {
    let o = run(&["verify", "--generate", "econvex", "--seed", "7", "--count", "15", "--grid-step", "1/4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verified 15 instances"));
}

#[test]
fn conjugate_table() {
    let file = corpus("boundary_jump.json");
    let o = run(&["conjugate", path_str(&file), "--func", "g"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("g*: 0x+0 on (-inf, 1]"), "{out}");
    assert!(out.contains("dom g: [0, +inf)"), "{out}");
    assert!(out.contains("e-convex: false"), "{out}");
    let o = run(&["conjugate", path_str(&file), "--func", "f"]);
    assert!(stdout(&o).contains("f*: 0x+0 on (-inf, 1]"));
    let o = run(&["conjugate", path_str(&file), "--func", "h2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_convex_input_is_rejected_with_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("concave.json");
    std::fs::write(
        &path,
        r#"{"space": "R",
            "f": {"pieces": [
              {"lo": "-inf", "lo_closed": false, "hi": "0", "hi_closed": false, "slope": "1", "intercept": "0"},
              {"lo": "0", "lo_closed": true, "hi": "+inf", "hi_closed": false, "slope": "-1", "intercept": "0"}]},
            "g": {"pieces": [{"lo": "-inf", "lo_closed": false, "hi": "+inf", "hi_closed": false, "slope": "0", "intercept": "0"}]},
            "constraints": []}"#,
    )
    .unwrap();
    for cmd in ["analyze", "conjugate"] {
        let o = run(&[cmd, path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2));
        let err = stderr(&o);
        assert!(err.contains("f is not convex"), "{err}");
    }
}

#[test]
fn parse_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"space\": \"R\",\n \"f\": {\"pieces\": [{\"lo\": 0}]}}").unwrap();
    let o = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("f.pieces[0]") && err.contains("line 2"), "{err}");

    let text = std::fs::read_to_string(corpus("slater.json")).unwrap().replace("\"R\"", "\"R2\"");
    std::fs::write(&path, text).unwrap();
    let o = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("space"));
}

#[test]
fn oracle_brackets_and_membership() {
    let file = corpus("boundary_jump.json");
    let o = run(&["oracle", path_str(&file), "--quantity", "P", "--quantity", "D_bar_L"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("P: [-inf, -1]"), "{out}");
    assert!(out.contains("D_bar_L: [0, +inf]"), "{out}");
    let o = run(&["oracle", path_str(&file), "--member", "K", "--beta", "-1/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("member: false (conclusive)"));
    let o = run(&["oracle", path_str(&file), "--member", "K", "--beta", "0"]);
    assert!(stdout(&o).contains("member: true (presumptive)"));
}
