use std::path::PathBuf;
use std::process::{Command, Output};

use hypersmt::smt::read_csv_report;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypersmt")).args(args).output().expect("run hypersmt")
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn projective_variant_on_conic_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("smt.csv");
    let o = run(&["smt", path_str(&scenario("conic.cfg")), "--theorem", "1.3", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# theorem: 1.3") && text.contains("# seed: 0"));
    let table = read_csv_report(&text).unwrap();
    assert_eq!(table.columns, ["r", "T", "N_truncated_sum", "lhs", "rhs", "margin", "flags"]);
    assert_eq!(table.rows.len(), 10);
    assert!(table.rows.iter().all(|r| r[5].parse::<f64>().unwrap() >= 0.0));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = run(&["smt", path_str(&scenario("conic.cfg")), "--seed", "3", "--out", path_str(p)]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn malformed_polynomial_exits_4_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    let text = std::fs::read_to_string(scenario("four_lines.cfg")).unwrap().replace("poly = x1\n", "poly = x1 +* x2\n");
    std::fs::write(&bad, text).unwrap();
    let o = run(&["check-position", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(4));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 7") && err.contains("position"), "{err}");
}

#[test]
fn concurrent_lines_exit_2_with_witness() {
    let o = run(&["check-position", path_str(&scenario("concurrent_lines.cfg"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("# witness: 1 2 3"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1 2 3"));
}

#[test]
fn four_lines_position_and_replacement() {
    let o = run(&["check-position", path_str(&scenario("four_lines.cfg"))]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["construct-gp", path_str(&scenario("four_lines.cfg")), "--seed", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let table = read_csv_report(&String::from_utf8_lossy(&o.stdout)).unwrap();
    let dims: Vec<&str> = table.rows.iter().map(|r| r[3].as_str()).collect();
    assert_eq!(dims, ["1", "0", "EMPTY"]);
}

#[test]
fn hilbert_weights_filtration_nevanlinna_succeed() {
    let o = run(&["hilbert", path_str(&scenario("conic.cfg"))]);
    assert_eq!(o.status.code(), Some(0));
    let table = read_csv_report(&String::from_utf8_lossy(&o.stdout)).unwrap();
    // H(m) = 2m + 1 for a plane conic
    assert!(table.rows.iter().all(|r| r[1].parse::<u64>().unwrap() == 2 * r[0].parse::<u64>().unwrap() + 1));

    assert_eq!(run(&["weights", path_str(&scenario("conic.cfg"))]).status.code(), Some(0));
    assert_eq!(run(&["filtration", path_str(&scenario("filtration.cfg"))]).status.code(), Some(0));
    let o = run(&["nevanlinna", path_str(&scenario("exponential.cfg")), "--format", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("max_deviation.2"));
}

#[test]
fn explicit_low_truncation_warns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("low.cfg");
    let text = std::fs::read_to_string(scenario("conic.cfg")).unwrap().replace("truncation = auto", "truncation = 3");
    std::fs::write(&cfg, text).unwrap();
    let o = run(&["smt", path_str(&cfg)]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("below the calculator value"));
    assert!(String::from_utf8_lossy(&o.stdout).contains("# warning:"));
}

#[test]
fn unknown_flag_values_are_input_errors() {
    let o = run(&["smt", path_str(&scenario("conic.cfg")), "--theorem", "2.7"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["hilbert", "/nonexistent/scenario.cfg"]);
    assert_eq!(o.status.code(), Some(4));
}
