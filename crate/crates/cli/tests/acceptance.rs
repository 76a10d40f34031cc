//! The twelve acceptance criteria, one PASS/FAIL line each.
//! Criterion 12 runs the `selftest` subcommand twice and compares report bytes.

use std::process::Command;
use std::time::{Duration, Instant};

use hypersmt::selftest::{run_criterion, CriterionOutcome, CRITERIA};

fn selftest_report(dir: &std::path::Path, name: &str) -> (bool, Vec<u8>) {
    let path = dir.join(name);
    let status = Command::new(env!("CARGO_BIN_EXE_hypersmt"))
        .args(["selftest", "--seed", "0", "--out"])
        .arg(&path)
        .output()
        .expect("run hypersmt")
        .status;
    (status.success(), std::fs::read(&path).unwrap_or_default())
}

fn determinism_via_cli() -> CriterionOutcome {
    let (_, name, budget) = CRITERIA[11];
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let (ok_a, a) = selftest_report(dir.path(), "a.txt");
    let (ok_b, b) = selftest_report(dir.path(), "b.txt");
    let passed = ok_a && ok_b && !a.is_empty() && a == b;
    let detail = format!("two CLI runs, {} bytes each, identical: {}", a.len(), a == b);
    CriterionOutcome { id: 12, name, passed, detail, elapsed: start.elapsed(), budget: Duration::from_secs(budget) }
}

fn main() {
    let mut outcomes: Vec<CriterionOutcome> = (1..=11).map(|id| run_criterion(id, 0)).collect();
    outcomes.push(determinism_via_cli());
    for o in &outcomes {
        let ok = o.passed && o.within_budget();
        println!(
            "{} criterion {:>2} {}: {} [{:.2}s / {}s]",
            if ok { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.detail,
            o.elapsed.as_secs_f64(),
            o.budget.as_secs()
        );
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !(o.passed && o.within_budget())).map(|o| o.id).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
