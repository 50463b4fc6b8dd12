//! Full acceptance sweep. Runs every check in `equiclass::verify` and
//! prints one line per criterion; the few checks with a stated wall-clock
//! budget are timed against it.

use std::time::Instant;

use equiclass::config::Config;
use equiclass::verify::{run_criterion, CRITERION_COUNT};

/// Wall-clock budgets in seconds, where a criterion has one.
fn budget(index: usize) -> Option<u64> {
    match index {
        1 | 9 => Some(60),
        3 => Some(120),
        7 => Some(30),
        _ => None,
    }
}

#[test]
fn acceptance() {
    let config = Config::default();
    let mut failures = Vec::new();
    for index in 1..=CRITERION_COUNT {
        let start = Instant::now();
        let report = run_criterion(index, &config);
        let elapsed = start.elapsed();
        let status = if report.passed { "pass" } else { "FAIL" };
        println!(
            "criterion {:2} {status} {:<22} [{:7.2?}] {}",
            report.index, report.name, elapsed, report.detail
        );
        if !report.passed {
            failures.push(format!("{} ({}): {}", report.index, report.name, report.detail));
        }
        if let Some(limit) = budget(index) {
            if elapsed.as_secs() >= limit {
                failures.push(format!(
                    "{} ({}): took {elapsed:?}, budget {limit}s",
                    report.index, report.name
                ));
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
