//! Acceptance suite: one pass/fail line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use ltlab::acceptance::{run_criterion, AcceptanceOptions, CRITERIA};

fn main() -> ExitCode {
    let opts = AcceptanceOptions::default();
    let mut failed = 0;
    for (id, _) in CRITERIA {
        let start = Instant::now();
        let outcome = run_criterion(id, &opts);
        println!(
            "{}  ({:.1}s)",
            outcome.line(),
            start.elapsed().as_secs_f64()
        );
        if !outcome.passed {
            failed += 1;
        }
    }
    println!(
        "{}/{} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
