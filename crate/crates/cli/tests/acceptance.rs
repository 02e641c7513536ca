//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILING` are computed exactly like the others
//! and reported as failures, but do not fail the test run; the README
//! explains each. Any other failure, or a known one that starts passing,
//! makes the run fail.

use std::process::ExitCode;
use std::time::Instant;

use mollow_cli::validate::{self, Settings};

const KNOWN_FAILING: &[u8] = &[4, 6];

fn main() -> ExitCode {
    let start = Instant::now();
    let settings = Settings::default();
    let report = validate::run(&settings, &validate::all_ids());
    println!();
    println!("acceptance criteria");
    for o in &report.outcomes {
        let note = if !o.passed && KNOWN_FAILING.contains(&o.id) { " (known)" } else { "" };
        println!("{}{note}", o.line());
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    let unexpected: Vec<u8> = report
        .outcomes
        .iter()
        .filter(|o| o.passed == KNOWN_FAILING.contains(&o.id))
        .map(|o| o.id)
        .collect();
    let passed = report.outcomes.iter().filter(|o| o.passed).count();
    println!(
        "{passed}/{} criteria passed in {:.1} s",
        report.outcomes.len(),
        start.elapsed().as_secs_f64()
    );
    if unexpected.is_empty() {
        println!("test result: ok. no unexpected outcomes");
        ExitCode::SUCCESS
    } else {
        println!("test result: FAILED. unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
