//! Runs the twelve acceptance criteria and prints one line per criterion.
//! Exits nonzero if any criterion fails.

use std::process::ExitCode;

use qrf_core::verify::{self, Config, Status};

fn main() -> ExitCode {
    let verbose = std::env::args().any(|a| a == "--nocapture" || a == "-v");
    let report = verify::run_all(&Config::default());
    assert_eq!(report.checks.len(), 12, "criteria count");
    for check in &report.checks {
        let tag = match check.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        println!("{tag:5} {:24} {:>9.1} ms  {}", check.id, check.elapsed_ms, check.source);
        if verbose || check.status != Status::Pass {
            for line in &check.details {
                println!("        {line}");
            }
        }
    }
    let passed = report.checks.iter().filter(|c| c.status == Status::Pass).count();
    println!("acceptance: {passed}/{} criteria pass", report.checks.len());
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
