//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;

use twoterm::verify::{run, VerifyOptions};

fn main() -> ExitCode {
    let report = run(&VerifyOptions::default());
    for outcome in &report.outcomes {
        println!("{}", outcome.summary_line());
    }
    let failed: Vec<String> = report.failed().map(|o| format!("{} ({})", o.id, o.name)).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", report.outcomes.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
