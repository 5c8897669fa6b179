//! Acceptance suite: one line per criterion followed by its checks. Runs
//! without the libtest harness so the lines always reach the output.

use std::process::ExitCode;

use qsep_core::oracles::OptimizerConfig;
use qsep_core::verify::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let cfg = OptimizerConfig::default();
    let mut failed = Vec::new();
    for (id, _, _) in CRITERIA {
        match run_criterion(id, &cfg) {
            Ok(report) => {
                println!("{}", report.summary_line());
                for c in &report.checks {
                    println!(
                        "       {} {}: measured {:e}, tolerance {:e}{}",
                        if c.passed { "ok  " } else { "FAIL" },
                        c.name,
                        c.measured,
                        c.tolerance,
                        c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
                    );
                }
                if !report.passed() {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("[FAIL] criterion {id:>2}: error {e}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
