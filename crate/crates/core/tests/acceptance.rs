//! Runs every acceptance criterion and prints one line per criterion.
//! Exits nonzero if any criterion fails.

use std::process::ExitCode;

use dl_horo::verify::{run_suite, Suite, VerifyConfig};

fn main() -> ExitCode {
    let outcomes = match run_suite(Suite::All, &VerifyConfig::default()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("acceptance suite could not run: {e}");
            return ExitCode::FAILURE;
        }
    };
    for o in &outcomes {
        println!("{o}");
        for note in &o.report.notes {
            println!("    {note}");
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
