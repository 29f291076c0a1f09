//! Prints one line per acceptance criterion and fails if any criterion fails.

use dirac_cli::acceptance::run_all;
use std::process::ExitCode;

fn main() -> ExitCode {
    let results = run_all(4, |c| println!("{}", c.line()));
    let failed: Vec<usize> = results.iter().filter(|c| !c.pass).map(|c| c.id).collect();
    if results.len() == 10 && failed.is_empty() {
        println!("acceptance: all {} criteria pass", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {:?}", failed);
        ExitCode::FAILURE
    }
}
