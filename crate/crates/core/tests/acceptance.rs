//! Runs every acceptance criterion and prints one PASS/FAIL line each.
//! Exits non-zero if any criterion fails.

use rephom::acceptance::{run_suite, summary, Fixture, CRITERIA};

fn main() {
    let rows = run_suite(&[], &Fixture::default());
    println!();
    print!("{}", summary(&rows));
    if rows.len() != CRITERIA.len() || rows.iter().any(|r| !r.passed) {
        std::process::exit(1);
    }
}
