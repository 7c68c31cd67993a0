//! Runs every randomized verification suite and prints the per-check tally.
//!
//! `cargo run --release --example verify_suites -- 200`

use ratelab::verify::{run_suite, Suite};

pub fn run_example() -> ratelab::Result<()> {
    let instances = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20);
    let report = run_suite(Suite::All, instances, 1);
    print!("{}", report.summary_text());
    for f in &report.failures {
        println!("FAILED {}#{}: expected {}, observed {}", f.check, f.instance, f.expected, f.observed);
    }
    assert!(report.passed());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
