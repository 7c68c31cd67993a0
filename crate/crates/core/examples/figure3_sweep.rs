//! Maximal mixing rate over ensembles averaging to the embezzling state,
//! compared against the binary entropy of the weight.
//!
//! `cargo run --release --example figure3_sweep -- 8 10 128` runs D = 8
//! with 10 weights and 128 restarts per weight.

use ratelab::solver::{figure3_scan, SolverConfig};

pub fn run_example() -> ratelab::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let d = args.first().copied().unwrap_or(4);
    let pcount = args.get(1).copied().unwrap_or(4);
    let restarts = args.get(2).copied().unwrap_or(8);
    let config = SolverConfig {
        restarts,
        master_seed: 2024,
        ..SolverConfig::default()
    };
    let rows = figure3_scan(&[d], pcount, &config)?;
    println!("{:>8} {:>10} {:>10} {:>10}", "p", "F_max", "h2(p)", "spread");
    for row in &rows {
        let f = row.f_max.unwrap_or(f64::NAN);
        println!(
            "{:>8.4} {:>10.6} {:>10.6} {:>10.2e}",
            row.p,
            f,
            row.entropy_bits,
            row.precision.unwrap_or(f64::NAN)
        );
        assert!(f <= row.entropy_bits + 1e-2, "p = {}: {f} above h2", row.p);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
