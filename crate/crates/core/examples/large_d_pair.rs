//! The structured large-`d` pair: a half-product, half-maximally-entangled
//! state and the rotation generator between its two components. The
//! generator is applied matrix-free, so `d` can be large.
//!
//! `cargo run --release --example large_d_pair -- 4096`

use ratelab::entangling::{entanglement_entropy, entangling_rate_bipartite, optimal_pair_large_d};

pub fn run_example() -> ratelab::Result<()> {
    let largest: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(512);
    println!("{:>6} {:>10} {:>10} {:>12}", "d", "Gamma", "log2 d", "Gamma/log2 d");
    let mut d = 2;
    while d <= largest {
        let (psi, h) = optimal_pair_large_d(d)?;
        let gamma = entangling_rate_bipartite(&psi, &h)? / h.operator_norm();
        let log_d = (d as f64).log2();
        println!("{d:>6} {gamma:>10.5} {log_d:>10.3} {:>12.5}", gamma / log_d);
        if d <= 16 {
            // dense cross-check on small sizes
            let dense = entangling_rate_bipartite(&psi, &h.to_dense())? / h.operator_norm();
            assert!((gamma - dense).abs() < 1e-10);
            assert!(entanglement_entropy(&psi)? > 0.0);
        }
        d *= 2;
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
