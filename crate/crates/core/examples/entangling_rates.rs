//! Entangling rates of binary-spectrum states: the no-ancilla maximum
//! `2 sqrt(Var log2 p)` as a function of `lambda`, and the optimum per `d`.

use ratelab::entangling::{
    binary_spectrum_state, entangling_rate_bipartite, figure2_scan, gamma_lambda, gamma_no_ancilla_max,
};
use ratelab::linalg::operator_norm;

pub fn run_example() -> ratelab::Result<()> {
    println!("d = 2, rate against lambda:");
    for k in 0..=10 {
        let lambda = 0.5 + 0.05 * k as f64;
        println!("  lambda {lambda:.2}  Gamma {:.6}", gamma_lambda(lambda, 2)?);
    }

    // the maximizing Hamiltonian is a unit-norm operator attaining the bound
    let psi = binary_spectrum_state(0.9168, 2)?;
    let (gamma, h) = gamma_no_ancilla_max(&psi)?;
    let direct = entangling_rate_bipartite(&psi, &h)?;
    println!("optimal H: ||H|| = {:.12}, Gamma = {gamma:.10}, recomputed {direct:.10}", operator_norm(&h)?);
    assert!((gamma - direct).abs() < 1e-9);

    println!("{:>6} {:>10} {:>10} {:>10}", "d", "lambda", "Gamma", "S (bits)");
    for row in figure2_scan(&[2, 4, 16, 64, 256, 1024])? {
        println!("{:>6} {:>10.6} {:>10.6} {:>10.4}", row.d, row.lambda_opt, row.gamma_d, row.entropy_bits);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
