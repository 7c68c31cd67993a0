//! One run of the alternating maximizer on the two-level reference problem
//! `rho = diag(2/3, 1/3)`, `p = 1/3`, whose optimum is `1/3`, followed by
//! a random four-level problem.

use ratelab::linalg::{binary_entropy, DensityMatrix};
use ratelab::random::{self, stream_rng};
use ratelab::solver::{alternate_solve, SimProblem, SolverConfig};

pub fn run_example() -> ratelab::Result<()> {
    let config = SolverConfig {
        restarts: 16,
        ..SolverConfig::default()
    };

    let rho = DensityMatrix::from_diagonal(&[2.0 / 3.0, 1.0 / 3.0])?;
    let solved = alternate_solve(&SimProblem::new(rho, 1.0 / 3.0)?, &config)?;
    println!(
        "two-level: F_max = {:.10} (exact 1/3), gap {:.1e}, {} Pi-steps",
        solved.f_max, solved.duality_gap, solved.pi_steps
    );
    assert!((solved.f_max - 1.0 / 3.0).abs() < 1e-6);

    let rho = random::density(&mut stream_rng(3, 0), 4, 4)?;
    let p = 0.2;
    let solved = alternate_solve(&SimProblem::new(rho, p)?, &config)?;
    println!(
        "random 4-level: F_max = {:.6}, h2(p) = {:.6}, max gap {:.1e}, max slackness {:.1e}",
        solved.f_max,
        binary_entropy(p),
        solved.max_duality_gap,
        solved.max_slackness
    );
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
