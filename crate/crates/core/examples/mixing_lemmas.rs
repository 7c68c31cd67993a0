//! Mixing rates of two-element ensembles: the triple encoding, the optimal
//! Hamiltonian, and the structural lemmas behind the binary-spectrum bound.

use rand::Rng;
use ratelab::linalg::{binary_entropy, operator_norm};
use ratelab::mixing::{
    binary_sandwich_identity, canonical_reduce, check_canonical, ensemble_to_triple, holder_commutator_bound,
    max_mixing_rate, mixing_rate, sim_binary_bound, Ensemble, EnsembleTriple,
};
use ratelab::random::{self, stream_rng};
use ratelab::verify::random_feasible_pi;

pub fn run_example() -> ratelab::Result<()> {
    let mut rng = stream_rng(7, 0);

    let e = Ensemble::new(0.3, random::density(&mut rng, 4, 4)?, random::density(&mut rng, 4, 2)?)?;
    let t = ensemble_to_triple(&e)?;
    let h = random::unit_norm_hermitian(&mut rng, 4)?;
    let (best, h_opt) = max_mixing_rate(&t)?;
    println!("random H: Lambda = {:.6}", mixing_rate(&t, &h)?);
    println!("optimal H (norm {:.3}): Lambda = {best:.6}, 2 = universal cap", operator_norm(&h_opt)?);

    let pi = random::contraction(&mut rng, 6);
    let r = random::projector(&mut rng, 6, 2);
    let (lhs, rhs) = holder_commutator_bound(&pi, &r)?;
    println!("||[Pi, R]||_1 = {lhs:.6} <= {rhs:.6}");
    let reduced = canonical_reduce(&pi, &r)?;
    println!("canonical reduction: {:?}", check_canonical(&pi, &reduced, &r)?);

    println!("{:>6} {:>10} {:>10} {:>8}", "p", "Lambda", "6 h2(p)", "ratio");
    for p in [0.01, 0.05, 0.1, 0.25, 0.5] {
        let m = rng.random_range(1..8);
        let rho = random::binary_density(&mut rng, 8, m)?;
        let t = EnsembleTriple::new(p, rho.clone(), random_feasible_pi(&mut rng, &rho, p))?;
        let (lhs, rhs) = binary_sandwich_identity(&t)?;
        assert!(operator_norm(&lhs.sub(&rhs))? < 1e-9);
        let b = sim_binary_bound(&t)?;
        println!("{p:>6.2} {:>10.6} {:>10.6} {:>8.4}", b.rate, b.bound, b.rate / binary_entropy(p));
        assert!(b.holds());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
