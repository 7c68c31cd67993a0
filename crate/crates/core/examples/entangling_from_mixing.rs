//! Passing between the two rate problems: an ensemble becomes an
//! ancilla-assisted entangling problem with the same rate, and a bipartite
//! state gives an ensemble whose mixing rate reproduces an entangling
//! expression up to `B^-2`.

use ratelab::entangling::entangling_rate;
use ratelab::mixing::{
    ensemble_to_entangling_embedding, ensemble_to_triple, mixing_rate, reduced_entangling_expression,
    sie_reduction, Ensemble,
};
use ratelab::random::{self, stream_rng};

pub fn run_example() -> ratelab::Result<()> {
    let mut rng = stream_rng(11, 0);

    let e = Ensemble::new(0.25, random::density(&mut rng, 3, 3)?, random::density(&mut rng, 3, 3)?)?;
    let h = random::hermitian(&mut rng, 3);
    let lambda = mixing_rate(&ensemble_to_triple(&e)?, &h)?;
    let (psi, h_tilde) = ensemble_to_entangling_embedding(&e, &h)?;
    let gamma = entangling_rate(&psi, &h_tilde)?;
    println!("embedding {:?}: Lambda = {lambda:.12}, Gamma = {gamma:.12}", psi.dims());
    assert!((lambda - gamma).abs() < 1e-8);

    let (da, db) = (2, 3);
    let rho = random::density(&mut rng, da * db, 4)?;
    let h = random::hermitian(&mut rng, da * db);
    let red = sie_reduction(&rho, (da, db))?;
    let lhs = mixing_rate(&red.triple, &h)?;
    let rhs = reduced_entangling_expression(&rho, (da, db), &h)? / (db * db) as f64;
    println!("reduction: weight {:.4}, lambda_min(mu) = {:.3e}", red.triple.p(), red.mu_min_eigenvalue);
    println!("  Lambda = {lhs:.12}, B^-2 expression = {rhs:.12}");
    assert!((lhs - rhs).abs() < 1e-9);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
