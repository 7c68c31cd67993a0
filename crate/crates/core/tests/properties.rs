use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ratelab::entangling::{
    entangling_rate, entangling_rate_bipartite, gamma_no_ancilla_max, schmidt_decompose, AssistedState,
    BipartitePureState,
};
use ratelab::linalg::{
    operator_norm, partial_trace, trace_norm, DensityMatrix, HermitianOperator, Keep,
};
use ratelab::mixing::{
    binary_sandwich_identity, canonical_reduce, check_canonical, ensemble_to_triple, holder_commutator_bound,
    max_mixing_rate, mixing_rate, triple_to_ensemble, Ensemble, EnsembleTriple,
};
use ratelab::random::{self, stream_rng};
use ratelab::verify::random_feasible_pi;

fn rng(seed: u64) -> ChaCha8Rng {
    stream_rng(seed, 0)
}

fn full_rank_ensemble(r: &mut ChaCha8Rng, dim: usize, p: f64) -> Ensemble {
    Ensemble::new(p, random::density(r, dim, dim).unwrap(), random::density(r, dim, dim).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_reconstructs(seed in any::<u64>(), dim in 1usize..=8) {
        let h = random::hermitian(&mut rng(seed), dim);
        let spec = h.spectrum().unwrap();
        prop_assert!(spec.reconstruction_error(&h).unwrap() < 1e-10 * h.max_abs_entry().max(1.0));
        prop_assert!(spec.values.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = spec.values.iter().sum();
        prop_assert!((sum - h.trace()).abs() < 1e-10);
    }

    #[test]
    fn norms_are_ordered(seed in any::<u64>(), dim in 1usize..=8) {
        let h = random::hermitian(&mut rng(seed), dim);
        let (op, tr) = (operator_norm(&h).unwrap(), trace_norm(&h).unwrap());
        prop_assert!(op <= tr + 1e-12);
        prop_assert!(tr <= dim as f64 * op + 1e-12);
        prop_assert!((trace_norm(&h.scale(-3.0)).unwrap() - 3.0 * tr).abs() < 1e-9);
    }

    #[test]
    fn entropy_is_bounded(seed in any::<u64>(), dim in 1usize..=8, rank in 1usize..=8) {
        let rho = random::density(&mut rng(seed), dim, rank.min(dim)).unwrap();
        let s = rho.entropy().unwrap();
        prop_assert!(s >= -1e-12);
        prop_assert!(s <= (rank.min(dim) as f64).log2() + 1e-9);
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), da in 1usize..=4, db in 1usize..=4) {
        let mut r = rng(seed);
        let a = random::density(&mut r, da, da).unwrap();
        let b = random::density(&mut r, db, db).unwrap();
        let ab = a.kron(&b);
        let left = partial_trace(ab.op(), (da, db), Keep::First).unwrap();
        let right = partial_trace(ab.op(), (da, db), Keep::Second).unwrap();
        prop_assert!(left.sub(a.op()).max_abs_entry() < 1e-12);
        prop_assert!(right.sub(b.op()).max_abs_entry() < 1e-12);
    }

    #[test]
    fn ensemble_round_trip(seed in any::<u64>(), dim in 2usize..=6, p in 0.01f64..0.99) {
        let e = full_rank_ensemble(&mut rng(seed), dim, p);
        let t = ensemble_to_triple(&e).unwrap();
        prop_assert!((t.pi().trace_product(t.rho().op()) - p).abs() < 1e-9);
        let spec = t.pi().spectrum().unwrap();
        prop_assert!(spec.min() >= -1e-9 && spec.max() <= 1.0 + 1e-9);
        let back = triple_to_ensemble(&t).unwrap();
        prop_assert!(back.rho1.op().sub(e.rho1.op()).max_abs_entry() < 1e-8);
        prop_assert!(back.rho0.op().sub(e.rho0.op()).max_abs_entry() < 1e-8);
    }

    #[test]
    fn infeasible_triples_are_rejected(seed in any::<u64>(), dim in 2usize..=5) {
        let mut r = rng(seed);
        let rho = random::density(&mut r, dim, dim).unwrap();
        let pi = random::contraction(&mut r, dim);
        let p = pi.trace_product(rho.op());
        prop_assert!(EnsembleTriple::new(p + 1e-3, rho.clone(), pi.clone()).is_err());
        let too_big = pi.scale(1.01 / operator_norm(&pi).unwrap());
        let p_big = too_big.trace_product(rho.op());
        prop_assert!(EnsembleTriple::new(p_big, rho, too_big).is_err());
    }

    #[test]
    fn transpose_flips_hamiltonian(seed in any::<u64>(), dim in 2usize..=6, p in 0.01f64..0.99) {
        let mut r = rng(seed);
        let e = full_rank_ensemble(&mut r, dim, p);
        let h = random::hermitian(&mut r, dim);
        let forward = mixing_rate(&ensemble_to_triple(&e).unwrap(), &h).unwrap();
        let backward = mixing_rate(&ensemble_to_triple(&e.transposed()).unwrap(), &h.scale(-1.0)).unwrap();
        prop_assert!((forward - backward).abs() < 1e-10);
    }

    #[test]
    fn mixing_rate_is_linear_and_shift_invariant(seed in any::<u64>(), dim in 2usize..=6, c in -3.0f64..3.0) {
        let mut r = rng(seed);
        let t = ensemble_to_triple(&full_rank_ensemble(&mut r, dim, 0.4)).unwrap();
        let h = random::hermitian(&mut r, dim);
        let base = mixing_rate(&t, &h).unwrap();
        prop_assert!((mixing_rate(&t, &h.scale(c)).unwrap() - c * base).abs() < 1e-9);
        let shifted = h.add(&HermitianOperator::identity(dim).scale(c));
        prop_assert!((mixing_rate(&t, &shifted).unwrap() - base).abs() < 1e-9);
    }

    #[test]
    fn mixing_rate_at_most_twice_norm(seed in any::<u64>(), dim in 2usize..=6, p in 0.01f64..0.99, r0 in 1usize..=6, r1 in 1usize..=6) {
        let mut r = rng(seed);
        let e = Ensemble::new(
            p,
            random::density(&mut r, dim, r0.min(dim)).unwrap(),
            random::density(&mut r, dim, r1.min(dim)).unwrap(),
        ).unwrap();
        let t = ensemble_to_triple(&e).unwrap();
        let h = random::hermitian(&mut r, dim);
        prop_assert!(mixing_rate(&t, &h).unwrap() <= 2.0 * operator_norm(&h).unwrap() + 1e-10);
        let (best, h_opt) = max_mixing_rate(&t).unwrap();
        prop_assert!(best <= 2.0 + 1e-10);
        prop_assert!((mixing_rate(&t, &h_opt).unwrap() - best).abs() < 1e-9);
        prop_assert!(mixing_rate(&t, &h).unwrap() <= best * operator_norm(&h).unwrap() + 1e-9);
    }

    #[test]
    fn holder_bound_holds(seed in any::<u64>(), dim in 2usize..=8) {
        let mut r = rng(seed);
        let pi = random::contraction(&mut r, dim);
        let rank = r.random_range(1..dim);
        let proj = random::projector(&mut r, dim, rank);
        let (lhs, rhs) = holder_commutator_bound(&pi, &proj).unwrap();
        prop_assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
    }

    #[test]
    fn canonical_reduction_meets_conditions(seed in any::<u64>(), dim in 2usize..=8, use_projector in any::<bool>()) {
        let mut r = rng(seed);
        let pi = if use_projector {
            let rank = r.random_range(1..=dim / 2);
            random::projector(&mut r, dim, rank)
        } else {
            random::contraction(&mut r, dim)
        };
        let rank = r.random_range(1..dim);
        let proj = random::projector(&mut r, dim, rank);
        let reduced = canonical_reduce(&pi, &proj).unwrap();
        let c = check_canonical(&pi, &reduced, &proj).unwrap();
        prop_assert!(c.holds(1e-8), "{c:?}");
    }

    #[test]
    fn binary_sandwich_identity_holds(seed in any::<u64>(), dim in 2usize..=10, p in 0.01f64..=0.5) {
        let mut r = rng(seed);
        let m = r.random_range(1..dim);
        let rho = random::binary_density(&mut r, dim, m).unwrap();
        let pi = random_feasible_pi(&mut r, &rho, p);
        let t = EnsembleTriple::new(p, rho, pi).unwrap();
        let (lhs, rhs) = binary_sandwich_identity(&t).unwrap();
        prop_assert!(operator_norm(&lhs.sub(&rhs)).unwrap() < 1e-9);
    }

    #[test]
    fn entangling_rate_below_no_ancilla_max(seed in any::<u64>(), da in 2usize..=4, db in 2usize..=4) {
        let mut r = rng(seed);
        let psi = BipartitePureState::normalized((da, db), random::gaussian_vector(&mut r, da * db)).unwrap();
        let h = random::unit_norm_hermitian(&mut r, da * db).unwrap();
        let (gamma_max, h_opt) = gamma_no_ancilla_max(&psi).unwrap();
        prop_assert!(entangling_rate_bipartite(&psi, &h).unwrap() <= gamma_max + 1e-9);
        prop_assert!((operator_norm(&h_opt).unwrap() - 1.0).abs() < 1e-9);
        prop_assert!((entangling_rate_bipartite(&psi, &h_opt).unwrap() - gamma_max).abs() < 1e-8);
    }

    #[test]
    fn product_states_with_local_hamiltonians_do_not_entangle(seed in any::<u64>(), da in 1usize..=3, alice in 2usize..=3, bob in 2usize..=3) {
        let mut r = rng(seed);
        let left = random::unit_vector(&mut r, da * alice);
        let right = random::unit_vector(&mut r, bob);
        let amplitudes = left.kronecker(&right);
        let dims = ratelab::entangling::AncillaDims { a: da, alice, bob, b: 1 };
        let psi = AssistedState::new(dims, amplitudes).unwrap();
        let local = random::hermitian(&mut r, alice).kron(&HermitianOperator::identity(bob))
            .add(&HermitianOperator::identity(alice).kron(&random::hermitian(&mut r, bob)));
        prop_assert!(entangling_rate(&psi, &local).unwrap().abs() < 1e-10);
    }

    #[test]
    fn schmidt_weights_form_a_distribution(seed in any::<u64>(), da in 1usize..=5, db in 1usize..=5) {
        let psi = BipartitePureState::normalized((da, db), random::gaussian_vector(&mut rng(seed), da * db)).unwrap();
        let s = schmidt_decompose(&psi).unwrap();
        let total: f64 = s.coefficients.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        prop_assert!(s.coefficients.iter().all(|&c| c >= 0.0));
        prop_assert!((s.reconstruct() - psi.amplitudes()).norm() < 1e-10);
    }

    #[test]
    fn density_constructor_rejects_negative(seed in any::<u64>(), dim in 2usize..=5) {
        let mut r = rng(seed);
        let rho = random::density(&mut r, dim, dim).unwrap();
        let shifted = rho.op().sub(&HermitianOperator::identity(dim).scale(1.0));
        prop_assert!(DensityMatrix::new(shifted).is_err());
    }
}
