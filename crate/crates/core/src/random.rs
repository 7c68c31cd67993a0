//! Random instance generators for property suites and solver restarts.
//!
//! All generators take an explicit RNG; [`stream_rng`] derives independent
//! deterministic streams from a master seed and an index.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{
    operator_norm, ComplexMatrix, ComplexVector, DensityMatrix, HermitianOperator, C64,
};

/// Deterministic stream `index` under `master_seed`.
pub fn stream_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexVector {
    ComplexVector::from_fn(n, |_, _| gaussian_complex(rng))
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexVector {
    let v = gaussian_vector(rng, n);
    let norm = v.norm();
    v.unscale(norm)
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// GUE-distributed Hermitian matrix.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianOperator {
    HermitianOperator::symmetrized(ginibre(rng, n, n))
}

/// Random Hermitian with operator norm exactly one.
pub fn unit_norm_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<HermitianOperator> {
    let h = hermitian(rng, n);
    let norm = operator_norm(&h)?;
    Ok(h.scale(1.0 / norm))
}

/// `n x k` matrix with orthonormal columns spanning a uniformly random subspace.
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, k);
    g.qr().q()
}

pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    isometry(rng, n, n)
}

/// Orthogonal projector of the given rank onto a random subspace.
pub fn projector<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> HermitianOperator {
    if rank == 0 {
        return HermitianOperator::zeros(n);
    }
    let q = isometry(rng, n, rank);
    HermitianOperator::symmetrized(&q * q.adjoint())
}

/// Density matrix `W W^dag / Tr` with `W` an `n x rank` Ginibre matrix.
pub fn density<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> Result<DensityMatrix> {
    let w = ginibre(rng, n, rank.max(1));
    DensityMatrix::normalized(HermitianOperator::symmetrized(&w * w.adjoint()))
}

/// `U diag(values) U^dag` for a random unitary `U`.
pub fn rotated_diagonal<R: Rng + ?Sized>(rng: &mut R, values: &[f64]) -> HermitianOperator {
    let u = unitary(rng, values.len());
    let d = HermitianOperator::from_real_diagonal(values);
    HermitianOperator::symmetrized(&u * d.matrix() * u.adjoint())
}

/// Random `0 <= Pi <= I` with eigenvalues uniform on `[0, 1]`.
pub fn contraction<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianOperator {
    let values: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    rotated_diagonal(rng, &values)
}

/// Density matrix with exactly two distinct eigenvalues: `l1` with
/// multiplicity `m` and `l2 < l1` with multiplicity `n - m`.
pub fn binary_density<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Result<DensityMatrix> {
    assert!(m >= 1 && m < n, "binary spectrum needs 1 <= m < n");
    // ratio l2/l1 spread over several decades
    let ratio = 10f64.powf(-3.0 * rng.random::<f64>()) * 0.95;
    let l1 = 1.0 / (m as f64 + (n - m) as f64 * ratio);
    let l2 = l1 * ratio;
    let values: Vec<f64> = (0..n).map(|j| if j < m { l1 } else { l2 }).collect();
    DensityMatrix::new(rotated_diagonal(rng, &values))
}
