//! Entangling rates of bipartite Hamiltonians.
//!
//! The rate of a pure state `Psi` on `a ⊗ A ⊗ B ⊗ b` under `I_a ⊗ H ⊗ I_b`
//! is the time derivative at zero of the entanglement entropy across the
//! `aA | Bb` cut. With `L = log2 rho_aA` and `Phi = (L ⊗ I) Psi` it reduces
//! to `2 Im <Phi| H Psi>`, which only needs the action of `H` on a vector.
//! That is what [`Hamiltonian`] abstracts: the large-`d` optimal pair uses
//! a rank-two generator on a `d^2`-dimensional space that is never stored
//! densely.
//!
//! Without ancillas the maximum over `||H|| = 1` is `2 sqrt(F(p))` with
//! `F` the variance of `log2 p` over the Schmidt coefficients, and the
//! maximizing spectra are binary: one coefficient `lambda`, the remaining
//! `d - 1` equal.

use nalgebra::SVD;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    evolution_operator, log2_from_spectrum, optimal_hamiltonian, shannon_entropy, ComplexMatrix, ComplexVector,
    HermitianOperator, C64, I, ONE, ZERO,
};
use crate::optimize::GoldenSection;
use crate::tolerance::TOL;

/// `gamma = 1 / ln 2`.
const GAMMA: f64 = std::f64::consts::LOG2_E;

/// Anything that can act on a vector as a Hermitian operator.
pub trait Hamiltonian {
    fn dim(&self) -> usize;
    fn apply(&self, v: &ComplexVector) -> ComplexVector;
}

impl Hamiltonian for HermitianOperator {
    fn dim(&self) -> usize {
        HermitianOperator::dim(self)
    }

    fn apply(&self, v: &ComplexVector) -> ComplexVector {
        HermitianOperator::apply(self, v)
    }
}

/// `H = -i (|to><from| - |from><to|)`, the generator of a rotation from
/// `from` towards `to` in their two-dimensional span.
#[derive(Debug, Clone)]
pub struct RotationGenerator {
    from: ComplexVector,
    to: ComplexVector,
}

impl RotationGenerator {
    pub fn new(from: ComplexVector, to: ComplexVector) -> Result<Self> {
        if from.len() != to.len() {
            return Err(Error::DimensionMismatch {
                expected: from.len(),
                found: to.len(),
            });
        }
        Ok(Self { from, to })
    }

    /// Eigenvalues are `± sqrt(<f|f><t|t> - |<f|t>|^2)`.
    pub fn operator_norm(&self) -> f64 {
        let ff = self.from.norm_squared();
        let tt = self.to.norm_squared();
        let ft = self.from.dotc(&self.to).norm_sqr();
        (ff * tt - ft).max(0.0).sqrt()
    }

    pub fn to_dense(&self) -> HermitianOperator {
        let m = (&self.to * self.from.adjoint() - &self.from * self.to.adjoint()) * (-I);
        HermitianOperator::symmetrized(m)
    }
}

impl Hamiltonian for RotationGenerator {
    fn dim(&self) -> usize {
        self.from.len()
    }

    fn apply(&self, v: &ComplexVector) -> ComplexVector {
        let a = self.from.dotc(v);
        let b = self.to.dotc(v);
        (&self.to * a - &self.from * b) * (-I)
    }
}

/// Pure state on `A ⊗ B`; amplitude index `jA * dB + jB`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartitePureState {
    dims: (usize, usize),
    amplitudes: ComplexVector,
}

impl BipartitePureState {
    pub fn new(dims: (usize, usize), amplitudes: ComplexVector) -> Result<Self> {
        check_len(dims.0 * dims.1, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > TOL.state_norm {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Rescales to unit norm before validating.
    pub fn normalized(dims: (usize, usize), amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate("zero state vector".into()));
        }
        Self::new(dims, amplitudes.unscale(norm))
    }

    /// `sum_j sqrt(p_j) |j>|j>` in the computational bases.
    pub fn from_schmidt_coefficients(dims: (usize, usize), p: &[f64]) -> Result<Self> {
        if p.len() > dims.0.min(dims.1) {
            return Err(Error::Domain(format!(
                "{} Schmidt coefficients do not fit dims {:?}",
                p.len(),
                dims
            )));
        }
        let mut amps = ComplexVector::zeros(dims.0 * dims.1);
        for (j, &pj) in p.iter().enumerate() {
            if pj < 0.0 {
                return Err(Error::Domain(format!("negative Schmidt coefficient {pj}")));
            }
            amps[j * dims.1 + j] = C64::new(pj.sqrt(), 0.0);
        }
        Self::new(dims, amps)
    }

    pub fn product(left: &ComplexVector, right: &ComplexVector) -> Result<Self> {
        let amps = left.kronecker(right);
        Self::normalized((left.len(), right.len()), amps)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// `dA x dB` coefficient matrix `M[jA, jB]`.
    pub fn amplitude_matrix(&self) -> ComplexMatrix {
        let (da, db) = self.dims;
        ComplexMatrix::from_fn(da, db, |i, j| self.amplitudes[i * db + j])
    }
}

/// Dimensions of the four registers `a ⊗ A ⊗ B ⊗ b`; `H` acts on `A ⊗ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AncillaDims {
    pub a: usize,
    pub alice: usize,
    pub bob: usize,
    pub b: usize,
}

impl AncillaDims {
    pub fn bipartite(alice: usize, bob: usize) -> Self {
        Self {
            a: 1,
            alice,
            bob,
            b: 1,
        }
    }

    pub fn total(&self) -> usize {
        self.a * self.alice * self.bob * self.b
    }

    /// Dimension of the interacting pair `A ⊗ B`.
    pub fn interacting(&self) -> usize {
        self.alice * self.bob
    }

    /// `(aA, Bb)`.
    pub fn cut(&self) -> (usize, usize) {
        (self.a * self.alice, self.bob * self.b)
    }
}

/// Pure state on `a ⊗ A ⊗ B ⊗ b`, index `((ia*A + iA)*B + iB)*b + ib`.
#[derive(Debug, Clone)]
pub struct AssistedState {
    dims: AncillaDims,
    amplitudes: ComplexVector,
}

impl AssistedState {
    pub fn new(dims: AncillaDims, amplitudes: ComplexVector) -> Result<Self> {
        check_len(dims.total(), amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > TOL.state_norm {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> AncillaDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// The same amplitudes viewed across the `aA | Bb` cut.
    pub fn across_cut(&self) -> BipartitePureState {
        BipartitePureState {
            dims: self.dims.cut(),
            amplitudes: self.amplitudes.clone(),
        }
    }
}

impl From<BipartitePureState> for AssistedState {
    fn from(state: BipartitePureState) -> Self {
        Self {
            dims: AncillaDims::bipartite(state.dims.0, state.dims.1),
            amplitudes: state.amplitudes,
        }
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Schmidt form `psi = sum_j sqrt(p_j) |u_j> ⊗ |v_j>`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Nonincreasing, positive, summing to one.
    pub coefficients: Vec<f64>,
    /// Columns `u_j`.
    pub left: ComplexMatrix,
    /// Columns `v_j`.
    pub right: ComplexMatrix,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn reconstruct(&self) -> ComplexVector {
        let (da, db) = (self.left.nrows(), self.right.nrows());
        let mut out = ComplexVector::zeros(da * db);
        for (j, &p) in self.coefficients.iter().enumerate() {
            let term = self.left.column(j).kronecker(&self.right.column(j)) * C64::new(p.sqrt(), 0.0);
            out += term;
        }
        out
    }
}

/// Schmidt decomposition via the SVD of the amplitude matrix. Coefficients
/// at or below the rank cutoff are dropped and the rest renormalized.
pub fn schmidt_decompose(psi: &BipartitePureState) -> Result<SchmidtDecomposition> {
    let m = psi.amplitude_matrix();
    let svd = SVD::try_new(m, true, true, f64::EPSILON, 0).ok_or(Error::EigenFailure {
        dim: psi.dims.0.max(psi.dims.1),
        residual: f64::INFINITY,
    })?;
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^dag");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let kept: Vec<usize> = order
        .into_iter()
        .filter(|&k| svd.singular_values[k].powi(2) > TOL.rank_cutoff)
        .collect();
    let total: f64 = kept.iter().map(|&k| svd.singular_values[k].powi(2)).sum();
    let coefficients = kept
        .iter()
        .map(|&k| svd.singular_values[k].powi(2) / total)
        .collect();
    let (da, db) = psi.dims;
    let mut left = ComplexMatrix::zeros(da, kept.len());
    let mut right = ComplexMatrix::zeros(db, kept.len());
    for (j, &k) in kept.iter().enumerate() {
        left.set_column(j, &u.column(k));
        // M = U S V^dag, so M[i, l] = sum_k U[i,k] s_k conj(V[l,k]) = sum_k U[i,k] s_k V^dag[k,l]
        for l in 0..db {
            right[(l, j)] = v_t[(k, l)];
        }
    }
    Ok(SchmidtDecomposition {
        coefficients,
        left,
        right,
    })
}

/// Entanglement entropy in bits.
pub fn entanglement_entropy(psi: &BipartitePureState) -> Result<f64> {
    Ok(shannon_entropy(&schmidt_decompose(psi)?.coefficients))
}

/// `M M^dag` for the amplitude matrix, skipping exact zeros.
fn reduced_first(m: &ComplexMatrix) -> HermitianOperator {
    let (da, db) = m.shape();
    let mut out = ComplexMatrix::zeros(da, da);
    let mut rows = Vec::with_capacity(da);
    for j in 0..db {
        rows.clear();
        rows.extend((0..da).filter(|&i| m[(i, j)] != ZERO));
        for &i in &rows {
            for &k in &rows {
                out[(i, k)] += m[(i, j)] * m[(k, j)].conj();
            }
        }
    }
    HermitianOperator::symmetrized(out)
}

/// `L M`, skipping exact zeros of `M`.
fn left_multiply(l: &HermitianOperator, m: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = m.shape();
    let lm = l.matrix();
    let mut out = ComplexMatrix::zeros(da, db);
    for j in 0..db {
        for k in 0..da {
            let c = m[(k, j)];
            if c == ZERO {
                continue;
            }
            for i in 0..da {
                out[(i, j)] += lm[(i, k)] * c;
            }
        }
    }
    out
}

/// `(I_a ⊗ H ⊗ I_b) psi`.
fn apply_on_interacting(h: &impl Hamiltonian, dims: AncillaDims, psi: &ComplexVector) -> ComplexVector {
    if dims.a == 1 && dims.b == 1 {
        return h.apply(psi);
    }
    apply_blockwise(|v| h.apply(v), dims, psi)
}

/// Applies `op` to every `A ⊗ B` slice of `psi`.
fn apply_blockwise(
    op: impl Fn(&ComplexVector) -> ComplexVector,
    dims: AncillaDims,
    psi: &ComplexVector,
) -> ComplexVector {
    let n = dims.interacting();
    let mut out = ComplexVector::zeros(psi.len());
    let mut slot = ComplexVector::zeros(n);
    for ia in 0..dims.a {
        for ib in 0..dims.b {
            let index = |k: usize| (ia * n + k) * dims.b + ib;
            for k in 0..n {
                slot[k] = psi[index(k)];
            }
            let image = op(&slot);
            for k in 0..n {
                out[index(k)] = image[k];
            }
        }
    }
    out
}

/// `(I_a ⊗ e^{iHt} ⊗ I_b) psi`.
pub fn evolve(psi: &AssistedState, h: &HermitianOperator, t: f64) -> Result<AssistedState> {
    let dims = psi.dims();
    check_len(dims.interacting(), h.dim())?;
    let u = evolution_operator(h, t)?;
    let amps = apply_blockwise(|v| &u * v, dims, &psi.amplitudes);
    let norm = amps.norm();
    AssistedState::new(dims, amps.unscale(norm))
}

/// Entropy of `rho_aA` in bits.
pub fn cut_entropy(psi: &AssistedState) -> Result<f64> {
    let (da, db) = psi.dims().cut();
    let m = ComplexMatrix::from_fn(da, db, |i, j| psi.amplitudes[i * db + j]);
    Ok(shannon_entropy(&reduced_first(&m).spectrum()?.values))
}

/// Entangling rate `dS(aA)/dt` at `t = 0` under `U(t) = I_a ⊗ e^{iHt} ⊗ I_b`.
///
/// `log2 rho_aA` is taken on its support; for a pure state the reduced
/// state always contains the state's own `aA` marginal in its support, so
/// rank deficiency changes nothing.
pub fn entangling_rate(psi: &AssistedState, h: &impl Hamiltonian) -> Result<f64> {
    let dims = psi.dims();
    check_len(dims.interacting(), h.dim())?;
    let (da, db) = dims.cut();
    let m = ComplexMatrix::from_fn(da, db, |i, j| psi.amplitudes[i * db + j]);
    let rho_a = reduced_first(&m);
    let (log_rho, _support) = log2_from_spectrum(&rho_a.spectrum()?, TOL.rank_cutoff)?;
    let phi_matrix = left_multiply(&log_rho, &m);
    let h_psi = apply_on_interacting(h, dims, &psi.amplitudes);
    let mut overlap = ZERO;
    for i in 0..da {
        for j in 0..db {
            overlap += phi_matrix[(i, j)].conj() * h_psi[i * db + j];
        }
    }
    Ok(2.0 * overlap.im)
}

/// [`entangling_rate`] without ancillas.
pub fn entangling_rate_bipartite(psi: &BipartitePureState, h: &impl Hamiltonian) -> Result<f64> {
    entangling_rate(&AssistedState::from(psi.clone()), h)
}

/// `F(p) = sum p log2^2 p - (sum p log2 p)^2`, the variance of `log2 p`.
pub fn log_variance(p: &[f64]) -> f64 {
    let (mean, second) = p
        .iter()
        .filter(|&&x| x > TOL.rank_cutoff)
        .fold((0.0, 0.0), |(m, s), &x| {
            let l = x.log2();
            (m + x * l, s + x * l * l)
        });
    (second - mean * mean).max(0.0)
}

/// Maximal entangling rate over `||H|| = 1` without ancillas: `2 sqrt(F(p))`
/// together with the maximizing Hamiltonian.
pub fn gamma_no_ancilla_max(psi: &BipartitePureState) -> Result<(f64, HermitianOperator)> {
    let (da, db) = psi.dims();
    let schmidt = schmidt_decompose(psi)?;
    if schmidt.rank() <= 1 {
        return Ok((0.0, HermitianOperator::identity(da * db)));
    }
    let gamma = 2.0 * log_variance(&schmidt.coefficients).sqrt();
    // X = i [L ⊗ I, |Psi><Psi|] = i (|Phi><Psi| - |Psi><Phi|)
    let m = psi.amplitude_matrix();
    let rho_a = reduced_first(&m);
    let (log_rho, _) = log2_from_spectrum(&rho_a.spectrum()?, TOL.rank_cutoff)?;
    let phi = left_multiply(&log_rho, &m);
    let phi = ComplexVector::from_fn(da * db, |k, _| phi[(k / db, k % db)]);
    let psi_v = psi.amplitudes();
    let x = (&phi * psi_v.adjoint() - psi_v * phi.adjoint()) * I;
    let (h, _) = optimal_hamiltonian(&HermitianOperator::symmetrized(x))?;
    Ok((gamma, h))
}

/// Binary Schmidt spectrum `(lambda, (1-lambda)/(d-1), ...)`.
pub fn binary_spectrum(lambda: f64, d: usize) -> Vec<f64> {
    let rest = (1.0 - lambda) / (d - 1) as f64;
    std::iter::once(lambda)
        .chain(std::iter::repeat_n(rest, d - 1))
        .collect()
}

/// The state `Psi_lambda` on `d x d` with the binary Schmidt spectrum.
pub fn binary_spectrum_state(lambda: f64, d: usize) -> Result<BipartitePureState> {
    check_lambda(lambda, d)?;
    BipartitePureState::from_schmidt_coefficients((d, d), &binary_spectrum(lambda, d))
}

fn check_lambda(lambda: f64, d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("need d >= 2, got {d}")));
    }
    if !(0.5..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!("lambda = {lambda} outside [1/2, 1]")));
    }
    Ok(())
}

/// `2 sqrt(lambda (1 - lambda)) log2(lambda (d - 1) / (1 - lambda))`.
pub fn gamma_lambda(lambda: f64, d: usize) -> Result<f64> {
    check_lambda(lambda, d)?;
    Ok(gamma_lambda_unchecked(lambda, d))
}

fn gamma_lambda_unchecked(lambda: f64, d: usize) -> f64 {
    if lambda >= 1.0 {
        return 0.0;
    }
    let ratio = lambda * (d - 1) as f64 / (1.0 - lambda);
    2.0 * (lambda * (1.0 - lambda)).sqrt() * ratio.log2()
}

/// Optimal binary-spectrum parameter and the rate it achieves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaOptimum {
    pub lambda: f64,
    pub gamma: f64,
}

/// Maximizes [`gamma_lambda`] over `[1/2, 1]`: a 1000-point grid brackets
/// the maximum, golden-section search refines it.
pub fn optimize_lambda(d: usize) -> Result<LambdaOptimum> {
    check_lambda(0.5, d)?;
    let search = GoldenSection::new(1e-11);
    let best = search.minimize_after_grid(|l| -gamma_lambda_unchecked(l, d), 0.5, 1.0, 1000);
    Ok(LambdaOptimum {
        lambda: best.x,
        gamma: gamma_lambda_unchecked(best.x, d),
    })
}

/// Largest violation of the stationarity conditions of `F(p)` on the
/// simplex at the binary spectrum `(lambda, (1-lambda)/(d-1), ...)`.
///
/// Lagrange stationarity of `F` gives, for every `j`,
/// `log2 p_j = -gamma - S ± sqrt(gamma^2 + F)` with `S` the entropy of `p`
/// and `gamma = 1/ln 2`; the large coefficient takes `+`, the rest `-`.
pub fn extremal_residual(lambda: f64, d: usize) -> Result<f64> {
    check_lambda(lambda, d)?;
    let p = binary_spectrum(lambda, d);
    let s = shannon_entropy(&p);
    let f = log_variance(&p);
    let root = (GAMMA * GAMMA + f).sqrt();
    let large = (p[0].log2() - (-GAMMA - s + root)).abs();
    let small = (p[1].log2() - (-GAMMA - s - root)).abs();
    Ok(large.max(small))
}

/// Asymptotically optimal pair for large `d`:
/// `Psi = (|1,1> + |Phi+>)/sqrt(2)` with `|Phi+>` maximally entangled on
/// levels `2..d`, and the rotation generator between `|1,1>` and `|Phi+>`.
pub fn optimal_pair_large_d(d: usize) -> Result<(BipartitePureState, RotationGenerator)> {
    if d < 2 {
        return Err(Error::Domain(format!("need d >= 2, got {d}")));
    }
    let n = d * d;
    let mut product = ComplexVector::zeros(n);
    product[0] = ONE;
    let mut phi_plus = ComplexVector::zeros(n);
    let w = C64::new(1.0 / ((d - 1) as f64).sqrt(), 0.0);
    for j in 1..d {
        phi_plus[j * d + j] = w;
    }
    let psi = (&product + &phi_plus) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let state = BipartitePureState::new((d, d), psi)?;
    let h = RotationGenerator::new(product, phi_plus)?;
    Ok((state, h))
}

/// One row of the optimal-`lambda` table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure2Row {
    pub d: usize,
    pub log2d: f64,
    pub lambda_opt: f64,
    pub gamma_d: f64,
    pub entropy_bits: f64,
}

pub const FIGURE2_HEADER: &str = "d,log2d,lambda_opt,gamma_d,entropy_bits";

/// Optimal `lambda`, rate and entanglement entropy for each `d`.
pub fn figure2_scan(d_values: &[usize]) -> Result<Vec<Figure2Row>> {
    use rayon::prelude::*;
    d_values
        .par_iter()
        .map(|&d| {
            let opt = optimize_lambda(d)?;
            let entropy = shannon_entropy(&[opt.lambda, 1.0 - opt.lambda])
                + (1.0 - opt.lambda) * ((d - 1) as f64).log2();
            Ok(Figure2Row {
                d,
                log2d: (d as f64).log2(),
                lambda_opt: opt.lambda,
                gamma_d: opt.gamma,
                entropy_bits: entropy,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> BipartitePureState {
        BipartitePureState::from_schmidt_coefficients((2, 2), &[0.5, 0.5]).unwrap()
    }

    #[test]
    fn bell_and_product_entropies() {
        assert!((entanglement_entropy(&bell()).unwrap() - 1.0).abs() < 1e-12);
        let zero = ComplexVector::from_vec(vec![ONE, ZERO]);
        let one = ComplexVector::from_vec(vec![ZERO, ONE]);
        let product = BipartitePureState::product(&zero, &one).unwrap();
        let s = schmidt_decompose(&product).unwrap();
        assert_eq!(s.coefficients.len(), 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);
        assert!(entanglement_entropy(&product).unwrap().abs() < 1e-12);
        let max = BipartitePureState::from_schmidt_coefficients((5, 5), &[0.2; 5]).unwrap();
        assert!((entanglement_entropy(&max).unwrap() - 5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn rejects_unnormalized() {
        let amps = ComplexVector::from_vec(vec![ONE, ONE, ZERO, ZERO]);
        assert!(matches!(
            BipartitePureState::new((2, 2), amps),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn diagonal_hamiltonian_has_zero_rate() {
        let psi = binary_spectrum_state(0.8, 3).unwrap();
        let h = HermitianOperator::from_real_diagonal(&[0.3, -1.0, 0.2, 0.5, 0.9, -0.1, 0.0, 0.4, 1.0]);
        assert!(entangling_rate_bipartite(&psi, &h).unwrap().abs() < 1e-14);
    }

    #[test]
    fn reference_optimum_for_qubits() {
        let opt = optimize_lambda(2).unwrap();
        assert!((opt.lambda - 0.9168).abs() < 1e-3, "{opt:?}");
        assert!((opt.gamma - 1.9123).abs() < 1e-3, "{opt:?}");
        let g = gamma_lambda(0.9168, 2).unwrap();
        assert!((g - 1.9123).abs() < 1e-3);
        let psi = binary_spectrum_state(0.9168, 2).unwrap();
        let (gamma, h) = gamma_no_ancilla_max(&psi).unwrap();
        assert!((gamma - 1.9123).abs() < 1e-3);
        let rate = entangling_rate_bipartite(&psi, &h).unwrap();
        assert!((rate - gamma).abs() < 1e-8, "{rate} vs {gamma}");
    }

    #[test]
    fn gamma_lambda_edges() {
        assert_eq!(gamma_lambda(0.5, 2).unwrap(), 0.0);
        assert_eq!(gamma_lambda(1.0, 7).unwrap(), 0.0);
        assert!(gamma_lambda(0.4, 2).is_err());
        assert!(gamma_lambda(0.7, 1).is_err());
    }

    #[test]
    fn uniform_spectrum_has_zero_maximum() {
        let psi = BipartitePureState::from_schmidt_coefficients((3, 3), &[1.0 / 3.0; 3]).unwrap();
        let (gamma, _) = gamma_no_ancilla_max(&psi).unwrap();
        assert!(gamma.abs() < 1e-7);
        let zero = ComplexVector::from_vec(vec![ONE, ZERO]);
        let product = BipartitePureState::product(&zero, &zero).unwrap();
        let (gamma, h) = gamma_no_ancilla_max(&product).unwrap();
        assert_eq!(gamma, 0.0);
        assert_eq!(h, HermitianOperator::identity(4));
    }

    #[test]
    fn optimum_is_stationary() {
        for d in [2, 3, 4, 16, 1024] {
            let opt = optimize_lambda(d).unwrap();
            let r = extremal_residual(opt.lambda, d).unwrap();
            assert!(r < 1e-6, "d = {d}: residual {r}");
        }
        // away from the optimum the conditions fail
        assert!(extremal_residual(0.7, 2).unwrap() > 1e-2);
    }

    #[test]
    fn large_d_optimum_approaches_half_plus_inverse_ln() {
        let d = 1usize << 10;
        let opt = optimize_lambda(d).unwrap();
        let approx = 0.5 + 1.0 / (d as f64).ln();
        assert!(((opt.lambda - approx) / approx).abs() < 0.05, "{opt:?} vs {approx}");
    }

    #[test]
    fn large_d_pair() {
        let (psi, h) = optimal_pair_large_d(2).unwrap();
        let (gamma, _) = gamma_no_ancilla_max(&psi).unwrap();
        let rate = entangling_rate_bipartite(&psi, &h).unwrap();
        assert!((rate - gamma).abs() < 1e-7);
        assert!((h.operator_norm() - 1.0).abs() < 1e-14);

        let (psi, h) = optimal_pair_large_d(5).unwrap();
        assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-14);
        let dense = h.to_dense();
        let rate_dense = entangling_rate_bipartite(&psi, &dense).unwrap();
        let rate = entangling_rate_bipartite(&psi, &h).unwrap();
        assert!((rate - rate_dense).abs() < 1e-12);
        assert!((rate - 4f64.log2()).abs() < 1e-10);
    }

    #[test]
    fn large_d_pair_rate_scales_like_log_d() {
        let d = 1usize << 10;
        let (psi, h) = optimal_pair_large_d(d).unwrap();
        assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-12);
        let ratio = entangling_rate_bipartite(&psi, &h).unwrap() / (d as f64).log2();
        assert!((0.8..=1.05).contains(&ratio), "{ratio}");
    }

    #[test]
    fn figure2_first_row() {
        let rows = figure2_scan(&[2]).unwrap();
        let row = rows[0];
        assert_eq!(row.d, 2);
        assert_eq!(row.log2d, 1.0);
        assert!((row.lambda_opt - 0.9168).abs() < 1e-3);
        assert!((row.gamma_d - 1.9123).abs() < 1e-3);
        let h = shannon_entropy(&[row.lambda_opt, 1.0 - row.lambda_opt]);
        assert!((row.entropy_bits - h).abs() < 1e-12);
    }
}
