//! Mixing rates of two-element ensembles.
//!
//! An ensemble `{(1-p, rho0), (p, rho1)}` is encoded as the triple
//! `(p, rho, Pi)` with `rho` the average state and
//! `Pi = p rho^{-1/2} rho1 rho^{-1/2}`; a triple encodes some ensemble iff
//! `0 <= Pi <= I` and `Tr(Pi rho) = p`. The mixing rate under `H` is
//! `Tr(H Y)` with `Y = -i rho^{1/2} [Pi, log2 rho] rho^{1/2}`, so its
//! maximum over `||H|| = 1` is `||Y||_1`.
//!
//! When `rho` is rank deficient every quantity is taken on its support;
//! [`EnsembleTriple::restricted_to_support`] reports when that happened.

use crate::entangling::{AncillaDims, AssistedState};
use crate::error::{Error, Result};
use crate::linalg::{
    binary_entropy, commutator, evolution_operator, log2_from_spectrum, optimal_hamiltonian,
    partial_trace, trace_norm, ComplexMatrix, ComplexVector, DensityMatrix, HermitianOperator,
    Keep, Support, C64, I,
};
use crate::tolerance::TOL;

/// Two-element ensemble; `p` is the weight of `rho1`.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub p: f64,
    pub rho0: DensityMatrix,
    pub rho1: DensityMatrix,
}

impl Ensemble {
    pub fn new(p: f64, rho0: DensityMatrix, rho1: DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        if rho0.dim() != rho1.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho0.dim(),
                found: rho1.dim(),
            });
        }
        Ok(Self { p, rho0, rho1 })
    }

    pub fn dim(&self) -> usize {
        self.rho0.dim()
    }

    pub fn average(&self) -> DensityMatrix {
        let op = self
            .rho0
            .op()
            .scale(1.0 - self.p)
            .add(&self.rho1.op().scale(self.p));
        DensityMatrix::from_op_unchecked(op)
    }

    /// Swaps the two members.
    pub fn transposed(&self) -> Self {
        Self {
            p: 1.0 - self.p,
            rho0: self.rho1.clone(),
            rho1: self.rho0.clone(),
        }
    }

    /// `(1-p) rho0 + p e^{iHt} rho1 e^{-iHt}`.
    pub fn evolved_average(&self, h: &HermitianOperator, t: f64) -> Result<DensityMatrix> {
        check_dim(self.dim(), h.dim())?;
        let u = evolution_operator(h, t)?;
        let moved = HermitianOperator::symmetrized(&u * self.rho1.op().matrix() * u.adjoint());
        let op = self.rho0.op().scale(1.0 - self.p).add(&moved.scale(self.p));
        Ok(DensityMatrix::from_op_unchecked(op))
    }

    /// Average of the member entropies, in bits.
    pub fn mean_entropy(&self) -> Result<f64> {
        Ok((1.0 - self.p) * self.rho0.entropy()? + self.p * self.rho1.entropy()?)
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Spectral functions of an average state, computed once.
#[derive(Debug, Clone)]
pub struct StateFunctions {
    pub sqrt: HermitianOperator,
    /// `rho^{-1/2}` on the support.
    pub inv_sqrt: HermitianOperator,
    /// `log2 rho` on the support.
    pub log2: HermitianOperator,
    pub support: Support,
    pub eigenvalues: Vec<f64>,
}

impl StateFunctions {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        let spec = rho.op().spectrum()?;
        let cutoff = TOL.rank_cutoff;
        let (log2, support) = log2_from_spectrum(&spec, cutoff)?;
        let sqrt = spec.map(|v| if v > cutoff { v.sqrt() } else { 0.0 });
        let inv_sqrt = spec.map(|v| if v > cutoff { 1.0 / v.sqrt() } else { 0.0 });
        Ok(Self {
            sqrt,
            inv_sqrt,
            log2,
            support,
            eigenvalues: spec.values,
        })
    }

    /// `-i rho^{1/2} [A, log2 rho] rho^{1/2}`, Hermitian for Hermitian `A`.
    pub fn sandwiched_commutator(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        let c = commutator(a, &self.log2)?;
        let s = self.sqrt.matrix();
        Ok(HermitianOperator::symmetrized(s * c * s * (-I)))
    }
}

/// Canonical `(p, rho, Pi)` encoding of an ensemble.
#[derive(Debug, Clone)]
pub struct EnsembleTriple {
    p: f64,
    rho: DensityMatrix,
    pi: HermitianOperator,
    functions: StateFunctions,
}

impl EnsembleTriple {
    /// Checks `0 <= Pi <= I` and `Tr(Pi rho) = p`.
    pub fn new(p: f64, rho: DensityMatrix, pi: HermitianOperator) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Inadmissible(format!("p = {p} outside [0, 1]")));
        }
        check_dim(rho.dim(), pi.dim())?;
        let spec = pi.spectrum()?;
        if spec.min() < -TOL.contraction || spec.max() > 1.0 + TOL.contraction {
            return Err(Error::Inadmissible(format!(
                "Pi eigenvalues span [{:.3e}, {:.12}]",
                spec.min(),
                spec.max()
            )));
        }
        let weight = pi.trace_product(rho.op());
        if (weight - p).abs() > TOL.triple_trace {
            return Err(Error::Inadmissible(format!("Tr(Pi rho) = {weight}, p = {p}")));
        }
        let functions = StateFunctions::new(&rho)?;
        Ok(Self {
            p,
            rho,
            pi,
            functions,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn pi(&self) -> &HermitianOperator {
        &self.pi
    }

    pub fn functions(&self) -> &StateFunctions {
        &self.functions
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// True when `rho` is rank deficient and rates were computed on its support.
    pub fn restricted_to_support(&self) -> bool {
        !self.functions.support.is_full_rank()
    }

    /// `(1 - p, rho, I - Pi)`, the triple of the swapped ensemble.
    pub fn transposed(&self) -> Result<Self> {
        let pi = HermitianOperator::identity(self.dim()).sub(&self.pi);
        Self::new(1.0 - self.p, self.rho.clone(), pi)
    }

    /// `Y = -i rho^{1/2} [Pi, log2 rho] rho^{1/2}`; the mixing rate is `Tr(H Y)`.
    pub fn rate_operator(&self) -> Result<HermitianOperator> {
        self.functions.sandwiched_commutator(&self.pi)
    }
}

/// Encodes an ensemble as a triple.
pub fn ensemble_to_triple(e: &Ensemble) -> Result<EnsembleTriple> {
    let rho = e.average();
    let functions = StateFunctions::new(&rho)?;
    if !functions.support.is_full_rank() && e.p > 0.0 {
        let outside = HermitianOperator::identity(rho.dim()).sub(&functions.support.projector);
        let leak = e.rho1.op().sandwich(&outside).trace();
        if leak > TOL.triple_trace {
            return Err(Error::InconsistentEnsemble(format!(
                "rho1 has weight {leak:.3e} outside the support of the average"
            )));
        }
    }
    let pi = e.rho1.op().sandwich(&functions.inv_sqrt).scale(e.p);
    EnsembleTriple::new(e.p, rho, pi)
}

/// Decodes a triple with `0 < p < 1`.
pub fn triple_to_ensemble(t: &EnsembleTriple) -> Result<Ensemble> {
    let p = t.p;
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::Domain(format!("decoding needs 0 < p < 1, got {p}")));
    }
    let weighted = t.pi.sandwich(&t.functions.sqrt);
    let rho1 = weighted.scale(1.0 / p);
    let rho0 = t.rho.op().sub(&weighted).scale(1.0 / (1.0 - p));
    let min0 = rho0.spectrum()?.min();
    if min0 < -TOL.reconstructed_state {
        return Err(Error::Inadmissible(format!(
            "reconstructed rho0 has eigenvalue {min0:.3e}"
        )));
    }
    Ensemble::new(
        p,
        DensityMatrix::from_op_unchecked(rho0),
        DensityMatrix::from_op_unchecked(rho1),
    )
}

/// Mixing rate `dS/dt` at zero for Hamiltonian `h`.
pub fn mixing_rate(t: &EnsembleTriple, h: &HermitianOperator) -> Result<f64> {
    check_dim(t.dim(), h.dim())?;
    Ok(h.trace_product(&t.rate_operator()?))
}

/// Mixing rate straight from an ensemble: `-i p Tr(H [rho1, log2 rho])`.
pub fn mixing_rate_of_ensemble(e: &Ensemble, h: &HermitianOperator) -> Result<f64> {
    check_dim(e.dim(), h.dim())?;
    let functions = StateFunctions::new(&e.average())?;
    let c = commutator(e.rho1.op(), &functions.log2)?;
    let y = HermitianOperator::symmetrized(c * C64::new(0.0, -e.p));
    Ok(h.trace_product(&y))
}

/// Maximal mixing rate over `||H|| = 1` and a maximizing `H`.
pub fn max_mixing_rate(t: &EnsembleTriple) -> Result<(f64, HermitianOperator)> {
    let (h, value) = optimal_hamiltonian(&t.rate_operator()?)?;
    Ok((value, h))
}

/// Two-level spectrum `rho = l1 R + l2 (I - R)` with `l1 > l2`.
#[derive(Debug, Clone)]
pub struct BinarySpectrum {
    pub lambda1: f64,
    pub lambda2: f64,
    /// Multiplicity of `lambda1`.
    pub m: usize,
    /// Projector onto the `lambda1` eigenspace.
    pub r: HermitianOperator,
}

/// Splits the spectrum of `rho` into clusters; succeeds only for exactly two.
pub fn binary_spectrum(rho: &DensityMatrix) -> Result<BinarySpectrum> {
    let spec = rho.op().spectrum()?;
    let v = &spec.values;
    let mut breaks = Vec::new();
    for k in 1..v.len() {
        if v[k] - v[k - 1] > TOL.cluster_spread {
            breaks.push(k);
        }
    }
    if breaks.len() != 1 {
        return Err(Error::NotBinary {
            clusters: breaks.len() + 1,
        });
    }
    let split = breaks[0];
    if v[split] - v[split - 1] <= TOL.cluster_gap {
        return Err(Error::NotBinary { clusters: 1 });
    }
    let n = v.len();
    let lambda2 = v[..split].iter().sum::<f64>() / split as f64;
    let lambda1 = v[split..].iter().sum::<f64>() / (n - split) as f64;
    Ok(BinarySpectrum {
        lambda1,
        lambda2,
        m: n - split,
        r: spec.projector_indices(split..n),
    })
}

/// Both sides of the binary-spectrum identity
/// `i rho^{1/2}[Pi, log rho] rho^{1/2} = i log(l1/l2) sqrt(l1 l2) [Pi, R]`.
pub fn binary_sandwich_identity(t: &EnsembleTriple) -> Result<(HermitianOperator, HermitianOperator)> {
    let bin = binary_spectrum(&t.rho)?;
    let lhs = t.rate_operator()?.scale(-1.0);
    let factor = (bin.lambda1 / bin.lambda2).log2() * (bin.lambda1 * bin.lambda2).sqrt();
    let rhs = HermitianOperator::symmetrized(commutator(&t.pi, &bin.r)? * C64::new(0.0, factor));
    Ok((lhs, rhs))
}

/// `(||[Pi, R]||_1, 2 sqrt(Tr(Pi R) Tr(Pi R⊥)))`.
pub fn holder_commutator_bound(pi: &HermitianOperator, r: &HermitianOperator) -> Result<(f64, f64)> {
    let lhs = trace_norm(&HermitianOperator::from_anti_hermitian(&commutator(pi, r)?)?)?;
    let in_range = pi.trace_product(r);
    let outside = pi.trace() - in_range;
    let rhs = 2.0 * (in_range.max(0.0) * outside.max(0.0)).sqrt();
    Ok((lhs, rhs))
}

/// Orthonormal bases of the range of a projector and of its complement.
fn range_split(r: &HermitianOperator) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let spec = r.spectrum()?;
    let n = spec.dim();
    let split = spec.values.iter().filter(|&&v| v < 0.5).count();
    let inside = spec.vectors.columns(split, n - split).into_owned();
    let outside = spec.vectors.columns(0, split).into_owned();
    Ok((inside, outside))
}

/// Projector (in the full space) onto the eigenvectors of the compressed
/// block `V^dag P V` whose eigenvalues sit at 0 or 1.
fn extremal_block_projector(p: &HermitianOperator, basis: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = p.dim();
    if basis.ncols() == 0 {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let block = HermitianOperator::symmetrized(basis.adjoint() * p.matrix() * basis);
    let spec = block.spectrum()?;
    let mut q = ComplexMatrix::zeros(n, n);
    for (k, &v) in spec.values.iter().enumerate() {
        if v <= TOL.block_split || v >= 1.0 - TOL.block_split {
            let u: ComplexVector = basis * spec.vector(k);
            q += &u * u.adjoint();
        }
    }
    Ok(q)
}

/// For a projector `P`: drops the blocks of `P` that commute with `R`
/// (compressions with eigenvalues 0 or 1), keeping the coupled core.
fn reduce_projector(
    p: &HermitianOperator,
    inside: &ComplexMatrix,
    outside: &ComplexMatrix,
) -> Result<HermitianOperator> {
    let qa = extremal_block_projector(p, inside)?;
    let qb = extremal_block_projector(p, outside)?;
    let pm = p.matrix();
    let removed = &qa * pm * &qa + &qb * pm * &qb;
    Ok(HermitianOperator::symmetrized(pm - removed))
}

/// Given `0 <= Pi <= I` and a rank-`m` projector `R`, returns `Pi'` with
/// `0 <= Pi' <= Pi`, `[Pi', R] = [Pi, R]` and `Tr Pi' <= m`.
///
/// `Pi` is split into spectral layers `sum_k (mu_k - mu_{k+1}) P_k` with
/// `P_k` the projector onto its top `k` eigenvectors; each layer is
/// reduced separately and the results are summed with the same weights.
pub fn canonical_reduce(pi: &HermitianOperator, r: &HermitianOperator) -> Result<HermitianOperator> {
    check_dim(pi.dim(), r.dim())?;
    let n = pi.dim();
    let (inside, outside) = range_split(r)?;
    let spec = pi.spectrum()?;
    let mu: Vec<f64> = spec.values.iter().rev().map(|v| v.clamp(0.0, 1.0)).collect();
    let mut reduced = HermitianOperator::zeros(n);
    for k in 1..=n {
        let next = if k < n { mu[k] } else { 0.0 };
        let weight = mu[k - 1] - next;
        if weight <= 0.0 {
            continue;
        }
        let layer = spec.projector_indices(n - k..n);
        reduced = reduced.add(&reduce_projector(&layer, &inside, &outside)?.scale(weight));
    }
    Ok(reduced)
}

/// How well a candidate `Pi'` meets the three canonical conditions.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalCheck {
    /// Smallest eigenvalue of `Pi'` (condition i, lower side).
    pub min_eig_reduced: f64,
    /// Smallest eigenvalue of `Pi - Pi'` (condition i, upper side).
    pub min_eig_gap: f64,
    /// `max |[Pi, R] - [Pi', R]|` entrywise (condition ii).
    pub commutator_deviation: f64,
    /// `Tr Pi' - rank R` (condition iii, must be <= 0).
    pub trace_excess: f64,
}

impl CanonicalCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.min_eig_reduced >= -tol
            && self.min_eig_gap >= -tol
            && self.commutator_deviation <= tol
            && self.trace_excess <= tol
    }
}

pub fn check_canonical(
    pi: &HermitianOperator,
    reduced: &HermitianOperator,
    r: &HermitianOperator,
) -> Result<CanonicalCheck> {
    let before = commutator(pi, r)?;
    let after = commutator(reduced, r)?;
    let commutator_deviation = (before - after).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    Ok(CanonicalCheck {
        min_eig_reduced: reduced.spectrum()?.min(),
        min_eig_gap: pi.sub(reduced).spectrum()?.min(),
        commutator_deviation,
        trace_excess: reduced.trace() - r.trace().round(),
    })
}

/// `g(x1, x2) = 2 log2(x1/x2) sqrt(x1 x2 (q - x2)(x1 - q)) / (x1 - x2)` on
/// `0 <= x2 <= q <= x1 <= 1`, `q <= 1/2`; bounded by `6 q |log2 q|`.
pub fn g_function(x1: f64, x2: f64, q: f64) -> Result<f64> {
    let in_domain = (0.0..=0.5).contains(&q) && 0.0 <= x2 && x2 <= q && q <= x1 && x1 <= 1.0;
    if !in_domain {
        return Err(Error::Domain(format!(
            "g needs 0 <= x2 <= q <= x1 <= 1 and q <= 1/2, got x1={x1}, x2={x2}, q={q}"
        )));
    }
    if x1 == x2 {
        // forces x1 = x2 = q; both vanishing factors win
        return Ok(0.0);
    }
    if x2 == 0.0 || x1 == q || x2 == q {
        return Ok(0.0);
    }
    let root = (x1 * x2 * (q - x2) * (x1 - q)).sqrt() / (x1 - x2);
    Ok(2.0 * (x1 / x2).log2() * root)
}

/// `6 q |log2 q|`.
pub fn g_bound(q: f64) -> f64 {
    if q <= 0.0 {
        0.0
    } else {
        6.0 * q * q.log2().abs()
    }
}

/// Maximal mixing rate of a binary-spectrum triple against `6 h2(p)`.
#[derive(Debug, Clone, Copy)]
pub struct SimBinaryBound {
    pub rate: f64,
    pub bound: f64,
}

impl SimBinaryBound {
    pub fn holds(&self) -> bool {
        self.rate <= self.bound + 1e-12
    }
}

pub fn sim_binary_bound(t: &EnsembleTriple) -> Result<SimBinaryBound> {
    binary_spectrum(&t.rho)?;
    let (rate, _) = if t.p > 0.5 {
        max_mixing_rate(&t.transposed()?)?
    } else {
        max_mixing_rate(t)?
    };
    Ok(SimBinaryBound {
        rate,
        bound: 6.0 * binary_entropy(t.p),
    })
}

/// Decomposition `rho_A ⊗ I/B = B^{-2} rho_AB + (1 - B^{-2}) mu_AB` and the
/// triple of the ensemble `{(1 - B^{-2}, mu_AB), (B^{-2}, rho_AB)}`.
#[derive(Debug, Clone)]
pub struct SieReduction {
    pub triple: EnsembleTriple,
    pub tau: DensityMatrix,
    pub mu: DensityMatrix,
    /// Smallest eigenvalue of `mu_AB` before clipping.
    pub mu_min_eigenvalue: f64,
}

pub fn sie_reduction(rho_ab: &DensityMatrix, dims: (usize, usize)) -> Result<SieReduction> {
    let (da, db) = dims;
    if db < 2 {
        return Err(Error::Domain(format!("need B >= 2, got {db}")));
    }
    let rho_a = partial_trace(rho_ab.op(), dims, Keep::First)?;
    let tau_op = rho_a.kron(&HermitianOperator::identity(db).scale(1.0 / db as f64));
    let tau = DensityMatrix::from_op_unchecked(tau_op);
    let p = 1.0 / (db * db) as f64;
    let mu_op = tau.op().sub(&rho_ab.op().scale(p)).scale(1.0 / (1.0 - p));
    let mu_min_eigenvalue = mu_op.spectrum()?.min();
    if mu_min_eigenvalue < -TOL.lemma_positivity {
        return Err(Error::InvariantViolation(format!(
            "mu_AB has eigenvalue {mu_min_eigenvalue:.3e} (dims {da}x{db})"
        )));
    }
    let functions = StateFunctions::new(&tau)?;
    let pi = rho_ab.op().sandwich(&functions.inv_sqrt).scale(p);
    let triple = EnsembleTriple::new(p, tau.clone(), pi)?;
    Ok(SieReduction {
        triple,
        tau,
        mu: DensityMatrix::from_op_unchecked(mu_op),
        mu_min_eigenvalue,
    })
}

/// `-i Tr(H [rho_AB, log2 tau_AB])` with `tau_AB = rho_A ⊗ I/B`.
pub fn reduced_entangling_expression(
    rho_ab: &DensityMatrix,
    dims: (usize, usize),
    h: &HermitianOperator,
) -> Result<f64> {
    let rho_a = partial_trace(rho_ab.op(), dims, Keep::First)?;
    let tau = DensityMatrix::from_op_unchecked(
        rho_a.kron(&HermitianOperator::identity(dims.1).scale(1.0 / dims.1 as f64)),
    );
    let functions = StateFunctions::new(&tau)?;
    let c = commutator(rho_ab.op(), &functions.log2)?;
    Ok(h.trace_product(&HermitianOperator::symmetrized(c * (-I))))
}

/// Embeds an ensemble on `C^D` into an entangling problem with
/// `a = 1, A = D, B = 2, b = D`: the state
/// `sqrt(1-p) |0>_B |phi0> + sqrt(p) |1>_B |phi1>` with
/// `phi_alpha = (rho_alpha^{1/2} ⊗ I)|I>`, and `H~ = H ⊗ |1><1|_B`.
pub fn ensemble_to_entangling_embedding(
    e: &Ensemble,
    h: &HermitianOperator,
) -> Result<(AssistedState, HermitianOperator)> {
    check_dim(e.dim(), h.dim())?;
    let d = e.dim();
    let dims = AncillaDims {
        a: 1,
        alice: d,
        bob: 2,
        b: d,
    };
    let roots = [
        crate::linalg::matrix_sqrt(&e.rho0)?,
        crate::linalg::matrix_sqrt(&e.rho1)?,
    ];
    let weights = [(1.0 - e.p).sqrt(), e.p.sqrt()];
    let mut amps = ComplexVector::zeros(dims.total());
    for alpha in 0..2 {
        let root = roots[alpha].matrix();
        for ia in 0..d {
            for ib in 0..d {
                amps[(ia * 2 + alpha) * d + ib] = root[(ia, ib)] * weights[alpha];
            }
        }
    }
    let norm = amps.norm();
    let state = AssistedState::new(dims, amps.unscale(norm))?;
    let h_tilde = h.kron(&HermitianOperator::from_real_diagonal(&[0.0, 1.0]));
    Ok((state, h_tilde))
}
