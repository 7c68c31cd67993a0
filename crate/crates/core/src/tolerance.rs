//! Numerical thresholds shared across the crate.
//!
//! Every comparison against a fixed threshold goes through [`Tolerances`],
//! so a tightened or relaxed run only has to change one record.

/// Tolerance record. [`TOL`] holds the defaults used by every operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity check at construction, relative to `1 + max|M|`.
    pub hermitian: f64,
    /// Smallest admissible eigenvalue of a density matrix.
    pub density_min_eigenvalue: f64,
    /// Allowed deviation of a density matrix trace from one.
    pub density_trace: f64,
    /// Eigenvalues at or below this are outside the support of a state.
    pub rank_cutoff: f64,
    /// Relative reconstruction error accepted from the eigensolver.
    pub eigen_reconstruction: f64,
    /// Unit norm of pure states.
    pub state_norm: f64,
    /// Admissibility of `0 <= Pi <= I`.
    pub contraction: f64,
    /// `Tr(Pi rho) = p` in an ensemble triple.
    pub triple_trace: f64,
    /// Negative eigenvalue tolerated in a reconstructed `rho_0`.
    pub reconstructed_state: f64,
    /// Lemma-guaranteed positivity; anything below is an implementation bug.
    pub lemma_positivity: f64,
    /// Largest in-cluster eigenvalue spread for a binary spectrum.
    pub cluster_spread: f64,
    /// Smallest gap separating the two clusters of a binary spectrum.
    pub cluster_gap: f64,
    /// Eigenvalues of a compressed block this close to 0 or 1 are "extremal".
    pub block_split: f64,
    /// Tracelessness check on the K-step generator.
    pub traceless: f64,
    /// Largest accepted duality gap at a Pi-step.
    pub duality_gap: f64,
    /// Constraint `Tr(Pi rho) = p` at a Pi-step.
    pub pi_constraint: f64,
    /// Sub-step monotonicity slack inside a restart.
    pub ascent_slack: f64,
}

pub const TOL: Tolerances = Tolerances {
    hermitian: 1e-12,
    density_min_eigenvalue: -1e-10,
    density_trace: 1e-10,
    rank_cutoff: 1e-12,
    eigen_reconstruction: 1e-9,
    state_norm: 1e-10,
    contraction: 1e-10,
    triple_trace: 1e-9,
    reconstructed_state: 1e-8,
    lemma_positivity: 1e-6,
    cluster_spread: 1e-9,
    cluster_gap: 1e-6,
    block_split: 1e-9,
    traceless: 1e-9,
    duality_gap: 1e-6,
    pi_constraint: 1e-8,
    ascent_slack: 1e-9,
};

impl Default for Tolerances {
    fn default() -> Self {
        TOL
    }
}
