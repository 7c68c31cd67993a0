use thiserror::Error;

/// Errors raised by the rate functionals, lemma checks and the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("not a density matrix: min eigenvalue {min_eigenvalue:.3e}, trace {trace:.12}")]
    NotDensity { min_eigenvalue: f64, trace: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} does not factor as {first} x {second}")]
    NonFactorable {
        dim: usize,
        first: usize,
        second: usize,
    },

    #[error("eigensolver failed to converge (dim {dim}, residual {residual:.3e})")]
    EigenFailure { dim: usize, residual: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("state is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    #[error("inconsistent ensemble: {0}")]
    InconsistentEnsemble(String),

    #[error("inadmissible triple: {0}")]
    Inadmissible(String),

    #[error("spectrum is not binary: found {clusters} eigenvalue clusters")]
    NotBinary { clusters: usize },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
