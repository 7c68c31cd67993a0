//! Dense complex Hermitian linear algebra.
//!
//! Everything downstream is phrased in terms of [`HermitianOperator`] and
//! [`DensityMatrix`]. Matrix functions go through [`Spectrum`], which
//! keeps a fast path for diagonal inputs: the large-`d` entangling states
//! have diagonal reduced states of dimension ~10^3 and must not pay for a
//! dense reconstruction.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::TOL;

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };

/// A dense Hermitian matrix. The stored form is always `(M + M^dag) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Validates squareness, finiteness and Hermiticity, then symmetrizes.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = matrix.nrows();
        let mut scale = 0.0f64;
        let mut deviation = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                scale = scale.max(matrix[(i, j)].norm());
                deviation = deviation.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if deviation > TOL.hermitian * (1.0 + scale) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(matrix))
    }

    /// Symmetrizes without the Hermiticity check. Used for products that are
    /// Hermitian by construction and only carry rounding asymmetry.
    pub(crate) fn symmetrized(matrix: ComplexMatrix) -> Self {
        let adj = matrix.adjoint();
        let matrix = (matrix + adj).unscale(2.0);
        Self { matrix }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut matrix = ComplexMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            matrix[(i, i)] = C64::new(d, 0.0);
        }
        Self { matrix }
    }

    /// Real symmetric matrix from row-major rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut matrix = ComplexMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                matrix[(i, j)] = C64::new(x, 0.0);
            }
        }
        Self::new(matrix)
    }

    /// `|v><v|`.
    pub fn outer(v: &ComplexVector) -> Self {
        Self {
            matrix: v * v.adjoint(),
        }
    }

    /// `i * A` for an anti-Hermitian `A`, e.g. a commutator of Hermitians.
    pub fn from_anti_hermitian(a: &ComplexMatrix) -> Result<Self> {
        Self::new(a * I)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `Re Tr(self * other)`; the trace of a product of Hermitians is real.
    pub fn trace_product(&self, other: &HermitianOperator) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for k in 0..n {
                acc += (self.matrix[(i, k)] * other.matrix[(k, i)]).re;
            }
        }
        acc
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            matrix: self.matrix.scale(s),
        }
    }

    pub fn add(&self, other: &HermitianOperator) -> Self {
        Self {
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &HermitianOperator) -> Self {
        Self {
            matrix: &self.matrix - &other.matrix,
        }
    }

    /// `s * self * s`, Hermitian for Hermitian `s`.
    pub fn sandwich(&self, s: &HermitianOperator) -> Self {
        Self::symmetrized(&s.matrix * &self.matrix * &s.matrix)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &HermitianOperator) -> Self {
        Self {
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        for j in 0..n {
            for i in 0..n {
                if i != j && self.matrix[(i, j)] != ZERO {
                    return false;
                }
            }
        }
        true
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        eigendecompose(self)
    }

    /// Applies the operator to a vector.
    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        &self.matrix * v
    }
}

/// A density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        let min_eigenvalue = op.spectrum()?.min();
        if min_eigenvalue < TOL.density_min_eigenvalue || (trace - 1.0).abs() > TOL.density_trace
        {
            return Err(Error::NotDensity {
                min_eigenvalue,
                trace,
            });
        }
        Ok(Self { op })
    }

    /// Divides by the trace first; fails for non-positive operators.
    pub fn normalized(op: HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        if trace <= 0.0 || !trace.is_finite() {
            return Err(Error::Degenerate(format!("cannot normalize trace {trace}")));
        }
        Self::new(op.scale(1.0 / trace))
    }

    /// For operators already known to be states up to rounding.
    pub(crate) fn from_op_unchecked(op: HermitianOperator) -> Self {
        Self { op }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            op: HermitianOperator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn from_diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(HermitianOperator::from_real_diagonal(probabilities))
    }

    /// `|v><v| / <v|v>`.
    pub fn pure(v: &ComplexVector) -> Result<Self> {
        Self::normalized(HermitianOperator::outer(v))
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn into_op(self) -> HermitianOperator {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn kron(&self, other: &DensityMatrix) -> Self {
        Self {
            op: self.op.kron(&other.op),
        }
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        Ok(shannon_entropy(&self.op.spectrum()?.values))
    }
}

/// Eigen-decomposition `M = U diag(values) U^dag` with ascending values.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
    /// Set when the input was diagonal and `vectors` is a permutation.
    diagonal_order: Option<Vec<usize>>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> ComplexVector {
        self.vectors.column(k).into_owned()
    }

    /// `U diag(f(values)) U^dag`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        self.map_indexed(|_, x| f(x))
    }

    /// Like [`Spectrum::map`] with access to the eigenvalue index.
    pub fn map_indexed(&self, f: impl Fn(usize, f64) -> f64) -> HermitianOperator {
        let n = self.dim();
        if let Some(order) = &self.diagonal_order {
            let mut diag = vec![0.0; n];
            for (k, &i) in order.iter().enumerate() {
                diag[i] = f(k, self.values[k]);
            }
            return HermitianOperator::from_real_diagonal(&diag);
        }
        let mut scaled = self.vectors.clone();
        for k in 0..n {
            let fk = f(k, self.values[k]);
            scaled.column_mut(k).scale_mut(fk);
        }
        HermitianOperator::symmetrized(scaled * self.vectors.adjoint())
    }

    /// Orthogonal projector onto the eigenvectors selected by `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> HermitianOperator {
        self.map(|x| if keep(x) { 1.0 } else { 0.0 })
    }

    /// Projector onto the eigenvectors with index in `range`.
    pub fn projector_indices(&self, range: std::ops::Range<usize>) -> HermitianOperator {
        self.map_indexed(|k, _| if range.contains(&k) { 1.0 } else { 0.0 })
    }

    /// Operator-norm residual `||U diag U^dag - M|| / max(||M||, 1e-300)`.
    pub fn reconstruction_error(&self, m: &HermitianOperator) -> Result<f64> {
        let rebuilt = self.map(|x| x);
        let diff = rebuilt.sub(m);
        let denom = operator_norm(m)?.max(1e-300);
        Ok(operator_norm(&diff)? / denom)
    }
}

/// Hermitian eigen-decomposition with ascending eigenvalues.
pub fn eigendecompose(m: &HermitianOperator) -> Result<Spectrum> {
    let n = m.dim();
    if m.is_diagonal() {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| m.matrix[(a, a)].re.total_cmp(&m.matrix[(b, b)].re));
        let values = order.iter().map(|&i| m.matrix[(i, i)].re).collect();
        let mut vectors = ComplexMatrix::zeros(n, n);
        for (k, &i) in order.iter().enumerate() {
            vectors[(i, k)] = ONE;
        }
        return Ok(Spectrum {
            values,
            vectors,
            diagonal_order: Some(order),
        });
    }
    let eig = m
        .matrix
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 10_000 * n.max(1))
        .ok_or(Error::EigenFailure {
            dim: n,
            residual: f64::INFINITY,
        })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure {
            dim: n,
            residual: f64::NAN,
        });
    }
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(src));
    }
    Ok(Spectrum {
        values,
        vectors,
        diagonal_order: None,
    })
}

/// `||m||_1 = sum |eigenvalues|`.
pub fn trace_norm(m: &HermitianOperator) -> Result<f64> {
    Ok(m.spectrum()?.values.iter().map(|v| v.abs()).sum())
}

/// `||m|| = max |eigenvalue|`.
pub fn operator_norm(m: &HermitianOperator) -> Result<f64> {
    let s = m.spectrum()?;
    Ok(s.min().abs().max(s.max().abs()))
}

/// Which eigendirections of a state carry weight.
#[derive(Debug, Clone)]
pub struct Support {
    pub dim: usize,
    pub rank: usize,
    pub cutoff: f64,
    /// Projector onto the eigenvectors with eigenvalue above `cutoff`.
    pub projector: HermitianOperator,
}

impl Support {
    pub fn is_full_rank(&self) -> bool {
        self.rank == self.dim
    }
}

/// `log2` on the support of `rho`; directions at or below `rank_cutoff` map
/// to zero and are reported through the returned [`Support`].
pub fn matrix_log2(rho: &DensityMatrix, rank_cutoff: f64) -> Result<(HermitianOperator, Support)> {
    let spec = rho.op().spectrum()?;
    log2_from_spectrum(&spec, rank_cutoff)
}

pub(crate) fn log2_from_spectrum(
    spec: &Spectrum,
    rank_cutoff: f64,
) -> Result<(HermitianOperator, Support)> {
    if rank_cutoff <= 0.0 {
        return Err(Error::Domain(format!("rank cutoff must be positive, got {rank_cutoff}")));
    }
    let rank = spec.values.iter().filter(|&&v| v > rank_cutoff).count();
    if rank == 0 {
        return Err(Error::Degenerate(
            "all eigenvalues are below the rank cutoff".into(),
        ));
    }
    let log = spec.map(|v| if v > rank_cutoff { v.log2() } else { 0.0 });
    let support = Support {
        dim: spec.dim(),
        rank,
        cutoff: rank_cutoff,
        projector: spec.projector(|v| v > rank_cutoff),
    };
    Ok((log, support))
}

/// Positive square root. Eigenvalues at rounding level are set to zero so
/// projectors map to themselves.
pub fn matrix_sqrt(rho: &DensityMatrix) -> Result<HermitianOperator> {
    let spec = rho.op().spectrum()?;
    let floor = 64.0 * f64::EPSILON * spec.max().abs().max(1.0);
    Ok(spec.map(|v| if v > floor { v.sqrt() } else { 0.0 }))
}

/// `rho^{-1/2}` on the support, zero on the kernel.
pub fn matrix_inv_sqrt_on_support(rho: &DensityMatrix, rank_cutoff: f64) -> Result<HermitianOperator> {
    let spec = rho.op().spectrum()?;
    Ok(spec.map(|v| if v > rank_cutoff { 1.0 / v.sqrt() } else { 0.0 }))
}

/// `AB - BA`.
pub fn commutator(a: &HermitianOperator, b: &HermitianOperator) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(&a.matrix * &b.matrix - &b.matrix * &a.matrix)
}

/// Which tensor factor survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Partial trace over one factor of a `dims.0 x dims.1` bipartition.
pub fn partial_trace(
    m: &HermitianOperator,
    dims: (usize, usize),
    keep: Keep,
) -> Result<HermitianOperator> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != m.dim() {
        return Err(Error::NonFactorable {
            dim: m.dim(),
            first: da,
            second: db,
        });
    }
    let src = &m.matrix;
    let out = match keep {
        Keep::First => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| src[(i * db + k, j * db + k)]).sum()
        }),
        Keep::Second => ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| src[(k * db + i, k * db + j)]).sum()
        }),
    };
    Ok(HermitianOperator::symmetrized(out))
}

/// Maximizer of `Tr(H x)` over `||H|| = 1`: `H = sign(x)` on the support of
/// `x`, `+1` on its kernel. Returns `(H, Tr|x|)`.
pub fn optimal_hamiltonian(x: &HermitianOperator) -> Result<(HermitianOperator, f64)> {
    let spec = x.spectrum()?;
    let scale = spec.min().abs().max(spec.max().abs());
    if scale == 0.0 {
        return Ok((HermitianOperator::identity(x.dim()), 0.0));
    }
    let kernel = 1e-14 * scale;
    let h = spec.map(|v| if v < -kernel { -1.0 } else { 1.0 });
    let value = spec.values.iter().map(|v| v.abs()).sum();
    Ok((h, value))
}

/// Shannon entropy in bits of a probability vector; entries at or below the
/// default rank cutoff contribute nothing.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > TOL.rank_cutoff)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Binary entropy `h2(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_entropy(&[p, 1.0 - p])
}

/// `e^{iHt}` via the spectrum of `H`.
pub fn evolution_operator(h: &HermitianOperator, t: f64) -> Result<ComplexMatrix> {
    let spec = h.spectrum()?;
    let n = spec.dim();
    let mut scaled = spec.vectors.clone();
    for k in 0..n {
        let phase = C64::from_polar(1.0, spec.values[k] * t);
        scaled.column_mut(k).iter_mut().for_each(|z| *z *= phase);
    }
    Ok(scaled * spec.vectors.adjoint())
}
