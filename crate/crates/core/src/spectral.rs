//! Symmetric eigendecomposition in descending order and eigensubspaces.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Default relative tolerance for treating an eigenvalue as zero.
pub const DEFAULT_NULL_TOL: f64 = 1e-8;

/// Maximum relative asymmetry accepted by [`eig_sym`].
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Eigenpairs of a symmetric matrix with `λ1 ≥ λ2 ≥ … ≥ λn`.
#[derive(Debug, Clone)]
pub struct EigenDecomp {
    eigenvalues: DVector<f64>,
    /// Column `i` is the unit eigenvector for `eigenvalues[i]`.
    eigenvectors: DMatrix<f64>,
}

impl EigenDecomp {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> DVector<f64> {
        self.eigenvectors.column(i).into_owned()
    }

    /// `λn`, or 0 for an empty matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.as_slice().last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().next().copied().unwrap_or(0.0)
    }

    /// `Σ λ_i v_i v_iᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let v = &self.eigenvectors;
        v * DMatrix::from_diagonal(&self.eigenvalues) * v.transpose()
    }

    /// Span of the eigenvectors with index `i..n` in descending order.
    pub fn suffix(&self, i: usize) -> Subspace {
        let n = self.dim();
        Subspace { dim: n, basis: self.eigenvectors.columns(i, n - i).into_owned() }
    }

    fn select(&self, keep: impl Fn(f64) -> bool) -> Subspace {
        let n = self.dim();
        let cols: Vec<DVector<f64>> =
            (0..n).filter(|&i| keep(self.eigenvalues[i])).map(|i| self.eigenvector(i)).collect();
        if cols.is_empty() {
            return Subspace::empty(n);
        }
        Subspace { dim: n, basis: DMatrix::from_columns(&cols) }
    }
}

/// Eigendecomposition of a symmetric matrix, sorted descending.
///
/// The input is symmetrized as `(M + Mᵀ)/2`; asymmetry above [`SYMMETRY_TOL`]
/// relative to `max(1, ‖M‖_F)` is rejected.
pub fn eig_sym(m: &DMatrix<f64>) -> Result<EigenDecomp> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("matrix entries"));
    }
    let scale = m.norm().max(1.0);
    let asym = (m - m.transpose()).amax() / scale;
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(EigenDecomp { eigenvalues: DVector::zeros(0), eigenvectors: DMatrix::zeros(0, 0) });
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        // Fix the sign so the largest-magnitude component is positive.
        let pivot = col.iamax();
        if col[pivot] < 0.0 {
            col.neg_mut();
        }
        eigenvectors.set_column(dst, &col);
    }
    Ok(EigenDecomp { eigenvalues, eigenvectors })
}

/// `S_τ(M) = span{v_i | λ_i ≤ τ + tol}`.
pub fn subspace_at_most(e: &EigenDecomp, tau: f64, tol: f64) -> Subspace {
    e.select(|l| l <= tau + tol)
}

/// Span of eigenvectors with `|λ_i| ≤ tol · max(1, |λ1|, |λn|)`.
pub fn null_space(e: &EigenDecomp, tol: f64) -> Subspace {
    let scale = 1.0_f64.max(e.max_eigenvalue().abs()).max(e.min_eigenvalue().abs());
    e.select(|l| l.abs() <= tol * scale)
}

/// A linear subspace of `R^n` given by an orthonormal basis (possibly empty).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    dim: usize,
    /// `n × k`, orthonormal columns.
    basis: DMatrix<f64>,
}

impl Subspace {
    pub fn empty(dim: usize) -> Self {
        Self { dim, basis: DMatrix::zeros(dim, 0) }
    }

    pub fn full(dim: usize) -> Self {
        Self { dim, basis: DMatrix::identity(dim, dim) }
    }

    /// Wraps a basis whose columns must already be orthonormal (checked to 1e-10).
    pub fn from_orthonormal(basis: DMatrix<f64>) -> Result<Self> {
        let gram = basis.transpose() * &basis;
        let k = basis.ncols();
        if (gram - DMatrix::<f64>::identity(k, k)).amax() > 1e-10 {
            return Err(Error::InvalidConfig("subspace basis is not orthonormal".into()));
        }
        Ok(Self { dim: basis.nrows(), basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Number of basis vectors `k`.
    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.rank() == 0
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// `P = Σ b_i b_iᵀ`.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    pub fn project_vector(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.basis * (self.basis.transpose() * v)
    }

    /// `Σ c_i b_i` for coefficients in the subspace's own coordinates.
    pub fn embed(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        &self.basis * coeffs
    }
}
