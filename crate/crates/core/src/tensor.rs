//! Dense symmetric order-3 tensors.
//!
//! Entries are stored as a flat `n*n*n` array in row-major `(i, j, k)` order.
//! Every constructor symmetrizes its input by averaging over the six index
//! permutations, so finite-difference tensors with roundoff asymmetry are
//! accepted as-is.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::spectral::Subspace;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor3 {
    dim: usize,
    entries: Vec<f64>,
}

impl SymTensor3 {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![0.0; dim * dim * dim] }
    }

    /// Builds a tensor from raw row-major entries and symmetrizes it.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim * dim, found: entries.len() });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("tensor entries"));
        }
        let mut t = Self { dim, entries };
        t.symmetrize();
        Ok(t)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut entries = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    entries.push(f(i, j, k));
                }
            }
        }
        Self::new(dim, entries)
    }

    /// `v ⊗ v ⊗ v`.
    pub fn rank_one(v: &DVector<f64>) -> Self {
        let n = v.len();
        let mut entries = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    entries.push(v[i] * v[j] * v[k]);
                }
            }
        }
        Self { dim: n, entries }
    }

    /// Assembles a tensor from entries already known to be symmetric.
    pub(crate) fn from_symmetric_unchecked(dim: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim * dim);
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.entries[self.idx(i, j, k)]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    fn symmetrize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let perms = [
                        self.idx(i, j, k),
                        self.idx(i, k, j),
                        self.idx(j, i, k),
                        self.idx(j, k, i),
                        self.idx(k, i, j),
                        self.idx(k, j, i),
                    ];
                    let mean = perms.iter().map(|&p| self.entries[p]).sum::<f64>() / 6.0;
                    for p in perms {
                        self.entries[p] = mean;
                    }
                }
            }
        }
    }

    /// Largest absolute difference between an entry and any of its index permutations.
    pub fn asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    for w in [self.get(i, k, j), self.get(j, i, k), self.get(j, k, i), self.get(k, i, j), self.get(k, j, i)] {
                        worst = worst.max((v - w).abs());
                    }
                }
            }
        }
        worst
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: len });
        }
        Ok(())
    }

    /// The multilinear form `T(u, v, w) = Σ T_ijk u_i v_j w_k`.
    pub fn contract3(&self, u: &DVector<f64>, v: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
        self.check_len(u.len())?;
        self.check_len(v.len())?;
        self.check_len(w.len())?;
        let n = self.dim;
        let mut total = 0.0;
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            let mut acc_i = 0.0;
            for j in 0..n {
                let row = &self.entries[self.idx(i, j, 0)..self.idx(i, j, 0) + n];
                let dot: f64 = row.iter().zip(w.iter()).map(|(t, wk)| t * wk).sum();
                acc_i += v[j] * dot;
            }
            total += u[i] * acc_i;
        }
        Ok(total)
    }

    /// `T(u, u, u)`.
    pub fn cubic_form(&self, u: &DVector<f64>) -> Result<f64> {
        self.contract3(u, u, u)
    }

    /// The matrix `T(u, I, I)` with entries `Σ_i T_ijk u_i`.
    pub fn contract1(&self, u: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check_len(u.len())?;
        let n = self.dim;
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    out[(j, k)] += u[i] * self.get(i, j, k);
                }
            }
        }
        Ok(out)
    }

    /// The vector `T(I, u, u)`.
    pub fn contract2(&self, u: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(u.len())?;
        let m = self.contract1(u)?;
        Ok(m * u)
    }

    /// `T(P, P, P)` where `P` is the orthogonal projector onto `subspace`.
    pub fn project(&self, subspace: &Subspace) -> Result<SymTensor3> {
        self.check_len(subspace.ambient_dim())?;
        if subspace.is_empty() {
            return Ok(Self::zeros(self.dim));
        }
        let p = subspace.projector();
        Ok(self.multilinear(&p))
    }

    /// Applies the same matrix along all three modes: `T(M, M, M)`.
    fn multilinear(&self, m: &DMatrix<f64>) -> SymTensor3 {
        let n = self.dim;
        // [a, b, c] <- Σ_i M_ia T[i, b, c]
        let mode = |src: &[f64], out: &mut [f64], axis: usize| {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let mut s = 0.0;
                        for i in 0..n {
                            let mij = m[(i, a)];
                            if mij == 0.0 {
                                continue;
                            }
                            let src_idx = match axis {
                                0 => (i * n + b) * n + c,
                                1 => (b * n + i) * n + c,
                                _ => (b * n + c) * n + i,
                            };
                            s += mij * src[src_idx];
                        }
                        let dst_idx = match axis {
                            0 => (a * n + b) * n + c,
                            1 => (b * n + a) * n + c,
                            _ => (b * n + c) * n + a,
                        };
                        out[dst_idx] = s;
                    }
                }
            }
        };
        let mut buf_a = vec![0.0; n * n * n];
        let mut buf_b = vec![0.0; n * n * n];
        mode(&self.entries, &mut buf_a, 0);
        mode(&buf_a, &mut buf_b, 1);
        mode(&buf_b, &mut buf_a, 2);
        let mut t = Self { dim: n, entries: buf_a };
        // Mode products with a symmetric M keep T symmetric up to roundoff; remove it.
        t.symmetrize();
        t
    }

    /// `‖T‖_F = sqrt(Σ T_ijk²)`.
    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> SymTensor3 {
        Self { dim: self.dim, entries: self.entries.iter().map(|v| v * s).collect() }
    }

    pub fn sub(&self, other: &SymTensor3) -> Result<SymTensor3> {
        self.check_len(other.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| *v == 0.0)
    }
}
