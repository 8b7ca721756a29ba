//! Cubic-regularized Newton steps and the second-order progress measure `μ`.
//!
//! The subproblem
//!
//! ```text
//! min_s  gᵀs + ½ sᵀHs + (R/6)‖s‖³
//! ```
//!
//! is solved in the eigenbasis of `H`. A global minimizer satisfies
//! `(H + (R r/2) I) s = −g` with `r = ‖s‖` and `H + (R r/2) I ⪰ 0`, so the
//! solver looks for the unique root of `‖s(r)‖ = r` on
//! `r ≥ max(0, −2λn/R)`. When `g` has no weight on the bottom eigenspace and
//! the root sits at the left endpoint (the hard case), a bottom eigenvector
//! component is added to reach the required radius.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::poly::{check_point, DerivOrder, DerivativeBundle, Objective};
use crate::spectral::eig_sym;

const MAX_ROOT_ITERS: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSolution {
    pub step: DVector<f64>,
    /// `gᵀs + ½ sᵀHs + (R/6)‖s‖³` at the returned step.
    pub model_value: f64,
    /// `‖s‖`.
    pub radius: f64,
    pub hard_case: bool,
}

/// Value of the cubic model at `s` (without the constant `f(x)`).
pub fn cubic_model(g: &DVector<f64>, h: &DMatrix<f64>, r: f64, s: &DVector<f64>) -> f64 {
    let norm = s.norm();
    g.dot(s) + 0.5 * s.dot(&(h * s)) + r / 6.0 * norm * norm * norm
}

/// Residuals of the global-optimality certificate for a cubic-model step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    /// `‖g + Hs + (R/2)‖s‖ s‖`.
    pub stationarity: f64,
    /// `λmin(H) + (R/2)‖s‖`; non-negative at a global minimizer.
    pub psd_margin: f64,
}

impl Certificate {
    pub fn compute(g: &DVector<f64>, h: &DMatrix<f64>, r: f64, s: &DVector<f64>) -> Result<Self> {
        let norm = s.norm();
        let resid = g + h * s + s * (0.5 * r * norm);
        let lmin = eig_sym(h)?.min_eigenvalue();
        Ok(Self { stationarity: resid.norm(), psd_margin: lmin + 0.5 * r * norm })
    }

    /// Stationarity within `1e-8·max(1,‖g‖)` and PSD margin above `−1e-8·max(1,‖H‖)`.
    pub fn holds(&self, g: &DVector<f64>, h: &DMatrix<f64>) -> bool {
        self.stationarity <= 1e-8 * g.norm().max(1.0) && self.psd_margin >= -1e-8 * h.norm().max(1.0)
    }
}

/// Global minimizer of the cubic-regularized quadratic model.
pub fn solve_cubic_subproblem(g: &DVector<f64>, h: &DMatrix<f64>, r: f64) -> Result<CubicSolution> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidConfig(format!("cubic regularization R must be positive, got {r}")));
    }
    if g.len() != h.nrows() {
        return Err(Error::DimensionMismatch { expected: h.nrows(), found: g.len() });
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("gradient"));
    }
    let n = g.len();
    let eig = eig_sym(h)?;
    let lam = eig.eigenvalues();
    let vecs = eig.eigenvectors();
    let gh = vecs.transpose() * g;
    let lmin = eig.min_eigenvalue();
    let r_min = (-2.0 * lmin / r).max(0.0);
    let gnorm = g.norm();

    let finish = |s: DVector<f64>, hard_case: bool| {
        let radius = s.norm();
        CubicSolution { model_value: cubic_model(g, h, r, &s), radius, step: s, hard_case }
    };

    if n == 0 || (gnorm == 0.0 && lmin >= 0.0) {
        return Ok(finish(DVector::zeros(n), false));
    }

    // Eigen-coordinates of s(ρ) = −(H + (Rρ/2) I)⁻¹ g.
    let coords = |rho: f64| DVector::from_fn(n, |i, _| -gh[i] / (lam[i] + 0.5 * r * rho));
    // φ(ρ) = ‖s(ρ)‖ − ρ and its derivative.
    let phi = |rho: f64| {
        let mut sq = 0.0;
        let mut d = 0.0;
        for i in 0..n {
            let den = lam[i] + 0.5 * r * rho;
            sq += (gh[i] / den).powi(2);
            d += gh[i] * gh[i] / (den * den * den);
        }
        let norm = sq.sqrt();
        let dphi = if norm > 0.0 { -0.5 * r * d / norm - 1.0 } else { -1.0 };
        (norm - rho, dphi)
    };

    let mut lo = r_min;
    let mut hi = r_min + (2.0 * gnorm / r).sqrt();
    let mut rho = hi;
    if gnorm > 0.0 {
        for _ in 0..MAX_ROOT_ITERS {
            let (val, dval) = phi(rho);
            if val == 0.0 {
                break;
            }
            if val > 0.0 {
                lo = rho;
            } else {
                hi = rho;
            }
            // Safeguarded Newton: fall back to bisection outside the bracket.
            let newton = rho - val / dval;
            let next = if newton.is_finite() && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            let tiny = 4.0 * f64::EPSILON * rho.max(f64::MIN_POSITIVE);
            let done = (next - rho).abs() <= tiny || hi - lo <= tiny;
            rho = next;
            if done {
                break;
            }
        }
    }

    let scale = 1.0_f64.max(lam[0].abs()).max(lmin.abs());
    let at_boundary = r_min > 0.0 && rho - r_min <= 1e-12 * r_min.max(1.0);
    if !at_boundary {
        return Ok(finish(vecs * coords(rho), false));
    }

    // Hard case: solve on the complement of the bottom eigenspace, then fill
    // the remaining radius with a bottom eigenvector.
    let bottom: Vec<usize> = (0..n).filter(|&i| lam[i] - lmin <= 1e-12 * scale).collect();
    let mut c = DVector::zeros(n);
    for i in 0..n {
        if !bottom.contains(&i) {
            c[i] = -gh[i] / (lam[i] + 0.5 * r * r_min);
        }
    }
    let alpha = (r_min * r_min - c.norm_squared()).max(0.0).sqrt();
    let gb: f64 = bottom.iter().map(|&i| gh[i] * gh[i]).sum::<f64>().sqrt();
    if gb > 0.0 {
        // Point against the residual gradient weight on the bottom space.
        for &i in &bottom {
            c[i] = -alpha * gh[i] / gb;
        }
    } else {
        c[*bottom.last().expect("bottom eigenspace is non-empty")] = alpha;
    }
    Ok(finish(vecs * c, true))
}

/// One cubic-regularized step from `x`.
#[derive(Debug, Clone)]
pub struct CubicStep {
    pub z: DVector<f64>,
    pub solution: CubicSolution,
    /// Derivatives at the starting point `x` (up to the Hessian).
    pub at_x: DerivativeBundle,
}

/// `z = x + argmin_s` of the cubic model built from `∇f(x)`, `∇²f(x)` and `R`.
pub fn cubic_reg_step<F: Objective + ?Sized>(f: &F, x: &DVector<f64>, r: f64) -> Result<CubicStep> {
    check_point(f.dim(), x)?;
    let at_x = f.derivatives(x, DerivOrder::Hessian)?;
    let solution = solve_cubic_subproblem(&at_x.grad, &at_x.hess, r)?;
    Ok(CubicStep { z: x + &solution.step, solution, at_x })
}

/// `μ(z) = max{ √(‖∇f(z)‖/R), −2λn(∇²f(z))/(3R) }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuValue {
    pub value: f64,
    pub grad_part: f64,
    /// Clamped at 0.
    pub eig_part: f64,
}

pub fn mu_from_parts(grad_norm: f64, min_eig: f64, r: f64) -> MuValue {
    let grad_part = (grad_norm / r).sqrt();
    let eig_part = (-2.0 * min_eig / (3.0 * r)).max(0.0);
    MuValue { value: grad_part.max(eig_part), grad_part, eig_part }
}

pub fn mu<F: Objective + ?Sized>(f: &F, z: &DVector<f64>, r: f64) -> Result<MuValue> {
    if !(r > 0.0) {
        return Err(Error::InvalidConfig(format!("R must be positive, got {r}")));
    }
    let b = f.derivatives(z, DerivOrder::Hessian)?;
    let lmin = eig_sym(&b.hess)?.min_eigenvalue();
    Ok(mu_from_parts(b.grad.norm(), lmin, r))
}
