//! Third-order necessary-condition checks, Hessian classification and
//! explicit descent witnesses for points that fail a condition.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::escape::{approx_direction, OptimizerConfig};
use crate::poly::{check_point, DerivOrder, Objective};
use crate::spectral::{eig_sym, null_space, DEFAULT_NULL_TOL};
use crate::tensor::SymTensor3;

/// What a passing report certifies; a finite check cannot certify the
/// existential constants of local optimality itself.
pub const CERTIFIES: &str = "third-order necessary conditions within tolerance: \
    small gradient, Hessian PSD, cubic form vanishing on the Hessian null space";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HessianClass {
    LocalMinType,
    LocalMaxType,
    StrictSaddle,
    Degenerate,
}

/// Classifies by eigenvalue signs, counting `|λ| ≤ tol` as zero.
pub fn classify_hessian(h: &DMatrix<f64>, tol: f64) -> Result<HessianClass> {
    let eig = eig_sym(h)?;
    let lam = eig.eigenvalues();
    let pos = lam.iter().filter(|&&l| l > tol).count();
    let neg = lam.iter().filter(|&&l| l < -tol).count();
    let n = lam.len();
    Ok(if pos == n {
        HessianClass::LocalMinType
    } else if neg == n {
        HessianClass::LocalMaxType
    } else if pos > 0 && neg > 0 {
        HessianClass::StrictSaddle
    } else {
        HessianClass::Degenerate
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckTolerances {
    /// Gradient-norm tolerance.
    pub grad: f64,
    /// `λn ≥ −eig · max(1, |λ1|, |λn|)` passes the PSD test.
    pub eig: f64,
    /// Relative tolerance defining the numerical null space.
    pub null: f64,
    /// Tolerance on `‖Proj_P ∇³f‖_F`.
    pub third: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        Self { grad: 1e-8, eig: DEFAULT_NULL_TOL, null: DEFAULT_NULL_TOL, third: 1e-8 }
    }
}

impl CheckTolerances {
    /// Tolerances implied by an optimizer stopping rule: `μ ≤ tol_mu` gives
    /// `‖∇f‖ ≤ R tol_mu²` and `λn ≥ −1.5 R tol_mu`, and an idle trigger gives
    /// `C_Q < Q (24 ‖∇f‖ L)^{1/3}`, which bounds the projected third
    /// derivative on the null space.
    pub fn for_run(cfg: &OptimizerConfig, n: usize) -> Self {
        let grad = cfg.r * cfg.tol_mu * cfg.tol_mu;
        Self {
            grad,
            eig: 1.5 * cfg.r * cfg.tol_mu,
            null: DEFAULT_NULL_TOL,
            third: cfg.q(n) * (24.0 * grad * cfg.l).cbrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    FirstOrderFail,
    SecondOrderFail,
    ThirdOrderFail,
    ThirdOrderNecessaryHolds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    pub grad_norm: f64,
    pub min_eig: f64,
    pub null_dim: usize,
    pub third_residual: f64,
    pub hessian_class: HessianClass,
    pub tolerances: CheckTolerances,
    pub certifies: String,
}

/// Evaluates the three conditions in order and reports the first failure.
pub fn check_third_order<F: Objective + ?Sized>(
    f: &F,
    x: &DVector<f64>,
    tols: &CheckTolerances,
) -> Result<ConditionReport> {
    check_point(f.dim(), x)?;
    let b = f.derivatives(x, DerivOrder::Third)?;
    let eig = eig_sym(&b.hess)?;
    let grad_norm = b.grad.norm();
    let min_eig = eig.min_eigenvalue();
    let scale = 1.0_f64.max(eig.max_eigenvalue().abs()).max(min_eig.abs());
    let null = null_space(&eig, tols.null);
    let third_residual = b.third.project(&null)?.frobenius();

    let verdict = if grad_norm > tols.grad {
        Verdict::FirstOrderFail
    } else if min_eig < -tols.eig * scale {
        Verdict::SecondOrderFail
    } else if third_residual > tols.third {
        Verdict::ThirdOrderFail
    } else {
        Verdict::ThirdOrderNecessaryHolds
    };
    Ok(ConditionReport {
        verdict,
        grad_norm,
        min_eig,
        null_dim: null.rank(),
        third_residual,
        hessian_class: classify_hessian(&b.hess, tols.null * scale)?,
        tolerances: *tols,
        certifies: CERTIFIES.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessCase {
    Gradient,
    NegativeCurvature,
    CubicForm,
}

/// An explicit direction and step length that decrease `f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentWitness {
    pub case: WitnessCase,
    /// Unit vector.
    pub direction: DVector<f64>,
    pub step: f64,
    pub predicted_decrease: f64,
    /// `f(x) − f(x + step · direction)`.
    pub actual_decrease: f64,
    /// The curvature or cubic-form magnitude `c` used by the step formula.
    pub c: f64,
}

impl DescentWitness {
    /// Actual decrease reaches `factor · predicted_decrease`.
    pub fn verified(&self, factor: f64) -> bool {
        self.actual_decrease >= factor * self.predicted_decrease
    }
}

/// Maximum number of shifted power iterations used to sharpen a sampled direction.
const POWER_ITERS: usize = 500;

/// Climbs `T(u,u,u)` on the unit sphere with the shifted symmetric power
/// iteration `u ← normalize(T(I,u,u) + α u)`, `α = 2‖T‖_F`, which never
/// decreases the cubic form. `T` should already be projected onto the
/// subspace of interest so iterates stay inside it.
fn sharpen_direction(t: &SymTensor3, start: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let alpha = 2.0 * t.frobenius();
    let mut u = start.clone();
    let mut best = t.cubic_form(&u)?;
    for _ in 0..POWER_ITERS {
        let mut next = t.contract2(&u)? + &u * alpha;
        let len = next.norm();
        if len == 0.0 {
            break;
        }
        next /= len;
        let val = t.cubic_form(&next)?;
        let moved = (&next - &u).norm();
        if val < best {
            break;
        }
        u = next;
        best = val;
        if moved < 1e-15 {
            break;
        }
    }
    Ok((u, best))
}

/// The explicit descent constructions behind the necessity of each condition.
///
/// * gradient case: `d = −∇f/‖∇f‖`, step `ε‖∇f‖` with `ε‖∇f‖ ≤ 1` and
///   `ε(2L'/3 + L/24) ≤ 1/2`; predicted decrease `ε‖∇f‖²/2`;
/// * negative curvature: bottom eigenvector, `c = −λn`,
///   `ε = min{√(3c/L), 3c/(4L')}`; predicted decrease `cε²/4`;
/// * cubic form: a sampled, power-refined `u` in the Hessian null space with
///   `c = T(u,u,u) > 0`, direction `−u`, `ε = 2c/L`; predicted decrease `cε³/12`.
///
/// `l` must be a third-derivative Lipschitz bound valid on the segment.
/// `l_prime` bounds the operator norms of `∇²f(x)` and the injective norm of
/// `∇³f(x)`; when `None` the Frobenius norms at `x` are used.
pub fn descent_witness<F: Objective + ?Sized>(
    f: &F,
    x: &DVector<f64>,
    report: &ConditionReport,
    l: f64,
    l_prime: Option<f64>,
    seed: u64,
) -> Result<Option<DescentWitness>> {
    if report.verdict == Verdict::ThirdOrderNecessaryHolds {
        return Ok(None);
    }
    if !(l > 0.0) {
        return Err(Error::InvalidConfig(format!("L must be positive, got {l}")));
    }
    check_point(f.dim(), x)?;
    let b = f.derivatives(x, DerivOrder::Third)?;
    let lp = l_prime.unwrap_or_else(|| b.hess.norm().max(b.third.frobenius()));
    let f0 = b.value;
    let eval = |d: &DVector<f64>, step: f64| -> Result<f64> { Ok(f0 - f.value(&(x + d * step))?) };

    let (case, direction, step, predicted, c) = match report.verdict {
        Verdict::FirstOrderFail => {
            let gn = b.grad.norm();
            let d = -&b.grad / gn;
            let eps = (1.0 / gn).min(0.5 / (2.0 * lp / 3.0 + l / 24.0));
            (WitnessCase::Gradient, d, eps * gn, eps * gn * gn / 2.0, gn)
        }
        Verdict::SecondOrderFail => {
            let eig = eig_sym(&b.hess)?;
            let mut u = eig.eigenvector(eig.dim() - 1);
            if u.dot(&b.grad) > 0.0 {
                u.neg_mut();
            }
            let c = -eig.min_eigenvalue();
            let mut eps = (3.0 * c / l).sqrt();
            if lp > 0.0 {
                eps = eps.min(3.0 * c / (4.0 * lp));
            }
            (WitnessCase::NegativeCurvature, u, eps, c * eps * eps / 4.0, c)
        }
        Verdict::ThirdOrderFail => {
            let eig = eig_sym(&b.hess)?;
            let null = null_space(&eig, report.tolerances.null);
            let projected = b.third.project(&null)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sampled = approx_direction(&projected, &null, 8.0, 1000, &mut rng)?;
            let (u, c) = sharpen_direction(&projected, &sampled.u)?;
            let eps = 2.0 * c / l;
            (WitnessCase::CubicForm, -u, eps, c * eps.powi(3) / 12.0, c)
        }
        Verdict::ThirdOrderNecessaryHolds => unreachable!("handled above"),
    };
    let actual_decrease = eval(&direction, step)?;
    Ok(Some(DescentWitness { case, direction, step, predicted_decrease: predicted, actual_decrease, c }))
}
