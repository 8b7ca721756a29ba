//! Third-order escape: competitive subspaces, randomized tensor directions,
//! the third-order step and the optimizer loop that alternates them with
//! cubic-regularized steps.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cubic::{mu_from_parts, solve_cubic_subproblem};
use crate::error::{Error, Result};
use crate::poly::{check_point, DerivOrder, DerivativeBundle, Objective};
use crate::spectral::{eig_sym, EigenDecomp, Subspace};
use crate::tensor::SymTensor3;

/// Largest low-curvature eigensubspace whose projected third-derivative
/// norm dominates its curvature threshold.
#[derive(Debug, Clone)]
pub struct CompetitiveSubspace {
    pub subspace: Subspace,
    /// `‖Proj_S T‖_F`, or 0 when the subspace is empty.
    pub c_q: f64,
    /// The eigenvalue `λ_i` that opens the chosen suffix, i.e. the `τ` with `S = S_τ`.
    pub tau: Option<f64>,
    /// Zero-based index `i` of the suffix `span{v_i, …, v_n}`.
    pub eig_index: Option<usize>,
}

impl CompetitiveSubspace {
    fn empty(n: usize) -> Self {
        Self { subspace: Subspace::empty(n), c_q: 0.0, tau: None, eig_index: None }
    }

    pub fn is_empty(&self) -> bool {
        self.subspace.is_empty()
    }
}

/// Enumerates the suffixes `span{v_i..v_n}` of the descending eigenbasis and
/// returns the first (largest) one with `λ_i ≤ ‖Proj T‖_F² / (12 L Q²)`.
///
/// A qualifying subspace whose projected norm is at most `c_q_min` is
/// reported as empty.
pub fn competitive_subspace(
    h: &DMatrix<f64>,
    t: &SymTensor3,
    l: f64,
    q: f64,
    c_q_min: f64,
) -> Result<CompetitiveSubspace> {
    if h.nrows() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: h.nrows() });
    }
    competitive_from_eig(&eig_sym(h)?, t, l, q, c_q_min)
}

pub fn competitive_from_eig(
    eig: &EigenDecomp,
    t: &SymTensor3,
    l: f64,
    q: f64,
    c_q_min: f64,
) -> Result<CompetitiveSubspace> {
    let n = eig.dim();
    if n != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: n });
    }
    if !(l > 0.0 && q > 0.0) {
        return Err(Error::InvalidConfig(format!("L and Q must be positive (L = {l}, Q = {q})")));
    }
    for i in 0..n {
        let s = eig.suffix(i);
        let c = t.project(&s)?.frobenius();
        let lam = eig.eigenvalues()[i];
        if c * c / (12.0 * l * q * q) >= lam {
            if c <= c_q_min {
                return Ok(CompetitiveSubspace::empty(n));
            }
            return Ok(CompetitiveSubspace { subspace: s, c_q: c, tau: Some(lam), eig_index: Some(i) });
        }
    }
    Ok(CompetitiveSubspace::empty(n))
}

/// `Q = B · n^{1.5}` for ambient dimension `n`.
pub fn approximation_factor(b: f64, n: usize) -> f64 {
    b * (n as f64).powf(1.5)
}

/// Output of the randomized direction sampler.
#[derive(Debug, Clone)]
pub struct SampledDirection {
    /// Unit vector in the subspace with `T(u,u,u) > 0`.
    pub u: DVector<f64>,
    /// `T(u, u, u)`.
    pub value: f64,
    /// `‖Proj_S T‖_F / (B n^{1.5})`, the acceptance threshold.
    pub threshold: f64,
    /// Number of Gaussian draws used (at least 1).
    pub draws: usize,
}

/// Draws standard Gaussians in `subspace` until the normalized direction `u`
/// has `|T(u,u,u)| ≥ ‖Proj_S T‖_F / (B n^{1.5})`, then flips its sign so the
/// cubic form is positive.
pub fn approx_direction<R: Rng + ?Sized>(
    t: &SymTensor3,
    subspace: &Subspace,
    b: f64,
    max_draws: usize,
    rng: &mut R,
) -> Result<SampledDirection> {
    if subspace.ambient_dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: subspace.ambient_dim() });
    }
    if subspace.is_empty() {
        return Err(Error::InvalidConfig("direction sampler needs a non-empty subspace".into()));
    }
    if !(b > 0.0) {
        return Err(Error::InvalidConfig(format!("sampler constant B must be positive, got {b}")));
    }
    let projected = t.project(subspace)?;
    let norm = projected.frobenius();
    if norm == 0.0 {
        return Err(Error::InvalidConfig("projected tensor is zero; no ascent direction exists".into()));
    }
    let threshold = norm / approximation_factor(b, t.dim());
    let k = subspace.rank();
    for draw in 1..=max_draws {
        let coeffs = DVector::from_fn(k, |_, _| rng.sample::<f64, _>(StandardNormal));
        let raw = subspace.embed(&coeffs);
        let len = raw.norm();
        if len == 0.0 {
            continue;
        }
        let mut u = raw / len;
        let mut value = projected.cubic_form(&u)?;
        if value.abs() >= threshold {
            if value < 0.0 {
                u.neg_mut();
                value = -value;
            }
            return Ok(SampledDirection { u, value, threshold, draws: draw });
        }
    }
    Err(Error::SamplerExhausted { retries: max_draws })
}

/// Result of a third-order step `x' = z − (C_Q/(LQ)) u`.
#[derive(Debug, Clone)]
pub struct ThirdOrderStep {
    pub x_next: DVector<f64>,
    pub step_norm: f64,
    /// `C_Q⁴ / (24 L³ Q⁴)`, the guaranteed decrease when the trigger held.
    pub predicted_decrease: f64,
    pub value: f64,
}

pub fn third_order_step<F: Objective + ?Sized>(
    f: &F,
    z: &DVector<f64>,
    competitive: &CompetitiveSubspace,
    u: &DVector<f64>,
    l: f64,
    q: f64,
) -> Result<ThirdOrderStep> {
    if competitive.is_empty() || competitive.c_q <= 0.0 {
        return Err(Error::InvalidConfig("third-order step needs a non-empty competitive subspace".into()));
    }
    check_point(f.dim(), z)?;
    if u.len() != z.len() {
        return Err(Error::DimensionMismatch { expected: z.len(), found: u.len() });
    }
    let eps = competitive.c_q / (l * q);
    let x_next = z - u * eps;
    let value = f.value(&x_next)?;
    Ok(ThirdOrderStep {
        step_norm: eps * u.norm(),
        predicted_decrease: competitive.c_q.powi(4) / (24.0 * l.powi(3) * q.powi(4)),
        x_next,
        value,
    })
}

/// Optimizer settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Hessian Lipschitz constant used as the cubic regularizer.
    pub r: f64,
    /// Third-derivative Lipschitz constant.
    pub l: f64,
    /// Sampler constant; `Q = B n^{1.5}`.
    pub b: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub tol_mu: f64,
    pub c_q_min: f64,
    pub max_sampler_retries: usize,
    /// Stop after this many consecutive quiet iterations (`μ ≤ tol_mu`, no
    /// trigger). `None` always runs the full budget.
    pub patience: Option<usize>,
    /// `false` gives the cubic-regularization-only baseline.
    pub third_order_steps: bool,
    /// Additive slack for the per-step decrease checks.
    pub decrease_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            r: 1.0,
            l: 1.0,
            b: 8.0,
            max_iters: 100,
            seed: 0,
            tol_mu: 1e-6,
            c_q_min: 1e-10,
            max_sampler_retries: 200,
            patience: Some(3),
            third_order_steps: true,
            decrease_tol: 1e-9,
        }
    }
}

impl OptimizerConfig {
    pub fn with_constants(r: f64, l: f64) -> Self {
        Self { r, l, ..Self::default() }
    }

    pub fn q(&self, n: usize) -> f64 {
        approximation_factor(self.b, n)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("R", self.r), ("L", self.l), ("B", self.b), ("tol_mu", self.tol_mu)];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if self.max_sampler_retries == 0 {
            return Err(Error::InvalidConfig("max_sampler_retries must be at least 1".into()));
        }
        if self.c_q_min < 0.0 || self.decrease_tol < 0.0 {
            return Err(Error::InvalidConfig("c_q_min and decrease_tol must be non-negative".into()));
        }
        if self.patience == Some(0) {
            return Err(Error::InvalidConfig("patience must be at least 1".into()));
        }
        Ok(())
    }

    /// Slack for comparing function values: the additive tolerance plus a
    /// few ulps of the magnitudes involved.
    fn value_slack(&self, a: f64, b: f64) -> f64 {
        self.decrease_tol + 8.0 * f64::EPSILON * a.abs().max(b.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Cubic,
    Third,
    Terminal,
}

/// Runtime checks of the per-step guarantees; `None` where a check does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepFlags {
    /// `f(z) ≤ f(x) − R‖z−x‖³/12`.
    pub cubic_decrease: Option<bool>,
    /// `‖z − x‖ ≥ μ(z)`.
    pub step_vs_mu: Option<bool>,
    /// `f(x') ≤ f(z) − C_Q⁴/(24 L³ Q⁴)`.
    pub third_decrease: Option<bool>,
    /// Sampled direction met `T(u,u,u) ≥ ‖Proj T‖_F / Q`.
    pub sampler_bound: Option<bool>,
    /// Value did not increase relative to the previous record.
    pub monotone: bool,
}

impl StepFlags {
    pub fn all_ok(&self) -> bool {
        self.monotone
            && [self.cubic_decrease, self.step_vs_mu, self.third_decrease, self.sampler_bound]
                .iter()
                .all(|f| f.unwrap_or(true))
    }
}

/// One line of the optimizer trace.
///
/// Cubic records describe `z⁽ⁱ⁾`; third records describe `x⁽ⁱ⁺¹⁾` after a
/// third-order step; the terminal record repeats the final point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub phase: Phase,
    pub f: f64,
    pub grad_norm: f64,
    pub mu: f64,
    pub c_q: f64,
    pub subspace_dim: usize,
    pub step_norm: f64,
    pub flags: StepFlags,
    pub min_eig: f64,
    pub triggered: bool,
    pub sampler_draws: usize,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub x0: DVector<f64>,
    pub f0: f64,
    pub q: f64,
    pub records: Vec<IterationRecord>,
    pub final_x: DVector<f64>,
    pub status: RunStatus,
}

impl Trace {
    pub fn final_value(&self) -> f64 {
        self.records.last().map_or(self.f0, |r| r.f)
    }

    pub fn cubic_records(&self) -> impl Iterator<Item = &IterationRecord> {
        self.records.iter().filter(|r| r.phase == Phase::Cubic)
    }

    pub fn third_steps(&self) -> usize {
        self.records.iter().filter(|r| r.phase == Phase::Third).count()
    }

    /// Every record's runtime checks passed.
    pub fn all_flags_ok(&self) -> bool {
        self.records.iter().all(|r| r.flags.all_ok())
    }

    /// Values along `x⁽⁰⁾, z⁽⁰⁾, x⁽¹⁾, …` never increase by more than `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        let mut prev = self.f0;
        for r in &self.records {
            if r.f > prev + slack {
                return false;
            }
            prev = r.f;
        }
        true
    }
}

fn record_from(
    iter: usize,
    phase: Phase,
    x: &DVector<f64>,
    value: f64,
    grad_norm: f64,
    min_eig: f64,
    r: f64,
) -> IterationRecord {
    IterationRecord {
        iter,
        phase,
        f: value,
        grad_norm,
        mu: mu_from_parts(grad_norm, min_eig, r).value,
        c_q: 0.0,
        subspace_dim: 0,
        step_norm: 0.0,
        flags: StepFlags { cubic_decrease: None, step_vs_mu: None, third_decrease: None, sampler_bound: None, monotone: true },
        min_eig,
        triggered: false,
        sampler_draws: 0,
        x: x.iter().copied().collect(),
    }
}

fn finite_point(x: &DVector<f64>) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("iterate (objective may be unbounded below)"))
    }
}

/// Runs up to `max_iters` iterations of: cubic step `z = CubicReg(x)`,
/// competitive subspace at `z`, and a third-order step when
/// `C_Q(z) ≥ Q (24 ‖∇f(z)‖ L)^{1/3}`.
pub fn optimize<F: Objective + ?Sized>(f: &F, x0: &DVector<f64>, cfg: &OptimizerConfig) -> Result<Trace> {
    cfg.validate()?;
    check_point(f.dim(), x0)?;
    let n = f.dim();
    let q = cfg.q(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut x = x0.clone();
    let mut at_x: DerivativeBundle = f.derivatives(&x, DerivOrder::Hessian)?;
    let f0 = at_x.value;
    let mut records = Vec::new();
    let mut quiet = 0usize;
    let mut status = RunStatus::BudgetExhausted;
    let mut prev_f = f0;

    for iter in 0..cfg.max_iters {
        // Cubic step.
        let sol = solve_cubic_subproblem(&at_x.grad, &at_x.hess, cfg.r)?;
        let z = &x + &sol.step;
        finite_point(&z)?;
        let at_z = f.derivatives(&z, DerivOrder::Third)?;
        let eig = eig_sym(&at_z.hess)?;
        let grad_norm = at_z.grad.norm();
        let min_eig = eig.min_eigenvalue();
        let step = sol.radius;

        let mut rec = record_from(iter, Phase::Cubic, &z, at_z.value, grad_norm, min_eig, cfg.r);
        rec.step_norm = step;
        let slack = cfg.value_slack(at_x.value, at_z.value);
        rec.flags.cubic_decrease = Some(at_z.value <= at_x.value - cfg.r * step.powi(3) / 12.0 + slack);
        // Rounding in the gradients at x and z puts a floor under ‖∇f(z)‖
        // that the exact inequality does not see.
        let noise = f.gradient_error(&x)? + f.gradient_error(&z)?;
        let mu_exact = mu_from_parts((grad_norm - noise).max(0.0), min_eig, cfg.r).value;
        rec.flags.step_vs_mu = Some(step >= mu_exact - cfg.decrease_tol);
        rec.flags.monotone = at_z.value <= prev_f + slack;

        let competitive = competitive_from_eig(&eig, &at_z.third, cfg.l, q, cfg.c_q_min)?;
        rec.c_q = competitive.c_q;
        rec.subspace_dim = competitive.subspace.rank();
        let trigger = cfg.third_order_steps
            && !competitive.is_empty()
            && competitive.c_q >= q * (24.0 * grad_norm * cfg.l).cbrt();
        rec.triggered = trigger;
        let z_mu = rec.mu;
        prev_f = at_z.value;
        records.push(rec);

        if trigger {
            let dir = approx_direction(&at_z.third, &competitive.subspace, cfg.b, cfg.max_sampler_retries, &mut rng)?;
            let sampler_ok = dir.value >= competitive.c_q / q;
            let third = third_order_step(f, &z, &competitive, &dir.u, cfg.l, q)?;
            finite_point(&third.x_next)?;
            let at_next = f.derivatives(&third.x_next, DerivOrder::Hessian)?;
            let next_min_eig = eig_sym(&at_next.hess)?.min_eigenvalue();
            let mut trec = record_from(
                iter,
                Phase::Third,
                &third.x_next,
                at_next.value,
                at_next.grad.norm(),
                next_min_eig,
                cfg.r,
            );
            trec.c_q = competitive.c_q;
            trec.subspace_dim = competitive.subspace.rank();
            trec.step_norm = third.step_norm;
            trec.triggered = true;
            trec.sampler_draws = dir.draws;
            let slack = cfg.value_slack(at_z.value, at_next.value);
            trec.flags.third_decrease = Some(at_next.value <= at_z.value - third.predicted_decrease + slack);
            trec.flags.sampler_bound = Some(sampler_ok);
            trec.flags.monotone = at_next.value <= prev_f + slack;
            prev_f = at_next.value;
            records.push(trec);
            x = third.x_next;
            at_x = at_next;
            quiet = 0;
            continue;
        }

        x = z;
        at_x = DerivativeBundle { third: SymTensor3::zeros(0), ..at_z };
        if z_mu <= cfg.tol_mu {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if cfg.patience.is_some_and(|k| quiet >= k) {
            let last = records.last().expect("cubic record pushed").clone();
            records.push(IterationRecord {
                phase: Phase::Terminal,
                step_norm: 0.0,
                flags: StepFlags {
                    cubic_decrease: None,
                    step_vs_mu: None,
                    third_decrease: None,
                    sampler_bound: None,
                    monotone: true,
                },
                ..last
            });
            status = RunStatus::Converged;
            break;
        }
    }

    Ok(Trace { x0: x0.clone(), f0, q, records, final_x: x, status })
}

/// Outcome of checking a trace against the finite-iteration rate envelope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub t: usize,
    pub f0: f64,
    pub f_star: f64,
    /// `(12 (f(x0) − f*) / (R t))^{1/3}`.
    pub mu_bound: f64,
    /// `Q (24 L³ (f(x0) − f*) / t)^{1/4}`, the iteration-count branch of the `C_Q` bound.
    pub c_q_budget_bound: f64,
    /// First cubic record index satisfying both bounds.
    pub qualifying_iter: Option<usize>,
    /// Records examined.
    pub checked: usize,
}

impl RateReport {
    pub fn holds(&self) -> bool {
        self.qualifying_iter.is_some()
    }
}

/// Checks that some `z⁽ⁱ⁾` with `i < t` has
/// `μ(z) ≤ (12 (f(x0) − f*)/(R t))^{1/3}` and
/// `C_Q(z) ≤ max{ Q (24 ‖∇f(z)‖ L)^{1/3}, Q (24 L³ (f(x0) − f*)/t)^{1/4} }`.
pub fn rate_check(trace: &Trace, f_star: f64, cfg: &OptimizerConfig) -> RateReport {
    let t = cfg.max_iters;
    let gap = (trace.f0 - f_star).max(0.0);
    let mu_bound = (12.0 * gap / (cfg.r * t as f64)).cbrt();
    let c_q_budget_bound = trace.q * (24.0 * cfg.l.powi(3) * gap / t as f64).powf(0.25);
    let mut qualifying_iter = None;
    let mut checked = 0;
    for rec in trace.cubic_records().filter(|r| r.iter < t) {
        checked += 1;
        let c_bound = (trace.q * (24.0 * rec.grad_norm * cfg.l).cbrt()).max(c_q_budget_bound);
        if rec.mu <= mu_bound && rec.c_q <= c_bound {
            qualifying_iter = Some(rec.iter);
            break;
        }
    }
    RateReport { t, f0: trace.f0, f_star, mu_bound, c_q_budget_bound, qualifying_iter, checked }
}

/// First cubic record with `‖∇f‖ < c1`, `λn > −c2` and `C_Q < c3`.
pub fn strict_saddle_hit(trace: &Trace, c1: f64, c2: f64, c3: f64) -> Option<usize> {
    trace
        .cubic_records()
        .find(|r| r.grad_norm < c1 && r.min_eig > -c2 && r.c_q < c3)
        .map(|r| r.iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::poly::Polynomial;
    use nalgebra::dvector;

    fn monkey_tensor() -> SymTensor3 {
        corpus::monkey_saddle().eval_bundle(&dvector![0.0, 0.0], DerivOrder::Third).unwrap().third
    }

    #[test]
    fn competitive_monkey_origin() {
        let q = approximation_factor(8.0, 2);
        let c = competitive_subspace(&DMatrix::zeros(2, 2), &monkey_tensor(), 1.0, q, 1e-10).unwrap();
        assert_eq!(c.subspace.rank(), 2);
        assert_eq!(c.eig_index, Some(0));
        assert!((c.c_q - 12.0).abs() < 1e-12);
        assert!(c.tau.unwrap() <= c.c_q * c.c_q / (12.0 * q * q) + 1e-12);
    }

    #[test]
    fn competitive_empty_cases() {
        let c = competitive_subspace(&DMatrix::zeros(2, 2), &SymTensor3::zeros(2), 1.0, 4.0, 1e-10).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.c_q, 0.0);

        let tiny = monkey_tensor().scale(1e-3);
        let h = DMatrix::from_diagonal(&dvector![5.0, 5.0]);
        let c = competitive_subspace(&h, &tiny, 1.0, 1.0, 1e-10).unwrap();
        assert!(c.is_empty());

        assert!(competitive_subspace(&DMatrix::zeros(3, 3), &tiny, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sampler_rank_one() {
        let v = dvector![0.6, 0.8, 0.0];
        let t = SymTensor3::rank_one(&v);
        let s = Subspace::from_orthonormal(DMatrix::from_column_slice(3, 1, v.as_slice())).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = approx_direction(&t, &s, 8.0, 200, &mut rng).unwrap();
        assert!((d.u.dot(&v).abs() - 1.0).abs() < 1e-12);
        assert!((d.value - t.frobenius()).abs() < 1e-12);
    }

    #[test]
    fn sampler_monkey_bound() {
        let t = monkey_tensor();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = approx_direction(&t, &Subspace::full(2), 8.0, 200, &mut rng).unwrap();
            assert!(d.value >= 12.0 / (8.0 * 2f64.powf(1.5)));
            assert!((d.u.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sampler_exhaustion_is_reported() {
        // B so small that the threshold exceeds the injective norm.
        let t = monkey_tensor();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = approx_direction(&t, &Subspace::full(2), 0.01, 25, &mut rng).unwrap_err();
        assert!(matches!(err, Error::SamplerExhausted { retries: 25 }));
    }

    #[test]
    fn third_step_confined_monkey() {
        let f = corpus::monkey_saddle_confined();
        let z = dvector![0.0, 0.0];
        let b = f.eval_bundle(&z, DerivOrder::Third).unwrap();
        let l = corpus::run_constants(&f, 1.0).unwrap().l;
        let q = approximation_factor(8.0, 2);
        let c = competitive_subspace(&b.hess, &b.third, l, q, 1e-10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let d = approx_direction(&b.third, &c.subspace, 8.0, 200, &mut rng).unwrap();
        let step = third_order_step(&f, &z, &c, &d.u, l, q).unwrap();
        assert!(step.value < 0.0);
        assert!(step.value <= -step.predicted_decrease);
    }

    #[test]
    fn third_step_quartic_escapes_right() {
        let f = corpus::quartic_1d();
        let z = dvector![0.0];
        let b = f.eval_bundle(&z, DerivOrder::Third).unwrap();
        let q = approximation_factor(8.0, 1);
        let c = competitive_subspace(&b.hess, &b.third, 24.0, q, 1e-10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let d = approx_direction(&b.third, &c.subspace, 8.0, 200, &mut rng).unwrap();
        let step = third_order_step(&f, &z, &c, &d.u, 24.0, q).unwrap();
        assert!(step.x_next[0] > 0.0);
        assert!(step.value < 0.0);
    }

    #[test]
    fn quadratic_run_converges_without_third_steps() {
        let f = Polynomial::norm_squared(2);
        let cfg = OptimizerConfig::with_constants(1.0, 1.0);
        let tr = optimize(&f, &dvector![1.0, 1.0], &cfg).unwrap();
        assert_eq!(tr.status, RunStatus::Converged);
        assert_eq!(tr.third_steps(), 0);
        assert!(tr.final_x.norm() < 1e-8);
        assert!(tr.all_flags_ok());
        assert_eq!(tr.records.last().unwrap().phase, Phase::Terminal);
    }

    #[test]
    fn baseline_stalls_full_algorithm_escapes() {
        let f = corpus::monkey_saddle_confined();
        let s = corpus::run_constants(&f, 1.0).unwrap();
        let base = OptimizerConfig {
            third_order_steps: false,
            patience: None,
            ..OptimizerConfig::with_constants(s.r, s.l)
        };
        let tr = optimize(&f, &dvector![0.0, 0.0], &base).unwrap();
        assert_eq!(tr.records.len(), 100);
        assert!(tr.records.iter().all(|r| r.x.iter().all(|v| *v == 0.0)));

        let cfg = OptimizerConfig { seed: 7, ..OptimizerConfig::with_constants(s.r, s.l) };
        let tr = optimize(&f, &dvector![0.0, 0.0], &cfg).unwrap();
        assert!(tr.third_steps() >= 1);
        assert!(tr.final_value() < -0.1, "{}", tr.final_value());
        assert!(tr.all_flags_ok());
        assert!(tr.is_monotone(1e-9));
    }

    #[test]
    fn xxy_plus_yy_stays_at_origin() {
        let f = corpus::xxy_plus_yy();
        let s = corpus::run_constants(&f, 1.0).unwrap();
        let tr = optimize(&f, &dvector![0.0, 0.0], &OptimizerConfig::with_constants(s.r, s.l)).unwrap();
        assert_eq!(tr.status, RunStatus::Converged);
        assert_eq!(tr.final_x, dvector![0.0, 0.0]);
        assert_eq!(tr.third_steps(), 0);
    }

    #[test]
    fn deterministic_given_seed() {
        let f = corpus::monkey_saddle_confined();
        let s = corpus::run_constants(&f, 1.0).unwrap();
        let cfg = OptimizerConfig { seed: 42, ..OptimizerConfig::with_constants(s.r, s.l) };
        let a = optimize(&f, &dvector![0.0, 0.0], &cfg).unwrap();
        let b = optimize(&f, &dvector![0.0, 0.0], &cfg).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn rate_check_degenerate_budget() {
        let f = Polynomial::norm_squared(2);
        let cfg = OptimizerConfig { max_iters: 1, ..OptimizerConfig::with_constants(1.0, 1.0) };
        let tr = optimize(&f, &dvector![1.0, 1.0], &cfg).unwrap();
        let rep = rate_check(&tr, 0.0, &cfg);
        assert_eq!(rep.checked, 1);
        assert_eq!(rep.qualifying_iter, Some(0));
    }

    #[test]
    fn invalid_config_rejected() {
        let f = Polynomial::norm_squared(2);
        let bad = OptimizerConfig { r: 0.0, ..OptimizerConfig::default() };
        assert!(matches!(optimize(&f, &dvector![1.0, 1.0], &bad), Err(Error::InvalidConfig(_))));
        assert!(optimize(&f, &dvector![1.0], &OptimizerConfig::default()).is_err());
    }
}
