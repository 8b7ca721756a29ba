//! Seeded bench suites; each case becomes one CSV row.

use std::io::Write;

use anyhow::bail;
use nalgebra::{dvector, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thirdopt::condition::{check_third_order, CheckTolerances, Verdict};
use thirdopt::corpus::{self, default_radius, run_constants};
use thirdopt::cubic::{mu_from_parts, solve_cubic_subproblem, Certificate};
use thirdopt::escape::{approx_direction, optimize, rate_check, OptimizerConfig, Phase, RunStatus, Trace};
use thirdopt::poly::smoothness_bounds;
use thirdopt::spectral::Subspace;
use thirdopt::{Objective, Polynomial, SymTensor3};

use crate::oracle;

pub const SUITES: &[&str] = &["decrease", "escape", "rate", "sampler", "taylor", "subproblem"];

/// Additive tolerance on the decrease and step-length inequalities.
pub const DECREASE_TOL: f64 = 1e-9;

/// Corpus members that are bounded below.
pub const BOUNDED: &[&str] = &[
    "monkey_saddle_confined",
    "quartic_1d",
    "wine_bottle",
    "inverted_wine_bottle",
    "quartic_plus_sixth",
    "quadratic",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub suite: &'static str,
    pub case: String,
    pub check: &'static str,
    pub samples: usize,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Row {
    fn at_least(suite: &'static str, case: String, check: &'static str, samples: usize, measured: f64, bound: f64) -> Self {
        Self { suite, case, check, samples, measured, bound, pass: measured >= bound }
    }

    fn at_most(suite: &'static str, case: String, check: &'static str, samples: usize, measured: f64, bound: f64) -> Self {
        Self { suite, case, check, samples, measured, bound, pass: measured <= bound }
    }
}

pub fn run_suite(name: &str, seed: u64) -> anyhow::Result<Vec<Row>> {
    match name {
        "decrease" => decrease(seed),
        "escape" => escape(seed),
        "rate" => rate(seed),
        "sampler" => sampler(seed),
        "taylor" => taylor(seed),
        "subproblem" => subproblem(seed),
        other => bail!("unknown bench suite `{other}` (expected one of {})", SUITES.join(", ")),
    }
}

pub fn write_csv(rows: &[Row], out: impl Write) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn all_pass(rows: &[Row]) -> bool {
    rows.iter().all(|r| r.pass)
}

fn config_for(name: &str, p: &Polynomial, seed: u64) -> anyhow::Result<OptimizerConfig> {
    let s = run_constants(p, default_radius(name))?;
    Ok(OptimizerConfig { seed, ..OptimizerConfig::with_constants(s.r, s.l) })
}

fn start(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(-0.9..0.9))
}

/// Seeded runs over the bounded corpus: random starts plus starts placed
/// exactly on degenerate critical points.
pub fn corpus_runs(seed: u64, per_member: usize) -> anyhow::Result<Vec<(String, Polynomial, OptimizerConfig, Trace)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = Vec::new();
    for name in BOUNDED {
        let p = corpus::corpus(name)?;
        for _ in 0..per_member {
            starts.push((*name, start(&mut rng, p.dim())));
        }
    }
    starts.push(("monkey_saddle_confined", dvector![0.0, 0.0]));
    starts.push(("inverted_wine_bottle", dvector![1.0, 0.0]));
    starts.push(("quartic_1d", dvector![0.0]));

    let mut out = Vec::new();
    for (i, (name, x0)) in starts.into_iter().enumerate() {
        let p = corpus::corpus(name)?;
        let cfg = config_for(name, &p, seed.wrapping_add(i as u64))?;
        let trace = optimize(&p, &x0, &cfg)?;
        let label = format!("{name}@{}", fmt_point(&x0));
        out.push((label, p, cfg, trace));
    }
    Ok(out)
}

fn fmt_point(x: &DVector<f64>) -> String {
    x.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(";")
}

/// Margins of the three per-step inequalities along a trace, evaluated with
/// exact function values and gradients at the recorded iterates.
#[derive(Debug, Default)]
pub struct StepMargins {
    /// `f(x) − f(z) − R‖z−x‖³/12`.
    pub cubic: Vec<f64>,
    /// `‖z−x‖ − μ(z)`, with `μ` taken at the smallest gradient consistent
    /// with the rounding in the gradient the step was computed from.
    pub step_vs_mu: Vec<f64>,
    /// `f(z) − f(x') − C_Q⁴/(24 L³ Q⁴)`.
    pub third: Vec<f64>,
}

pub fn step_margins(p: &Polynomial, cfg: &OptimizerConfig, trace: &Trace) -> anyhow::Result<StepMargins> {
    let mut m = StepMargins::default();
    let mut x = trace.x0.clone();
    let mut z = x.clone();
    for rec in &trace.records {
        let point = DVector::from_vec(rec.x.clone());
        match rec.phase {
            Phase::Cubic => {
                let s = (&point - &x).norm();
                m.cubic.push(oracle::exact_difference(p, &x, &point) - cfg.r * s.powi(3) / 12.0);
                let g = oracle::exact_gradient(p, &point).norm();
                let noise = p.gradient_error(&x)?;
                let mu = mu_from_parts((g - noise).max(0.0), rec.min_eig, cfg.r).value;
                m.step_vs_mu.push(s - mu);
                z = point.clone();
                x = point;
            }
            Phase::Third => {
                let predicted = rec.c_q.powi(4) / (24.0 * cfg.l.powi(3) * trace.q.powi(4));
                m.third.push(oracle::exact_difference(p, &z, &point) - predicted);
                x = point;
            }
            Phase::Terminal => break,
        }
    }
    Ok(m)
}

fn min_or_inf(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn decrease(seed: u64) -> anyhow::Result<Vec<Row>> {
    let mut rows = Vec::new();
    let mut cubic_total = 0;
    let mut third_total = 0;
    for (label, p, cfg, trace) in corpus_runs(seed, 4)? {
        let m = step_margins(&p, &cfg, &trace)?;
        cubic_total += m.cubic.len();
        third_total += m.third.len();
        rows.push(Row::at_least("decrease", label.clone(), "cubic_decrease", m.cubic.len(), min_or_inf(&m.cubic), -DECREASE_TOL));
        rows.push(Row::at_least("decrease", label.clone(), "step_vs_mu", m.step_vs_mu.len(), min_or_inf(&m.step_vs_mu), -DECREASE_TOL));
        if !m.third.is_empty() {
            rows.push(Row::at_least("decrease", label, "third_decrease", m.third.len(), min_or_inf(&m.third), -DECREASE_TOL));
        }
    }
    rows.push(Row::at_least("decrease", "all".into(), "cubic_steps_checked", cubic_total, cubic_total as f64, 100.0));
    rows.push(Row::at_least("decrease", "all".into(), "third_steps_checked", third_total, third_total as f64, 1.0));
    Ok(rows)
}

/// `min f` over a 1001×1001 grid on `[−2, 2]²`.
pub fn grid_f_star(p: &Polynomial) -> f64 {
    oracle::grid_min_2d(|a, b| p.eval(&dvector![a, b]), -2.0, 2.0, 1001).0
}

/// Global minimizer of `x² − 100x³ + x⁴`: the larger positive root of
/// `2x − 300x² + 4x³`.
pub fn quartic_1d_minimizer() -> f64 {
    oracle::bisect(|x| 2.0 * x - 300.0 * x * x + 4.0 * x.powi(3), 1.0, 100.0).expect("sign change on [1, 100]")
}

fn escape(seed: u64) -> anyhow::Result<Vec<Row>> {
    let mut rows = Vec::new();
    let origin = dvector![0.0, 0.0];

    let monkey = corpus::monkey_saddle_confined();
    let base = config_for("monkey_saddle_confined", &monkey, seed)?;
    let baseline = optimize(
        &monkey,
        &origin,
        &OptimizerConfig { third_order_steps: false, patience: None, max_iters: 100, ..base.clone() },
    )?;
    let drift = baseline.records.iter().map(|r| DVector::from_vec(r.x.clone()).norm()).fold(0.0, f64::max);
    rows.push(Row::at_most("escape", "monkey_saddle_confined/cubic_only".into(), "max_norm", baseline.records.len(), drift, 1e-12));

    let delta = -grid_f_star(&monkey);
    let full = optimize(&monkey, &origin, &OptimizerConfig { max_iters: 50, ..base })?;
    let best = full.records.iter().map(|r| r.f).fold(full.f0, f64::min);
    rows.push(Row::at_most("escape", "monkey_saddle_confined/full".into(), "min_value", full.records.len(), best, -delta));

    let quartic = corpus::quartic_1d();
    let cfg = config_for("quartic_1d", &quartic, seed)?;
    let trace = optimize(&quartic, &dvector![0.0], &cfg)?;
    let root = quartic_1d_minimizer();
    let n = trace.records.len();
    rows.push(Row::at_most("escape", "quartic_1d/from_0".into(), "final_value", n, trace.final_value(), -f64::MIN_POSITIVE));
    rows.push(Row::at_most("escape", "quartic_1d/from_0".into(), "distance_to_minimizer", n, (trace.final_x[0] - root).abs(), 1e-2));

    let xxy = corpus::xxy_plus_yy();
    let cfg = config_for("xxy_plus_yy", &xxy, seed)?;
    let trace = optimize(&xxy, &origin, &cfg)?;
    let n = trace.records.len();
    let converged = trace.status == RunStatus::Converged;
    let norm = trace.final_x.norm();
    rows.push(Row { pass: converged && norm == 0.0, ..Row::at_most("escape", "xxy_plus_yy/origin".into(), "final_norm", n, norm, 0.0) });
    let report = check_third_order(&xxy, &trace.final_x, &CheckTolerances::default())?;
    rows.push(Row {
        pass: report.verdict == Verdict::ThirdOrderNecessaryHolds,
        ..Row::at_most("escape", "xxy_plus_yy/origin".into(), "third_residual", 1, report.third_residual, report.tolerances.third)
    });

    let bottle = corpus::inverted_wine_bottle();
    let cfg = config_for("inverted_wine_bottle", &bottle, seed)?;
    let trace = optimize(&bottle, &dvector![1.0, 0.0], &cfg)?;
    rows.push(Row::at_most("escape", "inverted_wine_bottle/circle".into(), "final_value", trace.records.len(), trace.final_value(), -0.5));
    Ok(rows)
}

fn rate(seed: u64) -> anyhow::Result<Vec<Row>> {
    let mut rows = Vec::new();
    let mut f_star = std::collections::BTreeMap::new();
    for (label, p, cfg, trace) in corpus_runs(seed, 2)? {
        let name = label.split('@').next().unwrap_or_default().to_string();
        let fs = *f_star.entry(name).or_insert_with(|| {
            if p.dim() == 1 {
                p.eval(&dvector![quartic_1d_minimizer()])
            } else {
                grid_f_star(&p)
            }
        });
        let report = rate_check(&trace, fs, &cfg);
        let measured = report.qualifying_iter.map_or(-1.0, |i| i as f64);
        rows.push(Row { pass: report.holds(), ..Row::at_most("rate", label, "qualifying_iter", report.checked, measured, report.t as f64) });
    }
    Ok(rows)
}

fn sampler(seed: u64) -> anyhow::Result<Vec<Row>> {
    const SEEDS: u64 = 1000;
    const N: usize = 5;
    const B: f64 = 8.0;
    let mut worst = f64::INFINITY;
    let mut draws = 0usize;
    let mut exhausted = 0usize;
    for s in 0..SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(SEEDS).wrapping_add(s));
        let t = SymTensor3::from_fn(N, |_, _, _| rng.sample::<f64, _>(StandardNormal))?;
        match approx_direction(&t, &Subspace::full(N), B, 200, &mut rng) {
            Ok(d) => {
                worst = worst.min(t.cubic_form(&d.u)? / (t.frobenius() / (B * (N as f64).powf(1.5))));
                draws += d.draws;
            }
            Err(thirdopt::Error::SamplerExhausted { .. }) => exhausted += 1,
            Err(e) => return Err(e.into()),
        }
    }
    let n = SEEDS as usize;
    Ok(vec![
        Row::at_least("sampler", format!("n={N},B={B}"), "min_value_over_threshold", n, worst, 1.0),
        Row::at_most("sampler", format!("n={N},B={B}"), "mean_draws", n, draws as f64 / (n - exhausted).max(1) as f64, 3.0),
        Row::at_most("sampler", format!("n={N},B={B}"), "exhausted", n, exhausted as f64, 0.0),
    ])
}

fn in_ball(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    loop {
        let p = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        if p.norm() <= 1.0 {
            return p;
        }
    }
}

fn taylor(seed: u64) -> anyhow::Result<Vec<Row>> {
    const PAIRS: usize = 1000;
    let mut rows = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for name in corpus::CORPUS_NAMES {
        let p = corpus::corpus(name)?;
        if p.degree() > 4 {
            continue;
        }
        let l = smoothness_bounds(&p, 1.0)?.l;
        let mut worst = 0.0f64;
        for _ in 0..PAIRS {
            let x = in_ball(&mut rng, p.dim());
            let y = in_ball(&mut rng, p.dim());
            let rem = oracle::taylor_remainder(&p, &x, &y).abs();
            let bound = l / 24.0 * (&y - &x).norm().powi(4);
            if rem > 0.0 {
                worst = worst.max(rem / bound);
            }
        }
        rows.push(Row::at_most("taylor", name.to_string(), "remainder_over_bound", PAIRS, worst, 1.0 + 1e-6));
    }
    Ok(rows)
}

fn subproblem(seed: u64) -> anyhow::Result<Vec<Row>> {
    let mut rows = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..50 {
        let g = DVector::from_fn(2, |_, _| rng.random_range(-1.0..1.0));
        let a = DMatrix::from_fn(2, 2, |_, _| rng.random_range(-2.0..2.0));
        let h = (&a + a.transpose()) * 0.5;
        let r = rng.random_range(0.5..3.0);
        let sol = solve_cubic_subproblem(&g, &h, r)?;
        let grid = oracle::grid_min_cubic_model(&g, &h, r, 3.0, 401);
        let label = format!("case{case}");
        rows.push(Row::at_most("subproblem", label.clone(), "model_minus_grid", 1, sol.model_value - grid, 1e-3));
        let cert = Certificate::compute(&g, &h, r, &sol.step)?;
        rows.push(Row {
            pass: cert.holds(&g, &h),
            ..Row::at_most("subproblem", label, "certificate_stationarity", 1, cert.stationarity, 1e-8 * g.norm().max(1.0))
        });
    }
    Ok(rows)
}
