//! Command implementations behind the `thirdopt` binary.

pub mod bench;
pub mod oracle;

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use nalgebra::DVector;
use thirdopt::condition::{check_third_order, CheckTolerances, ConditionReport, Verdict};
use thirdopt::corpus::{self, default_radius, run_constants};
use thirdopt::escape::{optimize, IterationRecord, OptimizerConfig, RunStatus, Trace};
use thirdopt::Polynomial;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// A problem given either as a corpus name or as a path to polynomial JSON.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub poly: Polynomial,
    /// Ball radius used for default smoothness constants.
    pub radius: f64,
}

pub fn resolve_problem(spec: &str) -> anyhow::Result<Problem> {
    if let Ok(poly) = corpus::corpus(spec) {
        return Ok(Problem { name: spec.to_string(), poly, radius: default_radius(spec) });
    }
    let path = Path::new(spec);
    if !path.exists() {
        bail!("unknown problem `{spec}`: not a corpus name ({}) and no such file", corpus::CORPUS_NAMES.join(", "));
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let poly = Polynomial::from_json(&text).with_context(|| format!("parsing polynomial in {}", path.display()))?;
    Ok(Problem { name: spec.to_string(), poly, radius: 2.0 })
}

/// Parses `v1,...,vn`.
pub fn parse_point(s: &str) -> anyhow::Result<DVector<f64>> {
    let vals = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad coordinate `{v}`")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if vals.iter().any(|v| !v.is_finite()) {
        bail!("point coordinates must be finite");
    }
    Ok(DVector::from_vec(vals))
}

#[derive(Debug, Clone)]
pub struct RunSpec {
    pub problem: String,
    pub x0: DVector<f64>,
    pub r: Option<f64>,
    pub l: Option<f64>,
    pub b: Option<f64>,
    /// Radius of the ball used to derive `R` and `L` when not given.
    pub radius: Option<f64>,
    pub max_iters: usize,
    pub seed: u64,
    pub tol_mu: f64,
    pub trace: PathBuf,
}

impl RunSpec {
    pub fn new(problem: &str, x0: DVector<f64>, trace: impl Into<PathBuf>) -> Self {
        let d = OptimizerConfig::default();
        Self {
            problem: problem.to_string(),
            x0,
            r: None,
            l: None,
            b: None,
            radius: None,
            max_iters: d.max_iters,
            seed: d.seed,
            tol_mu: d.tol_mu,
            trace: trace.into(),
        }
    }
}

/// The optimizer configuration a spec resolves to.
pub fn run_config(spec: &RunSpec, problem: &Problem) -> anyhow::Result<OptimizerConfig> {
    let radius = spec.radius.unwrap_or(problem.radius.max(2.0 * spec.x0.norm()));
    let consts = run_constants(&problem.poly, radius)?;
    let mut cfg = OptimizerConfig::with_constants(spec.r.unwrap_or(consts.r), spec.l.unwrap_or(consts.l));
    if let Some(b) = spec.b {
        cfg.b = b;
    }
    cfg.max_iters = spec.max_iters;
    cfg.seed = spec.seed;
    cfg.tol_mu = spec.tol_mu;
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the optimizer, writes the JSONL trace and returns the trace with its exit code.
pub fn cmd_run(spec: &RunSpec) -> anyhow::Result<(Trace, i32)> {
    let problem = resolve_problem(&spec.problem)?;
    let cfg = run_config(spec, &problem)?;
    let trace = optimize(&problem.poly, &spec.x0, &cfg)?;
    let file = fs::File::create(&spec.trace).with_context(|| format!("creating {}", spec.trace.display()))?;
    let mut out = std::io::BufWriter::new(file);
    write_trace(&trace.records, &mut out)?;
    out.flush()?;
    let code = match trace.status {
        RunStatus::Converged => EXIT_OK,
        RunStatus::BudgetExhausted => EXIT_BUDGET,
    };
    Ok((trace, code))
}

pub fn write_trace(records: &[IterationRecord], out: &mut impl Write) -> anyhow::Result<()> {
    for rec in records {
        serde_json::to_writer(&mut *out, rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_trace(input: impl BufRead) -> anyhow::Result<Vec<IterationRecord>> {
    input
        .lines()
        .enumerate()
        .filter(|(_, l)| !matches!(l, Ok(s) if s.trim().is_empty()))
        .map(|(i, line)| {
            let line = line?;
            serde_json::from_str(&line).with_context(|| format!("trace line {}", i + 1))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct CheckSpec {
    pub problem: String,
    pub point: DVector<f64>,
    pub tol_eig: Option<f64>,
    pub tol_third: Option<f64>,
}

/// Evaluates the condition check; exit code 0 when the conditions hold, 3 otherwise.
pub fn cmd_check(spec: &CheckSpec) -> anyhow::Result<(ConditionReport, i32)> {
    let problem = resolve_problem(&spec.problem)?;
    let mut tols = CheckTolerances::default();
    if let Some(e) = spec.tol_eig {
        tols.eig = e;
        tols.null = e;
    }
    if let Some(e) = spec.tol_third {
        tols.third = e;
    }
    let report = check_third_order(&problem.poly, &spec.point, &tols)?;
    let code = if report.verdict == Verdict::ThirdOrderNecessaryHolds { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok((report, code))
}
