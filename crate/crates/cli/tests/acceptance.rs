//! Acceptance suite: one line per criterion; exits non-zero if any failed.

use std::time::{Duration, Instant};

use nalgebra::{dvector, DVector};
use thirdopt::condition::{check_third_order, descent_witness, CheckTolerances, Verdict};
use thirdopt::corpus::{self, run_constants};
use thirdopt_cli::bench::{run_suite, write_csv, Row, SUITES};

struct Outcome {
    lines: Vec<String>,
    failed: usize,
}

impl Outcome {
    fn record(&mut self, id: usize, name: &str, pass: bool, detail: String, elapsed: Duration, limit: Option<f64>) {
        let secs = elapsed.as_secs_f64();
        let in_time = limit.is_none_or(|l| secs < l);
        let pass = pass && in_time;
        let limit = limit.map_or(String::new(), |l| format!(" (limit {l}s)"));
        let line = format!(
            "criterion {id:>2} {} {name}: {detail}; {secs:.3}s{limit}",
            if pass { "PASS" } else { "FAIL" }
        );
        println!("{line}");
        self.lines.push(line);
        if !pass {
            self.failed += 1;
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn select<'a>(rows: &'a [Row], check: &str) -> Vec<&'a Row> {
    rows.iter().filter(|r| r.check == check).collect()
}

fn summary(rows: &[&Row]) -> (bool, usize, f64) {
    let pass = !rows.is_empty() && rows.iter().all(|r| r.pass);
    let samples = rows.iter().map(|r| r.samples).sum();
    let worst = rows.iter().map(|r| r.measured).fold(f64::INFINITY, f64::min);
    (pass, samples, worst)
}

fn case<'a>(rows: &'a [Row], case: &str, check: &str) -> &'a Row {
    rows.iter().find(|r| r.case == case && r.check == check).unwrap_or_else(|| panic!("row {case}/{check}"))
}

fn main() {
    let mut out = Outcome { lines: Vec::new(), failed: 0 };

    let (decrease, t) = timed(|| run_suite("decrease", 0).expect("decrease suite"));
    let (pass, n, worst) = summary(&select(&decrease, "cubic_decrease"));
    out.record(1, "cubic-step decrease", pass && n >= 100, format!("{n} cubic steps, worst margin {worst:e}, tol 1e-9"), t, Some(10.0));
    let (pass, n, worst) = summary(&select(&decrease, "step_vs_mu"));
    out.record(2, "step length vs mu", pass && n >= 100, format!("{n} cubic steps, worst margin {worst:e}, tol 1e-9"), t, Some(10.0));
    let (pass, n, worst) = summary(&select(&decrease, "third_decrease"));
    out.record(3, "third-order-step decrease", pass && n >= 1, format!("{n} third-order steps, worst margin {worst:e}, tol 1e-9"), t, None);

    let (escape, t) = timed(|| run_suite("escape", 0).expect("escape suite"));
    let baseline = case(&escape, "monkey_saddle_confined/cubic_only", "max_norm");
    let full = case(&escape, "monkey_saddle_confined/full", "min_value");
    out.record(
        4,
        "degenerate-saddle escape",
        baseline.pass && full.pass,
        format!(
            "cubic-only max |x_t| = {:e} over {} iterations; full run min f = {} vs -delta = {}",
            baseline.measured, baseline.samples, full.measured, full.bound
        ),
        t,
        Some(5.0),
    );
    let value = case(&escape, "quartic_1d/from_0", "final_value");
    let dist = case(&escape, "quartic_1d/from_0", "distance_to_minimizer");
    out.record(
        5,
        "quartic escape to global minimizer",
        value.pass && dist.pass,
        format!("final f = {}, |x - x*| = {:e} (tol 1e-2)", value.measured, dist.measured),
        t,
        Some(5.0),
    );
    let norm = case(&escape, "xxy_plus_yy/origin", "final_norm");
    let verdict = case(&escape, "xxy_plus_yy/origin", "third_residual");
    out.record(
        6,
        "third-order fixed point",
        norm.pass && verdict.pass,
        format!("terminated at |x| = {} after {} records, verdict holds = {}", norm.measured, norm.samples, verdict.pass),
        t,
        Some(1.0),
    );

    let (taylor, t) = timed(|| run_suite("taylor", 0).expect("taylor suite"));
    let (pass, n, _) = summary(&taylor.iter().collect::<Vec<_>>());
    let worst = taylor.iter().map(|r| r.measured).fold(0.0, f64::max);
    out.record(7, "Taylor remainder bound", pass, format!("{n} pairs, max |rem| / (L/24 |y-x|^4) = {worst}"), t, Some(10.0));

    let (sampler, t) = timed(|| run_suite("sampler", 0).expect("sampler suite"));
    let ratio = &select(&sampler, "min_value_over_threshold")[0];
    let draws = &select(&sampler, "mean_draws")[0];
    out.record(
        8,
        "sampler guarantee",
        sampler.iter().all(|r| r.pass),
        format!("min T(u,u,u)/threshold = {:.4}, mean draws = {} over {} seeds", ratio.measured, draws.measured, draws.samples),
        t,
        Some(10.0),
    );

    let (sub, t) = timed(|| run_suite("subproblem", 0).expect("subproblem suite"));
    let gap = sub.iter().filter(|r| r.check == "model_minus_grid").map(|r| r.measured).fold(f64::NEG_INFINITY, f64::max);
    out.record(
        9,
        "subproblem oracle equivalence",
        sub.iter().all(|r| r.pass),
        format!("{} instances, max (solver - grid) = {gap:e}, certificates hold", sub.len() / 2),
        t,
        Some(30.0),
    );

    let (rate, t) = timed(|| run_suite("rate", 0).expect("rate suite"));
    let (pass, _, _) = summary(&rate.iter().collect::<Vec<_>>());
    let latest = rate.iter().map(|r| r.measured).fold(f64::NEG_INFINITY, f64::max);
    out.record(10, "rate envelope", pass, format!("{} runs with t = 100, latest qualifying iterate {latest}", rate.len()), t, Some(10.0));

    let (result, t) = timed(condition_checks);
    out.record(11, "condition-checker classification", result.0, result.1, t, Some(5.0));

    let (result, t) = timed(|| {
        let mut differing = Vec::new();
        for suite in SUITES {
            let mut first = Vec::new();
            let mut second = Vec::new();
            write_csv(&run_suite(suite, 0).unwrap(), &mut first).unwrap();
            write_csv(&run_suite(suite, 0).unwrap(), &mut second).unwrap();
            if first != second {
                differing.push(*suite);
            }
        }
        differing
    });
    out.record(
        12,
        "bench determinism",
        result.is_empty(),
        format!("{} suites run twice, differing: {:?}", SUITES.len(), result),
        t,
        None,
    );

    println!("acceptance: {} of {} criteria passed", out.lines.len() - out.failed, out.lines.len());
    if out.failed > 0 {
        std::process::exit(1);
    }
}

/// Verdicts at the corpus origins plus descent witnesses at failing points.
fn condition_checks() -> (bool, String) {
    let tols = CheckTolerances::default();
    let origin = dvector![0.0, 0.0];
    let mut ok = true;
    let mut notes = Vec::new();

    let expected = [
        ("monkey_saddle", Verdict::ThirdOrderFail),
        ("xxy_plus_yy", Verdict::ThirdOrderNecessaryHolds),
        ("wine_bottle", Verdict::SecondOrderFail),
        ("inverted_wine_bottle", Verdict::ThirdOrderNecessaryHolds),
    ];
    for (name, verdict) in expected {
        let got = check_third_order(&corpus::corpus(name).unwrap(), &origin, &tols).unwrap().verdict;
        ok &= got == verdict;
        notes.push(format!("{name}(0,0)={got:?}"));
    }

    let witness_points: [(&str, DVector<f64>); 4] = [
        ("monkey_saddle", dvector![0.0, 0.0]),
        ("monkey_saddle", dvector![1.0, 1.0]),
        ("wine_bottle", dvector![0.0, 0.0]),
        ("inverted_wine_bottle", dvector![1.0, 0.0]),
    ];
    let mut worst = f64::INFINITY;
    for (name, x) in witness_points {
        let p = corpus::corpus(name).unwrap();
        let l = run_constants(&p, 2.0).unwrap().l;
        let report = check_third_order(&p, &x, &tols).unwrap();
        match descent_witness(&p, &x, &report, l, None, 0).unwrap() {
            Some(w) => {
                ok &= w.verified(0.99);
                worst = worst.min(w.actual_decrease / w.predicted_decrease);
            }
            None => ok = false,
        }
    }
    notes.push(format!("4 witnesses, min actual/predicted decrease = {worst:.4} (need 0.99)"));
    (ok, notes.join(", "))
}
