use nalgebra::{dvector, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thirdopt::condition::{check_third_order, CheckTolerances, Verdict};
use thirdopt::corpus::{self, default_radius, run_constants};
use thirdopt::escape::{optimize, strict_saddle_hit, OptimizerConfig, Phase, RunStatus};
use thirdopt::Polynomial;

const BOUNDED: &[&str] = &[
    "monkey_saddle_confined",
    "quartic_1d",
    "wine_bottle",
    "inverted_wine_bottle",
    "quartic_plus_sixth",
    "quadratic",
];

fn config_for(name: &str, p: &Polynomial, seed: u64) -> OptimizerConfig {
    let s = run_constants(p, default_radius(name)).unwrap();
    OptimizerConfig { seed, ..OptimizerConfig::with_constants(s.r, s.l) }
}

fn start(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(-0.9..0.9))
}

#[test]
fn runtime_checks_hold_on_corpus_runs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in BOUNDED {
        let p = corpus::corpus(name).unwrap();
        for seed in 0..10 {
            let cfg = config_for(name, &p, seed);
            let x0 = start(&mut rng, p.dim());
            let trace = optimize(&p, &x0, &cfg).unwrap();
            for rec in &trace.records {
                assert!(rec.flags.all_ok(), "{name} seed {seed} iter {}: {:?}", rec.iter, rec.flags);
            }
            let scale = trace.records.iter().fold(trace.f0.abs(), |m, r| m.max(r.f.abs()));
            assert!(trace.is_monotone(1e-9 + 8.0 * f64::EPSILON * scale), "{name} seed {seed}");
            assert!(trace.final_value() <= p.eval(&x0) + 1e-9);
        }
    }
}

#[test]
fn converged_runs_pass_the_condition_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for name in BOUNDED {
        let p = corpus::corpus(name).unwrap();
        for seed in 0..5 {
            let cfg = config_for(name, &p, seed);
            let x0 = start(&mut rng, p.dim());
            let trace = optimize(&p, &x0, &cfg).unwrap();
            if trace.status != RunStatus::Converged {
                continue;
            }
            assert_eq!(trace.records.last().unwrap().phase, Phase::Terminal);
            let tols = CheckTolerances::for_run(&cfg, p.dim());
            let report = check_third_order(&p, &trace.final_x, &tols).unwrap();
            assert_eq!(report.verdict, Verdict::ThirdOrderNecessaryHolds, "{name} seed {seed}: {report:?}");
        }
    }
}

#[test]
fn degenerate_saddles_are_left() {
    // Starting exactly on a degenerate saddle, where only the third
    // derivative shows a descent direction.
    let cases: &[(&str, DVector<f64>)] = &[
        ("monkey_saddle_confined", dvector![0.0, 0.0]),
        ("inverted_wine_bottle", dvector![1.0, 0.0]),
        ("inverted_wine_bottle", dvector![0.0, -1.0]),
        ("quartic_1d", dvector![0.0]),
    ];
    for (name, x0) in cases {
        let p = corpus::corpus(name).unwrap();
        let f0 = p.eval(x0);
        let cfg = config_for(name, &p, 3);
        let trace = optimize(&p, x0, &cfg).unwrap();
        assert!(trace.third_steps() >= 1, "{name} from {x0}");
        assert!(trace.final_value() < f0 - 1e-3, "{name} from {x0}: {}", trace.final_value());
        assert!(trace.all_flags_ok());
    }
}

#[test]
fn circle_of_bottle_minima_is_terminal() {
    let p = corpus::wine_bottle();
    let x0 = dvector![0.6, 0.8];
    let cfg = config_for("wine_bottle", &p, 0);
    let trace = optimize(&p, &x0, &cfg).unwrap();
    assert_eq!(trace.status, RunStatus::Converged);
    assert_eq!(trace.third_steps(), 0);
    assert!(trace.final_value().abs() < 1e-12);
}

#[test]
fn strict_saddle_hit_on_quadratic() {
    let p = corpus::quadratic();
    let cfg = config_for("quadratic", &p, 0);
    let trace = optimize(&p, &dvector![1.0, 1.0], &cfg).unwrap();
    assert!(strict_saddle_hit(&trace, 1e-6, 1e-6, 1e-6).is_some());
    assert_eq!(trace.third_steps(), 0);
}

#[test]
fn runs_are_deterministic() {
    let p = corpus::monkey_saddle_confined();
    let cfg = config_for("monkey_saddle_confined", &p, 11);
    let a = optimize(&p, &dvector![0.0, 0.0], &cfg).unwrap();
    let b = optimize(&p, &dvector![0.0, 0.0], &cfg).unwrap();
    assert_eq!(a.records, b.records);
    assert_eq!(a.final_x, b.final_x);
}

#[test]
fn condition_verdicts_on_corpus_points() {
    let tols = CheckTolerances::default();
    let verdict = |name: &str, x: DVector<f64>| {
        check_third_order(&corpus::corpus(name).unwrap(), &x, &tols).unwrap().verdict
    };
    assert_eq!(verdict("wine_bottle", dvector![0.0, 0.0]), Verdict::SecondOrderFail);
    assert_eq!(verdict("wine_bottle", dvector![0.0, 1.0]), Verdict::ThirdOrderNecessaryHolds);
    assert_eq!(verdict("inverted_wine_bottle", dvector![1.0, 0.0]), Verdict::ThirdOrderFail);
    assert_eq!(verdict("inverted_wine_bottle", dvector![0.0, 0.0]), Verdict::ThirdOrderNecessaryHolds);
    assert_eq!(verdict("quartic_1d", dvector![0.0]), Verdict::ThirdOrderNecessaryHolds);
    assert_eq!(verdict("quadratic", dvector![0.0, 0.0]), Verdict::ThirdOrderNecessaryHolds);
}
