//! Brute-force and exact-arithmetic references used by the bench suites.

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use thirdopt::Polynomial;

fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite input")
}

fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn monomial(exponents: &[u32], xs: &[BigRational], skip: Option<usize>) -> BigRational {
    let mut acc = BigRational::one();
    for (i, (&e, x)) in exponents.iter().zip(xs).enumerate() {
        let e = if Some(i) == skip { e - 1 } else { e };
        if e > 0 {
            acc *= Pow::pow(x, e);
        }
    }
    acc
}

/// `p(x)` evaluated without rounding, then rounded once.
pub fn exact_value(p: &Polynomial, x: &DVector<f64>) -> f64 {
    let xs: Vec<BigRational> = x.iter().map(|&v| exact(v)).collect();
    let total = p
        .terms()
        .iter()
        .fold(BigRational::zero(), |acc, t| acc + exact(t.coeff) * monomial(&t.exponents, &xs, None));
    to_f64(&total)
}

/// Difference `p(a) − p(b)` evaluated without rounding.
pub fn exact_difference(p: &Polynomial, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let xa: Vec<BigRational> = a.iter().map(|&v| exact(v)).collect();
    let xb: Vec<BigRational> = b.iter().map(|&v| exact(v)).collect();
    let total = p.terms().iter().fold(BigRational::zero(), |acc, t| {
        acc + exact(t.coeff) * (monomial(&t.exponents, &xa, None) - monomial(&t.exponents, &xb, None))
    });
    to_f64(&total)
}

/// `∇p(x)` evaluated without rounding, then rounded once per entry.
pub fn exact_gradient(p: &Polynomial, x: &DVector<f64>) -> DVector<f64> {
    let xs: Vec<BigRational> = x.iter().map(|&v| exact(v)).collect();
    let mut grad = vec![BigRational::zero(); p.dim()];
    for t in p.terms() {
        for (i, &e) in t.exponents.iter().enumerate() {
            if e > 0 {
                grad[i] += exact(t.coeff) * BigRational::from_integer(e.into()) * monomial(&t.exponents, &xs, Some(i));
            }
        }
    }
    DVector::from_iterator(p.dim(), grad.iter().map(to_f64))
}

fn binom(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Order-3 Taylor remainder `p(y) − T₃(y; x)` in exact arithmetic: the pieces
/// of total degree at least 4 in `d = y − x` of the binomial expansion of
/// each monomial of `p(x + d)`.
pub fn taylor_remainder(p: &Polynomial, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let xs: Vec<BigRational> = x.iter().map(|&v| exact(v)).collect();
    let ds: Vec<BigRational> = y.iter().zip(x.iter()).map(|(&a, &b)| exact(a) - exact(b)).collect();
    let mut total = BigRational::zero();
    for t in p.terms() {
        let e = &t.exponents;
        let mut k = vec![0u32; e.len()];
        loop {
            if k.iter().sum::<u32>() >= 4 {
                let mut piece = exact(t.coeff);
                for i in 0..e.len() {
                    piece *= BigRational::from_integer(binom(e[i], k[i]).into())
                        * Pow::pow(&xs[i], e[i] - k[i])
                        * Pow::pow(&ds[i], k[i]);
                }
                total += piece;
            }
            let mut i = 0;
            while i < e.len() && k[i] == e[i] {
                k[i] = 0;
                i += 1;
            }
            if i == e.len() {
                break;
            }
            k[i] += 1;
        }
    }
    to_f64(&total)
}

/// Minimum of `f` over a `pts × pts` grid on `[lo, hi]²`, with its location.
pub fn grid_min_2d(f: impl Fn(f64, f64) -> f64, lo: f64, hi: f64, pts: usize) -> (f64, [f64; 2]) {
    let at = |i: usize| lo + (hi - lo) * i as f64 / (pts - 1) as f64;
    let mut best = (f64::INFINITY, [lo, lo]);
    for i in 0..pts {
        let a = at(i);
        for j in 0..pts {
            let b = at(j);
            let v = f(a, b);
            if v < best.0 {
                best = (v, [a, b]);
            }
        }
    }
    best
}

/// Minimum of the 2-D cubic model `gᵀs + ½sᵀHs + (R/6)‖s‖³` over grid points
/// of `[−radius, radius]²` inside the ball of that radius.
pub fn grid_min_cubic_model(g: &DVector<f64>, h: &DMatrix<f64>, r: f64, radius: f64, pts: usize) -> f64 {
    let model = |s0: f64, s1: f64| {
        let n2 = s0 * s0 + s1 * s1;
        if n2 > radius * radius {
            return f64::INFINITY;
        }
        g[0] * s0
            + g[1] * s1
            + 0.5 * (h[(0, 0)] * s0 * s0 + 2.0 * h[(0, 1)] * s0 * s1 + h[(1, 1)] * s1 * s1)
            + r / 6.0 * n2 * n2.sqrt()
    };
    grid_min_2d(model, -radius, radius, pts).0
}

/// Root of `f` in `[a, b]` by bisection; `f(a)` and `f(b)` must differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Option<f64> {
    let mut fa = f(a);
    if fa == 0.0 {
        return Some(a);
    }
    if fa.signum() == f(b).signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}
