//! Exact multivariate polynomial objectives with analytic derivatives up to
//! third order, plus finite-difference and smoothness-bound utilities that
//! work for any [`Objective`].

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::SymTensor3;

/// Default cap on the total degree of a monomial; admits the `‖x‖⁶` family.
pub const DEFAULT_MAX_DEGREE: u32 = 6;

/// Floor reported by [`smoothness_bounds`] when a derivative is identically constant.
pub const MIN_SMOOTHNESS_CONSTANT: f64 = 1e-6;

/// Highest derivative order to compute; lower orders are always filled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DerivOrder {
    Value = 0,
    Gradient = 1,
    Hessian = 2,
    Third = 3,
}

/// Value, gradient, Hessian and third-derivative tensor at a point.
/// Orders above the requested one are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeBundle {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
    pub third: SymTensor3,
}

impl DerivativeBundle {
    pub fn zeros(n: usize) -> Self {
        Self { value: 0.0, grad: DVector::zeros(n), hess: DMatrix::zeros(n, n), third: SymTensor3::zeros(n) }
    }
}

/// A smooth function `R^n → R` that can report derivatives up to third order.
///
/// [`Polynomial`] is the canonical implementation; user functions can
/// implement this directly with the same contract.
pub trait Objective {
    fn dim(&self) -> usize;

    fn derivatives(&self, x: &DVector<f64>, order: DerivOrder) -> Result<DerivativeBundle>;

    fn value(&self, x: &DVector<f64>) -> Result<f64> {
        Ok(self.derivatives(x, DerivOrder::Value)?.value)
    }

    /// Bound on the floating-point error in the norm of the computed gradient.
    fn gradient_error(&self, x: &DVector<f64>) -> Result<f64> {
        check_point(self.dim(), x)?;
        Ok(0.0)
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn derivatives(&self, x: &DVector<f64>, order: DerivOrder) -> Result<DerivativeBundle> {
        (**self).derivatives(x, order)
    }
    fn value(&self, x: &DVector<f64>) -> Result<f64> {
        (**self).value(x)
    }
    fn gradient_error(&self, x: &DVector<f64>) -> Result<f64> {
        (**self).gradient_error(x)
    }
}

/// Checks a point against an objective's dimension and rejects non-finite coordinates.
pub fn check_point(dim: usize, x: &DVector<f64>) -> Result<()> {
    if x.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: x.len() });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("point coordinates"));
    }
    Ok(())
}

/// One monomial `coeff · Π x_i^{e_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

impl Term {
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Indices with a positive exponent.
    fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponents.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    /// `∂^k/∂x_{idx[0]}…∂x_{idx[k-1]}` of this monomial at `x`.
    fn partial(&self, idx: &[usize], x: &DVector<f64>) -> f64 {
        let mut out = self.coeff;
        for (s, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let c = idx.iter().filter(|&&i| i == s).count() as u32;
            if c > e {
                return 0.0;
            }
            out *= falling(e, c) * x[s].powi((e - c) as i32);
        }
        out
    }
}

fn falling(e: u32, c: u32) -> f64 {
    (0..c).map(|j| (e - j) as f64).product()
}

/// A multivariate polynomial in canonical form: terms sorted by exponent
/// vector, no duplicate multi-indices, no zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    dim: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    /// Validates and canonicalizes `terms`. Duplicate multi-indices are an error.
    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self> {
        Self::with_max_degree(dim, terms, DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(dim: usize, terms: Vec<Term>, max_degree: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for t in terms {
            if t.exponents.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: t.exponents.len() });
            }
            if !t.coeff.is_finite() {
                return Err(Error::NonFinite("polynomial coefficient"));
            }
            let degree = t.degree();
            if degree > max_degree {
                return Err(Error::DegreeTooHigh { degree, max: max_degree });
            }
            if map.insert(t.exponents.clone(), t.coeff).is_some() {
                return Err(Error::DuplicateMonomial(t.exponents));
            }
        }
        Ok(Self::from_map(dim, map))
    }

    fn from_map(dim: usize, map: BTreeMap<Vec<u32>, f64>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(exponents, coeff)| Term { coeff, exponents })
            .collect();
        Self { dim, terms }
    }

    fn to_map(&self) -> BTreeMap<Vec<u32>, f64> {
        self.terms.iter().map(|t| (t.exponents.clone(), t.coeff)).collect()
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::from_map(dim, BTreeMap::from([(vec![0; dim], c)]))
    }

    /// The coordinate function `x_i`.
    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::from_map(dim, BTreeMap::from([(e, 1.0)]))
    }

    /// `‖x‖²`.
    pub fn norm_squared(dim: usize) -> Self {
        let mut p = Self::zero(dim);
        for i in 0..dim {
            let x = Self::var(dim, i);
            p = p.add(&x.mul(&x).expect("degree 2"));
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(Term::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, other.dim, "polynomial dimensions differ");
        let mut map = self.to_map();
        for t in &other.terms {
            *map.entry(t.exponents.clone()).or_insert(0.0) += t.coeff;
        }
        Self::from_map(self.dim, map)
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Self::from_map(self.dim, self.terms.iter().map(|t| (t.exponents.clone(), t.coeff * s)).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-1.0))
    }

    /// Product, rejected if a resulting monomial exceeds [`DEFAULT_MAX_DEGREE`].
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        assert_eq!(self.dim, other.dim, "polynomial dimensions differ");
        let mut map = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let e: Vec<u32> = a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect();
                let degree: u32 = e.iter().sum();
                if degree > DEFAULT_MAX_DEGREE {
                    return Err(Error::DegreeTooHigh { degree, max: DEFAULT_MAX_DEGREE });
                }
                *map.entry(e).or_insert(0.0) += a.coeff * b.coeff;
            }
        }
        Ok(Self::from_map(self.dim, map))
    }

    pub fn pow(&self, k: u32) -> Result<Polynomial> {
        let mut out = Self::constant(self.dim, 1.0);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// True when every monomial has total degree exactly `d`.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.iter().all(|t| t.degree() == d)
    }

    /// Parses the `{"dim": n, "terms": [{"coeff": c, "exponents": [...]}]}` schema.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: PolynomialJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.dim, raw.terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolynomialJson { dim: self.dim, terms: self.terms.clone() })
            .expect("polynomial serializes")
    }

    /// Value only, without allocating derivative storage.
    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.exponents
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(t.coeff, |acc, (i, &e)| acc * x[i].powi(e as i32))
            })
            .sum()
    }

    /// Exact derivatives up to `order`; higher orders are zeroed.
    pub fn eval_bundle(&self, x: &DVector<f64>, order: DerivOrder) -> Result<DerivativeBundle> {
        check_point(self.dim, x)?;
        let n = self.dim;
        let mut out = DerivativeBundle::zeros(n);
        out.value = self.eval(x);
        if order == DerivOrder::Value {
            return Ok(out);
        }
        let mut third = vec![0.0; n * n * n];
        for t in &self.terms {
            let support: Vec<usize> = t.support().collect();
            for (a, &i) in support.iter().enumerate() {
                out.grad[i] += t.partial(&[i], x);
                if order < DerivOrder::Hessian {
                    continue;
                }
                for (b, &j) in support.iter().enumerate().skip(a) {
                    let h = t.partial(&[i, j], x);
                    out.hess[(i, j)] += h;
                    if i != j {
                        out.hess[(j, i)] += h;
                    }
                    if order < DerivOrder::Third {
                        continue;
                    }
                    for &k in &support[b..] {
                        let v = t.partial(&[i, j, k], x);
                        if v == 0.0 {
                            continue;
                        }
                        for (p, q, r) in distinct_perms(i, j, k) {
                            third[(p * n + q) * n + r] += v;
                        }
                    }
                }
            }
        }
        if order == DerivOrder::Third {
            out.third = SymTensor3::from_symmetric_unchecked(n, third);
        }
        Ok(out)
    }

    /// Frobenius norm of an entrywise bound on the order-`k` derivative tensor
    /// over the ball `‖x‖ ≤ radius`. Each entry is bounded by summing
    /// `|coeff| · falling factorials · radius^(degree − k)` over the terms
    /// that contribute to it.
    pub fn derivative_norm_bound(&self, k: usize, radius: f64) -> f64 {
        let mut entries: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for t in &self.terms {
            let support: Vec<usize> = t.support().collect();
            let deg = t.degree() as i32;
            for ms in multisets(&support, k) {
                let coeff = t.partial_coefficient(&ms);
                if coeff == 0.0 {
                    continue;
                }
                let bound = coeff.abs() * radius.powi(deg - k as i32);
                *entries.entry(ms).or_insert(0.0) += bound;
            }
        }
        entries
            .iter()
            .map(|(ms, b)| permutation_count(ms) * b * b)
            .sum::<f64>()
            .sqrt()
    }
}

impl Term {
    /// Constant factor of the partial derivative (`coeff · Π falling(e, c)`), 0 if it vanishes.
    fn partial_coefficient(&self, idx: &[usize]) -> f64 {
        let mut out = self.coeff;
        for (s, &e) in self.exponents.iter().enumerate() {
            let c = idx.iter().filter(|&&i| i == s).count() as u32;
            if c > e {
                return 0.0;
            }
            out *= falling(e, c);
        }
        out
    }
}

/// Sorted multisets of size `k` drawn from `items` (assumed sorted, distinct).
fn multisets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in start..items.len() {
            cur.push(items[a]);
            rec(items, k, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Number of distinct orderings of a sorted multiset.
fn permutation_count(ms: &[usize]) -> f64 {
    let fact = |m: usize| (1..=m).map(|v| v as f64).product::<f64>();
    let mut denom = 1.0;
    let mut run = 1;
    for w in ms.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= fact(run);
            run = 1;
        }
    }
    denom *= fact(run);
    fact(ms.len()) / denom
}

/// Distinct index permutations of `(i, j, k)` with `i ≤ j ≤ k`.
fn distinct_perms(i: usize, j: usize, k: usize) -> Vec<(usize, usize, usize)> {
    let mut v = vec![(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)];
    v.sort_unstable();
    v.dedup();
    v
}

impl Objective for Polynomial {
    fn dim(&self) -> usize {
        self.dim
    }

    fn derivatives(&self, x: &DVector<f64>, order: DerivOrder) -> Result<DerivativeBundle> {
        self.eval_bundle(x, order)
    }

    fn value(&self, x: &DVector<f64>) -> Result<f64> {
        check_point(self.dim, x)?;
        Ok(self.eval(x))
    }

    /// `γ_k ‖Σ_t |∇t(x)|‖` with `k = degree + #terms`, the usual running bound
    /// for products and sums evaluated in floating point.
    fn gradient_error(&self, x: &DVector<f64>) -> Result<f64> {
        check_point(self.dim, x)?;
        let mut abs = DVector::<f64>::zeros(self.dim);
        for t in &self.terms {
            for i in t.support() {
                abs[i] += t.partial(&[i], x).abs();
            }
        }
        let k = (self.degree() as usize + self.terms.len()) as f64 * f64::EPSILON;
        Ok(k / (1.0 - k) * abs.norm())
    }
}

/// Max relative residual per derivative order between central differences
/// and the analytic derivatives.
///
/// The gradient is differenced from values, the Hessian from analytic
/// gradients and the third tensor from analytic Hessians. Residuals are
/// `max |fd − exact| / max(1, max |exact|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdResiduals {
    pub grad: f64,
    pub hess: f64,
    pub third: f64,
}

impl FdResiduals {
    pub fn max(&self) -> f64 {
        self.grad.max(self.hess).max(self.third)
    }
}

pub fn fd_check<F: Objective + ?Sized>(f: &F, x: &DVector<f64>, h: f64) -> Result<FdResiduals> {
    if !(h > 0.0) {
        return Err(Error::InvalidConfig(format!("finite-difference step must be positive, got {h}")));
    }
    check_point(f.dim(), x)?;
    let n = f.dim();
    let exact = f.derivatives(x, DerivOrder::Third)?;
    let shifted = |i: usize, s: f64| {
        let mut y = x.clone();
        y[i] += s;
        y
    };

    let mut grad_err = 0.0_f64;
    let mut hess_err = 0.0_f64;
    let mut third_err = 0.0_f64;
    for i in 0..n {
        let plus = f.derivatives(&shifted(i, h), DerivOrder::Hessian)?;
        let minus = f.derivatives(&shifted(i, -h), DerivOrder::Hessian)?;
        let dg = (plus.value - minus.value) / (2.0 * h);
        grad_err = grad_err.max((dg - exact.grad[i]).abs());
        for j in 0..n {
            let dh = (plus.grad[j] - minus.grad[j]) / (2.0 * h);
            hess_err = hess_err.max((dh - exact.hess[(i, j)]).abs());
            for k in 0..n {
                let dt = (plus.hess[(j, k)] - minus.hess[(j, k)]) / (2.0 * h);
                third_err = third_err.max((dt - exact.third.get(i, j, k)).abs());
            }
        }
    }
    let rel = |err: f64, scale: f64| err / scale.max(1.0);
    Ok(FdResiduals {
        grad: rel(grad_err, exact.grad.amax()),
        hess: rel(hess_err, exact.hess.amax()),
        third: rel(third_err, exact.third.entries().iter().fold(0.0_f64, |m, v| m.max(v.abs()))),
    })
}

/// Lipschitz bounds `R` (Hessian, operator norm) and `L` (third derivative,
/// Frobenius norm) valid on the ball `‖x‖ ≤ valid_radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessConstants {
    pub r: f64,
    pub l: f64,
    pub valid_radius: f64,
}

/// Term-wise upper bounds on the Hessian and third-derivative Lipschitz
/// constants over the ball of the given radius.
///
/// `R ≤ sup ‖∇³f‖_F` and `L ≤ sup ‖∇⁴f‖_F`, each bounded entrywise. A bound
/// of zero (derivative identically constant) is reported as
/// [`MIN_SMOOTHNESS_CONSTANT`].
pub fn smoothness_bounds(p: &Polynomial, radius: f64) -> Result<SmoothnessConstants> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidConfig(format!("radius must be positive, got {radius}")));
    }
    let r = p.derivative_norm_bound(3, radius).max(MIN_SMOOTHNESS_CONSTANT);
    let l = p.derivative_norm_bound(4, radius).max(MIN_SMOOTHNESS_CONSTANT);
    Ok(SmoothnessConstants { r, l, valid_radius: radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn monkey() -> Polynomial {
        Polynomial::new(
            2,
            vec![Term { coeff: -3.0, exponents: vec![2, 1] }, Term { coeff: 1.0, exponents: vec![0, 3] }],
        )
        .unwrap()
    }

    #[test]
    fn quadratic_derivatives() {
        let p = Polynomial::norm_squared(2);
        let b = p.eval_bundle(&dvector![1.0, 2.0], DerivOrder::Third).unwrap();
        assert_eq!(b.value, 5.0);
        assert_eq!(b.grad, dvector![2.0, 4.0]);
        assert_eq!(b.hess, DMatrix::from_diagonal(&dvector![2.0, 2.0]));
        assert!(b.third.is_zero());
    }

    #[test]
    fn monkey_saddle_origin() {
        let b = monkey().eval_bundle(&dvector![0.0, 0.0], DerivOrder::Third).unwrap();
        assert_eq!(b.value, 0.0);
        assert_eq!(b.grad, dvector![0.0, 0.0]);
        assert_eq!(b.hess, DMatrix::zeros(2, 2));
        assert_eq!(b.third.get(0, 0, 1), -6.0);
        assert_eq!(b.third.get(0, 1, 0), -6.0);
        assert_eq!(b.third.get(1, 0, 0), -6.0);
        assert_eq!(b.third.get(1, 1, 1), 6.0);
        assert_eq!(b.third.get(0, 0, 0), 0.0);
        assert_eq!(b.third.get(0, 1, 1), 0.0);
    }

    #[test]
    fn higher_orders_zeroed() {
        let b = monkey().eval_bundle(&dvector![0.3, 0.1], DerivOrder::Gradient).unwrap();
        assert_eq!(b.hess, DMatrix::zeros(2, 2));
        assert!(b.third.is_zero());
        assert!(b.grad.norm() > 0.0);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(matches!(
            monkey().eval_bundle(&dvector![1.0], DerivOrder::Value),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
        assert!(monkey().eval_bundle(&dvector![f64::NAN, 0.0], DerivOrder::Value).is_err());
    }

    #[test]
    fn fd_residuals() {
        let q = Polynomial::norm_squared(3);
        let r = fd_check(&q, &dvector![0.4, -1.2, 2.0], 1e-4).unwrap();
        assert!(r.grad < 1e-8, "{r:?}");

        let r = fd_check(&monkey(), &dvector![0.3, -0.2], 1e-4).unwrap();
        assert!(r.max() < 1e-5, "{r:?}");

        let z = Polynomial::zero(2);
        let r = fd_check(&z, &dvector![0.3, -0.2], 1e-4).unwrap();
        assert_eq!(r, FdResiduals { grad: 0.0, hess: 0.0, third: 0.0 });

        assert!(fd_check(&z, &dvector![0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn json_round_trip_and_duplicates() {
        let p = monkey();
        let back = Polynomial::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);

        let dup = r#"{"dim": 2, "terms": [{"coeff": 1.0, "exponents": [1, 0]}, {"coeff": 2.0, "exponents": [1, 0]}]}"#;
        assert!(matches!(Polynomial::from_json(dup), Err(Error::DuplicateMonomial(_))));

        let bad_len = r#"{"dim": 2, "terms": [{"coeff": 1.0, "exponents": [1]}]}"#;
        assert!(matches!(Polynomial::from_json(bad_len), Err(Error::DimensionMismatch { .. })));

        let too_high = r#"{"dim": 1, "terms": [{"coeff": 1.0, "exponents": [7]}]}"#;
        assert!(matches!(Polynomial::from_json(too_high), Err(Error::DegreeTooHigh { degree: 7, max: 6 })));

        assert!(matches!(Polynomial::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn smoothness_examples() {
        // x² − 100x³ + x⁴: f'''' = 24.
        let q = Polynomial::new(
            1,
            vec![
                Term { coeff: 1.0, exponents: vec![2] },
                Term { coeff: -100.0, exponents: vec![3] },
                Term { coeff: 1.0, exponents: vec![4] },
            ],
        )
        .unwrap();
        let s = smoothness_bounds(&q, 5.0).unwrap();
        assert_eq!(s.l, 24.0);
        // |f'''| = |−600 + 24x| ≤ 600 + 24·5
        assert_eq!(s.r, 720.0);

        let quad = Polynomial::norm_squared(2);
        let s = smoothness_bounds(&quad, 1.0).unwrap();
        assert_eq!(s.r, MIN_SMOOTHNESS_CONSTANT);
        assert_eq!(s.l, MIN_SMOOTHNESS_CONSTANT);

        let s = smoothness_bounds(&monkey(), 1.0).unwrap();
        assert!((s.r - 12.0).abs() < 1e-12);
        assert_eq!(s.l, MIN_SMOOTHNESS_CONSTANT);

        assert!(smoothness_bounds(&monkey(), 0.0).is_err());
    }

    #[test]
    fn algebra() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = x.mul(&x).unwrap().mul(&y).unwrap().add(&y.mul(&y).unwrap());
        assert_eq!(p.eval(&dvector![2.0, 3.0]), 12.0 + 9.0);
        assert_eq!(p.degree(), 3);
        assert!(x.pow(7).is_err());
        assert_eq!(p.sub(&p), Polynomial::zero(2));
    }

    #[test]
    fn multiset_helpers() {
        assert_eq!(multisets(&[0, 1], 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(permutation_count(&[0, 0, 1]), 3.0);
        assert_eq!(permutation_count(&[0, 1, 2]), 6.0);
        assert_eq!(permutation_count(&[2, 2, 2, 2]), 1.0);
        assert_eq!(distinct_perms(0, 0, 1).len(), 3);
    }
}
