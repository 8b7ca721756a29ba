//! Named test functions with degenerate critical points.

use crate::error::{Error, Result};
use crate::poly::{smoothness_bounds, Polynomial, SmoothnessConstants, Term, MIN_SMOOTHNESS_CONSTANT};

pub const CORPUS_NAMES: &[&str] = &[
    "monkey_saddle",
    "monkey_saddle_confined",
    "xxy_plus_yy",
    "quartic_1d",
    "wine_bottle",
    "inverted_wine_bottle",
    "quartic_plus_sixth",
    "quadratic",
];

fn term2(coeff: f64, ex: u32, ey: u32) -> Term {
    Term { coeff, exponents: vec![ex, ey] }
}

/// `−3x²y + y³`. Unbounded below; the origin is a second- but not third-order minimum.
pub fn monkey_saddle() -> Polynomial {
    Polynomial::new(2, vec![term2(-3.0, 2, 1), term2(1.0, 0, 3)]).expect("valid")
}

/// `−3x²y + y³ + (x² + y²)²`, bounded below with three global minima at radius 3/4.
pub fn monkey_saddle_confined() -> Polynomial {
    let r2 = Polynomial::norm_squared(2);
    monkey_saddle().add(&r2.mul(&r2).expect("degree 4"))
}

/// `x²y + y²`: the origin is a third-order local minimum but not a fourth-order one.
pub fn xxy_plus_yy() -> Polynomial {
    Polynomial::new(2, vec![term2(1.0, 2, 1), term2(1.0, 0, 2)]).expect("valid")
}

/// `x² − 100x³ + x⁴` in one variable.
pub fn quartic_1d() -> Polynomial {
    Polynomial::new(
        1,
        vec![
            Term { coeff: 1.0, exponents: vec![2] },
            Term { coeff: -100.0, exponents: vec![3] },
            Term { coeff: 1.0, exponents: vec![4] },
        ],
    )
    .expect("valid")
}

/// `((x² + y²) − 1)²`: a local maximum at the origin and a circle of degenerate minima.
pub fn wine_bottle() -> Polynomial {
    let u = Polynomial::norm_squared(2).sub(&Polynomial::constant(2, 1.0));
    u.mul(&u).expect("degree 4")
}

/// `((x² + y²) − 1)³`: a strict minimum at the origin and a circle of
/// degenerate saddles (zero Hessian, non-zero third derivative) at radius 1.
pub fn inverted_wine_bottle() -> Polynomial {
    let u = Polynomial::norm_squared(2).sub(&Polynomial::constant(2, 1.0));
    u.pow(3).expect("degree 6")
}

/// `g(x) = f(x) + ‖x‖⁶` for a homogeneous quartic `f`.
pub fn quartic_plus_sixth(quartic: &Polynomial) -> Result<Polynomial> {
    if !quartic.is_homogeneous(4) {
        return Err(Error::InvalidConfig("quartic_plus_sixth needs a homogeneous degree-4 polynomial".into()));
    }
    let r2 = Polynomial::norm_squared(quartic.dim());
    Ok(quartic.add(&r2.pow(3)?))
}

/// The default quartic `x⁴ − 4x²y² + y⁴`, negative along `x = y`.
pub fn default_quartic() -> Polynomial {
    Polynomial::new(2, vec![term2(1.0, 4, 0), term2(-4.0, 2, 2), term2(1.0, 0, 4)]).expect("valid")
}

/// `x² + y²`.
pub fn quadratic() -> Polynomial {
    Polynomial::norm_squared(2)
}

pub fn corpus(name: &str) -> Result<Polynomial> {
    Ok(match name {
        "monkey_saddle" => monkey_saddle(),
        "monkey_saddle_confined" => monkey_saddle_confined(),
        "xxy_plus_yy" => xxy_plus_yy(),
        "quartic_1d" => quartic_1d(),
        "wine_bottle" => wine_bottle(),
        "inverted_wine_bottle" => inverted_wine_bottle(),
        "quartic_plus_sixth" => quartic_plus_sixth(&default_quartic())?,
        "quadratic" => quadratic(),
        other => return Err(Error::UnknownProblem(other.to_string())),
    })
}

/// Radius of a ball that contains the sublevel sets the default runs explore.
pub fn default_radius(name: &str) -> f64 {
    match name {
        "monkey_saddle" | "monkey_saddle_confined" | "xxy_plus_yy" => 1.0,
        "quartic_1d" => 80.0,
        _ => 2.0,
    }
}

/// Smoothness constants for an optimizer run on the ball of `radius`.
///
/// A derivative that is identically constant has Lipschitz constant 0, so any
/// positive value is valid; runs use 1 instead of the tiny floor so that
/// third-order step lengths `C_Q/(LQ)` stay moderate.
pub fn run_constants(p: &Polynomial, radius: f64) -> Result<SmoothnessConstants> {
    let mut s = smoothness_bounds(p, radius)?;
    if s.r <= MIN_SMOOTHNESS_CONSTANT {
        s.r = 1.0;
    }
    if s.l <= MIN_SMOOTHNESS_CONSTANT {
        s.l = 1.0;
    }
    Ok(s)
}
