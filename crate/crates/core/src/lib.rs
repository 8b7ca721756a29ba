//! Finding third-order local minima of smooth non-convex functions.
//!
//! The optimizer alternates cubic-regularized Newton steps, which handle
//! gradients and negative curvature, with randomized third-order steps taken
//! inside a *competitive subspace*: a low-curvature eigensubspace of the
//! Hessian where the third-derivative tensor dominates. Degenerate saddles
//! such as the origin of the monkey saddle, invisible to first- and
//! second-order information, are escaped this way.
//!
//! Alongside the optimizer the crate verifies the third-order necessary
//! conditions at a point and, when they fail, produces an explicit descent
//! direction and step.
//!
//! ```
//! use nalgebra::dvector;
//! use thirdopt::{corpus, escape::{optimize, OptimizerConfig}};
//!
//! let f = corpus::monkey_saddle_confined();
//! let s = corpus::run_constants(&f, 1.0).unwrap();
//! let cfg = OptimizerConfig { seed: 7, ..OptimizerConfig::with_constants(s.r, s.l) };
//! let trace = optimize(&f, &dvector![0.0, 0.0], &cfg).unwrap();
//! assert!(trace.final_value() < -0.1);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod condition;
pub mod corpus;
pub mod cubic;
pub mod error;
pub mod escape;
pub mod poly;
pub mod spectral;
pub mod tensor;

pub use error::{Error, Result};
pub use poly::{DerivOrder, DerivativeBundle, Objective, Polynomial, SmoothnessConstants, Term};
pub use tensor::SymTensor3;
