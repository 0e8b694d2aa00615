//! Numerical verification and construction of the solution structure of the
//! transport equation `f'_x + f'_y = 0` and its higher-order and
//! vector-valued generalizations.
//!
//! The crate provides:
//! - an evaluatable-field model with a catalog of classical solution and
//!   counterexample functions ([`function_model`]),
//! - finite-difference machinery with ordered derivative paths and
//!   step-refinement divergence detection ([`differencing`]),
//! - the discretized auxiliary delta-window function of difference quotients
//!   and its upper-semicontinuity check ([`baire_lambda`]),
//! - oscillation maps, discontinuity-set estimation and pointwise-Lipschitz
//!   analysis ([`regularity`]),
//! - constructive decompositions: characteristic profiles, the order-n
//!   polynomial-in-`(x+y)` representation, and the traveling-wave split
//!   ([`decomposition`]),
//! - a finite-dimensional vector-valued instantiation through coordinate
//!   functionals ([`vector_transport`]).
//!
//! All numeric code is generic over the scalar type ([`Scalar`]); the
//! concrete aliases below fix `f64`, which the shipped tolerances assume.

pub mod baire_lambda;
pub mod decomposition;
pub mod differencing;
pub mod error;
pub mod function_model;
pub mod geometry;
pub mod regularity;
pub mod scalar;
pub mod vector_transport;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Scalar type used by the CLI and the acceptance suite.
pub type Real = f64;

/// Evaluatable field over [`Real`].
pub type RealFunction2D = function_model::Function2D<Real>;

/// Grid sample over [`Real`].
pub type RealGridSample = function_model::GridSample<Real>;

/// Sampled profile over [`Real`].
pub type RealProfile1D = function_model::Profile1D<Real>;
