//! Certified sup-norm bounds for harmonic functions on cylinders whose growth
//! toward the mid-hyperplane is controlled by a decreasing majorant `M(|y|)`
//! with `∫ log⁺log⁺M < ∞`.
//!
//! The chain is: [`majorant`] (distribution functions and the Cauchy-derived
//! majorant) → [`domar`] (the dyadic sum and the minimal certified constant) →
//! [`reduction`] (axial symmetrization and the dimension lifts) → [`pipeline`]
//! (the end-to-end certificate). [`harness`] builds harmonic test fields and
//! checks certificates against measured sups.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curves;
pub mod domar;
pub mod error;
pub mod field;
pub mod harness;
pub mod json;
pub mod majorant;
pub mod pipeline;
pub mod quad;
pub mod reduction;

pub use error::{CertError, Result};
pub use majorant::{DistributionQuery, Majorant};
