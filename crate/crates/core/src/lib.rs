//! Exact Cantor-measure constructions with Lambda(p) digit sets, their
//! Fourier-analytic operators, and measurement harnesses for the associated
//! maximal, averaging, and decoupling inequalities at desk scale.
//!
//! Layout
//! - [`cantor`]: exact N-adic digit trees, interval measures, regularity scans
//! - [`lambdap`]: Sidon/Lambda(p) digit sets, exact moments, ratio search
//! - [`spectral`]: grids, smooth cutoffs, measure transforms
//! - [`operators`]: averaging/maximal operators, multipliers, kernels
//! - [`decoupling`]: weights, frames, branch trials, multilevel ratios
//! - [`geometry`]: covers of unions of scaled copies, box-counting slopes

pub mod cantor;
pub mod error;
pub mod gf;
pub mod lambdap;
pub mod operators;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
