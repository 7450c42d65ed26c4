//! Numerical core for studying condensation waves.
//!
//! The crate computes Kingman's selection-mutation iteration exactly through
//! its moment representation, solves the defective renewal equation that
//! carries its normalising constants, and provides Monte Carlo samplers for
//! two models expected to show the same gamma-shaped wave: random
//! permutations with cycle weights and preferential attachment networks with
//! fitness.
//!
//! Everything here is `no_std` with `alloc`. File formats, the command line
//! and parallel replica scheduling live in the `condlab` crate.
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod distributions;
mod error;
pub mod kingman;
pub mod panetwork;
pub mod permutations;
pub mod quadrature;
pub mod renewal;
pub mod rng;
pub mod sum;

pub use error::{Error, Result};
