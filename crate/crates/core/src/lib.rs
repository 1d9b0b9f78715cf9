//! Sums of Gamma-Gamma variates: single-GG and signed GG-mixture
//! approximations, diversity-receiver metrics built on them, and a seeded
//! Monte-Carlo oracle.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod curve;
pub mod distributions;
pub mod error;
pub mod montecarlo;
pub mod specfun;
pub mod sum_approx;
pub mod systems_ow;
pub mod systems_rf;

pub use error::{Error, Result};
