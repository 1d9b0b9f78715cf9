//! Special functions: log-gamma, modified Bessel K of real order, the
//! regularized incomplete gamma pair and erfc.
//!
//! All functions are pure. Each evaluation either meets the relative
//! accuracy target of [`SpecFunAccuracy::default`] or returns an error.

mod bessel;
mod gamma;
mod incgamma;

pub(crate) use bessel::ln_bessel_k_unbounded;
pub use bessel::{bessel_k, bessel_k_scaled, ln_bessel_k, MAX_ARGUMENT, MAX_ORDER, MIN_ARGUMENT};
pub use gamma::{gamma, ln_gamma};
pub use incgamma::{erfc, reg_lower_inc_gamma, reg_upper_inc_gamma};

pub(crate) use gamma::ln_gamma_unchecked;

use crate::error::{Error, Result};

/// Relative accuracy target together with the supported Bessel domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunAccuracy {
    pub rel_tol: f64,
}

impl SpecFunAccuracy {
    pub const BESSEL_ORDER_RANGE: (f64, f64) = (0.0, MAX_ORDER);
    pub const BESSEL_ARGUMENT_RANGE: (f64, f64) = (MIN_ARGUMENT, MAX_ARGUMENT);

    pub fn new(rel_tol: f64) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::validation(format!("rel_tol must be > 0, got {rel_tol}")));
        }
        Ok(Self { rel_tol })
    }
}

impl Default for SpecFunAccuracy {
    fn default() -> Self {
        Self { rel_tol: 1e-12 }
    }
}
