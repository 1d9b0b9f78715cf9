//! Distribution of sums of independent GG variates.
//!
//! Identical variates are approximated by one GG law whose larger shape is
//! corrected by an adjustment parameter, from a regression fit or from
//! moment matching. Variates sharing the first shape but differing in the
//! second shape and mean are approximated by a signed mixture of GG laws
//! obtained from the partial-fraction expansion of a sum of Gammas.

mod iid;
mod inid;

pub use iid::{
    adjustment_objective, adjustment_regression, approx_sum_iid, approx_sum_iid_with,
    error_moments, mc_error_moments, solve_adjustment, sum_moments_exact, AdjustmentObjective,
    EmpiricalErrorMoments, ErrorMoments, MAX_MOMENT_ORDER, MIN_ERROR_SAMPLES,
};
pub use inid::{
    approx_sum_inid, gamma_sum_weights, GammaGroup, GammaSumWeights, GgMixture, MixtureComponent,
    WeightEntry, SPACING_ERROR, SPACING_WARNING,
};

use crate::distributions::{expect_under_gg, gg_cdf, gg_moment, gg_pdf, GgParams, QuadSpec};
use crate::error::{Error, Result};

/// The variates making up a sum.
pub trait SumSpec {
    fn variates(&self) -> Vec<GgParams>;
}

/// L independent copies of one GG variate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IidSumSpec {
    l: usize,
    base: GgParams,
}

impl IidSumSpec {
    pub fn new(l: usize, base: GgParams) -> Result<Self> {
        if l == 0 {
            return Err(Error::validation("L must be at least 1"));
        }
        Ok(Self { l, base })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn base(&self) -> &GgParams {
        &self.base
    }
}

impl SumSpec for IidSumSpec {
    fn variates(&self) -> Vec<GgParams> {
        vec![self.base; self.l]
    }
}

/// Independent GG(k_common, m_l, Ω_l) variates with integer m_l.
#[derive(Debug, Clone, PartialEq)]
pub struct InidSumSpec {
    k_common: f64,
    per_variate: Vec<(u32, f64)>,
}

impl InidSumSpec {
    pub fn new(k_common: f64, per_variate: Vec<(u32, f64)>) -> Result<Self> {
        if !(k_common > 0.0) || !k_common.is_finite() {
            return Err(Error::validation(format!("k_common must be > 0, got {k_common}")));
        }
        if per_variate.is_empty() {
            return Err(Error::validation("at least one variate is required"));
        }
        for &(m, omega) in &per_variate {
            if m == 0 {
                return Err(Error::validation("every m_l must be a positive integer"));
            }
            if !(omega > 0.0) || !omega.is_finite() {
                return Err(Error::validation(format!("every omega_l must be > 0, got {omega}")));
            }
        }
        Ok(Self {
            k_common,
            per_variate,
        })
    }

    /// Like [`InidSumSpec::new`] but with real shapes, rejecting any that
    /// is not a positive integer.
    pub fn from_real(k_common: f64, per_variate: &[(f64, f64)]) -> Result<Self> {
        let mut v = Vec::with_capacity(per_variate.len());
        for &(m, omega) in per_variate {
            if !(m >= 1.0) || m.fract() != 0.0 || m > u32::MAX as f64 {
                return Err(Error::validation(format!(
                    "shape m_l = {m} must be a positive integer on the non-identical path"
                )));
            }
            v.push((m as u32, omega));
        }
        Self::new(k_common, v)
    }

    pub fn l(&self) -> usize {
        self.per_variate.len()
    }

    pub fn k_common(&self) -> f64 {
        self.k_common
    }

    pub fn per_variate(&self) -> &[(u32, f64)] {
        &self.per_variate
    }

    pub fn total_mean(&self) -> f64 {
        self.per_variate.iter().map(|v| v.1).sum()
    }
}

impl SumSpec for InidSumSpec {
    fn variates(&self) -> Vec<GgParams> {
        self.per_variate
            .iter()
            .map(|&(m, o)| GgParams::new(self.k_common, m as f64, o).expect("validated on construction"))
            .collect()
    }
}

/// Approximate law of a sum: one GG or a signed GG mixture.
#[derive(Debug, Clone, PartialEq)]
pub enum SumLaw {
    Single(GgParams),
    Mixture(GgMixture),
}

impl SumLaw {
    pub fn pdf(&self, x: f64) -> Result<f64> {
        match self {
            SumLaw::Single(p) => gg_pdf(p, x),
            SumLaw::Mixture(m) => m.pdf(x),
        }
    }

    pub fn cdf(&self, x: f64, q: &QuadSpec) -> Result<f64> {
        match self {
            SumLaw::Single(p) => gg_cdf(p, x, q),
            SumLaw::Mixture(m) => m.cdf(x, q),
        }
    }

    pub fn moment(&self, n: f64) -> Result<f64> {
        match self {
            SumLaw::Single(p) => gg_moment(p, n),
            SumLaw::Mixture(m) => m.moment(n),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            SumLaw::Single(p) => p.omega(),
            SumLaw::Mixture(m) => m.mean(),
        }
    }

    pub fn expect<F: Fn(f64) -> f64>(&self, kernel: F, q: &QuadSpec) -> Result<f64> {
        match self {
            SumLaw::Single(p) => expect_under_gg(kernel, p, q),
            SumLaw::Mixture(m) => m.expect(kernel, q),
        }
    }

    pub fn warnings(&self) -> &[String] {
        match self {
            SumLaw::Single(_) => &[],
            SumLaw::Mixture(m) => m.warnings(),
        }
    }
}

/// Signed-weighted mixture density at x.
pub fn mixture_pdf(mix: &GgMixture, x: f64) -> Result<f64> {
    mix.pdf(x)
}

pub fn mixture_cdf(mix: &GgMixture, x: f64, q: &QuadSpec) -> Result<f64> {
    mix.cdf(x, q)
}

pub fn mixture_moment(mix: &GgMixture, n: f64) -> Result<f64> {
    mix.moment(n)
}
