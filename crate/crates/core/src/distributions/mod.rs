//! Gamma and Gamma-Gamma laws: densities, moments, CDFs, expectations of
//! kernels, and seeded samplers.

mod gg;
mod quadrature;
mod rng;
mod sampling;

pub use gg::{
    expect_under_gg, gamma_pdf, gg_breakpoints, gg_cdf, gg_ln_pdf, gg_moment, gg_pdf,
    gg_tail_cutoff, GammaParams, GgParams,
};
pub use quadrature::{integrate, Integral, QuadSpec};
pub use rng::{stream, Stream, RNG_ALGORITHM};
pub use sampling::{gamma_sample, gg_sample, GammaSampler, GgSampler};

pub(crate) use gg::LnDensity;
