//! Gamma variates by Marsaglia and Tsang's squeeze method; GG variates as
//! products of two Gamma draws.

use rand::Rng;
use rand_distr::StandardNormal;

use super::gg::{GammaParams, GgParams};

/// Precomputed constants for repeated Gamma draws with one parameter set.
#[derive(Debug, Clone, Copy)]
pub struct GammaSampler {
    d: f64,
    c: f64,
    scale: f64,
    /// 1/shape when shape < 1: the draw for shape + 1 is multiplied by U^{1/shape}.
    boost: Option<f64>,
}

impl GammaSampler {
    pub fn new(p: &GammaParams) -> Self {
        let (base, boost) = if p.shape() < 1.0 {
            (p.shape() + 1.0, Some(1.0 / p.shape()))
        } else {
            (p.shape(), None)
        };
        let d = base - 1.0 / 3.0;
        Self {
            d,
            c: 1.0 / (9.0 * d).sqrt(),
            scale: p.scale(),
            boost,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g = loop {
            let x: f64 = rng.sample(StandardNormal);
            let v = 1.0 + self.c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u: f64 = rng.random();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                break self.d * v;
            }
            if u.ln() < 0.5 * x2 + self.d * (1.0 - v + v.ln()) {
                break self.d * v;
            }
        };
        let g = match self.boost {
            // 1 − U lies in (0, 1], so the factor is never 0 from U itself
            Some(inv) => g * (1.0 - rng.random::<f64>()).powf(inv),
            None => g,
        };
        g * self.scale
    }
}

/// GG draws as x·y with x ~ Gamma(k, 1/k) and y ~ Gamma(m, Ω/m).
#[derive(Debug, Clone, Copy)]
pub struct GgSampler {
    x: GammaSampler,
    y: GammaSampler,
}

impl GgSampler {
    pub fn new(p: &GgParams) -> Self {
        let gx = GammaParams::new(p.k(), 1.0 / p.k()).expect("valid GG shapes give valid Gamma factors");
        let gy = GammaParams::new(p.m(), p.omega() / p.m()).expect("valid GG shapes give valid Gamma factors");
        Self {
            x: GammaSampler::new(&gx),
            y: GammaSampler::new(&gy),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = self.x.sample(rng);
        x * self.y.sample(rng)
    }

    /// The two factors of one draw, small-scale first.
    pub fn sample_factors<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let x = self.x.sample(rng);
        (x, self.y.sample(rng))
    }
}

pub fn gamma_sample<R: Rng + ?Sized>(p: &GammaParams, rng: &mut R) -> f64 {
    GammaSampler::new(p).sample(rng)
}

pub fn gg_sample<R: Rng + ?Sized>(p: &GgParams, rng: &mut R) -> f64 {
    GgSampler::new(p).sample(rng)
}
