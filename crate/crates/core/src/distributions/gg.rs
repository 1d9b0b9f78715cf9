use crate::error::{Error, Result};
use crate::specfun::{ln_bessel_k_unbounded, ln_gamma, ln_gamma_unchecked, MIN_ARGUMENT};

use super::quadrature::{integrate, QuadSpec};

const EULER_GAMMA: f64 = 0.5772156649015329;

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::validation(format!("{name} must be finite and > 0, got {v}")))
    }
}

/// Gamma law with density x^{shape-1} e^{-x/scale} / (Γ(shape) scale^shape).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    shape: f64,
    scale: f64,
}

impl GammaParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        Ok(Self {
            shape: positive("gamma shape", shape)?,
            scale: positive("gamma scale", scale)?,
        })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }
}

pub fn gamma_pdf(p: &GammaParams, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("gamma_pdf needs x >= 0, got {x}")));
    }
    let (a, s) = (p.shape, p.scale);
    if x == 0.0 {
        return if a < 1.0 {
            Err(Error::domain(format!(
                "gamma pdf with shape {a} < 1 diverges at x = 0"
            )))
        } else if a == 1.0 {
            Ok(1.0 / s)
        } else {
            Ok(0.0)
        };
    }
    let t = x / s;
    Ok(((a - 1.0) * t.ln() - t - ln_gamma_unchecked(a)).exp() / s)
}

/// Gamma-Gamma law GG(k, m, Ω): the product of Gamma(k, 1/k) and
/// Gamma(m, Ω/m) variates, with mean Ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GgParams {
    k: f64,
    m: f64,
    omega: f64,
}

impl GgParams {
    pub fn new(k: f64, m: f64, omega: f64) -> Result<Self> {
        Ok(Self {
            k: positive("k", k)?,
            m: positive("m", m)?,
            omega: positive("omega", omega)?,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Rate ξ = km/Ω.
    pub fn xi(&self) -> f64 {
        self.k * self.m / self.omega
    }

    /// The same shapes with the mean multiplied by `c`: the law of c·X.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.k, self.m, self.omega * c)
    }

    /// Exponent of the x → 0 behavior x^{min(k,m)-1}.
    pub fn origin_exponent(&self) -> f64 {
        self.k.min(self.m) - 1.0
    }
}

/// Log-density with the x-independent part computed once.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LnDensity {
    ln_const: f64,
    power: f64,
    nu: f64,
    xi: f64,
    params: GgParams,
}

impl LnDensity {
    pub(crate) fn new(p: &GgParams) -> Self {
        let xi = p.xi();
        let half = 0.5 * (p.k + p.m);
        Self {
            ln_const: std::f64::consts::LN_2 + half * xi.ln()
                - ln_gamma_unchecked(p.k)
                - ln_gamma_unchecked(p.m),
            power: half - 1.0,
            nu: (p.k - p.m).abs(),
            xi,
            params: *p,
        }
    }

    pub(crate) fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) || x.is_nan() {
            return Err(Error::domain(format!("GG density needs x >= 0, got {x}")));
        }
        if x == 0.0 {
            return self.at_origin();
        }
        if x == f64::INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        let z = 2.0 * (self.xi * x).sqrt();
        let ln_k = if z < MIN_ARGUMENT {
            small_argument_ln_k(self.nu, z)
        } else {
            ln_bessel_k_unbounded(self.nu, z)?
        };
        Ok(self.ln_const + self.power * x.ln() + ln_k)
    }

    fn at_origin(&self) -> Result<f64> {
        let p = &self.params;
        let lo = p.k.min(p.m);
        let hi = p.k.max(p.m);
        if lo < 1.0 || (lo == 1.0 && hi == 1.0) {
            return Err(Error::domain(format!(
                "GG density with min(k, m) = {lo} is singular at x = 0 (behaves like x^{})",
                lo - 1.0
            )));
        }
        if lo > 1.0 {
            return Ok(f64::NEG_INFINITY);
        }
        // min(k, m) = 1: the limit is ξ Γ(hi − 1) / Γ(hi)
        Ok(self.xi.ln() - (hi - 1.0).ln())
    }
}

/// ln K_ν(z) from the leading small-z term, for arguments below the Bessel
/// domain.
fn small_argument_ln_k(nu: f64, z: f64) -> f64 {
    if nu == 0.0 {
        (-(0.5 * z).ln() - EULER_GAMMA).ln()
    } else {
        ln_gamma_unchecked(nu) + (nu - 1.0) * std::f64::consts::LN_2 - nu * z.ln()
    }
}

/// ln f(x) for the GG density. Returns −∞ where the density vanishes
/// (x = 0 with min(k, m) > 1) and a domain error where it diverges.
pub fn gg_ln_pdf(p: &GgParams, x: f64) -> Result<f64> {
    LnDensity::new(p).eval(x)
}

/// GG density, evaluated through [`gg_ln_pdf`].
///
/// At x = 0 the density is 0 when min(k, m) > 1 and ξ/(max(k, m) − 1) when
/// exactly one shape equals 1. When min(k, m) < 1, or k = m = 1, it diverges
/// and a domain error is returned; quadrature never samples the endpoint.
pub fn gg_pdf(p: &GgParams, x: f64) -> Result<f64> {
    Ok(gg_ln_pdf(p, x)?.exp())
}

/// Raw moment E[X^n] = ξ^{-n} Γ(k+n) Γ(m+n) / (Γ(k) Γ(m)).
pub fn gg_moment(p: &GgParams, n: f64) -> Result<f64> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(Error::domain(format!("moment order must be >= 0, got {n}")));
    }
    if n == 0.0 {
        return Ok(1.0);
    }
    let ln = -n * p.xi().ln() + ln_gamma(p.k + n)? + ln_gamma(p.m + n)?
        - ln_gamma(p.k)?
        - ln_gamma(p.m)?;
    let v = ln.exp();
    if !v.is_finite() {
        return Err(Error::domain(format!("moment of order {n} overflows")));
    }
    Ok(v)
}

/// Truncation point T with P(X > T) ≤ tail_mass_tol, from Markov's
/// inequality applied to X⁴.
pub fn gg_tail_cutoff(p: &GgParams, q: &QuadSpec) -> Result<f64> {
    Ok((gg_moment(p, 4.0)? / q.tail_mass_tol).powf(0.25))
}

/// Breakpoints 0, Ω·2^j (j ≥ −40) and `upper` used to split GG integrals
/// into pieces on which the integrand is smooth.
pub fn gg_breakpoints(p: &GgParams, upper: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut x = p.omega * f64::powi(2.0, -40);
    while x < upper {
        pts.push(x);
        x *= 2.0;
    }
    if upper > 0.0 {
        pts.push(upper);
    }
    pts
}

/// P(X ≤ x), by quadrature of the density.
pub fn gg_cdf(p: &GgParams, x: f64, q: &QuadSpec) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("gg_cdf needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let upper = x.min(gg_tail_cutoff(p, q)?);
    let dens = LnDensity::new(p);
    let r = integrate(|t| Ok(dens.eval(t)?.exp()), &gg_breakpoints(p, upper), q)?;
    Ok(r.value.clamp(0.0, 1.0))
}

/// ∫₀^∞ kernel(x) f(x) dx for a bounded kernel. The integral is truncated at
/// [`gg_tail_cutoff`].
pub fn expect_under_gg<F>(kernel: F, p: &GgParams, q: &QuadSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let upper = gg_tail_cutoff(p, q)?;
    let dens = LnDensity::new(p);
    let r = integrate(
        |t| Ok(kernel(t) * dens.eval(t)?.exp()),
        &gg_breakpoints(p, upper),
        q,
    )?;
    Ok(r.value)
}
