//! Modified Bessel function of the second kind, K_ν(x), for real order.
//!
//! The order is split as ν = n + μ with |μ| ≤ 1/2. K_μ and K_{μ+1} come from
//! Temme's series for x ≤ 2 and from Steed's continued fraction (CF2) above
//! that; forward recurrence in the order then reaches K_ν. Upward recurrence
//! is stable for K because it is the dominant solution. Integer orders need
//! no special casing: μ = 0 is an ordinary point of the Temme series once
//! 1/Γ(1 ± μ) is expanded in μ.
//!
//! Every path carries an explicit log scale so that large orders at small
//! arguments, where K_ν overflows, remain representable through
//! [`ln_bessel_k`].

use std::f64::consts::PI;

use super::gamma::RECIP_GAMMA_TAYLOR;
use crate::error::{Error, Result};

pub const MAX_ORDER: f64 = 500.0;
pub const MAX_ARGUMENT: f64 = 700.0;
/// Smallest accepted argument; below it the order recurrence could overflow
/// even with rescaling.
pub const MIN_ARGUMENT: f64 = 1e-300;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 100_000;
const TEMME_LIMIT: f64 = 2.0;
const RESCALE_AT: f64 = 1e300;

/// e^x K_ν(x) = mantissa · exp(log_scale).
#[derive(Debug, Clone, Copy)]
struct ScaledK {
    mantissa: f64,
    log_scale: f64,
}

/// (gam1, gam2, 1/Γ(1+μ), 1/Γ(1−μ)) for |μ| ≤ 1/2, where
/// gam1 = (1/Γ(1−μ) − 1/Γ(1+μ)) / 2μ and gam2 = (1/Γ(1−μ) + 1/Γ(1+μ)) / 2.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mu2 = mu * mu;
    // Even-indexed coefficients c_2, c_4, ... feed gam1; odd ones gam2.
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    for k in (0..RECIP_GAMMA_TAYLOR.len()).rev() {
        // RECIP_GAMMA_TAYLOR[k] is c_{k+1}
        if (k + 1) % 2 == 0 {
            gam1 = gam1 * mu2 + RECIP_GAMMA_TAYLOR[k];
        } else {
            gam2 = gam2 * mu2 + RECIP_GAMMA_TAYLOR[k];
        }
    }
    let gam1 = -gam1;
    let gampl = gam2 - mu * gam1;
    let gammi = gam2 + mu * gam1;
    (gam1, gam2, gampl, gammi)
}

/// Temme's series: returns (e^x K_μ, e^x K_{μ+1}, log_scale).
fn temme(mu: f64, x: f64) -> Result<(f64, f64, f64)> {
    let mu2 = mu * mu;
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mut converged = false;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::accuracy(
            format!("Temme series for K_{mu}({x}) did not converge"),
            f64::NAN,
        ));
    }
    let xi2 = 2.0 / x;
    let ex = x.exp();
    if xi2 > 1e100 {
        // keep K_{μ+1} = sum1·(2/x) representable for tiny x
        Ok((sum / xi2 * ex, sum1 * ex, xi2.ln()))
    } else {
        Ok((sum * ex, sum1 * xi2 * ex, 0.0))
    }
}

/// Steed's continued fraction CF2: returns (e^x K_μ, e^x K_{μ+1}).
fn steed(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mu2 = mu * mu;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::accuracy(
            format!("continued fraction for K_{mu}({x}) did not converge"),
            f64::NAN,
        ));
    }
    h *= a1;
    let kmu = (PI / (2.0 * x)).sqrt() / s;
    let k1 = kmu * (mu + x + 0.5 - h) / x;
    Ok((kmu, k1))
}

fn check_domain(nu: f64, x: f64) -> Result<f64> {
    let order = nu.abs();
    if !order.is_finite() || order > MAX_ORDER {
        return Err(Error::domain(format!(
            "Bessel K order |nu| = {order} outside [0, {MAX_ORDER}]"
        )));
    }
    if !(MIN_ARGUMENT..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::domain(format!(
            "Bessel K argument {x} outside [{MIN_ARGUMENT:e}, {MAX_ARGUMENT}]"
        )));
    }
    Ok(order)
}

fn scaled_parts(nu: f64, x: f64) -> Result<ScaledK> {
    scaled_core(check_domain(nu, x)?, x)
}

fn scaled_core(order: f64, x: f64) -> Result<ScaledK> {
    let nu = order;
    let nl = (order + 0.5).floor() as usize;
    let mu = order - nl as f64;
    let (mut kmu, mut k1, mut log_scale) = if x <= TEMME_LIMIT {
        temme(mu, x)?
    } else {
        let (a, b) = steed(mu, x)?;
        (a, b, 0.0)
    };
    let xi2 = 2.0 / x;
    for i in 1..=nl {
        let f = (mu + i as f64) * xi2;
        if k1.abs() * f > RESCALE_AT {
            kmu /= k1;
            log_scale += k1.ln();
            k1 = 1.0;
        }
        let next = f * k1 + kmu;
        kmu = k1;
        k1 = next;
    }
    if !(kmu > 0.0) || !kmu.is_finite() {
        return Err(Error::accuracy(
            format!("K_{nu}({x}) evaluation lost its value ({kmu})"),
            f64::NAN,
        ));
    }
    Ok(ScaledK {
        mantissa: kmu,
        log_scale,
    })
}

/// ln K_ν(x). Works across the whole domain, including where K_ν(x)
/// overflows or underflows an `f64`.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    let s = scaled_parts(nu, x)?;
    Ok(s.mantissa.ln() + s.log_scale - x)
}

/// ln K_ν(x) without the upper argument limit, for density evaluation in
/// far tails where only the logarithm is meaningful.
pub(crate) fn ln_bessel_k_unbounded(nu: f64, x: f64) -> Result<f64> {
    if x > MAX_ARGUMENT && x.is_finite() {
        check_domain(nu, MAX_ARGUMENT)?;
        let s = scaled_core(nu.abs(), x)?;
        return Ok(s.mantissa.ln() + s.log_scale - x);
    }
    ln_bessel_k(nu, x)
}

/// Exponentially scaled form e^x K_ν(x).
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    let s = scaled_parts(nu, x)?;
    let v = s.mantissa * s.log_scale.exp();
    if !v.is_finite() {
        return Err(Error::domain(format!(
            "e^x K_{nu}({x}) overflows; use ln_bessel_k"
        )));
    }
    Ok(v)
}

/// K_ν(x). Signals a domain error when the value is not representable as a
/// normal `f64`; callers that need the far tail use [`ln_bessel_k`].
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    let s = scaled_parts(nu, x)?;
    let ln = s.mantissa.ln() + s.log_scale - x;
    if ln < f64::MIN_POSITIVE.ln() || ln > f64::MAX.ln() {
        return Err(Error::domain(format!(
            "K_{nu}({x}) = exp({ln}) is not representable; use ln_bessel_k"
        )));
    }
    Ok(s.mantissa * (s.log_scale - x).exp())
}
