//! Log-gamma and the reciprocal-gamma Taylor series around 1.

use crate::error::{Error, Result};

/// Taylor coefficients of 1/Γ(z) = Σ_{k≥1} c_k z^k, c_1 first.
pub(crate) const RECIP_GAMMA_TAYLOR: [f64; 28] = [
    1.0,
    0.5772156649015329,
    -0.6558780715202539,
    -0.04200263503409524,
    0.16653861138229148,
    -0.04219773455554433,
    -0.009621971527876973,
    0.0072189432466631,
    -0.0011651675918590652,
    -0.00021524167411495098,
    0.0001280502823881162,
    -2.013485478078824e-05,
    -1.2504934821426706e-06,
    1.133027231981696e-06,
    -2.056338416977607e-07,
    6.116095104481416e-09,
    5.002007644469223e-09,
    -1.18127457048702e-09,
    1.0434267116911005e-10,
    7.782263439905071e-12,
    -3.696805618642206e-12,
    5.100370287454476e-13,
    -2.0583260535665066e-14,
    -5.348122539423018e-15,
    1.2267786282382608e-15,
    -1.1812593016974588e-16,
    1.1866922547516004e-18,
    1.4123806553180319e-18,
];

const LANCZOS_G: f64 = 671.0 / 128.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_C0: f64 = 0.999999999999997092;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 14] = [
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
];
const SQRT_2PI: f64 = 2.5066282746310005;

/// 1/Γ(1+e) − 1 for |e| ≤ 1/2, without cancellation near e = 0.
pub(crate) fn recip_gamma_1p_minus_1(e: f64) -> f64 {
    let mut acc = 0.0;
    for &c in RECIP_GAMMA_TAYLOR[1..].iter().rev() {
        acc = acc * e + c;
    }
    acc * e
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let tmp = x + LANCZOS_G;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = LANCZOS_C0;
    let mut y = x;
    for &c in LANCZOS_COEF.iter() {
        y += 1.0;
        ser += c / y;
    }
    tmp + (SQRT_2PI * ser / x).ln()
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if (0.5..=1.5).contains(&x) {
        -recip_gamma_1p_minus_1(x - 1.0).ln_1p()
    } else if x > 1.5 && x <= 2.5 {
        // ln Γ(2+e) = ln(1+e) + ln Γ(1+e); both vanish at e = 0.
        let e = x - 2.0;
        e.ln_1p() - recip_gamma_1p_minus_1(e).ln_1p()
    } else {
        lanczos_ln_gamma(x)
    }
}

/// ln Γ(x) for x > 0.
///
/// Near the zeros at x = 1 and x = 2 the value is built from the Taylor
/// series of 1/Γ(1+e), so it stays accurate relative to its own size.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("ln_gamma requires finite x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

/// Γ(x) for x > 0; overflows to a domain error past x ≈ 171.6.
pub fn gamma(x: f64) -> Result<f64> {
    let v = ln_gamma(x)?.exp();
    if !v.is_finite() {
        return Err(Error::domain(format!("gamma({x}) overflows; use ln_gamma")));
    }
    Ok(v)
}
