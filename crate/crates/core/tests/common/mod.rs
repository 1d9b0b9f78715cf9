//! Reference values computed by routes that share no code with the library:
//! integral representations summed by fixed-step rules, literal
//! expansions, and sampling.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use ggsum::distributions::GgParams;
use ggsum::specfun::{ln_gamma, reg_lower_inc_gamma};

/// ln Σ exp(v_i).
pub fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// ln K_ν(x) from K_ν(x) = ∫₀^∞ exp(−x cosh t) cosh(νt) dt, trapezoid rule
/// in log space. The integrand is analytic in a strip, so the rule
/// converges geometrically in 1/h.
pub fn ln_bessel_k_trapezoid(nu: f64, x: f64) -> f64 {
    let h = 0.01;
    let mut terms = Vec::new();
    let mut peak = f64::NEG_INFINITY;
    let mut t = 0.0f64;
    loop {
        // ln cosh(νt) without overflow
        let ln_cosh = nu * t + (0.5 * (1.0 + (-2.0 * nu * t).exp())).ln();
        let v = -x * t.cosh() + ln_cosh;
        let w: f64 = if t == 0.0 { 0.5 } else { 1.0 };
        terms.push(v + w.ln());
        peak = peak.max(v);
        if t > 1.0 && v < peak - 60.0 && -x * t.sinh() + nu < 0.0 {
            break;
        }
        t += h;
    }
    log_sum_exp(&terms) + h.ln()
}

/// erfc from Craig's form erfc(x) = (2/π)∫₀^{π/2} exp(−x²/sin²θ) dθ for
/// x ≥ 0, reflected for x < 0.
pub fn erfc_craig(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc_craig(-x);
    }
    if x == 0.0 {
        return 1.0;
    }
    let n = 4000;
    let h = FRAC_PI_2 / n as f64;
    let terms: Vec<f64> = (1..=n)
        .map(|i| {
            let th = i as f64 * h;
            let w = if i == n { 0.5f64 } else { 1.0 };
            -x * x / th.sin().powi(2) + w.ln()
        })
        .collect();
    (log_sum_exp(&terms) + h.ln() + (2.0 / PI).ln()).exp()
}

/// Tanh-sinh nodes on (0, 1): (abscissa, 1 − abscissa, weight).
fn tanh_sinh_nodes(h: f64) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    let n = (6.5 / h) as i64;
    for i in -n..=n {
        let t = i as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        // x = (1 + tanh u)/2 and 1 − x, both without cancellation
        let e = (-2.0 * u.abs()).exp();
        let small = e / (1.0 + e);
        let (x, cx) = if u >= 0.0 { (1.0 - small, small) } else { (small, 1.0 - small) };
        let w = 0.5 * h * FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if x > 0.0 && cx > 0.0 && w > 0.0 && w.is_finite() {
            out.push((x, cx, w));
        }
    }
    out
}

/// ∫₀¹ f with f given as a closure of (u, 1 − u).
pub fn tanh_sinh_unit<F: Fn(f64, f64) -> f64>(f: F) -> f64 {
    tanh_sinh_nodes(1.0 / 128.0)
        .into_iter()
        .map(|(x, cx, w)| w * f(x, cx))
        .sum()
}

/// ∫₀^∞ f via s = u/(1 − u).
pub fn tanh_sinh_half_line<F: Fn(f64) -> f64>(f: F) -> f64 {
    tanh_sinh_unit(|u, cu| {
        let s = u / cu;
        let v = f(s);
        if v == 0.0 {
            0.0
        } else {
            v / (cu * cu)
        }
    })
}

/// P(a, x) = γ(a, x)/Γ(a) from the defining integral. Below x = a + 1 uses
/// γ(a, x) = (x^a/a)∫₀¹ exp(−x u^{1/a}) du; above it uses
/// Γ(a, x) = e^{−x} x^{a−1} ∫₀^∞ (1 + s/x)^{a−1} e^{−s} ds.
pub fn reg_lower_inc_gamma_integral(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        let i = tanh_sinh_unit(|u, _| (-x * u.powf(1.0 / a)).exp());
        (a * x.ln() - a.ln() - ln_gamma(a).unwrap() + i.ln()).exp()
    } else {
        let i = tanh_sinh_half_line(|s| ((a - 1.0) * (s / x).ln_1p() - s).exp());
        1.0 - (-x + (a - 1.0) * x.ln() - ln_gamma(a).unwrap() + i.ln()).exp()
    }
}

/// GG CDF by conditioning on the first Gamma factor: with X = Ω·A·B,
/// A ~ Gamma(k, 1/k), B ~ Gamma(m, 1/m), F(x) = E_A[P(m, m x/(Ω A))].
pub fn gg_cdf_conditional(p: &GgParams, x: f64) -> f64 {
    let (k, m, om) = (p.k(), p.m(), p.omega());
    let lg = ln_gamma(k).unwrap();
    tanh_sinh_half_line(|a| {
        if a <= 0.0 {
            return 0.0;
        }
        let ln_dens = k * k.ln() + (k - 1.0) * a.ln() - k * a - lg;
        let d = ln_dens.exp();
        if d == 0.0 {
            return 0.0;
        }
        let arg = m * x / (om * a);
        if arg.is_finite() {
            d * reg_lower_inc_gamma(m, arg).unwrap()
        } else {
            d
        }
    })
}

/// GG density written out from its defining formula with a given K value.
pub fn gg_pdf_formula(k: f64, m: f64, omega: f64, x: f64) -> f64 {
    let z = 2.0 * (k * m * x / omega).sqrt();
    let ln = 2f64.ln() + 0.5 * (k + m) * (k * m / omega).ln() + (0.5 * (k + m) - 1.0) * x.ln()
        - ln_gamma(k).unwrap()
        - ln_gamma(m).unwrap()
        + ln_bessel_k_trapezoid((k - m).abs(), z);
    ln.exp()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// E[Sᵛ] by the literal nested multinomial sum over ν ≥ ν₁ ≥ … ≥ ν_{L−1},
/// given per-variate raw moments `moments[l][n] = E[X_l^n]`.
pub fn sum_moment_multinomial(moments: &[Vec<f64>], nu: usize) -> f64 {
    fn rec(moments: &[Vec<f64>], l: usize, prev: usize) -> f64 {
        if l == moments.len() - 1 {
            return moments[l][prev];
        }
        (0..=prev)
            .map(|next| binomial(prev, next) * moments[l][prev - next] * rec(moments, l + 1, next))
            .sum()
    }
    rec(moments, 0, nu)
}

/// Raw moments E[X^n], n = 0..=n_max, of GG(k, m, Ω) as a product of
/// rising factorials.
pub fn gg_raw_moments(k: f64, m: f64, omega: f64, n_max: usize) -> Vec<f64> {
    let mut v = vec![1.0];
    for n in 1..=n_max {
        let j = (n - 1) as f64;
        let prev = v[n - 1];
        v.push(prev * (k + j) * (m + j) * omega / (k * m));
    }
    v
}

/// Laplace transform E[e^{−sX}] of a sum of independent Gamma(n_q, θ_q).
pub fn gamma_sum_laplace(groups: &[(f64, f64)], s: f64) -> f64 {
    groups.iter().map(|&(n, th)| (1.0 + th * s).powf(-n)).product()
}

/// Standard error of a sample mean.
pub fn mean_and_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Geometric grid of `n` points from `a` to `b`.
pub fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Domain grids shared by the special-function suites.
pub const NU: [f64; 10] = [0.0, 0.25, 0.5, 1.0, 1.7, 3.0, 6.5, 12.0, 30.0, 80.0];
pub const SHAPES: [f64; 8] = [0.1, 0.5, 1.0, 2.5, 7.0, 20.0, 60.0, 150.0];

pub fn bessel_grid() -> Vec<(f64, f64)> {
    let xs = geomspace(1e-3, 600.0, 20);
    NU.iter().flat_map(|&nu| xs.iter().map(move |&x| (nu, x))).collect()
}

pub fn erfc_grid() -> Vec<f64> {
    (0..200).map(|i| -5.0 + 31.0 * i as f64 / 199.0).collect()
}

pub fn inc_gamma_grid() -> Vec<(f64, f64)> {
    // lower end kept where P(a, x) is still a normal double
    SHAPES
        .iter()
        .flat_map(|&a| geomspace((a / 20.0).max(1e-3), 300.0, 25).into_iter().map(move |x| (a, x)))
        .collect()
}
