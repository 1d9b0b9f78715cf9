use crate::distributions::{gg_moment, GgParams, GgSampler};
use crate::error::{Error, Result};
use crate::montecarlo::{map_chunks, McSpec};

use super::{IidSumSpec, SumSpec};

/// Regression fit of the adjustment parameter added to the larger shape.
///
/// The arguments must be ordered with `k_max >= m_min`.
pub fn adjustment_regression(l: usize, k_max: f64, m_min: f64) -> Result<f64> {
    if l == 0 {
        return Err(Error::validation("L must be at least 1"));
    }
    if !(k_max >= m_min) || !(m_min > 0.0) {
        return Err(Error::validation(format!(
            "adjustment_regression needs k_max >= m_min > 0, got ({k_max}, {m_min})"
        )));
    }
    Ok((l as f64 - 1.0) * (-0.127 - 0.95 * k_max - 0.0058 * m_min)
        / (1.0 + 0.00124 * k_max + 0.98 * m_min))
}

/// Shapes (L·hi + ε, L·lo) mapped back onto (k, m): the adjusted value goes
/// to whichever of k, m was larger, and to k on a tie.
fn adjusted_params(spec: &IidSumSpec, eps: f64) -> Result<GgParams> {
    let b = spec.base();
    let l = spec.l() as f64;
    let k_is_max = b.k() >= b.m();
    let (hi, lo) = if k_is_max { (b.k(), b.m()) } else { (b.m(), b.k()) };
    let adjusted = l * hi + eps;
    if !(adjusted > 0.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "adjusted shape L·max(k, m) + eps = {adjusted} is not positive"
        )));
    }
    let omega = l * b.omega();
    if k_is_max {
        GgParams::new(adjusted, l * lo, omega)
    } else {
        GgParams::new(l * lo, adjusted, omega)
    }
}

/// Single-GG approximation of a sum of L i.i.d. GG variates, with the
/// regression adjustment applied to the larger shape.
pub fn approx_sum_iid(spec: &IidSumSpec) -> Result<GgParams> {
    if spec.l() == 1 {
        return Ok(*spec.base());
    }
    let b = spec.base();
    let eps = adjustment_regression(spec.l(), b.k().max(b.m()), b.k().min(b.m()))?;
    adjusted_params(spec, eps)
}

/// Single-GG approximation with an explicit adjustment parameter.
pub fn approx_sum_iid_with(spec: &IidSumSpec, eps: f64) -> Result<GgParams> {
    adjusted_params(spec, eps)
}

/// Largest moment order accepted by [`sum_moments_exact`].
pub const MAX_MOMENT_ORDER: usize = 8;

/// E[S^ν] for ν = 1..=nu_max of the exact sum, by repeated binomial
/// convolution of the per-variate moment sequences.
pub fn sum_moments_exact<S: SumSpec + ?Sized>(spec: &S, nu_max: usize) -> Result<Vec<f64>> {
    if nu_max == 0 || nu_max > MAX_MOMENT_ORDER {
        return Err(Error::validation(format!(
            "nu_max must be in 1..={MAX_MOMENT_ORDER}, got {nu_max}"
        )));
    }
    let binom = binomials(nu_max);
    let mut acc = vec![0.0; nu_max + 1];
    acc[0] = 1.0;
    for p in spec.variates() {
        let mom = (0..=nu_max)
            .map(|n| gg_moment(&p, n as f64))
            .collect::<Result<Vec<_>>>()?;
        let mut next = vec![0.0; nu_max + 1];
        for (n, slot) in next.iter_mut().enumerate() {
            *slot = (0..=n).map(|j| binom[n][j] * acc[j] * mom[n - j]).sum();
        }
        acc = next;
    }
    Ok(acc[1..].to_vec())
}

fn binomials(n: usize) -> Vec<Vec<f64>> {
    let mut t = vec![vec![1.0]];
    for i in 1..=n {
        let prev = &t[i - 1];
        let mut row = vec![1.0; i + 1];
        for j in 1..i {
            row[j] = prev[j - 1] + prev[j];
        }
        t.push(row);
    }
    t
}

/// How the four moment residuals are combined in [`solve_adjustment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdjustmentObjective {
    /// Σ |E[Ŝ^ν] − E[S^ν]| / E[S^ν]
    #[default]
    Relative,
    /// Σ |E[Ŝ^ν] − E[S^ν]|
    Absolute,
}

/// Moment-mismatch objective for adjustment `eps`, over ν = 1..4.
pub fn adjustment_objective(
    spec: &IidSumSpec,
    eps: f64,
    mode: AdjustmentObjective,
) -> Result<f64> {
    let exact = sum_moments_exact(spec, 4)?;
    objective_against(spec, &exact, eps, mode)
}

fn objective_against(
    spec: &IidSumSpec,
    exact: &[f64],
    eps: f64,
    mode: AdjustmentObjective,
) -> Result<f64> {
    let p = adjusted_params(spec, eps)?;
    let mut total = 0.0;
    for (i, &e) in exact.iter().enumerate() {
        let r = (gg_moment(&p, (i + 1) as f64)? - e).abs();
        total += match mode {
            AdjustmentObjective::Relative => r / e,
            AdjustmentObjective::Absolute => r,
        };
    }
    Ok(total)
}

const GRID_POINTS: usize = 400;
const GOLDEN_TOL: f64 = 1e-10;

/// Moment-matching adjustment: minimizes [`adjustment_objective`] over
/// eps in (−L·hi + 10⁻³, L·hi) by a grid scan followed by golden-section
/// refinement around the best grid point.
pub fn solve_adjustment(spec: &IidSumSpec, mode: AdjustmentObjective) -> Result<f64> {
    if spec.l() == 1 {
        return Ok(0.0);
    }
    let b = spec.base();
    let hi = b.k().max(b.m());
    let l = spec.l() as f64;
    let (lo_b, hi_b) = (-l * hi + 1e-3, l * hi);
    let exact = sum_moments_exact(spec, 4)?;
    let obj = |e: f64| -> f64 {
        objective_against(spec, &exact, e, mode)
            .ok()
            .filter(|v| v.is_finite())
            .unwrap_or(f64::INFINITY)
    };

    let step = (hi_b - lo_b) / GRID_POINTS as f64;
    let grid: Vec<(f64, f64)> = (0..=GRID_POINTS)
        .map(|i| {
            let e = lo_b + step * i as f64;
            (e, obj(e))
        })
        .collect();
    let (best, _) = grid
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("grid is non-empty");
    if !grid[best].1.is_finite() {
        return Err(Error::Optimization(
            "moment objective is not finite anywhere on the search bracket".into(),
        ));
    }

    let mut a = grid[best.saturating_sub(1)].0;
    let mut c = grid[(best + 1).min(GRID_POINTS)].0;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = c - inv_phi * (c - a);
    let mut x2 = a + inv_phi * (c - a);
    let (mut f1, mut f2) = (obj(x1), obj(x2));
    while (c - a).abs() > GOLDEN_TOL * (1.0 + a.abs()) {
        if f1 <= f2 {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - inv_phi * (c - a);
            f1 = obj(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (c - a);
            f2 = obj(x2);
        }
    }
    let refined = 0.5 * (a + c);

    // never return something worse than a point already evaluated
    let mut candidates = vec![(refined, obj(refined)), grid[best], (0.0, obj(0.0))];
    if let Ok(r) = adjustment_regression(spec.l(), hi, b.k().min(b.m())) {
        candidates.push((r, obj(r)));
    }
    let (eps, val) = candidates
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("candidates are non-empty");
    if !val.is_finite() {
        return Err(Error::Optimization("golden-section refinement failed".into()));
    }
    Ok(eps)
}

/// Mean and variance of the approximation error of the i.i.d. sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorMoments {
    pub mean: f64,
    pub variance: f64,
}

/// Closed-form error moments: mean 0, variance (L−1)Ω²/(km).
pub fn error_moments(spec: &IidSumSpec) -> ErrorMoments {
    let b = spec.base();
    ErrorMoments {
        mean: 0.0,
        variance: (spec.l() as f64 - 1.0) * b.omega() * b.omega() / (b.k() * b.m()),
    }
}

/// Sample estimates of the error mean and variance with standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalErrorMoments {
    pub mean: f64,
    pub mean_std_error: f64,
    pub variance: f64,
    pub variance_std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

/// Minimum sample count accepted by [`mc_error_moments`].
pub const MIN_ERROR_SAMPLES: u64 = 10_000;

/// Draws the Gamma factors x_l, y_l and evaluates the error
/// (1/L) Σ_{i<j} (x_i − x_j)(y_i − y_j) directly.
pub fn mc_error_moments(spec: &IidSumSpec, mc: &McSpec) -> Result<EmpiricalErrorMoments> {
    if mc.n_samples < MIN_ERROR_SAMPLES {
        return Err(Error::validation(format!(
            "mc_error_moments needs at least {MIN_ERROR_SAMPLES} samples, got {}",
            mc.n_samples
        )));
    }
    let sampler = GgSampler::new(spec.base());
    let l = spec.l();
    let chunks = map_chunks(mc, |rng, count| {
        let mut xs = vec![0.0; l];
        let mut ys = vec![0.0; l];
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            for i in 0..l {
                let (x, y) = sampler.sample_factors(rng);
                xs[i] = x;
                ys[i] = y;
            }
            let mut e = 0.0;
            for i in 0..l {
                for j in i + 1..l {
                    e += (xs[i] - xs[j]) * (ys[i] - ys[j]);
                }
            }
            out.push(e / l as f64);
        }
        out
    })?;
    let eps: Vec<f64> = chunks.into_iter().flatten().collect();
    let n = eps.len() as f64;
    let mean = eps.iter().sum::<f64>() / n;
    let (mut m2, mut m4) = (0.0, 0.0);
    for &e in &eps {
        let d = (e - mean) * (e - mean);
        m2 += d;
        m4 += d * d;
    }
    let var = m2 / (n - 1.0);
    let m4 = m4 / n;
    let pop_var = m2 / n;
    Ok(EmpiricalErrorMoments {
        mean,
        mean_std_error: (var / n).sqrt(),
        variance: var,
        variance_std_error: ((m4 - pop_var * pop_var).max(0.0) / n).sqrt(),
        n_samples: mc.n_samples,
        seed: mc.master_seed,
    })
}
