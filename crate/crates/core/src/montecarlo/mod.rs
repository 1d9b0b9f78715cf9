//! Seeded Monte-Carlo oracle.
//!
//! Error probabilities are estimated semi-analytically: the conditional
//! error probability is averaged over sampled channel states instead of
//! simulating bits. A whole sweep is estimated from one set of draws, since
//! changing the mean SNR only rescales the sampled sum.

mod engine;

pub use engine::{McSpec, DEFAULT_CHUNK_SIZE};
pub(crate) use engine::{map_chunks, merge_rows, MeanVar};

use crate::curve::{check_sweep, db_to_linear, CurveRow, MetricCurve};
use crate::distributions::{GgParams, GgSampler, Stream};
use crate::error::{Error, Result};
use crate::sum_approx::SumSpec;
use crate::systems_ow::{ook_kernel, OwConfig, OwMetric};
use crate::systems_rf::{Modulation, MrcConfig, RfMetric};

/// An estimate with its standard error and the run that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

fn samplers(laws: &[GgParams]) -> Vec<GgSampler> {
    laws.iter().map(GgSampler::new).collect()
}

fn draw_sum(samplers: &[GgSampler], rng: &mut Stream) -> f64 {
    samplers.iter().map(|s| s.sample(rng)).sum()
}

/// n_samples draws of Σ_l X_l, in sample order.
pub fn sample_sums<S: SumSpec + ?Sized>(spec: &S, mc: &McSpec) -> Result<Vec<f64>> {
    let s = samplers(&spec.variates());
    let chunks = map_chunks(mc, |rng, count| (0..count).map(|_| draw_sum(&s, rng)).collect::<Vec<_>>())?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Empirical CDF of a sampled sum at chosen points, with the sorted sample
/// kept for distance computations.
#[derive(Debug, Clone, PartialEq)]
pub struct SumCdf {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    pub sorted_samples: Vec<f64>,
}

/// Fraction of sampled sums ≤ each evaluation point.
pub fn mc_sum_cdf<S: SumSpec + ?Sized>(spec: &S, eval_points: &[f64], mc: &McSpec) -> Result<SumCdf> {
    if eval_points.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::validation("evaluation points must be sorted"));
    }
    let mut sorted = sample_sums(spec, mc)?;
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let values = eval_points
        .iter()
        .map(|&x| sorted.partition_point(|&s| s <= x) as f64 / n)
        .collect();
    Ok(SumCdf {
        points: eval_points.to_vec(),
        values,
        sorted_samples: sorted,
    })
}

/// Two-sided bracket on the Kolmogorov–Smirnov distance
/// sup_t |F_n(t) − F(t)|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsBound {
    /// Largest discrepancy observed at the anchor points.
    pub lower: f64,
    /// Bound on the supremum, valid because both CDFs are nondecreasing.
    pub upper: f64,
}

/// Bounds the KS distance between the sample and a continuous CDF using
/// about `anchors` evaluations of `cdf` at sample quantiles.
pub fn ks_distance<F>(sorted: &[f64], cdf: F, anchors: usize) -> Result<KsBound>
where
    F: Fn(f64) -> Result<f64>,
{
    if sorted.is_empty() {
        return Err(Error::validation("empty sample"));
    }
    let n = sorted.len();
    let nf = n as f64;
    let count = anchors.clamp(2, n.max(2));
    let mut idx: Vec<usize> = (0..count)
        .map(|a| ((a as f64 / (count - 1) as f64) * (n - 1) as f64).round() as usize)
        .collect();
    idx.dedup();
    let pts: Vec<(f64, f64, f64)> = idx
        .iter()
        .map(|&i| {
            let t = sorted[i];
            let below = sorted.partition_point(|&s| s < t) as f64 / nf;
            let at = sorted.partition_point(|&s| s <= t) as f64 / nf;
            Ok((below, at, cdf(t)?))
        })
        .collect::<Result<_>>()?;
    let mut lower: f64 = 0.0;
    for &(below, at, f) in &pts {
        lower = lower.max((at - f).abs()).max((below - f).abs());
    }
    // left of the first anchor F_n ∈ [0, F_n(t₀⁻)] and F ∈ [0, F(t₀)]
    let (b0, _, f0) = pts[0];
    let mut upper = lower.max(b0).max(f0);
    for w in pts.windows(2) {
        let (_, at_a, fa) = w[0];
        let (below_b, _, fb) = w[1];
        upper = upper.max(below_b - fa).max(fb - at_a);
    }
    let (_, at_last, f_last) = pts[pts.len() - 1];
    upper = upper.max(1.0 - f_last).max((1.0 - at_last).abs());
    Ok(KsBound { lower, upper })
}

/// A single-point RF metric for the Monte-Carlo estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RfPointMetric {
    Ber(Modulation),
    Outage { gamma_th: f64 },
}

/// A single-point OW metric for the Monte-Carlo estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OwPointMetric {
    Ber,
    Outage { h_th: f64 },
}

/// Averages `eval(z, row)` over draws of the normalized sum `z`.
fn sweep_means<E>(laws: &[GgParams], width: usize, mc: &McSpec, eval: E) -> Result<Vec<MeanVar>>
where
    E: Fn(f64, &mut [f64]) + Sync,
{
    let s = samplers(laws);
    let rows = map_chunks(mc, |rng, count| {
        let mut acc = vec![MeanVar::default(); width];
        let mut buf = vec![0.0; width];
        for _ in 0..count {
            let z = draw_sum(&s, rng);
            eval(z, &mut buf);
            for (a, &v) in acc.iter_mut().zip(&buf) {
                a.push(v);
            }
        }
        acc
    })?;
    Ok(merge_rows(rows, width))
}

fn estimate(m: &MeanVar, probability: bool, mc: &McSpec) -> McEstimate {
    let std_error = if probability {
        let p = m.mean;
        (p * (1.0 - p) / m.n as f64).max(0.0).sqrt()
    } else {
        m.std_error()
    };
    McEstimate {
        value: m.mean,
        std_error,
        n_samples: m.n,
        seed: mc.master_seed,
    }
}

fn to_curve(xs: &[f64], ests: &[McEstimate]) -> Result<MetricCurve> {
    MetricCurve::new(
        xs.iter()
            .zip(ests)
            .map(|(&x, e)| CurveRow {
                x,
                value: e.value,
                std_error: Some(e.std_error),
            })
            .collect(),
    )
}

/// Branch laws divided by the first branch's mean SNR.
fn rf_normalized_laws(cfg: &MrcConfig) -> Result<Vec<GgParams>> {
    let g1 = cfg.mean_snrs()[0];
    cfg.branch_laws().iter().map(|p| p.scaled(1.0 / g1)).collect()
}

/// Estimates along a sweep with one set of draws. BER sweeps set the first
/// branch mean SNR to each abscissa; outage sweeps set γ_th/γ̄₁.
pub fn mc_rf_estimates(cfg: &MrcConfig, sweep_db: &[f64], metric: RfMetric, mc: &McSpec) -> Result<Vec<McEstimate>> {
    check_sweep(sweep_db)?;
    let laws = rf_normalized_laws(cfg)?;
    let lin: Vec<f64> = sweep_db.iter().map(|&x| db_to_linear(x)).collect();
    let (means, probability) = match metric {
        RfMetric::Ber(m) => (
            sweep_means(&laws, lin.len(), mc, |z, row| {
                for (r, &g) in row.iter_mut().zip(&lin) {
                    *r = m.kernel(g * z);
                }
            })?,
            false,
        ),
        RfMetric::Outage => (
            sweep_means(&laws, lin.len(), mc, |z, row| {
                for (r, &t) in row.iter_mut().zip(&lin) {
                    *r = if z <= t { 1.0 } else { 0.0 };
                }
            })?,
            true,
        ),
    };
    Ok(means.iter().map(|m| estimate(m, probability, mc)).collect())
}

pub fn mc_rf_curve(cfg: &MrcConfig, sweep_db: &[f64], metric: RfMetric, mc: &McSpec) -> Result<MetricCurve> {
    to_curve(sweep_db, &mc_rf_estimates(cfg, sweep_db, metric, mc)?)
}

/// Semi-analytic estimate of an RF metric at the configuration's own SNRs.
pub fn mc_rf_metric(cfg: &MrcConfig, metric: RfPointMetric, mc: &McSpec) -> Result<McEstimate> {
    let laws = cfg.branch_laws();
    let (m, probability) = match metric {
        RfPointMetric::Ber(modulation) => (
            sweep_means(&laws, 1, mc, |z, row| row[0] = modulation.kernel(z))?,
            false,
        ),
        RfPointMetric::Outage { gamma_th } => {
            if !(gamma_th > 0.0) {
                return Err(Error::domain(format!("outage threshold must be > 0, got {gamma_th}")));
            }
            (
                sweep_means(&laws, 1, mc, |z, row| row[0] = if z <= gamma_th { 1.0 } else { 0.0 })?,
                true,
            )
        }
    };
    Ok(estimate(&m[0], probability, mc))
}

/// OW estimates along a sweep: μ in dB for BER, h_th/μ in dB for outage.
pub fn mc_ow_estimates(cfg: &OwConfig, sweep_db: &[f64], metric: OwMetric, mc: &McSpec) -> Result<Vec<McEstimate>> {
    check_sweep(sweep_db)?;
    let laws = cfg.link_laws(true);
    let l = cfg.link_count();
    let lin: Vec<f64> = sweep_db.iter().map(|&x| db_to_linear(x)).collect();
    let (means, probability) = match metric {
        OwMetric::Ber => (
            sweep_means(&laws, lin.len(), mc, |z, row| {
                for (r, &mu) in row.iter_mut().zip(&lin) {
                    *r = ook_kernel(mu, l, z);
                }
            })?,
            false,
        ),
        OwMetric::Outage => {
            let thresholds: Vec<f64> = lin.iter().map(|&t| l as f64 * t.sqrt()).collect();
            (
                sweep_means(&laws, lin.len(), mc, |z, row| {
                    for (r, &th) in row.iter_mut().zip(&thresholds) {
                        *r = if z <= th { 1.0 } else { 0.0 };
                    }
                })?,
                true,
            )
        }
    };
    Ok(means.iter().map(|m| estimate(m, probability, mc)).collect())
}

pub fn mc_ow_curve(cfg: &OwConfig, sweep_db: &[f64], metric: OwMetric, mc: &McSpec) -> Result<MetricCurve> {
    to_curve(sweep_db, &mc_ow_estimates(cfg, sweep_db, metric, mc)?)
}

/// Semi-analytic estimate of an OW metric at the configuration's own μ.
pub fn mc_ow_metric(cfg: &OwConfig, metric: OwPointMetric, mc: &McSpec) -> Result<McEstimate> {
    let laws = cfg.link_laws(true);
    let (mu, l) = (cfg.mu(), cfg.link_count());
    let (m, probability) = match metric {
        OwPointMetric::Ber => (sweep_means(&laws, 1, mc, |z, row| row[0] = ook_kernel(mu, l, z))?, false),
        OwPointMetric::Outage { h_th } => {
            if !(h_th > 0.0) {
                return Err(Error::domain(format!("outage threshold must be > 0, got {h_th}")));
            }
            let th = cfg.normalized_threshold(h_th);
            (
                sweep_means(&laws, 1, mc, |z, row| row[0] = if z <= th { 1.0 } else { 0.0 })?,
                true,
            )
        }
    };
    Ok(estimate(&m[0], probability, mc))
}

/// Abscissa at which the curve first reaches `level`, interpolating
/// linearly in log10(value).
pub fn crossing(curve: &MetricCurve, level: f64) -> Result<f64> {
    if !(level > 0.0) {
        return Err(Error::validation(format!("target level must be > 0, got {level}")));
    }
    let rows = curve.rows();
    for w in rows.windows(2) {
        let (a, b) = (w[0], w[1]);
        if (a.value - level) * (b.value - level) > 0.0 {
            continue;
        }
        if a.value == level {
            return Ok(a.x);
        }
        if !(a.value > 0.0 && b.value > 0.0) {
            continue;
        }
        let (la, lb, lt) = (a.value.log10(), b.value.log10(), level.log10());
        if la == lb {
            return Ok(a.x);
        }
        return Ok(a.x + (lt - la) / (lb - la) * (b.x - a.x));
    }
    if rows.last().map(|r| r.value) == Some(level) {
        return Ok(rows[rows.len() - 1].x);
    }
    Err(Error::Range(format!(
        "curve never crosses level {level:e} (values from {:e} to {:e})",
        rows[0].value,
        rows[rows.len() - 1].value
    )))
}

/// Abscissa of the Monte-Carlo crossing minus that of the analytic one.
pub fn gap_in_db_signed(analytic: &MetricCurve, mc: &MetricCurve, target_level: f64) -> Result<f64> {
    Ok(crossing(mc, target_level)? - crossing(analytic, target_level)?)
}

/// Horizontal distance in dB between the two curves at `target_level`.
pub fn gap_in_db(analytic: &MetricCurve, mc: &MetricCurve, target_level: f64) -> Result<f64> {
    Ok(gap_in_db_signed(analytic, mc, target_level)?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_bracket_on_uniform() {
        let n = 10_000;
        let sorted: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let b = ks_distance(&sorted, Ok, 200).unwrap();
        assert!(b.lower <= b.upper);
        assert!(b.lower <= 1e-4 + 1e-12);
        assert!(b.upper < 0.02);
    }

    #[test]
    fn crossing_interpolates_in_log() {
        let c = MetricCurve::from_values(&[0.0, 10.0], &[1e-2, 1e-6]).unwrap();
        assert!((crossing(&c, 1e-4).unwrap() - 5.0).abs() < 1e-12);
        assert!(matches!(crossing(&c, 1e-8), Err(Error::Range(_))));
    }
}
