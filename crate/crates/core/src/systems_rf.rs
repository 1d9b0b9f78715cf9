//! Maximal-ratio combining over Generalized-K fading: the combiner output
//! SNR is the sum of the branch SNRs, each GG(k, m_l, γ̄_l).

use rayon::prelude::*;

use crate::curve::{check_sweep, db_to_linear, CurveRow, MetricCurve};
use crate::distributions::{GgParams, QuadSpec};
use crate::error::{Error, Result};
use crate::specfun::erfc;
use crate::sum_approx::{approx_sum_iid, approx_sum_inid, IidSumSpec, InidSumSpec, SumLaw};

/// Tolerance on a signed-mixture probability outside its valid interval
/// before it is treated as ill-conditioned.
pub const PROBABILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Branches {
    /// L branches with shape m and mean SNR γ̄ each.
    Iid { l: usize, m: f64, gamma_bar: f64 },
    /// One (m_l, γ̄_l) pair per branch.
    Inid(Vec<(u32, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MrcConfig {
    k: f64,
    branches: Branches,
}

impl MrcConfig {
    pub fn iid(l: usize, k: f64, m: f64, gamma_bar: f64) -> Result<Self> {
        if l == 0 {
            return Err(Error::validation("L must be at least 1"));
        }
        GgParams::new(k, m, gamma_bar)?;
        Ok(Self {
            k,
            branches: Branches::Iid { l, m, gamma_bar },
        })
    }

    pub fn inid(k: f64, branches: Vec<(u32, f64)>) -> Result<Self> {
        InidSumSpec::new(k, branches.clone())?;
        Ok(Self {
            k,
            branches: Branches::Inid(branches),
        })
    }

    /// Non-identical branches with γ̄_l = γ̄₁·e^{−δ(l−1)}.
    pub fn exponential_profile(k: f64, m: &[u32], gamma_bar_1: f64, delta: f64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::validation(format!("delta must be >= 0, got {delta}")));
        }
        let b = m
            .iter()
            .enumerate()
            .map(|(l, &ml)| (ml, gamma_bar_1 * (-delta * l as f64).exp()))
            .collect();
        Self::inid(k, b)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn branches(&self) -> &Branches {
        &self.branches
    }

    pub fn l(&self) -> usize {
        match &self.branches {
            Branches::Iid { l, .. } => *l,
            Branches::Inid(b) => b.len(),
        }
    }

    /// Mean SNR of each branch.
    pub fn mean_snrs(&self) -> Vec<f64> {
        match &self.branches {
            Branches::Iid { l, gamma_bar, .. } => vec![*gamma_bar; *l],
            Branches::Inid(b) => b.iter().map(|v| v.1).collect(),
        }
    }

    /// Branch laws GG(k, m_l, γ̄_l).
    pub fn branch_laws(&self) -> Vec<GgParams> {
        match &self.branches {
            Branches::Iid { l, m, gamma_bar } => {
                vec![GgParams::new(self.k, *m, *gamma_bar).expect("validated"); *l]
            }
            Branches::Inid(b) => b
                .iter()
                .map(|&(m, g)| GgParams::new(self.k, m as f64, g).expect("validated"))
                .collect(),
        }
    }

    /// The same configuration with every mean SNR multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        match &self.branches {
            Branches::Iid { l, m, gamma_bar } => Self::iid(*l, self.k, *m, gamma_bar * c),
            Branches::Inid(b) => Self::inid(self.k, b.iter().map(|&(m, g)| (m, g * c)).collect()),
        }
    }

    /// Rescaled so that the first branch has mean SNR `gamma_bar_1`.
    pub fn with_first_snr(&self, gamma_bar_1: f64) -> Result<Self> {
        self.scaled(gamma_bar_1 / self.mean_snrs()[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulation {
    Bpsk,
    Dbpsk,
}

impl Modulation {
    /// Conditional bit error probability at instantaneous SNR γ.
    pub fn kernel(&self, gamma: f64) -> f64 {
        match self {
            Modulation::Bpsk => 0.5 * erfc(gamma.sqrt()),
            Modulation::Dbpsk => 0.5 * (-gamma).exp(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Dbpsk => "dbpsk",
        }
    }
}

impl std::str::FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Modulation::Bpsk),
            "dbpsk" => Ok(Modulation::Dbpsk),
            _ => Err(Error::validation(format!("unknown modulation '{s}'"))),
        }
    }
}

/// Approximate law of the combiner output SNR.
pub fn mrc_output_law(cfg: &MrcConfig) -> Result<SumLaw> {
    match &cfg.branches {
        Branches::Iid { l, m, gamma_bar } => {
            let spec = IidSumSpec::new(*l, GgParams::new(cfg.k, *m, *gamma_bar)?)?;
            Ok(SumLaw::Single(approx_sum_iid(&spec)?))
        }
        Branches::Inid(b) => {
            let spec = InidSumSpec::new(cfg.k, b.clone())?;
            Ok(SumLaw::Mixture(approx_sum_inid(&spec, false)?))
        }
    }
}

/// A probability together with the value before clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probability {
    pub value: f64,
    pub raw: f64,
}

/// Checks `raw` against [lo, hi] with [`PROBABILITY_SLACK`] and clamps it.
pub(crate) fn clamp_probability(raw: f64, lo: f64, hi: f64, what: &str) -> Result<Probability> {
    if !raw.is_finite() || raw < lo - PROBABILITY_SLACK || raw > hi + PROBABILITY_SLACK {
        return Err(Error::IllConditioned(format!(
            "{what} evaluated to {raw:e}, outside [{lo}, {hi}]"
        )));
    }
    Ok(Probability {
        value: raw.clamp(lo, hi),
        raw,
    })
}

/// Average BER with the pre-clamp value. The result lies in (0, 1/2].
pub fn rf_ber_detailed(cfg: &MrcConfig, modulation: Modulation, q: &QuadSpec) -> Result<Probability> {
    let law = mrc_output_law(cfg)?;
    let raw = law.expect(|g| modulation.kernel(g), q)?;
    clamp_probability(raw, f64::MIN_POSITIVE, 0.5, "average BER")
}

pub fn rf_ber(cfg: &MrcConfig, modulation: Modulation, q: &QuadSpec) -> Result<f64> {
    Ok(rf_ber_detailed(cfg, modulation, q)?.value)
}

/// P(γ_T ≤ γ_th).
pub fn rf_outage(cfg: &MrcConfig, gamma_th: f64, q: &QuadSpec) -> Result<f64> {
    if !(gamma_th > 0.0) {
        return Err(Error::domain(format!("outage threshold must be > 0, got {gamma_th}")));
    }
    let law = mrc_output_law(cfg)?;
    Ok(clamp_probability(law.cdf(gamma_th, q)?, 0.0, 1.0, "outage probability")?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfMetric {
    /// Abscissa: first-branch mean SNR γ̄₁ in dB.
    Ber(Modulation),
    /// Abscissa: normalized threshold γ_th/γ̄₁ in dB, at the template's SNRs.
    Outage,
}

/// The metric along a sweep; rows are evaluated in parallel and returned in
/// sweep order.
pub fn rf_curve(cfg: &MrcConfig, sweep_db: &[f64], metric: RfMetric, q: &QuadSpec) -> Result<MetricCurve> {
    check_sweep(sweep_db)?;
    let values = sweep_db
        .par_iter()
        .map(|&x| rf_point(cfg, x, metric, q))
        .collect::<Result<Vec<_>>>()?;
    MetricCurve::new(
        sweep_db
            .iter()
            .zip(values)
            .map(|(&x, value)| CurveRow {
                x,
                value,
                std_error: None,
            })
            .collect(),
    )
}

fn rf_point(cfg: &MrcConfig, x_db: f64, metric: RfMetric, q: &QuadSpec) -> Result<f64> {
    match metric {
        RfMetric::Ber(m) => rf_ber(&cfg.with_first_snr(db_to_linear(x_db))?, m, q),
        RfMetric::Outage => rf_outage(cfg, cfg.mean_snrs()[0] * db_to_linear(x_db), q),
    }
}
