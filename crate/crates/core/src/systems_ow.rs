//! MIMO optical-wireless links with equal-gain combining over strong
//! turbulence. Each of the M·N links has irradiance GG(1, a_pq, Ω_pq); the
//! receiver sees the aggregate I_T = Σ I_pq scaled by 1/(MN).
//!
//! Everything is evaluated in dimensionless form: irradiances are divided by
//! a reference mean I_ref (the common I_o, or the first link's mean) and the
//! noise enters through μ = η² I_ref² / N_o. The OOK error kernel becomes
//! ½ erfc(√μ · Ĩ / (2MN)).

use rayon::prelude::*;

use crate::curve::{check_sweep, db_to_linear, CurveRow, MetricCurve};
use crate::distributions::{GgParams, QuadSpec};
use crate::error::{Error, Result};
use crate::specfun::erfc;
use crate::sum_approx::{approx_sum_iid, approx_sum_inid, IidSumSpec, InidSumSpec, SumLaw};
use crate::systems_rf::clamp_probability;

#[derive(Debug, Clone, PartialEq)]
pub enum Links {
    /// Every link has turbulence shape a and mean irradiance I_o.
    Iid { a: f64, i_o: f64 },
    /// (a_pq, E[I_pq]) per link, M·N entries.
    Inid(Vec<(u32, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OwConfig {
    m_tx: usize,
    n_rx: usize,
    links: Links,
    eta: f64,
    n0: f64,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::validation(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl OwConfig {
    pub fn new(m_tx: usize, n_rx: usize, links: Links, eta: f64, n0: f64) -> Result<Self> {
        if m_tx == 0 || n_rx == 0 {
            return Err(Error::validation("M and N must be at least 1"));
        }
        positive("eta", eta)?;
        positive("N_o", n0)?;
        match &links {
            Links::Iid { a, i_o } => {
                positive("a", *a)?;
                positive("I_o", *i_o)?;
            }
            Links::Inid(v) => {
                if v.len() != m_tx * n_rx {
                    return Err(Error::validation(format!(
                        "expected M·N = {} links, got {}",
                        m_tx * n_rx,
                        v.len()
                    )));
                }
                InidSumSpec::new(1.0, v.clone())?;
            }
        }
        Ok(Self {
            m_tx,
            n_rx,
            links,
            eta,
            n0,
        })
    }

    /// Configuration with η = 1, reference mean 1 and N_o = 1/μ.
    pub fn normalized(m_tx: usize, n_rx: usize, links: Links, mu: f64) -> Result<Self> {
        let cfg = Self::new(m_tx, n_rx, links, 1.0, 1.0)?;
        cfg.with_mu(mu)
    }

    pub fn m_tx(&self) -> usize {
        self.m_tx
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn links(&self) -> &Links {
        &self.links
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn link_count(&self) -> usize {
        self.m_tx * self.n_rx
    }

    /// I_ref: the common mean, or the first link's mean.
    pub fn reference_irradiance(&self) -> f64 {
        match &self.links {
            Links::Iid { i_o, .. } => *i_o,
            Links::Inid(v) => v[0].1,
        }
    }

    /// μ = η² I_ref² / N_o.
    pub fn mu(&self) -> f64 {
        let i = self.reference_irradiance();
        self.eta * self.eta * i * i / self.n0
    }

    /// Link means divided by I_ref.
    fn normalized_links(&self) -> Links {
        let r = self.reference_irradiance();
        match &self.links {
            Links::Iid { a, .. } => Links::Iid { a: *a, i_o: 1.0 },
            Links::Inid(v) => Links::Inid(v.iter().map(|&(a, o)| (a, o / r)).collect()),
        }
    }

    /// Same links rescaled to reference mean 1, with η = 1 and N_o = 1/μ.
    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        positive("mu", mu)?;
        Self::new(self.m_tx, self.n_rx, self.normalized_links(), 1.0, 1.0 / mu)
    }

    /// Per-link irradiance laws GG(1, a_pq, Ω_pq), optionally normalized.
    pub fn link_laws(&self, normalized: bool) -> Vec<GgParams> {
        let links = if normalized { self.normalized_links() } else { self.links.clone() };
        match links {
            Links::Iid { a, i_o } => vec![GgParams::new(1.0, a, i_o).expect("validated"); self.link_count()],
            Links::Inid(v) => v
                .iter()
                .map(|&(a, o)| GgParams::new(1.0, a as f64, o).expect("validated"))
                .collect(),
        }
    }

    /// Ĩ_th = I_th / I_ref with I_th = (NM/η)·√(h_th·N_o), i.e. NM·√(h_th/μ).
    pub fn normalized_threshold(&self, h_th: f64) -> f64 {
        (self.link_count() as f64) * (h_th / self.mu()).sqrt()
    }
}

fn aggregate(cfg: &OwConfig, links: &Links) -> Result<SumLaw> {
    let l = cfg.link_count();
    match links {
        // GG(a, 1) and GG(1, a) are the same law; this labelling puts the
        // adjusted shape first, as k_T = MNa + ε.
        Links::Iid { a, i_o } => {
            let spec = IidSumSpec::new(l, GgParams::new(*a, 1.0, *i_o)?)?;
            Ok(SumLaw::Single(approx_sum_iid(&spec)?))
        }
        Links::Inid(v) => {
            let spec = InidSumSpec::new(1.0, v.clone())?;
            Ok(SumLaw::Mixture(approx_sum_inid(&spec, false)?))
        }
    }
}

/// Approximate law of the aggregate irradiance I_T = Σ I_pq.
pub fn ow_aggregate_law(cfg: &OwConfig) -> Result<SumLaw> {
    aggregate(cfg, &cfg.links)
}

/// The aggregate law of I_T / I_ref.
pub fn ow_normalized_law(cfg: &OwConfig) -> Result<SumLaw> {
    aggregate(cfg, &cfg.normalized_links())
}

/// OOK error probability given the normalized aggregate irradiance.
pub fn ook_kernel(mu: f64, link_count: usize, i_norm: f64) -> f64 {
    0.5 * erfc(mu.sqrt() * i_norm / (2.0 * link_count as f64))
}

/// Average OOK bit error probability, in (0, 1/2].
pub fn ow_ber(cfg: &OwConfig, q: &QuadSpec) -> Result<f64> {
    let law = ow_normalized_law(cfg)?;
    let (mu, l) = (cfg.mu(), cfg.link_count());
    let raw = law.expect(|i| ook_kernel(mu, l, i), q)?;
    Ok(clamp_probability(raw, f64::MIN_POSITIVE, 0.5, "average BER")?.value)
}

/// P(h_T ≤ h_th) = P(I_T ≤ I_th).
pub fn ow_outage(cfg: &OwConfig, h_th: f64, q: &QuadSpec) -> Result<f64> {
    if !(h_th > 0.0) {
        return Err(Error::domain(format!("outage threshold must be > 0, got {h_th}")));
    }
    let law = ow_normalized_law(cfg)?;
    let raw = law.cdf(cfg.normalized_threshold(h_th), q)?;
    Ok(clamp_probability(raw, 0.0, 1.0, "outage probability")?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OwMetric {
    /// Abscissa: μ in dB.
    Ber,
    /// Abscissa: normalized threshold h_th/μ in dB.
    Outage,
}

pub fn ow_curve(cfg: &OwConfig, sweep_db: &[f64], metric: OwMetric, q: &QuadSpec) -> Result<MetricCurve> {
    check_sweep(sweep_db)?;
    let values = sweep_db
        .par_iter()
        .map(|&x| match metric {
            OwMetric::Ber => ow_ber(&cfg.with_mu(db_to_linear(x))?, q),
            OwMetric::Outage => ow_outage(cfg, cfg.mu() * db_to_linear(x), q),
        })
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
