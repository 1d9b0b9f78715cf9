//! Canned configurations for the reference figures. Parameters the figures
//! do not print (per-branch shapes, per-link turbulence) use the same
//! representative choices as the acceptance suite.

use crate::curve::linear_sweep;
use crate::error::Result;
use crate::systems_ow::{Links, OwConfig, OwMetric};
use crate::systems_rf::{Modulation, MrcConfig, RfMetric};

use super::args::Figure;

#[derive(Debug, Clone)]
pub enum SeriesSystem {
    Rf(MrcConfig, RfMetric),
    Ow(OwConfig, OwMetric),
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub system: SeriesSystem,
}

#[derive(Debug, Clone)]
pub struct FigureSpec {
    pub x_name: &'static str,
    pub sweep: Vec<f64>,
    pub series: Vec<Series>,
    /// True when the metric falls along the sweep (BER), false when it rises.
    pub decreasing: bool,
}

/// Shapes 1, 2, 3 truncated to L.
pub const RF_INID_SHAPES: [u32; 3] = [1, 2, 3];
pub const RF_K: f64 = 2.0;
pub const RF_IID_M: f64 = 5.0;
pub const OW_PROFILE_RATIO: f64 = 0.7;
pub const OW_MIMO: [(usize, usize); 3] = [(2, 1), (3, 1), (2, 2)];
pub const OW_IID: [(usize, usize); 3] = [(1, 1), (2, 1), (2, 2)];

/// Integer shapes 2, 3, 4, 2, … and means 0.7^l for M·N links.
pub fn ow_inid_links(m_tx: usize, n_rx: usize) -> Links {
    Links::Inid(
        (0..m_tx * n_rx)
            .map(|l| (2 + (l % 3) as u32, OW_PROFILE_RATIO.powi(l as i32)))
            .collect(),
    )
}

const MODS: [Modulation; 2] = [Modulation::Bpsk, Modulation::Dbpsk];

fn rf_iid(outage: bool) -> Result<Vec<Series>> {
    let mut s = Vec::new();
    for l in 2..=4 {
        let cfg = MrcConfig::iid(l, RF_K, RF_IID_M, 1.0)?;
        if outage {
            s.push(Series {
                label: format!("L{l}"),
                system: SeriesSystem::Rf(cfg, RfMetric::Outage),
            });
        } else {
            for m in MODS {
                s.push(Series {
                    label: format!("{}_L{l}", m.name()),
                    system: SeriesSystem::Rf(cfg.clone(), RfMetric::Ber(m)),
                });
            }
        }
    }
    Ok(s)
}

fn rf_inid(delta: f64, outage: bool) -> Result<Vec<Series>> {
    let mut s = Vec::new();
    for l in 2..=3 {
        let cfg = MrcConfig::exponential_profile(RF_K, &RF_INID_SHAPES[..l], 1.0, delta)?;
        if outage {
            s.push(Series {
                label: format!("L{l}"),
                system: SeriesSystem::Rf(cfg, RfMetric::Outage),
            });
        } else {
            for m in MODS {
                s.push(Series {
                    label: format!("{}_L{l}", m.name()),
                    system: SeriesSystem::Rf(cfg.clone(), RfMetric::Ber(m)),
                });
            }
        }
    }
    Ok(s)
}

fn ow_iid(metric: OwMetric) -> Result<Vec<Series>> {
    let mut s = Vec::new();
    for a in [4.0, 10.0] {
        for (m, n) in OW_IID {
            let cfg = OwConfig::new(m, n, Links::Iid { a, i_o: 1.0 }, 1.0, 1.0)?;
            s.push(Series {
                label: format!("a{a}_M{m}N{n}"),
                system: SeriesSystem::Ow(cfg, metric),
            });
        }
    }
    Ok(s)
}

fn ow_inid(metric: OwMetric) -> Result<Vec<Series>> {
    OW_MIMO
        .iter()
        .map(|&(m, n)| {
            Ok(Series {
                label: format!("M{m}N{n}"),
                system: SeriesSystem::Ow(OwConfig::new(m, n, ow_inid_links(m, n), 1.0, 1.0)?, metric),
            })
        })
        .collect()
}

pub fn figure(f: Figure) -> Result<FigureSpec> {
    let rf_ber = |series| -> Result<FigureSpec> {
        Ok(FigureSpec {
            x_name: "snr_db",
            sweep: linear_sweep(0.0, 30.0, 1.0)?,
            series,
            decreasing: true,
        })
    };
    let rf_out = |series| -> Result<FigureSpec> {
        Ok(FigureSpec {
            x_name: "threshold_db",
            sweep: linear_sweep(-20.0, 10.0, 1.0)?,
            series,
            decreasing: false,
        })
    };
    let ow = |series, sweep, decreasing, x_name| FigureSpec {
        x_name,
        sweep,
        series,
        decreasing,
    };
    Ok(match f {
        Figure::Fig1 => rf_ber(rf_iid(false)?)?,
        Figure::Fig2 => rf_out(rf_iid(true)?)?,
        Figure::Fig3 => rf_ber(rf_inid(0.5, false)?)?,
        Figure::Fig4 => rf_ber(rf_inid(1.0, false)?)?,
        Figure::Fig5 => rf_out(rf_inid(0.5, true)?)?,
        Figure::Fig6 => rf_out(rf_inid(1.0, true)?)?,
        Figure::Fig7 => ow(ow_iid(OwMetric::Ber)?, linear_sweep(0.0, 40.0, 2.0)?, true, "mu_db"),
        Figure::Fig8 => ow(ow_iid(OwMetric::Outage)?, linear_sweep(-40.0, 10.0, 2.0)?, false, "threshold_db"),
        Figure::Fig9 => ow(ow_inid(OwMetric::Ber)?, linear_sweep(0.0, 60.0, 2.0)?, true, "mu_db"),
        Figure::Fig10 => ow(ow_inid(OwMetric::Outage)?, linear_sweep(-40.0, 10.0, 2.0)?, false, "threshold_db"),
    })
}
