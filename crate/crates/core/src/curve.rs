//! Metric-versus-abscissa curves shared by the analytic and Monte-Carlo
//! pipelines.

use crate::error::{Error, Result};

/// dB to linear power ratio: 10^(dB/10).
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub x: f64,
    pub value: f64,
    /// Monte-Carlo standard error, when the value is an estimate.
    pub std_error: Option<f64>,
}

/// Rows ordered by strictly increasing abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricCurve {
    rows: Vec<CurveRow>,
}

impl MetricCurve {
    pub fn new(rows: Vec<CurveRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::validation("a curve needs at least one row"));
        }
        check_sweep(&rows.iter().map(|r| r.x).collect::<Vec<_>>())?;
        Ok(Self { rows })
    }

    pub fn from_values(xs: &[f64], values: &[f64]) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::validation("abscissae and values differ in length"));
        }
        Self::new(
            xs.iter()
                .zip(values)
                .map(|(&x, &value)| CurveRow {
                    x,
                    value,
                    std_error: None,
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> &[CurveRow] {
        &self.rows
    }

    pub fn xs(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.x).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Sweeps must be non-empty, finite and strictly increasing.
pub fn check_sweep(xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::validation("sweep is empty"));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::validation("sweep contains a non-finite value"));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::validation("sweep must be strictly increasing"));
    }
    Ok(())
}

/// start, start + step, … up to stop inclusive (with a small tolerance for
/// accumulated rounding).
pub fn linear_sweep(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::validation(format!(
            "invalid sweep {start}:{stop}:{step}; need start <= stop and step > 0"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}
