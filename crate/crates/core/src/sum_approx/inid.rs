//! Partial-fraction expansion of a sum of independent Gamma variates with
//! distinct scales, and the signed GG mixture built from it.

use crate::distributions::{
    gg_breakpoints, gg_moment, gg_tail_cutoff, integrate, GgParams, LnDensity, QuadSpec,
};
use crate::error::{Error, Result};

use super::InidSumSpec;

/// Relative scale spacing below which the expansion is refused.
pub const SPACING_ERROR: f64 = 1e-9;
/// Relative scale spacing below which a warning is attached.
pub const SPACING_WARNING: f64 = 1e-4;
const WEIGHT_SUM_TOL: f64 = 1e-9;

/// Gamma variates sharing one scale, merged into a single Gamma.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaGroup {
    /// Scale θ = Ω_l / m_l.
    pub theta: f64,
    /// Total shape of the merged variates.
    pub shape: u32,
    /// 1-based indices of the original variates in this group.
    pub members: Vec<usize>,
}

/// One coefficient of the expansion: the Gamma(j, θ_i) term of group i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightEntry {
    /// 1-based group index.
    pub i: usize,
    pub j: u32,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSumWeights {
    pub groups: Vec<GammaGroup>,
    pub entries: Vec<WeightEntry>,
    pub warnings: Vec<String>,
}

impl GammaSumWeights {
    pub fn weight_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }
}

fn group_variates(spec: &InidSumSpec) -> Vec<GammaGroup> {
    let mut groups: Vec<GammaGroup> = Vec::new();
    for (idx, &(m, omega)) in spec.per_variate().iter().enumerate() {
        let theta = omega / m as f64;
        match groups.iter_mut().find(|g| g.theta == theta) {
            Some(g) => {
                g.shape += m;
                g.members.push(idx + 1);
            }
            None => groups.push(GammaGroup {
                theta,
                shape: m,
                members: vec![idx + 1],
            }),
        }
    }
    groups
}

/// Weights w(i, j) such that the density of Σ_l Gamma(m_l, Ω_l/m_l) equals
/// Σ_i Σ_{j=1..n_i} w(i, j) · Gamma(j, θ_i) density, where the groups i
/// collect variates of equal scale θ_i and n_i is their total shape.
///
/// The top weight of each group is
/// w(i, n_i) = Π_{q≠i} (1 − θ_q/θ_i)^{−n_q}, kept as sign and log-magnitude,
/// and the rest follow from
/// w(i, n_i − t) = (1/t) Σ_{j=1..t} h_j w(i, n_i − t + j),
/// h_j = Σ_{q≠i} n_q (θ_q / (θ_q − θ_i))^j.
pub fn gamma_sum_weights(spec: &InidSumSpec) -> Result<GammaSumWeights> {
    let variates = spec.per_variate();
    if variates.len() > 1 && variates.iter().all(|v| *v == variates[0]) {
        return Err(Error::IllConditioned(
            "all variates are identical, so every scale coincides; use the i.i.d. approximation".into(),
        ));
    }
    let groups = group_variates(spec);
    let mut warnings = Vec::new();
    for a in 0..groups.len() {
        for b in a + 1..groups.len() {
            let (ta, tb) = (groups[a].theta, groups[b].theta);
            let spacing = (ta - tb).abs() / ta.max(tb);
            if spacing < SPACING_ERROR {
                return Err(Error::IllConditioned(format!(
                    "scales {ta:e} and {tb:e} differ by {spacing:e} relative; the expansion is unstable"
                )));
            }
            if spacing < SPACING_WARNING {
                warnings.push(format!(
                    "scales {ta:e} and {tb:e} differ by only {spacing:e} relative; weights may lose accuracy"
                ));
            }
        }
    }

    let mut entries = Vec::new();
    for (i, gi) in groups.iter().enumerate() {
        let mut ln_top = 0.0;
        let mut negative = false;
        for (q, gq) in groups.iter().enumerate() {
            if q == i {
                continue;
            }
            let f = 1.0 - gq.theta / gi.theta;
            ln_top -= gq.shape as f64 * f.abs().ln();
            if f < 0.0 && gq.shape % 2 == 1 {
                negative = !negative;
            }
        }
        let n = gi.shape as usize;
        // ratios c_t / c_0, where c_t = w(i, n_i − t)
        let h: Vec<f64> = (0..n)
            .map(|j| {
                groups
                    .iter()
                    .enumerate()
                    .filter(|&(q, _)| q != i)
                    .map(|(_, gq)| gq.shape as f64 * (gq.theta / (gq.theta - gi.theta)).powi(j as i32))
                    .sum()
            })
            .collect();
        let mut ratio = vec![1.0; n];
        for t in 1..n {
            let s: f64 = (1..=t).map(|j| h[j] * ratio[t - j]).sum();
            ratio[t] = s / t as f64;
        }
        let sign = if negative { -1.0 } else { 1.0 };
        for (t, r) in ratio.iter().enumerate() {
            let weight = sign * r * ln_top.exp();
            if !weight.is_finite() {
                return Err(Error::IllConditioned(format!(
                    "weight for group {} is not representable",
                    i + 1
                )));
            }
            entries.push(WeightEntry {
                i: i + 1,
                j: (n - t) as u32,
                weight,
            });
        }
    }
    entries.sort_by_key(|e| (e.i, e.j));
    let out = GammaSumWeights {
        groups,
        entries,
        warnings,
    };
    let total = out.weight_sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::IllConditioned(format!(
            "weights sum to {total}, cancellation destroyed the expansion"
        )));
    }
    Ok(out)
}

/// One signed GG term of a mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureComponent {
    pub weight: f64,
    pub params: GgParams,
    /// 1-based scale-group index and Gamma shape j the term came from.
    pub i: usize,
    pub j: u32,
}

/// Signed finite mixture of GG densities. Weights sum to 1, individual
/// weights may be negative.
#[derive(Debug, Clone, PartialEq)]
pub struct GgMixture {
    components: Vec<MixtureComponent>,
    warnings: Vec<String>,
}

impl GgMixture {
    pub fn new(components: Vec<MixtureComponent>, warnings: Vec<String>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::validation("a mixture needs at least one component"));
        }
        Ok(Self {
            components,
            warnings,
        })
    }

    pub fn components(&self) -> &[MixtureComponent] {
        &self.components
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn weight_sum(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    pub fn mean(&self) -> f64 {
        self.components.iter().map(|c| c.weight * c.params.omega()).sum()
    }

    /// Largest component mean, which sets the scale of the breakpoints.
    fn max_omega(&self) -> f64 {
        self.components.iter().map(|c| c.params.omega()).fold(0.0, f64::max)
    }

    fn min_omega(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.params.omega())
            .fold(f64::INFINITY, f64::min)
    }

    /// Breakpoints spanning every component's scale, up to `upper`.
    fn breakpoints(&self, upper: f64) -> Result<Vec<f64>> {
        let lo = GgParams::new(1.0, 1.0, self.min_omega())?;
        Ok(gg_breakpoints(&lo, upper))
    }

    fn tail_cutoff(&self, q: &QuadSpec) -> Result<f64> {
        let mut t: f64 = 0.0;
        for c in &self.components {
            // each term's tail mass is scaled by |weight|
            let tol = q.tail_mass_tol / c.weight.abs().max(1.0) / self.components.len() as f64;
            let qq = QuadSpec {
                tail_mass_tol: tol,
                ..*q
            };
            t = t.max(gg_tail_cutoff(&c.params, &qq)?);
        }
        Ok(t.max(self.max_omega()))
    }

    fn densities(&self) -> Vec<(f64, LnDensity)> {
        self.components
            .iter()
            .map(|c| (c.weight, LnDensity::new(&c.params)))
            .collect()
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        let mut s = 0.0;
        for (w, d) in self.densities() {
            s += w * d.eval(x)?.exp();
        }
        Ok(s)
    }

    /// ∫₀^x of the mixture density, integrated as one signed sum so that
    /// cancellation between terms happens before the error test.
    pub fn cdf(&self, x: f64, q: &QuadSpec) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::domain(format!("mixture cdf needs x >= 0, got {x}")));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let upper = x.min(self.tail_cutoff(q)?);
        let dens = self.densities();
        let r = integrate(
            |t| {
                let mut s = 0.0;
                for (w, d) in &dens {
                    s += w * d.eval(t)?.exp();
                }
                Ok(s)
            },
            &self.breakpoints(upper)?,
            q,
        )?;
        Ok(r.value)
    }

    pub fn moment(&self, n: f64) -> Result<f64> {
        let mut s = 0.0;
        for c in &self.components {
            s += c.weight * gg_moment(&c.params, n)?;
        }
        Ok(s)
    }

    /// ∫₀^∞ kernel(x) · mixture density dx.
    pub fn expect<F: Fn(f64) -> f64>(&self, kernel: F, q: &QuadSpec) -> Result<f64> {
        let upper = self.tail_cutoff(q)?;
        let dens = self.densities();
        let r = integrate(
            |t| {
                let mut s = 0.0;
                for (w, d) in &dens {
                    s += w * d.eval(t)?.exp();
                }
                Ok(kernel(t) * s)
            },
            &self.breakpoints(upper)?,
            q,
        )?;
        Ok(r.value)
    }

    /// Smallest density value on the grid {mean·t : t = 0.01, 0.02, …, 5}.
    pub fn min_pdf_on_grid(&self) -> Result<f64> {
        let mean = self.mean();
        let mut lo = f64::INFINITY;
        for i in 1..=500 {
            lo = lo.min(self.pdf(mean * i as f64 * 0.01)?);
        }
        Ok(lo)
    }
}

/// Signed GG-mixture approximation of an i.n.i.d. sum with a common first
/// shape: the term for (i, j) is GG(L·k, j, j·θ_i) with weight w(i, j).
///
/// With `swap` set, the integer shapes are read as the first shapes and
/// `k_common` as the common second shape; components are then labelled
/// GG(j, L·k_common, j·θ_i), which is the same law.
pub fn approx_sum_inid(spec: &InidSumSpec, swap: bool) -> Result<GgMixture> {
    let w = gamma_sum_weights(spec)?;
    let lk = spec.l() as f64 * spec.k_common();
    let mut comps = Vec::with_capacity(w.entries.len());
    for e in &w.entries {
        let theta = w.groups[e.i - 1].theta;
        let j = e.j as f64;
        let params = if swap {
            GgParams::new(j, lk, j * theta)?
        } else {
            GgParams::new(lk, j, j * theta)?
        };
        comps.push(MixtureComponent {
            weight: e.weight,
            params,
            i: e.i,
            j: e.j,
        });
    }
    GgMixture::new(comps, w.warnings)
}
