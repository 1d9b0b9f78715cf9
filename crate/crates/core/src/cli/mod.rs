//! Command-line front end. Every command writes one CSV report: `#`
//! metadata lines, a column header, data rows, then `#` trailer lines.
//!
//! SNR-like inputs and sweep abscissae are in dB, converted with
//! x = 10^(dB/10).

mod args;
mod config;
mod csv;
mod repro;

use std::ffi::OsString;

use clap::{ArgMatches, CommandFactory, FromArgMatches};
use rayon::prelude::*;

use crate::curve::{db_to_linear, linear_sweep, linear_to_db, MetricCurve};
use crate::distributions::{gg_cdf, gg_moment, gg_pdf, GgParams, QuadSpec};
use crate::error::{Error, Result};
use crate::montecarlo::{gap_in_db_signed, mc_ow_curve, mc_rf_curve, McSpec};
use crate::sum_approx::{
    adjustment_regression, approx_sum_iid, approx_sum_iid_with, approx_sum_inid, error_moments,
    mc_error_moments, solve_adjustment, sum_moments_exact, AdjustmentObjective,
    IidSumSpec, InidSumSpec, SumLaw,
};
use crate::systems_ow::{ow_curve, ow_normalized_law, Links, OwConfig, OwMetric};
use crate::systems_rf::{mrc_output_law, rf_curve, Modulation, MrcConfig, RfMetric};

use args::*;
pub use config::parse_config;
pub use csv::CsvReport;
pub use args::Figure;
pub use repro::{figure, ow_inid_links, FigureSpec, Series, SeriesSystem, OW_IID, OW_MIMO};

/// Runs the tool on a full argv (program name first) and returns the exit
/// code: 0 on success, 2 for bad input, 3 for numerical failures.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config::merge_config_file(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("ggsum: {e}");
            return 2;
        }
    };
    let matches = match command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match execute(&matches) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ggsum: {e}");
            if e.is_numerical() {
                3
            } else {
                2
            }
        }
    }
}

fn command() -> clap::Command {
    fn tune(c: clap::Command) -> clap::Command {
        let names: Vec<String> = c.get_subcommands().map(|s| s.get_name().to_string()).collect();
        let mut c = c.args_override_self(true).allow_negative_numbers(true);
        for n in names {
            c = c.mut_subcommand(n, tune);
        }
        c
    }
    tune(Cli::command())
}

/// Leaf subcommand path and the echo of its effective arguments.
fn leaf_echo(matches: &ArgMatches) -> (String, Vec<(String, String)>) {
    let mut cmd = command();
    let mut path = Vec::new();
    let mut m = matches;
    while let Some((name, sub)) = m.subcommand() {
        path.push(name.to_string());
        cmd = cmd.find_subcommand(name).expect("matched subcommand exists").clone();
        m = sub;
    }
    let mut echo = Vec::new();
    for a in cmd.get_arguments() {
        let id = a.get_id().as_str();
        if matches!(id, "config" | "output" | "help" | "version") {
            continue;
        }
        let Some(values) = m.get_raw(id) else { continue };
        let joined = values.map(|v| v.to_string_lossy().into_owned()).collect::<Vec<_>>().join(",");
        match a.get_long() {
            Some(long) => echo.push((long.to_string(), joined)),
            None => path.push(joined),
        }
    }
    (path.join(" "), echo)
}

fn execute(matches: &ArgMatches) -> Result<()> {
    let cli = Cli::from_arg_matches(matches).map_err(|e| Error::Config(e.to_string()))?;
    let (path, echo) = leaf_echo(matches);
    let (report, common) = match &cli.command {
        Command::Dist(c) => dist(c, &path, echo)?,
        Command::Sum(c) => sum(c, &path, echo)?,
        Command::Rf(RfCmd::Ber(a)) => (rf_analytic(a, false, &path, echo)?, &a.common),
        Command::Rf(RfCmd::Outage(a)) => (rf_analytic(a, true, &path, echo)?, &a.common),
        Command::Ow(OwCmd::Ber(a)) => (ow_analytic(a, false, &path, echo)?, &a.common),
        Command::Ow(OwCmd::Outage(a)) => (ow_analytic(a, true, &path, echo)?, &a.common),
        Command::Mc(c) => system(c, false, &path, echo)?,
        Command::Compare(c) => system(c, true, &path, echo)?,
        Command::Repro(a) => (repro_run(a, &path, echo)?, &a.common),
    };
    emit(&report, common)
}

fn emit(report: &CsvReport, common: &Common) -> Result<()> {
    let text = report.render();
    match &common.output {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn mc_spec(a: &McArgs) -> Result<McSpec> {
    let n: f64 = a
        .samples
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("--samples: not a number: {}", a.samples)))?;
    if !(n >= 1.0) || n.fract() != 0.0 || n > 9.007_199_254_740_992e15 {
        return Err(Error::Config(format!("--samples must be a positive integer, got {}", a.samples)));
    }
    let mc = McSpec {
        master_seed: a.seed,
        n_samples: n as u64,
        chunk_size: a.chunk_size,
    };
    mc.validate()?;
    Ok(mc)
}

fn parse_sweep(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("--sweep expects start:stop:step, got `{s}`")));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("--sweep: `{p}` is not a number")))?;
    }
    linear_sweep(v[0], v[1], v[2])
}

fn warn_into(report: &mut CsvReport, warnings: &[String]) {
    for w in warnings {
        eprintln!("ggsum: warning: {w}");
        report.trailer.push(format!("warning: {w}"));
    }
}

fn dist<'a>(c: &'a DistCmd, path: &str, echo: Vec<(String, String)>) -> Result<(CsvReport, &'a Common)> {
    let (a, kind) = match c {
        DistCmd::Pdf(a) => (a, "pdf"),
        DistCmd::Cdf(a) => (a, "cdf"),
        DistCmd::Moment(a) => (a, "moment"),
    };
    let p = GgParams::new(a.k, a.m, a.omega)?;
    let need_x = || a.x.ok_or_else(|| Error::Config(format!("dist {kind} needs --x")));
    let (col, arg, value) = match kind {
        "pdf" => {
            let x = need_x()?;
            ("x", x, gg_pdf(&p, x)?)
        }
        "cdf" => {
            let x = need_x()?;
            ("x", x, gg_cdf(&p, x, &a.common.quad())?)
        }
        _ => {
            let n = a.n.ok_or_else(|| Error::Config("dist moment needs --n".into()))?;
            ("n", n, gg_moment(&p, n)?)
        }
    };
    let mut r = CsvReport::new(path, echo, &[col, kind]);
    r.push_nums(&[arg, value]);
    Ok((r, &a.common))
}

fn sum<'a>(c: &'a SumCmd, path: &str, echo: Vec<(String, String)>) -> Result<(CsvReport, &'a Common)> {
    match c {
        SumCmd::ApproxIid(a) => {
            let spec = IidSumSpec::new(a.l, GgParams::new(a.k, a.m, a.omega)?)?;
            let mut r = CsvReport::new(path, echo, &["method", "epsilon", "k", "m", "omega"]);
            let eps = adjustment_regression(a.l, a.k.max(a.m), a.k.min(a.m))?;
            let p = approx_sum_iid(&spec)?;
            let row = |name: &str, eps: f64, p: &GgParams| {
                let mut v = vec![name.to_string()];
                v.extend([eps, p.k(), p.m(), p.omega()].map(csv::num));
                v
            };
            r.push(row("regression", eps, &p));
            if a.solve {
                let mode = match a.objective {
                    ObjectiveArg::Relative => AdjustmentObjective::Relative,
                    ObjectiveArg::Absolute => AdjustmentObjective::Absolute,
                };
                let e = solve_adjustment(&spec, mode)?;
                r.push(row("moment-matching", e, &approx_sum_iid_with(&spec, e)?));
            }
            Ok((r, &a.common))
        }
        SumCmd::ApproxInid(a) => {
            let spec = inid_spec(a.k, &a.m_list, &a.omega_list)?;
            let mix = approx_sum_inid(&spec, a.swap)?;
            let mut r = CsvReport::new(path, echo, &["i", "j", "weight", "k", "m", "omega"]);
            for c in mix.components() {
                let mut v = vec![c.i.to_string(), c.j.to_string()];
                v.extend([c.weight, c.params.k(), c.params.m(), c.params.omega()].map(csv::num));
                r.push(v);
            }
            r.trailer.push(format!("weight_sum = {}", csv::num(mix.weight_sum())));
            r.trailer.push(format!("mean = {}", csv::num(mix.mean())));
            warn_into(&mut r, mix.warnings());
            Ok((r, &a.common))
        }
        SumCmd::Moments(a) => {
            let (exact, law) = if !a.m_list.is_empty() {
                let spec = inid_spec(a.k, &a.m_list, &a.omega_list)?;
                let law = SumLaw::Mixture(approx_sum_inid(&spec, false)?);
                (sum_moments_exact(&spec, a.nu_max)?, law)
            } else {
                let (l, m) = match (a.l, a.m) {
                    (Some(l), Some(m)) => (l, m),
                    _ => return Err(Error::Config("moments needs --L and --m, or --m-list".into())),
                };
                let spec = IidSumSpec::new(l, GgParams::new(a.k, m, a.omega)?)?;
                let law = SumLaw::Single(approx_sum_iid(&spec)?);
                (sum_moments_exact(&spec, a.nu_max)?, law)
            };
            let mut r = CsvReport::new(path, echo, &["order", "exact", "approximation"]);
            for (i, e) in exact.iter().enumerate() {
                let nu = (i + 1) as f64;
                r.rows.push(vec![(i + 1).to_string(), csv::num(*e), csv::num(law.moment(nu)?)]);
            }
            warn_into(&mut r, law.warnings());
            Ok((r, &a.common))
        }
        SumCmd::ErrorStats(a) => {
            let spec = IidSumSpec::new(a.l, GgParams::new(a.k, a.m, a.omega)?)?;
            let mc = mc_spec(&a.mc)?;
            let th = error_moments(&spec);
            let em = mc_error_moments(&spec, &mc)?;
            let mut r = CsvReport::new(path, echo, &["quantity", "closed_form", "mc", "mc_stderr"]);
            r.seed = Some(mc.master_seed);
            for (name, t, v, s) in [
                ("mean", th.mean, em.mean, em.mean_std_error),
                ("variance", th.variance, em.variance, em.variance_std_error),
            ] {
                let mut row = vec![name.to_string()];
                row.extend([t, v, s].map(csv::num));
                r.push(row);
            }
            Ok((r, &a.common))
        }
    }
}

fn inid_spec(k: f64, m_list: &[u32], omega_list: &[f64]) -> Result<InidSumSpec> {
    if m_list.len() != omega_list.len() {
        return Err(Error::Config(format!(
            "--m-list has {} entries but --omega-list has {}",
            m_list.len(),
            omega_list.len()
        )));
    }
    InidSumSpec::new(k, m_list.iter().copied().zip(omega_list.iter().copied()).collect())
}

fn rf_config(a: &RfArgs) -> Result<MrcConfig> {
    let g1 = db_to_linear(a.gbar1_db);
    if a.m_list.is_empty() {
        let (l, m) = match (a.l, a.m) {
            (Some(l), Some(m)) => (l, m),
            _ => return Err(Error::Config("give --L and --m, or --m-list".into())),
        };
        return MrcConfig::iid(l, a.k, m, g1);
    }
    let l = a.l.unwrap_or(a.m_list.len());
    if l == 0 || l > a.m_list.len() {
        return Err(Error::Config(format!("--L = {l} but --m-list has {} entries", a.m_list.len())));
    }
    let shapes = &a.m_list[..l];
    if a.gbar_list_db.is_empty() {
        MrcConfig::exponential_profile(a.k, shapes, g1, a.delta)
    } else {
        if a.gbar_list_db.len() < l {
            return Err(Error::Config("--gbar-list-db needs one entry per branch".into()));
        }
        MrcConfig::inid(
            a.k,
            shapes.iter().zip(&a.gbar_list_db).map(|(&m, &g)| (m, db_to_linear(g))).collect(),
        )
    }
}

fn ow_config(a: &OwArgs) -> Result<OwConfig> {
    let links = if a.a_list.is_empty() {
        let shape = a.a.ok_or_else(|| Error::Config("give --a, or --a-list".into()))?;
        Links::Iid { a: shape, i_o: a.io }
    } else {
        let n = a.m_tx * a.n_rx;
        if a.a_list.len() != n {
            return Err(Error::Config(format!("--a-list needs M·N = {n} entries, got {}", a.a_list.len())));
        }
        let omegas: Vec<f64> = if a.omega_list.is_empty() {
            (0..n).map(|l| a.io * a.omega_ratio.powi(l as i32)).collect()
        } else if a.omega_list.len() == n {
            a.omega_list.clone()
        } else {
            return Err(Error::Config(format!(
                "--omega-list needs M·N = {n} entries, got {}",
                a.omega_list.len()
            )));
        };
        Links::Inid(a.a_list.iter().copied().zip(omegas).collect())
    };
    match a.mu_db {
        Some(mu) => OwConfig::normalized(a.m_tx, a.n_rx, links, db_to_linear(mu)),
        None => OwConfig::new(a.m_tx, a.n_rx, links, a.eta, a.n0),
    }
}

fn modulation(m: ModArg) -> Modulation {
    match m {
        ModArg::Bpsk => Modulation::Bpsk,
        ModArg::Dbpsk => Modulation::Dbpsk,
    }
}

/// Abscissa name, metric name and sweep of an RF command.
fn rf_setup(a: &RfArgs, outage: bool) -> Result<(MrcConfig, RfMetric, Vec<f64>, &'static str, &'static str)> {
    let cfg = rf_config(a)?;
    let (metric, x, name, default) = if outage {
        (RfMetric::Outage, "threshold_db", "outage", a.threshold_db)
    } else {
        (RfMetric::Ber(modulation(a.modulation)), "snr_db", "ber", a.gbar1_db)
    };
    let sweep = match &a.sweep {
        Some(s) => parse_sweep(s)?,
        None => vec![default],
    };
    Ok((cfg, metric, sweep, x, name))
}

fn ow_setup(a: &OwArgs, outage: bool) -> Result<(OwConfig, OwMetric, Vec<f64>, &'static str, &'static str)> {
    let cfg = ow_config(a)?;
    let (metric, x, name, default) = if outage {
        (OwMetric::Outage, "threshold_db", "outage", a.threshold_db)
    } else {
        (OwMetric::Ber, "mu_db", "ber", linear_to_db(cfg.mu()))
    };
    let sweep = match &a.sweep {
        Some(s) => parse_sweep(s)?,
        None => vec![default],
    };
    Ok((cfg, metric, sweep, x, name))
}

fn rf_analytic(a: &RfArgs, outage: bool, path: &str, echo: Vec<(String, String)>) -> Result<CsvReport> {
    let (cfg, metric, sweep, x, name) = rf_setup(a, outage)?;
    let law = mrc_output_law(&cfg)?;
    let curve = rf_curve(&cfg, &sweep, metric, &a.common.quad())?;
    let mut r = CsvReport::new(path, echo, &[x, name]);
    for row in curve.rows() {
        r.push_nums(&[row.x, row.value]);
    }
    warn_into(&mut r, law.warnings());
    Ok(r)
}

fn ow_analytic(a: &OwArgs, outage: bool, path: &str, echo: Vec<(String, String)>) -> Result<CsvReport> {
    let (cfg, metric, sweep, x, name) = ow_setup(a, outage)?;
    let law = ow_normalized_law(&cfg)?;
    let curve = ow_curve(&cfg, &sweep, metric, &a.common.quad())?;
    let mut r = CsvReport::new(path, echo, &[x, name]);
    for row in curve.rows() {
        r.push_nums(&[row.x, row.value]);
    }
    warn_into(&mut r, law.warnings());
    Ok(r)
}

fn gap_line(analytic: &MetricCurve, mc: &MetricCurve, level: f64) -> String {
    match gap_in_db_signed(analytic, mc, level) {
        Ok(g) => format!("gap_db@{level:e} = {}", csv::num(g)),
        Err(e) => format!("gap_db@{level:e} = nan ({e})"),
    }
}

fn system<'a>(c: &'a SystemCmd, with_analytic: bool, path: &str, echo: Vec<(String, String)>) -> Result<(CsvReport, &'a Common)> {
    let (analytic, mc_curve, x, name, common, level, warnings, seed) = match c {
        SystemCmd::RfBer(a) | SystemCmd::RfOutage(a) => {
            let (cfg, metric, sweep, x, name) = rf_setup(a, matches!(c, SystemCmd::RfOutage(_)))?;
            let mc = mc_spec(&a.mc)?;
            let (analytic, warnings) = if with_analytic {
                let law = mrc_output_law(&cfg)?;
                (Some(rf_curve(&cfg, &sweep, metric, &a.common.quad())?), law.warnings().to_vec())
            } else {
                (None, Vec::new())
            };
            let m = mc_rf_curve(&cfg, &sweep, metric, &mc)?;
            (analytic, m, x, name, &a.common, a.target_level, warnings, mc.master_seed)
        }
        SystemCmd::OwBer(a) | SystemCmd::OwOutage(a) => {
            let (cfg, metric, sweep, x, name) = ow_setup(a, matches!(c, SystemCmd::OwOutage(_)))?;
            let mc = mc_spec(&a.mc)?;
            let (analytic, warnings) = if with_analytic {
                let law = ow_normalized_law(&cfg)?;
                (Some(ow_curve(&cfg, &sweep, metric, &a.common.quad())?), law.warnings().to_vec())
            } else {
                (None, Vec::new())
            };
            let m = mc_ow_curve(&cfg, &sweep, metric, &mc)?;
            (analytic, m, x, name, &a.common, a.target_level, warnings, mc.master_seed)
        }
    };
    let mc_col = format!("{name}_mc");
    let r = match &analytic {
        Some(an) => {
            let an_col = format!("{name}_analytic");
            let mut r = CsvReport::new(path, echo, &[x, &an_col, &mc_col, "mc_stderr"]);
            for (a, m) in an.rows().iter().zip(mc_curve.rows()) {
                r.push_nums(&[a.x, a.value, m.value, m.std_error.unwrap_or(f64::NAN)]);
            }
            r.trailer.push(gap_line(an, &mc_curve, level));
            r
        }
        None => {
            let mut r = CsvReport::new(path, echo, &[x, &mc_col, "mc_stderr"]);
            for m in mc_curve.rows() {
                r.push_nums(&[m.x, m.value, m.std_error.unwrap_or(f64::NAN)]);
            }
            r
        }
    };
    let mut r = r;
    r.seed = Some(seed);
    warn_into(&mut r, &warnings);
    Ok((r, common))
}

/// Analytic and Monte-Carlo curves of one series.
pub fn series_curves(s: &Series, sweep: &[f64], q: &QuadSpec, mc: &McSpec) -> Result<(MetricCurve, MetricCurve)> {
    match &s.system {
        SeriesSystem::Rf(cfg, metric) => Ok((rf_curve(cfg, sweep, *metric, q)?, mc_rf_curve(cfg, sweep, *metric, mc)?)),
        SeriesSystem::Ow(cfg, metric) => Ok((ow_curve(cfg, sweep, *metric, q)?, mc_ow_curve(cfg, sweep, *metric, mc)?)),
    }
}

fn repro_run(a: &ReproArgs, path: &str, echo: Vec<(String, String)>) -> Result<CsvReport> {
    let spec = figure(a.figure)?;
    let mc = mc_spec(&a.mc)?;
    let q = a.common.quad();
    let curves = spec
        .series
        .par_iter()
        .map(|s| series_curves(s, &spec.sweep, &q, &mc))
        .collect::<Result<Vec<_>>>()?;
    let mut cols = vec![spec.x_name.to_string()];
    for s in &spec.series {
        cols.push(format!("{}_analytic", s.label));
        cols.push(format!("{}_mc", s.label));
        cols.push(format!("{}_mc_stderr", s.label));
    }
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut r = CsvReport::new(path, echo, &col_refs);
    r.seed = Some(mc.master_seed);
    for (i, &x) in spec.sweep.iter().enumerate() {
        let mut row = vec![x];
        for (an, m) in &curves {
            let mr = m.rows()[i];
            row.extend([an.rows()[i].value, mr.value, mr.std_error.unwrap_or(f64::NAN)]);
        }
        r.push_nums(&row);
    }
    for s in &spec.series {
        let warnings = match &s.system {
            SeriesSystem::Rf(cfg, _) => mrc_output_law(cfg)?.warnings().to_vec(),
            SeriesSystem::Ow(cfg, _) => ow_normalized_law(cfg)?.warnings().to_vec(),
        };
        warn_into(&mut r, &warnings);
    }
    Ok(r)
}
