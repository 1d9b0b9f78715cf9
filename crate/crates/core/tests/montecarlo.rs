mod common;

use common::*;
use ggsum::curve::{linear_sweep, MetricCurve};
use ggsum::distributions::{gg_cdf, stream, GgParams, GgSampler, QuadSpec};
use ggsum::montecarlo::*;
use ggsum::sum_approx::{IidSumSpec, InidSumSpec, SumSpec};
use ggsum::systems_rf::{Modulation, MrcConfig, RfMetric};
use ggsum::Error;
use rand::Rng;

fn gg(k: f64, m: f64, o: f64) -> GgParams {
    GgParams::new(k, m, o).unwrap()
}

#[test]
fn chunked_streams_match_a_serial_replay() {
    let spec = InidSumSpec::new(2.0, vec![(1, 1.0), (3, 0.4)]).unwrap();
    let mc = McSpec {
        master_seed: 77,
        n_samples: 2_500,
        chunk_size: 1_000,
    };
    let par = sample_sums(&spec, &mc).unwrap();
    let samplers: Vec<GgSampler> = spec.variates().iter().map(GgSampler::new).collect();
    let mut serial = Vec::new();
    for c in 0..3u64 {
        let mut rng = stream(77, c);
        let count = (mc.n_samples - c * mc.chunk_size).min(mc.chunk_size);
        for _ in 0..count {
            serial.push(samplers.iter().map(|s| s.sample(&mut rng)).sum::<f64>());
        }
    }
    assert_eq!(par.len(), 2_500);
    assert!(par.iter().zip(&serial).all(|(a, b)| a.to_bits() == b.to_bits()));
}

#[test]
fn estimates_are_bit_reproducible() {
    let cfg = MrcConfig::exponential_profile(2.0, &[1, 2, 3], 1.0, 0.5).unwrap();
    let sweep = linear_sweep(0.0, 20.0, 5.0).unwrap();
    let mc = McSpec::new(3, 300_000);
    let a = mc_rf_estimates(&cfg, &sweep, RfMetric::Ber(Modulation::Bpsk), &mc).unwrap();
    let b = mc_rf_estimates(&cfg, &sweep, RfMetric::Ber(Modulation::Bpsk), &mc).unwrap();
    assert_eq!(a, b);
    let c = mc_rf_estimates(&cfg, &sweep, RfMetric::Ber(Modulation::Bpsk), &McSpec::new(4, 300_000)).unwrap();
    assert_ne!(a, c);
    assert!(a.iter().all(|e| e.n_samples == 300_000 && e.seed == 3));
}

#[test]
fn mc_spec_validation() {
    let bad = McSpec {
        master_seed: 1,
        n_samples: 0,
        chunk_size: 10,
    };
    assert!(bad.validate().is_err());
    let spec = IidSumSpec::new(2, gg(1.0, 2.0, 1.0)).unwrap();
    assert!(sample_sums(&spec, &bad).is_err());
    assert!(mc_sum_cdf(&spec, &[2.0, 1.0], &McSpec::new(1, 100)).is_err());
}

#[test]
fn semi_analytic_beats_bit_flipping() {
    let cfg = MrcConfig::iid(2, 2.0, 5.0, 3.0).unwrap();
    let mc = McSpec::new(12, 400_000);
    let semi = mc_rf_metric(&cfg, RfPointMetric::Ber(Modulation::Bpsk), &mc).unwrap();
    // naive estimator: one simulated bit per channel draw
    let samplers: Vec<GgSampler> = cfg.branch_laws().iter().map(GgSampler::new).collect();
    let mut rng = stream(99, 0);
    let flips: Vec<f64> = (0..mc.n_samples)
        .map(|_| {
            let g: f64 = samplers.iter().map(|s| s.sample(&mut rng)).sum();
            if rng.random::<f64>() < Modulation::Bpsk.kernel(g) { 1.0 } else { 0.0 }
        })
        .collect();
    let (p, se_naive) = mean_and_stderr(&flips);
    assert!(semi.std_error <= se_naive);
    assert!((p - semi.value).abs() < 4.0 * se_naive);
}

#[test]
fn ks_bracket_on_an_exact_law() {
    // L = 1: the sampled sum is the GG variate itself
    let p = gg(2.0, 5.0, 1.0);
    let spec = IidSumSpec::new(1, p).unwrap();
    let emp = mc_sum_cdf(&spec, &[0.5, 1.0, 2.0], &McSpec::new(2, 200_000)).unwrap();
    let q = QuadSpec::default();
    let ks = ks_distance(&emp.sorted_samples, |x| gg_cdf(&p, x, &q), 400).unwrap();
    assert!(ks.lower <= ks.upper);
    // 99.9% Kolmogorov quantile is 1.95/√n
    assert!(ks.lower < 1.95 / (200_000f64).sqrt());
    assert!(ks.upper < 0.01);
    for (x, v) in emp.points.iter().zip(&emp.values) {
        let f = gg_cdf(&p, *x, &q).unwrap();
        assert!((f - v).abs() < 4.0 * (f * (1.0 - f) / 2e5).sqrt());
    }
    assert!(ks_distance(&[], |_| Ok(0.0), 10).is_err());
}

#[test]
fn ks_bracket_detects_a_wrong_law() {
    let spec = IidSumSpec::new(1, gg(2.0, 5.0, 1.0)).unwrap();
    let emp = mc_sum_cdf(&spec, &[], &McSpec::new(2, 50_000)).unwrap();
    let wrong = gg(2.0, 5.0, 1.3);
    let q = QuadSpec::default();
    let ks = ks_distance(&emp.sorted_samples, |x| gg_cdf(&wrong, x, &q), 200).unwrap();
    assert!(ks.lower > 0.05);
}

fn curve(xs: &[f64], vs: &[f64]) -> MetricCurve {
    MetricCurve::from_values(xs, vs).unwrap()
}

#[test]
fn crossing_interpolates_in_log_scale() {
    let c = curve(&[0.0, 10.0], &[1e-2, 1e-6]);
    assert!((crossing(&c, 1e-4).unwrap() - 5.0).abs() < 1e-12);
    let rising = curve(&[0.0, 10.0], &[1e-6, 1e-2]);
    assert!((crossing(&rising, 1e-3).unwrap() - 7.5).abs() < 1e-12);
    assert!(matches!(crossing(&c, 1e-9), Err(Error::Range(_))));
    assert!(crossing(&c, 0.0).is_err());
}

#[test]
fn gap_sign_and_magnitude() {
    let an = curve(&[0.0, 10.0, 20.0], &[1e-1, 1e-3, 1e-5]);
    let mc = curve(&[0.0, 10.0, 20.0], &[1e-1, 1e-2, 1e-4]);
    let g = gap_in_db_signed(&an, &mc, 1e-4).unwrap();
    assert!((g - 5.0).abs() < 1e-12);
    assert!((gap_in_db(&mc, &an, 1e-4).unwrap() - 5.0).abs() < 1e-12);
    assert!(gap_in_db(&an, &mc, 1e-7).is_err());
}

#[test]
fn probability_standard_errors() {
    let cfg = MrcConfig::iid(2, 2.0, 5.0, 1.0).unwrap();
    let mc = McSpec::new(1, 100_000);
    let e = mc_rf_metric(&cfg, RfPointMetric::Outage { gamma_th: 1.0 }, &mc).unwrap();
    let expect = (e.value * (1.0 - e.value) / 1e5).sqrt();
    assert!((e.std_error - expect).abs() < 1e-15);
    assert!(mc_rf_metric(&cfg, RfPointMetric::Outage { gamma_th: 0.0 }, &mc).is_err());
}
