//! Empirical checks of the samplers and estimators against exact laws.

use hyperwave_core::dmt::{dmt_estimate, dmt_sample_chain, PotentialSpec, UnitWave};
use hyperwave_core::mc::{ks_one_sample, mean_stderr, stream, MonteCarloEstimate, Replicator, Sequential};
use hyperwave_core::pathmc::{bm_simulate, ilt_moment_mc, quenched_noise_integral, quenched_variance, IltConfig, NoiseField1D};
use hyperwave_core::wick::{covariance_inner, isserlis_moment, ito_multiple, GaussianVectorSpec, SymmetricTensor};
use hyperwave_core::{CovarianceModel, Dimension, GreenKernel};

/// Computes replicas in reverse order, then restores replica order.
struct Reversed;

impl Replicator for Reversed {
    fn map<T, F>(&self, count: u64, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        let mut out: Vec<T> = (0..count).rev().map(task).collect();
        out.reverse();
        out
    }
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / std::f64::consts::SQRT_2))
}

#[test]
fn isserlis_against_sampling() {
    let mut rng = stream(11, 0);
    let spec = GaussianVectorSpec::random(4, &mut rng);
    let exact = isserlis_moment(&spec, &[0, 1, 2, 3]).unwrap();
    let samples: Vec<f64> = (0..1_000_000)
        .map(|_| {
            let g = spec.sample(&mut rng);
            g[0] * g[1] * g[2] * g[3]
        })
        .collect();
    let est = MonteCarloEstimate::from_samples(&samples, 11).unwrap();
    assert!(est.z_score(exact) < 3.0, "{est:?} vs {exact}");
}

#[test]
fn multiple_integrals_orthogonal() {
    let mut rng = stream(12, 0);
    let spec = GaussianVectorSpec::random(3, &mut rng);
    let f2 = SymmetricTensor::random(2, 3, &mut rng);
    let g2 = SymmetricTensor::random(2, 3, &mut rng);
    let f1 = SymmetricTensor::random(1, 3, &mut rng);
    let (mut cross, mut same, mut mixed) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..400_000 {
        let w = spec.sample(&mut rng);
        let a = ito_multiple(&f2, &w, &spec).unwrap();
        let b = ito_multiple(&g2, &w, &spec).unwrap();
        let c = ito_multiple(&f1, &w, &spec).unwrap();
        cross.push(a * c);
        same.push(a * b);
        mixed.push(a);
    }
    let z = |xs: &[f64], target: f64| {
        let (m, se) = mean_stderr(xs);
        (m - target).abs() / se
    };
    assert!(z(&cross, 0.0) < 4.0);
    assert!(z(&mixed, 0.0) < 4.0);
    let inner = 2.0 * covariance_inner(&f2, &g2, &spec).unwrap();
    assert!(z(&same, inner) < 4.0);
}

#[test]
fn quenched_integral_is_gaussian() {
    let path = bm_simulate(Dimension::ONE, 1.0, 2000, 3).unwrap();
    let var = quenched_variance(&path, &NoiseField1D::zero(8.0, 0.02));
    let mut rng = stream(13, 0);
    let xs: Vec<f64> = (0..20_000)
        .map(|_| quenched_noise_integral(&path, &NoiseField1D::sample(8.0, 0.02, &mut rng)).unwrap())
        .collect();
    let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let (m2, se2) = mean_stderr(&sq);
    assert!((m2 - var).abs() < 4.0 * se2, "{m2} vs {var}");
    let q: Vec<f64> = xs.iter().map(|x| x.powi(4)).collect();
    let (m4, se4) = mean_stderr(&q);
    assert!((m4 - 3.0 * var * var).abs() < 4.0 * se4);
    let sd = var.sqrt();
    let (_, p) = ks_one_sample(&xs, |x| normal_cdf(x / sd));
    assert!(p > 1e-3);
}

#[test]
fn brownian_endpoints_scale() {
    for t in [0.5, 2.0] {
        let ends: Vec<f64> = (0..4000)
            .map(|i| bm_simulate(Dimension::ONE, t, 64, 1000 + i).unwrap().endpoint()[0] / t.sqrt())
            .collect();
        let (_, p) = ks_one_sample(&ends, normal_cdf);
        assert!(p > 1e-3, "t={t} p={p}");
    }
}

#[test]
fn green_sampler_radius_law() {
    let k = GreenKernel::new(Dimension::TWO);
    let mut rng = stream(14, 0);
    let r: Vec<f64> = (0..20_000)
        .map(|_| {
            let x = k.sample(1.5, &mut rng);
            x[0].hypot(x[1]) / 1.5
        })
        .collect();
    let (_, p) = ks_one_sample(&r, |s| 1.0 - (1.0 - s.clamp(0.0, 1.0).powi(2)).sqrt());
    assert!(p > 1e-3);
}

#[test]
fn jump_times_are_order_statistics() {
    let mut one = Vec::new();
    let mut two = Vec::new();
    for i in 0..30_000 {
        let c = dmt_sample_chain(Dimension::ONE, 2.0, [0.0; 3], 15, i).unwrap();
        match c.jumps() {
            1 => one.push(c.jump_times[0] / 2.0),
            2 => two.push(c.jump_times[0] / 2.0),
            _ => {}
        }
    }
    let (_, p1) = ks_one_sample(&one, |x| x.clamp(0.0, 1.0));
    let (_, p2) = ks_one_sample(&two, |x| 1.0 - (1.0 - x.clamp(0.0, 1.0)).powi(2));
    assert!(p1 > 1e-3 && p2 > 1e-3, "{p1} {p2}");
}

#[test]
fn results_do_not_depend_on_schedule() {
    let f = PotentialSpec::Const(1.0);
    let a = dmt_estimate(Dimension::TWO, &f, &UnitWave, 1.0, [0.0; 3], 2000, 21, &Sequential).unwrap();
    let b = dmt_estimate(Dimension::TWO, &f, &UnitWave, 1.0, [0.0; 3], 2000, 21, &Reversed).unwrap();
    assert_eq!(a, b);
    let cfg = IltConfig::default();
    let m = CovarianceModel::white();
    let a = ilt_moment_mc(&m, 1, 0.5, 50, 4, &cfg, &Sequential).unwrap();
    let b = ilt_moment_mc(&m, 1, 0.5, 50, 4, &cfg, &Reversed).unwrap();
    assert_eq!(a, b);
}
