//! Monte Carlo plumbing shared by every stochastic estimator.
//!
//! Replica `i` of a run with seed `s` draws from `ChaCha8Rng` seeded by `s`
//! on stream `i`. Reductions walk replicas in index order with a pairwise
//! sum, so the reported numbers do not depend on how replicas were scheduled.

use alloc::{string::String, vec::Vec};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Random stream for replica `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Schedules independent replicas. Implementations must return results in
/// replica order.
pub trait Replicator: Sync {
    fn map<T, F>(&self, count: u64, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send;
}

/// Runs replicas one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Replicator for Sequential {
    fn map<T, F>(&self, count: u64, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        (0..count).map(task).collect()
    }
}

/// Pairwise summation in slice order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1.0);
    (mean, libm::sqrt(var / n))
}

/// Fraction of the total absolute mass carried by the largest 1% of samples.
pub fn top_share(xs: &[f64]) -> f64 {
    let mut abs: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
    let total = pairwise_sum(&abs);
    if total == 0.0 {
        return 0.0;
    }
    abs.sort_by(|a, b| b.total_cmp(a));
    let k = xs.len().div_ceil(100);
    pairwise_sum(&abs[..k]) / total
}

/// Share above which [`top_share`] marks an estimate unreliable.
pub const HEAVY_TAIL_SHARE: f64 = 0.5;

/// Result record of a Monte Carlo estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloEstimate {
    pub value: f64,
    /// Sample standard deviation over `sqrt(reps)`.
    pub stderr: f64,
    pub reps: u64,
    pub seed: u64,
    /// Bias knobs (mollification, time step) or extrapolation details.
    pub bias_note: Option<String>,
    /// Share of the largest 1% of replica values, when tracked.
    pub top_share: Option<f64>,
    pub reliable: bool,
}

impl MonteCarloEstimate {
    pub fn from_samples(samples: &[f64], seed: u64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty);
        }
        let (value, stderr) = mean_stderr(samples);
        Ok(MonteCarloEstimate {
            value,
            stderr,
            reps: samples.len() as u64,
            seed,
            bias_note: None,
            top_share: None,
            reliable: true,
        })
    }

    /// Like [`from_samples`](Self::from_samples), with the heavy-tail guard.
    pub fn from_samples_guarded(samples: &[f64], seed: u64) -> Result<Self> {
        let mut est = Self::from_samples(samples, seed)?;
        let share = top_share(samples);
        est.top_share = Some(share);
        est.reliable = share <= HEAVY_TAIL_SHARE;
        Ok(est)
    }

    pub fn exact(value: f64, seed: u64) -> Self {
        MonteCarloEstimate {
            value,
            stderr: 0.0,
            reps: 0,
            seed,
            bias_note: None,
            top_share: None,
            reliable: true,
        }
    }

    pub fn with_note(mut self, note: String) -> Self {
        self.bias_note = Some(note);
        self
    }

    /// Distance to `target` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        if self.stderr == 0.0 {
            return if self.value == target { 0.0 } else { f64::INFINITY };
        }
        (self.value - target).abs() / self.stderr
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.stderr *= factor.abs();
        self
    }
}

/// Kolmogorov survival function `P(K > x)` for the scaled KS statistic.
fn kolmogorov_q(x: f64) -> f64 {
    if x < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..100 {
        let kf = k as f64;
        let term = libm::exp(-2.0 * kf * kf * x * x);
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test. Returns the statistic and an
/// asymptotic p-value.
pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> (f64, f64) {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i as f64 + 1.0) / n - f);
    }
    let sn = libm::sqrt(n);
    (d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d))
}

/// Two-sample Kolmogorov–Smirnov test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len(), xb.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < na && j < nb {
        let x = xa[i].min(xb[j]);
        while i < na && xa[i] <= x {
            i += 1;
        }
        while j < nb && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
    }
    let ne = libm::sqrt((na * nb) as f64 / (na + nb) as f64);
    (d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let a: u64 = stream(7, 0).random();
        let b: u64 = stream(7, 1).random();
        let c: u64 = stream(7, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn moments() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let (m, se) = mean_stderr(&xs);
        assert_eq!(m, 2.5);
        assert!((se - libm::sqrt(5.0 / 12.0)).abs() < 1e-15);
        let big: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&big), 499_500.0);
    }

    #[test]
    fn kolmogorov_smirnov() {
        let mut rng = stream(11, 0);
        let u: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        let v: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        assert!(ks_one_sample(&u, |x| x.clamp(0.0, 1.0)).1 > 0.001);
        assert!(ks_two_sample(&u, &v).1 > 0.001);
        let shifted: Vec<f64> = v.iter().map(|x| x + 0.2).collect();
        assert!(ks_two_sample(&u, &shifted).1 < 1e-6);
    }

    #[test]
    fn heavy_tail_guard() {
        let mut xs = alloc::vec![1.0; 200];
        xs[0] = 1e6;
        let est = MonteCarloEstimate::from_samples_guarded(&xs, 0).unwrap();
        assert!(!est.reliable);
        let flat = MonteCarloEstimate::from_samples_guarded(&[1.0; 200], 0).unwrap();
        assert!(flat.reliable);
        assert!((flat.top_share.unwrap() - 0.01).abs() < 1e-12);
    }
}
