//! Brownian paths, intersection local times and the moment formulas built on
//! them.
//!
//! Given a path `B`, the noise integral `∫₀^t Ẇ(B_s) ds` is centred Gaussian
//! with variance `∫₀^t∫₀^t γ(B_s − B_r) ds dr`, the self-intersection local time.
//! Every Stratonovich moment therefore reduces to moments of that functional,
//! and Brownian scaling gives `m_k(t) = t^{k(4−α)/2} m_k(1)`.

use alloc::{format, string::String, vec, vec::Vec};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::chaos::richardson_ladder;
use crate::covariance::{CovarianceModel, Dalang};
use crate::error::{invalid, Error, Result};
use crate::greens::{norm, sub, Dimension, Point};
use crate::mc::{stream, MonteCarloEstimate, Replicator};
use crate::quad::{self, Tolerance};
use crate::special::{double_factorial_odd, factorial, gamma, ln_gamma};

/// Discretised Brownian path on `[0, horizon]` with `points.len() = steps + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianPath {
    pub dim: Dimension,
    pub horizon: f64,
    pub step: f64,
    pub points: Vec<Point>,
}

impl BrownianPath {
    /// A path that sits at `at` for the whole horizon.
    pub fn constant(dim: Dimension, horizon: f64, steps: usize, at: Point) -> Self {
        BrownianPath {
            dim,
            horizon,
            step: horizon / steps as f64,
            points: vec![at; steps + 1],
        }
    }

    pub fn endpoint(&self) -> Point {
        self.points[self.points.len() - 1]
    }

    /// Trapezoid weight of sample `i`.
    fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.points.len() {
            0.5 * self.step
        } else {
            self.step
        }
    }
}

pub fn bm_simulate_rng<R: Rng + ?Sized>(dim: Dimension, t: f64, steps: usize, start: Point, rng: &mut R) -> BrownianPath {
    let dt = t / steps as f64;
    let sd = libm::sqrt(dt);
    let mut points = Vec::with_capacity(steps + 1);
    let mut x = start;
    points.push(x);
    for _ in 0..steps {
        for c in x.iter_mut().take(dim.get()) {
            *c += sd * rng.sample::<f64, _>(StandardNormal);
        }
        points.push(x);
    }
    BrownianPath {
        dim,
        horizon: t,
        step: dt,
        points,
    }
}

/// Brownian path from the origin, deterministic in `seed`.
pub fn bm_simulate(dim: Dimension, t: f64, steps: usize, seed: u64) -> Result<BrownianPath> {
    if steps < 2 {
        return Err(invalid("need at least two steps"));
    }
    if !(t > 0.0) {
        return Err(invalid("horizon must be positive"));
    }
    Ok(bm_simulate_rng(dim, t, steps, [0.0; 3], &mut stream(seed, 0)))
}

/// Occupation measure deposited linearly onto a uniform grid.
struct Occupation {
    origin: f64,
    width: f64,
    first: i64,
    mass: Vec<f64>,
}

fn occupation(path: &BrownianPath, origin: f64, width: f64) -> Occupation {
    let cells: Vec<f64> = path.points.iter().map(|p| (p[0] - origin) / width).collect();
    let lo = libm::floor(cells.iter().copied().fold(f64::INFINITY, f64::min)) as i64;
    let hi = libm::floor(cells.iter().copied().fold(f64::NEG_INFINITY, f64::max)) as i64 + 1;
    let mut mass = vec![0.0; (hi - lo + 1) as usize];
    for (i, &c) in cells.iter().enumerate() {
        let base = libm::floor(c);
        let frac = c - base;
        let k = (base as i64 - lo) as usize;
        let w = path.weight(i);
        mass[k] += w * (1.0 - frac);
        mass[k + 1] += w * frac;
    }
    Occupation {
        origin,
        width,
        first: lo,
        mass,
    }
}

/// `γ_ε(k·w)` for `k = 0, 1, …`, extended on demand.
struct KernelRow {
    pair: CovarianceModel,
    width: f64,
    values: Vec<f64>,
}

impl KernelRow {
    fn new(model: &CovarianceModel, eps: f64, width: f64) -> Result<Self> {
        Ok(KernelRow {
            pair: model.clone().mollify(eps)?,
            width,
            values: Vec::new(),
        })
    }

    fn ensure(&mut self, len: usize) -> Result<()> {
        while self.values.len() < len {
            let k = self.values.len() as f64;
            self.values.push(self.pair.gamma(&[k * self.width, 0.0, 0.0])?);
        }
        Ok(())
    }
}

fn paired_occupation(a: &Occupation, b: &Occupation, row: &mut KernelRow) -> Result<f64> {
    let span = (a.first + a.mass.len() as i64 - b.first).abs().max((b.first + b.mass.len() as i64 - a.first).abs());
    row.ensure(span as usize + 1)?;
    let mut total = 0.0;
    for (i, &ma) in a.mass.iter().enumerate() {
        if ma == 0.0 {
            continue;
        }
        let ka = a.first + i as i64;
        let mut inner = 0.0;
        for (j, &mb) in b.mass.iter().enumerate() {
            let kb = b.first + j as i64;
            inner += mb * row.values[(ka - kb).unsigned_abs() as usize];
        }
        total += ma * inner;
    }
    Ok(total)
}

fn check_model(model: &CovarianceModel, dim: Dimension) -> Result<()> {
    if model.dim() != dim {
        return Err(invalid("model and path dimensions differ"));
    }
    if let Dalang::Infinite = model.dalang_integral()? {
        return Err(Error::DalangDivergent);
    }
    Ok(())
}

/// Smallest bin width used for a given smoothing scale in d = 1.
fn bin_width(eps: f64) -> f64 {
    eps / 2.0
}

/// `∫∫ γ_ε(B_s − B_r) ds dr` on the trapezoid grid of the path.
pub fn self_ilt(path: &BrownianPath, model: &CovarianceModel, eps: f64) -> Result<f64> {
    Ok(self_ilt_ladder(path, model, &[eps])?[0])
}

/// [`self_ilt`] at several smoothing scales, sharing the occupation histogram.
pub fn self_ilt_ladder(path: &BrownianPath, model: &CovarianceModel, eps: &[f64]) -> Result<Vec<f64>> {
    check_model(model, path.dim)?;
    if eps.iter().any(|&e| !(e > 0.0)) {
        return Err(invalid("eps must be positive"));
    }
    if path.dim.get() == 1 {
        let width = bin_width(eps.iter().copied().fold(f64::INFINITY, f64::min));
        let occ = occupation(path, path.points[0][0], width);
        eps.iter()
            .map(|&e| {
                let mut row = KernelRow::new(model, e, width)?;
                paired_occupation(&occ, &occ, &mut row)
            })
            .collect()
    } else {
        eps.iter().map(|&e| direct_sum(path, path, model, e)).collect()
    }
}

fn direct_sum(a: &BrownianPath, b: &BrownianPath, model: &CovarianceModel, eps: f64) -> Result<f64> {
    let pair = model.clone().mollify(eps)?;
    let dim = a.dim;
    let reach = a
        .points
        .iter()
        .chain(b.points.iter())
        .map(|p| norm(dim, p))
        .fold(0.0, f64::max);
    let spacing = libm::sqrt(eps) / 64.0;
    let table = RadialTable::new(&pair, spacing, 2.0 * reach + spacing)?;
    let mut total = 0.0;
    for (i, p) in a.points.iter().enumerate() {
        let mut inner = 0.0;
        for (j, q) in b.points.iter().enumerate() {
            inner += b.weight(j) * table.eval(norm(dim, &sub(p, q)));
        }
        total += a.weight(i) * inner;
    }
    Ok(total)
}

/// Linear interpolation of a radial kernel on a uniform grid.
struct RadialTable {
    spacing: f64,
    values: Vec<f64>,
}

impl RadialTable {
    fn new(model: &CovarianceModel, spacing: f64, reach: f64) -> Result<Self> {
        let len = libm::ceil(reach / spacing) as usize + 2;
        let values = (0..len)
            .map(|k| model.gamma(&[k as f64 * spacing, 0.0, 0.0]))
            .collect::<Result<Vec<f64>>>()?;
        Ok(RadialTable { spacing, values })
    }

    fn eval(&self, r: f64) -> f64 {
        let x = r / self.spacing;
        let k = libm::floor(x) as usize;
        if k + 1 >= self.values.len() {
            return self.values[self.values.len() - 1];
        }
        let f = x - k as f64;
        self.values[k] * (1.0 - f) + self.values[k + 1] * f
    }
}

/// `∫∫ γ_ε(B¹_s − B²_r) ds dr` for two paths.
pub fn mutual_ilt(a: &BrownianPath, b: &BrownianPath, model: &CovarianceModel, eps: f64) -> Result<f64> {
    check_model(model, a.dim)?;
    if a.dim != b.dim {
        return Err(invalid("paths live in different dimensions"));
    }
    if !(eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    if a.dim.get() == 1 {
        let width = bin_width(eps);
        let origin = a.points[0][0];
        let oa = occupation(a, origin, width);
        let ob = occupation(b, origin, width);
        let mut row = KernelRow::new(model, eps, width)?;
        paired_occupation(&oa, &ob, &mut row)
    } else {
        direct_sum(a, b, model, eps)
    }
}

/// Settings for ε-ladder intersection-local-time estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct IltConfig {
    pub eps0: f64,
    pub rungs: usize,
    /// Time step; defaults to the square of the finest ε.
    pub step: Option<f64>,
}

impl Default for IltConfig {
    fn default() -> Self {
        IltConfig {
            eps0: 0.1,
            rungs: 4,
            step: None,
        }
    }
}

impl IltConfig {
    pub fn ladder(&self) -> Vec<f64> {
        (0..self.rungs).map(|r| self.eps0 / libm::pow(2.0, r as f64)).collect()
    }

    fn step(&self) -> f64 {
        let finest = self.eps0 / libm::pow(2.0, (self.rungs - 1) as f64);
        self.step.unwrap_or(finest * finest)
    }

    /// Linear weights turning rung values into the extrapolated value. Since
    /// `E γ_ε(B_u) ∝ (ε + u)^{−α/2}`, the mollification bias of the local time
    /// expands in `ε^{(2−α)/2}, ε, ε^{(4−α)/2}, …`.
    pub fn weights(&self, alpha: f64) -> Vec<f64> {
        let exps = Self::exponents(alpha);
        let k = self.rungs.saturating_sub(1).min(exps.len());
        (0..self.rungs)
            .map(|j| {
                let mut unit = vec![0.0; self.rungs];
                unit[j] = 1.0;
                richardson_ladder(self.ladder(), unit, &exps[..k]).extrapolated
            })
            .collect()
    }

    fn exponents(alpha: f64) -> [f64; 3] {
        [(2.0 - alpha) / 2.0, 1.0, (4.0 - alpha) / 2.0]
    }

    fn note(&self, alpha: f64) -> String {
        let k = self.rungs.saturating_sub(1).min(3);
        format!(
            "eps ladder {:?}, dt {:.3e}, Richardson exponents {:?}",
            self.ladder(),
            self.step(),
            &Self::exponents(alpha)[..k]
        )
    }
}

/// Per-replica value `Σ_j w_j ILT_{ε_j}^n`, linear in the rung powers so the
/// sample standard error of the extrapolated estimator is exact.
fn ilt_power_replica(model: &CovarianceModel, n: u32, t: f64, cfg: &IltConfig, seed: u64, i: u64) -> Result<f64> {
    let steps = libm::ceil(t / cfg.step()).max(2.0) as usize;
    let path = bm_simulate_rng(model.dim(), t, steps, [0.0; 3], &mut stream(seed, i));
    let values = self_ilt_ladder(&path, model, &cfg.ladder())?;
    let weights = cfg.weights(model.alpha());
    Ok(values.iter().zip(&weights).map(|(v, w)| w * libm::pow(*v, n as f64)).sum())
}

fn collect<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

/// Monte Carlo estimate of `m_n(t) = E₀[ILT(t)^n]`.
pub fn ilt_moment_mc<R: Replicator>(
    model: &CovarianceModel,
    n: u32,
    t: f64,
    reps: u64,
    seed: u64,
    cfg: &IltConfig,
    runner: &R,
) -> Result<MonteCarloEstimate> {
    if n == 0 {
        return Ok(MonteCarloEstimate::exact(1.0, seed));
    }
    if n > 4 {
        return Err(Error::SizeGuard { n: n as usize, limit: 4 });
    }
    if !(t > 0.0) || reps < 2 {
        return Err(invalid("need t > 0 and at least two replicas"));
    }
    check_model(model, model.dim())?;
    let samples = collect(runner.map(reps, |i| ilt_power_replica(model, n, t, cfg, seed, i)))?;
    Ok(MonteCarloEstimate::from_samples_guarded(&samples, seed)?.with_note(cfg.note(model.alpha())))
}

/// `E ∫₀^∞ e^{−λt} S_n(g_n(·,t,0)) dt`. Odd orders vanish exactly. For even
/// `n = 2k` the Laplace form reads
/// `(1/n!)(λ/2)(½)ⁿ (n−1)!! m_k(1) ∫₀^∞ e^{−λ²t/2} t^{(4−α)k/2} dt`.
pub fn strat_moment_laplace_mc<R: Replicator>(
    model: &CovarianceModel,
    n: u32,
    lam: f64,
    reps: u64,
    seed: u64,
    cfg: &IltConfig,
    runner: &R,
) -> Result<MonteCarloEstimate> {
    if n % 2 == 1 {
        return Ok(MonteCarloEstimate::exact(0.0, seed));
    }
    if !(lam > 0.0) {
        return Err(invalid("lambda must be positive"));
    }
    let k = n / 2;
    let m = ilt_moment_mc(model, k, 1.0, reps, seed, cfg, runner)?;
    let beta = (4.0 - model.alpha()) * k as f64 / 2.0;
    let rate = lam * lam / 2.0;
    // ∫ e^{−rt} t^β dt on t = u²: smooth at the origin for β ≥ 0
    let time = quad::integrate_to_infinity(
        |u| 2.0 * u * libm::exp(-rate * u * u) * libm::pow(u * u, beta),
        0.0,
        Tolerance::abs(1e-13),
    )?
    .value;
    let factor = (lam / 2.0) * libm::pow(0.5, n as f64) * double_factorial_odd(k as u64) as f64 / factorial(n as u64) * time;
    Ok(m.scaled(factor))
}

/// The linear map `m_n ↦ c_n` from local-time moments to the coefficient of
/// `t^{(4−α)n}` in `E u(t, 0)`:
/// `c_n = m_n (1/8)ⁿ (1/n!) Γ(β+1) 2^β / Γ(2β+1)`, `β = (4−α)n/2`.
pub fn mean_coeff_factor(alpha: f64, n: u32) -> f64 {
    let beta = (4.0 - alpha) * n as f64 / 2.0;
    let log = -(n as f64) * libm::log(8.0) - ln_gamma(n as f64 + 1.0) + ln_gamma(beta + 1.0) + beta * libm::log(2.0)
        - ln_gamma(2.0 * beta + 1.0);
    libm::exp(log)
}

/// Monte Carlo estimate of `c_n` through [`mean_coeff_factor`].
pub fn mean_coeff_from_ilt<R: Replicator>(
    model: &CovarianceModel,
    n: u32,
    reps: u64,
    seed: u64,
    cfg: &IltConfig,
    runner: &R,
) -> Result<MonteCarloEstimate> {
    if n == 0 {
        return Ok(MonteCarloEstimate::exact(1.0, seed));
    }
    if n > 3 {
        return Err(Error::SizeGuard { n: n as usize, limit: 3 });
    }
    let m = ilt_moment_mc(model, n, 1.0, reps, seed, cfg, runner)?;
    Ok(m.scaled(mean_coeff_factor(model.alpha(), n)))
}

/// `E₀ ∫₀¹∫₀¹ γ(B_s − B_r) ds dr` for white noise: `(8/3)/√(2π)`.
pub fn white_ilt_mean() -> f64 {
    8.0 / 3.0 / libm::sqrt(2.0 * core::f64::consts::PI)
}

/// Increments of a two-sided Brownian motion on cells `[y₀ + jh, y₀ + (j+1)h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseField1D {
    pub origin: f64,
    pub h: f64,
    pub increments: Vec<f64>,
}

impl NoiseField1D {
    pub fn sample<R: Rng + ?Sized>(half_width: f64, h: f64, rng: &mut R) -> Self {
        let cells = libm::ceil(2.0 * half_width / h) as usize;
        let sd = libm::sqrt(h);
        NoiseField1D {
            origin: -half_width,
            h,
            increments: (0..cells).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect(),
        }
    }

    pub fn zero(half_width: f64, h: f64) -> Self {
        let cells = libm::ceil(2.0 * half_width / h) as usize;
        NoiseField1D {
            origin: -half_width,
            h,
            increments: vec![0.0; cells],
        }
    }
}

/// `∫ L_t(y) W(dy)` with the local time estimated by linear deposition onto
/// the noise cells. Conditionally on the path this is centred Gaussian with
/// variance `Σ_j L_j² h`, the white-noise self-intersection local time.
pub fn quenched_noise_integral(path: &BrownianPath, noise: &NoiseField1D) -> Result<f64> {
    if path.dim.get() != 1 {
        return Err(Error::Unsupported(String::from("quenched integrals are implemented for d = 1")));
    }
    let h = noise.h;
    // deposit at cell centres
    let occ = occupation(path, noise.origin + 0.5 * h, h);
    let mut total = 0.0;
    for (i, &m) in occ.mass.iter().enumerate() {
        if m == 0.0 {
            continue;
        }
        let cell = occ.first + i as i64;
        if cell < 0 || cell as usize >= noise.increments.len() {
            return Err(Error::OutOfRange {
                position: occ.origin + cell as f64 * occ.width,
            });
        }
        total += (m / h) * noise.increments[cell as usize];
    }
    Ok(total)
}

/// `Σ_j L_j² h`, the conditional variance of [`quenched_noise_integral`].
pub fn quenched_variance(path: &BrownianPath, noise: &NoiseField1D) -> f64 {
    let occ = occupation(path, noise.origin + 0.5 * noise.h, noise.h);
    occ.mass.iter().map(|m| m * m / noise.h).sum()
}

/// `Γ(β + 1)` helper exposed for Laplace checks.
pub fn laplace_power(beta: f64, rate: f64) -> f64 {
    gamma(beta + 1.0) / libm::pow(rate, beta + 1.0)
}
