//! Poisson jump-chain representation of the wave equation with a potential,
//! `∂²u/∂t² = Δu + f(x) u`.
//!
//! Jump times `τ_1 < ⋯ < τ_N` are a rate-1 Poisson process on `[0, t]`, and the
//! chain moves by `X_{τ_k} − X_{τ_{k−1}} ~ G(τ_k − τ_{k−1}, ·)/(τ_k − τ_{k−1})`.
//! Then `u(t, x) = E[e^t u₀(t − τ_N, X_{τ_N}) ∏ (τ_k − τ_{k−1}) f(X_{τ_k})]`, where
//! `u₀` is the free solution with the given initial data.

use alloc::{format, string::String, vec, vec::Vec};

use rand::Rng;
use rand_distr::Exp1;

use crate::chaos::g_n_closed_1d;
use crate::error::{invalid, Error, Result};
use crate::greens::{add, Dimension, GreenKernel, Point};
use crate::mc::{stream, MonteCarloEstimate, Replicator};
use crate::quad::{self, Tolerance};

/// A bounded potential `f`.
pub trait Potential: Sync {
    fn eval(&self, x: &Point) -> Result<f64>;
}

/// Potentials with a textual form.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Const(f64),
    /// `a · exp(−|y|²/(2s²))`
    Gauss { a: f64, s: f64 },
    Table(TablePotential),
}

impl Potential for PotentialSpec {
    fn eval(&self, x: &Point) -> Result<f64> {
        match self {
            PotentialSpec::Const(c) => Ok(*c),
            PotentialSpec::Gauss { a, s } => {
                let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                Ok(a * libm::exp(-r2 / (2.0 * s * s)))
            }
            PotentialSpec::Table(t) => t.eval(x),
        }
    }
}

impl PotentialSpec {
    /// Parses `const:<c>` or `gauss:a=<a>,s=<s>`. Tables are read by the caller.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected kind:args, got '{s}'")))?;
        let num = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{v}'")))
        };
        match kind.trim() {
            "const" => Ok(PotentialSpec::Const(num(rest)?)),
            "gauss" => {
                let mut a = None;
                let mut sd = None;
                for item in rest.split(',') {
                    let (k, v) = item
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("expected key=value, got '{item}'")))?;
                    match k.trim() {
                        "a" => a = Some(num(v)?),
                        "s" => sd = Some(num(v)?),
                        other => return Err(Error::Parse(format!("unknown key '{other}'"))),
                    }
                }
                let a = a.ok_or_else(|| Error::Parse(String::from("gauss needs a")))?;
                let sd = sd.ok_or_else(|| Error::Parse(String::from("gauss needs s")))?;
                if !(sd > 0.0) {
                    return Err(Error::Parse(String::from("gauss width must be positive")));
                }
                Ok(PotentialSpec::Gauss { a, s: sd })
            }
            other => Err(Error::Parse(format!("unknown potential '{other}'"))),
        }
    }
}

/// Potential sampled on a tensor grid, multilinear in between.
#[derive(Debug, Clone, PartialEq)]
pub struct TablePotential {
    axes: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl TablePotential {
    /// Builds from rows `(position, value)` that cover a full tensor grid, in
    /// any order.
    pub fn from_rows(dim: Dimension, rows: &[(Point, f64)]) -> Result<Self> {
        let d = dim.get();
        if rows.is_empty() {
            return Err(Error::Empty);
        }
        let mut axes: Vec<Vec<f64>> = vec![Vec::new(); d];
        for (p, _) in rows {
            for (k, axis) in axes.iter_mut().enumerate() {
                axis.push(p[k]);
            }
        }
        for axis in axes.iter_mut() {
            axis.sort_by(f64::total_cmp);
            axis.dedup();
            if axis.len() < 2 {
                return Err(invalid("table needs at least two nodes per axis"));
            }
        }
        let len: usize = axes.iter().map(Vec::len).product();
        if len != rows.len() {
            return Err(invalid("table rows do not form a full grid"));
        }
        let mut values = vec![f64::NAN; len];
        for (p, v) in rows {
            if !v.is_finite() {
                return Err(Error::UnboundedPotential { value: *v });
            }
            let mut flat = 0;
            for (k, axis) in axes.iter().enumerate() {
                let i = axis
                    .binary_search_by(|a| a.total_cmp(&p[k]))
                    .map_err(|_| invalid("table node off the grid"))?;
                flat = flat * axis.len() + i;
            }
            values[flat] = *v;
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(invalid("duplicate table rows"));
        }
        Ok(TablePotential { axes, values })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn eval(&self, x: &Point) -> Result<f64> {
        let d = self.axes.len();
        let mut lower = [0usize; 3];
        let mut frac = [0.0; 3];
        for k in 0..d {
            let axis = &self.axes[k];
            let v = x[k];
            if v < axis[0] || v > axis[axis.len() - 1] {
                return Err(Error::OutOfRange { position: v });
            }
            let i = axis.partition_point(|a| *a <= v).clamp(1, axis.len() - 1) - 1;
            lower[k] = i;
            frac[k] = (v - axis[i]) / (axis[i + 1] - axis[i]);
        }
        let mut total = 0.0;
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut flat = 0;
            for k in 0..d {
                let up = (corner >> k) & 1;
                w *= if up == 1 { frac[k] } else { 1.0 - frac[k] };
                flat = flat * self.axes[k].len() + lower[k] + up;
            }
            if w != 0.0 {
                total += w * self.values[flat];
            }
        }
        Ok(total)
    }
}

/// A closure used as a potential.
pub struct FnPotential<F>(pub F);

impl<F: Fn(&Point) -> f64 + Sync> Potential for FnPotential<F> {
    fn eval(&self, x: &Point) -> Result<f64> {
        Ok((self.0)(x))
    }
}

/// Free wave solution `u₀(s, y)` consumed by the estimator.
pub trait FreeWave: Sync {
    fn eval(&self, s: f64, y: &Point) -> f64;
}

/// `u₀ ≡ 1` (unit initial position, zero velocity).
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitWave;

impl FreeWave for UnitWave {
    fn eval(&self, _s: f64, _y: &Point) -> f64 {
        1.0
    }
}

impl<F: Fn(f64, &Point) -> f64 + Sync> FreeWave for F {
    fn eval(&self, s: f64, y: &Point) -> f64 {
        self(s, y)
    }
}

/// Poisson jump times and chain positions on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpChain {
    pub horizon: f64,
    pub start: Point,
    pub jump_times: Vec<f64>,
    pub positions: Vec<Point>,
}

impl JumpChain {
    pub fn jumps(&self) -> usize {
        self.jump_times.len()
    }

    pub fn last_position(&self) -> Point {
        self.positions.last().copied().unwrap_or(self.start)
    }

    /// `e^t u₀(t − τ_N, X_{τ_N}) ∏ (τ_k − τ_{k−1}) f(X_{τ_k})`.
    pub fn weight<P: Potential + ?Sized, U: FreeWave + ?Sized>(&self, f: &P, u0: &U) -> Result<f64> {
        let mut w = libm::exp(self.horizon);
        let mut prev = 0.0;
        for (tau, x) in self.jump_times.iter().zip(&self.positions) {
            let v = f.eval(x)?;
            if !v.is_finite() {
                return Err(Error::UnboundedPotential { value: v });
            }
            w *= (tau - prev) * v;
            prev = *tau;
        }
        let last = self.jump_times.last().copied().unwrap_or(0.0);
        Ok(w * u0.eval(self.horizon - last, &self.last_position()))
    }
}

pub fn dmt_sample_chain_rng<R: Rng + ?Sized>(dim: Dimension, t: f64, x: Point, rng: &mut R) -> JumpChain {
    let kernel = GreenKernel::new(dim);
    let mut jump_times = Vec::new();
    let mut positions = Vec::new();
    let mut now = 0.0;
    let mut at = x;
    loop {
        let gap: f64 = rng.sample(Exp1);
        if now + gap > t {
            break;
        }
        now += gap;
        at = add(&at, &kernel.sample(gap, rng));
        jump_times.push(now);
        positions.push(at);
    }
    JumpChain {
        horizon: t,
        start: x,
        jump_times,
        positions,
    }
}

/// Chain for replica `index` of a run seeded with `seed`.
pub fn dmt_sample_chain(dim: Dimension, t: f64, x: Point, seed: u64, index: u64) -> Result<JumpChain> {
    if !(t > 0.0) {
        return Err(invalid("horizon must be positive"));
    }
    Ok(dmt_sample_chain_rng(dim, t, x, &mut stream(seed, index)))
}

fn chain_weights<P, U, R>(dim: Dimension, f: &P, u0: &U, t: f64, x: Point, reps: u64, seed: u64, runner: &R) -> Result<Vec<(usize, f64)>>
where
    P: Potential + ?Sized,
    U: FreeWave + ?Sized,
    R: Replicator,
{
    if !(t > 0.0) || reps < 2 {
        return Err(invalid("need t > 0 and at least two replicas"));
    }
    runner
        .map(reps, |i| {
            let chain = dmt_sample_chain_rng(dim, t, x, &mut stream(seed, i));
            Ok((chain.jumps(), chain.weight(f, u0)?))
        })
        .into_iter()
        .collect()
}

/// Monte Carlo estimate of `u(t, x)`.
pub fn dmt_estimate<P, U, R>(dim: Dimension, f: &P, u0: &U, t: f64, x: Point, reps: u64, seed: u64, runner: &R) -> Result<MonteCarloEstimate>
where
    P: Potential + ?Sized,
    U: FreeWave + ?Sized,
    R: Replicator,
{
    let samples: Vec<f64> = chain_weights(dim, f, u0, t, x, reps, seed, runner)?
        .into_iter()
        .map(|(_, w)| w)
        .collect();
    MonteCarloEstimate::from_samples(&samples, seed)
}

/// `∫ g_n(x_1, …, x_n; t, x) ∏ f(x_k) dx` in d = 1, for n ≤ 2.
pub fn dmt_series_term<P: Potential + ?Sized>(f: &P, n: usize, t: f64, x: f64) -> Result<f64> {
    let tol = Tolerance::abs(1e-11);
    let fx = |y: f64| f.eval(&[y, 0.0, 0.0]);
    let mut failure = None;
    let value = match n {
        0 => 1.0,
        1 => {
            quad::integrate_with_breaks(
                |y| match fx(y) {
                    Ok(v) => g_n_closed_1d(1, t, x, &[y]) * v,
                    Err(e) => {
                        failure = Some(e);
                        0.0
                    }
                },
                x - t,
                x + t,
                &[x],
                tol,
            )?
            .value
        }
        2 => {
            let inner = |y1: f64| -> Result<f64> {
                let room = t - (y1 - x).abs();
                if room <= 0.0 {
                    return Ok(0.0);
                }
                let f1 = fx(y1)?;
                let mut bad = None;
                let v = quad::integrate_with_breaks(
                    |y2| match fx(y2) {
                        Ok(v) => g_n_closed_1d(2, t, x, &[y1, y2]) * v,
                        Err(e) => {
                            bad = Some(e);
                            0.0
                        }
                    },
                    y1 - room,
                    y1 + room,
                    &[y1],
                    tol,
                )?;
                match bad {
                    Some(e) => Err(e),
                    None => Ok(f1 * v.value),
                }
            };
            quad::integrate_with_breaks(
                |y1| match inner(y1) {
                    Ok(v) => v,
                    Err(e) => {
                        failure = Some(e);
                        0.0
                    }
                },
                x - t,
                x + t,
                &[x],
                tol,
            )?
            .value
        }
        _ => return Err(Error::SizeGuard { n, limit: 2 }),
    };
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Contribution of the chains with `N(t) = jumps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stratum {
    pub jumps: usize,
    pub count: u64,
    /// Sum of the stratum's weights divided by the total replica count.
    pub contribution: f64,
    /// Share of the estimator's variance carried by the stratum.
    pub variance_share: f64,
    /// Relative standard error of the stratum's contribution.
    pub relative_stderr: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceReport {
    pub estimate: MonteCarloEstimate,
    pub relative_stderr: f64,
    pub flagged: bool,
    pub strata: Vec<Stratum>,
}

/// Relative standard error above which a stratum or estimate is flagged.
pub const FLAG_RELATIVE_STDERR: f64 = 0.1;

/// Breaks the estimator's mean and variance down by the number of jumps.
pub fn dmt_variance_report<P, R>(dim: Dimension, f: &P, t: f64, reps: u64, seed: u64, runner: &R) -> Result<VarianceReport>
where
    P: Potential + ?Sized,
    R: Replicator,
{
    let pairs = chain_weights(dim, f, &UnitWave, t, [0.0; 3], reps, seed, runner)?;
    let weights: Vec<f64> = pairs.iter().map(|(_, w)| *w).collect();
    let estimate = MonteCarloEstimate::from_samples(&weights, seed)?;
    let mean = estimate.value;
    let total_var: f64 = weights.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>();
    let max_jumps = pairs.iter().map(|(k, _)| *k).max().unwrap_or(0);
    let mut strata = Vec::new();
    for k in 0..=max_jumps {
        // the stratum's contribution is the mean of w·1{N = k}
        let part: Vec<f64> = pairs.iter().map(|(j, w)| if *j == k { *w } else { 0.0 }).collect();
        let count = pairs.iter().filter(|(j, _)| *j == k).count() as u64;
        if count == 0 {
            continue;
        }
        let (c, se) = crate::mc::mean_stderr(&part);
        let share = if total_var > 0.0 {
            pairs
                .iter()
                .filter(|(j, _)| *j == k)
                .map(|(_, w)| (w - mean) * (w - mean))
                .sum::<f64>()
                / total_var
        } else {
            0.0
        };
        let rel = if c != 0.0 { se / c.abs() } else if se == 0.0 { 0.0 } else { f64::INFINITY };
        strata.push(Stratum {
            jumps: k,
            count,
            contribution: c,
            variance_share: share,
            relative_stderr: rel,
            flagged: rel > FLAG_RELATIVE_STDERR,
        });
    }
    let relative_stderr = if mean != 0.0 { estimate.stderr / mean.abs() } else { f64::INFINITY };
    Ok(VarianceReport {
        flagged: relative_stderr > FLAG_RELATIVE_STDERR,
        relative_stderr,
        estimate,
        strata,
    })
}

/// Laplace check for a constant potential `c < λ²`:
/// `∫₀^∞ e^{−λt} Σ_n cⁿ t^{2n}/(2n)! dt` against
/// `(λ/2) ∫₀^∞ e^{−λ²t/2} E₀ exp{½ ∫₀^t f(B_s) ds} dt`, both equal to `λ/(λ² − c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantLaplaceCheck {
    pub series_side: f64,
    pub brownian_side: f64,
    pub exact: f64,
}

pub fn constant_potential_laplace(c: f64, lam: f64) -> Result<ConstantLaplaceCheck> {
    if !(lam > 0.0) || c >= lam * lam {
        return Err(invalid("need lambda > 0 and c < lambda²"));
    }
    let root = libm::sqrt(c.abs());
    let series = |t: f64| {
        // Σ cⁿ t^{2n}/(2n)! summed term by term
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        loop {
            term *= c * t * t / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
            sum += term;
            k += 1.0;
            if term.abs() < 1e-17 * sum.abs() || k > 500.0 {
                break;
            }
        }
        sum
    };
    let decay = if c > 0.0 { lam - root } else { lam };
    // the integrand is below e^{-36} past the horizon
    let horizon = 36.0 / decay.max(1e-3);
    let tol = Tolerance::abs(1e-12);
    let series_side = quad::integrate(|t| libm::exp(-lam * t) * series(t), 0.0, horizon, tol)?.value;
    let rate = lam * lam / 2.0 - c / 2.0;
    let brownian_side = (lam / 2.0) * quad::integrate_to_infinity(|t| libm::exp(-rate * t), 0.0, tol)?.value;
    Ok(ConstantLaplaceCheck {
        series_side,
        brownian_side,
        exact: lam / (lam * lam - c),
    })
}
