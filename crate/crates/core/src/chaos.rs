//! Chaos kernels `g_n` and the moments of their Stratonovich integrals.
//!
//! `g_n(x_1, …, x_n; t, x) = ∫_{0<s_1<⋯<s_n<t} ∏ G(s_k − s_{k−1}, x_k − x_{k−1}) ds`
//! with `s_0 = 0`, `x_0 = x`. In d = 1 this is the volume of a simplex,
//! `(t − Σ|x_k − x_{k−1}|)₊ⁿ / (2ⁿ n!)`. In d = 3 the kernel is a measure and
//! pointwise queries are refused.

use alloc::{format, string::String, vec, vec::Vec};
use core::f64::consts::PI;

use crate::covariance::{CovarianceModel, Dalang};
use crate::error::{invalid, Error, Result};
use crate::greens::{heat_kernel, norm, sub, Dimension, Point};
use crate::quad::{self, GaussLegendre, Tolerance};
use crate::special::factorial;
use crate::wick::{pair_partitions, PairPartition};

/// Order guard for nested simplex quadrature.
pub const MAX_KERNEL_ORDER: usize = 3;

/// A pointwise kernel query: dimension, order, horizon and base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaosKernelQuery {
    pub dim: Dimension,
    pub n: usize,
    pub t: f64,
    pub x0: Point,
}

impl ChaosKernelQuery {
    pub fn new(dim: Dimension, n: usize, t: f64) -> Self {
        ChaosKernelQuery {
            dim,
            n,
            t,
            x0: [0.0; 3],
        }
    }

    pub fn eval(&self, points: &[Point]) -> Result<f64> {
        g_n_eval(self, points)
    }
}

fn gaps(dim: Dimension, x0: &Point, points: &[Point]) -> Vec<f64> {
    let mut prev = *x0;
    points
        .iter()
        .map(|p| {
            let g = norm(dim, &sub(p, &prev));
            prev = *p;
            g
        })
        .collect()
}

/// `g_n` in d = 1 from its simplex-volume form.
pub fn g_n_closed_1d(n: usize, t: f64, x0: f64, points: &[f64]) -> f64 {
    let mut prev = x0;
    let mut spent = 0.0;
    for &p in points.iter().take(n) {
        spent += (p - prev).abs();
        prev = p;
    }
    let free = (t - spent).max(0.0);
    libm::pow(free, n as f64) / (libm::pow(2.0, n as f64) * factorial(n as u64))
}

/// `g_n` at the given points by nested quadrature over the time simplex.
pub fn g_n_eval(q: &ChaosKernelQuery, points: &[Point]) -> Result<f64> {
    if q.dim.get() == 3 {
        return Err(Error::MeasureValued { dim: 3 });
    }
    if points.len() != q.n || q.n == 0 {
        return Err(invalid("need exactly n >= 1 points"));
    }
    if q.n > MAX_KERNEL_ORDER {
        return Err(Error::SizeGuard {
            n: q.n,
            limit: MAX_KERNEL_ORDER,
        });
    }
    if !(q.t > 0.0) {
        return Err(invalid("horizon must be positive"));
    }
    let delta = gaps(q.dim, &q.x0, points);
    // latest admissible s_k leaves room for the remaining light-cone gaps
    let mut upper = vec![q.t; q.n];
    for k in (0..q.n - 1).rev() {
        upper[k] = upper[k + 1] - delta[k + 1];
    }
    if q.dim.get() == 1 {
        if q.n == 1 {
            return Ok(g_n_closed_1d(1, q.t, q.x0[0], &[points[0][0]]));
        }
        let gl = GaussLegendre::new(32);
        Ok(nested_1d(&gl, &delta, &upper, 0, 0.0))
    } else {
        nested_2d(&delta, &upper, 0, 0.0)
    }
}

// ∫_{s+Δ_k}^{U_k} ½ · inner(s') ds'; the integrand is a polynomial on that range
fn nested_1d(gl: &GaussLegendre, delta: &[f64], upper: &[f64], k: usize, s: f64) -> f64 {
    let lo = s + delta[k];
    let hi = upper[k];
    if hi <= lo {
        return 0.0;
    }
    if k + 1 == delta.len() {
        return 0.5 * (hi - lo);
    }
    0.5 * gl.integrate(|sp| nested_1d(gl, delta, upper, k + 1, sp), lo, hi)
}

// s' − s = Δ cosh w turns G ds' into dw/(2π)
fn nested_2d(delta: &[f64], upper: &[f64], k: usize, s: f64) -> Result<f64> {
    let room = upper[k] - s;
    if room <= delta[k] {
        return Ok(0.0);
    }
    if delta[k] == 0.0 {
        return Ok(f64::INFINITY);
    }
    let w_max = libm::acosh(room / delta[k]);
    if k + 1 == delta.len() {
        return Ok(w_max / (2.0 * PI));
    }
    let mut failure = None;
    let v = quad::integrate(
        |w| match nested_2d(delta, upper, k + 1, s + delta[k] * libm::cosh(w)) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        },
        0.0,
        w_max,
        Tolerance::abs(1e-11),
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(v.value / (2.0 * PI)),
    }
}

/// Both sides of the kernel Laplace identity
/// `∫₀^∞ e^{−λt} g_n dt = (λ/2)(½)ⁿ ∫₀^∞ e^{−λ²t/2} ∫_{simplex} ∏ p(s_k − s_{k−1}, x_k − x_{k−1}) ds dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelLaplaceCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// The right side factorizes into `(1/λ)(½)ⁿ ∏_k L_k` with
/// `L_k = ∫₀^∞ e^{−λ²s/2} p(s, Δ_k) ds`; each `L_k` and the left side are
/// computed by quadrature.
pub fn laplace_gn_residual(dim: Dimension, lam: f64, x0: &Point, points: &[Point]) -> Result<KernelLaplaceCheck> {
    let n = points.len();
    if n == 0 || n > 2 {
        return Err(invalid("Laplace kernel check supports n = 1, 2"));
    }
    if dim.get() == 3 {
        return Err(Error::MeasureValued { dim: 3 });
    }
    if !(lam > 0.0) {
        return Err(invalid("lambda must be positive"));
    }
    let delta = gaps(dim, x0, points);
    if delta.contains(&0.0) && dim.get() == 2 {
        return Err(invalid("coincident points make the d = 2 kernel infinite"));
    }
    let onset: f64 = delta.iter().sum();
    let q = ChaosKernelQuery {
        dim,
        n,
        t: 1.0,
        x0: *x0,
    };
    let tol = Tolerance::abs(1e-11);
    let mut failure = None;
    let mut g_at = |t: f64| {
        if t <= onset {
            return 0.0;
        }
        match g_n_eval(&ChaosKernelQuery { t, ..q }, points) {
            Ok(v) => libm::exp(-lam * t) * v,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };
    let horizon = onset + 45.0 / lam;
    let lhs = if dim.get() == 1 {
        quad::integrate(&mut g_at, onset, horizon, tol)?.value
    } else {
        // g_n has a logarithmic-type onset; push nodes toward it
        quad::integrate_sqrt_left(&mut g_at, onset, horizon, tol)?.value
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let beta = lam * lam / 2.0;
    let mut rhs = libm::pow(0.5, n as f64) / lam;
    for &d in &delta {
        let x = [d, 0.0, 0.0];
        let heat = |s: f64| if s <= 0.0 { 0.0 } else { libm::exp(-beta * s) * heat_kernel(dim, s, &x) };
        let top = 80.0 / beta + 2.0 * d * d;
        let l = if d == 0.0 {
            quad::integrate_sqrt_left(heat, 0.0, top, tol)?.value
        } else {
            quad::integrate_with_breaks(heat, 0.0, top, &[d * d / 4.0, d * d, 4.0 * d * d], tol)?.value
        };
        rhs *= l;
    }
    Ok(KernelLaplaceCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// `J(a) = ∫ μ(dξ) (1 − cos(|ξ| a)) / |ξ|²`.
pub fn spectral_j(model: &CovarianceModel, a: f64) -> Result<f64> {
    if a <= 0.0 {
        return Ok(0.0);
    }
    let d = model.dim().get();
    let area = crate::special::sphere_area(d);
    let alpha = model.alpha();
    // φ(ρ) = |S^{d−1}| ρ^{d−1} m(ρ); u = ρa gives J = a ∫ φ(u/a) (1 − cos u)/u² du
    let phi = |rho: f64| area * libm::pow(rho, (d - 1) as f64) * model.spectral_density(rho);
    let tol = Tolerance::abs(1e-13);
    let split = 1.5 * PI;
    let full = |u: f64| {
        let s = libm::sin(u / 2.0);
        phi(u / a) * 2.0 * s * s / (u * u)
    };
    let singular = matches!(model.unmollified(), CovarianceModel::Riesz { .. }) && alpha < 1.0;
    let head = if singular {
        // φ ~ u^{α−1}: put u = v^{1/α}
        let top = libm::pow(split, alpha);
        quad::integrate(
            |v| {
                if v <= 0.0 {
                    return 0.0;
                }
                let u = libm::pow(v, 1.0 / alpha);
                full(u) * u / (alpha * v)
            },
            0.0,
            top,
            tol,
        )?
        .value
    } else {
        quad::integrate(|u| if u <= 0.0 { phi(0.0) * 0.5 } else { full(u) }, 0.0, split, tol)?.value
    };
    let smooth = quad::integrate_to_infinity(|u| phi(u / a) / (u * u), split, tol)?.value;
    let wave = quad::integrate_oscillatory(|u| phi(u / a) * libm::cos(u) / (u * u), split, PI, 40, tol)?.value;
    Ok(a * (head + smooth - wave))
}

/// `E S_2(g_2(·, t, 0)) = ∫₀^t s J(t − s) ds`, the first nontrivial term of
/// the mean.
pub fn mean_chaos2(model: &CovarianceModel, t: f64) -> Result<f64> {
    if let Dalang::Infinite = model.dalang_integral()? {
        return Err(Error::DalangDivergent);
    }
    if t < 0.0 {
        return Err(invalid("horizon must be nonnegative"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let mut failure = None;
    let v = quad::integrate(
        |s| match spectral_j(model, t - s) {
            Ok(j) => s * j,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        },
        0.0,
        t,
        Tolerance {
            abs: 1e-11 * t * t * t,
            rel: 1e-11,
            max_intervals: 2000,
        },
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(v.value),
    }
}

/// `E S_1(g_1(·,t₁,0)) S_1(g_1(·,t₂,0)) = ∫ μ(dξ) (1 − cos|ξ|t₁)(1 − cos|ξ|t₂)/|ξ|⁴`,
/// using `ĝ_1(ξ, t) = (1 − cos|ξ|t)/|ξ|²`. Valid in every dimension.
pub fn strat_cov1_spectral(model: &CovarianceModel, t1: f64, t2: f64) -> Result<f64> {
    if t1 <= 0.0 || t2 <= 0.0 {
        return Ok(0.0);
    }
    if let Dalang::Infinite = model.dalang_integral()? {
        return Err(Error::DalangDivergent);
    }
    let tmax = t1.max(t2);
    let h = |rho: f64| {
        if rho * tmax < 1e-4 {
            // (1 − cos a)/ρ² ≈ a²/2 for small ρ
            return t1 * t1 * t2 * t2 / 4.0;
        }
        let a = libm::sin(rho * t1 / 2.0);
        let b = libm::sin(rho * t2 / 2.0);
        4.0 * a * a * b * b / libm::pow(rho, 4.0)
    };
    model.radial_spectral_integral(h, 1e-12)
}

/// Default first rung and length of the mollification ladder.
pub const DEFAULT_EPS0: f64 = 0.1;
pub const LADDER_RUNGS: usize = 3;

/// Values on a geometric ε-ladder and their Richardson limit.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderResult {
    pub eps: Vec<f64>,
    pub values: Vec<f64>,
    pub extrapolated: f64,
    /// Distance between the final estimate and the one-step estimate on the
    /// two finest rungs.
    pub error: f64,
}

/// Repeated Richardson extrapolation on rungs `ε, ε/2, ε/4, …`. Step `j`
/// removes a bias term `ε^{exponents[j]}`; with `exponents = [1]` the
/// estimate is `2 F(ε/2) − F(ε)`.
pub fn richardson_ladder(eps: Vec<f64>, values: Vec<f64>, exponents: &[f64]) -> LadderResult {
    let mut table = values.clone();
    let mut one_step = values[values.len() - 1];
    for (j, &p) in exponents.iter().enumerate() {
        if table.len() < 2 {
            break;
        }
        let f = libm::pow(2.0, p);
        table = table.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
        if j == 0 {
            one_step = table[table.len() - 1];
        }
    }
    let extrapolated = table[table.len() - 1];
    let error = if exponents.len() > 1 && values.len() > 2 {
        (extrapolated - one_step).abs()
    } else {
        (extrapolated - values[values.len() - 1]).abs()
    };
    LadderResult {
        eps,
        values,
        extrapolated,
        error,
    }
}

// K(z) = ∫ g_1(x, t₁) g_1(x − z, t₂) dx, piecewise polynomial in x
fn tent_correlation(gl: &GaussLegendre, t1: f64, t2: f64, z: f64) -> f64 {
    let lo = (-t1).max(z - t2);
    let hi = t1.min(z + t2);
    if hi <= lo {
        return 0.0;
    }
    let mut cuts = vec![lo, hi];
    for c in [0.0, z] {
        if c > lo && c < hi {
            cuts.push(c);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .map(|w| gl.integrate(|x| 0.25 * (t1 - x.abs()) * (t2 - (x - z).abs()), w[0], w[1]))
        .sum()
}

/// `E S_1 S_1` with the noise pair smoothed at scale ε (covariance `γ_{2ε}`),
/// on the ladder `eps0, eps0/2, eps0/4`. d = 1 only.
///
/// The autocorrelation of two tents is `C²` with a `|z|³` kink at the origin,
/// so the bias is `a ε + b ε^{(4−α)/2} + …`; both terms are extrapolated away.
pub fn strat_cov1_ladder(model: &CovarianceModel, t1: f64, t2: f64, eps0: f64) -> Result<LadderResult> {
    if model.dim().get() != 1 {
        return Err(Error::Unsupported(String::from("the ε-ladder covariance is implemented for d = 1")));
    }
    if !(eps0 > 0.0) {
        return Err(invalid("eps0 must be positive"));
    }
    let gl = GaussLegendre::new(8);
    let reach = t1 + t2;
    let mut eps = Vec::with_capacity(LADDER_RUNGS);
    let mut values = Vec::with_capacity(LADDER_RUNGS);
    for r in 0..LADDER_RUNGS {
        let e = eps0 / libm::pow(2.0, r as f64);
        let pair = model.smoothed_pair(e)?;
        let mut failure = None;
        let mut integrand = |z: f64| {
            let k = tent_correlation(&gl, t1, t2, z) + tent_correlation(&gl, t1, t2, -z);
            match pair.gamma(&[z, 0.0, 0.0]) {
                Ok(g) => k * g,
                Err(err) => {
                    failure = Some(err);
                    0.0
                }
            }
        };
        let v = quad::integrate_with_breaks(
            &mut integrand,
            0.0,
            reach,
            &[(t1 - t2).abs(), t1.min(t2), t1.max(t2)],
            Tolerance::abs(1e-11),
        )?;
        if let Some(err) = failure {
            return Err(err);
        }
        eps.push(e);
        values.push(v.value);
    }
    let alpha = model.alpha();
    Ok(richardson_ladder(eps, values, &[1.0, (4.0 - alpha) / 2.0]))
}

fn g2_white(x1: f64, x2: f64, t: f64) -> f64 {
    let r = (t - x1.abs() - (x2 - x1).abs()).max(0.0);
    r * r / 8.0
}

/// Per-partition terms `F^D(t₁, t₂)` of `E S_n(g_n(·,t₁,0)) S_n(g_n(·,t₂,0))` for
/// white noise. Points `0..n` belong to the first kernel, `n..2n` to the second.
pub fn strat_cov_white_terms(n: usize, t1: f64, t2: f64) -> Result<Vec<(PairPartition, f64)>> {
    if n == 0 || n > 2 {
        return Err(Error::Unsupported(format!("white-noise covariance of order {n}")));
    }
    let parts: Vec<PairPartition> = pair_partitions(n)?.collect();
    if t1 <= 0.0 || t2 <= 0.0 {
        return Ok(parts.into_iter().map(|p| (p, 0.0)).collect());
    }
    if n == 1 {
        let gl = GaussLegendre::new(8);
        return Ok(parts.into_iter().map(|p| (p, tent_correlation(&gl, t1, t2, 0.0))).collect());
    }
    let gl = GaussLegendre::new(8);
    let mean1 = t1 * t1 * t1 / 12.0;
    let mean2 = t2 * t2 * t2 / 12.0;
    let tol = Tolerance::abs(1e-13);
    let outer_breaks = {
        let mut b = Vec::new();
        for t in [t1, t2] {
            for c in [t, t / 2.0] {
                b.push(c);
                b.push(-c);
            }
        }
        b.push(0.0);
        b.push((t1 - t2) / 2.0);
        b.push((t2 - t1) / 2.0);
        b
    };
    let reach = t1.min(t2);
    // ∫ g_2(x, y, t₁) g_2(x, y, t₂) dy: kinks at y = x and y = x ± (t − |x|)
    let aligned = |x: f64| -> f64 {
        let mut cuts = vec![x];
        for t in [t1, t2] {
            let room = t - x.abs();
            if room > 0.0 {
                cuts.push(x - room);
                cuts.push(x + room);
            }
        }
        piecewise(&gl, cuts, |y| g2_white(x, y, t1) * g2_white(x, y, t2))
    };
    // ∫ g_2(x, y, t₁) g_2(y, x, t₂) dy: extra kinks at y = 0 and y = (x ± t₂)/2
    let crossed = |x: f64| -> f64 {
        let mut cuts = vec![x, 0.0, (x - t2) / 2.0, (x + t2) / 2.0];
        let room = t1 - x.abs();
        if room > 0.0 {
            cuts.push(x - room);
            cuts.push(x + room);
        }
        piecewise(&gl, cuts, |y| g2_white(x, y, t1) * g2_white(y, x, t2))
    };
    let d2 = quad::integrate_with_breaks(aligned, -reach, reach, &outer_breaks, tol)?.value;
    let d3 = quad::integrate_with_breaks(crossed, -t1, t1, &outer_breaks, tol)?.value;
    let values = [mean1 * mean2, d2, d3];
    Ok(parts.into_iter().zip(values).collect())
}

fn piecewise<F: Fn(f64) -> f64>(gl: &GaussLegendre, mut cuts: Vec<f64>, f: F) -> f64 {
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2).map(|w| gl.integrate(&f, w[0], w[1])).sum()
}

/// `E S_n(g_n(·,t₁,0)) S_n(g_n(·,t₂,0))` for n ≤ 2 in d = 1. White noise uses
/// exact δ-contractions; Riesz models (n = 1) use the ε-ladder.
pub fn strat_cov(model: &CovarianceModel, n: usize, t1: f64, t2: f64) -> Result<f64> {
    if t1 <= 0.0 || t2 <= 0.0 {
        return Ok(0.0);
    }
    match (model, n) {
        (CovarianceModel::WhiteNoise1D, _) => Ok(strat_cov_white_terms(n, t1, t2)?.iter().map(|(_, v)| v).sum()),
        (CovarianceModel::Riesz { .. }, 1) => Ok(strat_cov1_ladder(model, t1, t2, DEFAULT_EPS0)?.extrapolated),
        _ => Err(Error::Unsupported(format!(
            "strat_cov for {model} at order {n}; only white noise supports n = 2"
        ))),
    }
}

/// How a chaos coefficient was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientMethod {
    Quadrature,
    IltMc,
}

impl CoefficientMethod {
    pub fn name(self) -> &'static str {
        match self {
            CoefficientMethod::Quadrature => "quadrature",
            CoefficientMethod::IltMc => "ilt_mc",
        }
    }
}

/// Coefficient of `t^{(4−α)n}` in `E u(t, 0)^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosCoefficient {
    pub p: usize,
    pub n: usize,
    pub value: f64,
    pub method: CoefficientMethod,
    /// Standard error (Monte Carlo) or error estimate (quadrature).
    pub error: f64,
}

/// `Σ_{l_1+⋯+l_p = 2n} E ∏ S_{l_j}(g_{l_j}(·, t, 0))` for n ≤ 1. For n = 1
/// the compositions are a single 2 (p ways) or two 1s (p(p−1)/2 ways).
pub fn chaos_moment_sum(model: &CovarianceModel, p: usize, n: usize, t: f64) -> Result<f64> {
    if p == 0 {
        return Err(invalid("moment order must be at least 1"));
    }
    match n {
        0 => Ok(1.0),
        1 => {
            let mean = mean_chaos2(model, t)?;
            let pairs = (p * (p - 1) / 2) as f64;
            let cross = if pairs > 0.0 { strat_cov(model, 1, t, t)? } else { 0.0 };
            Ok(p as f64 * mean + pairs * cross)
        }
        _ => Err(Error::Unsupported(format!("quadrature coefficients for n = {n}"))),
    }
}

/// [`chaos_moment_sum`] at `t = 1`.
pub fn chaos_coefficient(model: &CovarianceModel, p: usize, n: usize) -> Result<ChaosCoefficient> {
    let value = chaos_moment_sum(model, p, n, 1.0)?;
    Ok(ChaosCoefficient {
        p,
        n,
        value,
        method: CoefficientMethod::Quadrature,
        error: 1e-9 * value.abs().max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const D1: Dimension = Dimension::ONE;
    const D2: Dimension = Dimension::TWO;

    fn p1(x: f64) -> Point {
        [x, 0.0, 0.0]
    }

    #[test]
    fn kernel_values_d1() {
        let q = ChaosKernelQuery::new(D1, 1, 1.0);
        assert_eq!(q.eval(&[p1(0.5)]).unwrap(), 0.25);
        assert_eq!(q.eval(&[p1(2.0)]).unwrap(), 0.0);
        for (pts, t) in [(vec![0.2, 0.3], 1.0), (vec![-0.4, 0.1], 2.0), (vec![0.1, -0.2, 0.3], 1.5)] {
            let q = ChaosKernelQuery::new(D1, pts.len(), t);
            let ps: Vec<Point> = pts.iter().map(|&x| p1(x)).collect();
            let v = q.eval(&ps).unwrap();
            let exact = g_n_closed_1d(pts.len(), t, 0.0, &pts);
            assert!((v - exact).abs() < 1e-13, "{v} {exact}");
        }
        let q = ChaosKernelQuery::new(Dimension::THREE, 1, 1.0);
        assert_eq!(q.eval(&[[0.0; 3]]), Err(Error::MeasureValued { dim: 3 }));
    }

    #[test]
    fn kernel_values_d2() {
        // n = 1: ∫_{|y|}^t ds / (2π √(s² − |y|²)) = arccosh(t/|y|)/(2π)
        let q = ChaosKernelQuery::new(D2, 1, 2.0);
        let v = q.eval(&[[0.3, 0.4, 0.0]]).unwrap();
        assert!((v - libm::acosh(4.0) / (2.0 * PI)).abs() < 1e-14);
        assert_eq!(q.eval(&[[0.0; 3]]).unwrap(), f64::INFINITY);
        let q2 = ChaosKernelQuery::new(D2, 2, 1.0);
        let a = q2.eval(&[[0.2, 0.0, 0.0], [0.2, 0.3, 0.0]]).unwrap();
        let q2b = ChaosKernelQuery::new(D2, 2, 1.5);
        let b = q2b.eval(&[[0.2, 0.0, 0.0], [0.2, 0.3, 0.0]]).unwrap();
        assert!(a > 0.0 && b > a);
    }

    #[test]
    fn kernel_laplace() {
        let c = laplace_gn_residual(D1, 1.0, &[0.0; 3], &[p1(0.5)]).unwrap();
        assert!((c.lhs - libm::exp(-0.5) / 2.0).abs() < 1e-9);
        assert!(c.residual < 1e-6);
        assert!(laplace_gn_residual(D1, 2.0, &[0.0; 3], &[p1(0.0)]).unwrap().residual < 1e-6);
        assert!(laplace_gn_residual(D1, 1.0, &[0.0; 3], &[p1(0.2), p1(0.5)]).unwrap().residual < 1e-5);
        let c = laplace_gn_residual(D2, 1.0, &[0.0; 3], &[[0.3, 0.1, 0.0], [0.5, -0.2, 0.0]]).unwrap();
        assert!(c.residual < 1e-5 * c.rhs.max(1.0), "{c:?}");
    }

    #[test]
    fn spectral_j_closed_forms() {
        let w = CovarianceModel::white();
        for a in [0.3, 1.0, 2.5] {
            assert!((spectral_j(&w, a).unwrap() - a / 2.0).abs() < 1e-9);
        }
        // Riesz: c|S|∫ρ^{α−3}(1 − cos ρa) = c|S| a^{2−α} (−Γ(α−2) cos(π(α−2)/2))
        for (d, alpha) in [(1, 0.5), (2, 1.0), (3, 1.5)] {
            let m = CovarianceModel::riesz(Dimension::new(d).unwrap(), alpha, 1.0).unwrap();
            let k = if alpha == 1.0 {
                PI / 2.0
            } else {
                -libm::tgamma(alpha - 2.0) * libm::cos(PI * (alpha - 2.0) / 2.0)
            };
            let c = crate::covariance::riesz_spectral_constant(d, alpha) * crate::special::sphere_area(d);
            let exact = c * k * libm::pow(0.7, 2.0 - alpha);
            let v = spectral_j(&m, 0.7).unwrap();
            assert!((v - exact).abs() < 1e-8 * exact, "{d} {alpha}: {v} vs {exact}");
        }
    }

    #[test]
    fn mean_second_chaos() {
        let w = CovarianceModel::white();
        for t in [0.5, 1.0, 2.0] {
            assert!((mean_chaos2(&w, t).unwrap() - t * t * t / 12.0).abs() < 1e-9);
        }
        assert_eq!(mean_chaos2(&w, 0.0).unwrap(), 0.0);
        let small = mean_chaos2(&w, 1e-2).unwrap();
        assert!((small / 1e-6 - 1.0 / 12.0).abs() < 1e-6);
        let r = CovarianceModel::riesz(D1, 0.5, 1.0).unwrap();
        let ratio = mean_chaos2(&r, 2.0).unwrap() / mean_chaos2(&r, 1.0).unwrap();
        assert!((ratio - libm::pow(2.0, 3.5)).abs() < 1e-7);
    }

    #[test]
    fn white_covariances() {
        let w = CovarianceModel::white();
        assert!((strat_cov(&w, 1, 1.0, 1.0).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        // ∫(1−|y|)₊(2−|y|)/4 dy = 5/12
        assert!((strat_cov(&w, 1, 1.0, 2.0).unwrap() - 5.0 / 12.0).abs() < 1e-14);
        assert_eq!(strat_cov(&w, 1, 0.0, 1.0).unwrap(), 0.0);
        let spectral = strat_cov1_spectral(&w, 1.0, 2.0).unwrap();
        assert!((spectral - 5.0 / 12.0).abs() < 1e-9);
        let terms = strat_cov_white_terms(2, 1.0, 1.0).unwrap();
        assert!(terms.iter().all(|(_, v)| *v >= 0.0));
        let s1 = strat_cov(&w, 2, 1.0, 1.0).unwrap();
        let s2 = strat_cov(&w, 2, 1.7, 1.7).unwrap();
        assert!((s2 / s1 - libm::pow(1.7, 6.0)).abs() < 1e-8 * libm::pow(1.7, 6.0));
    }

    #[test]
    fn ladder_matches_exact() {
        let w = CovarianceModel::white();
        let l = strat_cov1_ladder(&w, 1.0, 1.0, DEFAULT_EPS0).unwrap();
        assert!((l.extrapolated - 1.0 / 6.0).abs() < 0.01 / 6.0, "{l:?}");
        let r = CovarianceModel::riesz(D1, 0.5, 1.0).unwrap();
        let ladder = strat_cov(&r, 1, 1.0, 1.0).unwrap();
        let spectral = strat_cov1_spectral(&r, 1.0, 1.0).unwrap();
        assert!((ladder / spectral - 1.0).abs() < 0.01, "{ladder} {spectral}");
        assert!(matches!(strat_cov(&r, 2, 1.0, 1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn coefficients() {
        let w = CovarianceModel::white();
        assert!((chaos_coefficient(&w, 1, 1).unwrap().value - 1.0 / 12.0).abs() < 1e-9);
        assert!((chaos_coefficient(&w, 2, 1).unwrap().value - 1.0 / 3.0).abs() < 1e-9);
        let ratio = chaos_moment_sum(&w, 2, 1, 2.0).unwrap() / chaos_moment_sum(&w, 2, 1, 1.0).unwrap();
        assert!((ratio - 8.0).abs() < 8e-4);
    }
}
