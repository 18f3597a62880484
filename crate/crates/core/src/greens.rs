//! Fundamental solution of the wave equation and its heat-kernel companion.
//!
//! `G(t, ·)` has total mass `t` in every dimension. In d = 1 it is the flat
//! density `½·1{|x| ≤ t}`, in d = 2 it is `(2π)^{-1}(t² − |x|²)^{-1/2}` inside
//! the cone, and in d = 3 it is the surface measure `σ_t/(4πt)` on the sphere of
//! radius `t`, which has no pointwise values. Points are stored as `[f64; 3]`;
//! coordinates beyond the dimension are ignored.

use core::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::quad::{self, GaussLegendre, Tolerance};

pub type Point = [f64; 3];

pub const ORIGIN: Point = [0.0; 3];

/// Spatial dimension, restricted to 1, 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension(u8);

impl Dimension {
    pub const ONE: Dimension = Dimension(1);
    pub const TWO: Dimension = Dimension(2);
    pub const THREE: Dimension = Dimension(3);

    pub fn new(d: usize) -> Result<Self> {
        match d {
            1..=3 => Ok(Dimension(d as u8)),
            _ => Err(Error::InvalidArgument(alloc::format!(
                "dimension must be 1, 2 or 3, got {d}"
            ))),
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }
}

/// Euclidean norm over the first `d` coordinates.
pub fn norm(dim: Dimension, x: &Point) -> f64 {
    libm::sqrt(x[..dim.get()].iter().map(|v| v * v).sum())
}

pub fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: &Point, b: &Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Pointwise value of `G(t, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GreenValue {
    Density(f64),
    /// d = 2 on the light cone `|x| = t`, where the density is infinite.
    LightCone,
}

impl GreenValue {
    /// The value as a float, `+∞` on the light cone.
    pub fn value(self) -> f64 {
        match self {
            GreenValue::Density(v) => v,
            GreenValue::LightCone => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreenKernel {
    pub dim: Dimension,
}

impl GreenKernel {
    pub fn new(dim: Dimension) -> Self {
        GreenKernel { dim }
    }

    pub fn eval(&self, t: f64, x: &Point) -> Result<GreenValue> {
        check_time(t)?;
        let r = norm(self.dim, x);
        match self.dim.get() {
            1 => Ok(GreenValue::Density(if r <= t { 0.5 } else { 0.0 })),
            2 => {
                if r > t {
                    Ok(GreenValue::Density(0.0))
                } else if r == t {
                    Ok(GreenValue::LightCone)
                } else {
                    Ok(GreenValue::Density(1.0 / (2.0 * PI * libm::sqrt(t * t - r * r))))
                }
            }
            _ => Err(Error::MeasureValued { dim: 3 }),
        }
    }

    /// Total mass of `G(t, ·)`.
    pub fn mass(&self, t: f64) -> f64 {
        t
    }

    /// A draw from the probability law `G(t, ·)/t`.
    pub fn sample<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> Point {
        match self.dim.get() {
            1 => [t * (2.0 * rng.random::<f64>() - 1.0), 0.0, 0.0],
            2 => {
                let u: f64 = rng.random();
                let r = t * libm::sqrt(u * (2.0 - u));
                let phi = 2.0 * PI * rng.random::<f64>();
                [r * libm::cos(phi), r * libm::sin(phi), 0.0]
            }
            _ => loop {
                let g: [f64; 3] = [
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                ];
                let n = libm::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
                if n > 0.0 {
                    break [t * g[0] / n, t * g[1] / n, t * g[2] / n];
                }
            },
        }
    }

    /// `∫ G(t, y) f(y) dy` by deterministic quadrature. Works in every
    /// dimension; in d = 2 the radial variable is `r = t sin u`, which removes
    /// the cone singularity.
    pub fn pair<F: FnMut(&Point) -> f64>(&self, t: f64, mut f: F) -> Result<f64> {
        check_time(t)?;
        let tol = Tolerance::abs(1e-12);
        match self.dim.get() {
            1 => {
                let v = quad::integrate(|y| 0.5 * f(&[y, 0.0, 0.0]), -t, t, tol)?;
                Ok(v.value)
            }
            2 => {
                let gl = GaussLegendre::new(48);
                let v = quad::integrate(
                    |u| {
                        let r = t * libm::sin(u);
                        // G r dr dφ = t sin u dφ du / (2π)
                        let ring = gl.integrate(
                            |phi| f(&[r * libm::cos(phi), r * libm::sin(phi), 0.0]),
                            0.0,
                            2.0 * PI,
                        );
                        t * libm::sin(u) * ring / (2.0 * PI)
                    },
                    0.0,
                    PI / 2.0,
                    tol,
                )?;
                Ok(v.value)
            }
            _ => {
                let gl = GaussLegendre::new(48);
                let mut acc = 0.0;
                for (c, wc) in gl.mapped(-1.0, 1.0) {
                    let s = libm::sqrt(1.0 - c * c);
                    for (phi, wp) in gl.mapped(0.0, 2.0 * PI) {
                        let y = [t * s * libm::cos(phi), t * s * libm::sin(phi), t * c];
                        acc += wc * wp * f(&y);
                    }
                }
                // surface element t² dΩ, density 1/(4πt)
                Ok(acc * t / (4.0 * PI))
            }
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(alloc::format!("time must be positive, got {t}")))
    }
}

/// Heat kernel `(2πt)^{-d/2} exp(−|x|²/2t)`.
pub fn heat_kernel(dim: Dimension, t: f64, x: &Point) -> f64 {
    let r2: f64 = x[..dim.get()].iter().map(|v| v * v).sum();
    libm::pow(2.0 * PI * t, -(dim.get() as f64) / 2.0) * libm::exp(-r2 / (2.0 * t))
}

/// Fourier symbol `sin(kt)/k` of `G(t, ·)`, with value `t` at `k = 0`.
pub fn green_fourier(t: f64, k: f64) -> f64 {
    if k * t < 1e-8 {
        // sin(kt)/k = t (1 − (kt)²/6 + ...)
        t * (1.0 - (k * t) * (k * t) / 6.0)
    } else {
        libm::sin(k * t) / k
    }
}

/// Both sides of a Laplace identity and their largest discrepancy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub exact: f64,
    pub residual: f64,
}

/// `∫₀^∞ e^{−λt} G(t, x) dt` against `½ ∫₀^∞ e^{−λ²t/2} p(t, x) dt`.
///
/// In d = 1 both integrals are computed by quadrature and compared with the
/// closed form `e^{−λ|x|}/(2λ)`. In d = 2, 3 the kernel is not a function, so
/// the check runs on the Fourier side with wavenumber `|x|`.
pub fn laplace_green_residual(dim: Dimension, lam: f64, x: &Point) -> Result<LaplaceCheck> {
    if !(lam > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!("lambda must be positive, got {lam}")));
    }
    if dim.get() != 1 {
        return laplace_fourier_residual(lam, norm(dim, x));
    }
    let r = x[0].abs();
    let tol = Tolerance::abs(1e-13);
    // e^{−λt} < 1e−16 past this horizon
    let horizon = r + 37.0 / lam;
    let lhs = quad::integrate(|t| 0.5 * libm::exp(-lam * t), r, horizon, tol)?.value;
    let heat_horizon = 74.0 / (lam * lam);
    let heat = |t: f64| {
        if t <= 0.0 {
            0.0
        } else {
            0.5 * libm::exp(-lam * lam * t / 2.0) * heat_kernel(dim, t, x)
        }
    };
    let rhs = if r == 0.0 {
        quad::integrate_sqrt_left(heat, 0.0, heat_horizon, tol)?.value
    } else {
        quad::integrate_with_breaks(heat, 0.0, heat_horizon, &[r * r / 2.0, 2.0 * r * r], tol)?.value
    };
    let exact = libm::exp(-lam * r) / (2.0 * lam);
    let residual = (lhs - exact).abs().max((rhs - exact).abs()).max((lhs - rhs).abs());
    Ok(LaplaceCheck { lhs, rhs, exact, residual })
}

/// `∫₀^∞ e^{−λt} sin(kt)/k dt` against `1/(λ² + k²)`.
pub fn laplace_fourier_residual(lam: f64, k: f64) -> Result<LaplaceCheck> {
    if !(lam > 0.0) || !(k >= 0.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "need lambda > 0 and k >= 0, got {lam}, {k}"
        )));
    }
    let horizon = 37.0 / lam;
    let periods = if k > 0.0 { libm::ceil(k * horizon / PI) as usize } else { 0 };
    let breaks: alloc::vec::Vec<f64> = (1..periods.min(4000)).map(|j| j as f64 * PI / k).collect();
    let lhs = quad::integrate_with_breaks(
        |t| libm::exp(-lam * t) * green_fourier(t, k),
        0.0,
        horizon,
        &breaks,
        Tolerance::abs(1e-14),
    )?
    .value;
    let exact = 1.0 / (lam * lam + k * k);
    Ok(LaplaceCheck {
        lhs,
        rhs: exact,
        exact,
        residual: (lhs - exact).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::stream;

    #[test]
    fn pointwise_values() {
        let g1 = GreenKernel::new(Dimension::ONE);
        assert_eq!(g1.eval(2.0, &[1.0, 0.0, 0.0]).unwrap().value(), 0.5);
        assert_eq!(g1.eval(1.0, &[2.0, 0.0, 0.0]).unwrap().value(), 0.0);
        let g2 = GreenKernel::new(Dimension::TWO);
        let v = g2.eval(1.0, &[0.6, 0.0, 0.0]).unwrap().value();
        assert!((v - 0.198_943_678_864_869_2).abs() < 1e-12);
        assert_eq!(g2.eval(5.0, &[3.0, 4.0, 0.0]).unwrap(), GreenValue::LightCone);
        let g3 = GreenKernel::new(Dimension::THREE);
        assert_eq!(g3.eval(1.0, &ORIGIN), Err(Error::MeasureValued { dim: 3 }));
        assert!(Dimension::new(4).is_err());
        assert!(g1.eval(0.0, &ORIGIN).is_err());
    }

    #[test]
    fn mass_by_pairing() {
        for d in 1..=3 {
            let g = GreenKernel::new(Dimension::new(d).unwrap());
            for t in [0.5, 1.0, 2.0] {
                let m = g.pair(t, |_| 1.0).unwrap();
                assert!((m - t).abs() < 1e-9, "d={d} t={t} m={m}");
                assert_eq!(g.mass(t), t);
            }
        }
    }

    #[test]
    fn sampler_laws() {
        let g3 = GreenKernel::new(Dimension::THREE);
        let mut rng = stream(1, 0);
        for _ in 0..100 {
            let y = g3.sample(1.5, &mut rng);
            assert!((norm(Dimension::THREE, &y) - 1.5).abs() < 1e-12);
        }
        let g2 = GreenKernel::new(Dimension::TWO);
        let n = 100_000;
        let inside = (0..n)
            .filter(|_| norm(Dimension::TWO, &g2.sample(1.0, &mut rng)) <= 0.5)
            .count() as f64
            / n as f64;
        let p = 1.0 - libm::sqrt(0.75);
        let se = libm::sqrt(p * (1.0 - p) / n as f64);
        assert!((inside - p).abs() < 4.0 * se);
    }

    #[test]
    fn heat_and_fourier() {
        let x0 = ORIGIN;
        assert!((heat_kernel(Dimension::ONE, 1.0, &x0) - 0.398_942_280_401_432_7).abs() < 1e-15);
        assert!((heat_kernel(Dimension::TWO, 1.0, &x0) - 0.159_154_943_091_895_3).abs() < 1e-15);
        assert_eq!(green_fourier(1.0, 0.0), 1.0);
        assert!(green_fourier(1.0, PI).abs() < 1e-15);
        assert!((green_fourier(2.0, 1.0) - 0.909_297_426_825_681_7).abs() < 1e-15);
    }

    #[test]
    fn laplace_identities() {
        for (lam, x) in [(1.0, 0.0), (2.0, 1.0), (1.0, 1.0), (2.0, 0.0)] {
            let c = laplace_green_residual(Dimension::ONE, lam, &[x, 0.0, 0.0]).unwrap();
            assert!(c.residual < 1e-8, "{lam} {x} {c:?}");
        }
        let c = laplace_green_residual(Dimension::ONE, 2.0, &[1.0, 0.0, 0.0]).unwrap();
        assert!((c.exact - 0.033_833_820_809_153_18).abs() < 1e-15);
        for (lam, k) in [(1.0, 1.0), (2.0, 1.0), (1.0, 2.0), (2.0, 2.0)] {
            let c = laplace_fourier_residual(lam, k).unwrap();
            assert!(c.residual < 1e-10, "{c:?}");
        }
    }
}
