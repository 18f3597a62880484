//! Covariance models for the spatial noise.
//!
//! Convention: `γ(x) = ∫ e^{iξ·x} μ(dξ)` with `μ(dξ) = m(ξ) dξ`. White noise
//! in d = 1 is `γ = δ₀` with `m ≡ 1/(2π)`. The Riesz kernel `κ|x|^{-α}`
//! pairs with `m(ξ) = c(d, α) |ξ|^{α−d}` where
//! `c(d, α) = κ π^{-d/2} 2^{-α} Γ((d−α)/2) / Γ(α/2)`.
//! Heat mollification `γ_ε = γ * p_ε` multiplies the density by
//! `e^{−ε|ξ|²/2}`. Two noises smoothed at scale `ε` have covariance `γ_{2ε}`.

use alloc::{boxed::Box, format, string::String, vec::Vec};
use core::{f64::consts::PI, fmt, str::FromStr};

use crate::error::{invalid, Error, Result};
use crate::greens::{heat_kernel, norm, Dimension, Point};
use crate::quad::{self, Tolerance};
use crate::special::{gamma, ln_gamma, sphere_area};

#[derive(Debug, Clone, PartialEq)]
pub enum CovarianceModel {
    WhiteNoise1D,
    Riesz {
        dim: Dimension,
        alpha: f64,
        kappa: f64,
    },
    Mollified {
        base: Box<CovarianceModel>,
        eps: f64,
    },
}

/// Outcome of Dalang's integral `∫ μ(dξ)/(1+|ξ|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dalang {
    Finite(f64),
    Infinite,
}

impl Dalang {
    pub fn is_finite(self) -> bool {
        matches!(self, Dalang::Finite(_))
    }
}

/// Classifies a radial power density `|ξ|^{α−d}`: the integral converges
/// iff `0 < α < 2`.
pub fn dalang_power_law(alpha: f64) -> Dalang {
    if alpha > 0.0 && alpha < 2.0 {
        Dalang::Finite(f64::NAN)
    } else {
        Dalang::Infinite
    }
}

impl CovarianceModel {
    pub fn white() -> Self {
        CovarianceModel::WhiteNoise1D
    }

    pub fn riesz(dim: Dimension, alpha: f64, kappa: f64) -> Result<Self> {
        let d = dim.get() as f64;
        if !(alpha > 0.0 && alpha < d) {
            return Err(Error::InvalidArgument(format!(
                "Riesz exponent must satisfy 0 < alpha < d, got alpha={alpha}, d={d}"
            )));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(invalid("kappa must be positive"));
        }
        Ok(CovarianceModel::Riesz { dim, alpha, kappa })
    }

    pub fn mollify(self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(invalid("eps must be positive"));
        }
        Ok(match self {
            CovarianceModel::Mollified { base, eps: e } => CovarianceModel::Mollified { base, eps: e + eps },
            m => CovarianceModel::Mollified {
                base: Box::new(m),
                eps,
            },
        })
    }

    /// Covariance of two noises each smoothed at scale `eps`.
    pub fn smoothed_pair(&self, eps: f64) -> Result<Self> {
        self.clone().mollify(2.0 * eps)
    }

    pub fn dim(&self) -> Dimension {
        match self {
            CovarianceModel::WhiteNoise1D => Dimension::ONE,
            CovarianceModel::Riesz { dim, .. } => *dim,
            CovarianceModel::Mollified { base, .. } => base.dim(),
        }
    }

    /// Homogeneity degree of the unmollified kernel.
    pub fn alpha(&self) -> f64 {
        match self {
            CovarianceModel::WhiteNoise1D => 1.0,
            CovarianceModel::Riesz { alpha, .. } => *alpha,
            CovarianceModel::Mollified { base, .. } => base.alpha(),
        }
    }

    pub fn kappa(&self) -> f64 {
        match self {
            CovarianceModel::WhiteNoise1D => 1.0,
            CovarianceModel::Riesz { kappa, .. } => *kappa,
            CovarianceModel::Mollified { base, .. } => base.kappa(),
        }
    }

    /// The model with any mollification removed.
    pub fn unmollified(&self) -> &CovarianceModel {
        match self {
            CovarianceModel::Mollified { base, .. } => base.unmollified(),
            m => m,
        }
    }

    /// Total mollification scale (0 for a raw model).
    pub fn eps(&self) -> f64 {
        match self {
            CovarianceModel::Mollified { base, eps } => eps + base.eps(),
            _ => 0.0,
        }
    }

    /// `γ(x)`. White noise is `0` off the origin; singular kernels reject the origin.
    pub fn gamma(&self, x: &Point) -> Result<f64> {
        let r = norm(self.dim(), x);
        match self {
            CovarianceModel::WhiteNoise1D => {
                if r == 0.0 {
                    Err(Error::OriginSingularity)
                } else {
                    Ok(0.0)
                }
            }
            CovarianceModel::Riesz { alpha, kappa, .. } => {
                if r == 0.0 {
                    Err(Error::OriginSingularity)
                } else {
                    Ok(kappa * libm::pow(r, -alpha))
                }
            }
            CovarianceModel::Mollified { base, eps } => base.gamma_mollified(*eps, x),
        }
    }

    /// Radial version of [`gamma`](Self::gamma).
    pub fn gamma_radial(&self, r: f64) -> Result<f64> {
        self.gamma(&[r, 0.0, 0.0])
    }

    /// `(γ * p_ε)(x)`.
    pub fn gamma_mollified(&self, eps: f64, x: &Point) -> Result<f64> {
        if !(eps > 0.0) {
            return Err(invalid("eps must be positive"));
        }
        let dim = self.dim();
        match self {
            CovarianceModel::WhiteNoise1D => Ok(heat_kernel(dim, eps, x)),
            CovarianceModel::Riesz { alpha, kappa, .. } => {
                Ok(kappa * riesz_heat_average(dim.get(), *alpha, eps, norm(dim, x)))
            }
            CovarianceModel::Mollified { base, eps: inner } => {
                if dim.get() != 1 {
                    return base.gamma_mollified(inner + eps, x);
                }
                // explicit convolution of γ_inner with p_eps
                let center = x[0];
                let width = 40.0 * libm::sqrt(eps);
                let mut failure = None;
                let v = quad::integrate(
                    |z| {
                        let g = match base.gamma_mollified(*inner, &[z, 0.0, 0.0]) {
                            Ok(g) => g,
                            Err(e) => {
                                failure = Some(e);
                                0.0
                            }
                        };
                        g * heat_kernel(dim, eps, &[center - z, 0.0, 0.0])
                    },
                    center - width,
                    center + width,
                    Tolerance::abs(1e-12),
                )?;
                match failure {
                    Some(e) => Err(e),
                    None => Ok(v.value),
                }
            }
        }
    }

    /// Spectral density at radial wavenumber `|ξ| = rho`.
    pub fn spectral_density(&self, rho: f64) -> f64 {
        match self {
            CovarianceModel::WhiteNoise1D => 1.0 / (2.0 * PI),
            CovarianceModel::Riesz { dim, alpha, kappa } => {
                kappa * riesz_spectral_constant(dim.get(), *alpha) * libm::pow(rho, alpha - dim.get() as f64)
            }
            CovarianceModel::Mollified { base, eps } => libm::exp(-eps * rho * rho / 2.0) * base.spectral_density(rho),
        }
    }

    /// `∫ μ(dξ)/(1+|ξ|²)`. Finiteness is decided from the tail exponent; the
    /// value is then computed by radial quadrature.
    pub fn dalang_integral(&self) -> Result<Dalang> {
        let raw = self.unmollified();
        if let CovarianceModel::Riesz { alpha, .. } = raw {
            if !dalang_power_law(*alpha).is_finite() && self.eps() == 0.0 {
                return Ok(Dalang::Infinite);
            }
        }
        let value = self.radial_spectral_integral(|rho| 1.0 / (1.0 + rho * rho), 1e-12)?;
        Ok(Dalang::Finite(value))
    }

    /// `∫ μ(dξ) h(|ξ|)` in radial form, for smooth `h` with `h(ρ) = O(ρ^{-2})`.
    pub fn radial_spectral_integral<H: Fn(f64) -> f64>(&self, h: H, abs_tol: f64) -> Result<f64> {
        let d = self.dim().get();
        let area = sphere_area(d);
        let alpha = self.alpha();
        let tol = Tolerance::abs(abs_tol);
        let radial = |rho: f64| area * libm::pow(rho, (d - 1) as f64) * self.spectral_density(rho) * h(rho);
        let head = match self.unmollified() {
            CovarianceModel::Riesz { .. } => {
                // ρ^{α−1} behaviour near 0: put ρ = v^{1/α}
                quad::integrate(
                    |v| {
                        if v <= 0.0 {
                            return 0.0;
                        }
                        let rho = libm::pow(v, 1.0 / alpha);
                        radial(rho) * rho / (alpha * v)
                    },
                    0.0,
                    1.0,
                    tol,
                )?
                .value
            }
            _ => quad::integrate(radial, 0.0, 1.0, tol)?.value,
        };
        let tail = quad::integrate_to_infinity(radial, 1.0, tol)?.value;
        Ok(head + tail)
    }

    /// `|γ(cx) − c^{−α} γ(x)|` for a Riesz model.
    pub fn homogeneity_residual(&self, c: f64, x: &Point) -> Result<f64> {
        match self {
            CovarianceModel::Riesz { alpha, .. } => {
                if !(c > 0.0) {
                    return Err(invalid("scale must be positive"));
                }
                let cx = [c * x[0], c * x[1], c * x[2]];
                Ok((self.gamma(&cx)? - libm::pow(c, -alpha) * self.gamma(x)?).abs())
            }
            _ => Err(Error::Unsupported(String::from("homogeneity residual needs a Riesz model"))),
        }
    }

    /// Inverse Fourier transform of the spectral density at `x` (d = 1 only).
    pub fn spectral_inverse_1d(&self, x: f64) -> Result<f64> {
        if self.dim().get() != 1 {
            return Err(Error::Unsupported(String::from("spectral inversion is implemented for d = 1")));
        }
        let x = x.abs();
        if x == 0.0 {
            return Err(Error::OriginSingularity);
        }
        let tol = Tolerance::abs(1e-12);
        let f = |xi: f64| 2.0 * libm::cos(xi * x) * self.spectral_density(xi);
        let first = match self.unmollified() {
            CovarianceModel::Riesz { alpha, .. } => {
                let a = *alpha;
                let top = libm::pow(PI / (2.0 * x), a);
                quad::integrate(
                    |v| {
                        if v <= 0.0 {
                            return 0.0;
                        }
                        let xi = libm::pow(v, 1.0 / a);
                        f(xi) * xi / (a * v)
                    },
                    0.0,
                    top,
                    tol,
                )?
                .value
            }
            _ => quad::integrate(f, 0.0, PI / (2.0 * x), tol)?.value,
        };
        let rest = quad::integrate_oscillatory(f, PI / (2.0 * x), PI / x, 60, tol)?.value;
        Ok(first + rest)
    }
}

/// `c(d, α)` with `κ = 1`.
pub fn riesz_spectral_constant(d: usize, alpha: f64) -> f64 {
    let df = d as f64;
    libm::pow(PI, -df / 2.0) * libm::pow(2.0, -alpha) * gamma((df - alpha) / 2.0) / gamma(alpha / 2.0)
}

/// `E|x + √ε Z|^{−α}` for `|x| = r`, `Z` standard Gaussian in `R^d`.
///
/// `|x + √ε Z|²/ε` is noncentral chi-square with `d` degrees of freedom and
/// noncentrality `λ = r²/ε`; expanding in its Poisson mixture gives
/// `(2ε)^{−α/2} Σ_j Pois(j; λ/2) Γ((d−α)/2 + j)/Γ(d/2 + j)`.
pub fn riesz_heat_average(d: usize, alpha: f64, eps: f64, r: f64) -> f64 {
    let half = r * r / (2.0 * eps);
    let df = d as f64;
    let lead = libm::pow(2.0 * eps, -alpha / 2.0);
    if half > 1e6 {
        // two-term expansion, relative error O((ε/r²)²)
        return libm::pow(r, -alpha) * (1.0 + alpha * (alpha + 2.0 - df) * eps / (2.0 * r * r));
    }
    let log_term = |j: f64| -> f64 {
        let pois = if half > 0.0 {
            -half + j * libm::log(half) - ln_gamma(j + 1.0)
        } else if j == 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        };
        pois + ln_gamma((df - alpha) / 2.0 + j) - ln_gamma(df / 2.0 + j)
    };
    let mode = libm::floor(half);
    let spread = libm::ceil(40.0 * libm::sqrt(half + 1.0)) + 40.0;
    let lo = (mode - spread).max(0.0) as u64;
    let hi = (mode + spread) as u64;
    let mut terms: Vec<f64> = (lo..=hi).map(|j| log_term(j as f64)).collect();
    let peak = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for t in terms.iter_mut() {
        *t = libm::exp(*t - peak);
    }
    lead * libm::exp(peak) * crate::mc::pairwise_sum(&terms)
}

impl fmt::Display for CovarianceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CovarianceModel::WhiteNoise1D => write!(f, "white1d"),
            CovarianceModel::Riesz { dim, alpha, kappa } => {
                write!(f, "riesz:d={},alpha={alpha},kappa={kappa}", dim.get())
            }
            CovarianceModel::Mollified { base, eps } => write!(f, "{base},eps={eps}"),
        }
    }
}

impl FromStr for CovarianceModel {
    type Err = Error;

    /// Grammar: `white1d[,eps=E]` or `riesz:d=D,alpha=A,kappa=K[,eps=E]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h.trim(), r.trim()),
            None => match s.split_once(',') {
                Some((h, r)) => (h.trim(), r.trim()),
                None => (s, ""),
            },
        };
        let mut d = None;
        let mut alpha = None;
        let mut kappa = None;
        let mut eps = None;
        for item in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{item}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number in '{item}'")))?;
            match k.trim() {
                "d" => d = Some(v),
                "alpha" => alpha = Some(v),
                "kappa" => kappa = Some(v),
                "eps" => eps = Some(v),
                other => return Err(Error::Parse(format!("unknown key '{other}'"))),
            }
        }
        let base = match head.to_ascii_lowercase().as_str() {
            "white1d" | "white" => {
                if d.is_some() || alpha.is_some() || kappa.is_some() {
                    return Err(Error::Parse(String::from("white1d takes only eps")));
                }
                CovarianceModel::WhiteNoise1D
            }
            "riesz" => {
                let d = d.ok_or_else(|| Error::Parse(String::from("riesz needs d")))?;
                if libm::trunc(d) != d {
                    return Err(Error::Parse(format!("d must be an integer, got {d}")));
                }
                let alpha = alpha.ok_or_else(|| Error::Parse(String::from("riesz needs alpha")))?;
                CovarianceModel::riesz(Dimension::new(d as usize)?, alpha, kappa.unwrap_or(1.0))?
            }
            other => return Err(Error::Parse(format!("unknown model '{other}'"))),
        };
        match eps {
            Some(e) => base.mollify(e),
            None => Ok(base),
        }
    }
}
