//! Intermittency arithmetic: Mittag-Leffler sums, predicted exponents,
//! moment-series assembly and coefficient growth.
//!
//! Every exponent shares the factor `E(α, M) = (2√M/(4−α))^{(4−α)/(3−α)}`.

use alloc::vec::Vec;

use crate::chaos::ChaosCoefficient;
use crate::error::{invalid, Error, Result};
use crate::special::ln_factorial;

/// Terms this many log units below the running maximum end a sum.
pub const LOG_CUTOFF: f64 = 40.0;

/// Hard cap on summed terms.
pub const MAX_TERMS: u64 = 50_000_000;

/// `½ (3/4)^{1/4}`, the published white-noise long-time constant at `p = 1`.
pub fn published_white_noise_constant() -> f64 {
    0.5 * libm::pow(0.75, 0.25)
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// `log ∑_{n≥0} θⁿ bⁿ / (n!)^γ`.
pub fn mittag_leffler_log(theta: f64, gamma_exp: f64, b: f64) -> Result<f64> {
    if !(theta > 0.0 && gamma_exp > 0.0 && b > 0.0) {
        return Err(invalid("Mittag-Leffler parameters must be positive"));
    }
    let lx = libm::log(theta * b);
    let mut total = f64::NEG_INFINITY;
    let mut peak = f64::NEG_INFINITY;
    let mut prev = f64::NEG_INFINITY;
    for n in 0..MAX_TERMS {
        let term = n as f64 * lx - gamma_exp * ln_factorial(n);
        total = log_add(total, term);
        peak = peak.max(term);
        if term < prev && term < peak - LOG_CUTOFF {
            return Ok(total);
        }
        prev = term;
    }
    Err(Error::SizeGuard {
        n: MAX_TERMS as usize,
        limit: MAX_TERMS as usize,
    })
}

fn check_alpha_m(alpha: f64, m: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) || !(m > 0.0) {
        return Err(invalid("need 0 < alpha < 2 and M > 0"));
    }
    Ok(())
}

fn shared_factor(alpha: f64, m: f64) -> f64 {
    libm::pow(2.0 * libm::sqrt(m) / (4.0 - alpha), (4.0 - alpha) / (3.0 - alpha))
}

/// `lim t^{−(4−α)/(3−α)} log E u^p(t, x)`:
/// `((3−α)/2) p^{(4−α)/(3−α)} E(α, M)`.
pub fn predicted_long_time_exponent(p: u32, alpha: f64, m: f64) -> Result<f64> {
    check_alpha_m(alpha, m)?;
    if p == 0 {
        return Err(invalid("moment order must be at least 1"));
    }
    let q = (4.0 - alpha) / (3.0 - alpha);
    Ok(0.5 * (3.0 - alpha) * libm::pow(p as f64, q) * shared_factor(alpha, m))
}

/// `lim p^{−(4−α)/(3−α)} log E u^p(t, x)`:
/// `((3−α)/2) t^{(4−α)/(3−α)} E(α, M)`.
pub fn predicted_high_moment_exponent(t: f64, alpha: f64, m: f64) -> Result<f64> {
    check_alpha_m(alpha, m)?;
    if !(t > 0.0) {
        return Err(invalid("time must be positive"));
    }
    let q = (4.0 - alpha) / (3.0 - alpha);
    Ok(0.5 * (3.0 - alpha) * libm::pow(t, q) * shared_factor(alpha, m))
}

/// Skorohod long-time rate `((3−α)/2) p (p−1)^{1/(3−α)} E(α, M)`.
pub fn skorohod_exponent(p: u32, alpha: f64, m: f64) -> Result<f64> {
    check_alpha_m(alpha, m)?;
    if p < 2 {
        return Err(invalid("the Skorohod rate needs p >= 2"));
    }
    let p = p as f64;
    Ok(0.5 * (3.0 - alpha) * p * libm::pow(p - 1.0, 1.0 / (3.0 - alpha)) * shared_factor(alpha, m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPrediction {
    pub p: u32,
    pub alpha: f64,
    pub m: f64,
    pub long_time_rate: f64,
    /// High-moment rate at the time `t` it was built for.
    pub high_moment_rate: f64,
    /// `None` for `p = 1`.
    pub skorohod_rate: Option<f64>,
}

impl ExponentPrediction {
    pub fn new(p: u32, alpha: f64, m: f64, t: f64) -> Result<Self> {
        Ok(ExponentPrediction {
            p,
            alpha,
            m,
            long_time_rate: predicted_long_time_exponent(p, alpha, m)?,
            high_moment_rate: predicted_high_moment_exponent(t, alpha, m)?,
            skorohod_rate: if p >= 2 { Some(skorohod_exponent(p, alpha, m)?) } else { None },
        })
    }
}

/// The white-noise (`α = 1`, `p = 1`) long-time constant two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantComparison {
    pub published: f64,
    pub formula: f64,
    pub ratio: f64,
    /// Set when the two differ by more than 0.1%.
    pub discrepancy: bool,
}

pub fn white_noise_constant_comparison(m: f64) -> Result<ConstantComparison> {
    let published = published_white_noise_constant();
    let formula = predicted_long_time_exponent(1, 1.0, m)?;
    let ratio = published / formula;
    Ok(ConstantComparison {
        published,
        formula,
        ratio,
        discrepancy: (ratio - 1.0).abs() > 1e-3,
    })
}

/// Partial sum of `∑_n t^{(4−α)n} c_n` with a tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub log_value: f64,
    /// Tail `∑_{n>N}` of the fitted envelope `A Cⁿ t^{(4−α)n}/n!`.
    pub truncation_bound: f64,
    /// Fitted `log A` and `log C`.
    pub fit: (f64, f64),
}

/// Assembles the series from `log c_n`, `n = 0, …, N`. Zero coefficients
/// are passed as `−∞`.
pub fn assemble_log_series(log_coeffs: &[f64], t: f64, alpha: f64) -> Result<SeriesSum> {
    if log_coeffs.is_empty() {
        return Err(Error::Empty);
    }
    if !(t >= 0.0) || !(alpha > 0.0 && alpha < 4.0) {
        return Err(invalid("need t >= 0 and 0 < alpha < 4"));
    }
    if t == 0.0 {
        let value = libm::exp(log_coeffs[0]);
        return Ok(SeriesSum {
            value,
            log_value: log_coeffs[0],
            truncation_bound: 0.0,
            fit: (log_coeffs[0], f64::NEG_INFINITY),
        });
    }
    let lt = (4.0 - alpha) * libm::log(t);
    let log_value = log_coeffs
        .iter()
        .enumerate()
        .fold(f64::NEG_INFINITY, |acc, (n, lc)| log_add(acc, lc + n as f64 * lt));

    // least squares of log c_n + log n! against n
    let pts: Vec<(f64, f64)> = log_coeffs
        .iter()
        .enumerate()
        .filter(|(_, lc)| lc.is_finite())
        .map(|(n, lc)| (n as f64, lc + ln_factorial(n as u64)))
        .collect();
    let fit = match pts.len() {
        0 => (f64::NEG_INFINITY, 0.0),
        1 => (pts[0].1, 0.0),
        k => {
            let k = k as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
            (my - slope * mx, slope)
        }
    };
    let start = log_coeffs.len() as u64;
    let step = fit.1 + lt;
    let mut tail = f64::NEG_INFINITY;
    if fit.0.is_finite() {
        let mut peak = f64::NEG_INFINITY;
        let mut prev = f64::NEG_INFINITY;
        for n in start..start + MAX_TERMS {
            let term = fit.0 + n as f64 * step - ln_factorial(n);
            tail = log_add(tail, term);
            peak = peak.max(term);
            if term < prev && term < peak - LOG_CUTOFF {
                break;
            }
            prev = term;
        }
    }
    Ok(SeriesSum {
        value: libm::exp(log_value),
        log_value,
        truncation_bound: libm::exp(tail),
        fit,
    })
}

/// Series from computed coefficients for one `p`. The `n = 0` term is 1 and
/// is added when missing; every `n` from 1 to the largest must be present.
pub fn assemble_moment_series(coeffs: &[ChaosCoefficient], t: f64, alpha: f64) -> Result<SeriesSum> {
    if coeffs.is_empty() {
        return Err(Error::Empty);
    }
    let p = coeffs[0].p;
    if coeffs.iter().any(|c| c.p != p) {
        return Err(invalid("coefficients mix moment orders"));
    }
    let top = coeffs.iter().map(|c| c.n).max().unwrap_or(0);
    let mut logs = alloc::vec![f64::NAN; top + 1];
    logs[0] = 0.0;
    for c in coeffs {
        if c.value < 0.0 {
            return Err(invalid("moment-series coefficients are nonnegative"));
        }
        logs[c.n] = libm::log(c.value);
    }
    if logs.iter().any(|v| v.is_nan()) {
        return Err(invalid("coefficient list has gaps"));
    }
    assemble_log_series(&logs, t, alpha)
}

/// `(1/n) log((n!)^{3−α} c_{p,n})` for each coefficient, and its predicted
/// limit `log[(½)^{3−α} p^{4−α} (2√M/(4−α))^{4−α}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthDiagnostic {
    pub rows: Vec<(usize, f64)>,
    pub target: f64,
}

pub fn growth_target(p: u32, alpha: f64, m: f64) -> Result<f64> {
    check_alpha_m(alpha, m)?;
    let a = 4.0 - alpha;
    Ok((3.0 - alpha) * libm::log(0.5) + a * libm::log(p as f64) + a * libm::log(2.0 * libm::sqrt(m) / a))
}

pub fn coefficient_growth_diagnostic(coeffs: &[(usize, f64)], p: u32, alpha: f64, m: f64) -> Result<GrowthDiagnostic> {
    let target = growth_target(p, alpha, m)?;
    let rows = coeffs
        .iter()
        .filter(|(n, _)| *n > 0)
        .map(|&(n, c)| {
            if !(c > 0.0) {
                return Err(invalid("growth diagnostic needs positive coefficients"));
            }
            let v = ((3.0 - alpha) * ln_factorial(n as u64) + libm::log(c)) / n as f64;
            Ok((n, v))
        })
        .collect::<Result<_>>()?;
    Ok(GrowthDiagnostic { rows, target })
}

/// Feeds `c_n = Kⁿ/(n!)^{3−α}` through the assembly and reports
/// `t^{−(4−α)/(3−α)} log ∑` next to its limit `(3−α) K^{1/(3−α)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureCheck {
    pub rate: f64,
    pub limit: f64,
    pub terms: usize,
}

pub fn pipeline_closure(k: f64, alpha: f64, t: f64) -> Result<ClosureCheck> {
    if !(k > 0.0 && t > 0.0) || !(alpha > 0.0 && alpha < 2.0) {
        return Err(invalid("need K > 0, t > 0 and 0 < alpha < 2"));
    }
    let g = 3.0 - alpha;
    // the largest term sits near n ≈ (K t^{4−α})^{1/(3−α)}
    let peak = libm::pow(k * libm::pow(t, 4.0 - alpha), 1.0 / g);
    let terms = (4.0 * peak + 200.0) as usize;
    let logs: Vec<f64> = (0..terms)
        .map(|n| n as f64 * libm::log(k) - g * ln_factorial(n as u64))
        .collect();
    let s = assemble_log_series(&logs, t, alpha)?;
    Ok(ClosureCheck {
        rate: libm::pow(t, -(4.0 - alpha) / g) * s.log_value,
        limit: g * libm::pow(k, 1.0 / g),
        terms,
    })
}
