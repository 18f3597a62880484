//! One-dimensional quadrature: fixed Gauss–Legendre rules and a globally
//! adaptive Gauss–Kronrod (7/15) integrator.
//!
//! Singular endpoints are handled by the callers through changes of variable;
//! the adaptive scheme itself assumes an integrand that is smooth on each
//! subinterval after enough bisection.

use alloc::{collections::BinaryHeap, vec::Vec};
use core::cmp::Ordering;

use crate::error::{Error, Result};

/// Result of a quadrature: value and an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-10,
            rel: 1e-12,
            max_intervals: 4000,
        }
    }
}

impl Tolerance {
    pub fn abs(abs: f64) -> Self {
        Tolerance {
            abs,
            ..Default::default()
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Integral {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Integral {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

struct Segment {
    a: f64,
    b: f64,
    est: Integral,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    if a > b {
        let r = integrate(f, b, a, tol)?;
        return Ok(Integral {
            value: -r.value,
            error: r.error,
        });
    }
    let first = gk15(&mut f, a, b);
    let mut total = first;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, est: first });
    while total.error > tol.abs.max(tol.rel * total.value.abs()) {
        if heap.len() >= tol.max_intervals {
            return Err(Error::Quadrature {
                estimate: total.value,
                error: total.error,
            });
        }
        let seg = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval collapsed to machine resolution
            heap.push(seg);
            break;
        }
        let left = gk15(&mut f, seg.a, mid);
        let right = gk15(&mut f, mid, seg.b);
        total.value += left.value + right.value - seg.est.value;
        total.error += left.error + right.error - seg.est.error;
        heap.push(Segment { a: seg.a, b: mid, est: left });
        heap.push(Segment { a: mid, b: seg.b, est: right });
    }
    // re-sum to shed accumulated cancellation
    let mut value = 0.0;
    let mut error = 0.0;
    for s in heap.iter() {
        value += s.est.value;
        error += s.est.error;
    }
    Ok(Integral { value, error })
}

/// Integrate over `[a, b]` split at the given interior breakpoints.
/// Breakpoints outside `(a, b)` are ignored; the tolerance is shared evenly.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<Integral> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (1.0 + x.abs()));
    let pieces = (pts.len() - 1).max(1) as f64;
    let sub = Tolerance {
        abs: tol.abs / pieces,
        ..tol
    };
    let mut out = Integral { value: 0.0, error: 0.0 };
    for w in pts.windows(2) {
        let r = integrate(&mut f, w[0], w[1], sub)?;
        out.value += r.value;
        out.error += r.error;
    }
    Ok(out)
}

/// `∫_a^∞ f`, for integrands with at least power-law decay `x^{-1-δ}`.
/// Uses `x = a + s/(1-s)` on `[0, 1)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, tol: Tolerance) -> Result<Integral> {
    integrate(
        |s| {
            if s >= 1.0 {
                return 0.0;
            }
            let one_minus = 1.0 - s;
            let v = f(a + s / one_minus) / (one_minus * one_minus);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// `∫_a^b f(x) dx` where `f` may carry an integrable `(x-a)^{-1/2}` type
/// singularity at `a`; substitutes `x = a + u²`.
pub fn integrate_sqrt_left<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    let top = libm::sqrt(b - a);
    integrate(|u| 2.0 * u * f(a + u * u), 0.0, top, tol)
}

/// `∫_a^∞ f` for an oscillating integrand whose sign changes every
/// `half_period`. Panel integrals are summed and the partial sums are
/// extrapolated with Wynn's epsilon algorithm.
pub fn integrate_oscillatory<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    half_period: f64,
    panels: usize,
    tol: Tolerance,
) -> Result<Integral> {
    let mut partial = Vec::with_capacity(panels);
    let mut sum = 0.0;
    let mut err = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * half_period;
        let r = integrate(&mut f, lo, lo + half_period, tol)?;
        sum += r.value;
        err += r.error;
        partial.push(sum);
    }
    let (value, delta) = wynn_epsilon(&partial);
    Ok(Integral {
        value,
        error: err + delta,
    })
}

/// Wynn's epsilon extrapolation of a sequence of partial sums. Returns the
/// extrapolated limit and the change between the last two estimates.
pub fn wynn_epsilon(s: &[f64]) -> (f64, f64) {
    let n = s.len();
    if n < 3 {
        return (s.last().copied().unwrap_or(0.0), f64::INFINITY);
    }
    // columns e_{-1} = 0, e_0 = s; even columns hold the estimates
    let mut prev: Vec<f64> = alloc::vec![0.0; n + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut best = s[n - 1];
    let mut delta = (s[n - 1] - s[n - 2]).abs();
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 {
                return (cur[i + 1], 0.0);
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        col += 1;
        prev = cur;
        cur = next;
        if col % 2 == 0 && cur.len() >= 2 {
            let last = cur[cur.len() - 1];
            let d = (last - cur[cur.len() - 2]).abs();
            if d.is_finite() && last.is_finite() && d <= delta {
                best = last;
                delta = d;
            }
        }
    }
    (best, delta)
}

/// Fixed-order Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 1 { x } else { p1 };
                let pn1 = if n == 1 { 1.0 } else { p0 };
                dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n == 1 {
            nodes[0] = 0.0;
            weights[0] = 2.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let gl = GaussLegendre::new(32);
        let v = gl.integrate(|x| libm::pow(x, 62.0), -1.0, 1.0);
        assert!((v - 2.0 / 63.0).abs() < 1e-14);
        let gl5 = GaussLegendre::new(5);
        let v = gl5.integrate(|x| x * x * x * x, 0.0, 2.0);
        assert!((v - 32.0 / 5.0).abs() < 1e-12);
        let gl1 = GaussLegendre::new(1);
        assert!((gl1.integrate(|x| 3.0 * x + 1.0, 0.0, 2.0) - 8.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_kinks_and_tails() {
        let r = integrate(|x: f64| x.abs(), -1.0, 2.0, Tolerance::default()).unwrap();
        assert!((r.value - 2.5).abs() < 1e-10);
        let r = integrate_to_infinity(|x| 1.0 / (1.0 + x * x), 0.0, Tolerance::default()).unwrap();
        assert!((r.value - core::f64::consts::FRAC_PI_2).abs() < 1e-10);
        let r = integrate_sqrt_left(|x| 1.0 / libm::sqrt(x), 0.0, 4.0, Tolerance::default()).unwrap();
        assert!((r.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_tail() {
        // ∫_0^∞ sin x / x dx = π/2
        let r = integrate_oscillatory(
            |x| if x == 0.0 { 1.0 } else { libm::sin(x) / x },
            0.0,
            core::f64::consts::PI,
            30,
            Tolerance::abs(1e-13),
        )
        .unwrap();
        assert!((r.value - core::f64::consts::FRAC_PI_2).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn adaptive_reports_failure() {
        let tol = Tolerance {
            abs: 1e-14,
            rel: 0.0,
            max_intervals: 4,
        };
        let r = integrate(|x: f64| libm::sin(1.0 / x), 1e-4, 1.0, tol);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
