//! The variational constant
//! `M = sup_{‖g‖₂ = 1} (∫∫ γ(x−y) g²(x) g²(y) dx dy)^{1/2} − ∫ |∇g|²`
//! on a uniform grid in d = 1 or 2.
//!
//! Grid values sit at nodes `x_i = −L/2 + i h`; the outer ring is held at 0.
//! The Dirichlet energy uses forward differences. The quadratic form treats
//! `g²` as constant on each node's cell and averages the kernel over cell
//! pairs, `W(k) = ∫_{[−1,1]^d} ∏(1−|u_j|) |k+u|^{−α} du`, so singular kernels
//! need no mollification and the discrete functional scales exactly.

use alloc::{vec, vec::Vec};
use core::f64::consts::PI;

use rand::Rng;

use crate::covariance::CovarianceModel;
use crate::error::{invalid, Error, Result};
use crate::greens::Dimension;
use crate::mc::{stream, Replicator};
use crate::quad::GaussLegendre;
use crate::special::gamma;

/// Largest node count per axis in d = 1 and d = 2.
pub const MAX_NODES_1D: usize = 2049;
pub const MAX_NODES_2D: usize = 65;

const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub dim: Dimension,
    pub extent: f64,
    pub spacing: f64,
}

impl GridSpec {
    pub fn new(dim: Dimension, extent: f64, spacing: f64) -> Result<Self> {
        if !(extent > 0.0 && spacing > 0.0 && spacing < extent) {
            return Err(invalid("grid needs 0 < h < L"));
        }
        let spec = GridSpec { dim, extent, spacing };
        let n = spec.nodes_per_axis();
        let limit = match dim.get() {
            1 => MAX_NODES_1D,
            2 => MAX_NODES_2D,
            _ => return Err(Error::Unsupported("variational grids exist in d = 1 and 2".into())),
        };
        if n > limit {
            return Err(Error::SizeGuard { n, limit });
        }
        if n < 5 {
            return Err(invalid("grid needs at least five nodes per axis"));
        }
        Ok(spec)
    }

    /// `L = 40`, `h = 0.05` in d = 1; `L = 16`, `h = 0.5` in d = 2.
    pub fn default_for(dim: Dimension) -> Result<Self> {
        match dim.get() {
            1 => GridSpec::new(dim, 40.0, 0.05),
            _ => GridSpec::new(dim, 16.0, 0.5),
        }
    }

    pub fn nodes_per_axis(&self) -> usize {
        libm::round(self.extent / self.spacing) as usize + 1
    }

    pub fn len(&self) -> usize {
        self.nodes_per_axis().pow(self.dim.get() as u32)
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 * self.extent + i as f64 * self.spacing
    }

    fn cell_volume(&self) -> f64 {
        libm::pow(self.spacing, self.dim.get() as f64)
    }

    fn axes(&self, flat: usize) -> [usize; 2] {
        let n = self.nodes_per_axis();
        match self.dim.get() {
            1 => [flat, 0],
            _ => [flat / n, flat % n],
        }
    }

    fn is_boundary(&self, flat: usize) -> bool {
        let last = self.nodes_per_axis() - 1;
        let ax = self.axes(flat);
        (0..self.dim.get()).any(|k| ax[k] == 0 || ax[k] == last)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<f64>,
}

impl GridFunction {
    /// Samples `f` at the nodes, zeroes the boundary ring and normalizes.
    pub fn from_fn<F: Fn(&[f64]) -> f64>(spec: GridSpec, f: F) -> Result<Self> {
        let d = spec.dim.get();
        let values = (0..spec.len())
            .map(|flat| {
                if spec.is_boundary(flat) {
                    return 0.0;
                }
                let ax = spec.axes(flat);
                let x = [spec.coordinate(ax[0]), spec.coordinate(ax[1])];
                f(&x[..d])
            })
            .collect();
        let mut g = GridFunction { spec, values };
        g.normalize()?;
        Ok(g)
    }

    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(invalid("value count does not match the grid"));
        }
        let mut g = GridFunction { spec, values };
        for flat in 0..g.values.len() {
            if spec.is_boundary(flat) {
                g.values[flat] = 0.0;
            }
        }
        g.normalize()?;
        Ok(g)
    }

    /// Normalized Gaussian profile `(2πσ²)^{−d/4} e^{−|x|²/(4σ²)}`.
    pub fn gaussian(spec: GridSpec, sigma: f64) -> Result<Self> {
        GridFunction::from_fn(spec, |x| libm::exp(-x.iter().map(|v| v * v).sum::<f64>() / (4.0 * sigma * sigma)))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Trapezoidal `L²` norm (the boundary vanishes, so it is `h^{d/2}‖v‖`).
    pub fn norm_l2(&self) -> f64 {
        libm::sqrt(self.spec.cell_volume() * self.values.iter().map(|v| v * v).sum::<f64>())
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_l2();
        if !(n > 0.0 && n.is_finite()) {
            return Err(invalid("cannot normalize a zero grid function"));
        }
        self.values.iter_mut().for_each(|v| *v /= n);
        Ok(())
    }

    /// Node coordinates and values, one row per node.
    pub fn rows(&self) -> Vec<(Vec<f64>, f64)> {
        let d = self.spec.dim.get();
        (0..self.values.len())
            .map(|flat| {
                let ax = self.spec.axes(flat);
                let x = (0..d).map(|k| self.spec.coordinate(ax[k])).collect();
                (x, self.values[flat])
            })
            .collect()
    }

    /// Translates by whole cells along the first axis; mass pushed past the
    /// boundary is lost.
    pub fn shifted(&self, cells: isize) -> Result<Self> {
        let n = self.spec.nodes_per_axis() as isize;
        let mut out = vec![0.0; self.values.len()];
        for (flat, v) in self.values.iter().enumerate() {
            let ax = self.spec.axes(flat);
            let i = ax[0] as isize + cells;
            if i < 0 || i >= n {
                continue;
            }
            let target = match self.spec.dim.get() {
                1 => i as usize,
                _ => i as usize * n as usize + ax[1],
            };
            out[target] = *v;
        }
        GridFunction::from_values(self.spec, out)
    }

    /// Flips the sign so that `∑ g ≥ 0`.
    pub fn sign_normalized(mut self) -> Self {
        if self.values.iter().sum::<f64>() < 0.0 {
            self.values.iter_mut().for_each(|v| *v = -*v);
        }
        self
    }
}

#[derive(Debug, Clone)]
enum QuadraticForm {
    /// `h ∑ g⁴`
    White,
    /// `scale · ∑_{i,j} W(i−j) g_i² g_j²`, with `W` tabulated for
    /// nonnegative offsets.
    Riesz { table: Vec<f64>, scale: f64 },
}

/// The discrete functional `Φ = √Q − D` for a model on a grid.
#[derive(Debug, Clone)]
pub struct Functional {
    spec: GridSpec,
    form: QuadraticForm,
}

/// The two terms of `Φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalTerms {
    pub sqrt_quadratic: f64,
    pub dirichlet: f64,
}

impl FunctionalTerms {
    pub fn value(&self) -> f64 {
        self.sqrt_quadratic - self.dirichlet
    }
}

fn riesz_table_1d(alpha: f64, n: usize) -> Vec<f64> {
    let second = |z: f64| libm::pow(z.abs(), 2.0 - alpha) / ((1.0 - alpha) * (2.0 - alpha));
    (0..n)
        .map(|k| {
            let k = k as f64;
            second(k + 1.0) - 2.0 * second(k) + second(k - 1.0)
        })
        .collect()
}

fn tent(u: f64) -> f64 {
    1.0 - u.abs()
}

/// `∫_{[−1,1]²} (1−|u₁|)(1−|u₂|) |k+u|^{−α} du`.
fn riesz_weight_2d(alpha: f64, k: [f64; 2], gl: &GaussLegendre) -> f64 {
    let sing = [-k[0], -k[1]];
    let f = |x: [f64; 2]| {
        let r = libm::hypot(x[0] + k[0], x[1] + k[1]);
        tent(x[0]) * tent(x[1]) * libm::pow(r, -alpha)
    };
    let mut total = 0.0;
    for (a, b) in [(-1.0, -1.0), (0.0, -1.0), (-1.0, 0.0), (0.0, 0.0)] {
        let corners = [[a, b], [a + 1.0, b], [a + 1.0, b + 1.0], [a, b + 1.0]];
        match corners.iter().position(|c| c[0] == sing[0] && c[1] == sing[1]) {
            None => {
                for (x, wx) in gl.mapped(a, a + 1.0) {
                    for (y, wy) in gl.mapped(b, b + 1.0) {
                        total += wx * wy * f([x, y]);
                    }
                }
            }
            Some(p) => {
                // two triangles sharing the singular corner, each mapped by
                // x = P + s(V₁−P) + s t (V₂−V₁) with s = v^{1/(2−α)}
                let pc = corners[p];
                let adj1 = corners[(p + 1) % 4];
                let opp = corners[(p + 2) % 4];
                let adj2 = corners[(p + 3) % 4];
                for (v1, v2) in [(adj1, opp), (opp, adj2)] {
                    let e1 = [v1[0] - pc[0], v1[1] - pc[1]];
                    let e2 = [v2[0] - v1[0], v2[1] - v1[1]];
                    let det = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
                    for (v, wv) in gl.mapped(0.0, 1.0) {
                        let s = libm::pow(v, 1.0 / (2.0 - alpha));
                        for (t, wt) in gl.mapped(0.0, 1.0) {
                            let dir = [e1[0] + t * e2[0], e1[1] + t * e2[1]];
                            let x = [pc[0] + s * dir[0], pc[1] + s * dir[1]];
                            let rho = libm::hypot(dir[0], dir[1]);
                            total += wv * wt * det * tent(x[0]) * tent(x[1]) * libm::pow(rho, -alpha) / (2.0 - alpha);
                        }
                    }
                }
            }
        }
    }
    total
}

fn riesz_table_2d(alpha: f64, n: usize) -> Vec<f64> {
    let near = GaussLegendre::new(24);
    let far = GaussLegendre::new(8);
    let mut table = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let gl = if i <= 2 { &near } else { &far };
            let w = riesz_weight_2d(alpha, [i as f64, j as f64], gl);
            table[i * n + j] = w;
            table[j * n + i] = w;
        }
    }
    table
}

impl Functional {
    /// Requires an unmollified white-noise or Riesz model whose dimension
    /// matches the grid.
    pub fn new(model: &CovarianceModel, spec: GridSpec) -> Result<Self> {
        if model.dim() != spec.dim {
            return Err(invalid("model and grid dimensions differ"));
        }
        let n = spec.nodes_per_axis();
        let form = match model {
            CovarianceModel::WhiteNoise1D => QuadraticForm::White,
            CovarianceModel::Riesz { dim, alpha, kappa } => {
                let table = match dim.get() {
                    1 => riesz_table_1d(*alpha, n),
                    2 => riesz_table_2d(*alpha, n),
                    _ => return Err(Error::Unsupported("variational grids exist in d = 1 and 2".into())),
                };
                let d = dim.get() as f64;
                let scale = kappa * libm::pow(spec.spacing, 2.0 * d - alpha);
                QuadraticForm::Riesz { table, scale }
            }
            CovarianceModel::Mollified { .. } => {
                return Err(Error::Unsupported("the variational problem needs a homogeneous kernel".into()))
            }
        };
        Ok(Functional { spec, form })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    fn check(&self, g: &GridFunction) -> Result<()> {
        if g.spec != self.spec {
            return Err(invalid("grid function lives on a different grid"));
        }
        Ok(())
    }

    /// `c_i = ∑_j W(i−j) g_j²`.
    fn correlate(&self, table: &[f64], v: &[f64]) -> Vec<f64> {
        let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
        let n = self.spec.nodes_per_axis();
        match self.spec.dim.get() {
            1 => (0..n)
                .map(|i| (0..n).map(|j| table[i.abs_diff(j)] * sq[j]).sum())
                .collect(),
            _ => {
                let support: Vec<usize> = (0..sq.len()).filter(|&j| sq[j] != 0.0).collect();
                (0..sq.len())
                    .map(|i| {
                        let (i1, i2) = (i / n, i % n);
                        support
                            .iter()
                            .map(|&j| table[i1.abs_diff(j / n) * n + i2.abs_diff(j % n)] * sq[j])
                            .sum()
                    })
                    .collect()
            }
        }
    }

    fn quadratic(&self, v: &[f64]) -> (f64, Vec<f64>) {
        match &self.form {
            QuadraticForm::White => {
                let h = self.spec.spacing;
                let q = h * v.iter().map(|x| x * x * x * x).sum::<f64>();
                let grad = v.iter().map(|x| 4.0 * h * x * x * x).collect();
                (q, grad)
            }
            QuadraticForm::Riesz { table, scale } => {
                let c = self.correlate(table, v);
                let q = scale * v.iter().zip(&c).map(|(x, c)| x * x * c).sum::<f64>();
                let grad = v.iter().zip(&c).map(|(x, c)| 4.0 * scale * x * c).collect();
                (q, grad)
            }
        }
    }

    fn dirichlet(&self, v: &[f64]) -> (f64, Vec<f64>) {
        let n = self.spec.nodes_per_axis();
        let h = self.spec.spacing;
        let d = self.spec.dim.get();
        let c = libm::pow(h, d as f64 - 2.0);
        let mut energy = 0.0;
        let mut grad = vec![0.0; v.len()];
        let mut edge = |a: usize, b: usize| {
            let diff = v[b] - v[a];
            energy += c * diff * diff;
            grad[a] -= 2.0 * c * diff;
            grad[b] += 2.0 * c * diff;
        };
        match d {
            1 => (0..n - 1).for_each(|i| edge(i, i + 1)),
            _ => {
                for i in 0..n {
                    for j in 0..n {
                        if i + 1 < n {
                            edge(i * n + j, (i + 1) * n + j);
                        }
                        if j + 1 < n {
                            edge(i * n + j, i * n + j + 1);
                        }
                    }
                }
            }
        }
        for (flat, gr) in grad.iter_mut().enumerate() {
            if self.spec.is_boundary(flat) {
                *gr = 0.0;
            }
        }
        (energy, grad)
    }

    pub fn terms(&self, g: &GridFunction) -> Result<FunctionalTerms> {
        self.check(g)?;
        Ok(self.terms_raw(&g.values))
    }

    fn terms_raw(&self, v: &[f64]) -> FunctionalTerms {
        FunctionalTerms {
            sqrt_quadratic: libm::sqrt(self.quadratic(v).0),
            dirichlet: self.dirichlet(v).0,
        }
    }

    pub fn eval(&self, g: &GridFunction) -> Result<f64> {
        Ok(self.terms(g)?.value())
    }

    /// `∂Φ/∂g_i` with respect to the free (interior) node values, without the
    /// norm constraint.
    pub fn gradient(&self, g: &GridFunction) -> Result<Vec<f64>> {
        self.check(g)?;
        Ok(self.gradient_raw(&g.values).1)
    }

    /// Evaluates `Φ` on raw node values, without normalizing.
    pub fn eval_values(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.spec.len() {
            return Err(invalid("value count does not match the grid"));
        }
        Ok(self.terms_raw(v).value())
    }

    fn gradient_raw(&self, v: &[f64]) -> (f64, Vec<f64>) {
        let (q, dq) = self.quadratic(v);
        let (e, de) = self.dirichlet(v);
        let root = libm::sqrt(q);
        let grad = dq
            .iter()
            .zip(&de)
            .enumerate()
            .map(|(flat, (a, b))| {
                if self.spec.is_boundary(flat) || root == 0.0 {
                    0.0
                } else {
                    a / (2.0 * root) - b
                }
            })
            .collect();
        (root - e, grad)
    }

    /// Solves `h^d (I − Δ_h) p = r` on the interior nodes.
    fn precondition(&self, r: &[f64]) -> Vec<f64> {
        let n = self.spec.nodes_per_axis();
        let h = self.spec.spacing;
        let vol = self.spec.cell_volume();
        match self.spec.dim.get() {
            1 => {
                // tridiagonal solve on nodes 1..n−1
                let m = n - 2;
                let diag = vol * (1.0 + 2.0 / (h * h));
                let off = -vol / (h * h);
                let mut c = vec![0.0; m];
                let mut y = vec![0.0; m];
                for i in 0..m {
                    let denom = if i == 0 { diag } else { diag - off * c[i - 1] };
                    c[i] = off / denom;
                    let prev = if i == 0 { 0.0 } else { y[i - 1] };
                    y[i] = (r[i + 1] - off * prev) / denom;
                }
                let mut p = vec![0.0; n];
                for i in (0..m).rev() {
                    let next = if i + 1 < m { p[i + 2] } else { 0.0 };
                    p[i + 1] = y[i] - c[i] * next;
                }
                p
            }
            _ => {
                let apply = |x: &[f64]| -> Vec<f64> {
                    let mut out = vec![0.0; x.len()];
                    for i in 1..n - 1 {
                        for j in 1..n - 1 {
                            let k = i * n + j;
                            let lap = 4.0 * x[k] - x[k - n] - x[k + n] - x[k - 1] - x[k + 1];
                            out[k] = vol * (x[k] + lap / (h * h));
                        }
                    }
                    out
                };
                conjugate_gradient(apply, r, 1e-13, 4 * n * n)
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn conjugate_gradient<A: Fn(&[f64]) -> Vec<f64>>(apply: A, b: &[f64], rel_tol: f64, max_iter: usize) -> Vec<f64> {
    let mut x = vec![0.0; b.len()];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let stop = rel_tol * rel_tol * rr;
    for _ in 0..max_iter {
        if rr <= stop || rr == 0.0 {
            break;
        }
        let ap = apply(&p);
        let step = rr / dot(&p, &ap);
        x.iter_mut().zip(&p).for_each(|(x, p)| *x += step * p);
        r.iter_mut().zip(&ap).for_each(|(r, a)| *r -= step * a);
        let next = dot(&r, &r);
        let beta = next / rr;
        p.iter_mut().zip(&r).for_each(|(p, r)| *p = r + beta * *p);
        rr = next;
    }
    x
}

/// `Φ(g)` for a model; see [`Functional`].
pub fn functional_eval(model: &CovarianceModel, g: &GridFunction) -> Result<f64> {
    Functional::new(model, g.spec)?.eval(g)
}

/// One preconditioned projected ascent run from `start`.
#[derive(Debug, Clone, PartialEq)]
pub struct AscentRun {
    pub value: f64,
    pub maximizer: GridFunction,
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Projected gradient ascent with Armijo backtracking from step 1. Each
/// trial point is renormalized onto the unit sphere.
pub fn ascend(functional: &Functional, start: GridFunction, iterations: usize, tol: f64) -> Result<AscentRun> {
    functional.check(&start)?;
    let vol = functional.spec.cell_volume();
    let mut g = start;
    let (mut value, mut grad) = functional.gradient_raw(&g.values);
    let mut history = vec![value];
    let mut converged = false;
    let mut quiet = 0;
    for _ in 0..iterations {
        // Φ has degree two, so grad·g = 2Φ and this residual is orthogonal to g
        let residual: Vec<f64> = grad.iter().zip(&g.values).map(|(r, g)| r - 2.0 * value * vol * g).collect();
        let mut p = functional.precondition(&residual);
        let along = dot(&g.values, &p) / dot(&g.values, &g.values);
        p.iter_mut().zip(&g.values).for_each(|(p, g)| *p -= along * g);
        let slope = dot(&residual, &p);
        if !(slope > 0.0) {
            converged = true;
            break;
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let mut trial: Vec<f64> = g.values.iter().zip(&p).map(|(g, p)| g + step * p).collect();
            let norm = libm::sqrt(vol * dot(&trial, &trial));
            trial.iter_mut().for_each(|v| *v /= norm);
            let (tv, tg) = functional.gradient_raw(&trial);
            if tv >= value + ARMIJO * step * slope {
                accepted = Some((trial, tv, tg));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, tv, tg)) = accepted else {
            converged = true;
            break;
        };
        let gain = tv - value;
        g.values = trial;
        value = tv;
        grad = tg;
        history.push(value);
        if gain <= tol * value.abs().max(1.0) {
            quiet += 1;
            if quiet >= 5 {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    Ok(AscentRun {
        value,
        maximizer: g.sign_normalized(),
        history,
        converged,
    })
}

/// Sum of one to three positive Gaussian bumps near the grid centre.
pub fn random_bumps<R: Rng + ?Sized>(spec: GridSpec, rng: &mut R) -> Result<GridFunction> {
    let d = spec.dim.get();
    let count = rng.random_range(1..=3);
    let scale = spec.extent / 40.0;
    let bumps: Vec<([f64; 2], f64, f64)> = (0..count)
        .map(|_| {
            let mut c = [0.0; 2];
            for v in c.iter_mut().take(d) {
                *v = rng.random_range(-spec.extent / 8.0..spec.extent / 8.0);
            }
            let width = scale * rng.random_range(0.5..2.0);
            let amp = rng.random_range(0.5..1.5);
            (c, width, amp)
        })
        .collect();
    GridFunction::from_fn(spec, |x| {
        bumps
            .iter()
            .map(|(c, w, a)| {
                let r2: f64 = x.iter().zip(c).map(|(x, c)| (x - c) * (x - c)).sum();
                a * libm::exp(-r2 / (2.0 * w * w))
            })
            .sum()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub m_estimate: f64,
    pub maximizer: GridFunction,
    /// History of the best restart.
    pub history: Vec<f64>,
    /// Final value of every restart, in restart order.
    pub restart_values: Vec<f64>,
    pub converged: bool,
}

/// Stationarity tolerance used by [`solve_m`].
pub const SOLVE_TOL: f64 = 1e-13;

/// Multi-start ascent; restart `i` starts from bumps drawn on stream `i`.
pub fn solve_m<R: Replicator>(
    model: &CovarianceModel,
    spec: GridSpec,
    iterations: usize,
    restarts: u64,
    seed: u64,
    runner: &R,
) -> Result<Solution> {
    if restarts == 0 {
        return Err(invalid("need at least one restart"));
    }
    let functional = Functional::new(model, spec)?;
    let runs: Vec<AscentRun> = runner
        .map(restarts, |i| {
            let start = random_bumps(spec, &mut stream(seed, i))?;
            ascend(&functional, start, iterations, SOLVE_TOL)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let restart_values: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .ok_or(Error::Empty)?;
    Ok(Solution {
        m_estimate: best.value,
        maximizer: best.maximizer,
        history: best.history,
        restart_values,
        converged: best.converged,
    })
}

/// Best normalized Gaussian `g² = N(0, σ² I)` and its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianAnsatz {
    pub sigma: f64,
    pub value: f64,
}

/// Maximizes `Φ` over Gaussian profiles. With `√Q = a σ^{−α/2}` and
/// `D = b σ^{−2}`, `b = d/4`, the optimum has `σ^{−(2−α/2)} = α a / (4b)`.
pub fn gaussian_ansatz(model: &CovarianceModel) -> Result<GaussianAnsatz> {
    let (a, alpha, d) = match model {
        CovarianceModel::WhiteNoise1D => (libm::sqrt(1.0 / (2.0 * libm::sqrt(PI))), 1.0, 1.0),
        CovarianceModel::Riesz { dim, alpha, kappa } => {
            let d = dim.get() as f64;
            let q = kappa * libm::pow(2.0, -alpha) * gamma((d - alpha) / 2.0) / gamma(d / 2.0);
            (libm::sqrt(q), *alpha, d)
        }
        CovarianceModel::Mollified { .. } => {
            return Err(Error::Unsupported("the variational problem needs a homogeneous kernel".into()))
        }
    };
    let b = d / 4.0;
    let u = libm::pow(alpha * a / (4.0 * b), 1.0 / (2.0 - alpha / 2.0));
    Ok(GaussianAnsatz {
        sigma: 1.0 / u,
        value: b * u * u * (4.0 / alpha - 1.0),
    })
}

/// `¼ (3/2)^{1/3}`, the published white-noise value.
pub fn white_noise_m_closed() -> f64 {
    0.25 * libm::cbrt(1.5)
}

/// `(3/4) 12^{−1/3}`: the supremum in d = 1 for white noise, attained by a
/// `sech` profile (sharp Gagliardo–Nirenberg constant `1/√3`).
pub fn white_noise_sup_exact() -> f64 {
    0.75 / libm::cbrt(12.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::Sequential;

    fn grid1(l: f64, h: f64) -> GridSpec {
        GridSpec::new(Dimension::ONE, l, h).unwrap()
    }

    #[test]
    fn normalization_and_boundary() {
        let g = GridFunction::gaussian(grid1(10.0, 0.1), 1.0).unwrap();
        assert!((g.norm_l2() - 1.0).abs() < 1e-12);
        assert_eq!(g.values()[0], 0.0);
        assert_eq!(*g.values().last().unwrap(), 0.0);
        assert!(GridSpec::new(Dimension::ONE, 1000.0, 0.01).is_err());
        assert!(GridSpec::new(Dimension::THREE, 4.0, 0.5).is_err());
    }

    #[test]
    fn gaussian_closed_form() {
        let w = gaussian_ansatz(&CovarianceModel::white()).unwrap();
        assert!((w.sigma - libm::cbrt(2.0 * libm::sqrt(PI))).abs() < 1e-12);
        assert!((w.value - 0.322595).abs() < 1e-6);
        let f = Functional::new(&CovarianceModel::white(), grid1(40.0, 0.02)).unwrap();
        let g = GridFunction::gaussian(*f.spec(), w.sigma).unwrap();
        assert!((f.eval(&g).unwrap() - w.value).abs() < 1e-4);
    }

    #[test]
    fn riesz_table_limits() {
        let t = riesz_table_1d(0.5, 50);
        // far entries approach the point kernel
        assert!((t[40] - libm::pow(40.0, -0.5)).abs() < 1e-4);
        // total mass of the tent weights: ∫(1−|s|)|s|^{−α} = 2/((1−α)(2−α))
        assert!((t[0] - 2.0 / (0.5 * 1.5)).abs() < 1e-12);
        let gl = GaussLegendre::new(24);
        let w0 = riesz_weight_2d(1.0, [0.0, 0.0], &gl);
        let w1 = riesz_weight_2d(1.0, [1.0, 0.0], &gl);
        let fine = GaussLegendre::new(48);
        assert!((w0 - riesz_weight_2d(1.0, [0.0, 0.0], &fine)).abs() < 1e-10);
        assert!((w1 - riesz_weight_2d(1.0, [1.0, 0.0], &fine)).abs() < 1e-10);
        let w5 = riesz_weight_2d(1.0, [5.0, 3.0], &GaussLegendre::new(8));
        assert!((w5 - 1.0 / libm::hypot(5.0, 3.0)).abs() < 2e-3);
    }

    #[test]
    fn riesz_gaussian_convergence() {
        let model = CovarianceModel::riesz(Dimension::ONE, 0.5, 1.0).unwrap();
        let ga = gaussian_ansatz(&model).unwrap();
        let f = Functional::new(&model, grid1(30.0, 0.05)).unwrap();
        let g = GridFunction::gaussian(*f.spec(), ga.sigma).unwrap();
        assert!((f.eval(&g).unwrap() - ga.value).abs() < 1e-4);
        let model2 = CovarianceModel::riesz(Dimension::TWO, 1.0, 1.0).unwrap();
        let ga2 = gaussian_ansatz(&model2).unwrap();
        let spec2 = GridSpec::new(Dimension::TWO, 8.0 * ga2.sigma, ga2.sigma / 5.0).unwrap();
        let f2 = Functional::new(&model2, spec2).unwrap();
        let g2 = GridFunction::gaussian(spec2, ga2.sigma).unwrap();
        let v = f2.eval(&g2).unwrap();
        assert!((v - ga2.value).abs() < 5e-3 * ga2.value.abs().max(1.0), "{v} vs {}", ga2.value);
    }

    #[test]
    fn gradient_matches_differences() {
        let model = CovarianceModel::riesz(Dimension::ONE, 0.5, 1.0).unwrap();
        for m in [CovarianceModel::white(), model] {
            let spec = grid1(8.0, 0.1);
            let f = Functional::new(&m, spec).unwrap();
            let g = random_bumps(spec, &mut stream(3, 0)).unwrap();
            let grad = f.gradient(&g).unwrap();
            for i in [10usize, 25, 40, 41, 55] {
                let step = 1e-5;
                let mut up = g.values().to_vec();
                let mut dn = g.values().to_vec();
                up[i] += step;
                dn[i] -= step;
                let fd = (f.eval_values(&up).unwrap() - f.eval_values(&dn).unwrap()) / (2.0 * step);
                assert!((fd - grad[i]).abs() <= 1e-6 * grad[i].abs().max(1e-3), "{i}: {fd} vs {}", grad[i]);
            }
        }
    }

    #[test]
    fn discrete_scaling_is_exact() {
        let model = CovarianceModel::riesz(Dimension::ONE, 0.5, 1.0).unwrap();
        let spec = grid1(20.0, 0.1);
        let g = random_bumps(spec, &mut stream(1, 2)).unwrap();
        let base = Functional::new(&model, spec).unwrap().terms(&g).unwrap();
        for lam in [0.5, 2.0] {
            let scaled = grid1(20.0 / lam, 0.1 / lam);
            let vals: Vec<f64> = g.values().iter().map(|v| v * libm::sqrt(lam)).collect();
            let gl = GridFunction::from_values(scaled, vals).unwrap();
            let t = Functional::new(&model, scaled).unwrap().terms(&gl).unwrap();
            assert!((t.sqrt_quadratic - libm::pow(lam, 0.25) * base.sqrt_quadratic).abs() < 1e-6);
            assert!((t.dirichlet - lam * lam * base.dirichlet).abs() < 1e-6);
        }
    }

    #[test]
    fn white_noise_solver() {
        let spec = GridSpec::default_for(Dimension::ONE).unwrap();
        let s = solve_m(&CovarianceModel::white(), spec, 400, 2, 7, &Sequential).unwrap();
        assert!(s.history.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!((s.maximizer.norm_l2() - 1.0).abs() < 1e-12);
        assert!(s.converged);
        assert!((s.m_estimate - white_noise_sup_exact()).abs() < 2e-4, "{}", s.m_estimate);
        assert!(s.m_estimate > gaussian_ansatz(&CovarianceModel::white()).unwrap().value);
    }

    #[test]
    fn riesz_restarts_agree() {
        let model = CovarianceModel::riesz(Dimension::ONE, 0.5, 1.0).unwrap();
        let spec = GridSpec::default_for(Dimension::ONE).unwrap();
        let s = solve_m(&model, spec, 2000, 5, 7, &Sequential).unwrap();
        let lo = s.restart_values.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(s.m_estimate - lo < 1e-3);
        assert!(s.m_estimate > gaussian_ansatz(&model).unwrap().value);
    }

    #[test]
    fn translation_invariance() {
        let spec = grid1(20.0, 0.1);
        let model = CovarianceModel::riesz(Dimension::ONE, 0.3, 2.0).unwrap();
        let f = Functional::new(&model, spec).unwrap();
        let g = GridFunction::gaussian(spec, 1.0).unwrap();
        let moved = g.shifted(17).unwrap();
        assert!((f.eval(&g).unwrap() - f.eval(&moved).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn constants() {
        assert!((white_noise_m_closed() - 0.2861786).abs() < 1e-7);
        assert!((white_noise_sup_exact() - 0.327593).abs() < 1e-6);
    }
}
