//! Pair partitions, Gaussian moments and finite-dimensional Stratonovich and
//! Itô calculus.
//!
//! Indices are 0-based throughout. A Gaussian vector is described by its
//! covariance matrix; tensors are dense and always symmetric.

use alloc::{collections::BTreeMap, string::String, vec, vec::Vec};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::special::{double_factorial_odd, factorial};

/// Largest `n` that [`pair_partitions`] accepts without an override.
pub const PARTITION_GUARD: usize = 8;

/// A perfect matching of `{0, …, 2n−1}`, pairs sorted by first element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairPartition {
    pub pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    pub fn n(&self) -> usize {
        self.pairs.len()
    }
}

/// Streams every pair partition of `{0, …, 2n−1}` once. The smallest
/// unmatched index is paired with each larger unmatched index in turn.
#[derive(Debug, Clone)]
pub struct PairPartitions {
    n: usize,
    // choice[k] indexes the partner among the 2n−2k−1 remaining points
    choice: Vec<usize>,
    done: bool,
}

pub fn pair_partitions(n: usize) -> Result<PairPartitions> {
    if n > PARTITION_GUARD {
        return Err(Error::SizeGuard {
            n,
            limit: PARTITION_GUARD,
        });
    }
    Ok(pair_partitions_unchecked(n))
}

/// [`pair_partitions`] without the size guard.
pub fn pair_partitions_unchecked(n: usize) -> PairPartitions {
    PairPartitions {
        n,
        choice: vec![0; n],
        done: false,
    }
}

impl Iterator for PairPartitions {
    type Item = PairPartition;

    fn next(&mut self) -> Option<PairPartition> {
        if self.done {
            return None;
        }
        let mut free: Vec<usize> = (0..2 * self.n).collect();
        let mut pairs = Vec::with_capacity(self.n);
        for &c in &self.choice {
            let first = free.remove(0);
            let second = free.remove(c);
            pairs.push((first, second));
        }
        // odometer, last digit fastest
        self.done = true;
        for k in (0..self.n).rev() {
            if self.choice[k] + 1 < 2 * (self.n - k) - 1 {
                self.choice[k] += 1;
                self.done = false;
                break;
            }
            self.choice[k] = 0;
        }
        Some(PairPartition { pairs })
    }
}

/// `(2n)!/(2^n n!)`: the ratio `E Z^{2n} / Var^n` for a centred Gaussian.
pub fn wick_even_moment_factor(n: u64) -> u128 {
    double_factorial_odd(n)
}

/// Covariance of a centred Gaussian vector.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianVectorSpec {
    m: usize,
    cov: Vec<f64>,
    root: Vec<f64>,
}

impl GaussianVectorSpec {
    /// Validates symmetry (exact) and positive semidefiniteness (eigenvalues
    /// above `−1e−12`).
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::Empty);
        }
        let mut cov = Vec::with_capacity(m * m);
        for row in rows {
            if row.len() != m {
                return Err(invalid("covariance must be square"));
            }
            cov.extend_from_slice(row);
        }
        for i in 0..m {
            for j in 0..i {
                if cov[i * m + j] != cov[j * m + i] {
                    return Err(invalid("covariance must be symmetric"));
                }
            }
        }
        let (vals, vecs) = jacobi_eigen(&cov, m);
        if vals.iter().any(|&l| l < -1e-12) {
            return Err(invalid("covariance must be positive semidefinite"));
        }
        // root = V diag(√λ)
        let mut root = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                root[i * m + j] = vecs[i * m + j] * libm::sqrt(vals[j].max(0.0));
            }
        }
        Ok(GaussianVectorSpec { m, cov, root })
    }

    pub fn identity(m: usize) -> Self {
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(&rows).expect("identity is a covariance")
    }

    /// A random covariance `A Aᵀ / m` with standard Gaussian `A`.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let a: Vec<f64> = (0..m * m).map(|_| rng.sample(StandardNormal)).collect();
        let mut rows = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..=i {
                let v: f64 = (0..m).map(|k| a[i * m + k] * a[j * m + k]).sum::<f64>() / m as f64;
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        Self::new(&rows).expect("Gram matrices are covariances")
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn cov(&self, i: usize, j: usize) -> f64 {
        self.cov[i * self.m + j]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let z: Vec<f64> = (0..self.m).map(|_| rng.sample(StandardNormal)).collect();
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.root[i * self.m + j] * z[j]).sum())
            .collect()
    }
}

/// Symmetric eigen-decomposition by cyclic Jacobi rotations. Returns the
/// eigenvalues and the eigenvectors as columns of a row-major matrix.
fn jacobi_eigen(a: &[f64], m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = a.to_vec();
    let mut v = vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * m + j] * a[i * m + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                for k in 0..m {
                    let vkp = v[k * m + p];
                    let vkq = v[k * m + q];
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..m).map(|i| a[i * m + i]).collect(), v)
}

/// `E ∏ g_{i}` over the listed components (repeats allowed).
pub fn isserlis_moment(spec: &GaussianVectorSpec, indices: &[usize]) -> Result<f64> {
    if indices.iter().any(|&i| i >= spec.dim()) {
        return Err(invalid("index outside the Gaussian vector"));
    }
    if indices.len() % 2 == 1 {
        return Ok(0.0);
    }
    if indices.len() / 2 > PARTITION_GUARD {
        return Err(Error::SizeGuard {
            n: indices.len() / 2,
            limit: PARTITION_GUARD,
        });
    }
    fn rec(spec: &GaussianVectorSpec, idx: &mut Vec<usize>) -> f64 {
        if idx.is_empty() {
            return 1.0;
        }
        let first = idx.remove(0);
        let mut total = 0.0;
        for j in 0..idx.len() {
            let partner = idx.remove(j);
            total += spec.cov(first, partner) * rec(spec, idx);
            idx.insert(j, partner);
        }
        idx.insert(0, first);
        total
    }
    Ok(rec(spec, &mut indices.to_vec()))
}

/// Dense symmetric tensor of order `n` over `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTensor {
    order: usize,
    dim: usize,
    entries: Vec<f64>,
}

pub const MAX_ORDER: usize = 6;
pub const MAX_DIM: usize = 8;

impl SymmetricTensor {
    /// Builds from arbitrary entries and symmetrizes.
    pub fn from_fn<F: FnMut(&[usize]) -> f64>(order: usize, dim: usize, mut f: F) -> Result<Self> {
        if order > MAX_ORDER || dim > MAX_DIM || dim == 0 {
            return Err(invalid("tensor order must be <= 6 and dimension in 1..=8"));
        }
        let len = dim.pow(order as u32);
        let mut entries = Vec::with_capacity(len);
        let mut idx = vec![0; order];
        for flat in 0..len {
            unflatten(flat, dim, &mut idx);
            entries.push(f(&idx));
        }
        let mut t = SymmetricTensor { order, dim, entries };
        t.symmetrize();
        Ok(t)
    }

    pub fn scalar(c: f64) -> Self {
        SymmetricTensor {
            order: 0,
            dim: 1,
            entries: vec![c],
        }
    }

    /// Symmetrized tensor product of basis vectors `e_{i_1} ⊗ … ⊗ e_{i_n}`.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        let target = indices.to_vec();
        Self::from_fn(indices.len(), dim, |idx| if idx == target.as_slice() { 1.0 } else { 0.0 })
    }

    pub fn random<R: Rng + ?Sized>(order: usize, dim: usize, rng: &mut R) -> Self {
        Self::from_fn(order, dim, |_| rng.sample(StandardNormal)).expect("caller respects the size limits")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.entries[flatten(idx, self.dim)]
    }

    /// The value of an order-0 tensor.
    pub fn as_scalar(&self) -> Option<f64> {
        (self.order == 0).then(|| self.entries[0])
    }

    fn symmetrize(&mut self) {
        if self.order < 2 {
            return;
        }
        let mut groups: BTreeMap<Vec<usize>, (f64, usize)> = BTreeMap::new();
        let mut idx = vec![0; self.order];
        for flat in 0..self.entries.len() {
            unflatten(flat, self.dim, &mut idx);
            let mut key = idx.clone();
            key.sort_unstable();
            let slot = groups.entry(key).or_insert((0.0, 0));
            slot.0 += self.entries[flat];
            slot.1 += 1;
        }
        for flat in 0..self.entries.len() {
            unflatten(flat, self.dim, &mut idx);
            let mut key = idx.clone();
            key.sort_unstable();
            let (s, c) = groups[&key];
            self.entries[flat] = s / c as f64;
        }
    }

    /// Contracts the first slot with `w`.
    fn contract_vector(&self, w: &[f64]) -> SymmetricTensor {
        let m = self.dim;
        let rest = self.entries.len() / m;
        let entries = (0..rest)
            .map(|r| (0..m).map(|i| self.entries[i * rest + r] * w[i]).sum())
            .collect();
        SymmetricTensor {
            order: self.order - 1,
            dim: m,
            entries,
        }
    }

    /// Contracts the first two slots with the covariance.
    fn contract_cov(&self, spec: &GaussianVectorSpec) -> SymmetricTensor {
        let m = self.dim;
        let rest = self.entries.len() / (m * m);
        let entries = (0..rest)
            .map(|r| {
                let mut s = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        s += self.entries[(i * m + j) * rest + r] * spec.cov(i, j);
                    }
                }
                s
            })
            .collect();
        SymmetricTensor {
            order: self.order - 2,
            dim: m,
            entries,
        }
    }
}

fn flatten(idx: &[usize], dim: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

fn unflatten(mut flat: usize, dim: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
}

fn check_dims(f: &SymmetricTensor, m: usize) -> Result<()> {
    if f.order > 0 && f.dim != m {
        return Err(invalid("tensor dimension does not match the vector"));
    }
    Ok(())
}

/// Full contraction `Σ f_I w_{i_1} ⋯ w_{i_n}`.
pub fn strat_finite(f: &SymmetricTensor, w: &[f64]) -> Result<f64> {
    check_dims(f, w.len())?;
    let mut t = f.clone();
    while t.order > 0 {
        t = t.contract_vector(w);
    }
    Ok(t.entries[0])
}

/// `Tr^k f`: `k` index pairs contracted against the covariance.
pub fn trace_k(f: &SymmetricTensor, spec: &GaussianVectorSpec, k: usize) -> Result<SymmetricTensor> {
    check_dims(f, spec.dim())?;
    if 2 * k > f.order {
        return Err(invalid("trace order exceeds half the tensor order"));
    }
    let mut t = f.clone();
    for _ in 0..k {
        t = t.contract_cov(spec);
    }
    t.symmetrize();
    Ok(t)
}

/// Multiple Itô integral `I_n(f)`, the Wick polynomial `Σ f_I :w_{i_1}⋯w_{i_n}:`.
/// Uses `I_n(f) = I_{n−1}(f⌟w) − (n−1) I_{n−2}(Tr f)`.
pub fn ito_multiple(f: &SymmetricTensor, w: &[f64], spec: &GaussianVectorSpec) -> Result<f64> {
    check_dims(f, spec.dim())?;
    if w.len() != spec.dim() {
        return Err(invalid("sample length does not match the covariance"));
    }
    fn rec(f: &SymmetricTensor, w: &[f64], spec: &GaussianVectorSpec) -> f64 {
        match f.order {
            0 => f.entries[0],
            1 => f.entries.iter().zip(w).map(|(a, b)| a * b).sum(),
            n => rec(&f.contract_vector(w), w, spec) - (n - 1) as f64 * rec(&f.contract_cov(spec), w, spec),
        }
    }
    Ok(rec(f, w, spec))
}

/// `Σ_{I,J} f_I g_J ∏_l C_{i_l j_l}`, the covariance inner product.
pub fn covariance_inner(f: &SymmetricTensor, g: &SymmetricTensor, spec: &GaussianVectorSpec) -> Result<f64> {
    if f.order != g.order {
        return Err(invalid("inner product needs equal orders"));
    }
    check_dims(f, spec.dim())?;
    check_dims(g, spec.dim())?;
    let n = f.order;
    let m = spec.dim();
    let mut i = vec![0; n];
    let mut j = vec![0; n];
    let mut s = 0.0;
    for a in 0..f.entries.len() {
        unflatten(a, m, &mut i);
        for b in 0..g.entries.len() {
            unflatten(b, m, &mut j);
            let c: f64 = i.iter().zip(&j).map(|(&x, &y)| spec.cov(x, y)).product();
            s += f.entries[a] * g.entries[b] * c;
        }
    }
    Ok(s)
}

/// One term `coefficient · I_{n−2k}(Tr^k f)` of the Hu–Meyer expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct HuMeyerTerm {
    pub k: usize,
    pub tensor: SymmetricTensor,
    pub coefficient: f64,
}

/// `S_n(f) = Σ_{k ≤ n/2} n!/(2^k k! (n−2k)!) I_{n−2k}(Tr^k f)`.
pub fn hu_meyer(f: &SymmetricTensor, spec: &GaussianVectorSpec) -> Result<Vec<HuMeyerTerm>> {
    let n = f.order as u64;
    (0..=f.order / 2)
        .map(|k| {
            let kk = k as u64;
            let coefficient = factorial(n) / (libm::pow(2.0, k as f64) * factorial(kk) * factorial(n - 2 * kk));
            Ok(HuMeyerTerm {
                k,
                tensor: trace_k(f, spec, k)?,
                coefficient,
            })
        })
        .collect()
}

/// Evaluates the Hu–Meyer right-hand side at a sample.
pub fn hu_meyer_eval(terms: &[HuMeyerTerm], w: &[f64], spec: &GaussianVectorSpec) -> Result<f64> {
    let mut s = 0.0;
    for t in terms {
        s += t.coefficient * ito_multiple(&t.tensor, w, spec)?;
    }
    Ok(s)
}

/// Largest `|S_n(f)(w) − Σ coeff · I_{n−2k}(Tr^k f)(w)|` over `samples` draws.
pub fn hu_meyer_residual<R: Rng + ?Sized>(
    f: &SymmetricTensor,
    spec: &GaussianVectorSpec,
    samples: usize,
    rng: &mut R,
) -> Result<f64> {
    let terms = hu_meyer(f, spec)?;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let w = spec.sample(rng);
        let lhs = strat_finite(f, &w)?;
        let rhs = hu_meyer_eval(&terms, &w, spec)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Human-readable form `{(1,2),(3,4)}` with 1-based indices.
pub fn describe(p: &PairPartition) -> String {
    let body: Vec<String> = p.pairs.iter().map(|(a, b)| alloc::format!("({},{})", a + 1, b + 1)).collect();
    alloc::format!("{{{}}}", body.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::stream;

    #[test]
    fn enumeration() {
        let one: Vec<_> = pair_partitions(1).unwrap().collect();
        assert_eq!(one, vec![PairPartition { pairs: vec![(0, 1)] }]);
        let two: Vec<String> = pair_partitions(2).unwrap().map(|p| describe(&p)).collect();
        assert_eq!(two, ["{(1,2),(3,4)}", "{(1,3),(2,4)}", "{(1,4),(2,3)}"]);
        for n in 1..=6 {
            assert_eq!(pair_partitions(n).unwrap().count() as u128, double_factorial_odd(n as u64));
        }
        assert_eq!(pair_partitions(0).unwrap().count(), 1);
        assert!(matches!(pair_partitions(9), Err(Error::SizeGuard { n: 9, limit: 8 })));
    }

    #[test]
    fn partitions_are_valid_and_distinct() {
        let all: Vec<_> = pair_partitions(4).unwrap().collect();
        for p in &all {
            let mut seen = [false; 8];
            for &(a, b) in &p.pairs {
                assert!(a < b);
                assert!(!seen[a] && !seen[b]);
                seen[a] = true;
                seen[b] = true;
            }
            assert!(p.pairs.windows(2).all(|w| w[0].0 < w[1].0));
        }
        let unique: alloc::collections::BTreeSet<_> = all.iter().map(|p| p.pairs.clone()).collect();
        assert_eq!(unique.len(), 105);
    }

    #[test]
    fn moments() {
        let spec = GaussianVectorSpec::new(&[vec![1.0, 0.3], vec![0.3, 2.0]]).unwrap();
        assert_eq!(isserlis_moment(&spec, &[0, 1, 1]).unwrap(), 0.0);
        assert_eq!(isserlis_moment(&spec, &[0, 1]).unwrap(), 0.3);
        assert_eq!(isserlis_moment(&spec, &[0, 0, 0, 0]).unwrap(), 3.0);
        // E g1² g2² = C11 C22 + 2 C12²
        assert!((isserlis_moment(&spec, &[0, 0, 1, 1]).unwrap() - 2.18).abs() < 1e-15);
        assert_eq!(wick_even_moment_factor(1), 1);
        assert_eq!(wick_even_moment_factor(2), 3);
        assert_eq!(wick_even_moment_factor(5), 945);
        assert!(GaussianVectorSpec::new(&[vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
        assert!(GaussianVectorSpec::new(&[vec![1.0, 0.5], vec![0.4, 1.0]]).is_err());
    }

    #[test]
    fn finite_calculus() {
        let spec = GaussianVectorSpec::new(&[vec![1.5, 0.4], vec![0.4, 1.0]]).unwrap();
        let e1 = SymmetricTensor::basis(2, &[0]).unwrap();
        assert_eq!(strat_finite(&e1, &[2.0, 5.0]).unwrap(), 2.0);
        let e11 = SymmetricTensor::basis(2, &[0, 0]).unwrap();
        assert_eq!(strat_finite(&e11, &[3.0, 0.0]).unwrap(), 9.0);
        let e12 = SymmetricTensor::basis(2, &[0, 1]).unwrap();
        assert_eq!(strat_finite(&e12, &[1.0, 2.0]).unwrap(), 2.0);
        assert_eq!(trace_k(&e11, &spec, 0).unwrap(), e11);
        assert_eq!(trace_k(&e11, &spec, 1).unwrap().as_scalar(), Some(1.5));
        assert!((trace_k(&e12, &spec, 1).unwrap().as_scalar().unwrap() - 0.4).abs() < 1e-15);
        let w = [0.7, -1.2];
        assert_eq!(ito_multiple(&e1, &w, &spec).unwrap(), 0.7);
        assert!((ito_multiple(&e11, &w, &spec).unwrap() - (0.49 - 1.5)).abs() < 1e-15);
        let unit = GaussianVectorSpec::identity(1);
        let e111 = SymmetricTensor::basis(1, &[0, 0, 0]).unwrap();
        let x: f64 = 1.3;
        assert!((ito_multiple(&e111, &[x], &unit).unwrap() - (x * x * x - 3.0 * x)).abs() < 1e-14);
    }

    #[test]
    fn hu_meyer_coefficients_and_identity() {
        let mut rng = stream(3, 0);
        let spec = GaussianVectorSpec::random(3, &mut rng);
        let f4 = SymmetricTensor::random(4, 3, &mut rng);
        let coeffs: Vec<f64> = hu_meyer(&f4, &spec).unwrap().iter().map(|t| t.coefficient).collect();
        assert_eq!(coeffs, vec![1.0, 6.0, 3.0]);
        let f1 = SymmetricTensor::random(1, 3, &mut rng);
        let terms = hu_meyer(&f1, &spec).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].tensor, f1);
        for n in 0..=4 {
            let f = SymmetricTensor::random(n, 3, &mut rng);
            let scale = 1.0 + f.entries.iter().map(|x| x.abs()).sum::<f64>();
            assert!(hu_meyer_residual(&f, &spec, 20, &mut rng).unwrap() < 1e-12 * scale * 100.0);
        }
    }

    #[test]
    fn ito_second_moment_by_isserlis() {
        // E[I_3(e1⊗e1⊗e1) · w1³] = 3! for unit variance
        // I_3 = w³ − 3w, so E = E w⁶ − 3 E w⁴ = 15 − 9 = 6
        let unit = GaussianVectorSpec::identity(1);
        let m6 = isserlis_moment(&unit, &[0; 6]).unwrap();
        let m4 = isserlis_moment(&unit, &[0; 4]).unwrap();
        assert_eq!(m6 - 3.0 * m4, 6.0);
    }
}
