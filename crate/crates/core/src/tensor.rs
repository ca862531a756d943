//! Chart-level numerical primitives: points, tangent vectors, small dense
//! multi-index arrays, finite differencing of smooth coordinate functions,
//! and metric orthonormalization of frames.
//!
//! Everything here is a pure function of its inputs; values are immutable
//! once built.

use crate::error::{GeomError, Result};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A point of a single coordinate chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    pub coords: Vec<f64>,
}

impl ChartPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        ChartPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The point shifted by `delta` along coordinate `i`.
    pub fn shifted(&self, i: usize, delta: f64) -> ChartPoint {
        let mut c = self.coords.clone();
        c[i] += delta;
        ChartPoint { coords: c }
    }

    /// The point shifted by `t` times the direction vector `dir`.
    pub fn shifted_along(&self, dir: &[f64], t: f64) -> ChartPoint {
        let c = self
            .coords
            .iter()
            .zip(dir)
            .map(|(x, d)| x + t * d)
            .collect();
        ChartPoint { coords: c }
    }
}

/// A tangent vector attached to a chart point, in chart components.
#[derive(Debug, Clone)]
pub struct TangentVector {
    pub base: ChartPoint,
    pub components: Vec<f64>,
}

impl TangentVector {
    pub fn new(base: ChartPoint, components: Vec<f64>) -> Self {
        debug_assert_eq!(base.dim(), components.len());
        TangentVector { base, components }
    }

    /// The i-th coordinate vector at `base`.
    pub fn coordinate(base: &ChartPoint, i: usize) -> Self {
        let mut c = vec![0.0; base.dim()];
        c[i] = 1.0;
        TangentVector::new(base.clone(), c)
    }
}

/// Dense row-major multi-index array of reals. Used for metric components,
/// difference tensors, connection coefficients and curvature components.
///
/// Index conventions used throughout the crate:
/// - metric: shape `[n, n]`, `g[(i, j)]`;
/// - connection / difference tensor: shape `[n, n, n]`, entry `[k, i, j]`
///   is the component of `∇_{∂i} ∂j` (resp. `K(∂i, ∂j)`) along `∂k`;
/// - curvature: shape `[n, n, n, n]`, entry `[l, i, j, k]` is the component
///   of `R(∂i, ∂j)∂k` along `∂l`; lowered curvature stores
///   `g(R(∂i, ∂j)∂k, ∂l)` at `[i, j, k, l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiArray {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl MultiArray {
    pub fn zeros(shape: &[usize]) -> Self {
        let len = shape.iter().product();
        MultiArray {
            shape: shape.to_vec(),
            data: vec![0.0; len],
        }
    }

    pub fn from_vec(shape: &[usize], data: Vec<f64>) -> Self {
        assert_eq!(shape.iter().product::<usize>(), data.len());
        MultiArray {
            shape: shape.to_vec(),
            data,
        }
    }

    pub fn from_fn(shape: &[usize], mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut a = MultiArray::zeros(shape);
        let mut idx = vec![0usize; shape.len()];
        for flat in 0..a.data.len() {
            a.unflatten(flat, &mut idx);
            a.data[flat] = f(&idx);
        }
        a
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn flatten(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut flat = 0;
        for (i, &k) in idx.iter().enumerate() {
            debug_assert!(k < self.shape[i]);
            flat = flat * self.shape[i] + k;
        }
        flat
    }

    fn unflatten(&self, mut flat: usize, idx: &mut [usize]) {
        for i in (0..self.shape.len()).rev() {
            idx[i] = flat % self.shape[i];
            flat /= self.shape[i];
        }
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.flatten(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let k = self.flatten(idx);
        self.data[k] = v;
    }

    pub fn add_to(&mut self, idx: &[usize], v: f64) {
        let k = self.flatten(idx);
        self.data[k] += v;
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute entry of the componentwise difference.
    pub fn max_abs_diff(&self, other: &MultiArray) -> f64 {
        assert_eq!(self.shape, other.shape);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Max residual of symmetry under swapping index positions `a` and `b`.
    pub fn symmetry_residual(&self, a: usize, b: usize) -> f64 {
        let mut idx = vec![0usize; self.shape.len()];
        let mut worst: f64 = 0.0;
        for flat in 0..self.data.len() {
            self.unflatten(flat, &mut idx);
            let mut swapped = idx.clone();
            swapped.swap(a, b);
            worst = worst.max((self.get(&idx) - self.get(&swapped)).abs());
        }
        worst
    }

    /// Max residual of antisymmetry under swapping index positions `a`, `b`.
    pub fn antisymmetry_residual(&self, a: usize, b: usize) -> f64 {
        let mut idx = vec![0usize; self.shape.len()];
        let mut worst: f64 = 0.0;
        for flat in 0..self.data.len() {
            self.unflatten(flat, &mut idx);
            let mut swapped = idx.clone();
            swapped.swap(a, b);
            worst = worst.max((self.get(&idx) + self.get(&swapped)).abs());
        }
        worst
    }

    /// View a `[n, n]` array as a nalgebra matrix.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        assert_eq!(self.shape.len(), 2);
        let (r, c) = (self.shape[0], self.shape[1]);
        DMatrix::from_fn(r, c, |i, j| self.get(&[i, j]))
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        MultiArray::from_fn(&[m.nrows(), m.ncols()], |idx| m[(idx[0], idx[1])])
    }

    /// Apply a `[n, n]` array (one index up, one down) to a vector.
    pub fn apply_matrix(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.shape.len(), 2);
        let n = self.shape[0];
        (0..n)
            .map(|i| (0..n).map(|j| self.get(&[i, j]) * v[j]).sum())
            .collect()
    }
}

/// Inner product of chart-component vectors under a metric array.
pub fn inner(g: &MultiArray, u: &[f64], v: &[f64]) -> f64 {
    let n = g.shape()[0];
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += g.get(&[i, j]) * u[i] * v[j];
        }
    }
    s
}

pub fn norm(g: &MultiArray, u: &[f64]) -> f64 {
    inner(g, u, u).max(0.0).sqrt()
}

/// List of tangent vectors at a shared base point.
#[derive(Debug, Clone)]
pub struct Frame {
    pub vectors: Vec<TangentVector>,
    pub orthonormal: bool,
}

impl Frame {
    pub fn new(vectors: Vec<TangentVector>, orthonormal: bool) -> Self {
        debug_assert!(vectors.windows(2).all(|w| w[0].base == w[1].base));
        Frame {
            vectors,
            orthonormal,
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn base(&self) -> &ChartPoint {
        &self.vectors[0].base
    }

    pub fn components(&self, i: usize) -> &[f64] {
        &self.vectors[i].components
    }

    /// Max deviation of the pairwise g-inner products from the identity.
    pub fn orthonormality_residual(&self, g: &MultiArray) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            for j in 0..self.len() {
                let target = if i == j { 1.0 } else { 0.0 };
                let ip = inner(g, self.components(i), self.components(j));
                worst = worst.max((ip - target).abs());
            }
        }
        worst
    }
}

/// Finite-difference step schedule. Catalog manifolds with closed-form
/// metrics use the default schedule; induced submanifold metrics, whose
/// evaluation is itself FD-composed and therefore noisier, use `coarse()`.
#[derive(Debug, Clone, Copy)]
pub struct FdSteps {
    /// Relative step for first derivatives of fields: h = metric_rel * max(1, |x|).
    pub metric_rel: f64,
    /// Metric step used when evaluating connection coefficients inside a
    /// curvature stencil (decorrelated from `conn_outer_rel`).
    pub conn_inner_rel: f64,
    /// Step for differentiating connection coefficients.
    pub conn_outer_rel: f64,
    /// Step for differentiating operator fields (third-level FD).
    pub operator_outer: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        FdSteps {
            metric_rel: 1e-5,
            conn_inner_rel: 2.5e-4,
            conn_outer_rel: 1e-4,
            operator_outer: 5e-2,
        }
    }
}

impl FdSteps {
    /// Schedule for metrics that are themselves finite-difference composites.
    pub fn coarse() -> Self {
        FdSteps {
            metric_rel: 1e-3,
            conn_inner_rel: 1e-3,
            conn_outer_rel: 1.6e-3,
            operator_outer: 5e-2,
        }
    }

    pub fn step(rel: f64, coord: f64) -> f64 {
        rel * coord.abs().max(1.0)
    }
}

/// Central-difference estimate of `∂f/∂x^i` at `p` with one Richardson
/// refinement; truncation error O(step^4). Errors if a stencil point leaves
/// the domain predicate.
pub fn fd_derivative(
    f: impl Fn(&ChartPoint) -> f64,
    domain: impl Fn(&ChartPoint) -> bool,
    p: &ChartPoint,
    i: usize,
    step: f64,
) -> Result<f64> {
    let offsets = [step, -step, step / 2.0, -step / 2.0];
    let mut vals = [0.0; 4];
    for (k, off) in offsets.iter().enumerate() {
        let q = p.shifted(i, *off);
        if !domain(&q) {
            return Err(GeomError::DomainViolation {
                coords: q.coords,
                context: format!("derivative stencil along coordinate {i}"),
            });
        }
        vals[k] = f(&q);
    }
    let d_h = (vals[0] - vals[1]) / (2.0 * step);
    let d_h2 = (vals[2] - vals[3]) / step;
    Ok((4.0 * d_h2 - d_h) / 3.0)
}

/// Directional derivative of a vector-valued field along `dir`, central
/// difference with one Richardson refinement.
pub fn fd_directional_vec(
    f: impl Fn(&ChartPoint) -> Result<Vec<f64>>,
    p: &ChartPoint,
    dir: &[f64],
    step: f64,
) -> Result<Vec<f64>> {
    let vp = f(&p.shifted_along(dir, step))?;
    let vm = f(&p.shifted_along(dir, -step))?;
    let vp2 = f(&p.shifted_along(dir, step / 2.0))?;
    let vm2 = f(&p.shifted_along(dir, -step / 2.0))?;
    Ok((0..vp.len())
        .map(|a| {
            let d_h = (vp[a] - vm[a]) / (2.0 * step);
            let d_h2 = (vp2[a] - vm2[a]) / step;
            (4.0 * d_h2 - d_h) / 3.0
        })
        .collect())
}

/// Second partial `∂_i ∂_j f` by nested first differences with decorrelated
/// steps (outer `step_i`, inner `step_j`).
pub fn fd_second(
    f: impl Fn(&ChartPoint) -> f64 + Copy,
    domain: impl Fn(&ChartPoint) -> bool + Copy,
    p: &ChartPoint,
    i: usize,
    j: usize,
    step_i: f64,
    step_j: f64,
) -> Result<f64> {
    fd_derivative(
        |q| fd_derivative(f, |_| true, q, j, step_j).expect("inner stencil"),
        domain,
        p,
        i,
        step_i,
    )
}

const PIVOT_REL_TOL: f64 = 1e-8;

/// Gram-Schmidt orthonormalization under the inner product `g_at_p`.
/// The output spans the same subspace and its first vector stays parallel
/// to the input first vector. Errors on rank deficiency.
pub fn gram_schmidt(vs: &Frame, g_at_p: &MultiArray) -> Result<Frame> {
    let (frame, _) = gram_schmidt_with_coeffs(vs, g_at_p)?;
    Ok(frame)
}

/// Gram-Schmidt that also returns the coefficient rows expressing each
/// output vector in terms of the input vectors.
pub fn gram_schmidt_with_coeffs(vs: &Frame, g_at_p: &MultiArray) -> Result<(Frame, Vec<Vec<f64>>)> {
    let base = vs.base().clone();
    let m = vs.len();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (k, v) in vs.vectors.iter().enumerate() {
        let mut w = v.components.clone();
        let mut c = vec![0.0; m];
        c[k] = 1.0;
        for (e, ce) in out.iter().zip(&coeffs) {
            let proj = inner(g_at_p, &w, e);
            for (wa, ea) in w.iter_mut().zip(e) {
                *wa -= proj * ea;
            }
            for (ca, cea) in c.iter_mut().zip(ce) {
                *ca -= proj * cea;
            }
        }
        let original = norm(g_at_p, &v.components);
        let pivot = norm(g_at_p, &w);
        if pivot <= PIVOT_REL_TOL * original.max(1.0) {
            return Err(GeomError::DegenerateFrame { index: k, pivot });
        }
        for wa in w.iter_mut() {
            *wa /= pivot;
        }
        for ca in c.iter_mut() {
            *ca /= pivot;
        }
        out.push(w);
        coeffs.push(c);
    }
    let vectors = out
        .into_iter()
        .map(|c| TangentVector::new(base.clone(), c))
        .collect();
    Ok((Frame::new(vectors, true), coeffs))
}

/// Greedy variant: orthonormalizes the candidates that survive the pivot
/// test and silently drops dependent ones. Used to adapt a frame so that a
/// prescribed vector comes first.
pub fn orthonormal_span(candidates: &[TangentVector], g_at_p: &MultiArray) -> Frame {
    let base = candidates[0].base.clone();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in candidates {
        let mut w = v.components.clone();
        for e in &out {
            let proj = inner(g_at_p, &w, e);
            for (wa, ea) in w.iter_mut().zip(e) {
                *wa -= proj * ea;
            }
        }
        let original = norm(g_at_p, &v.components);
        let pivot = norm(g_at_p, &w);
        if pivot > PIVOT_REL_TOL * original.max(1.0) {
            for wa in w.iter_mut() {
                *wa /= pivot;
            }
            out.push(w);
        }
    }
    let vectors = out
        .into_iter()
        .map(|c| TangentVector::new(base.clone(), c))
        .collect();
    Frame::new(vectors, true)
}

/// Completes `e1` to a full g-orthonormal frame with first vector
/// `e1/||e1||`. Deterministic for a fixed seed: the remaining vectors come
/// from a seeded splittable generator and Gram-Schmidt.
pub fn complete_frame(e1: &TangentVector, g_at_p: &MultiArray, seed: u64) -> Result<Frame> {
    let n = e1.base.dim();
    let n1 = norm(g_at_p, &e1.components);
    if n1 <= 1e-14 {
        return Err(GeomError::DegenerateFrame {
            index: 0,
            pivot: n1,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = vec![e1.clone()];
    // Random draws are almost surely independent; a few spares cover the
    // unlucky pivots.
    for _ in 0..(4 * n + 8) {
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        candidates.push(TangentVector::new(e1.base.clone(), c));
    }
    let frame = orthonormal_span(&candidates, g_at_p);
    if frame.len() < n {
        return Err(GeomError::DegenerateFrame {
            index: frame.len(),
            pivot: 0.0,
        });
    }
    Ok(Frame::new(frame.vectors[..n].to_vec(), true))
}

/// FNV-1a hash of a label mixed with a base seed; used to derive stable
/// per-check sub-seeds without relying on std's unstable hasher.
pub fn subseed(base: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325 ^ base.wrapping_mul(0x9e3779b97f4a7c15);
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
