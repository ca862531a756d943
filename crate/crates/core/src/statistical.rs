//! Statistical structures: a manifold specified by a metric field and a
//! difference tensor field, the Levi-Civita and dual connections built from
//! them, and numerical checks of the defining axioms.
//!
//! The construction goes through the difference tensor: the primal
//! connection is Γ = Γ_g + K and the dual is Γ* = Γ_g − K, so duality and
//! torsion-freeness hold by construction up to finite-difference error, and
//! the axioms reduce to the two symmetry properties of K.

use crate::error::{GeomError, Result};
use crate::tensor::{inner, ChartPoint, FdSteps, Frame, MultiArray, TangentVector};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub type FieldFn = Arc<dyn Fn(&ChartPoint) -> MultiArray + Send + Sync>;
pub type DomainFn = Arc<dyn Fn(&ChartPoint) -> bool + Send + Sync>;

/// Symmetric positive definite metric field on a chart.
#[derive(Clone)]
pub struct MetricField {
    pub dim: usize,
    eval: FieldFn,
}

impl MetricField {
    pub fn new(dim: usize, eval: FieldFn) -> Self {
        MetricField { dim, eval }
    }

    pub fn at(&self, p: &ChartPoint) -> MultiArray {
        (self.eval)(p)
    }
}

/// Difference tensor field K with one upper index: entry `[k, i, j]` is the
/// component of `K(∂i, ∂j)` along `∂k`. Admissibility (lower-index symmetry
/// and g-self-adjointness) is checked numerically, not assumed.
#[derive(Clone)]
pub struct DifferenceTensorField {
    pub dim: usize,
    eval: FieldFn,
}

impl DifferenceTensorField {
    pub fn new(dim: usize, eval: FieldFn) -> Self {
        DifferenceTensorField { dim, eval }
    }

    pub fn zero(dim: usize) -> Self {
        DifferenceTensorField {
            dim,
            eval: Arc::new(move |_| MultiArray::zeros(&[dim, dim, dim])),
        }
    }

    pub fn at(&self, p: &ChartPoint) -> MultiArray {
        (self.eval)(p)
    }
}

/// Which affine connection to use in a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connection {
    /// Γ = Γ_g + K
    Statistical,
    /// Γ* = Γ_g − K
    Dual,
    /// Γ_g
    LeviCivita,
}

/// A chart-level statistical manifold (g, K) with a domain predicate and a
/// sampling box for seeded point draws.
#[derive(Clone)]
pub struct StatisticalManifold {
    pub dim: usize,
    pub metric: MetricField,
    pub ktensor: DifferenceTensorField,
    pub domain: DomainFn,
    pub name: String,
    pub sample_box: Vec<(f64, f64)>,
    pub steps: FdSteps,
}

/// Residuals reported by `check_statistical`.
#[derive(Debug, Clone, Copy)]
pub struct StatisticalResiduals {
    /// |Z g(X,Y) − g(∇_Z X, Y) − g(X, ∇*_Z Y)| over frame triples.
    pub duality: f64,
    /// |(∇_X g)(Y,Z) − (∇_Y g)(X,Z)| over frame triples.
    pub codazzi: f64,
    /// max |K(X,Y) − K(Y,X)| components.
    pub k_symmetry: f64,
    /// |g(K(X,Y),Z) − g(Y, K(X,Z))| over frame triples.
    pub k_self_adjoint: f64,
}

impl StatisticalResiduals {
    pub fn max(&self) -> f64 {
        self.duality
            .max(self.codazzi)
            .max(self.k_symmetry)
            .max(self.k_self_adjoint)
    }
}

impl StatisticalManifold {
    pub fn new(
        dim: usize,
        metric: MetricField,
        ktensor: DifferenceTensorField,
        domain: DomainFn,
        name: impl Into<String>,
        sample_box: Vec<(f64, f64)>,
    ) -> Self {
        StatisticalManifold {
            dim,
            metric,
            ktensor,
            domain,
            name: name.into(),
            sample_box,
            steps: FdSteps::default(),
        }
    }

    pub fn with_steps(mut self, steps: FdSteps) -> Self {
        self.steps = steps;
        self
    }

    /// Flat space with zero difference tensor on the box [-1, 1]^n.
    pub fn euclidean(n: usize) -> Self {
        let metric = MetricField::new(
            n,
            Arc::new(move |_| {
                MultiArray::from_fn(&[n, n], |idx| if idx[0] == idx[1] { 1.0 } else { 0.0 })
            }),
        );
        StatisticalManifold::new(
            n,
            metric,
            DifferenceTensorField::zero(n),
            Arc::new(|_| true),
            format!("euclidean({n})"),
            vec![(-1.0, 1.0); n],
        )
    }

    pub fn contains(&self, p: &ChartPoint) -> bool {
        p.dim() == self.dim && (self.domain)(p)
    }

    pub fn metric_at(&self, p: &ChartPoint) -> Result<MultiArray> {
        if !self.contains(p) {
            return Err(GeomError::DomainViolation {
                coords: p.coords.clone(),
                context: format!("metric of {}", self.name),
            });
        }
        Ok(self.metric.at(p))
    }

    pub fn metric_inverse_at(&self, p: &ChartPoint) -> Result<DMatrix<f64>> {
        let g = self.metric_at(p)?.to_matrix();
        g.try_inverse().ok_or(GeomError::SingularMetric {
            coords: p.coords.clone(),
        })
    }

    /// Partial derivative of every metric component along coordinate `k`.
    pub fn metric_derivative(&self, p: &ChartPoint, k: usize, rel_step: f64) -> Result<MultiArray> {
        let n = self.dim;
        let step = FdSteps::step(rel_step, p.coords[k]);
        let domain = self.domain.clone();
        let metric = self.metric.clone();
        // One metric evaluation per stencil point serves all components.
        let offsets = [step, -step, step / 2.0, -step / 2.0];
        let mut mats = Vec::with_capacity(4);
        for off in offsets {
            let q = p.shifted(k, off);
            if !(domain)(&q) {
                return Err(GeomError::DomainViolation {
                    coords: q.coords,
                    context: format!("metric derivative stencil along {k}"),
                });
            }
            mats.push(metric.at(&q));
        }
        Ok(MultiArray::from_fn(&[n, n], |idx| {
            let d_h = (mats[0].get(idx) - mats[1].get(idx)) / (2.0 * step);
            let d_h2 = (mats[2].get(idx) - mats[3].get(idx)) / step;
            (4.0 * d_h2 - d_h) / 3.0
        }))
    }

    /// Christoffel symbols of the Levi-Civita connection by the Koszul
    /// formula, with metric derivatives taken at the default first-derivative
    /// step of this manifold's schedule.
    pub fn levi_civita_christoffels(&self, p: &ChartPoint) -> Result<MultiArray> {
        self.levi_civita_with_step(p, self.steps.metric_rel)
    }

    pub fn levi_civita_with_step(&self, p: &ChartPoint, rel_step: f64) -> Result<MultiArray> {
        let n = self.dim;
        let ginv = self.metric_inverse_at(p)?;
        let dgs: Vec<MultiArray> = (0..n)
            .map(|k| self.metric_derivative(p, k, rel_step))
            .collect::<Result<_>>()?;
        let mut gamma = MultiArray::zeros(&[n, n, n]);
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let mut v = 0.0;
                    for l in 0..n {
                        let term =
                            dgs[i].get(&[j, l]) + dgs[j].get(&[i, l]) - dgs[l].get(&[i, j]);
                        v += 0.5 * ginv[(k, l)] * term;
                    }
                    gamma.set(&[k, i, j], v);
                    gamma.set(&[k, j, i], v);
                }
            }
        }
        Ok(gamma)
    }

    /// (Γ, Γ*) = (Γ_g + K, Γ_g − K). Their average is Γ_g by construction.
    pub fn dual_christoffels(&self, p: &ChartPoint) -> Result<(MultiArray, MultiArray)> {
        self.dual_christoffels_with_step(p, self.steps.metric_rel)
    }

    pub fn dual_christoffels_with_step(
        &self,
        p: &ChartPoint,
        rel_step: f64,
    ) -> Result<(MultiArray, MultiArray)> {
        let lc = self.levi_civita_with_step(p, rel_step)?;
        let k = self.ktensor.at(p);
        let n = self.dim;
        let mut gamma = MultiArray::zeros(&[n, n, n]);
        let mut gamma_star = MultiArray::zeros(&[n, n, n]);
        for a in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let idx = [a, i, j];
                    gamma.set(&idx, lc.get(&idx) + k.get(&idx));
                    gamma_star.set(&idx, lc.get(&idx) - k.get(&idx));
                }
            }
        }
        Ok((gamma, gamma_star))
    }

    /// Coefficients of the selected connection.
    pub fn christoffels(&self, conn: Connection, p: &ChartPoint) -> Result<MultiArray> {
        self.christoffels_with_step(conn, p, self.steps.metric_rel)
    }

    pub fn christoffels_with_step(
        &self,
        conn: Connection,
        p: &ChartPoint,
        rel_step: f64,
    ) -> Result<MultiArray> {
        match conn {
            Connection::LeviCivita => self.levi_civita_with_step(p, rel_step),
            Connection::Statistical => Ok(self.dual_christoffels_with_step(p, rel_step)?.0),
            Connection::Dual => Ok(self.dual_christoffels_with_step(p, rel_step)?.1),
        }
    }

    /// Residuals of the statistical-structure axioms at `p`, maximized over
    /// triples drawn from `frame` (components held frozen off the point).
    pub fn check_statistical(&self, p: &ChartPoint, frame: &Frame) -> Result<StatisticalResiduals> {
        let n = self.dim;
        let g = self.metric_at(p)?;
        let (gamma, gamma_star) = self.dual_christoffels(p)?;
        let k = self.ktensor.at(p);
        let dgs: Vec<MultiArray> = (0..n)
            .map(|kk| self.metric_derivative(p, kk, self.steps.metric_rel))
            .collect::<Result<_>>()?;

        let apply = |t: &MultiArray, u: &[f64], v: &[f64]| -> Vec<f64> {
            (0..n)
                .map(|a| {
                    let mut s = 0.0;
                    for i in 0..n {
                        for j in 0..n {
                            s += t.get(&[a, i, j]) * u[i] * v[j];
                        }
                    }
                    s
                })
                .collect()
        };
        // Z g(X, Y) for frozen-component fields X, Y.
        let dir_metric = |z: &[f64], x: &[f64], y: &[f64]| -> f64 {
            let mut s = 0.0;
            for kk in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        s += z[kk] * dgs[kk].get(&[i, j]) * x[i] * y[j];
                    }
                }
            }
            s
        };
        let nabla_g = |x: &[f64], y: &[f64], z: &[f64]| -> f64 {
            dir_metric(x, y, z)
                - inner(&g, &apply(&gamma, x, y), z)
                - inner(&g, y, &apply(&gamma, x, z))
        };

        let mut res = StatisticalResiduals {
            duality: 0.0,
            codazzi: 0.0,
            k_symmetry: 0.0,
            k_self_adjoint: 0.0,
        };
        for a in 0..frame.len() {
            for b in 0..frame.len() {
                let x = frame.components(a);
                let y = frame.components(b);
                let ksym = apply(&k, x, y)
                    .iter()
                    .zip(apply(&k, y, x))
                    .fold(0.0f64, |m, (p1, p2)| m.max((p1 - p2).abs()));
                res.k_symmetry = res.k_symmetry.max(ksym);
                for c in 0..frame.len() {
                    let z = frame.components(c);
                    let dual = dir_metric(z, x, y)
                        - inner(&g, &apply(&gamma, z, x), y)
                        - inner(&g, x, &apply(&gamma_star, z, y));
                    res.duality = res.duality.max(dual.abs());

                    let codazzi = nabla_g(x, y, z) - nabla_g(y, x, z);
                    res.codazzi = res.codazzi.max(codazzi.abs());

                    let sa = inner(&g, &apply(&k, x, y), z) - inner(&g, y, &apply(&k, x, z));
                    res.k_self_adjoint = res.k_self_adjoint.max(sa.abs());
                }
            }
        }
        Ok(res)
    }

    /// Builds the dual of the dual connection through the duality identity
    /// and returns the max component deviation from the primal connection.
    pub fn conjugate_involution_check(&self, p: &ChartPoint) -> Result<f64> {
        let n = self.dim;
        let ginv = self.metric_inverse_at(p)?;
        let (gamma, gamma_star) = self.dual_christoffels(p)?;
        let dgs: Vec<MultiArray> = (0..n)
            .map(|kk| self.metric_derivative(p, kk, self.steps.metric_rel))
            .collect::<Result<_>>()?;
        let g = self.metric_at(p)?;
        // g(∇**_Z X, Y) = Z g(X,Y) − g(X, ∇*_Z Y); solve for the coefficients.
        let mut worst: f64 = 0.0;
        for kk in 0..n {
            for i in 0..n {
                // rhs_j = ∂_k g_ij − Σ_m Γ*^m_{kj} g_im
                let rhs: Vec<f64> = (0..n)
                    .map(|j| {
                        let mut v = dgs[kk].get(&[i, j]);
                        for m in 0..n {
                            v -= gamma_star.get(&[m, kk, j]) * g.get(&[i, m]);
                        }
                        v
                    })
                    .collect();
                for m in 0..n {
                    let mut coeff = 0.0;
                    for j in 0..n {
                        coeff += ginv[(m, j)] * rhs[j];
                    }
                    worst = worst.max((coeff - gamma.get(&[m, kk, i])).abs());
                }
            }
        }
        Ok(worst)
    }

    /// Seeded rejection sampling inside the manifold's box intersected with
    /// its domain predicate.
    pub fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<ChartPoint>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::with_capacity(count);
        let mut attempts = 0usize;
        let max_attempts = 1000 * count.max(1);
        while pts.len() < count && attempts < max_attempts {
            attempts += 1;
            let coords: Vec<f64> = self
                .sample_box
                .iter()
                .map(|&(lo, hi)| rng.gen_range(lo..hi))
                .collect();
            let p = ChartPoint::new(coords);
            if (self.domain)(&p) {
                pts.push(p);
            }
        }
        if pts.len() < count {
            return Err(GeomError::SamplingExhausted {
                requested: count,
                found: pts.len(),
            });
        }
        Ok(pts)
    }

    /// A random tangent vector at `p` with components in (-1, 1).
    pub fn sample_vector(&self, p: &ChartPoint, rng: &mut ChaCha8Rng) -> TangentVector {
        let c: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        TangentVector::new(p.clone(), c)
    }

    /// Max deviation of the fully lowered difference tensor from total
    /// symmetry (equivalent restatement of the two K axioms).
    pub fn lowered_k_symmetry_residual(&self, p: &ChartPoint) -> Result<f64> {
        let g = self.metric_at(p)?;
        let k = self.ktensor.at(p);
        let n = self.dim;
        let lowered = MultiArray::from_fn(&[n, n, n], |idx| {
            let mut s = 0.0;
            for m in 0..n {
                s += g.get(&[idx[0], m]) * k.get(&[m, idx[1], idx[2]]);
            }
            s
        });
        let r1 = lowered.symmetry_residual(0, 1);
        let r2 = lowered.symmetry_residual(1, 2);
        Ok(r1.max(r2))
    }

    /// Random smooth SPD metric plus an admissible difference tensor (fully
    /// symmetric lowered array with one index raised by the inverse metric).
    /// Used by property tests and the axioms suite.
    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a0 = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
        let slopes: Vec<DMatrix<f64>> = (0..dim)
            .map(|_| DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-0.1..0.1)))
            .collect();
        let mut c_low = MultiArray::zeros(&[dim, dim, dim]);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    c_low.set(&[i, j, k], rng.gen_range(-0.5..0.5));
                }
            }
        }
        let c_sym = symmetrize3(&c_low);

        let metric_fn = {
            let a0 = a0.clone();
            let slopes = slopes.clone();
            move |p: &ChartPoint| -> DMatrix<f64> {
                let mut a = a0.clone();
                for (i, s) in slopes.iter().enumerate() {
                    a += s * p.coords[i];
                }
                &a.transpose() * &a + DMatrix::identity(dim, dim) * 0.5
            }
        };
        let metric = MetricField::new(dim, {
            let metric_fn = metric_fn.clone();
            Arc::new(move |p| MultiArray::from_matrix(&metric_fn(p)))
        });
        let ktensor = DifferenceTensorField::new(dim, {
            let metric_fn = metric_fn.clone();
            Arc::new(move |p| {
                let ginv = metric_fn(p).try_inverse().expect("SPD by construction");
                MultiArray::from_fn(&[dim, dim, dim], |idx| {
                    let mut s = 0.0;
                    for l in 0..dim {
                        s += ginv[(idx[0], l)] * c_sym.get(&[l, idx[1], idx[2]]);
                    }
                    s
                })
            })
        });
        StatisticalManifold::new(
            dim,
            metric,
            ktensor,
            Arc::new(|_| true),
            format!("random({dim},{seed})"),
            vec![(-0.5, 0.5); dim],
        )
    }
}

/// Full symmetrization of a 3-index array.
pub fn symmetrize3(t: &MultiArray) -> MultiArray {
    let n = t.shape()[0];
    MultiArray::from_fn(&[n, n, n], |idx| {
        let (a, b, c) = (idx[0], idx[1], idx[2]);
        (t.get(&[a, b, c])
            + t.get(&[a, c, b])
            + t.get(&[b, a, c])
            + t.get(&[b, c, a])
            + t.get(&[c, a, b])
            + t.get(&[c, b, a]))
            / 6.0
    })
}

/// Contract a (1,2) tensor with two vectors: T(u, v).
pub fn apply2(t: &MultiArray, u: &[f64], v: &[f64]) -> Vec<f64> {
    let n = t.shape()[0];
    (0..n)
        .map(|a| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += t.get(&[a, i, j]) * u[i] * v[j];
                }
            }
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::complete_frame;

    /// Independent Koszul oracle: plain central differences, no Richardson,
    /// its own step. Kept free of the implementation path it checks.
    fn koszul_oracle(
        g: &dyn Fn(&ChartPoint) -> MultiArray,
        p: &ChartPoint,
        k: usize,
        i: usize,
        j: usize,
    ) -> f64 {
        let n = p.dim();
        let h = 1e-6;
        let dg = |l: usize, a: usize, b: usize| -> f64 {
            let gp = g(&p.shifted(l, h));
            let gm = g(&p.shifted(l, -h));
            (gp.get(&[a, b]) - gm.get(&[a, b])) / (2.0 * h)
        };
        let ginv = g(p).to_matrix().try_inverse().unwrap();
        let mut v = 0.0;
        for l in 0..n {
            v += 0.5 * ginv[(k, l)] * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        }
        v
    }

    /// The conformal surface fiber: g~ = x[(dx)^2 + (dy)^2] on x > 0, with
    /// the lambda-scaled difference tensor table.
    fn surface_fiber(lambda: f64) -> StatisticalManifold {
        let metric = MetricField::new(
            2,
            Arc::new(|p: &ChartPoint| {
                let x = p.coords[0];
                MultiArray::from_vec(&[2, 2], vec![x, 0.0, 0.0, x])
            }),
        );
        let ktensor = DifferenceTensorField::new(
            2,
            Arc::new(move |_| {
                let mut k = MultiArray::zeros(&[2, 2, 2]);
                k.set(&[0, 0, 0], -lambda);
                k.set(&[1, 0, 1], lambda);
                k.set(&[1, 1, 0], lambda);
                k.set(&[0, 1, 1], lambda);
                k
            }),
        );
        StatisticalManifold::new(
            2,
            metric,
            ktensor,
            Arc::new(|p: &ChartPoint| p.coords[0] > 0.0),
            "surface_fiber",
            vec![(0.5, 2.5), (-1.0, 1.0)],
        )
    }

    #[test]
    fn euclidean_christoffels_vanish() {
        let m = StatisticalManifold::euclidean(3);
        let p = ChartPoint::new(vec![0.2, -0.4, 0.9]);
        let gamma = m.levi_civita_christoffels(&p).unwrap();
        assert!(gamma.max_abs() < 1e-12);
    }

    #[test]
    fn fiber_christoffel_at_unit_x() {
        let m = surface_fiber(1.0);
        let p = ChartPoint::new(vec![1.0, 0.0]);
        let gamma = m.levi_civita_christoffels(&p).unwrap();
        assert!((gamma.get(&[0, 0, 0]) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn warped_christoffel_matches_independent_oracle() {
        // g = e^{2a}[(dx)^2 + (dy)^2] + (da)^2 in coordinates (x, y, a).
        let gfn = |p: &ChartPoint| {
            let w = (2.0 * p.coords[2]).exp();
            MultiArray::from_vec(&[3, 3], vec![w, 0.0, 0.0, 0.0, w, 0.0, 0.0, 0.0, 1.0])
        };
        let metric = MetricField::new(3, Arc::new(gfn));
        let m = StatisticalManifold::new(
            3,
            metric,
            DifferenceTensorField::zero(3),
            Arc::new(|_| true),
            "warped",
            vec![(-1.0, 1.0); 3],
        );
        let p = ChartPoint::new(vec![0.3, -0.2, 0.0]);
        let gamma = m.levi_civita_christoffels(&p).unwrap();
        assert!((gamma.get(&[2, 0, 0]) - (-1.0)).abs() < 1e-9);
        let oracle = koszul_oracle(&gfn, &p, 2, 0, 0);
        assert!((gamma.get(&[2, 0, 0]) - oracle).abs() < 1e-6);
    }

    #[test]
    fn zero_k_gives_self_dual_connection() {
        let m = StatisticalManifold::euclidean(2);
        let p = ChartPoint::new(vec![0.1, 0.2]);
        let (g1, g2) = m.dual_christoffels(&p).unwrap();
        let lc = m.levi_civita_christoffels(&p).unwrap();
        assert!(g1.max_abs_diff(&lc) < 1e-13);
        assert!(g2.max_abs_diff(&lc) < 1e-13);
    }

    #[test]
    fn fiber_dual_connections_at_unit_x() {
        let m = surface_fiber(1.0);
        let p = ChartPoint::new(vec![1.0, 0.0]);
        let (gamma, gamma_star) = m.dual_christoffels(&p).unwrap();
        // Primal: (1/2 x^{-1} − λ) ∂1 at x = 1, λ = 1.
        assert!((gamma.get(&[0, 0, 0]) - (-0.5)).abs() < 1e-9);
        // Dual: 2Γ_g − Γ.
        assert!((gamma_star.get(&[0, 0, 0]) - 1.5).abs() < 1e-9);
        // Same display at a generic x.
        let q = ChartPoint::new(vec![1.7, -0.4]);
        let (gq, _) = m.dual_christoffels(&q).unwrap();
        assert!((gq.get(&[0, 0, 0]) - (0.5 / 1.7 - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn christoffel_average_is_levi_civita() {
        let m = surface_fiber(0.7);
        for (i, p) in m.sample_points(20, 5).unwrap().iter().enumerate() {
            let (g1, g2) = m.dual_christoffels(p).unwrap();
            let lc = m.levi_civita_christoffels(p).unwrap();
            let avg = MultiArray::from_fn(&[2, 2, 2], |idx| {
                0.5 * (g1.get(idx) + g2.get(idx))
            });
            assert!(avg.max_abs_diff(&lc) < 1e-12, "point {i}");
        }
    }

    #[test]
    fn euclidean_axioms_hold_exactly() {
        let m = StatisticalManifold::euclidean(3);
        let p = ChartPoint::new(vec![0.0, 0.3, -0.3]);
        let g = m.metric_at(&p).unwrap();
        let e1 = TangentVector::coordinate(&p, 0);
        let frame = complete_frame(&e1, &g, 3).unwrap();
        let res = m.check_statistical(&p, &frame).unwrap();
        assert!(res.max() < 1e-9, "{res:?}");
    }

    #[test]
    fn fiber_axioms_hold_at_100_points() {
        let m = surface_fiber(1.0);
        let pts = m.sample_points(100, 11).unwrap();
        for p in &pts {
            let g = m.metric_at(p).unwrap();
            let e1 = TangentVector::coordinate(p, 0);
            let frame = complete_frame(&e1, &g, 17).unwrap();
            let res = m.check_statistical(p, &frame).unwrap();
            assert!(res.max() < 1e-6, "residuals {res:?} at {:?}", p.coords);
        }
    }

    #[test]
    fn broken_self_adjointness_is_detected() {
        let metric = MetricField::new(
            2,
            Arc::new(|_| MultiArray::from_vec(&[2, 2], vec![1.0, 0.0, 0.0, 1.0])),
        );
        // Symmetric in the lower pair but not self-adjoint: K(∂1,∂2) = 0.1 ∂1
        // while K(∂1,∂1) has no ∂2 component.
        let ktensor = DifferenceTensorField::new(
            2,
            Arc::new(|_| {
                let mut k = MultiArray::zeros(&[2, 2, 2]);
                k.set(&[0, 0, 1], 0.1);
                k.set(&[0, 1, 0], 0.1);
                k
            }),
        );
        let m = StatisticalManifold::new(
            2,
            metric,
            ktensor,
            Arc::new(|_| true),
            "broken",
            vec![(-1.0, 1.0); 2],
        );
        let p = ChartPoint::new(vec![0.0, 0.0]);
        let g = m.metric_at(&p).unwrap();
        let frame = complete_frame(&TangentVector::coordinate(&p, 0), &g, 1).unwrap();
        let res = m.check_statistical(&p, &frame).unwrap();
        assert!((res.k_self_adjoint - 0.1).abs() < 1e-12, "{res:?}");
    }

    #[test]
    fn involution_is_identity_for_zero_k() {
        let m = StatisticalManifold::euclidean(2);
        let p = ChartPoint::new(vec![0.4, 0.4]);
        assert!(m.conjugate_involution_check(&p).unwrap() < 1e-12);
    }

    #[test]
    fn involution_on_fiber() {
        let m = surface_fiber(1.0);
        for p in m.sample_points(25, 23).unwrap() {
            assert!(m.conjugate_involution_check(&p).unwrap() < 1e-8);
        }
    }

    #[test]
    fn involution_on_random_statistical_manifolds() {
        for seed in 0..20 {
            let m = StatisticalManifold::random(3, seed);
            for p in m.sample_points(5, seed + 100).unwrap() {
                let r = m.conjugate_involution_check(&p).unwrap();
                assert!(r < 1e-7, "seed {seed}: residual {r}");
            }
        }
    }

    #[test]
    fn random_manifolds_have_totally_symmetric_lowered_k() {
        for seed in 0..10 {
            let m = StatisticalManifold::random(4, seed);
            for p in m.sample_points(5, seed).unwrap() {
                assert!(m.lowered_k_symmetry_residual(&p).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn random_manifolds_satisfy_axioms() {
        for seed in 0..10 {
            let m = StatisticalManifold::random(3, seed * 7 + 1);
            for p in m.sample_points(10, seed).unwrap() {
                let g = m.metric_at(&p).unwrap();
                let frame =
                    complete_frame(&TangentVector::coordinate(&p, 0), &g, seed).unwrap();
                let res = m.check_statistical(&p, &frame).unwrap();
                assert!(res.max() < 1e-6, "seed {seed}: {res:?}");
            }
        }
    }

    #[test]
    fn torsion_free_by_construction() {
        let m = surface_fiber(1.3);
        let p = ChartPoint::new(vec![1.7, 0.4]);
        let (gamma, gamma_star) = m.dual_christoffels(&p).unwrap();
        assert!(gamma.symmetry_residual(1, 2) < 1e-14);
        assert!(gamma_star.symmetry_residual(1, 2) < 1e-14);
    }
}
