//! Statistical immersions: induced metric and difference tensor, dual
//! second fundamental forms, shape operators, mean curvatures, Gauss
//! equation residuals, and the tangential/normal φ-decomposition.
//!
//! The covariant derivative of pushed-forward coordinate fields along the
//! submanifold is assembled as `∂²ι + Γ(dι ∂i, dι ∂j)`; its tangential part
//! is the induced connection and its normal part the second fundamental
//! form. The split is exact up to the linear solve, so the reassembly
//! residual sits at machine precision.

use crate::curvature::{
    apply_curvature, connection_curvature_tensor, statistical_curvature_tensor,
};
use crate::error::{GeomError, Result};
use crate::kenmotsu::{model_curvature, CatalogManifold};
use crate::statistical::{
    apply2, Connection, DifferenceTensorField, DomainFn, MetricField, StatisticalManifold,
};
use crate::tensor::{
    fd_derivative, inner, norm, orthonormal_span, ChartPoint, FdSteps, Frame, MultiArray,
    TangentVector,
};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub type MapFn = Arc<dyn Fn(&ChartPoint) -> ChartPoint + Send + Sync>;

/// A coordinate immersion of a source chart into an ambient catalog
/// manifold.
#[derive(Clone)]
pub struct Immersion {
    pub src_dim: usize,
    pub ambient: CatalogManifold,
    pub map: MapFn,
    pub src_domain: DomainFn,
    pub name: String,
    pub sample_box: Vec<(f64, f64)>,
    /// Relative step for differentiating the immersion map. The catalog
    /// maps are polynomial, so the Richardson stencil is exact; the step is
    /// kept large to suppress rounding noise in the nested stack.
    pub map_rel_step: f64,
}

impl Immersion {
    pub fn map_point(&self, u: &ChartPoint) -> ChartPoint {
        (self.map)(u)
    }

    pub fn contains(&self, u: &ChartPoint) -> bool {
        u.dim() == self.src_dim && (self.src_domain)(u)
    }

    /// Differential dι as an (ambient × src) matrix of partials.
    pub fn jacobian(&self, u: &ChartPoint) -> Result<DMatrix<f64>> {
        let n_amb = self.ambient.dim();
        let n = self.src_dim;
        let mut j = DMatrix::zeros(n_amb, n);
        for i in 0..n {
            let step = FdSteps::step(self.map_rel_step, u.coords[i]);
            for a in 0..n_amb {
                let map = self.map.clone();
                let dom = self.src_domain.clone();
                j[(a, i)] = fd_derivative(
                    move |q| map(q).coords[a],
                    move |q| dom(q),
                    u,
                    i,
                    step,
                )?;
            }
        }
        Ok(j)
    }

    /// Second partials of the map: `[a, i, j] = ∂²ι_a/∂u_i∂u_j` by nested
    /// first differences with decorrelated steps.
    pub fn second_derivatives(&self, u: &ChartPoint) -> Result<MultiArray> {
        let n_amb = self.ambient.dim();
        let n = self.src_dim;
        let mut hess = MultiArray::zeros(&[n_amb, n, n]);
        for i in 0..n {
            let outer = FdSteps::step(self.map_rel_step, u.coords[i]);
            for j in i..n {
                let inner_step = FdSteps::step(0.41 * self.map_rel_step, u.coords[j]);
                for a in 0..n_amb {
                    let map = self.map.clone();
                    let dom = self.src_domain.clone();
                    let dom2 = self.src_domain.clone();
                    let inner_fn = move |q: &ChartPoint| {
                        let map = map.clone();
                        fd_derivative(
                            move |r| map(r).coords[a],
                            |_| true,
                            q,
                            j,
                            inner_step,
                        )
                        .expect("inner stencil")
                    };
                    let v = fd_derivative(inner_fn, move |q| dom(q) && dom2(q), u, i, outer)?;
                    hess.set(&[a, i, j], v);
                    hess.set(&[a, j, i], v);
                }
            }
        }
        Ok(hess)
    }

    /// The induced statistical manifold on the source chart: pullback metric
    /// `G = dιᵀ ḡ dι` and tangentially projected difference tensor. Uses the
    /// coarse FD schedule because the metric evaluation is itself a
    /// finite-difference composite.
    pub fn induced_manifold(&self) -> StatisticalManifold {
        let n = self.src_dim;
        let this = self.clone();
        let metric = MetricField::new(
            n,
            Arc::new(move |u: &ChartPoint| {
                let j = this.jacobian(u).expect("jacobian in induced metric");
                let p = this.map_point(u);
                let g_amb = this.ambient.manifold.metric.at(&p);
                MultiArray::from_fn(&[n, n], |idx| {
                    let mut s = 0.0;
                    for a in 0..j.nrows() {
                        for b in 0..j.nrows() {
                            s += j[(a, idx[0])] * g_amb.get(&[a, b]) * j[(b, idx[1])];
                        }
                    }
                    s
                })
            }),
        );
        let that = self.clone();
        let ktensor = DifferenceTensorField::new(
            n,
            Arc::new(move |u: &ChartPoint| {
                let j = that.jacobian(u).expect("jacobian in induced K");
                let p = that.map_point(u);
                let g_amb = that.ambient.manifold.metric.at(&p);
                let k_amb = that.ambient.manifold.ktensor.at(&p);
                let n_amb = j.nrows();
                let gram = DMatrix::from_fn(n, n, |a, b| {
                    let mut s = 0.0;
                    for x in 0..n_amb {
                        for y in 0..n_amb {
                            s += j[(x, a)] * g_amb.get(&[x, y]) * j[(y, b)];
                        }
                    }
                    s
                });
                let gram_inv = gram.try_inverse().expect("induced metric invertible");
                MultiArray::from_fn(&[n, n, n], |idx| {
                    // w_l = ḡ(K(dι ∂i, dι ∂j), dι ∂l); coefficients = G⁻¹ w.
                    let (l, i, jj) = (idx[0], idx[1], idx[2]);
                    let push = |col: usize| -> Vec<f64> {
                        (0..n_amb).map(|a| j[(a, col)]).collect()
                    };
                    let kv = apply2(&k_amb, &push(i), &push(jj));
                    let mut out = 0.0;
                    for m in 0..n {
                        let w_m = inner(&g_amb, &kv, &push(m));
                        out += gram_inv[(l, m)] * w_m;
                    }
                    out
                })
            }),
        );
        let dom = self.src_domain.clone();
        StatisticalManifold::new(
            n,
            metric,
            ktensor,
            Arc::new(move |u| dom(u)),
            format!("induced({})", self.name),
            self.sample_box.clone(),
        )
        .with_steps(FdSteps::coarse())
    }

    /// Seeded rejection sampling in the source box.
    pub fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<ChartPoint>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::with_capacity(count);
        let mut attempts = 0usize;
        while pts.len() < count && attempts < 1000 * count.max(1) {
            attempts += 1;
            let coords: Vec<f64> = self
                .sample_box
                .iter()
                .map(|&(lo, hi)| rng.gen_range(lo..hi))
                .collect();
            let u = ChartPoint::new(coords);
            if self.contains(&u) {
                pts.push(u);
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
}

/// Mean curvature data of one geometry sample.
#[derive(Debug, Clone)]
pub struct MeanCurvatures {
    /// Ambient components of H, H*, H0.
    pub h_vec: Vec<f64>,
    pub h_star_vec: Vec<f64>,
    pub h0_vec: Vec<f64>,
    pub h_norm_sq: f64,
    pub h_star_norm_sq: f64,
    pub h0_norm_sq: f64,
    pub g_h_hstar: f64,
    /// max |2H0 − H − H*| component.
    pub identity_residual: f64,
}

/// Everything induced at one source point in one adapted frame.
pub struct SubmanifoldGeometry {
    pub src_point: ChartPoint,
    pub ambient_point: ChartPoint,
    /// Orthonormal tangent frame in ambient components.
    pub tangent_frame: Frame,
    /// Preimages: tangent_frame[i] = dι(src_frame[i]).
    pub src_frame: Vec<Vec<f64>>,
    /// Orthonormal normal frame in ambient components.
    pub normal_frame: Frame,
    /// Pullback metric in source coordinates.
    pub induced_g: MultiArray,
    /// Second fundamental forms in the orthonormal tangent frame ×
    /// normal frame: `[a, b, r] = ḡ(h(e_a, e_b), N_r)`.
    pub h: MultiArray,
    pub h_star: MultiArray,
    pub h0: MultiArray,
    pub mean: MeanCurvatures,
    /// Σ_{a,b} ḡ(φ e_a, e_b)², when the ambient carries contact data.
    pub p_norm_sq: Option<f64>,
    /// max ||∇̄_{∂i}∂j − (tangential + normal parts)|| over coordinate pairs.
    pub split_residual: f64,
    /// max |h(e_a,e_b) − h(e_b,e_a)| and the dual version.
    pub h_symmetry_residual: f64,
    /// max |2h0 − h − h*| component.
    pub h0_identity_residual: f64,
}

fn tangential_norm(g: &MultiArray, tangent: &Frame, v: &[f64]) -> f64 {
    let mut s = 0.0;
    for a in 0..tangent.len() {
        let c = inner(g, v, tangent.components(a));
        s += c * c;
    }
    s.sqrt()
}

/// Builds the full ambient frame at ι(u): tangent part from the pushed
/// coordinate basis (optionally re-ordered to start at a prescribed unit
/// tangent), normal part completed with seeded random candidates.
fn frames_at(
    imm: &Immersion,
    u: &ChartPoint,
    e1_src: Option<&[f64]>,
    seed: u64,
) -> Result<(ChartPoint, DMatrix<f64>, Frame, Frame)> {
    let p = imm.map_point(u);
    if !imm.ambient.manifold.contains(&p) {
        return Err(GeomError::DomainViolation {
            coords: p.coords.clone(),
            context: format!("image of {}", imm.name),
        });
    }
    let g = imm.ambient.manifold.metric_at(&p)?;
    let jac = imm.jacobian(u)?;
    let n = imm.src_dim;
    let n_amb = imm.ambient.dim();
    let push = |v: &[f64]| -> Vec<f64> {
        (0..n_amb)
            .map(|a| (0..n).map(|i| jac[(a, i)] * v[i]).sum())
            .collect()
    };
    let mut tangent_candidates: Vec<TangentVector> = Vec::new();
    if let Some(e1) = e1_src {
        tangent_candidates.push(TangentVector::new(p.clone(), push(e1)));
    }
    for i in 0..n {
        let mut ei = vec![0.0; n];
        ei[i] = 1.0;
        tangent_candidates.push(TangentVector::new(p.clone(), push(&ei)));
    }
    let tangent = orthonormal_span(&tangent_candidates, &g);
    if tangent.len() < n {
        return Err(GeomError::RankDeficient {
            coords: u.coords.clone(),
        });
    }
    let tangent = Frame::new(tangent.vectors[..n].to_vec(), true);

    // Normals: always completed from the pushed basis in coordinate order so
    // the normal frame is a smooth field independent of the e1 adaptation.
    let mut full_candidates: Vec<TangentVector> = (0..n)
        .map(|i| {
            let mut ei = vec![0.0; n];
            ei[i] = 1.0;
            TangentVector::new(p.clone(), push(&ei))
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..(4 * n_amb + 8) {
        let c: Vec<f64> = (0..n_amb).map(|_| rng.gen_range(-1.0..1.0)).collect();
        full_candidates.push(TangentVector::new(p.clone(), c));
    }
    let full = orthonormal_span(&full_candidates, &g);
    if full.len() < n_amb {
        return Err(GeomError::DegenerateFrame {
            index: full.len(),
            pivot: 0.0,
        });
    }
    let normal = Frame::new(full.vectors[n..n_amb].to_vec(), true);
    Ok((p, jac, tangent, normal))
}

/// Induced geometry at a source point: frames, induced metric, dual second
/// fundamental forms and mean curvatures.
pub fn induced_geometry(imm: &Immersion, u: &ChartPoint, seed: u64) -> Result<SubmanifoldGeometry> {
    induced_geometry_adapted(imm, u, None, seed)
}

/// Same, with the tangent frame adapted so that its first vector is the
/// (normalized) push-forward of `e1_src`.
pub fn induced_geometry_adapted(
    imm: &Immersion,
    u: &ChartPoint,
    e1_src: Option<&[f64]>,
    seed: u64,
) -> Result<SubmanifoldGeometry> {
    let n = imm.src_dim;
    let (p, jac, tangent, normal) = frames_at(imm, u, e1_src, seed)?;
    let n_amb = imm.ambient.dim();
    let g = imm.ambient.manifold.metric_at(&p)?;

    // Preimages of the tangent frame: v = G⁻¹ Jᵀ ḡ e.
    let gram = DMatrix::from_fn(n, n, |a, b| {
        let mut s = 0.0;
        for x in 0..n_amb {
            for y in 0..n_amb {
                s += jac[(x, a)] * g.get(&[x, y]) * jac[(y, b)];
            }
        }
        s
    });
    let gram_inv = gram
        .clone()
        .try_inverse()
        .ok_or(GeomError::RankDeficient {
            coords: u.coords.clone(),
        })?;
    let src_frame: Vec<Vec<f64>> = (0..n)
        .map(|a| {
            let e = tangent.components(a);
            let jt_ge = DVector::from_fn(n, |i, _| {
                let mut s = 0.0;
                for x in 0..n_amb {
                    for y in 0..n_amb {
                        s += jac[(x, i)] * g.get(&[x, y]) * e[y];
                    }
                }
                s
            });
            let v = &gram_inv * jt_ge;
            v.iter().copied().collect()
        })
        .collect();
    let induced_g = MultiArray::from_fn(&[n, n], |idx| gram[(idx[0], idx[1])]);

    // ∇̄_{∂i}∂j = ∂²ι + Γ̄(dι ∂i, dι ∂j) for each of the three connections.
    let hess = imm.second_derivatives(u)?;
    let amb = &imm.ambient.manifold;
    amb.metric_inverse_at(&p)?; // singular ambient metric is an error here
    let (gamma, gamma_star) = amb.dual_christoffels(&p)?;
    let gamma_lc = amb.levi_civita_christoffels(&p)?;
    let push_col = |i: usize| -> Vec<f64> { (0..n_amb).map(|a| jac[(a, i)]).collect() };

    let m = n_amb - n;
    let mut h = MultiArray::zeros(&[n, n, m]);
    let mut h_star = MultiArray::zeros(&[n, n, m]);
    let mut h0 = MultiArray::zeros(&[n, n, m]);
    let mut split_residual: f64 = 0.0;

    // Coordinate-basis normal components first.
    let mut h_coord = MultiArray::zeros(&[n, n, m]);
    let mut h_star_coord = MultiArray::zeros(&[n, n, m]);
    let mut h0_coord = MultiArray::zeros(&[n, n, m]);
    for i in 0..n {
        for j in 0..n {
            let (pi, pj) = (push_col(i), push_col(j));
            for (which, gam) in [(0usize, &gamma), (1, &gamma_star), (2, &gamma_lc)] {
                let corr = apply2(gam, &pi, &pj);
                let d: Vec<f64> = (0..n_amb)
                    .map(|a| hess.get(&[a, i, j]) + corr[a])
                    .collect();
                // Normal components.
                for r in 0..m {
                    let c = inner(&g, &d, normal.components(r));
                    match which {
                        0 => h_coord.set(&[i, j, r], c),
                        1 => h_star_coord.set(&[i, j, r], c),
                        _ => h0_coord.set(&[i, j, r], c),
                    }
                }
                // Reassembly: tangential + normal parts must rebuild d.
                let mut rebuilt = vec![0.0; n_amb];
                for a in 0..n {
                    let c = inner(&g, &d, tangent.components(a));
                    for (rb, ea) in rebuilt.iter_mut().zip(tangent.components(a)) {
                        *rb += c * ea;
                    }
                }
                for r in 0..m {
                    let c = inner(&g, &d, normal.components(r));
                    for (rb, nr) in rebuilt.iter_mut().zip(normal.components(r)) {
                        *rb += c * nr;
                    }
                }
                let diff: Vec<f64> = d.iter().zip(&rebuilt).map(|(x, y)| x - y).collect();
                split_residual = split_residual.max(norm(&g, &diff));
            }
        }
    }
    // Transform to the orthonormal tangent frame: bilinearity over the
    // preimage coefficients.
    for a in 0..n {
        for b in 0..n {
            for r in 0..m {
                let mut vh = 0.0;
                let mut vhs = 0.0;
                let mut vh0 = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        let w = src_frame[a][i] * src_frame[b][j];
                        vh += w * h_coord.get(&[i, j, r]);
                        vhs += w * h_star_coord.get(&[i, j, r]);
                        vh0 += w * h0_coord.get(&[i, j, r]);
                    }
                }
                h.set(&[a, b, r], vh);
                h_star.set(&[a, b, r], vhs);
                h0.set(&[a, b, r], vh0);
            }
        }
    }
    let h_symmetry_residual = h.symmetry_residual(0, 1).max(h_star.symmetry_residual(0, 1));
    let mut h0_identity_residual: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for r in 0..m {
                let idx = [a, b, r];
                h0_identity_residual = h0_identity_residual
                    .max((2.0 * h0.get(&idx) - h.get(&idx) - h_star.get(&idx)).abs());
            }
        }
    }

    // Mean curvature vectors: frame traces over the orthonormal frame.
    let trace = |t: &MultiArray| -> Vec<f64> {
        (0..m)
            .map(|r| (0..n).map(|a| t.get(&[a, a, r])).sum::<f64>() / n as f64)
            .collect()
    };
    let (th, ths, th0) = (trace(&h), trace(&h_star), trace(&h0));
    let to_ambient = |coeffs: &[f64]| -> Vec<f64> {
        let mut v = vec![0.0; n_amb];
        for r in 0..m {
            for (va, nr) in v.iter_mut().zip(normal.components(r)) {
                *va += coeffs[r] * nr;
            }
        }
        v
    };
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let mean = MeanCurvatures {
        h_vec: to_ambient(&th),
        h_star_vec: to_ambient(&ths),
        h0_vec: to_ambient(&th0),
        h_norm_sq: dot(&th, &th),
        h_star_norm_sq: dot(&ths, &ths),
        h0_norm_sq: dot(&th0, &th0),
        g_h_hstar: dot(&th, &ths),
        identity_residual: (0..m)
            .map(|r| (2.0 * th0[r] - th[r] - ths[r]).abs())
            .fold(0.0, f64::max),
    };

    let p_norm_sq = imm.ambient.contact.as_ref().map(|contact| {
        let phi = contact.phi_at(&p);
        let mut s = 0.0;
        for a in 0..n {
            let pe = phi.apply_matrix(tangent.components(a));
            for b in 0..n {
                let c = inner(&g, &pe, tangent.components(b));
                s += c * c;
            }
        }
        s
    });

    Ok(SubmanifoldGeometry {
        src_point: u.clone(),
        ambient_point: p,
        tangent_frame: tangent,
        src_frame,
        normal_frame: normal,
        induced_g,
        h,
        h_star,
        h0,
        mean,
        p_norm_sq,
        split_residual,
        h_symmetry_residual,
        h0_identity_residual,
    })
}

/// Shape operators of a normal vector with the Weingarten split residuals.
pub struct ShapeOperators {
    /// A_U, paired with h*: g(A_U X, Y) = ḡ(h*(X,Y), U).
    pub a: DMatrix<f64>,
    /// A*_U, paired with h: g(A*_U X, Y) = ḡ(h(X,Y), U).
    pub a_star: DMatrix<f64>,
    /// max over frame directions of ||tan(∇̄_X U) + A_U X||_g.
    pub weingarten_residual: f64,
    /// Dual version with ∇̄* and A*.
    pub weingarten_residual_star: f64,
    /// Normal-connection components: `[a][r] = ḡ(nor(∇̄_{e_a} U), N_r)`.
    pub d_perp: DMatrix<f64>,
    pub d_perp_star: DMatrix<f64>,
}

pub fn shape_operators(
    imm: &Immersion,
    geom: &SubmanifoldGeometry,
    u_normal: &[f64],
    seed: u64,
) -> Result<ShapeOperators> {
    let n = imm.src_dim;
    let n_amb = imm.ambient.dim();
    let m = n_amb - n;
    let g = imm.ambient.manifold.metric_at(&geom.ambient_point)?;
    let tangential = tangential_norm(&g, &geom.tangent_frame, u_normal);
    let total = norm(&g, u_normal);
    if tangential > 1e-6 * total.max(1.0) {
        return Err(GeomError::InvalidNormal { tangential });
    }
    // Components of U in the normal frame.
    let u_comp: Vec<f64> = (0..m)
        .map(|r| inner(&g, u_normal, geom.normal_frame.components(r)))
        .collect();
    let a_star = DMatrix::from_fn(n, n, |x, y| {
        (0..m).map(|r| geom.h.get(&[x, y, r]) * u_comp[r]).sum()
    });
    let a = DMatrix::from_fn(n, n, |x, y| {
        (0..m)
            .map(|r| geom.h_star.get(&[x, y, r]) * u_comp[r])
            .sum()
    });

    // Weingarten residual: differentiate the normal field
    // U(q) = Σ_r u_r N_r(q) along each tangent frame direction.
    let (gamma, gamma_star) = imm
        .ambient
        .manifold
        .dual_christoffels(&geom.ambient_point)?;
    let u_field = |q: &ChartPoint| -> Result<Vec<f64>> {
        let (_, _, _, normal_q) = frames_at(imm, q, None, seed)?;
        let mut v = vec![0.0; n_amb];
        for r in 0..m {
            for (va, nr) in v.iter_mut().zip(normal_q.components(r)) {
                *va += u_comp[r] * nr;
            }
        }
        Ok(v)
    };
    let step = 1e-3;
    let mut weingarten_residual: f64 = 0.0;
    let mut weingarten_residual_star: f64 = 0.0;
    let mut d_perp = DMatrix::zeros(n, m);
    let mut d_perp_star = DMatrix::zeros(n, m);
    for idx in 0..n {
        let v_src = &geom.src_frame[idx];
        // ∂ of the field components along the source curve u + t v_src.
        let up = u_field(&geom.src_point.shifted_along(v_src, step))?;
        let um = u_field(&geom.src_point.shifted_along(v_src, -step))?;
        let up2 = u_field(&geom.src_point.shifted_along(v_src, step / 2.0))?;
        let um2 = u_field(&geom.src_point.shifted_along(v_src, -step / 2.0))?;
        let du: Vec<f64> = (0..n_amb)
            .map(|a| {
                let d_h = (up[a] - um[a]) / (2.0 * step);
                let d_h2 = (up2[a] - um2[a]) / step;
                (4.0 * d_h2 - d_h) / 3.0
            })
            .collect();
        let e_amb = geom.tangent_frame.components(idx);
        for (which, gam) in [(0usize, &gamma), (1, &gamma_star)] {
            let corr = apply2(gam, e_amb, u_normal);
            let nabla: Vec<f64> = du.iter().zip(&corr).map(|(d, c)| d + c).collect();
            // The tangential part must cancel the shape operator action:
            // A e_idx = Σ_col g(A e_idx, e_col) e_col in the orthonormal frame.
            let a_mat = if which == 0 { &a } else { &a_star };
            let mut ax = vec![0.0; n_amb];
            for col in 0..n {
                let c = a_mat[(idx, col)];
                for (xa, ec) in ax.iter_mut().zip(geom.tangent_frame.components(col)) {
                    *xa += c * ec;
                }
            }
            let mut tan_part = vec![0.0; n_amb];
            for b in 0..n {
                let c = inner(&g, &nabla, geom.tangent_frame.components(b));
                for (ta, eb) in tan_part.iter_mut().zip(geom.tangent_frame.components(b)) {
                    *ta += c * eb;
                }
            }
            let total_resid: Vec<f64> = tan_part.iter().zip(&ax).map(|(t, r)| t + r).collect();
            let rnorm = norm(&g, &total_resid);
            for r in 0..m {
                let c = inner(&g, &nabla, geom.normal_frame.components(r));
                if which == 0 {
                    d_perp[(idx, r)] = c;
                } else {
                    d_perp_star[(idx, r)] = c;
                }
            }
            if which == 0 {
                weingarten_residual = weingarten_residual.max(rnorm);
            } else {
                weingarten_residual_star = weingarten_residual_star.max(rnorm);
            }
        }
    }
    Ok(ShapeOperators {
        a,
        a_star,
        weingarten_residual,
        weingarten_residual_star,
        d_perp,
        d_perp_star,
    })
}

/// Gauss equation residuals for one 4-tuple of tangent frame indices:
/// the primal and dual equations, and the constant-model version when the
/// ambient declares a φ-sectional constant.
pub struct GaussResiduals {
    pub res: f64,
    pub res_star: f64,
    pub res_model: Option<f64>,
}

/// Intrinsic curvature context reused across Gauss-equation evaluations.
pub struct IntrinsicCurvature {
    pub manifold: StatisticalManifold,
}

impl IntrinsicCurvature {
    pub fn new(imm: &Immersion) -> Self {
        IntrinsicCurvature {
            manifold: imm.induced_manifold(),
        }
    }
}

pub fn gauss_equation_residual(
    imm: &Immersion,
    intrinsic: &IntrinsicCurvature,
    geom: &SubmanifoldGeometry,
    idx: (usize, usize, usize, usize),
) -> Result<GaussResiduals> {
    let (a, b, c, d) = idx;
    let g = imm.ambient.manifold.metric_at(&geom.ambient_point)?;
    let amb = &imm.ambient.manifold;
    let r_amb = connection_curvature_tensor(amb, Connection::Statistical, &geom.ambient_point)?;
    let r_amb_star = connection_curvature_tensor(amb, Connection::Dual, &geom.ambient_point)?;

    let e = geom.tangent_frame.components(a);
    let f = geom.tangent_frame.components(b);
    let gv = geom.tangent_frame.components(c);
    let hv = geom.tangent_frame.components(d);

    let amb_curv = |t: &MultiArray| -> f64 {
        let v = apply_curvature(t, e, f, gv);
        inner(&g, &v, hv)
    };

    // Intrinsic curvature contracted with the source preimages.
    let nm = &intrinsic.manifold;
    let r_n = connection_curvature_tensor(nm, Connection::Statistical, &geom.src_point)?;
    let r_n_star = connection_curvature_tensor(nm, Connection::Dual, &geom.src_point)?;
    let g_n = nm.metric_at(&geom.src_point)?;
    let intr = |t: &MultiArray| -> f64 {
        let v = apply_curvature(
            t,
            &geom.src_frame[a],
            &geom.src_frame[b],
            &geom.src_frame[c],
        );
        inner(&g_n, &v, &geom.src_frame[d])
    };

    let m = geom.normal_frame.len();
    let pair = |t1: &MultiArray, i1: (usize, usize), t2: &MultiArray, i2: (usize, usize)| -> f64 {
        (0..m)
            .map(|r| t1.get(&[i1.0, i1.1, r]) * t2.get(&[i2.0, i2.1, r]))
            .sum()
    };

    // ḡ(R̄(E,F)G,H) = g(R(E,F)G,H) + ḡ(h(E,G),h*(F,H)) − ḡ(h*(E,H),h(F,G))
    let res = (amb_curv(&r_amb)
        - intr(&r_n)
        - pair(&geom.h, (a, c), &geom.h_star, (b, d))
        + pair(&geom.h_star, (a, d), &geom.h, (b, c)))
    .abs();
    let res_star = (amb_curv(&r_amb_star)
        - intr(&r_n_star)
        - pair(&geom.h_star, (a, c), &geom.h, (b, d))
        + pair(&geom.h, (a, d), &geom.h_star, (b, c)))
    .abs();

    // Model form: intrinsic S against the ambient model terms plus the
    // symmetrized shape-operator combination.
    let res_model = match (imm.ambient.c_bar, &imm.ambient.contact) {
        (Some(c_bar), Some(contact)) => {
            let (s_n, _) = statistical_curvature_tensor(nm, &geom.src_point)?;
            let intr_s = {
                let v = apply_curvature(
                    &s_n,
                    &geom.src_frame[a],
                    &geom.src_frame[b],
                    &geom.src_frame[c],
                );
                inner(&g_n, &v, &geom.src_frame[d])
            };
            let phi = contact.phi_at(&geom.ambient_point);
            let xi = contact.xi_at(&geom.ambient_point);
            let model_v = model_curvature(c_bar, &g, &phi, &xi, e, f, gv);
            let model_term = inner(&g, &model_v, hv);
            let correction = 0.5
                * (pair(&geom.h_star, (a, d), &geom.h, (b, c))
                    + pair(&geom.h, (a, d), &geom.h_star, (b, c)))
                - 0.5
                    * (pair(&geom.h, (a, c), &geom.h_star, (b, d))
                        + pair(&geom.h_star, (a, c), &geom.h, (b, d)));
            Some((intr_s - model_term - correction).abs())
        }
        _ => None,
    };

    Ok(GaussResiduals {
        res,
        res_star,
        res_model,
    })
}

/// φE split into tangential and normal parts against the sample's frames.
pub fn pc_decomposition(
    imm: &Immersion,
    geom: &SubmanifoldGeometry,
    e_ambient: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let contact = imm
        .ambient
        .contact
        .as_ref()
        .ok_or_else(|| GeomError::Precondition("ambient carries no contact data".into()))?;
    let g = imm.ambient.manifold.metric_at(&geom.ambient_point)?;
    let phi = contact.phi_at(&geom.ambient_point);
    let pe_full = phi.apply_matrix(e_ambient);
    let n_amb = imm.ambient.dim();
    let mut tangential = vec![0.0; n_amb];
    for b in 0..geom.tangent_frame.len() {
        let c = inner(&g, &pe_full, geom.tangent_frame.components(b));
        for (ta, eb) in tangential.iter_mut().zip(geom.tangent_frame.components(b)) {
            *ta += c * eb;
        }
    }
    let normal: Vec<f64> = pe_full
        .iter()
        .zip(&tangential)
        .map(|(full, tan)| full - tan)
        .collect();
    Ok((tangential, normal))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariance {
    Invariant,
    AntiInvariant,
    Generic,
}

impl std::fmt::Display for Invariance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Invariance::Invariant => write!(f, "invariant"),
            Invariance::AntiInvariant => write!(f, "anti_invariant"),
            Invariance::Generic => write!(f, "generic"),
        }
    }
}

pub struct InvarianceReport {
    pub class: Invariance,
    pub max_p: f64,
    pub max_c: f64,
}

/// Classifies the immersion by the tangential/normal parts of φ over
/// sampled points and tangent frames.
pub fn classify_invariance(
    imm: &Immersion,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<InvarianceReport> {
    let mut max_p: f64 = 0.0;
    let mut max_c: f64 = 0.0;
    for (i, u) in imm.sample_points(samples, seed)?.iter().enumerate() {
        let geom = induced_geometry(imm, u, seed.wrapping_add(i as u64))?;
        let g = imm.ambient.manifold.metric_at(&geom.ambient_point)?;
        for a in 0..geom.tangent_frame.len() {
            let (p_part, c_part) =
                pc_decomposition(imm, &geom, geom.tangent_frame.components(a))?;
            max_p = max_p.max(norm(&g, &p_part));
            max_c = max_c.max(norm(&g, &c_part));
        }
    }
    let class = if max_c < tol {
        Invariance::Invariant
    } else if max_p < tol {
        Invariance::AntiInvariant
    } else {
        Invariance::Generic
    };
    Ok(InvarianceReport { class, max_p, max_c })
}

/// Report of the umbilical constant-curvature statement: preconditions are
/// flagged individually; the curvature residual is computed whenever the
/// ambient is a declared c = −1 contact entry, even if a precondition
/// fails, so precondition-violating cases stay inspectable.
pub struct ConstantCurvatureReport {
    /// Ambient is Kenmotsu with declared c = −1.
    pub applicable: bool,
    /// max normal component of ξ over samples.
    pub xi_tangency_residual: Option<f64>,
    /// max ||C e_a||: φ-invariance of the tangent bundle.
    pub invariance_residual: Option<f64>,
    /// max ||h(E,F) − g(E,F)H|| and dual over frame pairs.
    pub umbilicality_residual: Option<f64>,
    /// max deviation of g(H,H*) from its sample mean.
    pub g_h_hstar_spread: Option<f64>,
    pub g_h_hstar_mean: Option<f64>,
    /// max |S_N(E,F,G,H) − (g(H,H*) − 1)(g(F,G)g(E,H) − g(E,G)g(F,H))|.
    pub curvature_residual: Option<f64>,
    pub preconditions_met: bool,
}

pub fn constant_curvature_check(
    imm: &Immersion,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ConstantCurvatureReport> {
    let applicable = imm.ambient.c_bar == Some(-1.0) && imm.ambient.contact.is_some();
    if !applicable {
        return Ok(ConstantCurvatureReport {
            applicable: false,
            xi_tangency_residual: None,
            invariance_residual: None,
            umbilicality_residual: None,
            g_h_hstar_spread: None,
            g_h_hstar_mean: None,
            curvature_residual: None,
            preconditions_met: false,
        });
    }
    let contact = imm.ambient.contact.as_ref().unwrap();
    let pts = imm.sample_points(samples, seed)?;
    let n = imm.src_dim;
    let m_dim = imm.ambient.dim() - n;
    let intrinsic = IntrinsicCurvature::new(imm);

    let mut xi_res: f64 = 0.0;
    let mut inv_res: f64 = 0.0;
    let mut umb_res: f64 = 0.0;
    let mut ghh: Vec<f64> = Vec::new();
    let mut geoms = Vec::new();
    for (i, u) in pts.iter().enumerate() {
        let geom = induced_geometry(imm, u, seed.wrapping_add(i as u64))?;
        let g = imm.ambient.manifold.metric_at(&geom.ambient_point)?;
        let xi = contact.xi_at(&geom.ambient_point);
        let tan = tangential_norm(&g, &geom.tangent_frame, &xi);
        let total = norm(&g, &xi);
        xi_res = xi_res.max((total * total - tan * tan).max(0.0).sqrt());
        for a in 0..n {
            let (_, c_part) = pc_decomposition(imm, &geom, geom.tangent_frame.components(a))?;
            inv_res = inv_res.max(norm(&g, &c_part));
        }
        // Umbilicality in the orthonormal frame: h(e_a, e_b) = δ_ab H.
        let mean_h: Vec<f64> = (0..m_dim)
            .map(|r| inner(&g, &geom.mean.h_vec, geom.normal_frame.components(r)))
            .collect();
        let mean_hs: Vec<f64> = (0..m_dim)
            .map(|r| {
                inner(&g, &geom.mean.h_star_vec, geom.normal_frame.components(r))
            })
            .collect();
        for a in 0..n {
            for b in 0..n {
                let delta = if a == b { 1.0 } else { 0.0 };
                for r in 0..m_dim {
                    umb_res = umb_res
                        .max((geom.h.get(&[a, b, r]) - delta * mean_h[r]).abs())
                        .max((geom.h_star.get(&[a, b, r]) - delta * mean_hs[r]).abs());
                }
            }
        }
        ghh.push(geom.mean.g_h_hstar);
        geoms.push(geom);
    }
    let mean_ghh = ghh.iter().sum::<f64>() / ghh.len() as f64;
    let spread = ghh
        .iter()
        .map(|v| (v - mean_ghh).abs())
        .fold(0.0, f64::max);

    // Constant-curvature residual against κ = g(H,H*) − 1.
    let kappa = mean_ghh - 1.0;
    let mut curv_res: f64 = 0.0;
    for geom in &geoms {
        let (s_n, _) = statistical_curvature_tensor(&intrinsic.manifold, &geom.src_point)?;
        let g_n = intrinsic.manifold.metric_at(&geom.src_point)?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = apply_curvature(
                            &s_n,
                            &geom.src_frame[a],
                            &geom.src_frame[b],
                            &geom.src_frame[c],
                        );
                        let lhs = inner(&g_n, &v, &geom.src_frame[d]);
                        let da = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
                        let rhs = kappa * (da(b, c) * da(a, d) - da(a, c) * da(b, d));
                        curv_res = curv_res.max((lhs - rhs).abs());
                    }
                }
            }
        }
    }
    let preconditions_met = xi_res < tol && inv_res < tol && umb_res < tol && spread < tol;
    Ok(ConstantCurvatureReport {
        applicable: true,
        xi_tangency_residual: Some(xi_res),
        invariance_residual: Some(inv_res),
        umbilicality_residual: Some(umb_res),
        g_h_hstar_spread: Some(spread),
        g_h_hstar_mean: Some(mean_ghh),
        curvature_residual: Some(curv_res),
        preconditions_met,
    })
}

// ---------------------------------------------------------------------------
// Immersion catalog
// ---------------------------------------------------------------------------

pub struct ImmersionTemplate {
    pub name: &'static str,
    pub signature: &'static str,
    /// Source dimension and ambient entry.
    pub dim: &'static str,
    pub description: &'static str,
    pub default_params: &'static [f64],
}

pub fn immersion_templates() -> Vec<ImmersionTemplate> {
    vec![
        ImmersionTemplate {
            name: "fiber_slice",
            signature: "fiber_slice",
            dim: "2 -> hyperbolic_kenmotsu(1)",
            description: "alpha = 0 fiber of hyperbolic_kenmotsu(1): invariant, totally umbilical with H = H* = -xi",
            default_params: &[],
        },
        ImmersionTemplate {
            name: "xalpha_plane",
            signature: "xalpha_plane",
            dim: "2 -> hyperbolic_kenmotsu(1)",
            description: "y = 0 slice of hyperbolic_kenmotsu(1): anti-invariant, totally geodesic hyperbolic plane",
            default_params: &[],
        },
        ImmersionTemplate {
            name: "tilted_plane",
            signature: "tilted_plane(theta)",
            dim: "2 -> hyperbolic_kenmotsu(2)",
            description: "plane in the alpha = 0 fiber of hyperbolic_kenmotsu(2), rotated between a complex line (theta = 0) and a totally real plane (theta = pi/2)",
            default_params: &[0.6],
        },
        ImmersionTemplate {
            name: "perturbed_graph",
            signature: "perturbed_graph(eps)",
            dim: "2 -> hyperbolic_kenmotsu(1)",
            description: "graph alpha = eps u^2 over the fiber slice: strict-inequality witness",
            default_params: &[0.3],
        },
        ImmersionTemplate {
            name: "invariant_slice",
            signature: "invariant_slice",
            dim: "3 -> hyperbolic_kenmotsu(2)",
            description: "complex line times the alpha-line inside hyperbolic_kenmotsu(2): invariant with xi tangent, totally geodesic",
            default_params: &[],
        },
    ]
}

const MAP_REL_STEP: f64 = 1e-2;

fn make_immersion(
    name: String,
    ambient: CatalogManifold,
    src_dim: usize,
    map: MapFn,
    sample_box: Vec<(f64, f64)>,
) -> Immersion {
    Immersion {
        src_dim,
        ambient,
        map,
        src_domain: Arc::new(|_| true),
        name,
        sample_box,
        map_rel_step: MAP_REL_STEP,
    }
}

pub fn build_immersion(name: &str, params: &[f64]) -> Result<Immersion> {
    use crate::kenmotsu::build_manifold;
    match name {
        "fiber_slice" => {
            let ambient = build_manifold("hyperbolic_kenmotsu", &[1.0])?;
            Ok(make_immersion(
                "fiber_slice".into(),
                ambient,
                2,
                Arc::new(|u: &ChartPoint| {
                    ChartPoint::new(vec![u.coords[0], u.coords[1], 0.0])
                }),
                vec![(-1.0, 1.0); 2],
            ))
        }
        "xalpha_plane" => {
            let ambient = build_manifold("hyperbolic_kenmotsu", &[1.0])?;
            Ok(make_immersion(
                "xalpha_plane".into(),
                ambient,
                2,
                Arc::new(|u: &ChartPoint| {
                    ChartPoint::new(vec![u.coords[0], 0.0, u.coords[1]])
                }),
                vec![(-1.0, 1.0), (-0.6, 0.6)],
            ))
        }
        "tilted_plane" => {
            if params.len() != 1 {
                return Err(GeomError::Config(
                    "tilted_plane takes one parameter (theta)".into(),
                ));
            }
            let theta = params[0];
            let ambient = build_manifold("hyperbolic_kenmotsu", &[2.0])?;
            let (ct, st) = (theta.cos(), theta.sin());
            Ok(make_immersion(
                format!("tilted_plane({theta})"),
                ambient,
                2,
                Arc::new(move |u: &ChartPoint| {
                    ChartPoint::new(vec![
                        u.coords[0],
                        ct * u.coords[1],
                        st * u.coords[1],
                        0.0,
                        0.0,
                    ])
                }),
                vec![(-1.0, 1.0); 2],
            ))
        }
        "perturbed_graph" => {
            if params.len() != 1 {
                return Err(GeomError::Config(
                    "perturbed_graph takes one parameter (eps)".into(),
                ));
            }
            let eps = params[0];
            let ambient = build_manifold("hyperbolic_kenmotsu", &[1.0])?;
            Ok(make_immersion(
                format!("perturbed_graph({eps})"),
                ambient,
                2,
                Arc::new(move |u: &ChartPoint| {
                    ChartPoint::new(vec![
                        u.coords[0],
                        u.coords[1],
                        eps * u.coords[0] * u.coords[0],
                    ])
                }),
                vec![(-1.0, 1.0); 2],
            ))
        }
        "invariant_slice" => {
            let ambient = build_manifold("hyperbolic_kenmotsu", &[2.0])?;
            Ok(make_immersion(
                "invariant_slice".into(),
                ambient,
                3,
                Arc::new(|u: &ChartPoint| {
                    ChartPoint::new(vec![u.coords[0], u.coords[1], 0.0, 0.0, u.coords[2]])
                }),
                vec![(-1.0, 1.0), (-1.0, 1.0), (-0.6, 0.6)],
            ))
        }
        other => Err(GeomError::CatalogMiss { name: other.into() }),
    }
}

/// Affine-plus-quadratic custom immersion:
/// `ι_a(u) = offset_a + Σ_i linear_{a i} u_i + ½ Σ_{ij} quad_{a i j} u_i u_j`.
pub fn custom_immersion(
    name: String,
    ambient: CatalogManifold,
    offset: Vec<f64>,
    linear: Vec<Vec<f64>>,
    quadratic: Option<Vec<Vec<Vec<f64>>>>,
    sample_box: Vec<(f64, f64)>,
) -> Result<Immersion> {
    let n_amb = ambient.dim();
    let src_dim = linear.first().map(|row| row.len()).unwrap_or(0);
    if offset.len() != n_amb || linear.len() != n_amb || src_dim == 0 {
        return Err(GeomError::Config(
            "custom immersion: offset and linear must have one row per ambient coordinate".into(),
        ));
    }
    if sample_box.len() != src_dim {
        return Err(GeomError::Config(
            "custom immersion: sample box must match the source dimension".into(),
        ));
    }
    let quad = quadratic.unwrap_or_default();
    Ok(make_immersion(
        name,
        ambient,
        src_dim,
        Arc::new(move |u: &ChartPoint| {
            let coords = (0..offset.len())
                .map(|a| {
                    let mut v = offset[a];
                    for (i, li) in linear[a].iter().enumerate() {
                        v += li * u.coords[i];
                    }
                    if let Some(qa) = quad.get(a) {
                        for (i, row) in qa.iter().enumerate() {
                            for (j, q) in row.iter().enumerate() {
                                v += 0.5 * q * u.coords[i] * u.coords[j];
                            }
                        }
                    }
                    v
                })
                .collect();
            ChartPoint::new(coords)
        }),
        sample_box,
    ))
}
