//! Almost contact structures, warped-product lifts of holomorphic
//! statistical manifolds, the constant φ-sectional curvature model tensor,
//! Ricci coefficient formulas, and the catalog of concrete manifolds.
//!
//! The lift construction: given a holomorphic statistical manifold
//! (B, g, J, K) of dimension 2s, the product B × R with coordinates
//! (fiber..., α), metric e^{2α} g ⊕ (dα)², φ = J on the fiber, ξ = ∂α and
//! difference tensor extended by K(·, ξ) = 0, K(ξ, ξ) = β ξ carries a
//! Kenmotsu statistical structure.

use crate::curvature::{
    apply_curvature, lower_curvature, ricci_form, statistical_curvature_tensor, RicciMode,
};
use crate::error::{GeomError, Result};
use crate::statistical::{
    apply2, DifferenceTensorField, DomainFn, FieldFn, MetricField, StatisticalManifold,
};
use crate::tensor::{inner, norm, ChartPoint, Frame, MultiArray, TangentVector};
use std::sync::Arc;

pub type VectorFieldFn = Arc<dyn Fn(&ChartPoint) -> Vec<f64> + Send + Sync>;
pub type ScalarFieldFn = Arc<dyn Fn(&ChartPoint) -> f64 + Send + Sync>;

/// φ field (one index up, one down) and Reeb field ξ attached to a chart;
/// η is derived as g(·, ξ).
#[derive(Clone)]
pub struct AlmostContactData {
    pub phi: FieldFn,
    pub xi: VectorFieldFn,
}

/// Residuals of the almost contact metric identities at a point.
#[derive(Debug, Clone, Copy)]
pub struct ContactResiduals {
    /// max |φξ| component
    pub phi_xi: f64,
    /// max |φ² + Id − η⊗ξ| component
    pub phi_square: f64,
    /// max |g(φX,φY) − g(X,Y) + η(X)η(Y)| over basis pairs
    pub compatibility: f64,
    /// |g(ξ,ξ) − 1|
    pub xi_unit: f64,
}

impl ContactResiduals {
    pub fn max(&self) -> f64 {
        self.phi_xi
            .max(self.phi_square)
            .max(self.compatibility)
            .max(self.xi_unit)
    }
}

impl AlmostContactData {
    pub fn phi_at(&self, p: &ChartPoint) -> MultiArray {
        (self.phi)(p)
    }

    pub fn xi_at(&self, p: &ChartPoint) -> Vec<f64> {
        (self.xi)(p)
    }

    /// η(v) = g(v, ξ).
    pub fn eta(&self, g: &MultiArray, p: &ChartPoint, v: &[f64]) -> f64 {
        inner(g, v, &self.xi_at(p))
    }

    pub fn invariants_residual(&self, g: &MultiArray, p: &ChartPoint) -> ContactResiduals {
        let n = g.shape()[0];
        let phi = self.phi_at(p);
        let xi = self.xi_at(p);
        let phi_xi = phi
            .apply_matrix(&xi)
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
        // η as a covector: η_j = Σ_i g_ij ξ^i
        let eta: Vec<f64> = (0..n)
            .map(|j| (0..n).map(|i| g.get(&[i, j]) * xi[i]).sum())
            .collect();
        let mut phi_square: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut sq = 0.0;
                for k in 0..n {
                    sq += phi.get(&[i, k]) * phi.get(&[k, j]);
                }
                let id = if i == j { 1.0 } else { 0.0 };
                phi_square = phi_square.max((sq + id - xi[i] * eta[j]).abs());
            }
        }
        let mut compatibility: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut ei = vec![0.0; n];
                ei[i] = 1.0;
                let mut ej = vec![0.0; n];
                ej[j] = 1.0;
                let lhs = inner(g, &phi.apply_matrix(&ei), &phi.apply_matrix(&ej));
                let rhs = g.get(&[i, j]) - eta[i] * eta[j];
                compatibility = compatibility.max((lhs - rhs).abs());
            }
        }
        let xi_unit = (inner(g, &xi, &xi) - 1.0).abs();
        ContactResiduals {
            phi_xi,
            phi_square,
            compatibility,
            xi_unit,
        }
    }
}

/// An even-dimensional statistical manifold with a compatible complex
/// structure J whose difference tensor anti-commutes with J in one slot.
#[derive(Clone)]
pub struct HolomorphicStatisticalManifold {
    pub base: StatisticalManifold,
    pub j: FieldFn,
}

impl HolomorphicStatisticalManifold {
    /// Max residual of J² = −Id, J-isometry, and K(X, JY) = −J K(X,Y) at p.
    pub fn invariants_residual(&self, p: &ChartPoint) -> Result<f64> {
        let n = self.base.dim;
        let g = self.base.metric_at(p)?;
        let j = (self.j)(p);
        let k = self.base.ktensor.at(p);
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut sq = 0.0;
                for c in 0..n {
                    sq += j.get(&[a, c]) * j.get(&[c, b]);
                }
                let id = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((sq + id).abs());
            }
        }
        for a in 0..n {
            for b in 0..n {
                let mut ea = vec![0.0; n];
                ea[a] = 1.0;
                let mut eb = vec![0.0; n];
                eb[b] = 1.0;
                let iso = inner(&g, &j.apply_matrix(&ea), &j.apply_matrix(&eb)) - g.get(&[a, b]);
                worst = worst.max(iso.abs());
                let kj = apply2(&k, &ea, &j.apply_matrix(&eb));
                let jk = j.apply_matrix(&apply2(&k, &ea, &eb));
                for c in 0..n {
                    worst = worst.max((kj[c] + jk[c]).abs());
                }
            }
        }
        Ok(worst)
    }
}

/// An odd-dimensional statistical manifold with almost contact data and an
/// optional declared constant φ-sectional curvature.
#[derive(Clone)]
pub struct KenmotsuStatisticalManifold {
    pub base: StatisticalManifold,
    pub contact: AlmostContactData,
    pub c_bar: Option<f64>,
    pub fiber: Option<Arc<HolomorphicStatisticalManifold>>,
}

/// Product chart data of the warped lift: metric e^{2α} g ⊕ 1, φ = J on the
/// fiber with φξ = 0, ξ = ∂α (α is the last coordinate).
pub fn build_warped_contact(
    fiber: &HolomorphicStatisticalManifold,
) -> (MetricField, AlmostContactData) {
    let m = fiber.base.dim;
    let n = m + 1;
    let fiber_metric = fiber.base.metric.clone();
    let metric = MetricField::new(
        n,
        Arc::new(move |p: &ChartPoint| {
            let warp = (2.0 * p.coords[m]).exp();
            let gf = fiber_metric.at(&fiber_point(p, m));
            MultiArray::from_fn(&[n, n], |idx| {
                if idx[0] == m && idx[1] == m {
                    1.0
                } else if idx[0] < m && idx[1] < m {
                    warp * gf.get(idx)
                } else {
                    0.0
                }
            })
        }),
    );
    let jf = fiber.j.clone();
    let phi: FieldFn = Arc::new(move |p: &ChartPoint| {
        let j = jf(&fiber_point(p, m));
        MultiArray::from_fn(&[n, n], |idx| {
            if idx[0] < m && idx[1] < m {
                j.get(idx)
            } else {
                0.0
            }
        })
    });
    let xi: VectorFieldFn = Arc::new(move |_p: &ChartPoint| {
        let mut v = vec![0.0; n];
        v[m] = 1.0;
        v
    });
    (metric, AlmostContactData { phi, xi })
}

fn fiber_point(p: &ChartPoint, m: usize) -> ChartPoint {
    ChartPoint::new(p.coords[..m].to_vec())
}

/// Lift of a holomorphic statistical structure to a Kenmotsu statistical
/// structure on the warped product: K(fiber, fiber) = fiber K,
/// K(·, ξ) = K(ξ, ·) = 0, K(ξ, ξ) = β ξ.
pub fn lift_statistical_structure(
    fiber: Arc<HolomorphicStatisticalManifold>,
    beta: ScalarFieldFn,
    name: impl Into<String>,
    alpha_box: (f64, f64),
    c_bar: Option<f64>,
) -> KenmotsuStatisticalManifold {
    let m = fiber.base.dim;
    let n = m + 1;
    let (metric, contact) = build_warped_contact(&fiber);
    let fiber_k = fiber.base.ktensor.clone();
    let ktensor = DifferenceTensorField::new(
        n,
        Arc::new(move |p: &ChartPoint| {
            let kf = fiber_k.at(&fiber_point(p, m));
            let b = beta(p);
            MultiArray::from_fn(&[n, n, n], |idx| {
                if idx[0] < m && idx[1] < m && idx[2] < m {
                    kf.get(idx)
                } else if idx[0] == m && idx[1] == m && idx[2] == m {
                    b
                } else {
                    0.0
                }
            })
        }),
    );
    let fiber_domain = fiber.base.domain.clone();
    let domain: DomainFn = Arc::new(move |p: &ChartPoint| fiber_domain(&fiber_point(p, m)));
    let mut sample_box = fiber.base.sample_box.clone();
    sample_box.push(alpha_box);
    let base = StatisticalManifold::new(n, metric, ktensor, domain, name, sample_box);
    KenmotsuStatisticalManifold {
        base,
        contact,
        c_bar,
        fiber: Some(fiber),
    }
}

/// max over frame pairs of ||K(X, φY) + φ K(X,Y)||_g.
pub fn kenmotsu_condition_residual(
    mk: &KenmotsuStatisticalManifold,
    p: &ChartPoint,
    frame: &Frame,
) -> Result<f64> {
    let g = mk.base.metric_at(p)?;
    let k = mk.base.ktensor.at(p);
    let phi = mk.contact.phi_at(p);
    let mut worst: f64 = 0.0;
    for a in 0..frame.len() {
        for b in 0..frame.len() {
            let x = frame.components(a);
            let y = frame.components(b);
            let lhs = apply2(&k, x, &phi.apply_matrix(y));
            let rhs = phi.apply_matrix(&apply2(&k, x, y));
            let v: Vec<f64> = lhs.iter().zip(&rhs).map(|(l, r)| l + r).collect();
            worst = worst.max(norm(&g, &v));
        }
    }
    Ok(worst)
}

/// Closed-form model curvature of constant φ-sectional curvature `c`:
/// `S(E,F)G = (c−3)/4 {g(F,G)E − g(E,G)F}
///          + (c+1)/4 {g(φF,G)φE − g(φE,G)φF − 2g(φE,F)φG
///                     − η(F)η(G)E + η(E)η(G)F + η(F)g(G,E)ξ − η(E)g(G,F)ξ}`.
pub fn model_curvature(
    c_bar: f64,
    g: &MultiArray,
    phi: &MultiArray,
    xi: &[f64],
    e: &[f64],
    f: &[f64],
    gv: &[f64],
) -> Vec<f64> {
    let n = g.shape()[0];
    let a = (c_bar - 3.0) / 4.0;
    let b = (c_bar + 1.0) / 4.0;
    let eta = |v: &[f64]| inner(g, v, xi);
    let pe = phi.apply_matrix(e);
    let pf = phi.apply_matrix(f);
    let pg = phi.apply_matrix(gv);
    let g_fg = inner(g, f, gv);
    let g_eg = inner(g, e, gv);
    let g_pfg = inner(g, &pf, gv);
    let g_peg = inner(g, &pe, gv);
    let g_pef = inner(g, &pe, f);
    let (eta_e, eta_f, eta_g) = (eta(e), eta(f), eta(gv));
    let g_ge = inner(g, gv, e);
    let g_gf = inner(g, gv, f);
    (0..n)
        .map(|i| {
            let first = a * (g_fg * e[i] - g_eg * f[i]);
            let second = b
                * (g_pfg * pe[i] - g_peg * pf[i] - 2.0 * g_pef * pg[i] - eta_f * eta_g * e[i]
                    + eta_e * eta_g * f[i]
                    + eta_f * g_ge * xi[i]
                    - eta_e * g_gf * xi[i]);
            first + second
        })
        .collect()
}

/// The model tensor with the same index layout as the numeric curvature:
/// entry `[l, i, j, k]` is the component of `S(∂i,∂j)∂k` along `∂l`.
pub fn model_curvature_tensor(
    c_bar: f64,
    g: &MultiArray,
    phi: &MultiArray,
    xi: &[f64],
) -> MultiArray {
    let n = g.shape()[0];
    let mut t = MultiArray::zeros(&[n, n, n, n]);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        for j in 0..n {
            let mut f = vec![0.0; n];
            f[j] = 1.0;
            for k in 0..n {
                let mut gv = vec![0.0; n];
                gv[k] = 1.0;
                let v = model_curvature(c_bar, g, phi, xi, &e, &f, &gv);
                for l in 0..n {
                    t.set(&[l, i, j, k], v[l]);
                }
            }
        }
    }
    t
}

/// Ricci coefficients of the model: `Ric = t1 g + t2 η⊗η` with
/// `t1 = (c(s+1) − 3s + 1)/2`, `t2 = −(c+1)(s+1)/2`.
pub fn model_ricci_coefficients(c_bar: f64, s: usize) -> (f64, f64) {
    let sf = s as f64;
    let t1 = (c_bar * (sf + 1.0) - 3.0 * sf + 1.0) / 2.0;
    let t2 = -(c_bar + 1.0) * (sf + 1.0) / 2.0;
    (t1, t2)
}

/// Model Ricci form evaluated on a pair of vectors.
pub fn model_ricci(
    c_bar: f64,
    s: usize,
    e: &[f64],
    f: &[f64],
    g: &MultiArray,
    xi: &[f64],
) -> f64 {
    let (t1, t2) = model_ricci_coefficients(c_bar, s);
    t1 * inner(g, e, f) + t2 * inner(g, e, xi) * inner(g, f, xi)
}

/// Model value of the fiber Ricci form: `e^{2α} (c+1)(s+1)/2 · g(E,E)`.
pub fn fiber_ricci_model(c_bar: f64, s: usize, alpha: f64, g_ee: f64) -> f64 {
    (2.0 * alpha).exp() * (c_bar + 1.0) * (s as f64 + 1.0) / 2.0 * g_ee
}

/// |Ric_fiber(E,E) − e^{2α}(c+1)(s+1)/2 · g(E,E)| with the fiber Ricci
/// computed from the fiber's statistical curvature.
pub fn fiber_ricci_check(
    fiber: &HolomorphicStatisticalManifold,
    c_bar: f64,
    alpha: f64,
    p: &ChartPoint,
    e: &TangentVector,
) -> Result<f64> {
    let dim = fiber.base.dim;
    debug_assert_eq!(dim % 2, 0);
    let s = dim / 2;
    let g = fiber.base.metric_at(p)?;
    let form = ricci_form(&fiber.base, p, RicciMode::Statistical)?;
    let mut ric = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            ric += form.get(&[i, j]) * e.components[i] * e.components[j];
        }
    }
    let model = fiber_ricci_model(c_bar, s, alpha, inner(&g, &e.components, &e.components));
    Ok((ric - model).abs())
}

/// One curvature identity with the Reeb field among the arguments, checked
/// under the displayed sign and the flipped sign.
#[derive(Debug, Clone)]
pub struct ReebIdentity {
    pub label: &'static str,
    pub displayed: f64,
    pub flipped: f64,
}

impl ReebIdentity {
    pub fn matching(&self, tol: f64) -> &'static str {
        match (self.displayed < tol, self.flipped < tol) {
            (true, true) => "both",
            (true, false) => "displayed",
            (false, true) => "flipped",
            (false, false) => "neither",
        }
    }
}

/// Curvature identities with ξ among the arguments, evaluated with the
/// statistical curvature tensor. Four have a sign ambiguity in the source
/// and are reported under both conventions; the cyclic combination is
/// sign-invariant and is returned as `cyclic`.
#[derive(Debug, Clone)]
pub struct ReebIdentityReport {
    pub identities: Vec<ReebIdentity>,
    /// ||S(E,φF)ξ + S(ξ,E)φF + S(φF,ξ)E||_g — zero under either convention.
    pub cyclic: f64,
}

impl ReebIdentityReport {
    pub fn best_residual(&self) -> f64 {
        self.identities
            .iter()
            .map(|i| i.displayed.min(i.flipped))
            .fold(self.cyclic, f64::max)
    }
}

pub fn reeb_curvature_identities(
    mk: &KenmotsuStatisticalManifold,
    p: &ChartPoint,
    e: &TangentVector,
    f: &TangentVector,
) -> Result<ReebIdentityReport> {
    let g = mk.base.metric_at(p)?;
    let (s_tensor, _) = statistical_curvature_tensor(&mk.base, p)?;
    let phi = mk.contact.phi_at(p);
    let xi = mk.contact.xi_at(p);
    let eta = |v: &[f64]| inner(&g, v, &xi);
    let ec = &e.components;
    let fc = &f.components;
    let n = mk.base.dim;

    let lin = |a: f64, u: &[f64], b: f64, v: &[f64]| -> Vec<f64> {
        (0..n).map(|i| a * u[i] + b * v[i]).collect()
    };
    let resid = |lhs: &[f64], rhs: &[f64]| -> (f64, f64) {
        let diff: Vec<f64> = lhs.iter().zip(rhs).map(|(l, r)| l - r).collect();
        let sum: Vec<f64> = lhs.iter().zip(rhs).map(|(l, r)| l + r).collect();
        (norm(&g, &diff), norm(&g, &sum))
    };

    let mut identities = Vec::new();

    // S(E,F)ξ ?= η(F)E − η(E)F
    let lhs1 = apply_curvature(&s_tensor, ec, fc, &xi);
    let rhs1 = lin(eta(fc), ec, -eta(ec), fc);
    let (d1, f1) = resid(&lhs1, &rhs1);
    identities.push(ReebIdentity {
        label: "S(E,F)xi = eta(F)E - eta(E)F",
        displayed: d1,
        flipped: f1,
    });

    // S(ξ,E)F ?= g(E,F)ξ − η(F)E
    let lhs2 = apply_curvature(&s_tensor, &xi, ec, fc);
    let rhs2 = lin(inner(&g, ec, fc), &xi, -eta(fc), ec);
    let (d2, f2) = resid(&lhs2, &rhs2);
    identities.push(ReebIdentity {
        label: "S(xi,E)F = g(E,F)xi - eta(F)E",
        displayed: d2,
        flipped: f2,
    });

    // S(φE,ξ)F ?= η(F)φE − g(φE,F)ξ
    let pe = phi.apply_matrix(ec);
    let lhs3 = apply_curvature(&s_tensor, &pe, &xi, fc);
    let rhs3 = lin(eta(fc), &pe, -inner(&g, &pe, fc), &xi);
    let (d3, f3) = resid(&lhs3, &rhs3);
    identities.push(ReebIdentity {
        label: "S(phiE,xi)F = eta(F)phiE - g(phiE,F)xi",
        displayed: d3,
        flipped: f3,
    });

    // Sectional with ξ: g(S(E,ξ)ξ,E) ?= g(E,E) − η(E)²
    let lhs5v = apply_curvature(&s_tensor, ec, &xi, &xi);
    let lhs5 = inner(&g, &lhs5v, ec);
    let rhs5 = inner(&g, ec, ec) - eta(ec) * eta(ec);
    identities.push(ReebIdentity {
        label: "g(S(E,xi)xi,E) = g(E,E) - eta(E)^2",
        displayed: (lhs5 - rhs5).abs(),
        flipped: (lhs5 + rhs5).abs(),
    });

    // Cyclic combination: S(E,φF)ξ + S(ξ,E)φF + S(φF,ξ)E = 0
    let pf = phi.apply_matrix(fc);
    let t1 = apply_curvature(&s_tensor, ec, &pf, &xi);
    let t2 = apply_curvature(&s_tensor, &xi, ec, &pf);
    let t3 = apply_curvature(&s_tensor, &pf, &xi, ec);
    let total: Vec<f64> = (0..n).map(|i| t1[i] + t2[i] + t3[i]).collect();
    let cyclic = norm(&g, &total);

    Ok(ReebIdentityReport { identities, cyclic })
}

/// Componentwise deviation of the lowered statistical curvature from the
/// lowered model tensor at the declared c; `None` when no c is declared.
pub fn model_match_residual(
    mk: &KenmotsuStatisticalManifold,
    p: &ChartPoint,
) -> Result<Option<f64>> {
    let Some(c_bar) = mk.c_bar else {
        return Ok(None);
    };
    let g = mk.base.metric_at(p)?;
    let (s_tensor, _) = statistical_curvature_tensor(&mk.base, p)?;
    let phi = mk.contact.phi_at(p);
    let xi = mk.contact.xi_at(p);
    let model = model_curvature_tensor(c_bar, &g, &phi, &xi);
    let low_s = lower_curvature(&g, &s_tensor);
    let low_m = lower_curvature(&g, &model);
    Ok(Some(low_s.max_abs_diff(&low_m)))
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

/// A named manifold construction: the statistical base plus optional contact
/// data, declared model constant, and the fiber it was lifted from.
#[derive(Clone)]
pub struct CatalogManifold {
    pub name: String,
    pub description: String,
    pub manifold: StatisticalManifold,
    pub contact: Option<AlmostContactData>,
    pub c_bar: Option<f64>,
    pub fiber: Option<Arc<HolomorphicStatisticalManifold>>,
    /// The entry is a lift of a flat fiber with K = beta eta(X)eta(Y)xi, the
    /// hypothesis class of the Reeb curvature identities.
    pub flat_fiber: bool,
}

impl CatalogManifold {
    pub fn dim(&self) -> usize {
        self.manifold.dim
    }

    pub fn to_kenmotsu(&self) -> Option<KenmotsuStatisticalManifold> {
        self.contact.as_ref().map(|contact| KenmotsuStatisticalManifold {
            base: self.manifold.clone(),
            contact: contact.clone(),
            c_bar: self.c_bar,
            fiber: self.fiber.clone(),
        })
    }
}

/// Catalog template: name, parameter signature, one-line description.
pub struct CatalogTemplate {
    pub name: &'static str,
    pub signature: &'static str,
    /// Dimension in terms of the parameters.
    pub dim: &'static str,
    pub description: &'static str,
    pub default_params: &'static [f64],
}

pub fn catalog_templates() -> Vec<CatalogTemplate> {
    vec![
        CatalogTemplate {
            name: "euclidean",
            signature: "euclidean(n)",
            dim: "n",
            description: "flat space with zero difference tensor; every curvature object vanishes",
            default_params: &[3.0],
        },
        CatalogTemplate {
            name: "example_3_4",
            signature: "example_3_4(lambda, beta)",
            dim: "3",
            description: "warped line over the conformal surface fiber x[(dx)^2+(dy)^2] with a lambda-scaled fiber difference tensor and K(xi,xi) = beta xi",
            default_params: &[1.0, 1.0],
        },
        CatalogTemplate {
            name: "example_3_4_literal",
            signature: "example_3_4_literal(lambda, beta)",
            dim: "3",
            description: "same lift built over the flat fiber metric (dx)^2+(dy)^2 as printed alongside the conformal form",
            default_params: &[1.0, 1.0],
        },
        CatalogTemplate {
            name: "hyperbolic_kenmotsu",
            signature: "hyperbolic_kenmotsu(s)",
            dim: "2s+1",
            description: "warped product of a line with flat C^s: the c = -1 model of constant phi-sectional curvature, zero difference tensor",
            default_params: &[1.0],
        },
        CatalogTemplate {
            name: "hyperbolic_kenmotsu_beta",
            signature: "hyperbolic_kenmotsu_beta(s, beta)",
            dim: "2s+1",
            description: "c = -1 model with difference tensor beta eta(X)eta(Y)xi",
            default_params: &[1.0, 0.7],
        },
        CatalogTemplate {
            name: "round_sphere_test",
            signature: "round_sphere_test(n)",
            dim: "n",
            description: "stereographic round sphere, sectional curvature +1 oracle",
            default_params: &[2.0],
        },
    ]
}

/// Standard complex structure on R^{2s}: J e_{2i} = e_{2i+1},
/// J e_{2i+1} = −e_{2i}.
fn standard_j(s: usize) -> MultiArray {
    let m = 2 * s;
    let mut j = MultiArray::zeros(&[m, m]);
    for i in 0..s {
        j.set(&[2 * i + 1, 2 * i], 1.0);
        j.set(&[2 * i, 2 * i + 1], -1.0);
    }
    j
}

/// Flat C^s fiber: euclidean metric, standard J, zero difference tensor.
pub fn flat_complex_fiber(s: usize) -> HolomorphicStatisticalManifold {
    let base = StatisticalManifold::euclidean(2 * s);
    let j = standard_j(s);
    HolomorphicStatisticalManifold {
        base,
        j: Arc::new(move |_| j.clone()),
    }
}

/// Difference tensor table of the surface fiber, scaled by lambda:
/// K(∂0,∂0) = −λ∂0, K(∂0,∂1) = K(∂1,∂0) = λ∂1, K(∂1,∂1) = λ∂0.
fn surface_fiber_k(lambda: f64) -> DifferenceTensorField {
    DifferenceTensorField::new(
        2,
        Arc::new(move |_| {
            let mut k = MultiArray::zeros(&[2, 2, 2]);
            k.set(&[0, 0, 0], -lambda);
            k.set(&[1, 0, 1], lambda);
            k.set(&[1, 1, 0], lambda);
            k.set(&[0, 1, 1], lambda);
            k
        }),
    )
}

/// Conformal surface fiber: g = x[(dx)^2 + (dy)^2] on x > 0, standard J,
/// lambda-scaled difference tensor.
pub fn surface_fiber(lambda: f64) -> HolomorphicStatisticalManifold {
    let metric = MetricField::new(
        2,
        Arc::new(|p: &ChartPoint| {
            let x = p.coords[0];
            MultiArray::from_vec(&[2, 2], vec![x, 0.0, 0.0, x])
        }),
    );
    let base = StatisticalManifold::new(
        2,
        metric,
        surface_fiber_k(lambda),
        Arc::new(|p: &ChartPoint| p.coords[0] > 0.0),
        "surface_fiber",
        vec![(0.6, 2.4), (-1.0, 1.0)],
    );
    HolomorphicStatisticalManifold {
        base,
        j: Arc::new(|_| standard_j(1)),
    }
}

/// Flat variant of the surface fiber: euclidean metric with the same J and
/// difference tensor table.
pub fn flat_surface_fiber(lambda: f64) -> HolomorphicStatisticalManifold {
    let mut base = StatisticalManifold::euclidean(2);
    base.ktensor = surface_fiber_k(lambda);
    base.domain = Arc::new(|p: &ChartPoint| p.coords[0] > 0.0);
    base.sample_box = vec![(0.6, 2.4), (-1.0, 1.0)];
    base.name = "flat_surface_fiber".into();
    HolomorphicStatisticalManifold {
        base,
        j: Arc::new(|_| standard_j(1)),
    }
}

fn expect_params(name: &str, params: &[f64], count: usize) -> Result<()> {
    if params.len() != count {
        return Err(GeomError::Config(format!(
            "{name} takes {count} parameter(s), got {}",
            params.len()
        )));
    }
    Ok(())
}

fn int_param(name: &str, v: f64, what: &str) -> Result<usize> {
    if v.fract() != 0.0 || !(1.0..=16.0).contains(&v) {
        return Err(GeomError::Config(format!(
            "{name}: {what} must be an integer in 1..=16, got {v}"
        )));
    }
    Ok(v as usize)
}

/// Build a catalog manifold by name and parameter list.
pub fn build_manifold(name: &str, params: &[f64]) -> Result<CatalogManifold> {
    match name {
        "euclidean" => {
            expect_params(name, params, 1)?;
            let n = int_param(name, params[0], "dimension")?;
            Ok(CatalogManifold {
                name: format!("euclidean({n})"),
                description: "flat space, zero difference tensor".into(),
                manifold: StatisticalManifold::euclidean(n),
                contact: None,
                c_bar: None,
                fiber: None,
                flat_fiber: false,
            })
        }
        "example_3_4" | "example_3_4_literal" => {
            expect_params(name, params, 2)?;
            let (lambda, beta) = (params[0], params[1]);
            let fiber = Arc::new(if name == "example_3_4" {
                surface_fiber(lambda)
            } else {
                flat_surface_fiber(lambda)
            });
            let mk = lift_statistical_structure(
                fiber,
                Arc::new(move |_| beta),
                format!("{name}({lambda},{beta})"),
                (-0.6, 0.6),
                None,
            );
            Ok(CatalogManifold {
                name: format!("{name}({lambda},{beta})"),
                description: "warped lift of the surface fiber".into(),
                manifold: mk.base.clone(),
                contact: Some(mk.contact),
                c_bar: None,
                fiber: mk.fiber,
                flat_fiber: false,
            })
        }
        "hyperbolic_kenmotsu" => {
            expect_params(name, params, 1)?;
            let s = int_param(name, params[0], "s")?;
            let mk = lift_statistical_structure(
                Arc::new(flat_complex_fiber(s)),
                Arc::new(|_| 0.0),
                format!("hyperbolic_kenmotsu({s})"),
                (-0.7, 0.7),
                Some(-1.0),
            );
            Ok(CatalogManifold {
                name: format!("hyperbolic_kenmotsu({s})"),
                description: "constant phi-sectional curvature c = -1 model".into(),
                manifold: mk.base.clone(),
                contact: Some(mk.contact),
                c_bar: Some(-1.0),
                fiber: mk.fiber,
                flat_fiber: true,
            })
        }
        "hyperbolic_kenmotsu_beta" => {
            expect_params(name, params, 2)?;
            let s = int_param(name, params[0], "s")?;
            let beta = params[1];
            let mk = lift_statistical_structure(
                Arc::new(flat_complex_fiber(s)),
                Arc::new(move |_| beta),
                format!("hyperbolic_kenmotsu_beta({s},{beta})"),
                (-0.7, 0.7),
                Some(-1.0),
            );
            Ok(CatalogManifold {
                name: format!("hyperbolic_kenmotsu_beta({s},{beta})"),
                description: "c = -1 model with difference tensor beta eta eta xi".into(),
                manifold: mk.base.clone(),
                contact: Some(mk.contact),
                c_bar: Some(-1.0),
                fiber: mk.fiber,
                flat_fiber: true,
            })
        }
        "round_sphere_test" => {
            expect_params(name, params, 1)?;
            let n = int_param(name, params[0], "dimension")?;
            let metric = MetricField::new(
                n,
                Arc::new(move |p: &ChartPoint| {
                    let r2: f64 = p.coords.iter().map(|c| c * c).sum();
                    let conf = 4.0 / (1.0 + r2).powi(2);
                    MultiArray::from_fn(&[n, n], |idx| if idx[0] == idx[1] { conf } else { 0.0 })
                }),
            );
            let manifold = StatisticalManifold::new(
                n,
                metric,
                DifferenceTensorField::zero(n),
                Arc::new(|_| true),
                format!("round_sphere_test({n})"),
                vec![(-0.8, 0.8); n],
            );
            Ok(CatalogManifold {
                name: format!("round_sphere_test({n})"),
                description: "stereographic round sphere, sectional +1 oracle".into(),
                manifold,
                contact: None,
                c_bar: None,
                fiber: None,
                flat_fiber: false,
            })
        }
        other => Err(GeomError::CatalogMiss { name: other.into() }),
    }
}

/// Catalog entries instantiated at their default parameters.
pub fn catalog() -> Vec<CatalogManifold> {
    catalog_templates()
        .iter()
        .map(|t| build_manifold(t.name, t.default_params).expect("default params are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::sectional_curvature;
    use crate::tensor::complete_frame;
    use nalgebra::DMatrix;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hyperbolic(s: usize) -> KenmotsuStatisticalManifold {
        build_manifold("hyperbolic_kenmotsu", &[s as f64])
            .unwrap()
            .to_kenmotsu()
            .unwrap()
    }

    #[test]
    fn warped_metric_of_flat_fiber() {
        let fiber = flat_complex_fiber(1);
        let (metric, contact) = build_warped_contact(&fiber);
        let p = ChartPoint::new(vec![0.3, -0.2, 0.5]);
        let g = metric.at(&p);
        let w = (2.0 * 0.5f64).exp();
        assert!((g.get(&[0, 0]) - w).abs() < 1e-14);
        assert!((g.get(&[1, 1]) - w).abs() < 1e-14);
        assert!((g.get(&[2, 2]) - 1.0).abs() < 1e-14);
        assert!(g.get(&[0, 1]).abs() < 1e-14);
        let xi = contact.xi_at(&p);
        assert_eq!(xi, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn warped_metric_of_surface_fiber() {
        let fiber = surface_fiber(1.0);
        let (metric, _) = build_warped_contact(&fiber);
        let p = ChartPoint::new(vec![1.7, 0.2, -0.3]);
        let g = metric.at(&p);
        let expected = (2.0 * (-0.3f64)).exp() * 1.7;
        assert!((g.get(&[0, 0]) - expected).abs() < 1e-14);
        assert!((g.get(&[1, 1]) - expected).abs() < 1e-14);
    }

    #[test]
    fn contact_invariants_hold_at_50_points() {
        let entry = build_manifold("example_3_4", &[1.0, 1.0]).unwrap();
        let mk = entry.to_kenmotsu().unwrap();
        for p in mk.base.sample_points(50, 31).unwrap() {
            let g = mk.base.metric_at(&p).unwrap();
            let res = mk.contact.invariants_residual(&g, &p);
            assert!(res.max() < 1e-10, "{res:?} at {:?}", p.coords);
        }
    }

    #[test]
    fn surface_fiber_is_holomorphic_statistical() {
        let fiber = surface_fiber(1.0);
        for p in fiber.base.sample_points(30, 3).unwrap() {
            assert!(fiber.invariants_residual(&p).unwrap() < 1e-12);
        }
    }

    #[test]
    fn lifted_difference_tensor_table() {
        // K(∂0,∂0) = −λ∂0, K(∂α,∂α) = ∂α (β = 1), K(∂i,∂α) = 0.
        let entry = build_manifold("example_3_4", &[1.0, 1.0]).unwrap();
        let p = ChartPoint::new(vec![1.0, 0.0, 0.0]);
        let k = entry.manifold.ktensor.at(&p);
        assert!((k.get(&[0, 0, 0]) + 1.0).abs() < 1e-14);
        assert!((k.get(&[1, 0, 1]) - 1.0).abs() < 1e-14);
        assert!((k.get(&[0, 1, 1]) - 1.0).abs() < 1e-14);
        assert!((k.get(&[2, 2, 2]) - 1.0).abs() < 1e-14);
        for a in 0..3 {
            assert!(k.get(&[a, 0, 2]).abs() < 1e-14);
            assert!(k.get(&[a, 2, 0]).abs() < 1e-14);
            assert!(k.get(&[a, 1, 2]).abs() < 1e-14);
        }
    }

    #[test]
    fn lifted_structures_pass_statistical_axioms() {
        for name in ["example_3_4", "example_3_4_literal"] {
            let entry = build_manifold(name, &[1.0, 1.0]).unwrap();
            let m = &entry.manifold;
            for p in m.sample_points(20, 17).unwrap() {
                let g = m.metric_at(&p).unwrap();
                let frame = complete_frame(&TangentVector::coordinate(&p, 0), &g, 5).unwrap();
                let res = m.check_statistical(&p, &frame).unwrap();
                assert!(res.max() < 1e-6, "{name}: {res:?}");
            }
        }
    }

    #[test]
    fn kenmotsu_condition_on_lifted_entries() {
        for name in ["example_3_4", "hyperbolic_kenmotsu_beta"] {
            let params: &[f64] = if name == "example_3_4" {
                &[1.0, 1.0]
            } else {
                &[1.0, 0.7]
            };
            let mk = build_manifold(name, params).unwrap().to_kenmotsu().unwrap();
            for p in mk.base.sample_points(20, 7).unwrap() {
                let g = mk.base.metric_at(&p).unwrap();
                let frame = complete_frame(&TangentVector::coordinate(&p, 0), &g, 9).unwrap();
                let r = kenmotsu_condition_residual(&mk, &p, &frame).unwrap();
                assert!(r < 1e-8, "{name}: residual {r}");
            }
        }
    }

    #[test]
    fn kenmotsu_condition_detects_perturbation() {
        // K(∂0,∂0) = 0.2 ∂0 violates the anti-commutation by exactly 0.2:
        // K(∂0, φ∂0) = 0 while φK(∂0,∂0) = 0.2 ∂1.
        let mk = hyperbolic(1);
        let p = ChartPoint::new(vec![0.1, 0.2, 0.0]);
        let base = &mk.base;
        let perturbed = DifferenceTensorField::new(3, {
            Arc::new(move |_: &ChartPoint| {
                let mut k = MultiArray::zeros(&[3, 3, 3]);
                k.set(&[0, 0, 0], 0.2);
                k
            })
        });
        let mut pert_base = base.clone();
        pert_base.ktensor = perturbed;
        let pert = KenmotsuStatisticalManifold {
            base: pert_base,
            contact: mk.contact.clone(),
            c_bar: None,
            fiber: None,
        };
        let e0 = TangentVector::coordinate(&p, 0);
        let frame = Frame::new(vec![e0], false);
        let r = kenmotsu_condition_residual(&pert, &p, &frame).unwrap();
        assert!((r - 0.2).abs() < 1e-12, "residual {r}");
        // And the unperturbed table gives zero.
        let z = kenmotsu_condition_residual(&mk, &p, &frame).unwrap();
        assert!(z < 1e-14);
    }

    #[test]
    fn structure_field_completes_to_an_orthonormal_frame() {
        let entry = build_manifold("example_3_4", &[1.0, 1.0]).unwrap();
        let mk = entry.to_kenmotsu().unwrap();
        for p in mk.base.sample_points(10, 29).unwrap() {
            let g = mk.base.metric_at(&p).unwrap();
            let xi = TangentVector::new(p.clone(), mk.contact.xi_at(&p));
            let frame = complete_frame(&xi, &g, 3).unwrap();
            assert_eq!(frame.components(0), xi.components.as_slice());
            assert!(frame.orthonormality_residual(&g) < 1e-10);
        }
    }

    #[test]
    fn model_curvature_constant_minus_one_reduces_to_space_form() {
        let mk = hyperbolic(1);
        let p = ChartPoint::new(vec![0.2, -0.1, 0.3]);
        let g = mk.base.metric_at(&p).unwrap();
        let phi = mk.contact.phi_at(&p);
        let xi = mk.contact.xi_at(&p);
        let frame = complete_frame(&TangentVector::coordinate(&p, 0), &g, 3).unwrap();
        let (e, f) = (frame.components(0), frame.components(1));
        // S(E,F)F = −E for orthonormal E,F at c = −1.
        let v = model_curvature(-1.0, &g, &phi, &xi, e, f, f);
        for (vi, ei) in v.iter().zip(e) {
            assert!((vi + ei).abs() < 1e-12, "{v:?}");
        }
        // S(ξ,F)ξ = +F for unit F ⊥ ξ  (equivalently R(ξ,F)ξ in the model).
        let fib = [1.0 / g.get(&[0, 0]).sqrt(), 0.0, 0.0];
        let w = model_curvature(-1.0, &g, &phi, &xi, &xi, &fib, &xi);
        for (wi, fi) in w.iter().zip(&fib) {
            assert!((wi - fi).abs() < 1e-12, "{w:?}");
        }
    }

    #[test]
    fn model_curvature_phi_sectional_value() {
        // At c = 3 only the φ-terms survive; for unit E ⊥ ξ and F = G = φE
        // the hand contraction gives S(E,φE)φE = 3E.
        let mk = hyperbolic(1);
        let p = ChartPoint::new(vec![0.0, 0.0, 0.0]);
        let g = mk.base.metric_at(&p).unwrap();
        let phi = mk.contact.phi_at(&p);
        let xi = mk.contact.xi_at(&p);
        let e = [1.0, 0.0, 0.0];
        let pe = phi.apply_matrix(&e);
        let v = model_curvature(3.0, &g, &phi, &xi, &e, &pe, &pe);
        assert!((v[0] - 3.0).abs() < 1e-12, "{v:?}");
        assert!(v[1].abs() < 1e-12 && v[2].abs() < 1e-12);
        // And the φ-sectional curvature of the model equals c in general.
        let k = inner(&g, &v, &e);
        assert!((k - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lowered_statistical_curvature_matches_model_on_hyperbolic() {
        for s in [1usize, 2] {
            let mk = hyperbolic(s);
            for p in mk.base.sample_points(5, 41).unwrap() {
                let r = model_match_residual(&mk, &p).unwrap().unwrap();
                assert!(r < 1e-5, "s = {s}: residual {r} at {:?}", p.coords);
            }
        }
    }

    #[test]
    fn beta_entry_still_matches_model() {
        // The commutator of beta eta eta xi with itself vanishes, so S is
        // unchanged and the declared c = -1 model still holds.
        let mk = build_manifold("hyperbolic_kenmotsu_beta", &[1.0, 0.7])
            .unwrap()
            .to_kenmotsu()
            .unwrap();
        for p in mk.base.sample_points(5, 43).unwrap() {
            let r = model_match_residual(&mk, &p).unwrap().unwrap();
            assert!(r < 1e-5, "residual {r}");
        }
    }

    #[test]
    fn sectional_curvature_of_sampled_planes_is_minus_one() {
        let mk = hyperbolic(2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in mk.base.sample_points(10, 11).unwrap() {
            let e = mk.base.sample_vector(&p, &mut rng);
            let f = mk.base.sample_vector(&p, &mut rng);
            let k = sectional_curvature(&mk.base, &p, &e, &f).unwrap();
            assert!((k + 1.0).abs() < 1e-5, "k = {k}");
        }
    }

    #[test]
    fn model_ricci_coefficient_table() {
        let (t1, t2) = model_ricci_coefficients(-1.0, 1);
        assert!((t1 + 2.0).abs() < 1e-14 && t2.abs() < 1e-14);
        let (t1, t2) = model_ricci_coefficients(-1.0, 3);
        assert!((t1 + 6.0).abs() < 1e-14 && t2.abs() < 1e-14);
        let (t1, t2) = model_ricci_coefficients(3.0, 1);
        assert!((t1 - 2.0).abs() < 1e-14 && (t2 + 4.0).abs() < 1e-14);
    }

    #[test]
    fn model_ricci_is_frame_trace_of_model_curvature() {
        // Pure algebra: for random compatible (g, φ, ξ), tracing the model
        // tensor over an orthonormal frame reproduces t1, t2.
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for s in [1usize, 2] {
            let n = 2 * s + 1;
            for _ in 0..10 {
                let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
                let gm = &a.transpose() * &a + DMatrix::identity(n, n) * 0.6;
                let g = MultiArray::from_matrix(&gm);
                let p = ChartPoint::new(vec![0.0; n]);
                let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let nr = inner(&g, &raw, &raw).sqrt();
                let xi_v: Vec<f64> = raw.iter().map(|c| c / nr).collect();
                let xi_tv = TangentVector::new(p.clone(), xi_v.clone());
                let frame = complete_frame(&xi_tv, &g, 5).unwrap();
                // φ rotates consecutive frame pairs, kills ξ.
                let bmat = DMatrix::from_fn(n, n, |r, c| frame.components(c)[r]);
                let mut phib = DMatrix::zeros(n, n);
                for i in 0..s {
                    let (a_col, b_col) = (1 + 2 * i, 2 + 2 * i);
                    for r in 0..n {
                        phib[(r, a_col)] = frame.components(b_col)[r];
                        phib[(r, b_col)] = -frame.components(a_col)[r];
                    }
                }
                let phi_m = &phib * bmat.try_inverse().unwrap();
                let phi = MultiArray::from_matrix(&phi_m);
                let contact = AlmostContactData {
                    phi: Arc::new(move |_| phi.clone()),
                    xi: Arc::new(move |_| xi_v.clone()),
                };
                let res = contact.invariants_residual(&g, &p);
                assert!(res.max() < 1e-10, "constructed contact data: {res:?}");

                let c_bar = rng.gen_range(-3.0..3.0);
                let model = model_curvature_tensor(c_bar, &g, &contact.phi_at(&p), &contact.xi_at(&p));
                let low = lower_curvature(&g, &model);
                // Ric(E,F) = Σ_i g(S(e_i,E)F, e_i) over the orthonormal frame.
                let e = frame.components(1).to_vec();
                let f = frame.components(if n > 3 { 3 } else { 1 }).to_vec();
                let mut ric = 0.0;
                for i in 0..n {
                    let ei = frame.components(i);
                    // lowered[a,b,c,d] with E_a = e_i, E_b = e, E_c = f, E_d = e_i
                    let mut v = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            for c in 0..n {
                                for d in 0..n {
                                    v += low.get(&[a, b, c, d]) * ei[a] * e[b] * f[c] * ei[d];
                                }
                            }
                        }
                    }
                    ric += v;
                }
                let expected = model_ricci(c_bar, s, &e, &f, &g, &contact.xi_at(&p));
                assert!(
                    (ric - expected).abs() < 1e-9,
                    "s={s} c={c_bar}: {ric} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn ricci_coefficients_never_vanish_simultaneously() {
        // t2 = 0 forces c = −1, which gives t1 = −2s ≠ 0 for s ≥ 1.
        for s in 1..=4usize {
            let mut c = -5.0;
            while c <= 5.0 {
                let (t1, t2) = model_ricci_coefficients(c, s);
                assert!(
                    t1.abs() > 1e-9 || t2.abs() > 1e-9,
                    "s={s}, c={c}: ({t1}, {t2})"
                );
                c += 0.25;
            }
        }
    }

    #[test]
    fn ambient_ricci_matches_coefficients_on_hyperbolic() {
        for s in [1usize, 2] {
            let mk = hyperbolic(s);
            let n = 2 * s + 1;
            let p = {
                let mut c = vec![0.2; n];
                c[n - 1] = -0.1;
                ChartPoint::new(c)
            };
            let g = mk.base.metric_at(&p).unwrap();
            let form = ricci_form(&mk.base, &p, RicciMode::Statistical).unwrap();
            let xi = mk.contact.xi_at(&p);
            let (t1, t2) = model_ricci_coefficients(-1.0, s);
            let mut worst: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let gij = g.get(&[i, j]);
                    let etai: f64 = (0..n).map(|a| g.get(&[a, i]) * xi[a]).sum();
                    let etaj: f64 = (0..n).map(|a| g.get(&[a, j]) * xi[a]).sum();
                    let expected = t1 * gij + t2 * etai * etaj;
                    worst = worst.max((form.get(&[i, j]) - expected).abs());
                }
            }
            assert!(worst < 1e-5, "s = {s}: residual {worst}");
        }
    }

    #[test]
    fn fiber_ricci_vanishes_for_flat_fiber_at_c_minus_one() {
        let fiber = flat_complex_fiber(1);
        let p = ChartPoint::new(vec![0.3, -0.2]);
        let e = TangentVector::new(p.clone(), vec![0.8, 0.6]);
        for alpha in [0.0, 0.4] {
            let r = fiber_ricci_check(&fiber, -1.0, alpha, &p, &e).unwrap();
            assert!(r < 1e-9, "alpha {alpha}: residual {r}");
        }
    }

    #[test]
    fn fiber_ricci_model_value() {
        // c = 1, s = 1, α = 0, unit E: e^0 · (1+1)(1+1)/2 = 2.
        assert!((fiber_ricci_model(1.0, 1, 0.0, 1.0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn reeb_identities_match_flipped_sign_on_flat_fiber_lifts() {
        for (name, params) in [
            ("hyperbolic_kenmotsu", vec![1.0]),
            ("hyperbolic_kenmotsu_beta", vec![1.0, 0.7]),
        ] {
            let mk = build_manifold(name, &params).unwrap().to_kenmotsu().unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for p in mk.base.sample_points(5, 19).unwrap() {
                let e = mk.base.sample_vector(&p, &mut rng);
                let f = mk.base.sample_vector(&p, &mut rng);
                let rep = reeb_curvature_identities(&mk, &p, &e, &f).unwrap();
                for id in &rep.identities {
                    assert!(
                        id.flipped < 1e-5,
                        "{name} {}: flipped {} displayed {}",
                        id.label,
                        id.flipped,
                        id.displayed
                    );
                    assert_eq!(id.matching(1e-5), "flipped", "{}", id.label);
                }
                assert!(rep.cyclic < 1e-5, "cyclic {}", rep.cyclic);
            }
        }
    }

    #[test]
    fn catalog_lists_expected_entries() {
        let names: Vec<&str> = catalog_templates().iter().map(|t| t.name).collect();
        assert!(names.contains(&"example_3_4"));
        assert!(names.contains(&"hyperbolic_kenmotsu"));
        assert!(names.contains(&"round_sphere_test"));
        assert!(names.contains(&"euclidean"));
        let entries = catalog();
        assert_eq!(entries.len(), names.len());
    }

    #[test]
    fn hyperbolic_entry_has_declared_constant() {
        let entry = build_manifold("hyperbolic_kenmotsu", &[1.0]).unwrap();
        assert_eq!(entry.dim(), 3);
        assert_eq!(entry.c_bar, Some(-1.0));
    }

    #[test]
    fn unknown_entry_is_a_catalog_miss() {
        assert!(matches!(
            build_manifold("mystery", &[]),
            Err(GeomError::CatalogMiss { .. })
        ));
    }
}
