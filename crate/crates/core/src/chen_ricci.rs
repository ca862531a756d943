//! The lower bound for the statistical Ricci curvature of a unit tangent
//! direction of a submanifold, its equality case, corollary variants, and
//! the constrained-extremum facts the derivation rests on.
//!
//! The bound, for a unit E tangent to an (k+1)-dimensional submanifold of a
//! (2s+1)-dimensional ambient with constant φ-sectional curvature c:
//!
//! `Ric(E) ≥ 2 Ric0(E) − {3(c+1)/4 ||PE||² + k/4 [(c+1)(1 − g(E,ξ)²) − 4]}
//!           − (k+1)²/8 [||H||² + ||H*||²]`.

use crate::curvature::{apply_curvature, connection_curvature_tensor, statistical_curvature_tensor};
use crate::error::{GeomError, Result};
use crate::statistical::Connection;
use crate::submanifold::{
    induced_geometry_adapted, pc_decomposition, Immersion, IntrinsicCurvature,
    SubmanifoldGeometry,
};
use crate::tensor::{inner, ChartPoint, MultiArray};

/// Everything the right side of the bound consumes, measured or prescribed.
#[derive(Debug, Clone, Copy)]
pub struct RicciBoundInput {
    pub c_bar: f64,
    /// dim N − 1.
    pub k: usize,
    pub p_e_norm_sq: f64,
    pub g_e_xi: f64,
    pub ric0_e: f64,
    pub h_norm_sq: f64,
    pub h_star_norm_sq: f64,
    pub h0_norm_sq: f64,
    pub g_h_hstar: f64,
}

impl RicciBoundInput {
    pub fn validate(&self) -> Result<()> {
        if self.p_e_norm_sq < -1e-12
            || self.h_norm_sq < -1e-12
            || self.h_star_norm_sq < -1e-12
            || self.h0_norm_sq < -1e-12
        {
            return Err(GeomError::Precondition("negative squared norm".into()));
        }
        Ok(())
    }

    /// The curly-braced ambient term of the bound.
    pub fn kenmotsu_term(&self) -> f64 {
        let c = self.c_bar;
        3.0 * (c + 1.0) / 4.0 * self.p_e_norm_sq
            + self.k as f64 / 4.0
                * ((c + 1.0) * (1.0 - self.g_e_xi * self.g_e_xi) - 4.0)
    }
}

/// Right side of the main bound.
pub fn ricci_bound_rhs(inp: &RicciBoundInput) -> f64 {
    let k1 = (inp.k + 1) as f64;
    2.0 * inp.ric0_e - inp.kenmotsu_term()
        - k1 * k1 / 8.0 * (inp.h_norm_sq + inp.h_star_norm_sq)
}

/// Rewritings and specializations of the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorollaryVariant {
    /// Mean-curvature rewrite through 2H0 = H + H*.
    MeanRewrite,
    /// N minimal with respect to the Levi-Civita connection (H0 = 0).
    Minimal,
    /// E orthogonal to ξ.
    XiOrthogonal,
    /// E ⊥ ξ on an invariant submanifold (||PE||² = 1).
    XiOrthInvariant,
    /// E ⊥ ξ on an anti-invariant submanifold (PE = 0).
    XiOrthAntiInvariant,
    /// Flat-fiber lift at c = −1, additive constant as displayed (+4).
    FlatFiberDisplayed,
    /// Flat-fiber lift at c = −1, additive constant as derived (+k).
    FlatFiberDerived,
}

const VARIANT_TOL: f64 = 1e-8;

/// The selected variant's right side. Variant preconditions are enforced.
pub fn corollary_bounds(inp: &RicciBoundInput, variant: CorollaryVariant) -> Result<f64> {
    inp.validate()?;
    let k = inp.k as f64;
    let k1 = k + 1.0;
    let c = inp.c_bar;
    let hh = inp.h_norm_sq + inp.h_star_norm_sq;
    match variant {
        CorollaryVariant::MeanRewrite => Ok(2.0 * inp.ric0_e - inp.kenmotsu_term()
            - k1 * k1 / 2.0 * inp.h0_norm_sq
            + k1 * k1 / 4.0 * inp.g_h_hstar),
        CorollaryVariant::Minimal => {
            if inp.h0_norm_sq > VARIANT_TOL {
                return Err(GeomError::Precondition(format!(
                    "minimal variant requires ||H0||² = 0, got {}",
                    inp.h0_norm_sq
                )));
            }
            Ok(2.0 * inp.ric0_e - inp.kenmotsu_term() + k1 * k1 / 4.0 * inp.g_h_hstar)
        }
        CorollaryVariant::XiOrthogonal => {
            if inp.g_e_xi.abs() > VARIANT_TOL {
                return Err(GeomError::Precondition(format!(
                    "orthogonal variant requires g(E,xi) = 0, got {}",
                    inp.g_e_xi
                )));
            }
            Ok(2.0 * inp.ric0_e
                - (3.0 * (c + 1.0) / 4.0 * inp.p_e_norm_sq + (c - 3.0) * k / 4.0)
                - k1 * k1 / 8.0 * hh)
        }
        CorollaryVariant::XiOrthInvariant => {
            if inp.g_e_xi.abs() > VARIANT_TOL || (inp.p_e_norm_sq - 1.0).abs() > VARIANT_TOL {
                return Err(GeomError::Precondition(
                    "invariant variant requires g(E,xi) = 0 and ||PE||² = 1".into(),
                ));
            }
            Ok(2.0 * inp.ric0_e - (c * (k + 3.0) + 3.0 * (1.0 - k)) / 4.0 - k1 * k1 / 8.0 * hh)
        }
        CorollaryVariant::XiOrthAntiInvariant => {
            if inp.g_e_xi.abs() > VARIANT_TOL || inp.p_e_norm_sq > VARIANT_TOL {
                return Err(GeomError::Precondition(
                    "anti-invariant variant requires g(E,xi) = 0 and PE = 0".into(),
                ));
            }
            Ok(2.0 * inp.ric0_e - k * (c - 3.0) / 4.0 - k1 * k1 / 8.0 * hh)
        }
        CorollaryVariant::FlatFiberDisplayed | CorollaryVariant::FlatFiberDerived => {
            if (c + 1.0).abs() > VARIANT_TOL {
                return Err(GeomError::Precondition(format!(
                    "flat-fiber variant requires c = -1, got {c}"
                )));
            }
            let constant = if variant == CorollaryVariant::FlatFiberDisplayed {
                4.0
            } else {
                k
            };
            Ok(2.0 * inp.ric0_e + constant - k1 * k1 / 8.0 * hh)
        }
    }
}

/// Residuals of the equality conditions for the first frame direction:
/// `2h(E,E) = (k+1)H`, `2h*(E,E) = (k+1)H*`, `h(E,F) = 0` and
/// `h*(E,F) = 0` for frame F ⊥ E.
#[derive(Debug, Clone, Copy)]
pub struct EqualityResiduals {
    pub umbilic_h: f64,
    pub umbilic_h_star: f64,
    pub mixed_h: f64,
    pub mixed_h_star: f64,
}

impl EqualityResiduals {
    pub fn max(&self) -> f64 {
        self.umbilic_h
            .max(self.umbilic_h_star)
            .max(self.mixed_h)
            .max(self.mixed_h_star)
    }
}

/// Equality residuals from second-fundamental-form components in an
/// orthonormal frame whose first vector is the tested direction.
pub fn equality_residuals_from_forms(
    h: &MultiArray,
    h_star: &MultiArray,
    n: usize,
    m: usize,
) -> EqualityResiduals {
    let mean = |t: &MultiArray, r: usize| -> f64 {
        (0..n).map(|a| t.get(&[a, a, r])).sum::<f64>() / n as f64
    };
    let mut umbilic_h = 0.0f64;
    let mut umbilic_h_star = 0.0f64;
    for r in 0..m {
        // 2h(E,E) − (k+1)H, componentwise in the normal frame; k+1 = n.
        umbilic_h += (2.0 * h.get(&[0, 0, r]) - n as f64 * mean(h, r)).powi(2);
        umbilic_h_star +=
            (2.0 * h_star.get(&[0, 0, r]) - n as f64 * mean(h_star, r)).powi(2);
    }
    let mut mixed_h = 0.0f64;
    let mut mixed_h_star = 0.0f64;
    for b in 1..n {
        let mut sh = 0.0;
        let mut shs = 0.0;
        for r in 0..m {
            sh += h.get(&[0, b, r]).powi(2);
            shs += h_star.get(&[0, b, r]).powi(2);
        }
        mixed_h = mixed_h.max(sh.sqrt());
        mixed_h_star = mixed_h_star.max(shs.sqrt());
    }
    EqualityResiduals {
        umbilic_h: umbilic_h.sqrt(),
        umbilic_h_star: umbilic_h_star.sqrt(),
        mixed_h,
        mixed_h_star,
    }
}

pub fn equality_case_check(geom: &SubmanifoldGeometry) -> EqualityResiduals {
    let n = geom.tangent_frame.len();
    let m = geom.normal_frame.len();
    equality_residuals_from_forms(&geom.h, &geom.h_star, n, m)
}

/// Outcome of one bound evaluation.
#[derive(Debug, Clone)]
pub struct InequalityVerdict {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub equality: bool,
    pub residuals: EqualityResiduals,
    pub input: RicciBoundInput,
}

/// Measures every input of the bound from the induced geometry at `p` with
/// unit direction `e_src` (source components, normalized internally), then
/// evaluates both sides. Negative margins beyond tolerance are the
/// caller's to flag; nothing is asserted here.
pub fn verify_inequality(
    imm: &Immersion,
    intrinsic: &IntrinsicCurvature,
    p: &ChartPoint,
    e_src: &[f64],
    seed: u64,
    equality_tol: f64,
) -> Result<InequalityVerdict> {
    let contact = imm.ambient.contact.as_ref().ok_or_else(|| {
        GeomError::Precondition("bound requires an ambient with contact data".into())
    })?;
    let c_bar = imm.ambient.c_bar.ok_or_else(|| {
        GeomError::Precondition("bound requires a declared phi-sectional constant".into())
    })?;
    let geom = induced_geometry_adapted(imm, p, Some(e_src), seed)?;
    let n = imm.src_dim;
    let k = n - 1;

    // Intrinsic traces over the adapted source frame (f_0 = E).
    let nm = &intrinsic.manifold;
    let g_n = nm.metric_at(p)?;
    let (s_n, _) = statistical_curvature_tensor(nm, p)?;
    let r0_n = connection_curvature_tensor(nm, Connection::LeviCivita, p)?;
    let trace = |t: &MultiArray| -> f64 {
        let e = &geom.src_frame[0];
        (1..n)
            .map(|i| {
                let fi = &geom.src_frame[i];
                let v = apply_curvature(t, fi, e, e);
                inner(&g_n, &v, fi)
            })
            .sum()
    };
    let lhs = trace(&s_n);
    let ric0_e = trace(&r0_n);

    let g_amb = imm.ambient.manifold.metric_at(&geom.ambient_point)?;
    let e_amb = geom.tangent_frame.components(0);
    let (p_part, _) = pc_decomposition(imm, &geom, e_amb)?;
    let p_e_norm_sq = inner(&g_amb, &p_part, &p_part);
    let xi = contact.xi_at(&geom.ambient_point);
    let g_e_xi = inner(&g_amb, e_amb, &xi);

    let input = RicciBoundInput {
        c_bar,
        k,
        p_e_norm_sq,
        g_e_xi,
        ric0_e,
        h_norm_sq: geom.mean.h_norm_sq,
        h_star_norm_sq: geom.mean.h_star_norm_sq,
        h0_norm_sq: geom.mean.h0_norm_sq,
        g_h_hstar: geom.mean.g_h_hstar,
    };
    input.validate()?;
    let rhs = ricci_bound_rhs(&input);
    let residuals = equality_case_check(&geom);
    Ok(InequalityVerdict {
        lhs,
        rhs,
        margin: lhs - rhs,
        equality: residuals.max() < equality_tol,
        residuals,
        input,
    })
}

/// Residual of the Levi-Civita Gauss trace identity behind the bound:
/// `Ric0(E) − {ambient term} = Σ_r Σ_{i≥2} (h0_{11} h0_{ii} − (h0_{1i})²)`.
pub fn chain_identity_residual(
    imm: &Immersion,
    intrinsic: &IntrinsicCurvature,
    p: &ChartPoint,
    e_src: &[f64],
    seed: u64,
) -> Result<f64> {
    let contact = imm.ambient.contact.as_ref().ok_or_else(|| {
        GeomError::Precondition("chain identity requires contact data".into())
    })?;
    let c_bar = imm.ambient.c_bar.ok_or_else(|| {
        GeomError::Precondition("chain identity requires a declared constant".into())
    })?;
    let geom = induced_geometry_adapted(imm, p, Some(e_src), seed)?;
    let n = imm.src_dim;
    let k = n - 1;
    let nm = &intrinsic.manifold;
    let g_n = nm.metric_at(p)?;
    let r0_n = connection_curvature_tensor(nm, Connection::LeviCivita, p)?;
    let e = &geom.src_frame[0];
    let ric0: f64 = (1..n)
        .map(|i| {
            let fi = &geom.src_frame[i];
            let v = apply_curvature(&r0_n, fi, e, e);
            inner(&g_n, &v, fi)
        })
        .sum();

    let g_amb = imm.ambient.manifold.metric_at(&geom.ambient_point)?;
    let e_amb = geom.tangent_frame.components(0);
    let (p_part, _) = pc_decomposition(imm, &geom, e_amb)?;
    let xi = contact.xi_at(&geom.ambient_point);
    let inp = RicciBoundInput {
        c_bar,
        k,
        p_e_norm_sq: inner(&g_amb, &p_part, &p_part),
        g_e_xi: inner(&g_amb, e_amb, &xi),
        ric0_e: ric0,
        h_norm_sq: 0.0,
        h_star_norm_sq: 0.0,
        h0_norm_sq: 0.0,
        g_h_hstar: 0.0,
    };
    let m = geom.normal_frame.len();
    let mut quad = 0.0;
    for r in 0..m {
        for i in 1..n {
            quad += geom.h0.get(&[0, 0, r]) * geom.h0.get(&[i, i, r])
                - geom.h0.get(&[0, i, r]).powi(2);
        }
    }
    Ok((ric0 - inp.kenmotsu_term() - quad).abs())
}

/// Closed-form solution of `max x₁·Σ_{i≥2} x_i` subject to `Σ x_i = a`:
/// the maximum `a²/4` is attained at `x₁ = a/2`, `Σ_{i≥2} x_i = a/2`.
pub fn quadratic_form_max(k_plus_1: usize, a: f64) -> (f64, Vec<f64>) {
    assert!(k_plus_1 >= 2);
    let k = (k_plus_1 - 1) as f64;
    let mut argmax = vec![a / (2.0 * k); k_plus_1];
    argmax[0] = a / 2.0;
    (a * a / 4.0, argmax)
}

/// Brute-force lattice verification. On the constraint plane the objective
/// collapses to `x₁ (a − x₁)` since only the sum of the trailing entries
/// enters, so a one-dimensional scan over `x₁` is exhaustive for any k.
pub fn quadratic_form_lattice_max(_k_plus_1: usize, a: f64, step: f64, radius: f64) -> f64 {
    let lo = -radius;
    let count = (2.0 * radius / step).round() as usize;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=count {
        let x1 = lo + i as f64 * step;
        best = best.max(x1 * (a - x1));
    }
    best
}

/// The constrained Hessian quadratic form at a tangent direction of the
/// constraint plane: `π(v,v) = 2 v₁ Σ_{i≥2} v_i`, which equals `−2 v₁²` on
/// the plane `Σ v_i = 0`. Directions off the plane are projected onto it
/// and flagged.
pub fn hessian_form_check(k_plus_1: usize, direction: &[f64]) -> (f64, bool) {
    assert_eq!(direction.len(), k_plus_1);
    let sum: f64 = direction.iter().sum();
    let scale = direction.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut v = direction.to_vec();
    let projected = sum.abs() > 1e-12 * scale.max(1.0);
    if projected {
        let mean = sum / k_plus_1 as f64;
        for vi in v.iter_mut() {
            *vi -= mean;
        }
    }
    let tail: f64 = v[1..].iter().sum();
    (2.0 * v[0] * tail, projected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submanifold::build_immersion;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn base_input() -> RicciBoundInput {
        RicciBoundInput {
            c_bar: -1.0,
            k: 1,
            p_e_norm_sq: 0.0,
            g_e_xi: 0.0,
            ric0_e: 0.0,
            h_norm_sq: 0.0,
            h_star_norm_sq: 0.0,
            h0_norm_sq: 0.0,
            g_h_hstar: 0.0,
        }
    }

    #[test]
    fn rhs_of_the_totally_geodesic_plane_case() {
        // c = −1, k = 1, PE = 0, ric0 = −1, H = H* = 0: rhs = −2 + 1 = −1.
        let mut inp = base_input();
        inp.ric0_e = -1.0;
        inp.g_e_xi = 0.37; // free: the (c+1) factor kills it
        assert!((ricci_bound_rhs(&inp) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn rhs_of_the_umbilical_fiber_case() {
        // c = −1, k = 1, ||PE||² = 1, ric0 = 0, ||H||² = ||H*||² = 1:
        // rhs = 0 + 1 − 1 = 0.
        let mut inp = base_input();
        inp.p_e_norm_sq = 1.0;
        inp.h_norm_sq = 1.0;
        inp.h_star_norm_sq = 1.0;
        assert!(ricci_bound_rhs(&inp).abs() < 1e-14);
    }

    #[test]
    fn xi_orthogonal_variant_equals_theorem_rhs() {
        // The ξ-orthogonal rewrite is an identity, not an inequality change.
        let mut inp = base_input();
        inp.c_bar = 0.7;
        inp.k = 3;
        inp.p_e_norm_sq = 0.4;
        inp.ric0_e = 0.2;
        inp.h_norm_sq = 0.5;
        inp.h_star_norm_sq = 0.1;
        let direct = ricci_bound_rhs(&inp);
        let variant = corollary_bounds(&inp, CorollaryVariant::XiOrthogonal).unwrap();
        assert!((direct - variant).abs() < 1e-13);
    }

    #[test]
    fn mean_rewrite_is_an_identity_of_the_polarization() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..1000 {
            let m = 3usize;
            let h: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let hs: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let h0: Vec<f64> = h.iter().zip(&hs).map(|(a, b)| 0.5 * (a + b)).collect();
            let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
            let mut inp = base_input();
            inp.k = 2;
            inp.c_bar = rng.gen_range(-2.0..2.0);
            inp.p_e_norm_sq = rng.gen_range(0.0..1.0);
            inp.g_e_xi = rng.gen_range(-1.0..1.0);
            inp.ric0_e = rng.gen_range(-2.0..2.0);
            inp.h_norm_sq = dot(&h, &h);
            inp.h_star_norm_sq = dot(&hs, &hs);
            inp.h0_norm_sq = dot(&h0, &h0);
            inp.g_h_hstar = dot(&h, &hs);
            let direct = ricci_bound_rhs(&inp);
            let rewrite = corollary_bounds(&inp, CorollaryVariant::MeanRewrite).unwrap();
            assert!((direct - rewrite).abs() < 1e-10, "{direct} vs {rewrite}");
        }
    }

    #[test]
    fn minimal_variant_requires_vanishing_h0() {
        let mut inp = base_input();
        inp.h0_norm_sq = 0.3;
        assert!(matches!(
            corollary_bounds(&inp, CorollaryVariant::Minimal),
            Err(GeomError::Precondition(_))
        ));
        inp.h0_norm_sq = 0.0;
        inp.h_norm_sq = 1.0;
        inp.h_star_norm_sq = 1.0;
        inp.g_h_hstar = -1.0; // H* = −H
        let direct = ricci_bound_rhs(&inp);
        let minimal = corollary_bounds(&inp, CorollaryVariant::Minimal).unwrap();
        assert!((direct - minimal).abs() < 1e-13);
    }

    #[test]
    fn specializations_match_the_bound_at_extreme_p_norms() {
        // Invariant: ||PE||² = 1; anti-invariant: 0 — both with E ⊥ ξ.
        for (p2, variant) in [
            (1.0, CorollaryVariant::XiOrthInvariant),
            (0.0, CorollaryVariant::XiOrthAntiInvariant),
        ] {
            let mut inp = base_input();
            inp.c_bar = 1.3;
            inp.k = 2;
            inp.p_e_norm_sq = p2;
            inp.ric0_e = -0.4;
            inp.h_norm_sq = 0.2;
            inp.h_star_norm_sq = 0.9;
            let direct = ricci_bound_rhs(&inp);
            let special = corollary_bounds(&inp, variant).unwrap();
            assert!((direct - special).abs() < 1e-13, "{variant:?}");
        }
    }

    #[test]
    fn anti_invariant_constant_at_c_minus_one() {
        // −k(c−3)/4 at c = −1, k = 1 contributes +1 to the rhs.
        let mut inp = base_input();
        inp.ric0_e = 0.0;
        let v = corollary_bounds(&inp, CorollaryVariant::XiOrthAntiInvariant).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn flat_fiber_constant_readings_agree_only_at_k_four() {
        // The bound's term at c = −1 is +k, so the printed "+4" coincides
        // with it exactly when k = 4.
        let mut inp = base_input();
        inp.k = 4;
        let displayed = corollary_bounds(&inp, CorollaryVariant::FlatFiberDisplayed).unwrap();
        let derived = corollary_bounds(&inp, CorollaryVariant::FlatFiberDerived).unwrap();
        assert!((displayed - derived).abs() < 1e-14);
        inp.k = 1;
        let displayed = corollary_bounds(&inp, CorollaryVariant::FlatFiberDisplayed).unwrap();
        let derived = corollary_bounds(&inp, CorollaryVariant::FlatFiberDerived).unwrap();
        assert!((displayed - derived - 3.0).abs() < 1e-14);
        // The derived reading reproduces the theorem bound at every k.
        for k in 1..=5 {
            inp.k = k;
            let direct = ricci_bound_rhs(&inp);
            let derived = corollary_bounds(&inp, CorollaryVariant::FlatFiberDerived).unwrap();
            assert!((direct - derived).abs() < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn equality_residuals_of_constructed_forms() {
        // Mixed component of size 0.1 shows up as the third residual.
        let n = 2;
        let m = 1;
        let mut h = MultiArray::zeros(&[n, n, m]);
        h.set(&[0, 1, 0], 0.1);
        h.set(&[1, 0, 0], 0.1);
        let h_star = MultiArray::zeros(&[n, n, m]);
        let r = equality_residuals_from_forms(&h, &h_star, n, m);
        assert!((r.mixed_h - 0.1).abs() < 1e-14);
        assert!(r.mixed_h_star < 1e-14);
        // Umbilic residual: 2h(E,E) − 2·mean over the diagonal.
        let mut h2 = MultiArray::zeros(&[n, n, m]);
        h2.set(&[0, 0, 0], 1.0);
        h2.set(&[1, 1, 0], 1.0);
        let r2 = equality_residuals_from_forms(&h2, &h2, n, m);
        assert!(r2.max() < 1e-14, "umbilical forms satisfy equality");
    }

    #[test]
    fn margins_vanish_on_the_equality_witnesses() {
        for name in ["xalpha_plane", "fiber_slice"] {
            let imm = build_immersion(name, &[]).unwrap();
            let intrinsic = IntrinsicCurvature::new(&imm);
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for (i, p) in imm.sample_points(5, 23).unwrap().iter().enumerate() {
                let e: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let v =
                    verify_inequality(&imm, &intrinsic, p, &e, 60 + i as u64, 1e-6).unwrap();
                assert!(v.margin.abs() < 1e-5, "{name}: margin {}", v.margin);
                assert!(v.equality, "{name}: residuals {:?}", v.residuals);
                assert!(v.residuals.max() < 1e-6);
            }
        }
    }

    #[test]
    fn expected_sides_on_the_witnesses() {
        // xα-plane: both sides −1; fiber slice: both sides 0.
        let plane = build_immersion("xalpha_plane", &[]).unwrap();
        let ip = IntrinsicCurvature::new(&plane);
        let p = ChartPoint::new(vec![0.3, 0.1]);
        let v = verify_inequality(&plane, &ip, &p, &[1.0, 0.4], 3, 1e-6).unwrap();
        assert!((v.lhs + 1.0).abs() < 1e-5, "lhs {}", v.lhs);
        assert!((v.rhs + 1.0).abs() < 1e-5, "rhs {}", v.rhs);

        let fiber = build_immersion("fiber_slice", &[]).unwrap();
        let ifb = IntrinsicCurvature::new(&fiber);
        let v = verify_inequality(&fiber, &ifb, &p, &[0.2, 1.0], 4, 1e-6).unwrap();
        assert!(v.lhs.abs() < 1e-5);
        assert!(v.rhs.abs() < 1e-5);
    }

    #[test]
    fn perturbed_graph_has_strictly_positive_margin() {
        let imm = build_immersion("perturbed_graph", &[0.3]).unwrap();
        let intrinsic = IntrinsicCurvature::new(&imm);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut min_margin = f64::INFINITY;
        for (i, p) in imm.sample_points(10, 7).unwrap().iter().enumerate() {
            let e: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v = verify_inequality(&imm, &intrinsic, p, &e, i as u64, 1e-6).unwrap();
            min_margin = min_margin.min(v.margin);
            assert!(v.margin > 1e-3, "margin {}", v.margin);
        }
        assert!(min_margin > 1e-3);
    }

    #[test]
    fn chain_identity_on_catalog_witnesses() {
        for (name, params) in [
            ("fiber_slice", vec![]),
            ("xalpha_plane", vec![]),
            ("perturbed_graph", vec![0.3]),
        ] {
            let imm = build_immersion(name, &params).unwrap();
            let intrinsic = IntrinsicCurvature::new(&imm);
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for (i, p) in imm.sample_points(5, 11).unwrap().iter().enumerate() {
                let e: Vec<f64> = (0..imm.src_dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let r = chain_identity_residual(&imm, &intrinsic, p, &e, i as u64).unwrap();
                assert!(r < 1e-5, "{name}: residual {r}");
            }
        }
    }

    #[test]
    fn quadratic_form_closed_form_values() {
        let (max, arg) = quadratic_form_max(2, 2.0);
        assert!((max - 1.0).abs() < 1e-14);
        assert!((arg[0] - 1.0).abs() < 1e-14 && (arg[1] - 1.0).abs() < 1e-14);
        let (max0, _) = quadratic_form_max(4, 0.0);
        assert!(max0.abs() < 1e-14);
    }

    #[test]
    fn lattice_confirms_the_closed_form() {
        for &a in &[-3.0, 0.0, 1.0, 2.5] {
            for &k1 in &[2usize, 3, 5] {
                let (closed, _) = quadratic_form_max(k1, a);
                let lattice = quadratic_form_lattice_max(k1, a, 0.01, a.abs() + 2.0);
                assert!(closed - lattice >= -1e-9, "a={a}, k+1={k1}");
                assert!((closed - lattice).abs() < 1e-9, "a={a}, k+1={k1}");
            }
        }
    }

    #[test]
    fn hessian_form_values() {
        let (v, projected) = hessian_form_check(2, &[1.0, -1.0]);
        assert!((v + 2.0).abs() < 1e-14);
        assert!(!projected);
        let (v0, _) = hessian_form_check(3, &[0.0, 1.0, -1.0]);
        assert!(v0.abs() < 1e-14);
        let (_, flagged) = hessian_form_check(2, &[1.0, 1.0]);
        assert!(flagged);
    }

    #[test]
    fn hessian_form_is_nonpositive_on_the_constraint_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let k1 = rng.gen_range(2..7usize);
            let mut v: Vec<f64> = (0..k1).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mean: f64 = v.iter().sum::<f64>() / k1 as f64;
            for vi in v.iter_mut() {
                *vi -= mean;
            }
            let (val, projected) = hessian_form_check(k1, &v);
            assert!(val <= 1e-12, "value {val}");
            assert!(!projected);
            assert!((val + 2.0 * v[0] * v[0]).abs() < 1e-10);
        }
    }
}
