//! Property tests for the numerical primitives and the duality
//! construction.

use kenstat::statistical::{symmetrize3, StatisticalManifold};
use kenstat::tensor::{
    complete_frame, fd_derivative, gram_schmidt, ChartPoint, Frame, MultiArray, TangentVector,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    /// Richardson-refined central differences are exact on cubics.
    #[test]
    fn derivative_exact_on_cubics(
        c3 in -3.0..3.0f64,
        c2 in -3.0..3.0f64,
        c1 in -3.0..3.0f64,
        c0 in -3.0..3.0f64,
        x in -2.0..2.0f64,
    ) {
        let f = move |p: &ChartPoint| {
            let t = p.coords[0];
            c3 * t * t * t + c2 * t * t + c1 * t + c0
        };
        let p = ChartPoint::new(vec![x]);
        let d = fd_derivative(f, |_| true, &p, 0, 1e-5).unwrap();
        let expect = 3.0 * c3 * x * x + 2.0 * c2 * x + c1;
        let scale = expect.abs().max(1.0);
        prop_assert!((d - expect).abs() <= 1e-9 * scale, "d = {d}, expect = {expect}");
    }

    /// Orthonormalization under a random SPD metric in dimensions 2..=7.
    #[test]
    fn gram_schmidt_orthonormal_under_random_spd(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + (seed % 6) as usize;
        let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let spd = &m.transpose() * &m + DMatrix::identity(n, n) * 0.4;
        let g = MultiArray::from_matrix(&spd);
        let p = ChartPoint::new(vec![0.0; n]);
        let vs: Vec<TangentVector> = (0..n)
            .map(|_| TangentVector::new(p.clone(), (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()))
            .collect();
        if let Ok(frame) = gram_schmidt(&Frame::new(vs, false), &g) {
            prop_assert!(frame.orthonormality_residual(&g) < 1e-10);
        }
    }

    /// Frame completion is deterministic for a fixed seed.
    #[test]
    fn complete_frame_reproducible(seed in 0u64..10_000) {
        let p = ChartPoint::new(vec![0.1, -0.4, 0.8]);
        let e1 = TangentVector::new(p, vec![0.3, 1.0, -0.5]);
        let g = MultiArray::from_fn(&[3, 3], |idx| if idx[0] == idx[1] { 1.0 } else { 0.0 });
        let a = complete_frame(&e1, &g, seed).unwrap();
        let b = complete_frame(&e1, &g, seed).unwrap();
        for i in 0..3 {
            prop_assert_eq!(a.components(i), b.components(i));
        }
    }

    /// Full symmetrization really is symmetric in every index pair.
    #[test]
    fn symmetrized_tensor_is_totally_symmetric(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + (seed % 3) as usize;
        let raw = MultiArray::from_fn(&[n, n, n], |_| rng.gen_range(-1.0..1.0));
        let sym = symmetrize3(&raw);
        prop_assert!(sym.symmetry_residual(0, 1) < 1e-14);
        prop_assert!(sym.symmetry_residual(1, 2) < 1e-14);
        prop_assert!(sym.symmetry_residual(0, 2) < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The dual of the dual connection returns the primal on random
    /// admissible statistical structures in dimension 3.
    #[test]
    fn involution_on_random_statistical_structures(seed in 0u64..1_000) {
        let m = StatisticalManifold::random(3, seed);
        let p = m.sample_points(1, seed ^ 0x5eed).unwrap().remove(0);
        let r = m.conjugate_involution_check(&p).unwrap();
        prop_assert!(r < 1e-7, "involution residual {r}");
    }

    /// Lowered admissible difference tensors are totally symmetric.
    #[test]
    fn lowered_k_total_symmetry(seed in 0u64..1_000) {
        let m = StatisticalManifold::random(4, seed);
        let p = m.sample_points(1, seed ^ 0xabc).unwrap().remove(0);
        prop_assert!(m.lowered_k_symmetry_residual(&p).unwrap() < 1e-8);
    }
}
