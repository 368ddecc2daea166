mod common;

use calderon_core::zernike::{radial_zernike, synthesize_on_quadrature};
use calderon_core::{
    project, psi_eval, synthesize, BallPoint, BallQuadrature, CoefficientField, Complex64, PhantomSpec,
    SynthesisMode, ZernikeIndex,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn radial_matches_explicit_jacobi_sum() {
    for ell in 0..=12u64 {
        for k in 0..=6u64 {
            for i in 0..=20 {
                let r = i as f64 / 20.0;
                let got = radial_zernike(ell as usize, k as usize, r).unwrap();
                let want = common::radial(ell, k, r);
                assert!((got - want).abs() <= 1e-11 * want.abs().max(1.0), "R_{ell}^{k}({r}): {got} vs {want}");
            }
        }
    }
}

#[test]
fn psi_gram_matrix_to_degree_eight() {
    let quad = BallQuadrature::new(12, 12, 24).unwrap();
    let basis: Vec<ZernikeIndex> = (0..=4)
        .flat_map(|k| (0..=8 - 2 * k).flat_map(move |ell| (-(ell as i64)..=ell as i64).map(move |m| ZernikeIndex { k, ell, m })))
        .collect();
    let nodes: Vec<(BallPoint, f64)> = quad.nodes().collect();
    let samples: Vec<Vec<Complex64>> =
        basis.iter().map(|&b| nodes.iter().map(|&(p, _)| psi_eval(b, p).unwrap()).collect()).collect();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let g: Complex64 = samples[i].iter().zip(&samples[j]).zip(&nodes).map(|((a, b), (_, w))| a * b.conj() * w).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            assert!((g - target).norm() < 1e-9, "{:?} {:?}", basis[i], basis[j]);
        }
    }
}

#[test]
fn projecting_a_basis_function() {
    let quad = BallQuadrature::new(16, 16, 32).unwrap();
    let idx = ZernikeIndex::new(1, 2, 1).unwrap();
    let c = project(|p| psi_eval(idx, p).unwrap(), &[6, 6, 6], &quad);
    for (i, v) in c.iter() {
        let want = if i == idx { 1.0 } else { 0.0 };
        assert!((v - want).norm() < 1e-10, "{i:?}: {v}");
    }
}

#[test]
fn real_phantom_projects_to_symmetric_field() {
    let quad = BallQuadrature::default();
    let g = PhantomSpec::default_gaussian();
    let c = project(|p| g.eval(p), &[20, 16, 12], &quad);
    assert!(c.conjugate_symmetry_defect() < 1e-10);
}

#[test]
fn polynomial_reproduced_at_random_points() {
    // Degree-4 polynomial: lies in the span of ψ with ℓ + 2k ≤ 4.
    let f = |p: BallPoint| {
        let [x, y, z] = p.to_cartesian();
        1.0 - 2.0 * x + 0.5 * y * z + x * x * y - 3.0 * z.powi(4) + x * y * z * y
    };
    let quad = BallQuadrature::new(8, 8, 16).unwrap();
    let c = project(f, &[4, 2, 0], &quad);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pts: Vec<BallPoint> = (0..200)
        .map(|_| BallPoint::new(rng.random_range(0.0..1.0), rng.random_range(0.0..std::f64::consts::PI), rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    let vals = synthesize(&c, &pts, SynthesisMode::Full).unwrap();
    for (p, v) in pts.iter().zip(vals) {
        assert!((v - f(*p)).norm() < 1e-9, "{p:?}");
    }
}

fn field_strategy() -> impl Strategy<Value = CoefficientField> {
    (proptest::collection::vec(0usize..=6, 1..=3), any::<u64>()).prop_map(|(caps, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = CoefficientField::zeros(&caps);
        for v in c.values_mut() {
            *v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn project_inverts_synthesize(c in field_strategy()) {
        // ℓ + 2k ≤ 10, so degree ≤ 20 products are integrated exactly.
        let quad = BallQuadrature::new(14, 14, 28).unwrap();
        let values = synthesize_on_quadrature(&c, &quad, SynthesisMode::Full);
        let nodes: Vec<BallPoint> = quad.nodes().map(|(p, _)| p).collect();
        let lookup = |p: BallPoint| {
            let i = nodes.iter().position(|q| q == &p).unwrap();
            values[i]
        };
        let back = project(lookup, c.caps(), &quad);
        prop_assert!(back.max_abs_diff(&c) < 1e-9);
    }

    #[test]
    fn partial_sum_beyond_support_vanishes(c in field_strategy(), r in 0.0f64..1.0, t in 0.0f64..3.1, p in 0.0f64..6.2) {
        let kmax = c.kmax().unwrap();
        let full = synthesize(&c, &[BallPoint::new(r, t, p)], SynthesisMode::RealPartialSum(kmax)).unwrap()[0];
        let direct = synthesize(&c, &[BallPoint::new(r, t, p)], SynthesisMode::Full).unwrap()[0];
        prop_assert!((full.re - direct.re).abs() < 1e-12 && full.im == 0.0);
    }
}
