use calderon_core::{
    add_noise, forward_measure, project, reconstruct, reconstruct_with, validate_schedule, BallQuadrature,
    CoefficientField, Complex64, Error, PhantomSpec, ReconOptions, TruncationSchedule,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_field(caps: &[usize], seed: u64) -> CoefficientField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = CoefficientField::zeros(caps);
    for v in c.values_mut() {
        *v = Complex64::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..std::f64::consts::TAU));
    }
    c
}

fn feasible_caps() -> impl Strategy<Value = Vec<usize>> {
    (0usize..=6, 0usize..=4, prop::collection::vec(0usize..=1, 6)).prop_filter_map(
        "ell_0 <= 16",
        |(kmax, last, extra)| {
            let mut caps = vec![last];
            for q in (0..kmax).rev() {
                caps.push(caps.last().unwrap() + 2 + extra[q]);
            }
            caps.reverse();
            (caps[0] <= 16).then_some(caps)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn round_trip_on_feasible_schedules(caps in feasible_caps(), seed in any::<u64>()) {
        let schedule = TruncationSchedule::new(caps.clone()).unwrap();
        prop_assert!(schedule.is_feasible());
        let c = random_field(&caps, seed);
        let rec = reconstruct(&forward_measure(&c, &caps).unwrap(), &schedule).unwrap();
        let err = rec.recovered.max_abs_diff(&c);
        prop_assert!(err < 1e-9, "caps {:?}: {:e}", caps, err);
    }
}

#[test]
fn later_stages_do_not_touch_earlier_ones() {
    let caps = [12, 10, 8, 6, 4];
    let schedule = TruncationSchedule::new(caps.to_vec()).unwrap();
    let ms = forward_measure(&random_field(&caps, 3), &caps).unwrap();
    let base = reconstruct(&ms, &schedule).unwrap().recovered;
    for kp in 1..caps.len() {
        let mut bumped = ms.clone();
        for (k, ell, m, v) in ms.iter() {
            if k >= kp {
                bumped.set(k, ell, m, v + Complex64::new(0.7, -0.2)).unwrap();
            }
        }
        let rec = reconstruct(&bumped, &schedule).unwrap().recovered;
        for (i, v) in base.iter() {
            let w = rec.get(i.k, i.ell, i.m).unwrap();
            if i.k < kp {
                assert_eq!((v.re.to_bits(), v.im.to_bits()), (w.re.to_bits(), w.im.to_bits()), "{i:?}");
            }
        }
        assert!(rec.max_abs_diff(&base) > 0.0);
    }
}

#[test]
fn reconstruction_is_linear() {
    let caps = [10, 8, 6, 4];
    let schedule = TruncationSchedule::new(caps.to_vec()).unwrap();
    let a = forward_measure(&random_field(&caps, 1), &caps).unwrap();
    let b = forward_measure(&random_field(&caps, 2), &caps).unwrap();
    let lambda = Complex64::new(-2.5, 0.4);
    let lhs = reconstruct(&a.axpy(lambda, &b).unwrap(), &schedule).unwrap().recovered;
    let rhs = reconstruct(&a, &schedule)
        .unwrap()
        .recovered
        .axpy(lambda, &reconstruct(&b, &schedule).unwrap().recovered)
        .unwrap();
    assert!(lhs.max_abs_diff(&rhs) < 1e-11);
}

#[test]
fn real_data_gives_real_field() {
    let caps = [12, 10, 8, 6];
    let quad = BallQuadrature::new(24, 32, 64).unwrap();
    let g = PhantomSpec::gaussian([0.2, -0.1, 0.4], 6.0).unwrap();
    let c = project(|p| g.eval(p), &caps, &quad).with_certified(true);
    let ms = forward_measure(&c, &caps).unwrap();
    assert!(ms.conjugate_symmetry_defect() < 1e-13);
    let rec = reconstruct(&ms, &TruncationSchedule::new(caps.to_vec()).unwrap()).unwrap();
    assert!(rec.recovered.conjugate_symmetry_defect() < 1e-12);
}

#[test]
fn long_schedule_recovers_projected_gaussian() {
    let schedule = TruncationSchedule::linear(20, 2, 7).unwrap();
    let caps = schedule.caps().to_vec();
    let g = PhantomSpec::default_gaussian();
    let c = project(|p| g.eval(p), &caps, &BallQuadrature::default()).with_certified(true);
    let rec = reconstruct(&forward_measure(&c, &caps).unwrap(), &schedule).unwrap();
    let err = rec.recovered.max_abs_diff(&c);
    assert!(err < 1e-9, "{err:e}");
    assert!(rec.min_divisor > 1e-14);
    assert_eq!(rec.stages.len(), 8);
}

#[test]
fn noisy_data_still_reconstructs() {
    let schedule = TruncationSchedule::new(vec![16, 11, 7, 5, 3]).unwrap();
    let caps = [16, 13, 11, 9, 7];
    let g = PhantomSpec::default_gaussian();
    let quad = BallQuadrature::new(32, 40, 80).unwrap();
    let c = project(|p| g.eval(p), &caps, &quad).with_certified(true);
    let ms = add_noise(&forward_measure(&c, schedule.caps()).unwrap(), 1e-2, 4).unwrap();
    let rec = reconstruct(&ms, &schedule).unwrap();
    assert!(rec.recovered.iter().all(|(_, v)| v.re.is_finite() && v.im.is_finite()));
    assert!(!rec.regularised);
    let back = calderon_core::ReconReport::from_json(&rec.to_json().unwrap()).unwrap();
    assert_eq!(back, rec);
}

#[test]
fn infeasible_schedule_names_the_pair() {
    let schedule = TruncationSchedule::new(vec![4, 4]).unwrap();
    let v = validate_schedule(&schedule);
    assert_eq!((v[0].q, v[0].k, v[0].required, v[0].actual), (0, 1, 6, 4));
    let ms = forward_measure(&random_field(&[6, 4], 0), &[4, 4]).unwrap();
    let err = reconstruct(&ms, &schedule).unwrap_err();
    assert!(matches!(err, Error::InfeasibleSchedule(_)));
    let text = err.to_string();
    assert!(text.contains("q=0") && text.contains("k=1"), "{text}");
    let filled = reconstruct_with(&ms, &schedule, &ReconOptions { zero_fill: true, ..Default::default() }).unwrap();
    assert!(filled.regularised);
}
