use proptest::prelude::*;
use ramabound::window::{bn_bounds, build_window, convolve_series, verify_decay};
use ramabound::{
    BoundProfile, CoeffSystem, Complex64, DecayTarget, FrequencyKind, Normalization, Window,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn mass_and_support(k in 1usize..10, length in 0.1..3.0f64) {
        let w = Window::equal(length, k).unwrap();
        prop_assert!((w.mass() - 1.0).abs() <= 1e-10);
        prop_assert!(w.samples().iter().all(|&f| f >= 0.0));
        prop_assert_eq!(w.density(-1e-12), 0.0);
        prop_assert_eq!(w.density(length * (1.0 + 1e-12)), 0.0);
        prop_assert!((w.transform(0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn transform_is_below_the_sinc_bound(k in 1usize..10, length in 0.1..3.0f64, xi in -200.0..200.0f64) {
        let w = Window::equal(length, k).unwrap();
        prop_assert!(w.transform_modulus(xi) <= w.sinc_bound(xi) * (1.0 + 1e-12));
    }
}

#[test]
fn product_law_against_discrete_transform() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in [3usize, 4, 6] {
        let w = Window::equal(1.0, k).unwrap();
        for _ in 0..200 {
            let xi = rng.gen_range(-60.0..60.0);
            let d = w.discrete_transform(xi);
            assert!(
                (d.norm() - w.transform_modulus(xi)).abs() <= 1e-10,
                "K={k} xi={xi}"
            );
        }
    }
}

#[test]
fn counting_bounds_never_exceed_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let n = rng.gen_range(1..300);
        let mut l: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..50.0)).collect();
        l.sort_by(f64::total_cmp);
        l.dedup();
        let a: Vec<f64> = (0..l.len()).map(|_| rng.gen_range(1e-3..1e3f64)).collect();
        let sys = CoeffSystem::custom(l, a).unwrap();
        let b = bn_bounds(&sys, Normalization::Unimodular);
        assert!(b.total <= 2.0);
    }
    for kind in [
        FrequencyKind::Classical,
        FrequencyKind::Primes,
        FrequencyKind::Divisor,
    ] {
        let sys = CoeffSystem::build(kind, &BoundProfile::Power { delta: 0.5 }, 10_000).unwrap();
        for norm in [Normalization::Unimodular, Normalization::Arithmetic] {
            assert!(bn_bounds(&sys, norm).total <= 2.0);
        }
    }
}

#[test]
fn windowed_coefficients_obey_their_bounds() {
    let sys = CoeffSystem::build(
        FrequencyKind::Classical,
        &BoundProfile::LogPower { c: 1.0 },
        5,
    )
    .unwrap();
    let target = DecayTarget::CountingSquared {
        system: sys.clone(),
        norm: Normalization::Unimodular,
    };
    // the counting function jumps at the frequencies, so they join the grid
    let mut grid: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.05).collect();
    grid.extend_from_slice(sys.lambdas());
    grid.sort_by(f64::total_cmp);
    let (w, report) = build_window(0.5, &target, None, &grid).unwrap();
    let w = w.with_scale(report.required_scale.min(1.0)).unwrap();
    assert!(verify_decay(&w, &target, &grid).holds_everywhere());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let t: Vec<f64> = (0..25).map(|i| i as f64 * 0.2).collect();
    for _ in 0..20 {
        let a: Vec<Complex64> = sys
            .amplitudes()
            .iter()
            .map(|&c| Complex64::from_polar(c * rng.gen::<f64>(), rng.gen_range(0.0..6.3)))
            .collect();
        let r = convolve_series(&a, &sys, &w, &t, 1.0).unwrap();
        assert!(r.feasible);
        assert_eq!(r.checked.len(), sys.len());
        assert!(r.violations.is_empty());
        assert!(r.max_discrepancy < 1e-8);
    }
}
