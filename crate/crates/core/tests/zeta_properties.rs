use ramabound::zeta::{
    hurwitz_em, interval_integral, log_spaced, scan, truncated_sum, zeta_em, zeta_eta_series,
};
use ramabound::{Complex64, OmegaCurve, SigmaSource};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn conjugate_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let s = Complex64::new(rng.gen_range(0.5..3.0), rng.gen_range(-200.0..200.0));
        let a = zeta_em(s).unwrap().value;
        let b = zeta_em(s.conj()).unwrap().value;
        assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0));
    }
}

#[test]
fn euler_maclaurin_matches_eta_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let s = Complex64::new(rng.gen_range(0.6..3.0), rng.gen_range(-100.0..100.0));
        let em = zeta_em(s).unwrap();
        assert!(em.within_target());
        let eta = zeta_eta_series(s, 240).unwrap();
        assert!((em.value - eta).norm() <= 1e-9, "s = {s}");
    }
}

#[test]
fn hurwitz_at_one_is_riemann() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let s = Complex64::new(rng.gen_range(0.5..4.0), rng.gen_range(-300.0..300.0));
        let h = hurwitz_em(s, 1.0).unwrap().value;
        let z = zeta_em(s).unwrap().value;
        assert!((h - z).norm() <= 1e-10);
    }
}

#[test]
fn truncated_sum_discrepancy_decreases() {
    for t in [50.0, 100.0, 500.0] {
        let s = Complex64::new(1.0, t);
        let z = zeta_em(s).unwrap().value;
        let errs: Vec<f64> = [2.0, 8.0, 32.0]
            .iter()
            .map(|m| (truncated_sum(s, m * t).value - z).norm())
            .collect();
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "t = {t}: {errs:?}");
    }
}

#[test]
fn interval_integral_grows_with_delta() {
    let sigma = SigmaSource::Constant(1.0);
    for t in [10.0, 77.0, 500.0] {
        let a = interval_integral(t, 0.1, &sigma, 1.0).unwrap().integral;
        let b = interval_integral(t, 0.2, &sigma, 1.0).unwrap().integral;
        assert!(b >= a && a > 0.0);
    }
}

#[test]
fn sigma_two_band() {
    let schedule = log_spaced(10.0, 1000.0, 20);
    let s = scan(&SigmaSource::Constant(2.0), &schedule, 0.25, 1.0).unwrap();
    for r in &s.records {
        assert!(r.integral >= 0.5 * 0.25 && r.integral <= 2.0 * 0.25);
    }
}

#[test]
fn scans_are_deterministic() {
    let curve = SigmaSource::Curve("loglogpower:0.5".parse::<OmegaCurve>().unwrap());
    let schedule = log_spaced(100.0, 1e4, 12);
    let a = scan(&curve, &schedule, 0.25, 1.0).unwrap().to_table();
    let b = scan(&curve, &schedule, 0.25, 1.0).unwrap().to_table();
    assert_eq!(a, b);
    assert!(scan(&curve, &[], 0.25, 1.0).unwrap().records.is_empty());
}
