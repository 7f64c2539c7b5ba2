use proptest::prelude::*;
use ramabound::quad::{gl16, refine};
use ramabound::solver::{brute_oracle, kkt_residual, minimize, minimize_from, sweep_n};
use ramabound::{
    BoundProfile, CoeffSystem, Complex64, ConstraintMode, FrequencyKind, GramSystem, SolveOptions,
    Target,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, f64)> {
    (1usize..12).prop_flat_map(|n| {
        (
            prop::collection::vec(0.05..15.0f64, n),
            prop::collection::vec(0.0..2.0f64, n),
            0.5..4.0f64,
        )
            .prop_map(|(mut l, c, h)| {
                l.sort_by(f64::total_cmp);
                l.dedup();
                let c = c[..l.len()].to_vec();
                (l, c, h)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn solutions_are_feasible_and_bounded((l, c, h) in instance()) {
        let gs = GramSystem::from_lambdas(&l, &Target::One, h).unwrap();
        let r = minimize(&gs, &c, &SolveOptions::default()).unwrap();
        prop_assert!(r.converged);
        for (a, b) in r.coefficients.iter().zip(&c) {
            prop_assert!(a.norm() <= b * (1.0 + 1e-12));
        }
        prop_assert!(r.objective >= 0.0 && r.objective <= gs.target_norm_sq() * (1.0 + 1e-12));
    }

    #[test]
    fn descent_is_monotone((l, c, h) in instance()) {
        let gs = GramSystem::from_lambdas(&l, &Target::One, h).unwrap();
        let opts = SolveOptions { interior_start: false, keep_trace: true, ..Default::default() };
        let r = minimize(&gs, &c, &opts).unwrap();
        prop_assert!(r.max_ascent <= 1e-12 * gs.target_norm_sq().max(1.0));
        prop_assert!(r.trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn enlarging_bounds_never_increases_m((l, c, h) in instance(), grow in 1.0..3.0f64) {
        let gs = GramSystem::from_lambdas(&l, &Target::One, h).unwrap();
        let opts = SolveOptions::default();
        let small = minimize(&gs, &c, &opts).unwrap().objective;
        let bigger: Vec<f64> = c.iter().map(|x| x * grow).collect();
        let large = minimize(&gs, &bigger, &opts).unwrap().objective;
        prop_assert!(large <= small + 1e-9 * gs.target_norm_sq());
    }

    #[test]
    fn conjugate_frequencies_give_the_same_minimum((l, c, h) in instance()) {
        let gs = GramSystem::from_lambdas(&l, &Target::One, h).unwrap();
        let neg: Vec<f64> = l.iter().rev().map(|x| -x).collect();
        let cr: Vec<f64> = c.iter().rev().copied().collect();
        let gn = GramSystem::from_lambdas(&neg, &Target::One, h).unwrap();
        let opts = SolveOptions::default();
        let a = minimize(&gs, &c, &opts).unwrap().objective;
        let b = minimize(&gn, &cr, &opts).unwrap().objective;
        prop_assert!((a - b).abs() <= 1e-8 * h);
    }
}

#[test]
fn pinned_coefficients_leave_the_target() {
    let gs = GramSystem::from_lambdas(&[0.5, 1.0, 2.0], &Target::One, 1.0).unwrap();
    let r = minimize(&gs, &[0.0; 3], &SolveOptions::default()).unwrap();
    assert!((r.objective - 1.0).abs() < 1e-15);
    assert!(r.coefficients.iter().all(|a| a.norm() == 0.0));
    let b = brute_oracle(&gs, &[0.0; 3]).unwrap();
    assert!((b.objective - 1.0).abs() < 1e-15);
}

#[test]
fn single_coordinate_closed_forms() {
    let gs = GramSystem::from_lambdas(&[2f64.ln()], &Target::One, 1.0).unwrap();
    let w = gs.moments()[0];
    let r = minimize(&gs, &[10.0], &SolveOptions::default()).unwrap();
    assert!((r.coefficients[0] + w.conj()).norm() < 1e-12);
    assert!((r.objective - (1.0 - w.norm_sqr())).abs() < 1e-12);
    let oracle = brute_oracle(&gs, &[10.0]).unwrap();
    assert!((oracle.objective - r.objective).abs() <= 1e-4 * r.objective);

    let r = minimize(&gs, &[0.01], &SolveOptions::default()).unwrap();
    let a = r.coefficients[0];
    assert!((a.norm() - 0.01).abs() < 1e-15);
    // anti-aligned with conj(w)
    assert!((a / a.norm() + w.conj() / w.norm()).norm() < 1e-12);
    let oracle = brute_oracle(&gs, &[0.01]).unwrap();
    assert!(oracle.objective >= r.objective - 1e-15);
}

#[test]
fn kkt_residual_certifies_the_optimum() {
    let sys = CoeffSystem::build(
        FrequencyKind::Classical,
        &BoundProfile::Power { delta: 0.5 },
        30,
    )
    .unwrap();
    let gs = GramSystem::assemble(&sys, &Target::One, 1.0).unwrap();
    let c = sys.amplitudes();
    let r = minimize(&gs, c, &SolveOptions::default()).unwrap();
    let opt = kkt_residual(&gs, c, &r.coefficients).unwrap();
    assert!(opt <= 1e-9);
    assert!(kkt_residual(&gs, c, &vec![Complex64::new(0.0, 0.0); 30]).unwrap() > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let a: Vec<Complex64> = c
            .iter()
            .map(|&b| Complex64::from_polar(b * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..6.3)))
            .collect();
        assert!(kkt_residual(&gs, c, &a).unwrap() >= opt);
    }
    let mut bad = r.coefficients.clone();
    bad[0] *= 2.0;
    assert!(kkt_residual(&gs, c, &bad).is_err());
}

#[test]
fn random_starts_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = rng.gen_range(2..=20);
        let mut l: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
        l.sort_by(f64::total_cmp);
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        let gs = GramSystem::from_lambdas(&l, &Target::One, rng.gen_range(0.5..3.0)).unwrap();
        let mut objs = Vec::new();
        for _ in 0..2 {
            let start: Vec<Complex64> = c
                .iter()
                .map(|&b| Complex64::from_polar(b * rng.gen::<f64>(), rng.gen_range(0.0..6.3)))
                .collect();
            let r = minimize_from(gs.view(), &c, start, &SolveOptions::default()).unwrap();
            assert!(r.converged);
            objs.push(r.objective);
        }
        assert!((objs[0] - objs[1]).abs() <= 1e-8 * objs[0].max(1e-300));
    }
}

#[test]
fn circle_mode_stays_on_the_circle() {
    let gs = GramSystem::from_lambdas(&[0.7, 1.1, 2.3], &Target::One, 1.0).unwrap();
    let c = [0.2, 0.3, 0.1];
    let opts = SolveOptions {
        mode: ConstraintMode::Circle,
        ..Default::default()
    };
    let r = minimize(&gs, &c, &opts).unwrap();
    assert!(r.stationary_only);
    for (a, b) in r.coefficients.iter().zip(c) {
        assert!((a.norm() - b).abs() <= 1e-12 * b);
    }
    let disc = minimize(&gs, &c, &SolveOptions::default()).unwrap();
    assert!(disc.objective <= r.objective + 1e-12);
}

#[test]
fn cauchy_schwarz_bridge() {
    let sys = CoeffSystem::build(FrequencyKind::Classical, &BoundProfile::Unit, 40).unwrap();
    let gs = GramSystem::assemble(&sys, &Target::One, 1.0).unwrap();
    let r = minimize(&gs, sys.amplitudes(), &SolveOptions::default()).unwrap();
    let l1 = refine(gl16(), &[0.0, 1.0], 1e-12, 1e-15, 12, &mut |t| {
        gs.residual_at(&r.coefficients, t).norm()
    })
    .unwrap()
    .value;
    assert!(l1 <= (gs.h() * r.objective).sqrt() * (1.0 + 1e-9));
    let l2 = refine(gl16(), &[0.0, 1.0], 1e-12, 1e-15, 12, &mut |t| {
        gs.residual_at(&r.coefficients, t).norm_sqr()
    })
    .unwrap()
    .value;
    assert!((l2 - r.objective).abs() <= 1e-9);
}

#[test]
fn sweep_is_nonincreasing_and_matches_direct_solves() {
    let sys = CoeffSystem::build(
        FrequencyKind::Classical,
        &BoundProfile::Power { delta: 0.5 },
        64,
    )
    .unwrap();
    let opts = SolveOptions::default();
    let curve = sweep_n(&sys, &Target::One, 1.0, &[2, 4, 8, 16, 32, 64], &opts).unwrap();
    assert!(curve.is_nonincreasing() && curve.all_converged());
    let single = sweep_n(&sys, &Target::One, 1.0, &[2], &opts).unwrap();
    let gs = GramSystem::assemble(&sys.truncated(2).unwrap(), &Target::One, 1.0).unwrap();
    let direct = minimize(&gs, &sys.amplitudes()[..2], &opts).unwrap();
    assert!((single.points[0].objective - direct.objective).abs() <= 1e-12);
    assert!(sweep_n(&sys, &Target::One, 1.0, &[4, 2], &opts).is_err());
}

#[test]
fn brute_oracle_rejects_large_systems() {
    let gs = GramSystem::from_lambdas(&[1.0, 2.0, 3.0, 4.0], &Target::One, 1.0).unwrap();
    assert!(brute_oracle(&gs, &[1.0; 4]).is_err());
}
