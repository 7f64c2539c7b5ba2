//! Invariant suite run by `ramabound selftest`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramabound::criterion::{omega_curve_criterion, ramachandra_sum};
use ramabound::gram::{gram_entry, quad_oracle};
use ramabound::solver::{brute_oracle, minimize, minimize_from, sweep_n};
use ramabound::table::fmt17;
use ramabound::window::{bn_bounds, convolve_series};
use ramabound::zeta::{
    hurwitz_em, interval_integral, short_interval_constant, zeta_em, zeta_eta_series,
};
use ramabound::{
    BoundProfile, CoeffSystem, Complex64, FrequencyKind, GramSystem, Normalization, OmegaCurve,
    SigmaSource, SolveOptions, Target, Verdict, Window,
};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub detail: String,
}

impl CheckResult {
    pub fn to_record(&self) -> String {
        let worst = if self.worst.is_finite() {
            fmt17(self.worst)
        } else {
            "null".into()
        };
        format!(
            "{{\"check\":\"{}\",\"passed\":{},\"worst\":{},\"detail\":{}}}",
            self.name,
            self.passed,
            worst,
            serde_json::to_string(&self.detail).expect("string serializes")
        )
    }
}

type Check = fn(&mut ChaCha8Rng, usize) -> Result<(f64, bool, String), String>;

/// Run every check with a generator seeded from `seed`; `quick` shrinks the
/// number of random cases.
pub fn run_all(seed: u64, quick: bool) -> Vec<CheckResult> {
    let scale = if quick { 1 } else { 5 };
    let checks: [(&'static str, Check); 12] = [
        ("gram_closed_form", gram_closed_form),
        ("gram_hermitian", gram_hermitian),
        ("solver_vs_brute_force", solver_vs_brute),
        ("solver_random_starts", solver_random_starts),
        ("sweep_nonincreasing", sweep_nonincreasing),
        ("bn_total_at_most_two", bn_total),
        ("window_transform", window_transform),
        ("convolution_identity", convolution_identity),
        ("zeta_accuracy", zeta_accuracy),
        ("short_interval_lower_bound", short_interval_bound),
        ("criterion_presets", criterion_presets),
        ("omega_curves", omega_curves),
    ];
    checks
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            match check(&mut rng, scale) {
                Ok((worst, passed, detail)) => CheckResult {
                    name,
                    passed,
                    worst,
                    detail,
                },
                Err(e) => CheckResult {
                    name,
                    passed: false,
                    worst: f64::NAN,
                    detail: e,
                },
            }
        })
        .collect()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn gram_closed_form(rng: &mut ChaCha8Rng, scale: usize) -> Result<(f64, bool, String), String> {
    let mut worst: f64 = 0.0;
    for _ in 0..40 * scale {
        let (lm, ln, h) = (
            rng.gen_range(0.0..50.0),
            rng.gen_range(0.0..50.0),
            rng.gen_range(0.1..10.0),
        );
        let d: f64 = lm - ln;
        let closed = gram_entry(lm, ln, h).map_err(err)?;
        let quad = quad_oracle(|t| Complex64::new(0.0, -d * t).exp(), h, 1e-13 * h).map_err(err)?;
        worst = worst.max((closed - quad).norm() / h);
    }
    Ok((worst, worst < 1e-10, "max |closed − quadrature| / H".into()))
}

fn gram_hermitian(rng: &mut ChaCha8Rng, scale: usize) -> Result<(f64, bool, String), String> {
    let mut ok = true;
    let mut worst_eig = f64::INFINITY;
    for _ in 0..4 * scale {
        let n = rng.gen_range(1..30);
        let mut l: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..20.0)).collect();
        l.sort_by(f64::total_cmp);
        let h = rng.gen_range(0.1..5.0);
        let gs = GramSystem::from_lambdas(&l, &Target::One, h).map_err(err)?;
        for m in 0..n {
            ok &= gs.entry(m, m) == Complex64::new(h, 0.0);
            for k in 0..n {
                ok &= gs.entry(m, k) == gs.entry(k, m).conj();
            }
        }
        worst_eig = worst_eig.min(gs.min_eigenvalue_estimate(100, rng.gen()) / h);
    }
    Ok((
        worst_eig,
        ok && worst_eig >= -1e-10,
        "smallest eigenvalue estimate / H".into(),
    ))
}

fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> Result<(GramSystem, Vec<f64>), String> {
    let mut l: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..10.0)).collect();
    l.sort_by(f64::total_cmp);
    let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.5)).collect();
    let gs = GramSystem::from_lambdas(&l, &Target::One, rng.gen_range(0.5..3.0)).map_err(err)?;
    Ok((gs, c))
}

fn solver_vs_brute(rng: &mut ChaCha8Rng, scale: usize) -> Result<(f64, bool, String), String> {
    let mut worst: f64 = 0.0;
    for _ in 0..2 * scale {
        let n = rng.gen_range(1..=3);
        let (gs, c) = random_instance(rng, n)?;
        let m = minimize(&gs, &c, &SolveOptions::default())
            .map_err(err)?
            .objective;
        let b = brute_oracle(&gs, &c).map_err(err)?.objective;
        worst = worst.max((m - b).abs() / b.max(1e-300));
    }
    Ok((
        worst,
        worst <= 1e-3,
        "relative gap to the grid oracle".into(),
    ))
}

fn solver_random_starts(rng: &mut ChaCha8Rng, scale: usize) -> Result<(f64, bool, String), String> {
    let mut worst: f64 = 0.0;
    let mut converged = true;
    for _ in 0..4 * scale {
        let n = rng.gen_range(2..=30);
        let (gs, c) = random_instance(rng, n)?;
        let mut objs = Vec::new();
        for _ in 0..2 {
            let start: Vec<Complex64> = c
                .iter()
                .map(|&b| Complex64::from_polar(b * rng.gen::<f64>(), rng.gen_range(0.0..2.0 * PI)))
                .collect();
            let r = minimize_from(gs.view(), &c, start, &SolveOptions::default()).map_err(err)?;
            converged &= r.converged;
            objs.push(r.objective);
        }
        worst = worst.max((objs[0] - objs[1]).abs() / objs[0].max(1e-300));
    }
    Ok((
        worst,
        converged && worst <= 1e-8,
        "relative disagreement of two starts".into(),
    ))
}

fn sweep_nonincreasing(_: &mut ChaCha8Rng, _: usize) -> Result<(f64, bool, String), String> {
    let sys = CoeffSystem::build(
        FrequencyKind::Classical,
        &BoundProfile::Power { delta: 0.5 },
        128,
    )
    .map_err(err)?;
    let curve = sweep_n(
        &sys,
        &Target::One,
        1.0,
        &[2, 4, 8, 16, 32, 64, 128],
        &SolveOptions::default(),
    )
    .map_err(err)?;
    let ratio = curve.points.last().unwrap().objective / curve.points[0].objective;
    Ok((
        ratio,
        curve.is_nonincreasing() && curve.all_converged(),
        "m_128 / m_2 for power:0.5".into(),
    ))
}

fn bn_total(rng: &mut ChaCha8Rng, scale: usize) -> Result<(f64, bool, String), String> {
    let mut worst: f64 = 0.0;
    for _ in 0..40 * scale {
        let n = rng.gen_range(1..200);
        let mut l: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..40.0)).collect();
        l.sort_by(f64::total_cmp);
        l.dedup();
        let a: Vec<f64> = (0..l.len())
            .map(|_| 10f64.powf(rng.gen_range(-3.0..3.0)))
            .collect();
        let sys = CoeffSystem::custom(l, a).map_err(err)?;
        worst = worst.max(bn_bounds(&sys, Normalization::Unimodular).total);
    }
    Ok((worst, worst <= 2.0, "largest Σ B_n".into()))
}

fn window_transform(rng: &mut ChaCha8Rng, scale: usize) -> Result<(f64, bool, String), String> {
    let mut worst: f64 = 0.0;
    let mut mass: f64 = 0.0;
    for k in [3usize, 5] {
        let w = Window::equal(1.0, k).map_err(err)?;
        mass = mass.max((w.mass() - 1.0).abs());
        for _ in 0..20 * scale {
            let xi = rng.gen_range(-60.0..60.0);
            worst = worst.max((w.discrete_transform(xi).norm() - w.transform_modulus(xi)).abs());
        }
    }
    Ok((
        worst.max(mass),
        worst <= 1e-10 && mass <= 1e-10,
        "product law and mass errors".into(),
    ))
}

fn convolution_identity(rng: &mut ChaCha8Rng, scale: usize) -> Result<(f64, bool, String), String> {
    let mut worst: f64 = 0.0;
    for _ in 0..scale {
        let n = rng.gen_range(1..=5);
        let mut l: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..8.0)).collect();
        l.sort_by(f64::total_cmp);
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
        let sys = CoeffSystem::custom(l, c.clone()).map_err(err)?;
        let a: Vec<Complex64> = c
            .iter()
            .map(|&b| Complex64::from_polar(b * rng.gen::<f64>(), rng.gen_range(0.0..2.0 * PI)))
            .collect();
        let w = Window::equal(0.5, rng.gen_range(1..6)).map_err(err)?;
        let t: Vec<f64> = (0..10).map(|i| i as f64 * 0.3).collect();
        worst = worst.max(
            convolve_series(&a, &sys, &w, &t, 1.0)
                .map_err(err)?
                .max_discrepancy,
        );
    }
    Ok((
        worst,
        worst < 1e-8,
        "max discrepancy between the two sides".into(),
    ))
}

fn zeta_accuracy(rng: &mut ChaCha8Rng, scale: usize) -> Result<(f64, bool, String), String> {
    let z2 = zeta_em(Complex64::new(2.0, 0.0)).map_err(err)?.value;
    let mut worst = (z2 - PI * PI / 6.0).norm();
    for _ in 0..8 * scale {
        let s = Complex64::new(rng.gen_range(0.6..3.0), rng.gen_range(-100.0..100.0));
        let em = zeta_em(s).map_err(err)?.value;
        worst = worst.max((em - zeta_eta_series(s, 240).map_err(err)?).norm());
        worst = worst.max((hurwitz_em(s, 1.0).map_err(err)?.value - em).norm());
    }
    Ok((
        worst,
        worst <= 1e-9,
        "max deviation from ζ(2), eta series and Hurwitz α = 1".into(),
    ))
}

fn short_interval_bound(rng: &mut ChaCha8Rng, scale: usize) -> Result<(f64, bool, String), String> {
    let delta = 0.25;
    let floor = 0.5 * short_interval_constant(delta);
    let mut worst = f64::INFINITY;
    for _ in 0..2 * scale {
        let t = 10f64.powf(rng.gen_range(1.0..3.0));
        let r = interval_integral(t, delta, &SigmaSource::Constant(1.0), 1.0).map_err(err)?;
        worst = worst.min(r.integral / floor);
    }
    Ok((
        worst,
        worst >= 1.0,
        "smallest I / (0.5 π² e^{−γ} δ² / 24)".into(),
    ))
}

fn criterion_presets(_: &mut ChaCha8Rng, _: usize) -> Result<(f64, bool, String), String> {
    let conv = ramachandra_sum(
        &BoundProfile::LogPower { c: 2.0 },
        FrequencyKind::Classical,
        1 << 16,
    )
    .map_err(err)?;
    let div = ramachandra_sum(
        &BoundProfile::Power { delta: 0.5 },
        FrequencyKind::Classical,
        1 << 16,
    )
    .map_err(err)?;
    Ok((
        conv.partial_value,
        conv.verdict == Verdict::Convergent && div.verdict == Verdict::Divergent,
        "logpower:2 convergent, power:0.5 divergent".into(),
    ))
}

fn omega_curves(_: &mut ChaCha8Rng, _: usize) -> Result<(f64, bool, String), String> {
    let conv = omega_curve_criterion(&OmegaCurve::LogLogPower { eps: 0.5 }, 1e12).map_err(err)?;
    let div = omega_curve_criterion(&OmegaCurve::InvLogLog, 1e12).map_err(err)?;
    Ok((
        conv.partial_value,
        conv.verdict == Verdict::Convergent && div.verdict == Verdict::Divergent,
        "loglogpower:0.5 convergent, invloglog divergent".into(),
    ))
}
