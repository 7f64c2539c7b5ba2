//! Riemann and Hurwitz zeta values by Euler–Maclaurin summation, and scans
//! of short-interval integrals `∫_T^{T+δ} |ζ(σ+it, α)| dt`.

use std::cell::Cell;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::criterion::OmegaCurve;
use crate::error::{invalid, Error, Result};
use crate::frequency::EULER_GAMMA;
use crate::quad::{adaptive, gl16, refine};
use crate::table::fmt17;

/// `B_2, B_4, …, B_22`.
const BERNOULLI: [f64; 11] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];

/// Bernoulli corrections used by [`hurwitz_em`]; the eleventh bounds the error.
pub const CORRECTION_ORDER: usize = 10;

/// Target accuracy of [`hurwitz_em`].
pub const TARGET_ERROR: f64 = 1e-10;

/// Largest truncation point tried before an evaluation is returned with
/// its (larger) error bound.
const MAX_TERMS: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaMethod {
    EulerMaclaurin,
    /// `Σ_{1 ≤ n < T} n^{-s}`.
    TruncatedSum,
}

impl fmt::Display for ZetaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZetaMethod::EulerMaclaurin => write!(f, "euler-maclaurin"),
            ZetaMethod::TruncatedSum => write!(f, "truncated-sum"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ZetaEval {
    pub s: Complex64,
    pub alpha: f64,
    pub value: Complex64,
    pub method: ZetaMethod,
    /// Bound on `|value − ζ(s, α)|`; for truncated sums this is NaN.
    pub error_bound: f64,
    /// Terms summed directly.
    pub terms: usize,
}

impl ZetaEval {
    pub fn within_target(&self) -> bool {
        self.error_bound <= TARGET_ERROR
    }
}

/// `ζ(s)`.
pub fn zeta_em(s: Complex64) -> Result<ZetaEval> {
    hurwitz_em(s, 1.0)
}

/// `ζ(s, α) = Σ_{k≥0} (k+α)^{-s}` for `σ > 0`, `s ≠ 1`, `α > 0`.
///
/// Sums `M ≥ max(50, 4|t|/2π)` terms directly, then the integral, the
/// half-term and ten Bernoulli corrections at `M + α`. The error bound is
/// the first omitted correction scaled by `|s+2p+1|/(σ+2p+1)`. If it exceeds
/// [`TARGET_ERROR`] the truncation point is doubled.
pub fn hurwitz_em(s: Complex64, alpha: f64) -> Result<ZetaEval> {
    if !(s.re > 0.0) || !s.re.is_finite() || !s.im.is_finite() {
        return Err(invalid(format!(
            "Re s = {} must be positive and finite",
            s.re
        )));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole);
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(invalid(format!("α = {alpha} must be positive")));
    }
    let mut m = 50usize.max((4.0 * s.im.abs() / (2.0 * PI)).ceil() as usize);
    loop {
        let (value, bound) = em_sum(s, alpha, m);
        if bound <= TARGET_ERROR || m >= MAX_TERMS {
            return Ok(ZetaEval {
                s,
                alpha,
                value,
                method: ZetaMethod::EulerMaclaurin,
                error_bound: bound,
                terms: m,
            });
        }
        m *= 2;
    }
}

fn em_sum(s: Complex64, alpha: f64, m: usize) -> (Complex64, f64) {
    let mut direct = Complex64::new(0.0, 0.0);
    // smallest terms first
    for k in (0..m).rev() {
        direct += (-s * (k as f64 + alpha).ln()).exp();
    }
    let x = m as f64 + alpha;
    let lx = x.ln();
    let x_pow = (-s * lx).exp(); // x^{-s}
    let one = Complex64::new(1.0, 0.0);
    let mut value = direct + x_pow * x / (s - one) + x_pow * 0.5;
    // T_j = B_{2j}/(2j)! · s(s+1)…(s+2j−2) · x^{-s-2j+1}
    let mut rising = s; // s(s+1)…(s+2j−2)
    let mut factorial = 2.0; // (2j)!
    let mut power = x_pow / x; // x^{-s-2j+1}
    for j in 1..=CORRECTION_ORDER {
        value += rising * power * (BERNOULLI[j - 1] / factorial);
        let a = 2.0 * j as f64;
        rising = rising * (s + (a - 1.0)) * (s + a);
        factorial *= (a + 1.0) * (a + 2.0);
        power /= x * x;
    }
    let p = CORRECTION_ORDER as f64;
    let next = rising * power * (BERNOULLI[CORRECTION_ORDER] / factorial);
    let bound = next.norm() * (s + (2.0 * p + 1.0)).norm() / (s.re + 2.0 * p + 1.0);
    (value, bound)
}

/// `Σ_{1 ≤ n < T} n^{-s}`.
pub fn truncated_sum(s: Complex64, t_cut: f64) -> ZetaEval {
    let mut acc = Complex64::new(0.0, 0.0);
    let top = if t_cut > 1.0 {
        t_cut.ceil() as usize - 1
    } else {
        0
    };
    for n in (1..=top).rev() {
        acc += (-s * (n as f64).ln()).exp();
    }
    ZetaEval {
        s,
        alpha: 1.0,
        value: acc,
        method: ZetaMethod::TruncatedSum,
        error_bound: f64::NAN,
        terms: top,
    }
}

/// `π² e^{-γ} δ² / 24`, the asymptotic infimum of the σ = 1 interval integral.
pub fn short_interval_constant(delta: f64) -> f64 {
    PI * PI * (-EULER_GAMMA).exp() / 24.0 * delta * delta
}

/// Where σ comes from in a scan.
#[derive(Debug, Clone, PartialEq)]
pub enum SigmaSource {
    Constant(f64),
    /// `σ = ω(T)`, held fixed across `[T, T+δ]`.
    Curve(OmegaCurve),
}

impl SigmaSource {
    pub fn at(&self, t: f64) -> Result<f64> {
        match self {
            SigmaSource::Constant(s) => Ok(*s),
            SigmaSource::Curve(c) => c.omega(t),
        }
    }
}

impl fmt::Display for SigmaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaSource::Constant(s) => write!(f, "{s}"),
            SigmaSource::Curve(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord {
    pub t: f64,
    pub delta: f64,
    pub sigma: f64,
    pub alpha: f64,
    /// `∫_T^{T+δ} |ζ(σ+it, α)| dt`
    pub integral: f64,
    pub quadrature_error: f64,
    /// `|ζ| < 1e-3` was seen and the panel was refined adaptively.
    pub near_zero: bool,
    /// Quadrature did not reach its tolerance; `integral` is the last estimate.
    pub failed: bool,
    /// Largest Euler–Maclaurin error bound over the quadrature nodes.
    pub max_eval_bound: f64,
}

/// Relative tolerance between successive composite estimates.
pub const INTEGRAL_TOL: f64 = 1e-8;
const NEAR_ZERO: f64 = 1e-3;

/// `∫_T^{T+δ} |ζ(σ+it, α)| dt` by composite 16-point Gauss–Legendre with
/// panel doubling; falls back to adaptive bisection when `|ζ|` nearly
/// vanishes inside the interval.
pub fn interval_integral(
    t: f64,
    delta: f64,
    sigma: &SigmaSource,
    alpha: f64,
) -> Result<ScanRecord> {
    if !(t >= 2.0) || !t.is_finite() {
        return Err(invalid(format!("T = {t} must be at least 2")));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(invalid(format!("δ = {delta} must be positive")));
    }
    let sig = sigma.at(t)?;
    // validate once so the integrand cannot fail
    hurwitz_em(Complex64::new(sig, t), alpha)?;
    let min_abs = Cell::new(f64::INFINITY);
    let max_bound = Cell::new(0.0f64);
    let mut integrand = |u: f64| -> f64 {
        let z = hurwitz_em(Complex64::new(sig, u), alpha).expect("validated parameters");
        max_bound.set(max_bound.get().max(z.error_bound));
        let v = z.value.norm();
        min_abs.set(min_abs.get().min(v));
        v
    };
    let first = refine(
        gl16(),
        &[t, t + delta],
        INTEGRAL_TOL,
        0.0,
        10,
        &mut integrand,
    );
    let mut record = ScanRecord {
        t,
        delta,
        sigma: sig,
        alpha,
        integral: 0.0,
        quadrature_error: 0.0,
        near_zero: false,
        failed: false,
        max_eval_bound: 0.0,
    };
    let refined = match first {
        Ok(r) if min_abs.get() >= NEAR_ZERO => Ok((r.value, r.error)),
        other => {
            record.near_zero = min_abs.get() < NEAR_ZERO;
            let guess = match &other {
                Ok(r) => r.value,
                Err(Error::Quadrature { estimate, .. }) => *estimate,
                Err(_) => delta * NEAR_ZERO,
            };
            let tol = INTEGRAL_TOL * guess.max(f64::MIN_POSITIVE);
            adaptive(t, t + delta, tol, 40, &mut integrand).map(|v| (v, tol))
        }
    };
    record.max_eval_bound = max_bound.get();
    match refined {
        Ok((value, err)) => {
            record.integral = value;
            record.quadrature_error = err;
            Ok(record)
        }
        Err(e) => Err(e),
    }
}

/// Ordered scan results with the running minimum of the integral.
#[derive(Debug, Clone, Default)]
pub struct Scan {
    pub records: Vec<ScanRecord>,
    /// Running minimum after each record (failed points excluded).
    pub running_min: Vec<f64>,
    pub min_value: f64,
    /// `T` at which the minimum is attained.
    pub argmin_t: f64,
}

impl Scan {
    pub fn failed_points(&self) -> usize {
        self.records.iter().filter(|r| r.failed).count()
    }

    pub fn all_positive(&self) -> bool {
        self.records.iter().all(|r| !r.failed && r.integral > 0.0)
    }

    /// Rows `T sigma delta alpha I error running_min flags`, then a trailing
    /// summary record.
    pub fn to_table(&self) -> String {
        let mut out = String::from("# T sigma delta alpha I quadrature_error running_min flags\n");
        for (r, m) in self.records.iter().zip(&self.running_min) {
            let mut flags = Vec::new();
            if r.near_zero {
                flags.push("near_zero");
            }
            if r.failed {
                flags.push("failed");
            }
            let flags = if flags.is_empty() {
                "-".to_string()
            } else {
                flags.join(",")
            };
            out.push_str(&format!(
                "{} {} {} {} {} {} {} {}\n",
                fmt17(r.t),
                fmt17(r.sigma),
                fmt17(r.delta),
                fmt17(r.alpha),
                fmt17(r.integral),
                fmt17(r.quadrature_error),
                fmt17(*m),
                flags
            ));
        }
        out.push_str(&format!(
            "# summary {{\"points\":{},\"failed\":{},\"running_min\":{},\"argmin_T\":{}}}\n",
            self.records.len(),
            self.failed_points(),
            json_number(self.min_value),
            json_number(self.argmin_t)
        ));
        out
    }
}

fn json_number(x: f64) -> String {
    if x.is_finite() {
        fmt17(x)
    } else {
        "null".into()
    }
}

/// Interval integrals at every `T` of the schedule, evaluated in parallel
/// and reported in schedule order. Quadrature failures are flagged rather
/// than fatal; invalid parameters are errors.
pub fn scan(sigma: &SigmaSource, schedule: &[f64], delta: f64, alpha: f64) -> Result<Scan> {
    let results: Vec<Result<ScanRecord>> = schedule
        .par_iter()
        .map(|&t| match interval_integral(t, delta, sigma, alpha) {
            Err(Error::Quadrature { estimate, .. }) => Ok(ScanRecord {
                t,
                delta,
                sigma: sigma.at(t)?,
                alpha,
                integral: estimate,
                quadrature_error: f64::NAN,
                near_zero: false,
                failed: true,
                max_eval_bound: f64::NAN,
            }),
            other => other,
        })
        .collect();
    let mut out = Scan {
        min_value: f64::INFINITY,
        argmin_t: f64::NAN,
        ..Default::default()
    };
    for r in results {
        let r = r?;
        if !r.failed && r.integral < out.min_value {
            out.min_value = r.integral;
            out.argmin_t = r.t;
        }
        out.running_min.push(out.min_value);
        out.records.push(r);
    }
    Ok(out)
}

/// `count` points from `a` to `b` equally spaced in `log T`.
pub fn log_spaced(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let (la, lb) = (a.ln(), b.ln());
            (0..count)
                .map(|i| {
                    if i == 0 {
                        a
                    } else if i + 1 == count {
                        b
                    } else {
                        (la + (lb - la) * i as f64 / (count - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// Independent evaluation `ζ(s) = η(s)/(1 − 2^{1−s})` with the alternating
/// series `η` accelerated by Borwein's Chebyshev weights over `terms` terms.
/// The truncation error is about `(1+2|t|) e^{π|t|/2} (3+√8)^{−terms}`.
pub fn zeta_eta_series(s: Complex64, terms: usize) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(invalid(format!("eta series needs Re s > 0, got {s}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let denom = one - Complex64::new(2.0, 0.0).powc(one - s);
    if denom.norm() < 1e-14 {
        return Err(invalid(format!("eta series is singular at {s}")));
    }
    let n = terms.clamp(1, 400);
    let nf = n as f64;
    // d_k = n Σ_{i ≤ k} (n+i−1)! 4^i / ((n−i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / nf;
    let mut acc = 0.0;
    for i in 0..=n {
        acc += term;
        d.push(nf * acc);
        let fi = i as f64;
        term *= 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
    }
    let dn = d[n];
    let mut eta = Complex64::new(0.0, 0.0);
    for (k, dk) in d.iter().take(n).enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        eta += (-((k + 1) as f64).ln() * s).exp() * (sign * (dk - dn));
    }
    Ok(-eta / dn / denom)
}
