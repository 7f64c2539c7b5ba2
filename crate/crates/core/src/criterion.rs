//! Convergence criteria for bound profiles, counting functions and σ-curves.
//!
//! Three equivalent-in-spirit tests, each classified either by a table of
//! closed-form comparisons for the preset families or, failing that, by the
//! ratio of successive doubling-window increments.

use std::fmt;
use std::str::FromStr;

use crate::arith;
use crate::error::{invalid, Error, Result};
use crate::frequency::{BoundProfile, CoeffSystem, FrequencyKind, Normalization};
use crate::quad::gl16;
use crate::table::fmt17;

/// Increment ratio below which a numeric trend counts as convergent.
pub const CONVERGENT_RATIO: f64 = 0.7;
/// Increment ratio above which a numeric trend counts as divergent.
pub const DIVERGENT_RATIO: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Convergent => "convergent",
            Verdict::Divergent => "divergent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionMethod {
    ClosedForm,
    NumericTail,
}

impl fmt::Display for CriterionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CriterionMethod::ClosedForm => "closed-form",
            CriterionMethod::NumericTail => "numeric-tail",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionVerdict {
    /// `ramachandra_sum`, `lambda_log_integral` or `omega_curve`.
    pub criterion: &'static str,
    /// Family descriptor with parameters, e.g. `logpower:2`.
    pub family: String,
    pub verdict: Verdict,
    /// Value of the sum or integral up to the last grid point.
    pub partial_value: f64,
    /// Estimate of the remainder; infinite when divergent, NaN when unknown.
    pub tail_estimate: f64,
    pub method: CriterionMethod,
    /// `(grid point, partial value)` on the doubling grid.
    pub evidence: Vec<(f64, f64)>,
}

impl CriterionVerdict {
    /// Single-line JSON record (non-finite numbers as `null`).
    pub fn to_record(&self) -> String {
        format!(
            "{{\"criterion\":\"{}\",\"family\":\"{}\",\"verdict\":\"{}\",\"partial_value\":{},\"tail_estimate\":{},\"method\":\"{}\",\"points\":{}}}",
            self.criterion,
            self.family,
            self.verdict,
            json_number(self.partial_value),
            json_number(self.tail_estimate),
            self.method,
            self.evidence.len()
        )
    }
}

fn json_number(x: f64) -> String {
    if x.is_finite() {
        fmt17(x)
    } else {
        "null".into()
    }
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Verdict from the last two doubling-window increments of `evidence`.
pub(crate) fn numeric_verdict(evidence: &[(f64, f64)]) -> (Verdict, f64) {
    if evidence.len() < 3 {
        return (Verdict::Inconclusive, f64::NAN);
    }
    let k = evidence.len();
    let last = evidence[k - 1].1 - evidence[k - 2].1;
    let prev = evidence[k - 2].1 - evidence[k - 3].1;
    if last == 0.0 && prev == 0.0 {
        return (Verdict::Convergent, 0.0);
    }
    if prev == 0.0 || last.signum() != prev.signum() {
        return (Verdict::Inconclusive, f64::NAN);
    }
    let ratio = last / prev;
    if ratio < CONVERGENT_RATIO {
        (Verdict::Convergent, last * ratio / (1.0 - ratio))
    } else if ratio > DIVERGENT_RATIO {
        (Verdict::Divergent, f64::INFINITY)
    } else {
        (Verdict::Inconclusive, f64::NAN)
    }
}

/// Closed-form verdict for the series/integral `Σ log Φ(n) / (n log² n)`
/// and its prime and divisor variants, which all compare with
/// `∫ log Φ(x) / (x log² x) dx`. The tail is the leading-order remainder of
/// that integral from `x`.
fn profile_closed_form(profile: &BoundProfile, x: f64) -> Option<(Verdict, f64)> {
    let l = x.ln();
    match *profile {
        BoundProfile::Unit => Some((Verdict::Convergent, 0.0)),
        BoundProfile::Power { delta: 0.0 } => Some((Verdict::Convergent, 0.0)),
        BoundProfile::Power { .. } => Some((Verdict::Divergent, f64::INFINITY)),
        BoundProfile::LogPower { c } => Some((Verdict::Convergent, c * (l.ln() + 1.0) / l)),
        BoundProfile::LogLog { theta } if theta > 1.0 => Some((
            Verdict::Convergent,
            l.ln().powf(1.0 - theta) / (theta - 1.0),
        )),
        BoundProfile::LogLog { .. } => Some((Verdict::Divergent, f64::INFINITY)),
        BoundProfile::Table(_) => None,
    }
}

/// `100, 200, 400, …` up to `n_max`, with `n_max` appended if off-grid.
fn doubling_grid(start: u64, n_max: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    let mut n = start;
    while n <= n_max {
        grid.push(n);
        n *= 2;
    }
    if grid.last() != Some(&n_max) {
        grid.push(n_max);
    }
    grid
}

/// Partial sums of the dichotomy series on the grid `100, 200, …, N_max`:
///
/// * classical, shifted and custom kinds: `Σ_{n≥2} log Φ(n) / (n log² n)`
/// * primes: `Σ_p log Φ(p) / (p log p)`
/// * divisor: `Σ_{n≥2} d(n) log Φ(n) / (n log³ n)`
///
/// The `n = 2` term is added separately from the `n ≥ 3` sum.
pub fn ramachandra_sum(
    profile: &BoundProfile,
    kind: FrequencyKind,
    n_max: u64,
) -> Result<CriterionVerdict> {
    if n_max < 100 {
        return Err(invalid(format!("N_max = {n_max} must be at least 100")));
    }
    profile.validate()?;
    let grid = doubling_grid(100, n_max);
    let term_at = |n: u64| profile.log_eval(n);
    let mut evidence = Vec::with_capacity(grid.len());
    let mut acc = Compensated::default();
    let mut gi = 0;
    match kind {
        FrequencyKind::Primes => {
            if n_max > arith::DEFAULT_SIEVE_LIMIT {
                return Err(invalid(format!("N_max = {n_max} exceeds the sieve limit")));
            }
            let primes = arith::primes_up_to(n_max);
            let mut idx = 0;
            for &g in &grid {
                while idx < primes.len() && primes[idx] <= g {
                    let p = primes[idx] as f64;
                    acc.add(term_at(primes[idx])? / (p * p.ln()));
                    idx += 1;
                }
                evidence.push((g as f64, acc.value()));
            }
        }
        FrequencyKind::Divisor => {
            if n_max > arith::DEFAULT_SIEVE_LIMIT {
                return Err(invalid(format!("N_max = {n_max} exceeds the sieve limit")));
            }
            let d = arith::divisor_counts(n_max);
            let term = |n: u64| -> Result<f64> {
                let x = n as f64;
                Ok(d[n as usize] as f64 * term_at(n)? / (x * x.ln().powi(3)))
            };
            acc.add(term(2)?);
            let mut n = 3;
            while gi < grid.len() {
                while n <= grid[gi] {
                    acc.add(term(n)?);
                    n += 1;
                }
                evidence.push((grid[gi] as f64, acc.value()));
                gi += 1;
            }
        }
        _ => {
            let term = |n: u64| -> Result<f64> {
                let x = n as f64;
                Ok(term_at(n)? / (x * x.ln().powi(2)))
            };
            acc.add(term(2)?);
            let mut n = 3;
            while gi < grid.len() {
                while n <= grid[gi] {
                    acc.add(term(n)?);
                    n += 1;
                }
                evidence.push((grid[gi] as f64, acc.value()));
                gi += 1;
            }
        }
    }
    let partial = evidence.last().map_or(0.0, |e| e.1);
    let (verdict, tail, method) = match profile_closed_form(profile, n_max as f64) {
        Some((v, t)) => (v, t, CriterionMethod::ClosedForm),
        None => {
            let (v, t) = numeric_verdict(&evidence);
            (v, t, CriterionMethod::NumericTail)
        }
    };
    Ok(CriterionVerdict {
        criterion: "ramachandra_sum",
        family: format!("{profile}/{kind}"),
        verdict,
        partial_value: partial,
        tail_estimate: tail,
        method,
        evidence,
    })
}

/// Largest `x` at which the weight-rule extrapolation is evaluated
/// (`e^x` must stay finite).
pub const MAX_EXTRAPOLATION: f64 = 700.0;

/// `∫_1^{X} log Λ(x) / x² dx` with `Λ(x) = 1 + Σ_{λ_n ≤ x} C_n` the counting
/// function of the unimodular amplitudes.
///
/// Exact on the piecewise-constant range `x ≤ λ_N`; beyond it `Λ` comes from
/// the weight rule and the integral is taken by 16-point Gauss–Legendre on
/// unit panels. Partial values are recorded at `X = 2, 4, 8, …, X_max`.
pub fn lambda_log_integral(sys: &CoeffSystem, x_max: f64) -> Result<CriterionVerdict> {
    if !(x_max > 1.0) || !x_max.is_finite() {
        return Err(invalid(format!("X_max = {x_max} must exceed 1")));
    }
    let top = sys.max_lambda();
    if x_max > top {
        if !sys.has_extrapolation() {
            return Err(Error::OutOfRange {
                x: x_max,
                limit: top,
            });
        }
        if x_max > MAX_EXTRAPOLATION {
            return Err(Error::OutOfRange {
                x: x_max,
                limit: MAX_EXTRAPOLATION,
            });
        }
    }
    let mut grid: Vec<f64> = Vec::new();
    let mut g = 2.0;
    while g < x_max {
        grid.push(g);
        g *= 2.0;
    }
    grid.push(x_max);
    let partials = log_lambda_partials(sys, &grid)?;
    let evidence: Vec<(f64, f64)> = grid.iter().copied().zip(partials).collect();
    let partial = evidence.last().map_or(0.0, |e| e.1);
    let closed = match sys.profile() {
        Some(p) if sys.has_extrapolation() => Some(p),
        _ => None,
    };
    let (verdict, tail, method) = match closed {
        Some(profile) => {
            let (v, t) = counting_closed_form(sys, profile, x_max)?;
            (v, t, CriterionMethod::ClosedForm)
        }
        None => {
            let (v, t) = numeric_verdict(&evidence);
            (v, t, CriterionMethod::NumericTail)
        }
    };
    let family = match sys.profile() {
        Some(p) => format!("{p}/{}", sys.kind()),
        None => format!("{}", sys.kind()),
    };
    Ok(CriterionVerdict {
        criterion: "lambda_log_integral",
        family,
        verdict,
        partial_value: partial,
        tail_estimate: tail,
        method,
        evidence,
    })
}

/// Closed-form classification of `∫ log Λ(x)/x² dx` for preset profiles.
/// `Λ` grows polynomially in `x` for unit and log-power bounds; there the
/// remainder from `X` is `(log Λ(X) + k)/X` with `k = d log Λ / d log x`
/// measured over `[X/2, X]`. The log-log family has `log Λ(x) ≈ x/(log x)^θ`
/// with remainder `(log X)^{1−θ}/(θ−1)`.
fn counting_closed_form(
    sys: &CoeffSystem,
    profile: &BoundProfile,
    x: f64,
) -> Result<(Verdict, f64)> {
    let (verdict, _) = profile_closed_form(profile, x.exp()).expect("preset profile");
    match (verdict, profile) {
        (Verdict::Divergent, _) => Ok((Verdict::Divergent, f64::INFINITY)),
        (_, BoundProfile::LogLog { theta }) => Ok((
            Verdict::Convergent,
            x.ln().powf(1.0 - theta) / (theta - 1.0),
        )),
        _ => {
            let lo = (0.5 * x).max(1.0);
            let vals = sys.extended_counting_sorted(&[lo, x], Normalization::Unimodular)?;
            let (l0, l1) = (vals[0].ln(), vals[1].ln());
            let k = if x > lo {
                (l1 - l0) / (x / lo).ln()
            } else {
                0.0
            };
            Ok((Verdict::Convergent, (l1 + k.max(0.0)) / x))
        }
    }
}

/// `∫_1^{X_j} log Λ(x)/x² dx` for each sorted `X_j`.
fn log_lambda_partials(sys: &CoeffSystem, grid: &[f64]) -> Result<Vec<f64>> {
    let lambdas = sys.lambdas();
    let prefix = sys.counting_at_frequencies(Normalization::Unimodular);
    let top = sys.max_lambda();
    let x_end = *grid.last().expect("nonempty grid");
    // piecewise-constant part on [1, min(X, λ_N)]
    let mut breaks: Vec<(f64, f64)> = Vec::new(); // (x where Λ changes, Λ after it)
    for (i, &l) in lambdas.iter().enumerate() {
        if l > 1.0 && l <= x_end.min(top) {
            breaks.push((l, prefix[i]));
        }
    }
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = Compensated::default();
    let mut x_prev = 1.0;
    let mut level = sys.counting_function_with(1.0, Normalization::Unimodular)?;
    let mut bi = 0;
    let mut nodes: Vec<f64> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut ext_prev = top;
    for &g in grid {
        let g_const = g.min(top);
        while bi < breaks.len() && breaks[bi].0 <= g_const {
            let (x, next) = breaks[bi];
            acc.add(level.ln() * (1.0 / x_prev - 1.0 / x));
            x_prev = x;
            level = next;
            bi += 1;
        }
        if g_const > x_prev {
            acc.add(level.ln() * (1.0 / x_prev - 1.0 / g_const));
            x_prev = g_const;
        }
        if g > top {
            nodes.clear();
            weights.clear();
            let panels = (g - ext_prev).ceil().max(1.0) as usize;
            let w = (g - ext_prev) / panels as f64;
            let rule = gl16();
            for p in 0..panels {
                let a = ext_prev + w * p as f64;
                for (u, wt) in rule.nodes().iter().zip(rule.weights()) {
                    nodes.push(a + 0.5 * w * (u + 1.0));
                    weights.push(0.5 * w * wt);
                }
            }
            let values = sys.extended_counting_sorted(&nodes, Normalization::Unimodular)?;
            for ((x, wt), v) in nodes.iter().zip(weights.iter()).zip(values) {
                if !v.is_finite() {
                    return Err(Error::NonFinite(format!("Λ({x})")));
                }
                acc.add(wt * v.ln() / (x * x));
            }
            ext_prev = g;
        }
        out.push(acc.value());
    }
    Ok(out)
}

/// A σ-curve `ω(t) ≤ 1` with a deficit `1 − ω` that decays along `log log t`.
#[derive(Debug, Clone, PartialEq)]
pub enum OmegaCurve {
    /// `ω ≡ 1`
    One,
    /// `1 − ω(t) = min(1, (log log t)^{-1-ε})`
    LogLogPower { eps: f64 },
    /// `1 − ω(t) = min(1, 1/log log t)`
    InvLogLog,
    /// `(t, ω)` samples, linearly interpolated in `log log t`; evaluation
    /// outside the sampled range is an error.
    Table(Vec<(f64, f64)>),
}

impl OmegaCurve {
    pub fn validate(&self) -> Result<()> {
        match self {
            OmegaCurve::LogLogPower { eps } if !(*eps > 0.0 && eps.is_finite()) => {
                Err(invalid(format!("ε = {eps} must be positive")))
            }
            OmegaCurve::Table(rows) => {
                if rows.len() < 2 {
                    return Err(invalid("an ω table needs at least two rows"));
                }
                if rows.iter().any(|r| !(r.0 > 1.0)) {
                    return Err(invalid("ω table abscissae must exceed 1"));
                }
                if rows.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(invalid("ω table abscissae must increase"));
                }
                if let Some(r) = rows.iter().find(|r| !(r.1 <= 1.0) || !r.1.is_finite()) {
                    return Err(invalid(format!("ω({}) = {} exceeds 1", r.0, r.1)));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `1 − ω(t)`.
    pub fn deficit(&self, t: f64) -> Result<f64> {
        let u = |t: f64| t.max(std::f64::consts::E.exp()).ln().ln();
        match self {
            OmegaCurve::One => Ok(0.0),
            OmegaCurve::LogLogPower { eps } => Ok(u(t).powf(-1.0 - eps).min(1.0)),
            OmegaCurve::InvLogLog => Ok((1.0 / u(t)).min(1.0)),
            OmegaCurve::Table(rows) => {
                let (first, last) = (rows[0].0, rows[rows.len() - 1].0);
                if !(t >= first && t <= last) {
                    return Err(Error::OutOfRange { x: t, limit: last });
                }
                let i = rows.partition_point(|r| r.0 <= t).clamp(1, rows.len() - 1);
                let (t0, w0) = rows[i - 1];
                let (t1, w1) = rows[i];
                let (v, v0, v1) = (t.ln().ln(), t0.ln().ln(), t1.ln().ln());
                let w = if v1 > v0 {
                    w0 + (w1 - w0) * (v - v0) / (v1 - v0)
                } else {
                    w0
                };
                Ok(1.0 - w)
            }
        }
    }

    /// `ω(t)`; an error if it exceeds 1.
    pub fn omega(&self, t: f64) -> Result<f64> {
        let w = 1.0 - self.deficit(t)?;
        if !(w <= 1.0) {
            return Err(invalid(format!("ω({t}) = {w} exceeds 1")));
        }
        Ok(w)
    }
}

impl fmt::Display for OmegaCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaCurve::One => write!(f, "one"),
            OmegaCurve::LogLogPower { eps } => write!(f, "loglogpower:{eps}"),
            OmegaCurve::InvLogLog => write!(f, "invloglog"),
            OmegaCurve::Table(rows) => write!(f, "table[{}]", rows.len()),
        }
    }
}

impl FromStr for OmegaCurve {
    type Err = Error;

    /// Parses `one`, `loglogpower:ε` and `invloglog`.
    fn from_str(s: &str) -> Result<Self> {
        let curve = match s.split_once(':') {
            None if s == "one" => OmegaCurve::One,
            None if s == "invloglog" => OmegaCurve::InvLogLog,
            Some(("loglogpower", e)) => OmegaCurve::LogLogPower {
                eps: e.parse().map_err(|_| invalid(format!("bad ε in {s:?}")))?,
            },
            _ => return Err(invalid(format!("unknown ω curve {s:?}"))),
        };
        curve.validate()?;
        Ok(curve)
    }
}

/// `∫_2^{T} (1 − ω(t)) / (t log t) dt`, computed in `u = log log t` where it
/// becomes `∫ (1 − ω) du`. Partial values are recorded at `t = 4, 16, 256, …`
/// (each window squares `t`) and at `T_max`.
pub fn omega_curve_criterion(curve: &OmegaCurve, t_max: f64) -> Result<CriterionVerdict> {
    curve.validate()?;
    if !(t_max > 4.0) || !t_max.is_finite() {
        return Err(invalid(format!("T_max = {t_max} must exceed 4")));
    }
    let u_of = |t: f64| t.ln().ln();
    let u_end = u_of(t_max);
    let mut grid_u = Vec::new();
    let mut t = 4.0f64;
    while t < t_max && t.is_finite() {
        grid_u.push(u_of(t));
        t *= t;
    }
    grid_u.push(u_end);
    let mut evidence = Vec::with_capacity(grid_u.len());
    let mut acc = Compensated::default();
    let mut u_prev = u_of(2.0);
    let rule = gl16();
    for &ug in &grid_u {
        let panels = ((ug - u_prev) / 0.125).ceil().max(1.0) as usize;
        let w = (ug - u_prev) / panels as f64;
        for p in 0..panels {
            let a = u_prev + w * p as f64;
            for (x, wt) in rule.nodes().iter().zip(rule.weights()) {
                let u = a + 0.5 * w * (x + 1.0);
                let t = u.exp().exp();
                acc.add(0.5 * w * wt * (1.0 - curve.omega(t)?));
            }
        }
        u_prev = ug;
        evidence.push((ug.exp().exp(), acc.value()));
    }
    let partial = acc.value();
    let (verdict, tail, method) = match curve {
        OmegaCurve::One => (Verdict::Convergent, 0.0, CriterionMethod::ClosedForm),
        OmegaCurve::LogLogPower { eps } => {
            let u = u_end.max(1.0);
            (
                Verdict::Convergent,
                u.powf(-eps) / eps,
                CriterionMethod::ClosedForm,
            )
        }
        OmegaCurve::InvLogLog => (
            Verdict::Divergent,
            f64::INFINITY,
            CriterionMethod::ClosedForm,
        ),
        OmegaCurve::Table(_) => {
            let (v, t) = numeric_verdict(&evidence);
            (v, t, CriterionMethod::NumericTail)
        }
    };
    Ok(CriterionVerdict {
        criterion: "omega_curve",
        family: curve.to_string(),
        verdict,
        partial_value: partial,
        tail_estimate: tail,
        method,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_power_is_convergent() {
        for c in [0.5, 2.0, 5.0] {
            let v = ramachandra_sum(
                &BoundProfile::LogPower { c },
                FrequencyKind::Classical,
                100_000,
            )
            .unwrap();
            assert_eq!(v.verdict, Verdict::Convergent);
            assert!(v.tail_estimate.is_finite());
            assert_eq!(v.method, CriterionMethod::ClosedForm);
        }
    }

    #[test]
    fn power_is_divergent() {
        let v = ramachandra_sum(
            &BoundProfile::Power { delta: 0.5 },
            FrequencyKind::Classical,
            10_000,
        )
        .unwrap();
        assert_eq!(v.verdict, Verdict::Divergent);
        assert!(v.tail_estimate.is_infinite());
    }

    #[test]
    fn loglog_threshold() {
        let conv = ramachandra_sum(
            &BoundProfile::LogLog { theta: 2.0 },
            FrequencyKind::Classical,
            10_000,
        )
        .unwrap();
        assert_eq!(conv.verdict, Verdict::Convergent);
        let div = ramachandra_sum(
            &BoundProfile::LogLog { theta: 1.0 },
            FrequencyKind::Classical,
            10_000,
        )
        .unwrap();
        assert_eq!(div.verdict, Verdict::Divergent);
    }

    #[test]
    fn grid_doubles_from_hundred() {
        let v = ramachandra_sum(&BoundProfile::Unit, FrequencyKind::Classical, 1000).unwrap();
        let xs: Vec<f64> = v.evidence.iter().map(|e| e.0).collect();
        assert_eq!(xs, vec![100.0, 200.0, 400.0, 800.0, 1000.0]);
        assert!(v.evidence.iter().all(|e| e.1 == 0.0));
        assert!(ramachandra_sum(&BoundProfile::Unit, FrequencyKind::Classical, 99).is_err());
    }

    #[test]
    fn partial_sum_matches_direct_summation() {
        let p = BoundProfile::Power { delta: 1.0 };
        let v = ramachandra_sum(&p, FrequencyKind::Classical, 100).unwrap();
        let direct: f64 = (2..=100u64)
            .map(|n| {
                let x = n as f64;
                x.ln() / (x * x.ln().powi(2))
            })
            .sum();
        assert!((v.partial_value - direct).abs() < 1e-12);
    }

    #[test]
    fn table_profile_falls_back_to_numeric_trend() {
        let table = |f: fn(f64) -> f64| -> BoundProfile {
            BoundProfile::Table((1..=1600).map(|n| (n, f(n as f64))).collect())
        };
        let grow =
            ramachandra_sum(&table(|x| x.sqrt().exp()), FrequencyKind::Classical, 1600).unwrap();
        assert_eq!(grow.method, CriterionMethod::NumericTail);
        assert_eq!(grow.verdict, Verdict::Divergent);
        // log Φ vanishes beyond n = 150: increments are exactly zero
        let flat = ramachandra_sum(
            &table(|x| if x <= 150.0 { 0.5 } else { 1.0 }),
            FrequencyKind::Classical,
            1600,
        )
        .unwrap();
        assert_eq!(flat.verdict, Verdict::Convergent);
        // increments of Σ 1/(2n log n) shrink too slowly to decide at this size
        let slow = ramachandra_sum(&table(f64::sqrt), FrequencyKind::Classical, 1600).unwrap();
        assert_eq!(slow.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn omega_presets() {
        let c = omega_curve_criterion(&OmegaCurve::LogLogPower { eps: 0.5 }, 1e100).unwrap();
        assert_eq!(c.verdict, Verdict::Convergent);
        let one = omega_curve_criterion(&OmegaCurve::One, 1e10).unwrap();
        assert_eq!(one.partial_value, 0.0);
        assert_eq!(one.verdict, Verdict::Convergent);
        let d = omega_curve_criterion(&OmegaCurve::InvLogLog, 1e100).unwrap();
        assert_eq!(d.verdict, Verdict::Divergent);
    }

    #[test]
    fn omega_integral_matches_closed_form() {
        // for t ≥ e^e the deficit is u^{-3/2}; ∫_1^U u^{-3/2} du = 2(1 − U^{-1/2})
        let curve = OmegaCurve::LogLogPower { eps: 0.5 };
        let t_max = 1e50f64;
        let v = omega_curve_criterion(&curve, t_max).unwrap();
        let u_end = t_max.ln().ln();
        let expected = (1.0 - 2f64.ln().ln()) + 2.0 * (1.0 - u_end.powf(-0.5));
        // the kink at u = 1 limits Gauss–Legendre accuracy on one panel
        assert!(
            (v.partial_value - expected).abs() < 1e-4,
            "{} vs {}",
            v.partial_value,
            expected
        );
    }

    #[test]
    fn omega_above_one_is_rejected() {
        let bad = OmegaCurve::Table(vec![(10.0, 0.9), (100.0, 1.2)]);
        assert!(omega_curve_criterion(&bad, 50.0).is_err());
    }

    #[test]
    fn verdict_record_is_single_line() {
        let v = ramachandra_sum(
            &BoundProfile::Power { delta: 0.5 },
            FrequencyKind::Classical,
            1000,
        )
        .unwrap();
        let r = v.to_record();
        assert!(!r.contains('\n'));
        assert!(r.contains("\"verdict\":\"divergent\""));
        assert!(r.contains("\"tail_estimate\":null"));
    }

    #[test]
    fn lambda_integral_classical_presets() {
        let sqrt = CoeffSystem::build(
            FrequencyKind::Classical,
            &BoundProfile::Power { delta: 0.5 },
            1000,
        )
        .unwrap();
        assert_eq!(
            lambda_log_integral(&sqrt, 50.0).unwrap().verdict,
            Verdict::Divergent
        );
        let lp = CoeffSystem::build(
            FrequencyKind::Classical,
            &BoundProfile::LogPower { c: 2.0 },
            1000,
        )
        .unwrap();
        let v = lambda_log_integral(&lp, 50.0).unwrap();
        assert_eq!(v.verdict, Verdict::Convergent);
        assert!(v.tail_estimate.is_finite() && v.tail_estimate > 0.0);
    }

    #[test]
    fn lambda_integral_exact_on_step_function() {
        // Λ = 1 on [1, 2), 3 on [2, 4]
        let sys = CoeffSystem::custom(vec![2.0, 10.0], vec![2.0, 1.0]).unwrap();
        let v = lambda_log_integral(&sys, 4.0).unwrap();
        let expected = 3f64.ln() * (0.5 - 0.25);
        assert!((v.partial_value - expected).abs() < 1e-15);
        assert!(matches!(
            lambda_log_integral(&sys, 20.0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn lambda_integral_zero_when_no_terms_in_range() {
        let sys = CoeffSystem::custom(vec![60.0], vec![1.0]).unwrap();
        let v = lambda_log_integral(&sys, 50.0).unwrap();
        assert_eq!(v.partial_value, 0.0);
        assert_eq!(v.verdict, Verdict::Convergent);
    }
}
