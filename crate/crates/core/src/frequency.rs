//! Frequency systems, coefficient bound profiles and the counting function.
//!
//! A [`CoeffSystem`] pairs strictly increasing frequencies `λ_1 < λ_2 < …`
//! with amplitude bounds. Two normalizations are stored side by side:
//!
//! * **unimodular** amplitudes `C_n`, the bound on the coefficient of the
//!   unimodular exponential `e^{-iλ_n t}` (what the solver constrains);
//! * **arithmetic** weights `A_n`, the bound on the coefficient of the
//!   classical term `m^{it-1}`, i.e. `Φ(m)` (times `d(m)` for the divisor
//!   family).
//!
//! Internally systems are 1-based over `λ`; `arith_index` records the integer
//! `m` each frequency came from (`m = n + 1` for the classical family, the
//! prime itself for the prime family, `n` for the shifted family).

use std::fmt;
use std::str::FromStr;

use crate::arith;
use crate::error::{invalid, Error, Result};
use crate::quad;

/// How a frequency sequence was generated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrequencyKind {
    /// `λ_n = log(n + 1)`
    Classical,
    /// `λ_k = log p_k`
    Primes,
    /// classical frequencies with divisor-weighted amplitudes
    Divisor,
    /// `λ_n = log(n + α) − log α`
    Shifted {
        alpha: f64,
    },
    Custom,
}

impl fmt::Display for FrequencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrequencyKind::Classical => write!(f, "classical"),
            FrequencyKind::Primes => write!(f, "primes"),
            FrequencyKind::Divisor => write!(f, "divisor"),
            FrequencyKind::Shifted { alpha } => write!(f, "shifted:{alpha}"),
            FrequencyKind::Custom => write!(f, "custom"),
        }
    }
}

impl FromStr for FrequencyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("classical", None) => Ok(FrequencyKind::Classical),
            ("primes", None) => Ok(FrequencyKind::Primes),
            ("divisor", None) => Ok(FrequencyKind::Divisor),
            ("shifted", Some(a)) => {
                let alpha: f64 = a.parse().map_err(|_| invalid(format!("bad shift {a:?}")))?;
                Ok(FrequencyKind::Shifted { alpha })
            }
            ("custom", _) => Ok(FrequencyKind::Custom),
            _ => Err(invalid(format!("unknown frequency kind {s:?}"))),
        }
    }
}

/// A strictly increasing positive frequency sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySystem {
    kind: FrequencyKind,
    lambdas: Vec<f64>,
    arith_index: Vec<u64>,
}

impl FrequencySystem {
    pub fn new(kind: FrequencyKind, lambdas: Vec<f64>, arith_index: Vec<u64>) -> Result<Self> {
        if lambdas.len() != arith_index.len() {
            return Err(invalid("frequency and index lists differ in length"));
        }
        if let Some(i) = lambdas.iter().position(|l| !l.is_finite() || *l <= 0.0) {
            return Err(Error::FrequencyOrder(i + 1));
        }
        if let Some(i) = lambdas.windows(2).position(|p| p[1] <= p[0]) {
            return Err(Error::FrequencyOrder(i + 2));
        }
        Ok(Self {
            kind,
            lambdas,
            arith_index,
        })
    }

    pub fn kind(&self) -> FrequencyKind {
        self.kind
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn arith_index(&self) -> &[u64] {
        &self.arith_index
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

/// A positive nondecreasing bound `Φ(n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundProfile {
    /// `Φ ≡ 1`
    Unit,
    /// `Φ(n) = n^δ`
    Power { delta: f64 },
    /// `Φ(n) = (log n)^C`, with `n` clamped below at 2 so that `Φ(1) = Φ(2)`.
    LogPower { c: f64 },
    /// `Φ(n) = exp(v / (log v)^θ)` with `v = max(log n, e^θ)`; the clamp keeps
    /// `Φ` nondecreasing. Convergent criterion iff `θ > 1`.
    LogLog { theta: f64 },
    /// Tabulated values; indices outside the table are an error.
    Table(Vec<(u64, f64)>),
}

impl BoundProfile {
    /// Evaluate at an integer index.
    pub fn eval(&self, n: u64) -> Result<f64> {
        let v = match self {
            BoundProfile::Table(rows) => match rows.binary_search_by_key(&n, |r| r.0) {
                Ok(i) => rows[i].1,
                Err(_) => return Err(invalid(format!("bound table has no entry for n = {n}"))),
            },
            _ => self
                .eval_real(n as f64)
                .expect("preset profiles are continuous"),
        };
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositiveBound { n, value: v });
        }
        Ok(v)
    }

    /// The continuous extension used for extrapolation; `None` for tables.
    pub fn eval_real(&self, u: f64) -> Option<f64> {
        match self {
            BoundProfile::Unit => Some(1.0),
            BoundProfile::Power { delta } => Some(u.powf(*delta)),
            BoundProfile::LogPower { c } => Some(u.max(2.0).ln().powf(*c)),
            BoundProfile::LogLog { theta } => {
                let v = u.max(1.0).ln().max(theta.exp());
                Some((v / v.ln().powf(*theta)).exp())
            }
            BoundProfile::Table(_) => None,
        }
    }

    /// `log Φ` evaluated without forming `Φ` (avoids overflow for steep profiles).
    pub fn log_eval(&self, n: u64) -> Result<f64> {
        match self {
            BoundProfile::Unit => Ok(0.0),
            BoundProfile::Power { delta } => Ok(delta * (n as f64).ln()),
            BoundProfile::LogPower { c } => Ok(c * (n.max(2) as f64).ln().ln()),
            BoundProfile::LogLog { theta } => {
                let v = (n.max(1) as f64).ln().max(theta.exp());
                Ok(v / v.ln().powf(*theta))
            }
            BoundProfile::Table(_) => self.eval(n).map(f64::ln),
        }
    }

    /// Parameter validation for preset families.
    pub fn validate(&self) -> Result<()> {
        match self {
            BoundProfile::Power { delta } if !(delta.is_finite() && *delta >= 0.0) => {
                Err(invalid(format!("power exponent {delta} must be >= 0")))
            }
            BoundProfile::LogPower { c } if !(c.is_finite() && *c >= 0.0) => {
                Err(invalid(format!("log-power exponent {c} must be >= 0")))
            }
            BoundProfile::LogLog { theta } if !(theta.is_finite() && *theta > 0.0) => {
                Err(invalid(format!("log-log threshold {theta} must be > 0")))
            }
            BoundProfile::Table(rows) => {
                for &(n, v) in rows {
                    if !(v > 0.0) {
                        return Err(Error::NonPositiveBound { n, value: v });
                    }
                }
                if let Some(w) = rows.windows(2).find(|w| w[1].1 < w[0].1) {
                    return Err(Error::NotMonotone { n: w[1].0 });
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn is_table(&self) -> bool {
        matches!(self, BoundProfile::Table(_))
    }
}

impl fmt::Display for BoundProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundProfile::Unit => write!(f, "unit"),
            BoundProfile::Power { delta } => write!(f, "power:{delta}"),
            BoundProfile::LogPower { c } => write!(f, "logpower:{c}"),
            BoundProfile::LogLog { theta } => write!(f, "loglog:{theta}"),
            BoundProfile::Table(rows) => write!(f, "table[{}]", rows.len()),
        }
    }
}

impl FromStr for BoundProfile {
    type Err = Error;

    /// Parses `unit`, `power:δ`, `logpower:C` and `loglog:θ`.
    fn from_str(s: &str) -> Result<Self> {
        let num = |a: Option<&str>| -> Result<f64> {
            let a = a.ok_or_else(|| invalid(format!("{s:?} needs a parameter")))?;
            a.parse()
                .map_err(|_| invalid(format!("bad parameter in {s:?}")))
        };
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let profile = match head {
            "unit" => BoundProfile::Unit,
            "power" => BoundProfile::Power { delta: num(arg)? },
            "logpower" => BoundProfile::LogPower { c: num(arg)? },
            "loglog" => BoundProfile::LogLog { theta: num(arg)? },
            _ => return Err(invalid(format!("unknown bound profile {s:?}"))),
        };
        profile.validate()?;
        Ok(profile)
    }
}

/// Which amplitude sequence a counting function sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// bounds `C_n` on the coefficients of `e^{-iλ_n t}`
    Unimodular,
    /// arithmetic weights `A_n`
    Arithmetic,
}

/// Frequencies, amplitude bounds and their counting functions.
#[derive(Debug, Clone)]
pub struct CoeffSystem {
    freq: FrequencySystem,
    profile: Option<BoundProfile>,
    amplitudes: Vec<f64>,
    weights: Vec<f64>,
    unimodular_prefix: Vec<f64>,
    weight_prefix: Vec<f64>,
}

impl CoeffSystem {
    /// Build a preset family with `n_terms` frequencies.
    ///
    /// Weight rules: classical `C_n = Φ(n+1)/(n+1)`, primes `Φ(p)/p`,
    /// divisor `d(n+1)Φ(n+1)/(n+1)`, shifted `Φ(n)/(n+α)`.
    pub fn build(kind: FrequencyKind, profile: &BoundProfile, n_terms: usize) -> Result<Self> {
        Self::build_with_limit(kind, profile, n_terms, arith::DEFAULT_SIEVE_LIMIT)
    }

    pub fn build_with_limit(
        kind: FrequencyKind,
        profile: &BoundProfile,
        n_terms: usize,
        sieve_limit: u64,
    ) -> Result<Self> {
        if n_terms == 0 {
            return Err(invalid("N must be at least 1"));
        }
        profile.validate()?;
        let mut lambdas = Vec::with_capacity(n_terms);
        let mut index = Vec::with_capacity(n_terms);
        let mut amplitudes = Vec::with_capacity(n_terms);
        let mut weights = Vec::with_capacity(n_terms);
        match kind {
            FrequencyKind::Classical => {
                for n in 1..=n_terms as u64 {
                    let m = n + 1;
                    let phi = profile.eval(m)?;
                    lambdas.push((m as f64).ln());
                    index.push(m);
                    weights.push(phi);
                    amplitudes.push(phi / m as f64);
                }
            }
            FrequencyKind::Primes => {
                for p in arith::first_primes(n_terms, sieve_limit)? {
                    let phi = profile.eval(p)?;
                    lambdas.push((p as f64).ln());
                    index.push(p);
                    weights.push(phi);
                    amplitudes.push(phi / p as f64);
                }
            }
            FrequencyKind::Divisor => {
                let top = n_terms as u64 + 1;
                if top > sieve_limit {
                    return Err(invalid(format!("N = {n_terms} exceeds the sieve limit")));
                }
                let d = arith::divisor_counts(top);
                for n in 1..=n_terms as u64 {
                    let m = n + 1;
                    let w = d[m as usize] as f64 * profile.eval(m)?;
                    lambdas.push((m as f64).ln());
                    index.push(m);
                    weights.push(w);
                    amplitudes.push(w / m as f64);
                }
            }
            FrequencyKind::Shifted { alpha } => {
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(invalid(format!("shift α = {alpha} must be positive")));
                }
                let log_alpha = alpha.ln();
                for n in 1..=n_terms as u64 {
                    let phi = profile.eval(n)?;
                    lambdas.push((n as f64 + alpha).ln() - log_alpha);
                    index.push(n);
                    weights.push(phi);
                    amplitudes.push(phi / (n as f64 + alpha));
                }
            }
            FrequencyKind::Custom => {
                return Err(invalid("custom systems are built with CoeffSystem::custom"))
            }
        }
        if let Some(w) = index
            .windows(2)
            .find(|w| profile.eval(w[1]).unwrap_or(0.0) < profile.eval(w[0]).unwrap_or(0.0))
        {
            return Err(Error::NotMonotone { n: w[1] });
        }
        let freq = FrequencySystem::new(kind, lambdas, index)?;
        Ok(Self::assemble(
            freq,
            Some(profile.clone()),
            amplitudes,
            weights,
        ))
    }

    /// A system with explicit frequencies and unimodular bounds (`A_n = C_n`).
    pub fn custom(lambdas: Vec<f64>, amplitudes: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(invalid("N must be at least 1"));
        }
        if lambdas.len() != amplitudes.len() {
            return Err(invalid("frequency and amplitude lists differ in length"));
        }
        for (i, &c) in amplitudes.iter().enumerate() {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::NonPositiveBound {
                    n: i as u64 + 1,
                    value: c,
                });
            }
        }
        let index = (1..=lambdas.len() as u64).collect();
        let freq = FrequencySystem::new(FrequencyKind::Custom, lambdas, index)?;
        Ok(Self::assemble(freq, None, amplitudes.clone(), amplitudes))
    }

    /// Custom system from a frequency table and a bound table keyed by the same indices.
    pub fn from_tables(freq_rows: &[(u64, f64)], profile: &BoundProfile) -> Result<Self> {
        profile.validate()?;
        let lambdas: Vec<f64> = freq_rows.iter().map(|r| r.1).collect();
        let amps = freq_rows
            .iter()
            .map(|r| profile.eval(r.0))
            .collect::<Result<Vec<_>>>()?;
        let mut sys = Self::custom(lambdas, amps)?;
        sys.freq.arith_index = freq_rows.iter().map(|r| r.0).collect();
        sys.profile = Some(profile.clone());
        Ok(sys)
    }

    fn assemble(
        freq: FrequencySystem,
        profile: Option<BoundProfile>,
        amplitudes: Vec<f64>,
        weights: Vec<f64>,
    ) -> Self {
        let prefix = |v: &[f64]| {
            let mut acc = 1.0;
            let mut out = Vec::with_capacity(v.len() + 1);
            out.push(acc);
            for x in v {
                acc += x;
                out.push(acc);
            }
            out
        };
        let unimodular_prefix = prefix(&amplitudes);
        let weight_prefix = prefix(&weights);
        Self {
            freq,
            profile,
            amplitudes,
            weights,
            unimodular_prefix,
            weight_prefix,
        }
    }

    pub fn freq(&self) -> &FrequencySystem {
        &self.freq
    }

    pub fn kind(&self) -> FrequencyKind {
        self.freq.kind
    }

    pub fn profile(&self) -> Option<&BoundProfile> {
        self.profile.as_ref()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.freq.lambdas
    }

    /// Unimodular bounds `C_n`.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// Arithmetic weights `A_n`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self, norm: Normalization) -> &[f64] {
        match norm {
            Normalization::Unimodular => &self.amplitudes,
            Normalization::Arithmetic => &self.weights,
        }
    }

    pub fn len(&self) -> usize {
        self.freq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq.is_empty()
    }

    /// The first `n` terms.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(invalid(format!(
                "cannot truncate {} terms to {n}",
                self.len()
            )));
        }
        let freq = FrequencySystem {
            kind: self.freq.kind,
            lambdas: self.freq.lambdas[..n].to_vec(),
            arith_index: self.freq.arith_index[..n].to_vec(),
        };
        Ok(Self::assemble(
            freq,
            self.profile.clone(),
            self.amplitudes[..n].to_vec(),
            self.weights[..n].to_vec(),
        ))
    }

    /// `Λ(x) = A_0 + Σ_{λ_n ≤ x} A_n` with `A_0 = 1`, over arithmetic weights.
    pub fn counting_function(&self, x: f64) -> Result<f64> {
        self.counting_function_with(x, Normalization::Arithmetic)
    }

    /// Counting function over the chosen normalization, restricted to the
    /// system's own terms.
    pub fn counting_function_with(&self, x: f64, norm: Normalization) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(invalid(format!("counting function needs x >= 0, got {x}")));
        }
        let k = self.freq.lambdas.partition_point(|&l| l <= x);
        Ok(self.prefix(norm)[k])
    }

    /// `Λ(λ_n)` for n = 1..=N.
    pub fn counting_at_frequencies(&self, norm: Normalization) -> &[f64] {
        &self.prefix(norm)[1..]
    }

    fn prefix(&self, norm: Normalization) -> &[f64] {
        match norm {
            Normalization::Unimodular => &self.unimodular_prefix,
            Normalization::Arithmetic => &self.weight_prefix,
        }
    }

    /// Whether the weight rule can continue `Λ` beyond `λ_N`.
    pub fn has_extrapolation(&self) -> bool {
        self.kind() != FrequencyKind::Custom && self.profile.as_ref().is_some_and(|p| !p.is_table())
    }

    pub fn max_lambda(&self) -> f64 {
        *self.freq.lambdas.last().expect("systems are nonempty")
    }

    /// Continuous index `m(x)` with `λ(m) = x`.
    fn index_at(&self, x: f64) -> f64 {
        match self.kind() {
            FrequencyKind::Shifted { alpha } => alpha * x.exp_m1(),
            _ => x.exp(),
        }
    }

    /// Amplitude mass per unit of the continuous index `m`.
    fn density(&self, m: f64, norm: Normalization) -> f64 {
        let phi = self
            .profile
            .as_ref()
            .and_then(|p| p.eval_real(m))
            .unwrap_or(f64::NAN);
        let base = match self.kind() {
            FrequencyKind::Classical => phi,
            FrequencyKind::Primes => phi / m.ln(),
            FrequencyKind::Divisor => phi * (m.ln() + 2.0 * EULER_GAMMA),
            FrequencyKind::Shifted { .. } => phi,
            FrequencyKind::Custom => f64::NAN,
        };
        match (norm, self.kind()) {
            (Normalization::Arithmetic, _) => base,
            (Normalization::Unimodular, FrequencyKind::Shifted { alpha }) => base / (m + alpha),
            (Normalization::Unimodular, _) => base / m,
        }
    }

    /// Counting function that continues past `λ_N` by integrating the weight
    /// rule's density; exact on the system's own range.
    pub fn extended_counting(&self, x: f64, norm: Normalization) -> Result<f64> {
        Ok(self.extended_counting_sorted(&[x], norm)?[0])
    }

    /// [`Self::extended_counting`] for a nondecreasing list of points,
    /// integrating the density incrementally.
    pub fn extended_counting_sorted(&self, xs: &[f64], norm: Normalization) -> Result<Vec<f64>> {
        if xs.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("points must be sorted"));
        }
        let top = self.max_lambda();
        let base = self.prefix(norm)[self.len()];
        let start = *self.freq.arith_index.last().unwrap() as f64 + 0.5;
        let mut out = Vec::with_capacity(xs.len());
        let mut acc = base;
        let mut s_prev = start.ln();
        for &x in xs {
            if x <= top {
                out.push(self.counting_function_with(x, norm)?);
                continue;
            }
            if !self.has_extrapolation() {
                return Err(Error::OutOfRange { x, limit: top });
            }
            let s_next = (self.index_at(x) + 0.5).ln();
            if s_next > s_prev {
                acc += self.integrate_log_index(s_prev, s_next, norm);
                s_prev = s_next;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// `∫ density(e^s) e^s ds` over `[s0, s1]` by unit panels in `s`.
    fn integrate_log_index(&self, s0: f64, s1: f64, norm: Normalization) -> f64 {
        let panels = ((s1 - s0) / 0.5).ceil().max(1.0) as usize;
        quad::composite(quad::gl16(), &[s0, s1], panels, &mut |s: f64| {
            let m = s.exp();
            self.density(m, norm) * m
        })
    }
}

pub(crate) const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// A decreasing function `ε(x)` with `∫_1^∞ ε(x)/x dx < ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegularityProfile {
    /// `ε(x) = (log(x+1))^{-1-δ}`
    LogPower { delta: f64 },
    /// `ε(x) = x^{-δ}`
    Power { delta: f64 },
}

impl RegularityProfile {
    pub fn new_log_power(delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(invalid("δ must be positive"));
        }
        Ok(RegularityProfile::LogPower { delta })
    }

    pub fn new_power(delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(invalid("δ must be positive"));
        }
        Ok(RegularityProfile::Power { delta })
    }

    pub fn eps(&self, x: f64) -> f64 {
        match *self {
            RegularityProfile::LogPower { delta } => x.ln_1p().powf(-1.0 - delta),
            RegularityProfile::Power { delta } => x.powf(-delta),
        }
    }

    /// `∫_1^X ε(x)/x dx` at each grid point (computed as `∫_0^{log X} ε(e^u) du`).
    pub fn partial_integrals(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter()
            .map(|&x| {
                let top = x.max(1.0).ln();
                if top == 0.0 {
                    return 0.0;
                }
                let panels = (top.ceil() as usize).max(1) * 2;
                quad::composite(quad::gl16(), &[0.0, top], panels, &mut |u: f64| {
                    self.eps(u.exp())
                })
            })
            .collect()
    }
}

/// Sampled evidence for the growth condition `Λ(X) ≪ Λ(X+Y) − Λ(X)`.
#[derive(Debug, Clone)]
pub struct RegularityReport {
    /// `(X, Y, (Λ(X+Y) − Λ(X)) / (Y Λ(X)))` for every sampled pair.
    pub samples: Vec<(f64, f64, f64)>,
    pub min_ratio: f64,
    pub argmin: (f64, f64),
    pub floor: f64,
    /// Pairs whose ratio fell below `floor`.
    pub flagged: Vec<(f64, f64, f64)>,
}

impl RegularityReport {
    pub fn holds(&self) -> bool {
        self.flagged.is_empty() && self.min_ratio > 0.0
    }
}

/// Sample the regularity condition at `y_samples` log-spaced `Y ∈ [ε(X), 1]`
/// for each `X` of the grid.
pub fn check_regularity(
    sys: &CoeffSystem,
    reg: &RegularityProfile,
    x_grid: &[f64],
    y_samples: usize,
    floor: f64,
    norm: Normalization,
) -> Result<RegularityReport> {
    if x_grid.is_empty() {
        return Err(invalid("regularity check needs a nonempty grid"));
    }
    let y_samples = y_samples.max(1);
    let mut pairs = Vec::with_capacity(x_grid.len() * y_samples);
    for &x in x_grid {
        let lo = reg.eps(x).min(1.0);
        for j in 0..y_samples {
            let y = if y_samples == 1 {
                lo
            } else {
                lo * (1.0 / lo).powf(j as f64 / (y_samples - 1) as f64)
            };
            pairs.push((x, y));
        }
    }
    check_regularity_pairs(sys, &pairs, floor, norm)
}

/// Regularity ratios at explicit `(X, Y)` pairs.
pub fn check_regularity_pairs(
    sys: &CoeffSystem,
    pairs: &[(f64, f64)],
    floor: f64,
    norm: Normalization,
) -> Result<RegularityReport> {
    if pairs.is_empty() {
        return Err(invalid("regularity check needs a nonempty grid"));
    }
    let mut samples = Vec::with_capacity(pairs.len());
    let mut flagged = Vec::new();
    let mut min_ratio = f64::INFINITY;
    let mut argmin = pairs[0];
    for &(x, y) in pairs {
        if !(y > 0.0) || !(x >= 0.0) {
            return Err(invalid(format!("bad sample pair ({x}, {y})")));
        }
        let lx = sys.extended_counting(x, norm)?;
        let lxy = sys.extended_counting(x + y, norm)?;
        let ratio = (lxy - lx) / (y * lx);
        if ratio < min_ratio {
            min_ratio = ratio;
            argmin = (x, y);
        }
        if ratio < floor {
            flagged.push((x, y, ratio));
        }
        samples.push((x, y, ratio));
    }
    Ok(RegularityReport {
        samples,
        min_ratio,
        argmin,
        floor,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn classical_unit_example() {
        let sys = CoeffSystem::build(FrequencyKind::Classical, &BoundProfile::Unit, 3).unwrap();
        assert_eq!(sys.lambdas(), &[2f64.ln(), 3f64.ln(), 4f64.ln()]);
        assert_eq!(sys.amplitudes(), &[0.5, 1.0 / 3.0, 0.25]);
        assert_eq!(sys.freq().arith_index(), &[2, 3, 4]);
    }

    #[test]
    fn shifted_alpha_one_coincides_with_classical() {
        let sh = CoeffSystem::build(
            FrequencyKind::Shifted { alpha: 1.0 },
            &BoundProfile::Unit,
            2,
        )
        .unwrap();
        assert_eq!(sh.lambdas(), &[2f64.ln(), 3f64.ln()]);
        assert_eq!(sh.amplitudes(), &[0.5, 1.0 / 3.0]);
        let cl = CoeffSystem::build(FrequencyKind::Classical, &BoundProfile::Unit, 2).unwrap();
        assert_eq!(sh.lambdas(), cl.lambdas());
    }

    #[test]
    fn primes_example() {
        let phi = BoundProfile::Power { delta: 0.5 };
        let sys = CoeffSystem::build(FrequencyKind::Primes, &phi, 3).unwrap();
        assert_eq!(sys.lambdas(), &[2f64.ln(), 3f64.ln(), 5f64.ln()]);
        for (c, p) in sys.amplitudes().iter().zip([2.0f64, 3.0, 5.0]) {
            assert!(close(*c, p.powf(-0.5), 1e-15));
        }
    }

    #[test]
    fn divisor_weights() {
        let sys = CoeffSystem::build(FrequencyKind::Divisor, &BoundProfile::Unit, 5).unwrap();
        // m = 2..6, d(m) = 2, 2, 3, 2, 4
        assert_eq!(sys.weights(), &[2.0, 2.0, 3.0, 2.0, 4.0]);
        assert!(close(sys.amplitudes()[2], 3.0 / 4.0, 1e-15));
    }

    #[test]
    fn build_errors() {
        let unit = BoundProfile::Unit;
        assert!(CoeffSystem::build(FrequencyKind::Classical, &unit, 0).is_err());
        assert!(CoeffSystem::build(FrequencyKind::Shifted { alpha: 0.0 }, &unit, 3).is_err());
        assert!(CoeffSystem::build(FrequencyKind::Shifted { alpha: -1.0 }, &unit, 3).is_err());
        let bad = BoundProfile::Table(vec![(2, 1.0), (3, 0.0)]);
        assert!(matches!(
            CoeffSystem::build(FrequencyKind::Classical, &bad, 2),
            Err(Error::NonPositiveBound { .. })
        ));
        let dec = BoundProfile::Table(vec![(2, 2.0), (3, 1.0)]);
        assert!(matches!(
            CoeffSystem::build(FrequencyKind::Classical, &dec, 2),
            Err(Error::NotMonotone { .. })
        ));
        let short = BoundProfile::Table(vec![(2, 1.0)]);
        assert!(CoeffSystem::build(FrequencyKind::Classical, &short, 2).is_err());
    }

    #[test]
    fn counting_function_examples() {
        let sys = CoeffSystem::build(FrequencyKind::Classical, &BoundProfile::Unit, 50).unwrap();
        assert_eq!(sys.counting_function(0.0).unwrap(), 1.0);
        assert_eq!(sys.counting_function(0.5).unwrap(), 1.0);
        // direct enumeration: m = 2..=10 have log m <= log 10
        let direct = 1
            + (2..=50u64)
                .filter(|m| (*m as f64).ln() <= 10f64.ln())
                .count();
        assert_eq!(sys.counting_function(10f64.ln()).unwrap(), direct as f64);
        assert_eq!(direct, 10);
        assert!(sys.counting_function(-1.0).is_err());
    }

    #[test]
    fn weight_rule_round_trip() {
        let phi = BoundProfile::Power { delta: 0.37 };
        let sys = CoeffSystem::build(FrequencyKind::Classical, &phi, 2000).unwrap();
        for (i, c) in sys.amplitudes().iter().enumerate() {
            let m = i as u64 + 2;
            let want = phi.eval(m).unwrap();
            assert!((c * m as f64 - want).abs() <= f64::EPSILON * want);
        }
    }

    #[test]
    fn primes_are_classical_subsequence() {
        let phi = BoundProfile::Unit;
        let pr = CoeffSystem::build(FrequencyKind::Primes, &phi, 200).unwrap();
        let top = *pr.freq().arith_index().last().unwrap() as usize;
        let cl = CoeffSystem::build(FrequencyKind::Classical, &phi, top).unwrap();
        for (l, &p) in pr.lambdas().iter().zip(pr.freq().arith_index()) {
            assert_eq!(*l, cl.lambdas()[p as usize - 2]);
        }
    }

    #[test]
    fn extended_counting_tracks_exact_sum() {
        // build a long system, truncate it, and compare extrapolation with the exact count
        for phi in [BoundProfile::Unit, BoundProfile::Power { delta: 0.5 }] {
            let long = CoeffSystem::build(FrequencyKind::Classical, &phi, 20_000).unwrap();
            let short = long.truncated(2_000).unwrap();
            for norm in [Normalization::Unimodular, Normalization::Arithmetic] {
                let x = 9.5;
                let exact = long.counting_function_with(x, norm).unwrap();
                let ext = short.extended_counting(x, norm).unwrap();
                assert!(close(ext, exact, 2e-3), "{phi} {norm:?}: {ext} vs {exact}");
            }
        }
    }

    #[test]
    fn custom_system_does_not_extrapolate() {
        let sys = CoeffSystem::custom(vec![1.0, 2.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(
            sys.extended_counting(1.5, Normalization::Unimodular)
                .unwrap(),
            2.0
        );
        assert!(matches!(
            sys.extended_counting(3.0, Normalization::Unimodular),
            Err(Error::OutOfRange { .. })
        ));
        assert!(CoeffSystem::custom(vec![2.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(CoeffSystem::custom(vec![1.0], vec![0.0]).is_err());
    }

    #[test]
    fn regularity_classical_unit_is_bounded_below() {
        let sys = CoeffSystem::build(FrequencyKind::Classical, &BoundProfile::Unit, 1000).unwrap();
        let pairs: Vec<(f64, f64)> = (0..=30).map(|k| (5.0 + 0.5 * k as f64, 0.5)).collect();
        let rep = check_regularity_pairs(&sys, &pairs, 0.1, Normalization::Arithmetic).unwrap();
        // Λ(X) ≈ e^X so the ratio tends to (e^{1/2} − 1)/(1/2) ≈ 1.297
        assert!(rep.min_ratio > 1.0, "{}", rep.min_ratio);
        assert!(rep.holds());
    }

    #[test]
    fn regularity_lacunary_fails() {
        let lambdas: Vec<f64> = (1..=8).map(|n| 2f64.powi(n)).collect();
        let sys = CoeffSystem::custom(lambdas, vec![1.0; 8]).unwrap();
        let reg = RegularityProfile::new_log_power(0.5).unwrap();
        let grid: Vec<f64> = (0..=30).map(|k| 5.0 + 0.5 * k as f64).collect();
        let rep = check_regularity(&sys, &reg, &grid, 4, 1e-3, Normalization::Arithmetic).unwrap();
        assert_eq!(rep.min_ratio, 0.0);
        let zero = rep.samples.iter().filter(|s| s.2 == 0.0).count();
        assert!(zero * 10 > rep.samples.len() * 8);
        assert!(!rep.holds());
        assert!(check_regularity(&sys, &reg, &[], 4, 0.0, Normalization::Arithmetic).is_err());
    }

    #[test]
    fn regularity_doubling_ratio_is_one() {
        // Λ(X) = 2 (A_0 + one term at 0.5), Λ(X + 1) = 4
        let sys = CoeffSystem::custom(vec![0.5, 1.2, 2.0], vec![1.0, 2.0, 5.0]).unwrap();
        let rep =
            check_regularity_pairs(&sys, &[(0.6, 1.0)], 0.0, Normalization::Arithmetic).unwrap();
        assert_eq!(rep.samples[0].2, 1.0);
    }

    #[test]
    fn regularity_profile_integrals_stabilize() {
        let reg = RegularityProfile::new_power(0.5).unwrap();
        let vals = reg.partial_integrals(&[10.0, 1e3, 1e6, 1e12]);
        // closed form (1 − X^{-δ})/δ
        for (v, x) in vals.iter().zip([10.0f64, 1e3, 1e6, 1e12]) {
            assert!(close(*v, (1.0 - x.powf(-0.5)) / 0.5, 1e-10));
        }
        let lp = RegularityProfile::new_log_power(1.0).unwrap();
        let v = lp.partial_integrals(&[1e2, 1e4, 1e8, 1e16, 1e32]);
        let incs: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(incs.windows(2).all(|w| w[1] < w[0]));
        assert!(RegularityProfile::new_power(0.0).is_err());
    }

    #[test]
    fn profile_parsing() {
        assert_eq!("unit".parse::<BoundProfile>().unwrap(), BoundProfile::Unit);
        assert_eq!(
            "power:0.5".parse::<BoundProfile>().unwrap(),
            BoundProfile::Power { delta: 0.5 }
        );
        assert!("power".parse::<BoundProfile>().is_err());
        assert!("logpower:-1".parse::<BoundProfile>().is_err());
        assert_eq!(
            "shifted:0.5".parse::<FrequencyKind>().unwrap(),
            FrequencyKind::Shifted { alpha: 0.5 }
        );
    }

    #[test]
    fn loglog_profile_is_nondecreasing() {
        let p = BoundProfile::LogLog { theta: 2.0 };
        let mut prev = 0.0;
        for n in 2..200_000u64 {
            let v = p.eval(n).unwrap();
            assert!(v >= prev, "n = {n}");
            prev = v;
        }
    }
}
