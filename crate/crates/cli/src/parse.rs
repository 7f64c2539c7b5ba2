//! Parsers for schedules, targets, decay targets and σ sources.

use anyhow::{bail, Result};

use ramabound::{
    CoeffSystem, Complex64, DecayTarget, FrequencyKind, Normalization, OmegaCurve, SigmaSource,
    Target,
};

use crate::UsageError;

fn usage<T>(msg: String) -> Result<T> {
    Err(UsageError(msg).into())
}

fn number(s: &str, what: &str) -> Result<f64> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => usage(format!("bad {what} {s:?}")),
    }
}

fn count(s: &str, what: &str) -> Result<usize> {
    match s.trim().parse::<usize>() {
        Ok(x) => Ok(x),
        Err(_) => usage(format!("bad {what} {s:?}")),
    }
}

/// `start:stop:xfactor` (geometric), `start:stop:+step` (arithmetic), a
/// comma-separated list, or a single N. The result is strictly increasing
/// and always ends at `stop` for the ranged forms.
pub fn schedule(s: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = s.split(':').collect();
    let out = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop) = (
                count(start, "schedule start")?,
                count(stop, "schedule stop")?,
            );
            if start == 0 || stop < start {
                return usage(format!("schedule {s:?} needs 1 ≤ start ≤ stop"));
            }
            let mut v = vec![start];
            if let Some(f) = step.strip_prefix('x') {
                let f = count(f, "schedule factor")?;
                if f < 2 {
                    return usage(format!("schedule factor in {s:?} must be at least 2"));
                }
                while let Some(next) = v.last().unwrap().checked_mul(f).filter(|&n| n <= stop) {
                    v.push(next);
                }
            } else if let Some(d) = step.strip_prefix('+') {
                let d = count(d, "schedule step")?;
                if d == 0 {
                    return usage(format!("schedule step in {s:?} must be positive"));
                }
                while v.last().unwrap() + d <= stop {
                    v.push(v.last().unwrap() + d);
                }
            } else {
                return usage(format!("schedule step {step:?} must be xFACTOR or +STEP"));
            }
            if *v.last().unwrap() != stop {
                v.push(stop);
            }
            v
        }
        [single] => single
            .split(',')
            .map(|x| count(x, "N"))
            .collect::<Result<Vec<_>>>()?,
        _ => return usage(format!("cannot parse schedule {s:?}")),
    };
    if out.is_empty() || out[0] == 0 || out.windows(2).any(|w| w[1] <= w[0]) {
        return usage(format!(
            "schedule {s:?} must be strictly increasing and positive"
        ));
    }
    Ok(out)
}

/// `one`, `const:re[:im]`, `exp:μ[:amplitude]`, or `hurwitz` (the constant
/// `1/α` for a `shifted:α` system).
pub fn target(s: &str, kind: FrequencyKind) -> Result<Target> {
    let parts: Vec<&str> = s.split(':').collect();
    Ok(match parts.as_slice() {
        ["one"] => Target::One,
        ["const", re] => Target::Constant(Complex64::new(number(re, "constant")?, 0.0)),
        ["const", re, im] => Target::Constant(Complex64::new(
            number(re, "constant")?,
            number(im, "constant")?,
        )),
        ["exp", mu] => Target::Exponential {
            mu: number(mu, "frequency")?,
            amplitude: Complex64::new(1.0, 0.0),
        },
        ["exp", mu, amp] => Target::Exponential {
            mu: number(mu, "frequency")?,
            amplitude: Complex64::new(number(amp, "amplitude")?, 0.0),
        },
        ["hurwitz"] => match kind {
            FrequencyKind::Shifted { alpha } => Target::hurwitz(alpha)?,
            _ => bail!(UsageError("target hurwitz needs --freq shifted:α".into())),
        },
        _ => return usage(format!("unknown target {s:?}")),
    })
}

/// `unit`, `poly:p`, `exp:rate` or `counting2`.
pub fn decay(
    s: &str,
    system: impl FnOnce() -> Result<CoeffSystem>,
    norm: Normalization,
) -> Result<DecayTarget> {
    let target = match s.split_once(':') {
        None if s == "unit" => DecayTarget::Unit,
        None if s == "counting2" => DecayTarget::CountingSquared {
            system: system()?,
            norm,
        },
        Some(("poly", p)) => DecayTarget::Polynomial {
            p: number(p, "degree")?,
        },
        Some(("exp", r)) => DecayTarget::Exponential {
            rate: number(r, "rate")?,
        },
        _ => return usage(format!("unknown decay target {s:?}")),
    };
    target.validate()?;
    Ok(target)
}

/// A number is a constant σ; anything else names an ω-curve.
pub fn sigma(s: &str) -> Result<SigmaSource> {
    if let Ok(x) = s.trim().parse::<f64>() {
        if !(x > 0.0) || !x.is_finite() {
            return usage(format!("σ = {s} must be positive"));
        }
        return Ok(SigmaSource::Constant(x));
    }
    Ok(SigmaSource::Curve(s.parse::<OmegaCurve>()?))
}
