//! Compactly supported windows with prescribed transform decay, and the
//! coefficient bounds `B_n = A_n / Λ(λ_n)²` they feed.
//!
//! A window is the density of a sum of `K` independent uniform variables on
//! `[0, 2a]`, i.e. the `K`-fold convolution of normalized boxes. It is
//! supported on `[0, L]` with `L = 2aK`, integrates to one, and has transform
//!
//! `f̂(ξ) = ∫ f(t) e^{-iξt} dt = e^{-iξL/2} (sin(aξ)/(aξ))^K`.

use std::fmt;

use num_complex::Complex64;

use crate::criterion::{numeric_verdict, Verdict};
use crate::error::{invalid, Error, Result};
use crate::frequency::{CoeffSystem, Normalization};
use crate::quad::{gl16, refine};
use crate::table::fmt17;

/// Initial number of mesh intervals per window.
pub const DEFAULT_MESH: usize = 1 << 14;

/// Largest number of boxes tried when selecting `K`.
pub const MAX_BOXES: usize = 64;

const MAX_MESH: usize = 1 << 20;
const MASS_TOL: f64 = 1e-10;

/// Window built from `K` boxes of equal width `2a`.
#[derive(Debug, Clone)]
pub struct Window {
    length: f64,
    boxes: usize,
    scale: f64,
    samples: Vec<f64>,
}

impl Window {
    /// Window of support length `length` made of `boxes` equal boxes.
    pub fn equal(length: f64, boxes: usize) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(invalid(format!("window length {length} must be positive")));
        }
        if boxes == 0 {
            return Err(invalid("a window needs at least one box"));
        }
        let mut w = Window {
            length,
            boxes,
            scale: 1.0,
            samples: Vec::new(),
        };
        // mesh intervals are a multiple of K so the knots fall on mesh points
        let mut mesh = DEFAULT_MESH.div_ceil(boxes) * boxes;
        loop {
            w.samples = w.sample(mesh);
            if w.mesh_checks_pass() || mesh >= MAX_MESH {
                return Ok(w);
            }
            mesh *= 2;
        }
    }

    /// Multiply the window (and its transform) by `c0`.
    pub fn with_scale(mut self, c0: f64) -> Result<Self> {
        if !(c0 > 0.0) || !c0.is_finite() {
            return Err(invalid(format!("window scale {c0} must be positive")));
        }
        self.scale = c0;
        Ok(self)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn boxes(&self) -> usize {
        self.boxes
    }

    /// Half-width `a` of every box.
    pub fn half_width(&self) -> f64 {
        self.length / (2.0 * self.boxes as f64)
    }

    /// Full widths `2a_k`.
    pub fn widths(&self) -> Vec<f64> {
        vec![2.0 * self.half_width(); self.boxes]
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Samples of `f` on the uniform mesh `t_j = j L / M`, `j = 0..=M`.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn mesh_step(&self) -> f64 {
        self.length / (self.samples.len() - 1) as f64
    }

    /// `f(t)`; zero outside `[0, L]`.
    pub fn density(&self, t: f64) -> f64 {
        let w = 2.0 * self.half_width();
        self.scale * cardinal_bspline(self.boxes, t / w) / w
    }

    /// `f̂(ξ) = ∫ f(t) e^{-iξt} dt`.
    pub fn transform(&self, xi: f64) -> Complex64 {
        Complex64::from_polar(self.transform_modulus(xi), -0.5 * xi * self.length)
            * sinc(self.half_width() * xi)
                .signum()
                .powi(self.boxes as i32)
    }

    /// `|f̂(ξ)|`, the product of the box sinc moduli.
    pub fn transform_modulus(&self, xi: f64) -> f64 {
        self.scale * sinc(self.half_width() * xi).abs().powi(self.boxes as i32)
    }

    /// `Π_k min(1, 1/(a_k|ξ|))`.
    pub fn sinc_bound(&self, xi: f64) -> f64 {
        let x = (self.half_width() * xi).abs();
        self.scale
            * if x <= 1.0 {
                1.0
            } else {
                x.powi(-(self.boxes as i32))
            }
    }

    /// Trapezoid mass of the mesh samples.
    pub fn mass(&self) -> f64 {
        let s = &self.samples;
        let inner: f64 = s.iter().sum::<f64>() - 0.5 * (s[0] + s[s.len() - 1]);
        inner * self.mesh_step()
    }

    /// Trapezoid transform of the mesh samples.
    pub fn discrete_transform(&self, xi: f64) -> Complex64 {
        let h = self.mesh_step();
        let last = self.samples.len() - 1;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &f) in self.samples.iter().enumerate() {
            let weight = if j == 0 || j == last { 0.5 } else { 1.0 };
            acc += Complex64::from_polar(weight * f, -xi * h * j as f64);
        }
        acc * h
    }

    /// Two-column table `(t, f(t))` with a header line listing the widths.
    pub fn to_table(&self) -> String {
        let widths: Vec<String> = self.widths().iter().map(|w| fmt17(*w)).collect();
        let mut out = format!(
            "# widths {} scale {}\n# t f(t)\n",
            widths.join(" "),
            fmt17(self.scale)
        );
        let h = self.mesh_step();
        for (j, f) in self.samples.iter().enumerate() {
            out.push_str(&format!("{} {}\n", fmt17(h * j as f64), fmt17(*f)));
        }
        out
    }

    fn sample(&self, mesh: usize) -> Vec<f64> {
        let h = self.length / mesh as f64;
        let mut s: Vec<f64> = (0..=mesh).map(|j| self.density(h * j as f64)).collect();
        // the exact support ends at L even if rounding of j·h lands inside
        s[mesh] = self.density(self.length);
        s
    }

    fn mesh_checks_pass(&self) -> bool {
        if (self.mass() - self.scale).abs() > MASS_TOL * self.scale {
            return false;
        }
        if self.boxes < 3 {
            return true;
        }
        let a = self.half_width();
        [0.5, 1.0, 2.0].iter().all(|&k| {
            let xi = k / a;
            (self.discrete_transform(xi) - self.transform(xi)).norm() <= MASS_TOL * self.scale
        })
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Cardinal B-spline of order `k` (support `[0, k]`) by the Cox–de Boor
/// recursion. The order-one spline is the indicator of the closed `[0, 1]`.
fn cardinal_bspline(k: usize, x: f64) -> f64 {
    if !(x >= 0.0) || x > k as f64 {
        return 0.0;
    }
    if k == 1 {
        return 1.0;
    }
    if x == k as f64 {
        return 0.0;
    }
    let j0 = x.floor() as usize;
    // v[i] = M_m(x − i)
    let mut v = vec![0.0; k + 1];
    v[j0] = 1.0;
    for m in 2..=k {
        let lo = j0.saturating_sub(m - 1);
        for i in lo..=j0 {
            let y = x - i as f64;
            v[i] = (y * v[i] + (m as f64 - y) * v[i + 1]) / (m - 1) as f64;
        }
    }
    v[0]
}

/// Growth profile `S` that `|f̂|` must stay below the reciprocal of.
#[derive(Debug, Clone)]
pub enum DecayTarget {
    /// `S ≡ 1`
    Unit,
    /// `S(x) = (1 + x)^p`
    Polynomial { p: f64 },
    /// `S(x) = e^{rate·x}`
    Exponential { rate: f64 },
    /// `S(x) = Λ(x)²` for the counting function of a system.
    CountingSquared {
        system: CoeffSystem,
        norm: Normalization,
    },
}

impl DecayTarget {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DecayTarget::Polynomial { p } if !(p >= 0.0) || !p.is_finite() => Err(invalid(
                format!("polynomial degree {p} must be nonnegative"),
            )),
            DecayTarget::Exponential { rate } if !(rate > 0.0) || !rate.is_finite() => {
                Err(invalid(format!("exponential rate {rate} must be positive")))
            }
            _ => Ok(()),
        }
    }

    /// `log S(x)` for `x ≥ 0`.
    pub fn log_eval(&self, x: f64) -> f64 {
        let x = x.abs();
        match self {
            DecayTarget::Unit => 0.0,
            DecayTarget::Polynomial { p } => p * x.ln_1p(),
            DecayTarget::Exponential { rate } => rate * x,
            DecayTarget::CountingSquared { system, norm } => {
                let k = system.lambdas().partition_point(|&l| l <= x);
                let lam = if k == 0 {
                    1.0
                } else {
                    1.0 + system.values(*norm)[..k].iter().sum::<f64>()
                };
                2.0 * lam.ln()
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.log_eval(x).exp()
    }

    /// Number of equal boxes expected to suffice: `⌈p⌉ + 2` for a polynomial
    /// of degree `p`. For `Λ²` the degree is twice the least-squares slope
    /// of `log Λ` against `log x` on `[1, λ_N]`.
    pub fn suggested_boxes(&self) -> usize {
        let p = match self {
            DecayTarget::Unit => 0.0,
            DecayTarget::Polynomial { p } => *p,
            DecayTarget::Exponential { .. } => return MAX_BOXES,
            DecayTarget::CountingSquared { system, .. } => {
                let top = system.max_lambda();
                if top <= 1.0 {
                    0.0
                } else {
                    let count = 64;
                    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
                    for i in 0..count {
                        let u = top.ln() * i as f64 / (count - 1) as f64;
                        let y = 0.5 * self.log_eval(u.exp());
                        sx += u;
                        sy += y;
                        sxx += u * u;
                        sxy += u * y;
                    }
                    let n = count as f64;
                    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
                    2.0 * slope.max(0.0)
                }
            }
        };
        (p.ceil() as usize + 2).min(MAX_BOXES)
    }

    /// Doubling-window test of `∫_0^X log S(x)/(1 + x²) dx`, which must be
    /// finite for any compactly supported window to reach the decay.
    pub fn log_integral_verdict(&self, x_max: f64) -> Result<(Verdict, Vec<(f64, f64)>)> {
        if !(x_max >= 4.0) {
            return Err(invalid("log-integral test needs X ≥ 4"));
        }
        let mut grid = vec![1.0];
        while grid.last().unwrap() * 2.0 <= x_max {
            grid.push(grid.last().unwrap() * 2.0);
        }
        let mut acc = 0.0;
        let mut lo = 0.0;
        let mut evidence = Vec::with_capacity(grid.len());
        let mut integrand = |x: f64| self.log_eval(x) / (1.0 + x * x);
        for &hi in &grid {
            let mut breaks = vec![lo];
            if let DecayTarget::CountingSquared { system, .. } = self {
                breaks.extend(
                    system
                        .lambdas()
                        .iter()
                        .copied()
                        .filter(|&l| l > lo && l < hi),
                );
            }
            breaks.push(hi);
            let part = refine(gl16(), &breaks, 1e-10, 1e-14, 12, &mut integrand)?;
            acc += part.value;
            evidence.push((hi, acc));
            lo = hi;
        }
        Ok((numeric_verdict(&evidence).0, evidence))
    }
}

impl fmt::Display for DecayTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecayTarget::Unit => write!(f, "unit"),
            DecayTarget::Polynomial { p } => write!(f, "poly:{p}"),
            DecayTarget::Exponential { rate } => write!(f, "exp:{rate}"),
            DecayTarget::CountingSquared { system, norm } => {
                write!(
                    f,
                    "counting2:{}:{:?}:N={}",
                    system.kind(),
                    norm,
                    system.len()
                )
            }
        }
    }
}

/// One grid point of a decay check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRecord {
    pub xi: f64,
    pub modulus: f64,
    pub inv_s: f64,
    /// `1/S(ξ) − |f̂(ξ)|`
    pub margin: f64,
}

impl DecayRecord {
    pub fn to_record(&self) -> String {
        format!(
            "{{\"xi\":{},\"modulus\":{},\"inv_s\":{},\"margin\":{}}}",
            fmt17(self.xi),
            fmt17(self.modulus),
            fmt17(self.inv_s),
            fmt17(self.margin)
        )
    }
}

/// Outcome of comparing `|f̂|` with `1/S` on a grid.
#[derive(Debug, Clone)]
pub struct DecayReport {
    /// Smallest grid point from which `|f̂|·S ≤ 1` holds at every later
    /// grid point; `None` if it fails at the last point.
    pub crossover: Option<f64>,
    /// Smallest margin `1/S − |f̂|` from the crossover on (or at the last
    /// grid point when there is no crossover).
    pub min_margin: f64,
    /// Largest `|f̂|·S` from the crossover on.
    pub worst_ratio: f64,
    /// Largest `|f̂|·S` on the whole grid.
    pub worst_ratio_overall: f64,
    /// Scale `c₀` that makes the bound hold on the whole grid.
    pub required_scale: f64,
    pub records: Vec<DecayRecord>,
}

impl DecayReport {
    /// `|f̂|·S ≤ 1` from the crossover to the end of the grid.
    pub fn pass(&self) -> bool {
        self.crossover.is_some()
    }

    /// `|f̂|·S ≤ 1` at every grid point.
    pub fn holds_everywhere(&self) -> bool {
        self.worst_ratio_overall <= 1.0
    }
}

/// Compare `|f̂(ξ)|` with `1/S(ξ)` on a nondecreasing grid.
pub fn verify_decay(window: &Window, target: &DecayTarget, grid: &[f64]) -> DecayReport {
    let records: Vec<DecayRecord> = grid
        .iter()
        .map(|&xi| {
            let modulus = window.transform_modulus(xi);
            let inv_s = (-target.log_eval(xi)).exp();
            DecayRecord {
                xi,
                modulus,
                inv_s,
                margin: inv_s - modulus,
            }
        })
        .collect();
    let ratio = |r: &DecayRecord| r.modulus * target.log_eval(r.xi).exp();
    let mut start = records.len();
    while start > 0 && ratio(&records[start - 1]) <= 1.0 {
        start -= 1;
    }
    let crossover = records.get(start).map(|r| r.xi);
    let tail = if start < records.len() {
        &records[start..]
    } else {
        &records[records.len().saturating_sub(1)..]
    };
    let min_margin = tail.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let worst_ratio = tail.iter().map(ratio).fold(0.0, f64::max);
    let worst_ratio_overall = records.iter().map(ratio).fold(0.0, f64::max);
    let required_scale = if worst_ratio_overall > 0.0 {
        window.scale() / worst_ratio_overall
    } else {
        f64::INFINITY
    };
    DecayReport {
        crossover,
        min_margin,
        worst_ratio,
        worst_ratio_overall,
        required_scale,
        records,
    }
}

/// Smallest `K` (from `k_hint` or the target's suggestion up to
/// [`MAX_BOXES`]) whose equal-box window of length `length` passes
/// [`verify_decay`] on `grid`.
pub fn build_window(
    length: f64,
    target: &DecayTarget,
    k_hint: Option<usize>,
    grid: &[f64],
) -> Result<(Window, DecayReport)> {
    target.validate()?;
    if grid.is_empty() {
        return Err(invalid("decay grid is empty"));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("decay grid must be nondecreasing"));
    }
    let k0 = k_hint.unwrap_or_else(|| target.suggested_boxes()).max(1);
    let mut best = (f64::NEG_INFINITY, k0);
    for k in k0..=MAX_BOXES.max(k0) {
        // the transform depends only on (L, K); samples are built once
        let probe = Window {
            length,
            boxes: k,
            scale: 1.0,
            samples: Vec::new(),
        };
        let report = verify_decay(&probe, target, grid);
        if report.pass() {
            let window = Window::equal(length, k)?;
            return Ok((window, report));
        }
        if report.min_margin > best.0 {
            best = (report.min_margin, k);
        }
    }
    Err(Error::DecayTooStrong {
        best_margin: best.0,
        best_k: best.1,
    })
}

/// `B_n = A_n / Λ(λ_n)²` and their total.
#[derive(Debug, Clone)]
pub struct BnBounds {
    pub values: Vec<f64>,
    pub total: f64,
}

/// Coefficient bounds of the smoothed polynomial. With `A_0 = 1` the sum
/// telescopes against `1/Λ(λ_{n−1}) − 1/Λ(λ_n)`, so the total is at most 1.
pub fn bn_bounds(sys: &CoeffSystem, norm: Normalization) -> BnBounds {
    let values: Vec<f64> = sys
        .values(norm)
        .iter()
        .zip(sys.counting_at_frequencies(norm))
        .map(|(a, lam)| a / (lam * lam))
        .collect();
    let total = values.iter().sum();
    BnBounds { values, total }
}

/// Both sides of the smoothing identity
/// `∫_0^L A(i(t+x)) f(x) dx = f̂(0) + Σ a_n f̂(λ_n) e^{-iλ_n t}` with
/// `A(it) = 1 + Σ a_n e^{-iλ_n t}`.
#[derive(Debug, Clone)]
pub struct ConvolutionReport {
    /// `(t, quadrature side, closed-form side)`.
    pub points: Vec<(f64, Complex64, Complex64)>,
    pub max_discrepancy: f64,
    /// Indices where `|f̂(λ_n)|·Λ(λ_n)² ≤ 1`, so `|b_n| ≤ B_n` must hold.
    pub checked: Vec<usize>,
    /// Checked indices with `|b_n| > B_n`.
    pub violations: Vec<usize>,
    /// Whether `|a_n| ≤ A_n` for every `n`.
    pub feasible: bool,
}

pub fn convolve_series(
    a: &[Complex64],
    sys: &CoeffSystem,
    window: &Window,
    t_grid: &[f64],
    h: f64,
) -> Result<ConvolutionReport> {
    if !(h > 0.0) {
        return Err(invalid("H must be positive"));
    }
    if window.length() > 0.5 * h * (1.0 + 1e-15) {
        return Err(Error::SupportViolation {
            support: window.length(),
            allowed: 0.5 * h,
        });
    }
    if a.len() != sys.len() {
        return Err(invalid(format!(
            "{} coefficients for a system of {} terms",
            a.len(),
            sys.len()
        )));
    }
    let lambdas = sys.lambdas();
    let bounds = sys.values(Normalization::Unimodular);
    let counting = sys.counting_at_frequencies(Normalization::Unimodular);
    let fhat: Vec<Complex64> = lambdas.iter().map(|&l| window.transform(l)).collect();
    let b0 = window.transform(0.0);
    let knot = 2.0 * window.half_width();
    let breaks: Vec<f64> = (0..=window.boxes()).map(|j| knot * j as f64).collect();
    let mut points = Vec::with_capacity(t_grid.len());
    let mut max_discrepancy: f64 = 0.0;
    for &t in t_grid {
        let series = |s: f64| {
            let mut acc = Complex64::new(1.0, 0.0);
            for (an, l) in a.iter().zip(lambdas) {
                acc += an * Complex64::from_polar(1.0, -l * s);
            }
            acc
        };
        let lhs = refine(gl16(), &breaks, 1e-13, 1e-15, 12, &mut |x| {
            series(t + x) * window.density(x)
        })?
        .value;
        let mut rhs = b0;
        for ((an, l), fh) in a.iter().zip(lambdas).zip(&fhat) {
            rhs += an * fh * Complex64::from_polar(1.0, -l * t);
        }
        max_discrepancy = max_discrepancy.max((lhs - rhs).norm());
        points.push((t, lhs, rhs));
    }
    let mut checked = Vec::new();
    let mut violations = Vec::new();
    for n in 0..a.len() {
        let lam2 = counting[n] * counting[n];
        if fhat[n].norm() * lam2 <= 1.0 {
            checked.push(n);
            let bn = bounds[n] / lam2;
            if (a[n] * fhat[n]).norm() > bn * (1.0 + 1e-12) {
                violations.push(n);
            }
        }
    }
    let feasible = a
        .iter()
        .zip(bounds)
        .all(|(x, c)| x.norm() <= c * (1.0 + 1e-12));
    Ok(ConvolutionReport {
        points,
        max_discrepancy,
        checked,
        violations,
        feasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::{BoundProfile, FrequencyKind};
    use std::f64::consts::PI;

    #[test]
    fn single_box_transform_is_sinc() {
        let w = Window::equal(2.0, 1).unwrap();
        for xi in [0.3, 1.0, 2.5, 7.0] {
            assert!((w.transform_modulus(xi) - (xi.sin() / xi).abs()).abs() < 1e-15);
        }
        assert!((w.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bspline_matches_closed_forms() {
        // hat function and quadratic spline
        for x in [0.25, 0.5, 1.0, 1.5, 1.75] {
            assert!((cardinal_bspline(2, x) - (1.0 - (x - 1.0).abs())).abs() < 1e-15);
        }
        assert!((cardinal_bspline(3, 1.5) - 0.75).abs() < 1e-15);
        assert!((cardinal_bspline(3, 0.5) - 0.125).abs() < 1e-15);
        assert_eq!(cardinal_bspline(4, -0.1), 0.0);
        assert_eq!(cardinal_bspline(4, 4.0), 0.0);
    }

    #[test]
    fn three_box_window_has_transform_zero_at_pi_over_a() {
        let w = Window::equal(1.0, 3).unwrap();
        let xi = PI / w.half_width();
        assert!(w.transform_modulus(xi) < 1e-15);
        assert!(w.discrete_transform(xi).norm() < 1e-10);
        assert!((w.transform(0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn transform_phase_matches_discrete_transform() {
        let w = Window::equal(0.5, 4).unwrap();
        for xi in [0.7, 3.0, 11.0, 40.0] {
            assert!((w.transform(xi) - w.discrete_transform(xi)).norm() < 1e-10);
        }
    }

    #[test]
    fn unit_target_always_passes() {
        let w = Window::equal(1.0, 2).unwrap();
        let grid: Vec<f64> = (0..200).map(|i| i as f64 * 0.5).collect();
        let r = verify_decay(&w, &DecayTarget::Unit, &grid);
        assert!(r.pass() && r.holds_everywhere());
        assert_eq!(r.crossover, Some(0.0));
    }

    #[test]
    fn polynomial_target_passes_beyond_crossover() {
        let grid: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.5).collect();
        let target = DecayTarget::Polynomial { p: 2.0 };
        assert_eq!(target.suggested_boxes(), 4);
        let (w, r) = build_window(1.0, &target, None, &grid).unwrap();
        assert_eq!(w.boxes(), 4);
        let xi0 = r.crossover.unwrap();
        assert!(xi0 > 0.0 && r.min_margin >= 0.0);
        for rec in r.records.iter().filter(|x| x.xi >= xi0) {
            assert!(rec.modulus * (1.0 + rec.xi).powi(2) <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn exponential_target_is_too_strong() {
        let grid: Vec<f64> = (0..=400).map(|i| i as f64).collect();
        let err =
            build_window(1.0, &DecayTarget::Exponential { rate: 1.0 }, None, &grid).unwrap_err();
        assert!(matches!(err, Error::DecayTooStrong { .. }));
        let (v, _) = DecayTarget::Exponential { rate: 1.0 }
            .log_integral_verdict(4096.0)
            .unwrap();
        assert_eq!(v, Verdict::Divergent);
        let (v, _) = DecayTarget::Polynomial { p: 3.0 }
            .log_integral_verdict(4096.0)
            .unwrap();
        assert_eq!(v, Verdict::Convergent);
    }

    #[test]
    fn rescale_makes_bound_hold_everywhere() {
        let sys = CoeffSystem::build(FrequencyKind::Classical, &BoundProfile::Unit, 200).unwrap();
        let target = DecayTarget::CountingSquared {
            system: sys,
            norm: Normalization::Unimodular,
        };
        let grid: Vec<f64> = (0..=4000).map(|i| i as f64 * 0.05).collect();
        let (w, r) = build_window(0.5, &target, None, &grid).unwrap();
        assert!(r.pass());
        let scaled = w.with_scale(r.required_scale.min(1.0)).unwrap();
        let again = verify_decay(&scaled, &target, &grid);
        assert!(again.worst_ratio_overall <= 1.0 + 1e-12);
    }

    #[test]
    fn bn_single_term() {
        let sys = CoeffSystem::custom(vec![1.0], vec![1.0]).unwrap();
        let b = bn_bounds(&sys, Normalization::Unimodular);
        assert!((b.values[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bn_classical_unit_matches_direct_sum() {
        // arithmetic weights are all one and Λ(λ_n) = n + 1
        let sys =
            CoeffSystem::build(FrequencyKind::Classical, &BoundProfile::Unit, 10_000).unwrap();
        let b = bn_bounds(&sys, Normalization::Arithmetic);
        let direct: f64 = (2..=10_001u64).map(|m| 1.0 / (m as f64 * m as f64)).sum();
        assert!((b.total - direct).abs() < 1e-12);
        assert!(b.total <= 2.0);
    }

    #[test]
    fn convolution_zero_coefficients() {
        let sys = CoeffSystem::custom(vec![2.0_f64.ln()], vec![1.0]).unwrap();
        let w = Window::equal(0.5, 3).unwrap();
        let r =
            convolve_series(&[Complex64::new(0.0, 0.0)], &sys, &w, &[0.0, 0.3, 1.0], 1.0).unwrap();
        for (_, l, rr) in &r.points {
            assert!((l - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            assert!((rr - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn convolution_single_term() {
        let sys = CoeffSystem::custom(vec![2.0_f64.ln()], vec![1.0]).unwrap();
        let w = Window::equal(0.5, 2).unwrap();
        let t: Vec<f64> = (0..20).map(|i| i as f64 * 0.37).collect();
        let r = convolve_series(&[Complex64::new(1.0, 0.0)], &sys, &w, &t, 1.0).unwrap();
        assert!(r.max_discrepancy < 1e-8);
        assert!(r.feasible);
    }

    #[test]
    fn support_violation_is_reported() {
        let sys = CoeffSystem::custom(vec![1.0], vec![1.0]).unwrap();
        let w = Window::equal(0.8, 2).unwrap();
        let err = convolve_series(&[Complex64::new(0.0, 0.0)], &sys, &w, &[0.0], 1.0).unwrap_err();
        assert!(matches!(err, Error::SupportViolation { .. }));
    }
}
