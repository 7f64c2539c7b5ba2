//! Bounded-coefficient least squares over exponentials:
//!
//! `m = min_{|a_n| ≤ C_n} ∫_0^H |g(t) + Σ a_n e^{-iλ_n t}|² dt`
//!
//! solved by cyclic coordinate descent. Each coordinate update is exact: the
//! objective restricted to `a_n` is `H|a_n|² + 2 Re(a_n conj(ρ'_n)) + const`
//! with `ρ'_n` the gradient excluding `a_n` itself, so the minimizer over the
//! disc is the projection of `−ρ'_n / H`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::frequency::CoeffSystem;
use crate::gram::{GramSystem, GramView, Target};
use crate::interior::{barrier_solve, pivoted_cholesky};
use crate::table::fmt17;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest factor rank for which the barrier start is attempted.
pub const MAX_FACTOR_RANK: usize = 256;

/// Feasible set for each coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConstraintMode {
    /// `|a_n| ≤ C_n` (convex; the result is a global minimum)
    #[default]
    Disc,
    /// `|a_n| = C_n` (nonconvex; the result is a stationary point)
    Circle,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Fixed-point residual tolerance; `None` means `1e-9 · max(1, max C_n)`.
    pub tol: Option<f64>,
    pub max_sweeps: usize,
    /// Full recomputation of the gradient every this many sweeps.
    pub refresh_every: usize,
    pub mode: ConstraintMode,
    /// Random starts in circle mode.
    pub starts: usize,
    pub seed: u64,
    /// Keep the per-sweep objective trace.
    pub keep_trace: bool,
    /// Disc mode: start coordinate descent from a barrier-method solution
    /// on a low-rank factor of the Gram matrix.
    pub interior_start: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: None,
            max_sweeps: 20_000,
            refresh_every: 50,
            mode: ConstraintMode::Disc,
            starts: 8,
            seed: 0x5eed,
            keep_trace: false,
            interior_start: true,
        }
    }
}

impl SolveOptions {
    pub fn tolerance(&self, bounds: &[f64]) -> f64 {
        self.tol
            .unwrap_or_else(|| 1e-9 * bounds.iter().fold(1.0f64, |a, &c| a.max(c)))
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub coefficients: Vec<Complex64>,
    /// `∫_0^H |g + Σ a_n e_n|² dt`
    pub objective: f64,
    pub kkt_residual: f64,
    /// Coordinate-descent sweeps performed.
    pub iterations: usize,
    /// Newton steps of the barrier start (0 when it was not used).
    pub newton_steps: usize,
    /// Indices with `|a_n| = C_n` to within `1e-12 C_n`.
    pub active_set: Vec<usize>,
    pub converged: bool,
    /// Circle mode: the result certifies stationarity only.
    pub stationary_only: bool,
    /// Objective after each sweep (when requested).
    pub trace: Vec<f64>,
    /// Largest increase of the objective across a sweep (rounding level when healthy).
    pub max_ascent: f64,
}

#[inline]
fn project(z: Complex64, radius: f64, mode: ConstraintMode, previous: Complex64) -> Complex64 {
    match mode {
        ConstraintMode::Disc => {
            let r = z.norm();
            if r <= radius {
                z
            } else {
                z * (radius / r)
            }
        }
        ConstraintMode::Circle => {
            let r = z.norm();
            if r > 0.0 {
                z * (radius / r)
            } else {
                let p = previous.norm();
                if p > 0.0 {
                    previous * (radius / p)
                } else {
                    Complex64::new(radius, 0.0)
                }
            }
        }
    }
}

fn check_inputs(view: &GramView<'_>, bounds: &[f64]) -> Result<()> {
    if bounds.len() != view.dim() {
        return Err(invalid(format!(
            "{} bounds for a system of dimension {}",
            bounds.len(),
            view.dim()
        )));
    }
    if let Some(i) = bounds.iter().position(|c| !(*c >= 0.0) || !c.is_finite()) {
        return Err(invalid(format!(
            "bound C_{} = {} is invalid",
            i + 1,
            bounds[i]
        )));
    }
    if !view.is_finite() {
        return Err(Error::NonFinite("Gram data".into()));
    }
    Ok(())
}

fn check_feasible(bounds: &[f64], a: &[Complex64], mode: ConstraintMode) -> Result<()> {
    for (i, (z, &c)) in a.iter().zip(bounds).enumerate() {
        let r = z.norm();
        let bad = match mode {
            ConstraintMode::Disc => r > c * (1.0 + 1e-12),
            ConstraintMode::Circle => (r - c).abs() > c * 1e-12,
        };
        if bad || !r.is_finite() {
            return Err(Error::Infeasible {
                index: i,
                modulus: r,
                bound: c,
            });
        }
    }
    Ok(())
}

fn residual_from_gradient(
    h: f64,
    bounds: &[f64],
    a: &[Complex64],
    rho: &[Complex64],
    mode: ConstraintMode,
) -> f64 {
    a.iter()
        .zip(rho)
        .zip(bounds)
        .map(|((an, rn), &c)| (an - project(an - rn / h, c, mode, *an)).norm())
        .fold(0.0, f64::max)
}

/// Optimality certificate `max_n |a_n − P_n(a_n − ρ_n/H)|` (disc mode).
pub fn kkt_residual(gs: &GramSystem, bounds: &[f64], a: &[Complex64]) -> Result<f64> {
    kkt_residual_mode(gs.view(), bounds, a, ConstraintMode::Disc)
}

pub fn kkt_residual_mode(
    view: GramView<'_>,
    bounds: &[f64],
    a: &[Complex64],
    mode: ConstraintMode,
) -> Result<f64> {
    check_inputs(&view, bounds)?;
    if a.len() != view.dim() {
        return Err(invalid("coefficient vector has the wrong length"));
    }
    check_feasible(bounds, a, mode)?;
    let rho = view.gradient(a);
    Ok(residual_from_gradient(view.h(), bounds, a, &rho, mode))
}

/// Minimize from `a = 0` (disc mode) or from seeded random phases (circle mode).
pub fn minimize(gs: &GramSystem, bounds: &[f64], opts: &SolveOptions) -> Result<SolveResult> {
    minimize_view(gs.view(), bounds, opts)
}

pub fn minimize_view(
    view: GramView<'_>,
    bounds: &[f64],
    opts: &SolveOptions,
) -> Result<SolveResult> {
    check_inputs(&view, bounds)?;
    match opts.mode {
        ConstraintMode::Disc => {
            let (start, steps) = match opts.interior_start {
                true => interior_point(&view, bounds, &vec![ZERO; view.dim()])
                    .unwrap_or((vec![ZERO; view.dim()], 0)),
                false => (vec![ZERO; view.dim()], 0),
            };
            let mut res = descend(view, bounds, start, opts, usize::from(steps > 0));
            res.newton_steps = steps;
            Ok(res)
        }
        ConstraintMode::Circle => {
            let starts = opts.starts.max(1);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let inits: Vec<Vec<Complex64>> = (0..starts)
                .map(|_| {
                    bounds
                        .iter()
                        .map(|&c| {
                            Complex64::from_polar(c, rng.gen_range(0.0..std::f64::consts::TAU))
                        })
                        .collect()
                })
                .collect();
            let results: Vec<SolveResult> = inits
                .into_par_iter()
                .map(|start| descend(view, bounds, start, opts, 0))
                .collect();
            let best = results
                .into_iter()
                .reduce(|best, r| {
                    if r.objective < best.objective {
                        r
                    } else {
                        best
                    }
                })
                .expect("at least one start");
            Ok(best)
        }
    }
}

/// Minimize from a given feasible start.
pub fn minimize_from(
    view: GramView<'_>,
    bounds: &[f64],
    start: Vec<Complex64>,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    check_inputs(&view, bounds)?;
    if start.len() != view.dim() {
        return Err(invalid("start vector has the wrong length"));
    }
    check_feasible(bounds, &start, ConstraintMode::Disc)?;
    let mut steps = 0;
    let start = match opts.mode {
        ConstraintMode::Disc if opts.interior_start => {
            match interior_point(&view, bounds, &start) {
                Some((candidate, k)) if view.objective(&candidate) < view.objective(&start) => {
                    steps = k;
                    candidate
                }
                _ => start,
            }
        }
        ConstraintMode::Disc => start,
        ConstraintMode::Circle => start
            .iter()
            .zip(bounds)
            .map(|(z, &c)| project(*z, c, ConstraintMode::Circle, *z))
            .collect(),
    };
    let mut res = descend(view, bounds, start, opts, usize::from(steps > 0));
    res.newton_steps = steps;
    Ok(res)
}

/// Barrier-method solution on a pivoted Cholesky factor of the Gram matrix,
/// following the central path from `start`, or `None` when no factor of rank `≤ MAX_FACTOR_RANK` reproduces the
/// diagonal to `1e-14 H`.
fn interior_point(
    view: &GramView<'_>,
    bounds: &[f64],
    start: &[Complex64],
) -> Option<(Vec<Complex64>, usize)> {
    let n = view.dim();
    let tol = 1e-14 * view.h();
    let lr = pivoted_cholesky(view, tol, n.min(MAX_FACTOR_RANK));
    if lr.residual > tol && lr.cols.len() < n {
        return None;
    }
    let scale = if view.target_norm_sq() > 0.0 {
        view.target_norm_sq()
    } else {
        1.0
    };
    let t_max = (2.0 * n as f64 / scale * 1e12).min(1e16);
    let out = barrier_solve(view, &lr, bounds, t_max, start);
    Some((out.coefficients, out.newton_steps))
}

/// Cyclic coordinate descent from `a`; at least `min_sweeps` sweeps are
/// run (one after a barrier start puts boundary coordinates exactly on
/// their circles).
fn descend(
    view: GramView<'_>,
    bounds: &[f64],
    mut a: Vec<Complex64>,
    opts: &SolveOptions,
    min_sweeps: usize,
) -> SolveResult {
    let n = view.dim();
    let h = view.h();
    let mode = opts.mode;
    let tol = opts.tolerance(bounds);
    let refresh = opts.refresh_every.max(1);
    let skip = 1e-3 * tol;
    let mut rho = view.gradient(&a);
    let mut objective = view.objective_from_gradient(&a, &rho);
    let mut trace = Vec::new();
    let mut max_ascent = 0.0f64;
    let mut converged = false;
    let mut sweeps = 0;
    let mut residual = residual_from_gradient(h, bounds, &a, &rho, mode);
    if residual <= tol && min_sweeps == 0 {
        converged = true;
    }
    while !converged && sweeps < opts.max_sweeps.max(min_sweeps) {
        for k in 0..n {
            let reduced = rho[k] - a[k] * h;
            let next = project(-reduced / h, bounds[k], mode, a[k]);
            let d = next - a[k];
            // the move equals this coordinate's KKT residual; moves far
            // below tolerance are skipped unless they land on the boundary
            let snaps =
                a[k].norm() < bounds[k] * (1.0 - 1e-13) && next.norm() >= bounds[k] * (1.0 - 1e-13);
            if d == ZERO || (d.norm() <= skip && !snaps) {
                continue;
            }
            a[k] = next;
            for (r, g) in rho.iter_mut().zip(view.row(k)) {
                *r += d * g;
            }
        }
        sweeps += 1;
        if sweeps % refresh == 0 {
            rho = view.gradient(&a);
            if mode == ConstraintMode::Disc && interior_block_step(view, bounds, &mut a, &rho) {
                rho = view.gradient(&a);
            }
        }
        let next_objective = view.objective_from_gradient(&a, &rho);
        max_ascent = max_ascent.max(next_objective - objective);
        objective = next_objective;
        if opts.keep_trace {
            trace.push(objective);
        }
        residual = residual_from_gradient(h, bounds, &a, &rho, mode);
        if residual <= tol {
            // confirm against a freshly computed gradient
            rho = view.gradient(&a);
            residual = residual_from_gradient(h, bounds, &a, &rho, mode);
            converged = residual <= tol;
        }
    }
    let rho = view.gradient(&a);
    let objective = view.objective_from_gradient(&a, &rho).max(0.0);
    let kkt_residual = residual_from_gradient(h, bounds, &a, &rho, mode);
    let active_set = a
        .iter()
        .zip(bounds)
        .enumerate()
        .filter(|(_, (z, &c))| c > 0.0 && (z.norm() - c).abs() <= 1e-12 * c)
        .map(|(i, _)| i)
        .collect();
    SolveResult {
        coefficients: a,
        objective,
        kkt_residual,
        iterations: sweeps,
        newton_steps: 0,
        active_set,
        converged: kkt_residual <= tol,
        stationary_only: mode == ConstraintMode::Circle,
        trace,
        max_ascent,
    }
}

/// Largest interior block handled by [`interior_block_step`].
const MAX_BLOCK: usize = 400;

/// Exact minimization over the coordinates whose gradient step stays inside
/// their discs, with the others held fixed: the minimum-norm solution of `M_II Δ = −ρ_I`
/// (eigenvalues below `1e-13` of the largest are dropped), then the longest
/// feasible step along `Δ`. The objective is convex along the segment and
/// minimal at its far end, so any feasible step decreases it.
fn interior_block_step(
    view: GramView<'_>,
    bounds: &[f64],
    a: &mut [Complex64],
    rho: &[Complex64],
) -> bool {
    let h = view.h();
    let block: Vec<usize> = (0..a.len())
        .filter(|&k| bounds[k] > 0.0 && (a[k] - rho[k] / h).norm() < bounds[k])
        .collect();
    if block.is_empty() || block.len() > MAX_BLOCK {
        return false;
    }
    let m = block.len();
    let sub = DMatrix::from_fn(m, m, |i, j| view.entry(block[j], block[i]));
    let eig = SymmetricEigen::new(sub);
    let top = eig.eigenvalues.iter().fold(0.0f64, |x, &l| x.max(l));
    if !(top > 0.0) {
        return false;
    }
    let rhs = DVector::from_iterator(m, block.iter().map(|&k| -rho[k]));
    let proj = eig.eigenvectors.adjoint() * rhs;
    let scaled = DVector::from_iterator(
        m,
        proj.iter().zip(eig.eigenvalues.iter()).map(
            |(p, &l)| {
                if l > 1e-13 * top {
                    p / l
                } else {
                    ZERO
                }
            },
        ),
    );
    let delta = &eig.eigenvectors * scaled;
    let mut step = 1.0f64;
    for (j, &k) in block.iter().enumerate() {
        let (z, v, c) = (a[k], delta[j], bounds[k]);
        let vv = v.norm_sqr();
        if vv == 0.0 {
            continue;
        }
        let zv = (z.conj() * v).re;
        let disc = zv * zv + vv * (c * c - z.norm_sqr());
        step = step.min(((-zv + disc.max(0.0).sqrt()) / vv).max(0.0));
    }
    if !(step > 0.0) {
        return false;
    }
    let before = view.objective_from_gradient(a, rho);
    let mut trial = a.to_vec();
    for (j, &k) in block.iter().enumerate() {
        trial[k] = project(
            a[k] + delta[j] * step,
            bounds[k],
            ConstraintMode::Disc,
            a[k],
        );
    }
    if view.objective(&trial) <= before {
        a.copy_from_slice(&trial);
        true
    } else {
        false
    }
}

/// Exhaustive polar-grid search for `N ≤ 3`: `64 × 64` (modulus × phase)
/// cells per disc, refined three times around the best cell. For `N = 3`
/// the last coordinate is minimized in closed form given the gridded others.
pub fn brute_oracle(gs: &GramSystem, bounds: &[f64]) -> Result<SolveResult> {
    let view = gs.view();
    check_inputs(&view, bounds)?;
    let n = view.dim();
    if n > 3 {
        return Err(invalid(format!(
            "brute-force oracle supports N <= 3, got {n}"
        )));
    }
    const STEPS: usize = 64;
    let h = view.h();
    let gridded = if n == 3 { 2 } else { n };
    // zero-padded data for three coordinates; F = ‖g‖² + 2Re(b^H a) + a^H M a
    // with b = conj(w) and M[i][k] = G[k][i]
    let mut b = [ZERO; 3];
    let mut m = [[ZERO; 3]; 3];
    let mut c = [0.0; 3];
    for (i, row) in m.iter_mut().enumerate().take(n) {
        b[i] = view.moments()[i].conj();
        c[i] = bounds[i];
        for (k, x) in row.iter_mut().enumerate().take(n) {
            *x = view.entry(k, i);
        }
    }
    let g2 = view.target_norm_sq();
    // exact minimization over the third disc given the first two
    let third = |a0: Complex64, a1: Complex64| -> (Complex64, f64) {
        let rho = b[2] + m[2][0] * a0 + m[2][1] * a1;
        let r = rho.norm();
        if r <= h * c[2] {
            (-rho / h, -r * r / h)
        } else {
            (-rho * (c[2] / r), -2.0 * c[2] * r + h * c[2] * c[2])
        }
    };
    let mut ranges: Vec<((f64, f64), (f64, f64))> = c[..gridded]
        .iter()
        .map(|&r| ((0.0, r), (0.0, std::f64::consts::TAU)))
        .collect();
    let grid = |r: &((f64, f64), (f64, f64))| -> Vec<Complex64> {
        let ((r0, r1), (p0, p1)) = *r;
        (0..STEPS * STEPS)
            .map(|cell| {
                let (i, j) = (cell / STEPS, cell % STEPS);
                let rad = r0 + (r1 - r0) * i as f64 / (STEPS - 1) as f64;
                let phase = p0 + (p1 - p0) * j as f64 / STEPS as f64;
                Complex64::from_polar(rad, phase)
            })
            .collect()
    };
    let (_, gain0) = third(ZERO, ZERO);
    let mut best_val = g2 + gain0;
    let mut best = vec![ZERO; n];
    for _round in 0..4 {
        let outer = grid(&ranges[0]);
        let inner = if gridded == 2 {
            grid(&ranges[1])
        } else {
            vec![ZERO]
        };
        let mut round_best = (f64::INFINITY, 0, 0);
        for (p, &a0) in outer.iter().enumerate() {
            let f0 = g2 + 2.0 * (b[0].conj() * a0).re + h * a0.norm_sqr();
            let cross = a0.conj() * m[0][1];
            for (q, &a1) in inner.iter().enumerate() {
                let f1 = 2.0 * ((b[1].conj() + cross) * a1).re + h * a1.norm_sqr();
                let (_, g) = third(a0, a1);
                let v = f0 + f1 + g;
                if v < round_best.0 {
                    round_best = (v, p, q);
                }
            }
        }
        let (v, p, q) = round_best;
        if v < best_val {
            best_val = v;
            let (a0, a1) = (outer[p], inner[q]);
            best[0] = a0;
            if gridded == 2 {
                best[1] = a1;
            }
            if n == 3 {
                best[2] = third(a0, a1).0;
            }
        }
        // shrink each gridded range to the neighbouring cells of the best point
        for (k, cell) in [p, q].into_iter().enumerate().take(gridded) {
            let ((r0, r1), (p0, p1)) = ranges[k];
            let dr = (r1 - r0) / (STEPS - 1) as f64;
            let dp = (p1 - p0) / STEPS as f64;
            let rad = r0 + dr * (cell / STEPS) as f64;
            let phase = p0 + dp * (cell % STEPS) as f64;
            ranges[k] = (
                ((rad - dr).max(0.0), (rad + dr).min(c[k])),
                (phase - dp, phase + dp),
            );
        }
    }
    if n == 3 && best.iter().take(2).all(|z| *z == ZERO) {
        best[2] = third(ZERO, ZERO).0;
    }
    let best_val = view.objective(&best).min(best_val);
    let rho = view.gradient(&best);
    let kkt = residual_from_gradient(h, bounds, &best, &rho, ConstraintMode::Disc);
    let active_set = best
        .iter()
        .zip(bounds)
        .enumerate()
        .filter(|(_, (z, &c))| c > 0.0 && (z.norm() - c).abs() <= 1e-12 * c)
        .map(|(i, _)| i)
        .collect();
    Ok(SolveResult {
        coefficients: best,
        objective: best_val.max(0.0),
        kkt_residual: kkt,
        iterations: 4,
        newton_steps: 0,
        active_set,
        converged: true,
        stationary_only: false,
        trace: Vec::new(),
        max_ascent: 0.0,
    })
}

/// One point of a sweep over `N`.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub n: usize,
    pub objective: f64,
    pub kkt_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// The warm-started solve did not improve on the previous point and a
    /// cold re-solve was needed.
    pub resolved_cold: bool,
    /// The previous point's solution (extended by zeros) was kept to
    /// preserve monotonicity.
    pub kept_previous: bool,
}

/// `(N, m_N)` with solve metadata; `m_N` is nonincreasing.
#[derive(Debug, Clone, Default)]
pub struct SweepCurve {
    pub points: Vec<SweepPoint>,
    /// Coefficients at the last point.
    pub final_coefficients: Vec<Complex64>,
}

impl SweepCurve {
    pub fn values(&self) -> Vec<(usize, f64)> {
        self.points.iter().map(|p| (p.n, p.objective)).collect()
    }

    pub fn all_converged(&self) -> bool {
        self.points.iter().all(|p| p.converged)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| w[1].objective <= w[0].objective)
    }

    /// Tabular rows `N m_N kkt_residual iterations converged`.
    pub fn to_table(&self) -> String {
        let mut out = String::from("# N m_N kkt_residual iterations converged\n");
        for p in &self.points {
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                p.n,
                fmt17(p.objective),
                fmt17(p.kkt_residual),
                p.iterations,
                u8::from(p.converged)
            ));
        }
        out
    }
}

/// Solve along an increasing schedule of truncation points, warm-starting
/// each solve from the previous solution extended by zeros.
pub fn sweep_n(
    sys: &CoeffSystem,
    target: &Target,
    h: f64,
    schedule: &[usize],
    opts: &SolveOptions,
) -> Result<SweepCurve> {
    if schedule.is_empty() {
        return Ok(SweepCurve::default());
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("N schedule must be strictly increasing"));
    }
    let top = *schedule.last().unwrap();
    if schedule[0] == 0 || top > sys.len() {
        return Err(invalid(format!(
            "schedule must lie in 1..={} for this system",
            sys.len()
        )));
    }
    let gs = GramSystem::from_lambdas(&sys.lambdas()[..top], target, h)?;
    let bounds = sys.amplitudes();
    let mut curve = SweepCurve::default();
    let mut prev: Vec<Complex64> = Vec::new();
    let mut prev_obj = f64::INFINITY;
    for &n in schedule {
        let view = gs.view_leading(n);
        let b = &bounds[..n];
        let mut start = prev.clone();
        start.resize(n, ZERO);
        let mut res = minimize_from(view, b, start.clone(), opts)?;
        let mut resolved_cold = false;
        let mut kept_previous = false;
        if res.objective > prev_obj {
            resolved_cold = true;
            let cold = minimize_view(view, b, opts)?;
            if cold.objective <= prev_obj {
                res = cold;
            } else {
                kept_previous = true;
                let rho = view.gradient(&start);
                res.objective = view.objective_from_gradient(&start, &rho).max(0.0);
                res.kkt_residual = residual_from_gradient(h, b, &start, &rho, opts.mode);
                res.converged = res.kkt_residual <= opts.tolerance(b);
                res.coefficients = start;
            }
        }
        prev_obj = res.objective;
        curve.points.push(SweepPoint {
            n,
            objective: res.objective,
            kkt_residual: res.kkt_residual,
            iterations: res.iterations,
            converged: res.converged,
            resolved_cold,
            kept_previous,
        });
        prev = res.coefficients;
    }
    curve.final_coefficients = prev;
    Ok(curve)
}
