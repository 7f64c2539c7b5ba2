//! Primal barrier method for the disc-constrained problem on a low-rank
//! factor of the Gram matrix.
//!
//! Exponentials with frequencies packed into a bounded band are nearly
//! linearly dependent on a short interval, so the Gram matrix has tiny
//! numerical rank and coordinate descent crawls along its near-null
//! directions. A pivoted Cholesky factor `M ≈ L L^H` (rank `r`) makes each
//! Newton step of the barrier problem cost `O(N r²)` through the Woodbury
//! identity.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use crate::gram::GramView;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Columns of `L` with `M ≈ L L^H`, where `M[i][k] = G[k][i]`.
pub(crate) struct LowRank {
    pub cols: Vec<Vec<Complex64>>,
    /// Largest diagonal entry of `M − L L^H`.
    pub residual: f64,
}

/// Greedy diagonally pivoted Cholesky; stops when the largest remaining
/// diagonal entry drops to `tol` or `max_rank` columns have been built.
pub(crate) fn pivoted_cholesky(view: &GramView<'_>, tol: f64, max_rank: usize) -> LowRank {
    let n = view.dim();
    let mut diag: Vec<f64> = (0..n).map(|i| view.entry(i, i).re).collect();
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    loop {
        let (p, &dp) = diag
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .expect("nonempty");
        if dp <= tol || cols.len() >= max_rank {
            return LowRank {
                cols,
                residual: dp.max(0.0),
            };
        }
        let root = dp.sqrt();
        let row = view.row(p);
        let mut col: Vec<Complex64> = row.to_vec();
        for prev in &cols {
            let c = prev[p].conj();
            for (x, y) in col.iter_mut().zip(prev) {
                *x -= y * c;
            }
        }
        for x in col.iter_mut() {
            *x /= root;
        }
        col[p] = Complex64::new(root, 0.0);
        for (d, x) in diag.iter_mut().zip(&col) {
            *d -= x.norm_sqr();
        }
        diag[p] = 0.0;
        cols.push(col);
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BarrierOutcome {
    pub coefficients: Vec<Complex64>,
    pub newton_steps: usize,
}

/// Follow the central path of `t·F̃(a) − Σ log(C_n² − |a_n|²)` with `F̃` the
/// low-rank model, increasing `t` tenfold per stage up to `t_max`. The path
/// starts from `start` pulled to within `0.9 C_n` of the origin.
pub(crate) fn barrier_solve(
    view: &GramView<'_>,
    lr: &LowRank,
    bounds: &[f64],
    t_max: f64,
    start: &[Complex64],
) -> BarrierOutcome {
    let n = view.dim();
    let free: Vec<usize> = (0..n).filter(|&k| bounds[k] > 0.0).collect();
    let mut a: Vec<Complex64> = start
        .iter()
        .zip(bounds)
        .map(|(&z, &c)| {
            let r = z.norm();
            if c <= 0.0 {
                ZERO
            } else if r > 0.9 * c {
                z * (0.9 * c / r)
            } else {
                z
            }
        })
        .collect();
    if free.is_empty() || lr.cols.is_empty() {
        return BarrierOutcome {
            coefficients: a,
            newton_steps: 0,
        };
    }
    let b: Vec<Complex64> = view.moments().iter().map(|w| w.conj()).collect();
    let nu = 2.0 * free.len() as f64;
    let scale = if view.target_norm_sq() > 0.0 {
        view.target_norm_sq()
    } else {
        1.0
    };
    let mut t = (nu / scale).clamp(1e-6, 1e6);
    let mut steps = 0;
    loop {
        steps += centering(lr, &b, bounds, &free, &mut a, t);
        if t >= t_max {
            break;
        }
        t = (t * 10.0).min(t_max);
    }
    BarrierOutcome {
        coefficients: a,
        newton_steps: steps,
    }
}

/// Damped Newton iterations at fixed `t`; returns the number of steps.
fn centering(
    lr: &LowRank,
    b: &[Complex64],
    bounds: &[f64],
    free: &[usize],
    a: &mut [Complex64],
    t: f64,
) -> usize {
    let r = lr.cols.len();
    let m = free.len();
    let st = t.sqrt();
    let mut steps = 0;
    let mut last_dec2 = f64::INFINITY;
    for _ in 0..100 {
        // model gradient ρ̃ = b + L (L^H a)
        let coef: Vec<Complex64> = lr
            .cols
            .iter()
            .map(|col| free.iter().map(|&k| col[k].conj() * a[k]).sum())
            .collect();
        let mut s = vec![0.0; m];
        let mut w = vec![ZERO; m];
        for (j, &k) in free.iter().enumerate() {
            let rho = b[k]
                + lr.cols
                    .iter()
                    .zip(&coef)
                    .map(|(col, c)| col[k] * c)
                    .sum::<Complex64>();
            s[j] = bounds[k] * bounds[k] - a[k].norm_sqr();
            w[j] = rho * t + a[k] / s[j];
        }
        let dinv = |j: usize, v: Complex64, a: &[Complex64]| -> Complex64 {
            let z = a[free[j]];
            let sj = s[j];
            sj * (v - z * (2.0 * (z.conj() * v).re / (sj + 2.0 * z.norm_sqr())))
        };
        // columns of U = √t [ℓ_k, iℓ_k] and D⁻¹U
        let mut y_cols: Vec<Vec<Complex64>> = Vec::with_capacity(2 * r);
        for col in &lr.cols {
            for rot in [Complex64::new(st, 0.0), Complex64::new(0.0, st)] {
                y_cols.push((0..m).map(|j| dinv(j, col[free[j]] * rot, a)).collect());
            }
        }
        let u = |idx: usize, j: usize| -> Complex64 {
            let rot = if idx.is_multiple_of(2) {
                Complex64::new(st, 0.0)
            } else {
                Complex64::new(0.0, st)
            };
            lr.cols[idx / 2][free[j]] * rot
        };
        let dim = 2 * r;
        let mut smat = DMatrix::<f64>::identity(dim, dim);
        for p in 0..dim {
            for q in p..dim {
                let v: f64 = (0..m).map(|j| (u(p, j).conj() * y_cols[q][j]).re).sum();
                smat[(p, q)] += v;
                if p != q {
                    smat[(q, p)] += v;
                }
            }
        }
        let y: Vec<Complex64> = (0..m).map(|j| dinv(j, -w[j], a)).collect();
        let rhs = DVector::from_iterator(
            dim,
            (0..dim).map(|p| (0..m).map(|j| (u(p, j).conj() * y[j]).re).sum::<f64>()),
        );
        let Some(chol) = Cholesky::new(smat) else {
            break;
        };
        let z = chol.solve(&rhs);
        let mut delta = y;
        for (p, yc) in y_cols.iter().enumerate() {
            let zp = z[p];
            for (d, v) in delta.iter_mut().zip(yc) {
                *d -= v * zp;
            }
        }
        let dec2: f64 = 2.0
            * w.iter()
                .zip(&delta)
                .map(|(x, d)| -(x.conj() * d).re)
                .sum::<f64>();
        if !(dec2 >= 0.0) || !dec2.is_finite() {
            break;
        }
        // rounding in the gradient limits the attainable decrement
        if dec2 < 1e-8 || (dec2 < 1e-4 && dec2 > 0.5 * last_dec2) {
            break;
        }
        last_dec2 = dec2;
        // longest feasible step, then backtracking on the barrier objective
        let mut alpha = 1.0f64;
        for (&k, d) in free.iter().zip(&delta) {
            let (z, c) = (a[k], bounds[k]);
            let vv = d.norm_sqr();
            if vv == 0.0 {
                continue;
            }
            let zv = (z.conj() * d).re;
            let disc = zv * zv + vv * (c * c - z.norm_sqr());
            alpha = alpha.min(0.99 * (-zv + disc.max(0.0).sqrt()) / vv);
        }
        let mut trial = a.to_vec();
        if dec2 < 0.0625 {
            // quadratic-convergence region: the full step is safe and the
            // barrier value is too flat to resolve in floating point
            for (&k, d) in free.iter().zip(&delta) {
                a[k] += d * alpha;
            }
            steps += 1;
            continue;
        }
        let psi0 = barrier_value(lr, b, bounds, free, a, t);
        let accepted = loop {
            for (&k, d) in free.iter().zip(&delta) {
                trial[k] = a[k] + d * alpha;
            }
            let psi = barrier_value(lr, b, bounds, free, &trial, t);
            if psi <= psi0 - 0.25 * alpha * dec2 {
                break true;
            }
            alpha *= 0.5;
            if alpha < 1e-12 {
                break false;
            }
        };
        if !accepted {
            break;
        }
        a.copy_from_slice(&trial);
        steps += 1;
    }
    steps
}

/// `t·F̃(a) − Σ log(C_n² − |a_n|²)` up to the constant `t‖g‖²`; infinite
/// outside the feasible set.
fn barrier_value(
    lr: &LowRank,
    b: &[Complex64],
    bounds: &[f64],
    free: &[usize],
    a: &[Complex64],
    t: f64,
) -> f64 {
    let mut linear = 0.0;
    let mut barrier = 0.0;
    for &k in free {
        let s = bounds[k] * bounds[k] - a[k].norm_sqr();
        if !(s > 0.0) {
            return f64::INFINITY;
        }
        barrier -= s.ln();
        linear += 2.0 * (b[k].conj() * a[k]).re;
    }
    let quad: f64 = lr
        .cols
        .iter()
        .map(|col| {
            free.iter()
                .map(|&k| col[k].conj() * a[k])
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum();
    t * (linear + quad) + barrier
}
