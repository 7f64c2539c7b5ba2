//! Gauss–Legendre quadrature: fixed rules, composite panels with refinement,
//! and a recursive adaptive integrator used as an independent oracle.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be accumulated by a quadrature rule.
pub trait Quadrable:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Default
{
    fn modulus(&self) -> f64;
}

impl Quadrable for f64 {
    fn modulus(&self) -> f64 {
        self.abs()
    }
}

impl Quadrable for Complex64 {
    fn modulus(&self) -> f64 {
        self.norm()
    }
}

/// An n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on P_n from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integral of `f` over [a, b] with this rule.
    pub fn integrate<T: Quadrable>(&self, a: f64, b: f64, f: &mut impl FnMut(f64) -> T) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * (w * half);
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 16- and 32-point rules.
pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

pub fn gl32() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(32))
}

/// Composite rule: every interval between consecutive breakpoints is split
/// into `panels` equal panels.
pub fn composite<T: Quadrable>(
    rule: &GaussLegendre,
    breakpoints: &[f64],
    panels: usize,
    f: &mut impl FnMut(f64) -> T,
) -> T {
    let mut acc = T::default();
    for pair in breakpoints.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let h = (b - a) / panels as f64;
        for j in 0..panels {
            let lo = a + h * j as f64;
            let hi = if j + 1 == panels { b } else { lo + h };
            acc = acc + rule.integrate(lo, hi, f);
        }
    }
    acc
}

/// Outcome of a refined composite integration.
#[derive(Debug, Clone, Copy)]
pub struct Refined<T> {
    pub value: T,
    /// Difference between the last two estimates.
    pub error: f64,
    pub panels: usize,
    pub evaluations: usize,
}

/// Composite Gauss–Legendre with panel doubling until two successive
/// estimates differ by less than `rel_tol` relative (or `abs_floor` absolute).
pub fn refine<T: Quadrable>(
    rule: &GaussLegendre,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_floor: f64,
    max_doublings: usize,
    f: &mut impl FnMut(f64) -> T,
) -> Result<Refined<T>> {
    let intervals = breakpoints.len().saturating_sub(1);
    let mut panels = 1;
    let mut evaluations = intervals * rule.len();
    let mut prev = composite(rule, breakpoints, panels, f);
    for _ in 0..max_doublings {
        panels *= 2;
        let next = composite(rule, breakpoints, panels, f);
        evaluations += intervals * panels * rule.len();
        let diff = (next - prev).modulus();
        if diff <= rel_tol * next.modulus() || diff <= abs_floor {
            return Ok(Refined {
                value: next,
                error: diff,
                panels,
                evaluations,
            });
        }
        prev = next;
    }
    Err(Error::Quadrature {
        tol: rel_tol,
        estimate: prev.modulus(),
        evaluations,
    })
}

/// Recursive bisection with a 16-point rule; a panel is accepted when its
/// two halves agree with the whole to within `tol`, which halves per level.
pub fn adaptive<T: Quadrable>(
    a: f64,
    b: f64,
    tol: f64,
    max_depth: usize,
    f: &mut impl FnMut(f64) -> T,
) -> Result<T> {
    let rule = gl16();
    let whole = rule.integrate(a, b, f);
    let mut evaluations = rule.len();
    let value = adaptive_step(rule, a, b, whole, tol, max_depth, f, &mut evaluations);
    value.ok_or(Error::Quadrature {
        tol,
        estimate: whole.modulus(),
        evaluations,
    })
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<T: Quadrable>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: T,
    tol: f64,
    depth: usize,
    f: &mut impl FnMut(f64) -> T,
    evaluations: &mut usize,
) -> Option<T> {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    *evaluations += 2 * rule.len();
    let sum = left + right;
    if (sum - whole).modulus() <= tol {
        return Some(sum);
    }
    if depth == 0 {
        return None;
    }
    let l = adaptive_step(rule, a, mid, left, 0.5 * tol, depth - 1, f, evaluations)?;
    let r = adaptive_step(rule, mid, b, right, 0.5 * tol, depth - 1, f, evaluations)?;
    Some(l + r)
}
