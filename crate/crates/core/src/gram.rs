//! Closed-form `L²(0,H)` inner products of exponentials `e^{-iλt}` and the
//! Gram system of the bounded-coefficient minimization.
//!
//! With `e_n(t) = e^{-iλ_n t}` and `⟨f, g⟩ = ∫_0^H f(t) conj(g(t)) dt`:
//!
//! * `G[m][n] = ⟨e_m, e_n⟩ = ∫_0^H e^{-i(λ_m − λ_n)t} dt`
//! * `w[n] = ⟨e_n, g⟩`
//!
//! so that `∫_0^H |g + Σ a_n e_n|² dt = ‖g‖² + 2 Re Σ a_n w_n + Σ a_m conj(a_n) G[m][n]`.

use std::io::{self, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::frequency::CoeffSystem;
use crate::quad;

/// Below this value of `|Δ|H` the entry is evaluated by its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// Default cap on the dimension of a dense Gram matrix.
pub const MAX_DIM: usize = 20_000;

const DUMP_MAGIC: &[u8; 4] = b"GRM1";

/// `∫_0^H e^{-i(λ_m − λ_n)t} dt`.
pub fn gram_entry(lambda_m: f64, lambda_n: f64, h: f64) -> Result<Complex64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(invalid(format!("interval length H = {h} must be positive")));
    }
    if !lambda_m.is_finite() || !lambda_n.is_finite() {
        return Err(Error::NonFinite("frequency".into()));
    }
    Ok(entry(lambda_m - lambda_n, h))
}

/// `∫_0^H e^{-iΔt} dt`, computed for `|Δ|` and conjugated for negative `Δ`
/// so that swapping the arguments conjugates the result exactly.
pub(crate) fn entry(delta: f64, h: f64) -> Complex64 {
    if delta == 0.0 {
        return Complex64::new(h, 0.0);
    }
    let d = delta.abs();
    let x = d * h;
    let z = if x < SERIES_THRESHOLD {
        series_entry(d, h)
    } else {
        // (1 − e^{-ix}) / (iΔ) = (sin x − 2i sin²(x/2)) / Δ
        let s = (0.5 * x).sin();
        Complex64::new(x.sin() / d, -2.0 * s * s / d)
    };
    if delta < 0.0 {
        z.conj()
    } else {
        z
    }
}

/// `H Σ_{k=0}^{6} (−ix)^k / (k+1)!` with `x = ΔH`.
pub(crate) fn series_entry(d: f64, h: f64) -> Complex64 {
    let x = d * h;
    let mut re = 0.0;
    let mut im = 0.0;
    let mut term = 1.0;
    for k in 0..=6 {
        term /= (k + 1) as f64;
        // (−i)^k cycles 1, −i, −1, i
        match k % 4 {
            0 => re += term,
            1 => im -= term,
            2 => re -= term,
            _ => im += term,
        }
        term *= x;
    }
    Complex64::new(h * re, h * im)
}

/// Adaptive quadrature of a complex function on `[0, H]`.
pub fn quad_oracle(f: impl Fn(f64) -> Complex64, h: f64, tol: f64) -> Result<Complex64> {
    if !(h > 0.0) {
        return Err(invalid("H must be positive"));
    }
    quad::adaptive(0.0, h, tol, 40, &mut |t| f(t))
}

/// The function approximated by the Dirichlet polynomial.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    /// `g ≡ 1`
    One,
    /// `g ≡ c`
    Constant(Complex64),
    /// `g(t) = amplitude · e^{-iμt}`
    Exponential { mu: f64, amplitude: Complex64 },
    /// Samples on a uniform mesh of `[0, H]` (first and last at the ends),
    /// linearly interpolated.
    Sampled(Vec<Complex64>),
}

impl Target {
    /// Target of the shifted (Hurwitz) problem in the factored frequency
    /// coordinates `log(n+α) − log α`: the leading term `α^{it−1}`
    /// becomes the constant `1/α` after removing the common phase.
    pub fn hurwitz(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(invalid("α must be positive"));
        }
        Ok(Target::Constant(Complex64::new(1.0 / alpha, 0.0)))
    }

    pub fn eval(&self, t: f64, h: f64) -> Complex64 {
        match self {
            Target::One => Complex64::new(1.0, 0.0),
            Target::Constant(c) => *c,
            Target::Exponential { mu, amplitude } => amplitude * Complex64::new(0.0, -mu * t).exp(),
            Target::Sampled(v) => {
                let cells = (v.len() - 1) as f64;
                let pos = (t / h * cells).clamp(0.0, cells);
                let i = (pos.floor() as usize).min(v.len() - 2);
                let frac = pos - i as f64;
                v[i] * (1.0 - frac) + v[i + 1] * frac
            }
        }
    }

    fn validate(&self, h: f64, lambda_max: f64) -> Result<()> {
        match self {
            Target::Constant(c) if !(c.re.is_finite() && c.im.is_finite()) => {
                Err(Error::NonFinite("target constant".into()))
            }
            Target::Exponential { mu, amplitude }
                if !(mu.is_finite() && amplitude.re.is_finite() && amplitude.im.is_finite()) =>
            {
                Err(Error::NonFinite("target exponential".into()))
            }
            Target::Sampled(v) => {
                if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                    return Err(Error::NonFinite("target samples".into()));
                }
                let needed = (16.0 * lambda_max.max(1.0) * h).ceil() as usize;
                if v.len() < 2 || v.len() - 1 < needed {
                    return Err(invalid(format!(
                        "sampled target has {} samples; at least {} needed",
                        v.len(),
                        needed + 1
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn breakpoints(&self, h: f64) -> Vec<f64> {
        match self {
            Target::Sampled(v) => {
                let cells = v.len() - 1;
                (0..=cells).map(|i| h * i as f64 / cells as f64).collect()
            }
            _ => vec![0.0, h],
        }
    }

    /// `‖g‖² = ∫_0^H |g|² dt`.
    pub fn norm_sq(&self, h: f64) -> Result<f64> {
        match self {
            Target::One => Ok(h),
            Target::Constant(c) => Ok(c.norm_sqr() * h),
            Target::Exponential { amplitude, .. } => Ok(amplitude.norm_sqr() * h),
            Target::Sampled(_) => {
                let r = quad::refine(
                    quad::gl16(),
                    &self.breakpoints(h),
                    1e-12,
                    0.0,
                    8,
                    &mut |t| self.eval(t, h).norm_sqr(),
                )?;
                Ok(r.value)
            }
        }
    }

    /// `⟨e^{-iλ·}, g⟩ = ∫_0^H e^{-iλt} conj(g(t)) dt`.
    pub fn moment(&self, lambda: f64, h: f64) -> Result<Complex64> {
        match self {
            Target::One => Ok(entry(lambda, h)),
            Target::Constant(c) => Ok(c.conj() * entry(lambda, h)),
            Target::Exponential { mu, amplitude } => Ok(amplitude.conj() * entry(lambda - mu, h)),
            Target::Sampled(_) => {
                let r = quad::refine(
                    quad::gl16(),
                    &self.breakpoints(h),
                    1e-10,
                    1e-15 * h,
                    10,
                    &mut |t| Complex64::new(0.0, -lambda * t).exp() * self.eval(t, h).conj(),
                )?;
                Ok(r.value)
            }
        }
    }
}

/// Dense Hermitian Gram matrix, target moments and target norm.
#[derive(Debug, Clone)]
pub struct GramSystem {
    h: f64,
    lambdas: Vec<f64>,
    matrix: Vec<Complex64>,
    moments: Vec<Complex64>,
    target_norm_sq: f64,
    target: Target,
}

impl GramSystem {
    /// Assemble for the frequencies of `sys`.
    pub fn assemble(sys: &CoeffSystem, target: &Target, h: f64) -> Result<Self> {
        Self::from_lambdas(sys.lambdas(), target, h)
    }

    pub fn from_lambdas(lambdas: &[f64], target: &Target, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(invalid(format!("interval length H = {h} must be positive")));
        }
        let n = lambdas.len();
        if n > MAX_DIM {
            return Err(invalid(format!(
                "dimension {n} exceeds the dense cap {MAX_DIM}"
            )));
        }
        if lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::NonFinite("frequency".into()));
        }
        let lambda_max = lambdas.iter().fold(0.0f64, |a, l| a.max(l.abs()));
        target.validate(h, lambda_max)?;
        let target_norm_sq = target.norm_sq(h)?;
        if !target_norm_sq.is_finite() {
            return Err(Error::NonFinite("target norm".into()));
        }
        let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
        if n > 0 {
            matrix.par_chunks_mut(n).enumerate().for_each(|(m, row)| {
                for (k, slot) in row.iter_mut().enumerate() {
                    *slot = entry(lambdas[m] - lambdas[k], h);
                }
            });
        }
        let moments = lambdas
            .par_iter()
            .map(|&l| target.moment(l, h))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            h,
            lambdas: lambdas.to_vec(),
            matrix,
            moments,
            target_norm_sq,
            target: target.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    #[inline]
    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        self.matrix[m * self.dim() + n]
    }

    /// Row `m`: `G[m][·]`.
    #[inline]
    pub fn row(&self, m: usize) -> &[Complex64] {
        let n = self.dim();
        &self.matrix[m * n..(m + 1) * n]
    }

    pub fn moments(&self) -> &[Complex64] {
        &self.moments
    }

    /// Borrowed view of the whole system.
    pub fn view(&self) -> GramView<'_> {
        self.view_leading(self.dim())
    }

    /// Borrowed view of the leading `n × n` block.
    pub fn view_leading(&self, n: usize) -> GramView<'_> {
        assert!(n <= self.dim(), "leading block larger than the system");
        GramView {
            h: self.h,
            n,
            stride: self.dim(),
            matrix: &self.matrix,
            moments: &self.moments[..n],
            target_norm_sq: self.target_norm_sq,
        }
    }

    pub fn target_norm_sq(&self) -> f64 {
        self.target_norm_sq
    }

    /// The leading `n × n` block.
    pub fn leading(&self, n: usize) -> Result<Self> {
        if n > self.dim() {
            return Err(invalid(format!(
                "cannot take {n} leading rows of {}",
                self.dim()
            )));
        }
        let big = self.dim();
        let mut matrix = Vec::with_capacity(n * n);
        for m in 0..n {
            matrix.extend_from_slice(&self.matrix[m * big..m * big + n]);
        }
        Ok(Self {
            h: self.h,
            lambdas: self.lambdas[..n].to_vec(),
            matrix,
            moments: self.moments[..n].to_vec(),
            target_norm_sq: self.target_norm_sq,
            target: self.target.clone(),
        })
    }

    /// `ρ_n = conj(w_n) + Σ_m a_m G[m][n]`, the gradient of the objective
    /// with respect to `conj(a_n)`.
    pub fn gradient(&self, a: &[Complex64]) -> Vec<Complex64> {
        self.view().gradient(a)
    }

    /// `∫_0^H |g + Σ a_n e^{-iλ_n t}|² dt` from the quadratic form.
    pub fn objective(&self, a: &[Complex64]) -> f64 {
        let rho = self.gradient(a);
        self.objective_from_gradient(a, &rho)
    }

    /// Objective given `ρ = gradient(a)`: `‖g‖² + Re Σ a_n w_n + Re Σ conj(a_n) ρ_n`.
    pub fn objective_from_gradient(&self, a: &[Complex64], rho: &[Complex64]) -> f64 {
        self.view().objective_from_gradient(a, rho)
    }

    /// Evaluate `g(t) + Σ a_n e^{-iλ_n t}`.
    pub fn residual_at(&self, a: &[Complex64], t: f64) -> Complex64 {
        let mut acc = self.target.eval(t, self.h);
        for (an, l) in a.iter().zip(&self.lambdas) {
            acc += an * Complex64::new(0.0, -l * t).exp();
        }
        acc
    }

    /// Estimate of the smallest eigenvalue by shifted power iteration from a
    /// seeded random start (the Rayleigh quotient of the final iterate).
    pub fn min_eigenvalue_estimate(&self, iterations: usize, seed: u64) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 0.0;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // strictly above the largest eigenvalue, which is at most tr G = nH
        let shift = self.h * (n + 1) as f64;
        let mut x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut rayleigh = f64::INFINITY;
        for _ in 0..iterations {
            let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                break;
            }
            x.iter_mut().for_each(|z| *z /= norm);
            let gx = self.apply(&x);
            rayleigh = x.iter().zip(&gx).map(|(xi, gi)| (xi.conj() * gi).re).sum();
            x = x.iter().zip(&gx).map(|(xi, gi)| xi * shift - gi).collect();
        }
        rayleigh
    }

    /// `y = G x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim())
            .map(|m| self.row(m).iter().zip(x).map(|(g, xi)| g * xi).sum())
            .collect()
    }

    /// Little-endian dump: 16-byte header (magic `GRM1`, `N` as u32, `H` as
    /// f64) followed by the row-major matrix as `(re, im)` pairs.
    pub fn write_binary(&self, mut out: impl Write) -> io::Result<()> {
        out.write_all(DUMP_MAGIC)?;
        out.write_all(&(self.dim() as u32).to_le_bytes())?;
        out.write_all(&self.h.to_le_bytes())?;
        for z in &self.matrix {
            out.write_all(&z.re.to_le_bytes())?;
            out.write_all(&z.im.to_le_bytes())?;
        }
        Ok(())
    }

    /// Inverse of [`Self::write_binary`]: `(H, N, matrix)`.
    pub fn read_binary(bytes: &[u8]) -> Result<(f64, usize, Vec<Complex64>)> {
        let bad = |m: &str| Error::Parse {
            line: 0,
            message: m.to_string(),
        };
        if bytes.len() < 16 || &bytes[..4] != DUMP_MAGIC {
            return Err(bad("missing Gram dump header"));
        }
        let n = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        let h = f64::from_le_bytes(bytes[8..16].try_into().unwrap());
        if bytes.len() != 16 + 16 * n * n {
            return Err(bad("Gram dump has the wrong length"));
        }
        let matrix = bytes[16..]
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        Ok((h, n, matrix))
    }
}

/// A leading block of a [`GramSystem`] without copying the matrix.
#[derive(Debug, Clone, Copy)]
pub struct GramView<'a> {
    h: f64,
    n: usize,
    stride: usize,
    matrix: &'a [Complex64],
    moments: &'a [Complex64],
    target_norm_sq: f64,
}

impl<'a> GramView<'a> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn moments(&self) -> &'a [Complex64] {
        self.moments
    }

    pub fn target_norm_sq(&self) -> f64 {
        self.target_norm_sq
    }

    #[inline]
    pub fn row(&self, m: usize) -> &'a [Complex64] {
        &self.matrix[m * self.stride..m * self.stride + self.n]
    }

    #[inline]
    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        self.matrix[m * self.stride + n]
    }

    /// `ρ_n = conj(w_n) + Σ_m a_m G[m][n]`.
    pub fn gradient(&self, a: &[Complex64]) -> Vec<Complex64> {
        let mut rho: Vec<Complex64> = self.moments.iter().map(|w| w.conj()).collect();
        for (m, am) in a.iter().enumerate() {
            if *am == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (r, g) in rho.iter_mut().zip(self.row(m)) {
                *r += am * g;
            }
        }
        rho
    }

    pub fn objective(&self, a: &[Complex64]) -> f64 {
        let rho = self.gradient(a);
        self.objective_from_gradient(a, &rho)
    }

    pub fn objective_from_gradient(&self, a: &[Complex64], rho: &[Complex64]) -> f64 {
        let mut acc = self.target_norm_sq;
        for ((an, wn), rn) in a.iter().zip(self.moments).zip(rho) {
            acc += (an * wn).re + (an.conj() * rn).re;
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        let ok = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        self.target_norm_sq.is_finite()
            && self.moments.iter().all(ok)
            && (0..self.n).all(|m| self.row(m).iter().all(ok))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::{BoundProfile, FrequencyKind};

    #[test]
    fn entry_examples() {
        assert_eq!(gram_entry(1.0, 1.0, 2.5).unwrap(), Complex64::new(2.5, 0.0));
        let z = gram_entry(std::f64::consts::PI, 0.0, 2.0).unwrap();
        assert!(z.norm() < 1e-15);
        let z = gram_entry(1.0, 0.0, 1.0).unwrap();
        assert!((z.re - 1f64.sin()).abs() < 1e-15);
        assert!((z.im + (1.0 - 1f64.cos())).abs() < 1e-15);
        // frozen adaptive-quadrature value
        assert!(
            (z - Complex64::new(0.841_470_984_807_896_5, -0.459_697_694_131_860_3)).norm() < 1e-12
        );
        assert!(gram_entry(1.0, 0.0, 0.0).is_err());
        assert!(gram_entry(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn swap_conjugates_exactly() {
        for (a, b, h) in [(0.3, 2.9, 1.7), (5.0, 5.0 + 1e-7, 3.0), (10.0, 0.1, 0.5)] {
            assert_eq!(
                gram_entry(a, b, h).unwrap(),
                gram_entry(b, a, h).unwrap().conj()
            );
        }
    }

    #[test]
    fn series_branch_is_continuous() {
        let h = 1.3;
        let d = SERIES_THRESHOLD / h;
        let direct = {
            let x = d * h;
            let s = (0.5 * x).sin();
            Complex64::new(x.sin() / d, -2.0 * s * s / d)
        };
        let series = series_entry(d, h);
        assert!((direct - series).norm() <= 1e-11 * h);
    }

    #[test]
    fn oracle_examples() {
        let v = quad_oracle(|_| Complex64::new(1.0, 0.0), 3.0, 1e-13).unwrap();
        assert!((v.re - 3.0).abs() < 1e-13);
        let v = quad_oracle(|t| Complex64::new(t, 0.0), 1.0, 1e-13).unwrap();
        assert!((v.re - 0.5).abs() < 1e-13);
        let v = quad_oracle(|t| Complex64::new(0.0, -5.0 * t).exp(), 1.0, 1e-14).unwrap();
        assert!((v - gram_entry(5.0, 0.0, 1.0).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn assemble_small_systems() {
        let sys = CoeffSystem::custom(vec![1.0], vec![1.0]).unwrap();
        let gs = GramSystem::assemble(&sys, &Target::One, 1.0).unwrap();
        assert_eq!(gs.entry(0, 0), Complex64::new(1.0, 0.0));
        let want =
            (Complex64::new(1.0, 0.0) - Complex64::new(0.0, -1.0).exp()) / Complex64::new(0.0, 1.0);
        assert!((gs.moments()[0] - want).norm() < 1e-15);
        assert_eq!(gs.target_norm_sq(), 1.0);
    }

    #[test]
    fn assembled_matrix_is_hermitian_with_constant_diagonal() {
        let sys = CoeffSystem::build(FrequencyKind::Classical, &BoundProfile::Unit, 64).unwrap();
        let gs = GramSystem::assemble(&sys, &Target::One, 2.0).unwrap();
        for m in 0..64 {
            assert_eq!(gs.entry(m, m), Complex64::new(2.0, 0.0));
            for n in 0..64 {
                assert_eq!(gs.entry(m, n), gs.entry(n, m).conj());
                let d = (sys.lambdas()[m] - sys.lambdas()[n]).abs();
                let bound = if d > 0.0 { (2.0f64).min(2.0 / d) } else { 2.0 };
                assert!(gs.entry(m, n).norm() <= bound * (1.0 + 1e-14));
            }
        }
        assert!(gs.min_eigenvalue_estimate(200, 7) >= -1e-10 * gs.h());
    }

    #[test]
    fn sampled_target_matches_closed_form() {
        let h = 1.5;
        let lambdas = [0.7, 1.9, 3.2];
        let samples: Vec<Complex64> = (0..=400)
            .map(|i| Complex64::new(0.0, -0.4 * h * i as f64 / 400.0).exp() * 2.0)
            .collect();
        let sampled = GramSystem::from_lambdas(&lambdas, &Target::Sampled(samples), h).unwrap();
        let exact = GramSystem::from_lambdas(
            &lambdas,
            &Target::Exponential {
                mu: 0.4,
                amplitude: Complex64::new(2.0, 0.0),
            },
            h,
        )
        .unwrap();
        // linear interpolation error is O(h²μ²/8) relative
        for (a, b) in sampled.moments().iter().zip(exact.moments()) {
            assert!((a - b).norm() < 1e-5);
        }
        assert!((sampled.target_norm_sq() - exact.target_norm_sq()).abs() < 1e-5);
        let too_few = Target::Sampled(vec![Complex64::new(1.0, 0.0); 4]);
        assert!(GramSystem::from_lambdas(&lambdas, &too_few, h).is_err());
    }

    #[test]
    fn nonfinite_targets_are_rejected() {
        let t = Target::Constant(Complex64::new(f64::NAN, 0.0));
        assert!(matches!(
            GramSystem::from_lambdas(&[1.0], &t, 1.0),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn objective_matches_direct_quadrature() {
        let lambdas = [0.4, 1.1, 2.5];
        let target = Target::Exponential {
            mu: -0.3,
            amplitude: Complex64::new(0.5, 0.2),
        };
        let gs = GramSystem::from_lambdas(&lambdas, &target, 2.0).unwrap();
        let a = [
            Complex64::new(0.3, -0.1),
            Complex64::new(-0.2, 0.4),
            Complex64::new(0.1, 0.1),
        ];
        let direct = quad_oracle(
            |t| Complex64::new(gs.residual_at(&a, t).norm_sqr(), 0.0),
            2.0,
            1e-13,
        )
        .unwrap()
        .re;
        assert!((gs.objective(&a) - direct).abs() < 1e-12);
    }

    #[test]
    fn binary_dump_round_trip() {
        let gs = GramSystem::from_lambdas(&[0.5, 1.5], &Target::One, 1.25).unwrap();
        let mut buf = Vec::new();
        gs.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 4 * 16);
        let (h, n, m) = GramSystem::read_binary(&buf).unwrap();
        assert_eq!((h, n), (1.25, 2));
        assert_eq!(m[1], gs.entry(0, 1));
        assert!(GramSystem::read_binary(&buf[..10]).is_err());
    }

    #[test]
    fn leading_block() {
        let gs = GramSystem::from_lambdas(&[0.5, 1.5, 2.5], &Target::One, 1.0).unwrap();
        let lead = gs.leading(2).unwrap();
        assert_eq!(lead.dim(), 2);
        assert_eq!(lead.entry(1, 0), gs.entry(1, 0));
        assert!(gs.leading(4).is_err());
    }
}
