//! Fourier coefficients of Fisher–Hartwig symbols.
//!
//! Each ω-factor has the closed form
//! `f_k = (−1)^k Γ(1+2α) / (Γ(1+α−β+k) Γ(1+α+β−k))`, generated by the
//! recurrence `f_{k+1} = f_k (k−α−β)/(k+1+α−β)`. A factor at `t` multiplies
//! `f_k` by `e^{−ikt}`. The coefficients of `e^V` come from the power series of
//! `exp(V_+)`. The product's coefficients are the convolution of the factor
//! sequences, truncated at a band `L` that is doubled until successive results
//! agree to the requested tolerance.

use super::{check_n, fft_in_place, FhSymbol, Side, Singularity, TWO_PI};
use crate::specfun::{integrate_1d, ln_gamma, log_gamma, Hint, QuadratureSpec};
use crate::{Complex, Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

const ZERO: Complex = Complex { re: 0.0, im: 0.0 };

fn check_factor(alpha: f64, beta_im: f64) -> Result<()> {
    if !alpha.is_finite() || !beta_im.is_finite() {
        return Err(Error::NonFinite);
    }
    if alpha < 0.0 {
        return Err(Error::InvalidSymbol(alloc::format!("alpha = {alpha} is negative")));
    }
    Ok(())
}

/// `f_0 = Γ(1+2α) / |Γ(1+α+i·beta_im)|²`.
fn factor_c0(alpha: f64, beta_im: f64) -> Result<f64> {
    if beta_im == 0.0 && alpha < 80.0 {
        let g = libm::tgamma(1.0 + alpha);
        return Ok(libm::tgamma(1.0 + 2.0 * alpha) / (g * g));
    }
    let lg = log_gamma(Complex::new(1.0 + alpha, beta_im))?;
    Ok((ln_gamma(1.0 + 2.0 * alpha)? - 2.0 * lg.re).exp())
}

/// Coefficients `f_0, …, f_{len−1}` of `ω_{α,β}` (singularity at `t = 0`).
pub fn factor_coeffs(alpha: f64, beta_im: f64, len: usize) -> Result<Vec<Complex>> {
    check_factor(alpha, beta_im)?;
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return Ok(out);
    }
    let a = Complex::new(alpha, beta_im);
    let b = Complex::new(alpha, -beta_im);
    let mut c = Complex::new(factor_c0(alpha, beta_im)?, 0.0);
    out.push(c);
    for k in 0..len - 1 {
        let kf = k as f64;
        c = c * (kf - a) / (kf + 1.0 + b);
        out.push(c);
    }
    Ok(out)
}

/// The `k`-th Fourier coefficient of `ω_{α,β}` with the singularity at `t = 0`.
pub fn fh_factor_coeff(alpha: f64, beta_im: f64, k: i64) -> Result<Complex> {
    check_factor(alpha, beta_im)?;
    if k < 0 {
        return Ok(fh_factor_coeff(alpha, beta_im, -k)?.conj());
    }
    if k <= 64 {
        return Ok(factor_coeffs(alpha, beta_im, k as usize + 1)?[k as usize]);
    }
    if beta_im == 0.0 && alpha == alpha.round() && (k as f64) > alpha {
        // |z−1|^{2α} is a trigonometric polynomial of degree α.
        return Ok(ZERO);
    }
    // Reflection of 1/Γ(1+a−k) turns the closed form into
    // f_k = −Γ(1+2α) sin(πa)/π · Γ(k−a)/Γ(k+1+b), a = α+β, b = α−β.
    let a = Complex::new(alpha, beta_im);
    let b = Complex::new(alpha, -beta_im);
    let kf = k as f64;
    let ratio = (log_gamma(kf - a)? - log_gamma(kf + 1.0 + b)? + ln_gamma(1.0 + 2.0 * alpha)?).exp();
    Ok(-(a * PI).sin() / PI * ratio)
}

/// Same coefficient by direct quadrature of `ω(e^{iφ}) e^{−ikφ}` over
/// `[0, 2π]`; an independent route for validating [`fh_factor_coeff`].
pub fn factor_coeff_quadrature(alpha: f64, beta_im: f64, k: i64, spec: &QuadratureSpec) -> Result<Complex> {
    check_factor(alpha, beta_im)?;
    let s = Singularity::new(0.0, alpha, beta_im);
    let hints = [Hint::new(0.0, 2.0 * alpha), Hint::new(TWO_PI, 2.0 * alpha)];
    let kf = k as f64;
    let w = |phi: f64| s.factor(phi, Side::After).unwrap_or(0.0);
    let (re, _) = integrate_1d(|phi| w(phi) * (kf * phi).cos(), 0.0, TWO_PI, &hints, spec)?;
    let (im, _) = integrate_1d(|phi| -w(phi) * (kf * phi).sin(), 0.0, TWO_PI, &hints, spec)?;
    Ok(Complex::new(re, im) / TWO_PI)
}

/// Coefficients `f_k`, `|k| ≤ n_max`, of a real symbol. Only `k ≥ 0` is
/// stored; `f_{−k} = conj(f_k)` and `f_0` is real by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    coeffs: Vec<Complex>,
    tol: f64,
    err_est: f64,
}

impl CoeffTable {
    /// Builds a table from `f_0, …, f_{n_max}`. The imaginary part of `f_0` is
    /// dropped.
    pub fn from_nonnegative(mut coeffs: Vec<Complex>, tol: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(crate::error::invalid("coefficient table needs f_0"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        coeffs[0].im = 0.0;
        Ok(Self {
            coeffs,
            tol,
            err_est: 0.0,
        })
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Estimated absolute error of the worst coefficient.
    pub fn err_est(&self) -> f64 {
        self.err_est
    }

    pub fn f0(&self) -> f64 {
        self.coeffs[0].re
    }

    /// `f_k` for `|k| ≤ n_max`, zero outside.
    pub fn get(&self, k: i64) -> Complex {
        match self.coeffs.get(k.unsigned_abs() as usize) {
            Some(c) if k < 0 => c.conj(),
            Some(c) => *c,
            None => ZERO,
        }
    }

    /// `f_0, …, f_{n_max}`.
    pub fn nonnegative(&self) -> &[Complex] {
        &self.coeffs
    }

    /// The truncated Fourier series `Σ_{|k|≤n_max} f_k e^{ikθ}`.
    pub fn reconstruct(&self, theta: f64) -> f64 {
        let mut s = self.f0();
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let (sin, cos) = (k as f64 * theta).sin_cos();
            s += 2.0 * (c.re * cos - c.im * sin);
        }
        s
    }
}

/// Coefficients of `e^{V}` for `k ≥ 0` (two-sided by conjugation).
fn analytic_coeffs(sym: &FhSymbol) -> Vec<Complex> {
    let v = sym.analytic();
    let deg = v.degree();
    if deg == 0 {
        return alloc::vec![Complex::new(v.v0().exp(), 0.0)];
    }
    // exp(V_+) = Σ p_k z^k with k p_k = Σ_{j=1}^{min(k,deg)} j V_j p_{k−j}.
    let mut p = alloc::vec![Complex::new(1.0, 0.0)];
    let mut peak: f64 = 1.0;
    let mut small_run = 0;
    let mut k = 1;
    while small_run < deg || k <= deg {
        let mut s = ZERO;
        for j in 1..=deg.min(k) {
            s += v.coeff(j as i64) * (j as f64) * p[k - j];
        }
        let pk = s / k as f64;
        peak = peak.max(pk.norm());
        if pk.norm() <= 1e-20 * peak {
            small_run += 1;
        } else {
            small_run = 0;
        }
        p.push(pk);
        k += 1;
        if k > 100_000 {
            break;
        }
    }
    let scale = v.v0().exp();
    (0..p.len())
        .map(|k| {
            let mut s = ZERO;
            for j in 0..p.len() - k {
                s += p[j + k] * p[j].conj();
            }
            s * scale
        })
        .collect()
}

fn two_sided(pos: &[Complex], k: i64) -> Complex {
    match pos.get(k.unsigned_abs() as usize) {
        Some(c) if k < 0 => c.conj(),
        Some(c) => *c,
        None => ZERO,
    }
}

/// Rotated factor sequence `f_k e^{−ikt}`, `k = 0..len`.
fn rotated_factor(s: &Singularity, len: usize) -> Result<Vec<Complex>> {
    let mut c = factor_coeffs(s.alpha, s.beta_im, len)?;
    if s.t != 0.0 {
        for (k, ck) in c.iter_mut().enumerate() {
            *ck *= Complex::from_polar(1.0, -(k as f64) * s.t);
        }
    }
    Ok(c)
}

/// Above this band a pair of factors is multiplied by FFT.
const DIRECT_PAIR_MAX_BAND: usize = 32;

/// Support half-width of a factor with finitely many nonzero coefficients
/// (`β = 0`, integer `α`).
fn finite_support(s: &Singularity) -> Option<usize> {
    (s.beta_im == 0.0 && s.alpha.fract() == 0.0 && s.alpha <= 1e6).then_some(s.alpha as usize)
}

/// Coefficients `k = 0..=band` of the product of the singular factors, each
/// truncated at `|k| ≤ l`.
fn singular_product(sings: &[Singularity], band: usize, l: usize) -> Result<Vec<Complex>> {
    let len = l.max(band) + 1;
    let factors: Vec<Vec<Complex>> = sings.iter().map(|s| rotated_factor(s, len)).collect::<Result<_>>()?;
    match factors.len() {
        1 => Ok(factors[0][..=band].to_vec()),
        2 if band < DIRECT_PAIR_MAX_BAND => {
            // Restricted direct convolution over |i| ≤ l, |k−i| ≤ l.
            let li = l as i64;
            let g1: Vec<Complex> = (-li..=li).map(|i| two_sided(&factors[0], i)).collect();
            let g2: Vec<Complex> = (-li..=li).map(|i| two_sided(&factors[1], i)).collect();
            Ok((0..=band as i64)
                .map(|k| {
                    let lo = (k - li).max(-li);
                    let mut s = ZERO;
                    for i in lo..=li {
                        s += g1[(i + li) as usize] * g2[(k - i + li) as usize];
                    }
                    s
                })
                .collect())
        }
        m => {
            let n = (m * (2 * l + 1)).max(2 * band + 2).next_power_of_two();
            let mut acc = alloc::vec![Complex::new(1.0, 0.0); n];
            for f in &factors {
                let mut buf = alloc::vec![ZERO; n];
                buf[0] = f[0];
                for k in 1..=l {
                    buf[k] = f[k];
                    buf[n - k] = f[k].conj();
                }
                fft_in_place(&mut buf, false);
                for (a, b) in acc.iter_mut().zip(&buf) {
                    *a *= b;
                }
            }
            fft_in_place(&mut acc, true);
            Ok(acc[..=band].to_vec())
        }
    }
}

/// `Σ_j e_j h_{k−j}` for `k = 0..=n_max`, both sequences Hermitian.
fn convolve_with_analytic(e: &[Complex], h: &[Complex], n_max: usize) -> Vec<Complex> {
    let le = e.len() as i64 - 1;
    (0..=n_max as i64)
        .map(|k| {
            let mut s = ZERO;
            for j in -le..=le {
                s += two_sided(e, j) * two_sided(h, k - j);
            }
            s
        })
        .collect()
}

fn max_diff(a: &[Complex], b: &[Complex]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

const MAX_BAND: usize = 1 << 17;

/// Fourier coefficients `f_k`, `|k| ≤ n_max`, of the full symbol.
///
/// `tol` bounds the error of every coefficient relative to `f_0`. With at most
/// one singularity the coefficients are exact up to rounding; otherwise the
/// truncation band of the factor sequences starts at `max(4·n_max, 64)` and is
/// doubled until the estimated truncation error (extrapolated from the
/// observed decay of successive differences) meets `tol`.
pub fn fourier_coeffs(sym: &FhSymbol, n_max: usize, tol: f64) -> Result<CoeffTable> {
    check_n(n_max)?;
    if !(tol > 0.0) {
        return Err(crate::error::invalid("tol must be positive"));
    }
    let e = analytic_coeffs(sym);
    let sings = sym.singularities();
    let band = n_max + e.len() - 1;
    if sings.len() <= 1 {
        let h = if sings.is_empty() {
            let mut h = alloc::vec![ZERO; band + 1];
            h[0] = Complex::new(1.0, 0.0);
            h
        } else {
            singular_product(sings, band, band)?
        };
        let coeffs = convolve_with_analytic(&e, &h, n_max);
        return CoeffTable::from_nonnegative(coeffs, tol);
    }

    // Trigonometric polynomials multiply exactly once l covers every support.
    if let Some(l) = sings.iter().map(finite_support).try_fold(0, |m, s| s.map(|s| m.max(s))) {
        let coeffs = convolve_with_analytic(&e, &singular_product(sings, band, l.max(1))?, n_max);
        return CoeffTable::from_nonnegative(coeffs, tol);
    }

    let mut l = (4 * n_max).max(64).max(band);
    let mut prev = convolve_with_analytic(&e, &singular_product(sings, band, l)?, n_max);
    let mut last_diff: Option<f64> = None;
    loop {
        if 2 * l > MAX_BAND {
            let f0 = prev[0].re.abs();
            let attainable = last_diff.unwrap_or(f64::INFINITY) / f0;
            return Err(Error::ToleranceNotAchievable {
                requested: tol,
                attainable,
            });
        }
        l *= 2;
        let cur = convolve_with_analytic(&e, &singular_product(sings, band, l)?, n_max);
        let d = max_diff(&prev, &cur);
        // Successive differences shrink geometrically under algebraic decay;
        // the remaining error is d·r/(1−r).
        let r = match last_diff {
            Some(d0) if d0 > 0.0 => (d / d0).clamp(1e-3, 0.9),
            _ => 0.5,
        };
        let est = d * r / (1.0 - r);
        let f0 = cur[0].re;
        if !(f0 > 0.0) {
            return Err(Error::InvalidSymbol("f_0 is not positive".into()));
        }
        if est <= tol * f0 {
            let mut t = CoeffTable::from_nonnegative(cur, tol)?;
            t.err_est = est;
            return Ok(t);
        }
        last_diff = Some(d);
        prev = cur;
    }
}

/// Fourier coefficients by direct quadrature in `θ`: tanh-sinh on every arc
/// between consecutive singularities (the trapezoidal rule when there are
/// none), with the level doubled until all coefficients change by less than
/// `tol·f_0`.
///
/// Cost grows like `n_max` times the number of nodes, so this suits small
/// `n_max` with many singularities, and serves as an independent check of
/// [`fourier_coeffs`].
pub fn fourier_coeffs_quadrature(sym: &FhSymbol, n_max: usize, tol: f64) -> Result<CoeffTable> {
    check_n(n_max)?;
    if !(tol > 0.0) {
        return Err(crate::error::invalid("tol must be positive"));
    }
    let sings = sym.singularities();
    let mut acc = alloc::vec![ZERO; n_max + 1];
    // Adds w·f(θ)·e^{−ikθ} for k = 0..=n_max.
    let add = |acc: &mut [Complex], theta: f64, w: f64| -> Result<()> {
        let fv = sym.eval_side(theta, Side::After)? * w;
        let step = Complex::from_polar(1.0, -theta);
        let mut rot = Complex::new(fv, 0.0);
        for (k, a) in acc.iter_mut().enumerate() {
            if k % 32 == 0 {
                rot = Complex::from_polar(fv, -(k as f64) * theta);
            }
            *a += rot;
            rot *= step;
        }
        Ok(())
    };

    if sings.is_empty() {
        let mut n = (4 * (n_max + sym.analytic().degree()) + 64).next_power_of_two();
        let mut prev: Option<Vec<Complex>> = None;
        loop {
            acc.iter_mut().for_each(|a| *a = ZERO);
            for j in 0..n {
                add(&mut acc, TWO_PI * j as f64 / n as f64, 1.0 / n as f64)?;
            }
            if let Some(p) = &prev {
                let d = max_diff(p, &acc);
                if d <= tol * acc[0].re {
                    break;
                }
            }
            if n > 1 << 22 {
                return Err(Error::ToleranceNotAchievable {
                    requested: tol,
                    attainable: max_diff(prev.as_deref().unwrap_or(&acc), &acc) / acc[0].re,
                });
            }
            prev = Some(acc.clone());
            n *= 2;
        }
        return CoeffTable::from_nonnegative(acc, tol);
    }

    // Arcs [t_j, t_{j+1}] and the wrap-around arc.
    let m = sings.len();
    let arcs: Vec<(f64, f64)> = (0..m)
        .map(|j| {
            let a = sings[j].t;
            let b = if j + 1 < m { sings[j + 1].t } else { sings[0].t + TWO_PI };
            (a, b)
        })
        .collect();
    const T_MAX: f64 = 4.0;
    // Node pair at ±τ on arc (a, b): endpoint offsets 2h/(e^{2s}+1).
    let pair = |acc: &mut [Complex], a: f64, b: f64, tau: f64, step: f64| -> Result<()> {
        let h = 0.5 * (b - a);
        let s = 0.5 * PI * tau.sinh();
        let ch = s.cosh();
        let w = h * 0.5 * PI * tau.cosh() / (ch * ch) * step / TWO_PI;
        if tau == 0.0 {
            return add(acc, a + h, w);
        }
        let off = 2.0 * h / ((2.0 * s).exp() + 1.0);
        if off > 0.0 && a + off > a {
            add(acc, a + off, w)?;
        }
        if off > 0.0 && b - off < b {
            add(acc, b - off, w)?;
        }
        Ok(())
    };
    // Running sums of f·e^{−ikθ} without the step factor, per level.
    let mut step = 0.25;
    let mut raw = alloc::vec![ZERO; n_max + 1];
    for &(a, b) in &arcs {
        pair(&mut raw, a, b, 0.0, 1.0)?;
        let mut k = 1;
        while k as f64 * step <= T_MAX {
            pair(&mut raw, a, b, k as f64 * step, 1.0)?;
            k += 1;
        }
    }
    let mut prev: Vec<Complex> = raw.iter().map(|c| c * step).collect();
    let mut level = 2;
    loop {
        step *= 0.5;
        level += 1;
        for &(a, b) in &arcs {
            let mut k = 1;
            while k as f64 * step <= T_MAX {
                pair(&mut raw, a, b, k as f64 * step, 1.0)?;
                k += 2;
            }
        }
        let cur: Vec<Complex> = raw.iter().map(|c| c * step).collect();
        let d = max_diff(&prev, &cur);
        let f0 = cur[0].re;
        if level >= 5 && d <= tol * f0 {
            let mut t = CoeffTable::from_nonnegative(cur, tol)?;
            t.err_est = d;
            return Ok(t);
        }
        if level >= 13 {
            return Err(Error::ToleranceNotAchievable {
                requested: tol,
                attainable: d / f0,
            });
        }
        prev = cur;
    }
}
