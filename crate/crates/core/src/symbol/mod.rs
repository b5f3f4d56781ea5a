//! Fisher–Hartwig symbols `f(z) = e^{V(z)} ∏_j ω_{α_j,β_j}(z/z_j)` on the unit
//! circle, with `z_j = e^{it_j}`, `α_j ≥ 0` and `β_j = i·beta_im_j`.
//!
//! `ω_{α,β}(z) = (z/e^{iπ})^β |z−1|^{2α}` uses the principal branch, so at
//! `z = e^{iφ}`, `φ ∈ [0, 2π)`, the factor equals
//! `(2|sin(φ/2)|)^{2α} e^{beta_im·(π−φ)}`.

mod coeffs;
mod fft;
pub mod literal;

pub use coeffs::{
    factor_coeff_quadrature, factor_coeffs, fh_factor_coeff, fourier_coeffs, fourier_coeffs_quadrature, CoeffTable,
};
pub(crate) use fft::fft_in_place;

use crate::error::invalid;
use crate::{Complex, Error, Result};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

pub(crate) const TWO_PI: f64 = 2.0 * PI;

/// One singularity `(t, α, β = i·beta_im)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub t: f64,
    pub alpha: f64,
    pub beta_im: f64,
}

impl Singularity {
    pub fn new(t: f64, alpha: f64, beta_im: f64) -> Self {
        Self { t, alpha, beta_im }
    }

    /// Pure root-type singularity `|z − e^{it}|^{2α}`.
    pub fn root(t: f64, alpha: f64) -> Self {
        Self::new(t, alpha, 0.0)
    }

    /// `α² − β² = α² + beta_im²`.
    pub fn strength(&self) -> f64 {
        self.alpha * self.alpha + self.beta_im * self.beta_im
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha == 0.0 && self.beta_im == 0.0
    }

    /// Value of the ω-factor at angle `theta`; `side` picks the one-sided
    /// limit at a jump.
    pub fn factor(&self, theta: f64, side: Side) -> Result<f64> {
        let phi = wrap_angle(theta - self.t);
        if phi == 0.0 {
            if self.alpha > 0.0 {
                return Ok(0.0);
            }
            if self.beta_im == 0.0 {
                return Ok(1.0);
            }
            return match side {
                Side::After => Ok((self.beta_im * PI).exp()),
                Side::Before => Ok((-self.beta_im * PI).exp()),
                Side::Exact => Err(Error::JumpWithoutSide(self.t)),
            };
        }
        let modulus = if self.alpha == 0.0 {
            1.0
        } else {
            (2.0 * (0.5 * phi).sin().abs()).powf(2.0 * self.alpha)
        };
        Ok(modulus * (self.beta_im * (PI - phi)).exp())
    }
}

/// Which one-sided limit to take when evaluating exactly at a jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    /// No limit; evaluating at a jump is an error.
    #[default]
    Exact,
    /// `θ → t⁻`.
    Before,
    /// `θ → t⁺`.
    After,
}

/// Maps an angle into `[0, 2π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TWO_PI);
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// Angular distance `min(|Δ|, 2π−|Δ|)` on the circle.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(TWO_PI - d)
}

/// The smooth part `V`, stored as `V_0` (real) and `V_k` for `k ≥ 1`;
/// `V_{−k} = conj(V_k)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnalyticPart {
    coeffs: Vec<Complex>,
}

impl AnalyticPart {
    pub fn zero() -> Self {
        Self::default()
    }

    /// From `V_0, V_1, …, V_K`.
    pub fn new(v0: f64, positive: &[Complex]) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(positive.len() + 1);
        coeffs.push(Complex::new(v0, 0.0));
        coeffs.extend_from_slice(positive);
        Self::from_nonnegative(coeffs)
    }

    /// From `(k, V_k)` pairs. Negative `k` must agree with the conjugate of
    /// `V_{−k}` when both are given.
    pub fn from_pairs(pairs: &[(i64, Complex)]) -> Result<Self> {
        let k_max = pairs.iter().map(|(k, _)| k.unsigned_abs()).max().unwrap_or(0) as usize;
        let mut coeffs = alloc::vec![None::<Complex>; k_max + 1];
        for &(k, v) in pairs {
            let idx = k.unsigned_abs() as usize;
            let v = if k < 0 { v.conj() } else { v };
            match coeffs[idx] {
                Some(prev) if (prev - v).norm() > 1e-15 * (1.0 + v.norm()) => {
                    return Err(Error::InvalidSymbol(format!(
                        "V_{k} conflicts with V_{}: V must be real on the circle",
                        -k
                    )));
                }
                _ => coeffs[idx] = Some(v),
            }
        }
        Self::from_nonnegative(coeffs.into_iter().map(|c| c.unwrap_or_default()).collect())
    }

    fn from_nonnegative(mut coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(c0) = coeffs.first() {
            if c0.im != 0.0 {
                return Err(Error::InvalidSymbol("V_0 must be real".into()));
            }
        }
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.len() == 1 && coeffs[0].re == 0.0 {
            coeffs.clear();
        }
        Ok(Self { coeffs })
    }

    /// Largest `k` with `V_k ≠ 0` (0 for constant or zero `V`).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn v0(&self) -> f64 {
        self.coeffs.first().map_or(0.0, |c| c.re)
    }

    pub fn coeff(&self, k: i64) -> Complex {
        let c = self.coeffs.get(k.unsigned_abs() as usize).copied().unwrap_or_default();
        if k < 0 {
            c.conj()
        } else {
            c
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `V(e^{iθ})`, real.
    pub fn eval(&self, theta: f64) -> f64 {
        let mut s = self.v0();
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let (sin, cos) = (k as f64 * theta).sin_cos();
            s += 2.0 * (c.re * cos - c.im * sin);
        }
        s
    }

    /// `V_+(z) = Σ_{k≥1} V_k z^k`.
    pub fn v_plus(&self, z: Complex) -> Complex {
        let mut acc = Complex::new(0.0, 0.0);
        for c in self.coeffs.iter().skip(1).rev() {
            acc = (acc + c) * z;
        }
        acc
    }
}

/// A validated Fisher–Hartwig symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct FhSymbol {
    analytic: AnalyticPart,
    sings: Vec<Singularity>,
}

impl FhSymbol {
    /// Validates and builds a symbol. Singularities must have strictly
    /// increasing `t` in `[0, 2π)`, `α ≥ 0`, finite `beta_im`, and must not be
    /// the trivial factor `(α, β) = (0, 0)`.
    pub fn new(analytic: AnalyticPart, sings: Vec<Singularity>) -> Result<Self> {
        Self::build(analytic, sings, false)
    }

    /// As [`FhSymbol::new`] but keeps trivial `(0, 0)` factors, which evaluate
    /// to 1.
    pub fn with_degenerate(analytic: AnalyticPart, sings: Vec<Singularity>) -> Result<Self> {
        Self::build(analytic, sings, true)
    }

    /// The constant symbol 1.
    pub fn constant() -> Self {
        Self {
            analytic: AnalyticPart::zero(),
            sings: Vec::new(),
        }
    }

    /// `|z − 1|^{2α}`.
    pub fn pure_root(alpha: f64) -> Result<Self> {
        Self::new(AnalyticPart::zero(), alloc::vec![Singularity::root(0.0, alpha)])
    }

    fn build(analytic: AnalyticPart, sings: Vec<Singularity>, allow_degenerate: bool) -> Result<Self> {
        for (j, s) in sings.iter().enumerate() {
            if !s.t.is_finite() || !s.alpha.is_finite() || !s.beta_im.is_finite() {
                return Err(Error::NonFinite);
            }
            if !(0.0..TWO_PI).contains(&s.t) {
                return Err(Error::InvalidSymbol(format!("t_{j} = {} is outside [0, 2π)", s.t)));
            }
            if s.alpha < 0.0 {
                return Err(Error::InvalidSymbol(format!("alpha_{j} = {} is negative", s.alpha)));
            }
            if s.is_degenerate() && !allow_degenerate {
                return Err(Error::InvalidSymbol(format!(
                    "singularity {j} has alpha = beta = 0 (degenerate factors must be enabled explicitly)"
                )));
            }
            if j > 0 {
                let prev = sings[j - 1].t;
                if s.t == prev {
                    return Err(Error::CoincidentSingularities(j - 1, j));
                }
                if s.t < prev {
                    return Err(Error::InvalidSymbol(format!("t_{j} = {} is not increasing", s.t)));
                }
            }
        }
        Ok(Self { analytic, sings })
    }

    pub fn analytic(&self) -> &AnalyticPart {
        &self.analytic
    }

    pub fn singularities(&self) -> &[Singularity] {
        &self.sings
    }

    /// The same symbol with every `t_j` shifted by `x` (re-sorted).
    pub fn rotated(&self, x: f64) -> Result<Self> {
        let mut sings: Vec<Singularity> = self
            .sings
            .iter()
            .map(|s| Singularity {
                t: wrap_angle(s.t + x),
                ..*s
            })
            .collect();
        sings.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
        let analytic = self.analytic.clone();
        Self::build(analytic, sings, true)
    }

    /// `f(e^{iθ})`; errors exactly at a jump.
    pub fn eval(&self, theta: f64) -> Result<f64> {
        self.eval_side(theta, Side::Exact)
    }

    /// `f(e^{iθ})` with the given one-sided convention at jumps.
    pub fn eval_side(&self, theta: f64, side: Side) -> Result<f64> {
        if !theta.is_finite() {
            return Err(Error::NonFinite);
        }
        let mut v = self.analytic.eval(theta).exp();
        for s in &self.sings {
            v *= s.factor(theta, side)?;
        }
        Ok(v)
    }
}

/// Validates and builds a symbol; see [`FhSymbol::new`].
pub fn make_symbol(analytic: AnalyticPart, sings: Vec<Singularity>) -> Result<FhSymbol> {
    FhSymbol::new(analytic, sings)
}

/// `f(e^{iθ})`; see [`FhSymbol::eval_side`].
pub fn eval_symbol(sym: &FhSymbol, theta: f64, side: Side) -> Result<f64> {
    sym.eval_side(theta, side)
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    Ok(())
}
