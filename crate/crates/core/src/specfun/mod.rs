//! Complex log-Gamma, log Barnes G, and 1-D quadrature.
//!
//! Both log functions use the branch that is analytic on `C \ (-∞, 0]` and
//! real on the positive axis. It is built from the principal logarithm along
//! the recurrence chain `z, z+1, …`, so `log_gamma(z+1) = log_gamma(z) + Ln z`
//! holds exactly in that branch.

mod quad;

pub use quad::{gauss_legendre, integrate_1d, Hint, QuadratureSpec, Scheme};

use crate::{Complex, Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;
pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// ζ'(−1)
const ZETA_PRIME_M1: f64 = -0.165_421_143_700_450_93;

/// B_2, B_4, …, B_24.
const BERNOULLI: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const MIN_RE: f64 = -10.0;
const MAX_ABS: f64 = 1e10;
/// Stirling's series is used once `Re z` reaches this.
const GAMMA_SHIFT: f64 = 10.0;
/// The Barnes expansion is in `u = z - 1`; shift until `Re u` reaches this.
const BARNES_SHIFT: f64 = 12.0;

fn check_domain(z: Complex) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite);
    }
    if z.re < MIN_RE || z.norm() > MAX_ABS {
        return Err(Error::OutOfRange { re: z.re, im: z.im });
    }
    Ok(())
}

fn nonpositive_integer(z: Complex) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn small_positive_integer(z: Complex, limit: f64) -> Option<u32> {
    if z.im == 0.0 && z.re >= 1.0 && z.re <= limit && z.re == z.re.round() {
        Some(z.re as u32)
    } else {
        None
    }
}

/// `Σ_{k<n} Ln(z+k)` with the principal log of each factor.
///
/// The modulus is taken from a running product (one rounding per factor
/// instead of one per logarithm); the argument sum is re-anchored to the
/// argument of the product.
fn ln_rising(z: Complex, n: usize) -> Complex {
    let mut prod = Complex::new(1.0, 0.0);
    let mut ln_scale = 0.0;
    let mut arg_sum = 0.0;
    for k in 0..n {
        let w = z + k as f64;
        arg_sum += w.arg();
        prod *= w;
        let m = prod.norm();
        if !(1e-100..=1e100).contains(&m) {
            ln_scale += m.ln();
            prod /= m;
        }
    }
    let arg = prod.arg();
    let wraps = ((arg_sum - arg) / (2.0 * core::f64::consts::PI)).round();
    Complex::new(ln_scale + prod.norm().ln(), arg + wraps * 2.0 * core::f64::consts::PI)
}

/// Stirling series for `log Γ(w)`, `Re w ≥ GAMMA_SHIFT`.
fn stirling(w: Complex) -> Complex {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = Complex::new(0.0, 0.0);
    for (k, b) in BERNOULLI[..11].iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series += term * (b / (two_k * (two_k - 1.0)));
        term *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series
}

/// Principal-branch `log Γ(z)`.
///
/// Supported for `Re z ≥ −10` and `|z| ≤ 1e10`.
pub fn log_gamma(z: Complex) -> Result<Complex> {
    check_domain(z)?;
    if nonpositive_integer(z) {
        return Err(Error::GammaPole(z.re));
    }
    if let Some(n) = small_positive_integer(z, 60.0) {
        let s: f64 = (2..n).map(|k| (k as f64).ln()).sum();
        return Ok(Complex::new(s, 0.0));
    }
    let steps = (GAMMA_SHIFT - z.re).ceil().max(0.0) as usize;
    let mut out = stirling(z + steps as f64) - ln_rising(z, steps);
    if z.im == 0.0 && z.re > 0.0 {
        out.im = 0.0;
    }
    Ok(out)
}

/// `log Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    if x <= 0.0 {
        return Err(Error::InvalidArgument(alloc::format!("ln_gamma({x}) needs x > 0")));
    }
    Ok(log_gamma(Complex::new(x, 0.0))?.re)
}

/// `1/Γ(z)`, which is entire; exactly 0 at the poles of Γ.
pub fn rgamma(z: Complex) -> Result<Complex> {
    if nonpositive_integer(z) {
        return Ok(Complex::new(0.0, 0.0));
    }
    Ok((-log_gamma(z)?).exp())
}

/// Principal-branch `log G(z)` of the Barnes G-function.
///
/// Supported for `Re z ≥ −10` and `|z| ≤ 1e10`; the zeros of `G` at
/// `0, −1, −2, …` are reported as [`Error::BarnesZero`].
pub fn log_barnes_g(z: Complex) -> Result<Complex> {
    check_domain(z)?;
    if nonpositive_integer(z) {
        return Err(Error::BarnesZero(z.re));
    }
    if let Some(n) = small_positive_integer(z, 200.0) {
        // log G(n) = Σ_{j=1}^{n-2} (n-1-j) ln j
        let s: f64 = (2..n.saturating_sub(1))
            .map(|j| (n - 1 - j) as f64 * (j as f64).ln())
            .sum();
        return Ok(Complex::new(s, 0.0));
    }
    // G(z+N) = G(z) ∏_{k<N} Γ(z+k), and
    // Σ_{k<N} log Γ(z+k) = N log Γ(z) + Σ_{i<N-1} (N-1-i) Ln(z+i).
    let shift = (BARNES_SHIFT + 1.0 - z.re).ceil().max(0.0) as usize;
    let mut out = barnes_asymptotic(z + shift as f64 - 1.0);
    if shift > 0 {
        let mut chain = Complex::new(0.0, 0.0);
        for i in 0..shift - 1 {
            chain += (z + i as f64).ln() * (shift - 1 - i) as f64;
        }
        out -= log_gamma(z)? * shift as f64 + chain;
    }
    if z.im == 0.0 && z.re > 0.0 {
        out.im = 0.0;
    }
    Ok(out)
}

/// `log G(x)` for real `x > 0`.
pub fn ln_barnes_g(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    if x <= 0.0 {
        return Err(Error::InvalidArgument(alloc::format!("ln_barnes_g({x}) needs x > 0")));
    }
    Ok(log_barnes_g(Complex::new(x, 0.0))?.re)
}

/// Asymptotic expansion of `log G(1+u)` for large `Re u`.
fn barnes_asymptotic(u: Complex) -> Complex {
    let ln_u = u.ln();
    let u2 = u * u;
    let inv2 = u2.inv();
    let mut term = inv2;
    let mut series = Complex::new(0.0, 0.0);
    for k in 1..=10usize {
        let kf = k as f64;
        series += term * (BERNOULLI[k] / (4.0 * kf * (kf + 1.0)));
        term *= inv2;
    }
    u2 * 0.5 * ln_u - u2 * 0.75 + u * (0.5 * LN_2PI) - ln_u / 12.0 + ZETA_PRIME_M1 + series
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn gamma_anchors() {
        assert_eq!(log_gamma(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(log_gamma(c(2.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_abs_diff_eq!(log_gamma(c(0.5, 0.0)).unwrap().re, 0.5 * PI.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(10.0).unwrap(), 362880f64.ln(), epsilon = 1e-13);
        assert_abs_diff_eq!(ln_gamma(0.25).unwrap(), 1.288_022_524_698_077_4, epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(100.5).unwrap(), 361.435_540_467_777_6, epsilon = 1e-11);
    }

    #[test]
    fn gamma_complex_value() {
        // log Γ(1+i) = -0.6509231993018563 - 0.3016403204675331 i
        let v = log_gamma(c(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(v.re, -0.650_923_199_301_856_3, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, -0.301_640_320_467_533_1, epsilon = 1e-14);
    }

    #[test]
    fn gamma_errors() {
        assert_eq!(log_gamma(c(0.0, 0.0)), Err(Error::GammaPole(0.0)));
        assert_eq!(log_gamma(c(-3.0, 0.0)), Err(Error::GammaPole(-3.0)));
        assert_eq!(log_gamma(c(f64::NAN, 0.0)), Err(Error::NonFinite));
        assert!(matches!(log_gamma(c(-11.0, 0.5)), Err(Error::OutOfRange { .. })));
        assert!(matches!(log_gamma(c(2e10, 0.0)), Err(Error::OutOfRange { .. })));
        assert!(ln_gamma(-0.5).is_err());
    }

    #[test]
    fn gamma_negative_real_modulus() {
        // |Γ(-2.5)| = 8√π/15
        let v = log_gamma(c(-2.5, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, (8.0 * PI.sqrt() / 15.0).ln(), epsilon = 1e-13);
    }

    #[test]
    fn rgamma_poles_and_values() {
        assert_eq!(rgamma(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(rgamma(c(-4.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_abs_diff_eq!(rgamma(c(3.0, 0.0)).unwrap().re, 0.5, epsilon = 1e-15);
        // 1/Γ(-1/2) = -1/(2√π)
        let v = rgamma(c(-0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, -0.5 / PI.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn barnes_integers() {
        for z in [1.0, 2.0, 3.0] {
            assert_eq!(log_barnes_g(c(z, 0.0)).unwrap(), c(0.0, 0.0));
        }
        assert_eq!(ln_barnes_g(4.0).unwrap(), 2f64.ln());
        // G(6) = 1!2!3!4! = 288
        assert_abs_diff_eq!(ln_barnes_g(6.0).unwrap(), 288f64.ln(), epsilon = 1e-14);
        assert_eq!(log_barnes_g(c(0.0, 0.0)), Err(Error::BarnesZero(0.0)));
        assert_eq!(log_barnes_g(c(-2.0, 0.0)), Err(Error::BarnesZero(-2.0)));
    }

    #[test]
    fn barnes_half_integers() {
        assert_abs_diff_eq!(
            ln_barnes_g(1.5).unwrap(),
            1.069_222_649_266_413f64.ln(),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(ln_barnes_g(0.5).unwrap(), -0.505_433_054_489_695_3, epsilon = 1e-13);
        let lhs = ln_barnes_g(1.5).unwrap();
        let rhs = ln_gamma(0.5).unwrap() + ln_barnes_g(0.5).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-13);
    }

    #[test]
    fn barnes_large_argument_matches_integer_path() {
        // Non-integer path just next to an integer agrees with the exact sum.
        let n = 30.0;
        let exact = ln_barnes_g(n).unwrap();
        let near = log_barnes_g(c(n, 1e-9)).unwrap().re;
        assert_abs_diff_eq!(exact, near, epsilon = 1e-9 * exact.abs());
    }
}
