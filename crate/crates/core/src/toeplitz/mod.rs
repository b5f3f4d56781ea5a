//! Exact `log D_n(f)` for Hermitian Toeplitz matrices `(f_{j−k})`.
//!
//! [`logdet_levinson`] runs the Szegő recursion for the monic orthogonal
//! polynomials `Φ_j` of the weight `f`. Its prediction errors
//! `E_j = ‖Φ_j‖² = D_{j+1}/D_j` give `D_n = ∏ E_j` and the leading
//! coefficients `χ_j = E_j^{−1/2}` of the orthonormal polynomials.
//! [`logdet_reference`] is a dense Cholesky factorization used as an
//! independent check.

mod dd;

use crate::symbol::CoeffTable;
use crate::{Complex, Error, Result};
use alloc::vec::Vec;
use dd::{Cdd, Dd};
#[allow(unused_imports)]
use num_traits::Float;

/// Breakdown threshold for prediction errors and pivots.
const TINY: f64 = 1e-300;
/// `min_step / f_0` below this switches to the double-double kernel.
pub const DD_THRESHOLD: f64 = 1e-10;
/// Largest order accepted by [`logdet_reference`].
pub const REFERENCE_MAX_N: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Levinson,
    CholeskyReference,
}

/// Arithmetic used by the Levinson kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// Double precision, rerun in double-double if `min_step/f_0 < 1e−10`.
    #[default]
    Auto,
    Double,
    DoubleDouble,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetResult {
    pub n: usize,
    pub log_det: f64,
    /// `log χ_j`, `j = 0..n−1`.
    pub log_chi: Vec<f64>,
    pub method: Method,
    /// Smallest prediction error (Levinson) or squared pivot (Cholesky).
    pub min_step: f64,
    /// Whether the double-double kernel produced the result.
    pub double_double: bool,
}

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn check_order(coeffs: &CoeffTable, n: usize) -> Result<()> {
    if n == 0 {
        return Err(crate::error::invalid("n must be at least 1"));
    }
    if coeffs.n_max() + 1 < n {
        return Err(crate::error::invalid(alloc::format!(
            "order {n} needs coefficients up to |k| = {}, table has {}",
            n - 1,
            coeffs.n_max()
        )));
    }
    Ok(())
}

/// `log D_n` and the `χ_j` ladder in `O(n²)`; see [`logdet_levinson_with`].
pub fn logdet_levinson(coeffs: &CoeffTable, n: usize) -> Result<DetResult> {
    logdet_levinson_with(coeffs, n, Precision::Auto)
}

/// `log D_n` and the `χ_j` ladder with an explicit precision policy.
pub fn logdet_levinson_with(coeffs: &CoeffTable, n: usize, precision: Precision) -> Result<DetResult> {
    check_order(coeffs, n)?;
    let f0 = coeffs.f0();
    if !(f0 > TINY) {
        return Err(Error::Breakdown { step: 0, value: f0 });
    }
    let (steps, double_double) = match precision {
        Precision::DoubleDouble => (levinson_dd(coeffs, n)?, true),
        _ => {
            let steps = levinson_f64(coeffs, n)?;
            let min = steps.iter().fold(f64::INFINITY, |m, e| m.min(e.0));
            if precision == Precision::Auto && min / f0 < DD_THRESHOLD {
                (levinson_dd(coeffs, n)?, true)
            } else {
                (steps, false)
            }
        }
    };
    let mut total = KahanSum::default();
    let mut log_chi = Vec::with_capacity(n);
    let mut min_step = f64::INFINITY;
    for &(hi, lo) in &steps {
        let l = hi.ln() + lo / hi;
        total.add(l);
        log_chi.push(-0.5 * l);
        min_step = min_step.min(hi);
    }
    Ok(DetResult {
        n,
        log_det: total.value(),
        log_chi,
        method: Method::Levinson,
        min_step,
        double_double,
    })
}

/// Prediction errors `E_0..E_{n−1}` as `(hi, 0)` pairs.
fn levinson_f64(coeffs: &CoeffTable, n: usize) -> Result<Vec<(f64, f64)>> {
    let f = coeffs.nonnegative();
    // f_{−k} = conj(f_k)
    let fm = |k: usize| f[k].conj();
    let mut e = f[0].re;
    let mut out = Vec::with_capacity(n);
    out.push((e, 0.0));
    let mut c: Vec<Complex> = Vec::with_capacity(n);
    c.push(Complex::new(1.0, 0.0));
    let mut next: Vec<Complex> = Vec::with_capacity(n);
    for j in 0..n - 1 {
        let mut acc = Complex::new(0.0, 0.0);
        for (i, ci) in c.iter().enumerate() {
            acc += ci * fm(i + 1);
        }
        let g = acc / e;
        let gn = g.norm();
        let factor = (1.0 - gn) * (1.0 + gn);
        let e_next = e * factor;
        if !(e_next > TINY) || !e_next.is_finite() {
            return Err(Error::Breakdown {
                step: j + 1,
                value: e_next,
            });
        }
        // c'_q = c_{q−1} − g·conj(c_{j−q}), q = 0..=j+1.
        next.clear();
        next.push(-g * c[j].conj());
        for q in 1..=j {
            next.push(c[q - 1] - g * c[j - q].conj());
        }
        next.push(c[j]);
        core::mem::swap(&mut c, &mut next);
        e = e_next;
        out.push((e, 0.0));
    }
    Ok(out)
}

/// As [`levinson_f64`] in double-double arithmetic; returns `(hi, lo)`.
fn levinson_dd(coeffs: &CoeffTable, n: usize) -> Result<Vec<(f64, f64)>> {
    let f: Vec<Cdd> = coeffs
        .nonnegative()
        .iter()
        .map(|c| Cdd::from_c64(c.re, -c.im))
        .collect();
    let one = Dd::from_f64(1.0);
    let mut e = Dd::from_f64(coeffs.f0());
    let mut out = Vec::with_capacity(n);
    out.push((e.hi, e.lo));
    let mut c: Vec<Cdd> = Vec::with_capacity(n);
    c.push(Cdd::from_c64(1.0, 0.0));
    let mut next: Vec<Cdd> = Vec::with_capacity(n);
    for j in 0..n - 1 {
        let mut acc = Cdd::ZERO;
        for (i, ci) in c.iter().enumerate() {
            acc = acc + *ci * f[i + 1];
        }
        let inv_e = one / e;
        let g = acc.scale(inv_e);
        let e_next = e * (one - g.norm_sqr());
        if !(e_next.hi > TINY) || !e_next.hi.is_finite() {
            return Err(Error::Breakdown {
                step: j + 1,
                value: e_next.to_f64(),
            });
        }
        next.clear();
        next.push(Cdd::ZERO - g * c[j].conj());
        for q in 1..=j {
            next.push(c[q - 1] - g * c[j - q].conj());
        }
        next.push(c[j]);
        core::mem::swap(&mut c, &mut next);
        e = e_next;
        out.push((e.hi, e.lo));
    }
    Ok(out)
}

/// `log D_n` by dense Hermitian Cholesky factorization, `O(n³)`, `n ≤ 2048`.
pub fn logdet_reference(coeffs: &CoeffTable, n: usize) -> Result<f64> {
    Ok(cholesky(coeffs, n)?.log_det)
}

/// As [`logdet_reference`], returning the full result (with `log χ_j`
/// computed from the pivots: `D_{j+1}/D_j = L_jj²`).
pub fn cholesky(coeffs: &CoeffTable, n: usize) -> Result<DetResult> {
    check_order(coeffs, n)?;
    if n > REFERENCE_MAX_N {
        return Err(crate::error::invalid(alloc::format!(
            "reference determinant limited to n <= {REFERENCE_MAX_N}"
        )));
    }
    // Row-major lower triangle of T_{jk} = f_{j−k}, overwritten by L.
    let mut a = alloc::vec![Complex::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..=j {
            a[j * n + k] = coeffs.get(j as i64 - k as i64);
        }
    }
    let mut total = KahanSum::default();
    let mut log_chi = Vec::with_capacity(n);
    let mut min_step = f64::INFINITY;
    for j in 0..n {
        let mut d = a[j * n + j].re;
        for k in 0..j {
            d -= a[j * n + k].norm_sqr();
        }
        if !(d > TINY) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: j, value: d });
        }
        let ljj = d.sqrt();
        a[j * n + j] = Complex::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k].conj();
            }
            a[i * n + j] = s / ljj;
        }
        let l = d.ln();
        total.add(l);
        log_chi.push(-0.5 * l);
        min_step = min_step.min(d);
    }
    Ok(DetResult {
        n,
        log_det: total.value(),
        log_chi,
        method: Method::CholeskyReference,
        min_step,
        double_double: false,
    })
}

/// `log χ_{n−1}`, the last rung of the ladder for order `n`.
pub fn chi_tail(result: &DetResult, n: usize) -> Result<f64> {
    if n == 0 || n > result.n {
        return Err(crate::error::invalid(alloc::format!(
            "chi_tail order {n} outside 1..={}",
            result.n
        )));
    }
    Ok(result.log_chi[n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{fourier_coeffs, FhSymbol};
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    fn table(c: &[f64]) -> CoeffTable {
        CoeffTable::from_nonnegative(c.iter().map(|&x| Complex::new(x, 0.0)).collect(), 0.0).unwrap()
    }

    #[test]
    fn identity() {
        let mut c = alloc::vec![0.0; 16];
        c[0] = 1.0;
        let t = table(&c);
        let r = logdet_levinson(&t, 8).unwrap();
        assert_eq!(r.log_det, 0.0);
        assert!(r.log_chi.iter().all(|&x| x == 0.0));
        assert_eq!(logdet_reference(&t, 16).unwrap(), 0.0);
    }

    #[test]
    fn tridiagonal() {
        let t = table(&[2.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_abs_diff_eq!(logdet_levinson(&t, 5).unwrap().log_det, 6f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(logdet_reference(&t, 9).unwrap(), 10f64.ln(), epsilon = 1e-14);
        let dd = logdet_levinson_with(&t, 9, Precision::DoubleDouble).unwrap();
        assert!(dd.double_double);
        assert_abs_diff_eq!(dd.log_det, 10f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn d1_is_f0() {
        let s = FhSymbol::pure_root(0.5).unwrap();
        let t = fourier_coeffs(&s, 1, 1e-12).unwrap();
        let r = logdet_levinson(&t, 1).unwrap();
        assert_eq!(r.log_det, t.f0().ln());
        assert_abs_diff_eq!(r.log_det, (4.0 / PI).ln(), epsilon = 1e-15);
    }

    #[test]
    fn ladder_sums_to_log_det() {
        let s = FhSymbol::pure_root(0.7).unwrap();
        let t = fourier_coeffs(&s, 40, 1e-12).unwrap();
        let r = logdet_levinson(&t, 40).unwrap();
        let sum: f64 = r.log_chi.iter().sum();
        assert_abs_diff_eq!(r.log_det, -2.0 * sum, epsilon = 1e-12);
        assert_abs_diff_eq!(chi_tail(&r, 40).unwrap(), r.log_chi[39]);
        assert!(chi_tail(&r, 41).is_err());
        assert!(chi_tail(&r, 0).is_err());
    }

    #[test]
    fn not_positive_definite() {
        // f = (1, 0.8, −0.9) gives an indefinite 3x3 matrix.
        let t = table(&[1.0, 0.8, -0.9]);
        assert!(matches!(
            logdet_reference(&t, 3),
            Err(Error::NotPositiveDefinite { pivot: 2, .. })
        ));
        assert!(matches!(logdet_levinson(&t, 3), Err(Error::Breakdown { step: 2, .. })));
    }

    #[test]
    fn order_checks() {
        let t = table(&[1.0, 0.1]);
        assert!(logdet_levinson(&t, 3).is_err());
        assert!(logdet_levinson(&t, 0).is_err());
    }
}
