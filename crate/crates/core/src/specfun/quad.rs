//! Globally adaptive 1-D quadrature with declared endpoint singularities.
//!
//! The interval is first cut at every hinted singularity. Panels that touch a
//! singular point are integrated with tanh-sinh (level doubling gives the error
//! estimate); all other panels use Gauss–Legendre with 20 nodes checked against
//! 10 nodes. The panel with the largest error estimate is bisected until the
//! total estimate meets the tolerance.

use crate::{Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// Panel rule used by [`integrate_1d`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Gauss–Legendre on regular panels, tanh-sinh on panels touching a hint.
    AdaptivePanel,
    /// Tanh-sinh on every panel.
    TanhSinh,
    /// Gauss–Legendre on every panel (no special endpoint treatment).
    GaussLegendreComposite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::AdaptivePanel,
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_subdivisions < 1 {
            return Err(crate::error::invalid(
                "quadrature tolerances must be positive and max_subdivisions >= 1",
            ));
        }
        Ok(())
    }
}

/// A point where the integrand behaves like `|x − location|^exponent`.
///
/// Only the location is used to place breakpoints; the exponent is checked for
/// integrability. Integrands with a strong singularity away from `0` lose
/// accuracy because nodes cannot get closer to `location` than its ulp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hint {
    pub location: f64,
    pub exponent: f64,
}

impl Hint {
    pub fn new(location: f64, exponent: f64) -> Self {
        Self { location, exponent }
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

struct Rules {
    g20: (Vec<f64>, Vec<f64>),
    g10: (Vec<f64>, Vec<f64>),
}

fn gl_panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, rules: &Rules) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let apply =
        |f: &mut F, (xs, ws): &(Vec<f64>, Vec<f64>)| xs.iter().zip(ws).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h;
    let hi = apply(f, &rules.g20);
    let lo = apply(f, &rules.g10);
    (hi, (hi - lo).abs())
}

const TS_MAX_LEVEL: u32 = 7;
const TS_T_MAX: f64 = 6.5;

/// Tanh-sinh on `[a, b]`, returning `(value, |T_L − T_{L−1}|)`.
fn ts_panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, target: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    // Contribution of the node pair ±t; the distance to the endpoint is
    // 2h/(e^{2s}+1), computed without cancellation.
    let pair = |f: &mut F, t: f64| -> f64 {
        let s = 0.5 * PI * t.sinh();
        let e = (2.0 * s.abs()).exp();
        if !e.is_finite() {
            return 0.0;
        }
        let off = 2.0 * h / (e + 1.0);
        let ch = s.cosh();
        let w = h * 0.5 * PI * t.cosh() / (ch * ch);
        if t == 0.0 {
            return w * f(c);
        }
        let mut acc = 0.0;
        let xr = b - off;
        if xr < b && xr > a {
            acc += w * f(xr);
        }
        let xl = a + off;
        if xl > a && xl < b {
            acc += w * f(xl);
        }
        acc
    };
    let mut step = 0.5;
    let mut sum = pair(f, 0.0);
    let mut k = 1;
    while (k as f64) * step <= TS_T_MAX {
        sum += pair(f, k as f64 * step);
        k += 1;
    }
    let mut prev = sum * step;
    let mut err = f64::INFINITY;
    for _level in 1..=TS_MAX_LEVEL {
        step *= 0.5;
        let mut k = 1;
        while (k as f64) * step <= TS_T_MAX {
            sum += pair(f, k as f64 * step);
            k += 2;
        }
        let cur = sum * step;
        err = (cur - prev).abs();
        prev = cur;
        if err <= target {
            break;
        }
    }
    (prev, err)
}

struct Panel {
    a: f64,
    b: f64,
    sing_a: bool,
    sing_b: bool,
    value: f64,
    err: f64,
}

/// Integrates `f` over `[a, b]`, returning `(value, err_est)`.
///
/// `hints` mark singular or non-smooth points (interior or at the ends); the
/// integrand is never evaluated exactly at them.
pub fn integrate_1d<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    hints: &[Hint],
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    spec.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite);
    }
    for h in hints {
        if !(h.exponent > -1.0) || !h.location.is_finite() {
            return Err(crate::error::invalid(
                "singularity hints need a finite location and exponent > -1",
            ));
        }
    }
    if a == b {
        return Ok((0.0, 0.0));
    }
    if a > b {
        let (v, e) = integrate_1d(f, b, a, hints, spec)?;
        return Ok((-v, e));
    }

    let mut cuts: Vec<f64> = hints.iter().map(|h| h.location).filter(|&x| x > a && x < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let is_hint = |x: f64| hints.iter().any(|h| h.location == x);
    let mut points = Vec::with_capacity(cuts.len() + 2);
    points.push(a);
    points.extend(cuts);
    points.push(b);

    let rules = Rules {
        g20: gauss_legendre(20),
        g10: gauss_legendre(10),
    };
    let tol = |total: f64| spec.abs_tol.max(spec.rel_tol * total.abs());
    let eval = |f: &mut F, a: f64, b: f64, sa: bool, sb: bool, target: f64| -> Panel {
        let use_ts = match spec.scheme {
            Scheme::TanhSinh => true,
            Scheme::AdaptivePanel => sa || sb,
            Scheme::GaussLegendreComposite => false,
        };
        let (value, err) = if use_ts {
            ts_panel(f, a, b, target)
        } else {
            gl_panel(f, a, b, &rules)
        };
        Panel {
            a,
            b,
            sing_a: sa,
            sing_b: sb,
            value,
            err,
        }
    };

    let first_target = 0.1 * spec.abs_tol;
    let mut panels: Vec<Panel> = points
        .windows(2)
        .map(|w| eval(&mut f, w[0], w[1], is_hint(w[0]), is_hint(w[1]), first_target))
        .collect();
    let mut subdivisions = 0;
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if !total.is_finite() {
            return Err(Error::NonFinite);
        }
        if err <= tol(total) {
            return Ok((total, err));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.err > acc.1 { (i, p.err) } else { acc });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if subdivisions >= spec.max_subdivisions || !(mid > p.a && mid < p.b) {
            return Err(Error::QuadratureNonConvergence {
                value: total,
                err_est: err,
                subdivisions,
            });
        }
        subdivisions += 1;
        let target = 0.1 * tol(total) / (panels.len() + 2) as f64;
        panels.push(eval(&mut f, p.a, mid, p.sing_a, false, target));
        panels.push(eval(&mut f, mid, p.b, false, p.sing_b, target));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_over_circle() {
        let (v, _) = integrate_1d(|_| 1.0, 0.0, 2.0 * PI, &[], &QuadratureSpec::default()).unwrap();
        assert_abs_diff_eq!(v, 2.0 * PI, epsilon = 1e-14);
    }

    #[test]
    fn abs_sine() {
        let f = |x: f64| 2.0 * (0.5 * x).sin().abs();
        let hints = [Hint::new(0.0, 1.0), Hint::new(2.0 * PI, 1.0)];
        for scheme in [Scheme::AdaptivePanel, Scheme::TanhSinh, Scheme::GaussLegendreComposite] {
            let spec = QuadratureSpec {
                scheme,
                ..Default::default()
            };
            let (v, _) = integrate_1d(f, 0.0, 2.0 * PI, &hints, &spec).unwrap();
            assert_abs_diff_eq!(v, 8.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn inverse_sqrt_sine() {
        let (v, e) = integrate_1d(
            |t: f64| t.sin().powf(-0.5),
            0.0,
            0.5 * PI,
            &[Hint::new(0.0, -0.5)],
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(v, 2.622_057_554_292_119_8, epsilon = 1e-12);
        assert!(e < 1e-11);
    }

    #[test]
    fn strong_endpoint_singularity() {
        // ∫_0^1 x^{-0.9} dx = 10
        let (v, _) = integrate_1d(
            |x: f64| x.powf(-0.9),
            0.0,
            1.0,
            &[Hint::new(0.0, -0.9)],
            &QuadratureSpec::with_tol(1e-10, 1e-10),
        )
        .unwrap();
        assert_abs_diff_eq!(v, 10.0, epsilon = 1e-9);
    }

    #[test]
    fn interior_kink() {
        let (v, _) = integrate_1d(
            |x: f64| (x - 0.3).abs().sqrt(),
            0.0,
            1.0,
            &[Hint::new(0.3, 0.5)],
            &QuadratureSpec::default(),
        )
        .unwrap();
        let exact = 2.0 / 3.0 * (0.3f64.powf(1.5) + 0.7f64.powf(1.5));
        assert_abs_diff_eq!(v, exact, epsilon = 1e-12);
    }

    #[test]
    fn reversed_interval() {
        let (v, _) = integrate_1d(|x| x, 1.0, 0.0, &[], &QuadratureSpec::default()).unwrap();
        assert_abs_diff_eq!(v, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn polynomial_exactness() {
        // GL20 is exact through degree 39.
        let (x, w) = gauss_legendre(20);
        for deg in [0, 7, 20, 39] {
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            assert_abs_diff_eq!(s, exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn non_convergence_reports_partial_value() {
        let spec = QuadratureSpec {
            max_subdivisions: 3,
            ..QuadratureSpec::with_tol(1e-15, 1e-15)
        };
        let r = integrate_1d(|x: f64| (50.0 * x).sin() * x.sqrt(), 0.0, 10.0, &[], &spec);
        match r {
            Err(Error::QuadratureNonConvergence {
                subdivisions, value, ..
            }) => {
                assert_eq!(subdivisions, 3);
                assert!(value.is_finite());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_spec_rejected() {
        let spec = QuadratureSpec {
            abs_tol: 0.0,
            ..Default::default()
        };
        assert!(integrate_1d(|x| x, 0.0, 1.0, &[], &spec).is_err());
        assert!(integrate_1d(|x| x, 0.0, 1.0, &[Hint::new(0.0, -1.0)], &QuadratureSpec::default()).is_err());
    }
}
