//! Zero-momentum statistics of `n` impenetrable bosons on a ring.
//!
//! `π_{k,n}(0,…,0) = E[N_0(N_0−1)⋯(N_0−k+1)]` equals
//! `(2π)^{−2k}∫ D_{n−k}(∏_{j≤2k}|z − e^{it_j}|) ∏_{r<s≤k}|e^{it_r} − e^{it_s}|
//! ∏_{k<r<s}|e^{it_r} − e^{it_s}| dt` over the `2k`-torus.

use super::cue::gap_average;
use crate::specfun::{integrate_1d, ln_barnes_g, Hint, QuadratureSpec};
use crate::symbol::{CoeffTable, TWO_PI};
use crate::toeplitz::logdet_levinson;
use crate::{Complex, Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

fn chord(a: f64, b: f64) -> f64 {
    2.0 * (0.5 * (a - b)).sin().abs()
}

/// Fourier coefficients `f_0..=f_{m_max}` of `∏_j |e^{iθ} − e^{it_j}|` for an
/// even number of points, in closed form: on each arc between neighbouring
/// points the product is `±∏ 2 sin((θ − t_j)/2)`, a trigonometric polynomial.
fn abs_product_coeffs(ts: &[f64], m_max: usize) -> Result<CoeffTable> {
    let big_j = ts.len();
    if !big_j.is_multiple_of(2) {
        return Err(crate::error::invalid(
            "abs_product_coeffs needs an even number of points",
        ));
    }
    // Half angles need t in [0, 2π).
    let mut cuts: Vec<f64> = ts.iter().map(|&t| if t >= TWO_PI { t - TWO_PI } else { t }).collect();
    // ∏ (a_j w − b_j / w) with w = e^{iθ/2}: p[r] multiplies w^{2r − J}.
    let mut p = vec![Complex::new(1.0, 0.0)];
    for &t in &cuts {
        let a = Complex::from_polar(1.0, -0.5 * t);
        let b = Complex::from_polar(1.0, 0.5 * t);
        let mut next = vec![Complex::new(0.0, 0.0); p.len() + 1];
        for (r, &c) in p.iter().enumerate() {
            next[r + 1] += c * a;
            next[r] -= c * b;
        }
        p = next;
    }
    // (−i)^J
    let phase = match big_j % 4 {
        0 => Complex::new(1.0, 0.0),
        _ => Complex::new(-1.0, 0.0),
    };
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.insert(0, 0.0);
    cuts.push(TWO_PI);
    let half = (big_j / 2) as i64;
    let mut out = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max as i64 {
        let mut acc = Complex::new(0.0, 0.0);
        for (k, w) in cuts.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            // Points above the arc flip the sign of their sine.
            let sign = if (big_j - k).is_multiple_of(2) { 1.0 } else { -1.0 };
            for (r, &c) in p.iter().enumerate() {
                let q = r as i64 - half - m;
                let arc = if q == 0 {
                    Complex::new(b - a, 0.0)
                } else {
                    let qf = q as f64;
                    (Complex::from_polar(1.0, qf * b) - Complex::from_polar(1.0, qf * a)) / Complex::new(0.0, qf)
                };
                acc += c * arc * sign;
            }
        }
        out.push(acc * phase / TWO_PI);
    }
    CoeffTable::from_nonnegative(out, 1e-14)
}

/// `D_{n}` of `∏|z − e^{it_j}|` at four points.
fn det_four(n: usize, ts: [f64; 4]) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    let c = abs_product_coeffs(&ts, (n - 1).max(1))?;
    Ok(logdet_levinson(&c, n)?.log_det.exp())
}

/// Tanh-sinh nodes on `[0, 1]` with step `2^{−level}`: `(offset, weight,
/// from_left)`, where `offset` is the distance to the nearer end. Nodes with
/// `offset < 1/cutoff` are dropped.
fn ts_rule(level: u32, cutoff: f64) -> Vec<(f64, f64, bool)> {
    let h = 0.5f64.powi(level as i32);
    let mut out = vec![(0.5, 0.25 * PI * h, true)];
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let s = 0.5 * PI * t.sinh();
        let e = (2.0 * s).exp();
        let ch = s.cosh();
        let w = 0.25 * PI * h * t.cosh() / (ch * ch);
        if e > cutoff {
            break;
        }
        let off = 1.0 / (e + 1.0);
        out.push((off, w, true));
        out.push((off, w, false));
        k += 1;
    }
    out
}

/// Sums `f(k, x, x − a, b − x)` over the rule on each panel `k = [a, b]`, with both
/// offsets computed from the node without cancellation.
fn ts_sum<F: FnMut(usize, f64, f64, f64) -> Result<f64>>(
    panels: &[(f64, f64)],
    rule: &[(f64, f64, bool)],
    mut f: F,
) -> Result<f64> {
    let mut acc = 0.0;
    for (k, &(a, b)) in panels.iter().enumerate() {
        let len = b - a;
        if len <= 0.0 {
            continue;
        }
        for &(u, w, left) in rule {
            let (da, db) = if left {
                (len * u, len - len * u)
            } else {
                (len - len * u, len * u)
            };
            if da == 0.0 || db == 0.0 {
                continue;
            }
            let x = if left { a + da } else { b - db };
            acc += len * w * f(k, x, da, db)?;
        }
    }
    Ok(acc)
}

/// Pairwise chords of the points `0, t_2, t_3, t_4`.
type Chords = [[f64; 4]; 4];

/// Chords from the circular order of the points (`order[0] = 0`) and the
/// arcs between neighbours; every arc is a sum of gaps, so close points keep
/// their relative accuracy.
fn chords_from_gaps(order: [usize; 4], gaps: [f64; 4]) -> Chords {
    let mut d = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i + 1..4 {
            let inside: f64 = gaps[i..j].iter().sum();
            let outside: f64 = gaps[..i].iter().chain(&gaps[j..]).sum();
            let c = 2.0 * (0.5 * inside.min(outside)).sin();
            d[order[i]][order[j]] = c;
            d[order[j]][order[i]] = c;
        }
    }
    d
}

/// Integrates `g(t, chords)` over the 3-torus `t_1 = 0`, `t_2, t_3, t_4 ∈
/// (0, 2π)`, for `g` symmetric under `t_3 ↔ t_4` and under reflection, with a
/// fixed tanh-sinh tensor rule on panels cut at the earlier points. Chords
/// are exact near coincidences, so `g` may carry inverse powers of them
/// (with `cutoff` large enough that the dropped end mass is negligible).
fn torus3_level<G>(g: &mut G, level: u32, cutoff: f64) -> Result<f64>
where
    G: FnMut(&[f64; 4], &Chords) -> Result<f64>,
{
    let rule = ts_rule(level, cutoff);
    let v = ts_sum(&[(0.0, PI)], &rule, |_, t2, t2_off, _| {
        ts_sum(&[(0.0, t2), (t2, TWO_PI)], &rule, |k3, t3, a3, b3| {
            let low = k3 == 0;
            // t_4 > t_3 by symmetry.
            let inner: &[(f64, f64)] = if low {
                &[(t3, t2), (t2, TWO_PI)]
            } else {
                &[(t3, TWO_PI)]
            };
            ts_sum(inner, &rule, |k4, t4, a4, b4| {
                let t = [0.0, t2, t3, t4];
                let d = if !low {
                    chords_from_gaps([0, 1, 2, 3], [t2_off, a3, a4, b4])
                } else if k4 == 0 {
                    chords_from_gaps([0, 2, 3, 1], [a3, a4, b4, TWO_PI - t2])
                } else {
                    chords_from_gaps([0, 2, 1, 3], [a3, b3, a4, b4])
                };
                g(&t, &d)
            })
        })
    })?;
    Ok(4.0 * v)
}

/// [`torus3_level`] with the level raised from 1 until successive levels
/// agree to the tolerance, as `(value, err_est)`.
fn torus3<G>(mut g: G, spec: &QuadratureSpec, max_level: u32, cutoff: f64) -> Result<(f64, f64)>
where
    G: FnMut(&[f64; 4], &Chords) -> Result<f64>,
{
    let mut prev = torus3_level(&mut g, 1, cutoff)?;
    let mut err = f64::INFINITY;
    for level in 2..=max_level {
        let cur = torus3_level(&mut g, level, cutoff)?;
        err = (cur - prev).abs();
        prev = cur;
        if err <= spec.abs_tol.max(spec.rel_tol * cur.abs()) {
            return Ok((cur, err));
        }
    }
    Err(Error::QuadratureNonConvergence {
        value: prev,
        err_est: err,
        subdivisions: max_level as usize,
    })
}

/// `√(|t_12||t_34| / (|t_13||t_14||t_23||t_24|))`, in logs to survive
/// clustered points.
fn limit_integrand(d: &Chords) -> f64 {
    let l = d[0][1].ln() + d[2][3].ln() - d[0][2].ln() - d[0][3].ln() - d[1][2].ln() - d[1][3].ln();
    (0.5 * l).exp()
}

const PI_K2_MAX_LEVEL: u32 = 5;

/// `π_{k,n}(0,…,0)` for `k ∈ {1, 2}` and `n ≥ k`.
///
/// `k = 1` is a one-dimensional integral over the gap between the two
/// singularities; `k = 2` is a nested three-dimensional quadrature after
/// fixing `t_1 = 0`.
pub fn pi_kn_zero(k: u32, n: usize, spec: &QuadratureSpec) -> Result<f64> {
    if n < k as usize {
        return Err(crate::error::invalid("pi_kn_zero needs n >= k"));
    }
    match k {
        1 => gap_average(n - 1, 0.5, spec),
        2 => {
            let (v, _) = torus3(
                |t, d| Ok(det_four(n - 2, *t)? * d[0][1] * d[2][3]),
                spec,
                PI_K2_MAX_LEVEL,
                1e16,
            )?;
            Ok(v / TWO_PI.powi(3))
        }
        _ => Err(crate::error::invalid("pi_kn_zero supports k = 1 and k = 2")),
    }
}

/// `G(3/2)^{4k}`.
fn g32_power(k: u32) -> Result<f64> {
    Ok((4.0 * k as f64 * ln_barnes_g(1.5)?).exp())
}

/// `lim E[(N_0/√n)^k]` as `(value, err_est)`.
///
/// `k = 1` uses `(√2/π) G(3/2)^4 ∫_0^{π/2} (sin t)^{−1/2} dt`; `k = 2` is
/// [`n0_limit_torus`]. The error estimate is that of the quadrature.
pub fn n0_limit_constant(k: u32) -> Result<(f64, f64)> {
    match k {
        1 => {
            let spec = QuadratureSpec::with_tol(1e-15, 1e-14);
            let (v, e) = integrate_1d(|t| t.sin().powf(-0.5), 0.0, PI / 2.0, &[Hint::new(0.0, -0.5)], &spec)?;
            let c = core::f64::consts::SQRT_2 / PI * g32_power(1)?;
            Ok((c * v, c * e))
        }
        2 => n0_limit_torus(2),
        _ => Err(crate::error::invalid("n0_limit_constant supports k = 1 and k = 2")),
    }
}

/// `G(3/2)^{4k}(2π)^{−2k}∫_{(0,2π)^{2k}} ∏_{r<s≤k}|·| ∏_{k<r<s}|·| / √(∏_{r<s}|·|) dt`,
/// where `|·| = |e^{it_r} − e^{it_s}|`, as `(value, err_est)`.
pub fn n0_limit_torus(k: u32) -> Result<(f64, f64)> {
    match k {
        1 => {
            let spec = QuadratureSpec::with_tol(1e-15, 1e-14);
            // Symmetric about u = π.
            let (v, e) = integrate_1d(|u| chord(0.0, u).powf(-0.5), 0.0, PI, &[Hint::new(0.0, -0.5)], &spec)?;
            let c = 2.0 * g32_power(1)? / TWO_PI;
            Ok((c * v, c * e))
        }
        2 => {
            let spec = QuadratureSpec::with_tol(1e-12, 1e-9);
            let (v, e) = torus3(|_, d| Ok(limit_integrand(d)), &spec, 5, 1e100)?;
            let c = g32_power(2)? / TWO_PI.powi(3);
            Ok((c * v, c * e))
        }
        _ => Err(crate::error::invalid("n0_limit_torus supports k = 1 and k = 2")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn abs_product_coeffs_match_quadrature() {
        use crate::symbol::{fourier_coeffs_quadrature, AnalyticPart, FhSymbol, Singularity};
        let ts = [0.0, 0.4, 2.0, 5.5];
        let sym = FhSymbol::new(
            AnalyticPart::zero(),
            ts.iter().map(|&t| Singularity::root(t, 0.5)).collect(),
        )
        .unwrap();
        let q = fourier_coeffs_quadrature(&sym, 6, 1e-13).unwrap();
        let c = abs_product_coeffs(&ts, 6).unwrap();
        for k in 0..=6 {
            assert!((q.get(k as i64) - c.get(k as i64)).norm() < 1e-11, "k = {k}");
        }
    }

    #[test]
    fn single_particle() {
        let q = QuadratureSpec::default();
        assert_eq!(pi_kn_zero(1, 1, &q).unwrap(), 1.0);
        // Two particles: D_0 = 1 and the average of |1 − e^{it}| twice.
        let q = QuadratureSpec::with_tol(1e-9, 1e-7);
        assert_abs_diff_eq!(pi_kn_zero(2, 2, &q).unwrap(), (4.0 / PI).powi(2), epsilon = 1e-6);
    }

    #[test]
    fn k1_constant_two_ways() {
        let (a, _) = n0_limit_constant(1).unwrap();
        let (b, _) = n0_limit_torus(1).unwrap();
        assert!((a - 1.5426).abs() < 1e-3, "{a}");
        assert_abs_diff_eq!(a, b, epsilon = 1e-10);
    }
}
