//! Circular Selberg integrals and their `ε`-regularized versions.
//!
//! The pair kernel is `|e^{it_j} − e^{it_k}|_ε^{−2α²}` with
//! `|e^{it_j} − e^{it_k}|_ε = 2(sin|Δ/2| + ε)`, so that `ε = 0` gives the
//! Selberg integral `(2π)^m Γ(1−mα²)/Γ(1−α²)^m` exactly.

use super::fit::linear_fit;
use super::{mean_se, rng_stream, uniform, MCEstimate, RegimeTag};
use crate::specfun::ln_gamma;
use crate::symbol::{circle_distance, TWO_PI};
use crate::{Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// `(2π)^m Γ(1−mα²)/Γ(1−α²)^m`, defined for `mα² < 1` (critical values
/// within the [`RegimeTag::classify`] tolerance count as divergent).
pub fn selberg_i0(m: u32, alpha: f64) -> Result<f64> {
    if m == 0 || !alpha.is_finite() {
        return Err(crate::error::invalid("selberg_i0 needs m >= 1 and finite alpha"));
    }
    let a2 = alpha * alpha;
    let ma2 = m as f64 * a2;
    if RegimeTag::classify(m, alpha) != RegimeTag::Subcritical {
        return Err(Error::Divergent(ma2));
    }
    let mf = m as f64;
    Ok((mf * TWO_PI.ln() + ln_gamma(1.0 - ma2)? - mf * ln_gamma(1.0 - a2)?).exp())
}

/// Weight of the uniform component in the importance-sampling proposal.
const IS_UNIFORM_WEIGHT: f64 = 0.2;
/// At `ε = 0`, importance sampling is used once `2α²` reaches this.
const IS_THRESHOLD: f64 = 0.4;

/// Circle distance floored away from 0, so that a proposal that rounds onto an
/// earlier angle gives a large finite weight instead of `∞/∞`.
fn gap(a: f64, b: f64) -> f64 {
    circle_distance(a, b).max(1e-300)
}

fn log_kernel(ts: &[f64], a2: f64, eps: f64) -> f64 {
    let mut s = 0.0;
    for j in 0..ts.len() {
        for k in j + 1..ts.len() {
            s += (2.0 * ((0.5 * gap(ts[j], ts[k])).sin() + eps)).ln();
        }
    }
    -2.0 * a2 * s
}

/// Monte Carlo estimate of
/// `∫_{[0,2π)^m} ∏_{j<k} (2(sin|Δ_jk/2| + ε))^{−2α²} dt`.
///
/// Rotation invariance fixes `t_1 = 0`. The other angles are uniform, except
/// at `ε = 0` with `2α² ≥ 0.4`, where each `t_k` is drawn near a random earlier
/// angle with density `∝ |Δ|^{−2α²}` (mixed with a uniform component) and
/// reweighted.
pub fn i_eps_mc(m: u32, alpha: f64, eps: f64, samples: u64, seed: u64) -> Result<MCEstimate> {
    if m == 0 || !alpha.is_finite() || !(eps >= 0.0) || !eps.is_finite() {
        return Err(crate::error::invalid(
            "i_eps_mc needs m >= 1, finite alpha and eps >= 0",
        ));
    }
    if samples < 1000 {
        return Err(crate::error::invalid("i_eps_mc needs at least 1000 samples"));
    }
    let a2 = alpha * alpha;
    if eps == 0.0 && m as f64 * a2 >= 1.0 {
        return Err(Error::Divergent(m as f64 * a2));
    }
    let gamma = 2.0 * a2;
    let importance = eps == 0.0 && m >= 2 && gamma >= IS_THRESHOLD;
    let mut rng = rng_stream(seed, 0);
    let mut ts = alloc::vec![0.0; m as usize];
    let mut w = Vec::with_capacity(samples as usize);
    for _ in 0..samples {
        let mut log_q = 0.0;
        for k in 1..m as usize {
            if importance {
                if uniform(&mut rng) < IS_UNIFORM_WEIGHT {
                    ts[k] = TWO_PI * uniform(&mut rng);
                } else {
                    let anchor = ts[((uniform(&mut rng) * k as f64) as usize).min(k - 1)];
                    let d = PI * uniform(&mut rng).powf(1.0 / (1.0 - gamma));
                    let d = if uniform(&mut rng) < 0.5 { d } else { -d };
                    ts[k] = crate::symbol::wrap_angle(anchor + d);
                }
                let p: f64 = ts[..k]
                    .iter()
                    .map(|&a| {
                        let d = gap(ts[k], a);
                        (1.0 - gamma) * d.powf(-gamma) / (2.0 * PI.powf(1.0 - gamma))
                    })
                    .sum::<f64>()
                    / k as f64;
                log_q += (IS_UNIFORM_WEIGHT / TWO_PI + (1.0 - IS_UNIFORM_WEIGHT) * p).ln();
            } else {
                ts[k] = TWO_PI * uniform(&mut rng);
            }
        }
        w.push((log_kernel(&ts, a2, eps) - log_q).exp());
    }
    // Uniform sampling leaves the volume (2π)^m as a plain factor.
    let scale = if importance { TWO_PI } else { TWO_PI.powi(m as i32) };
    let (mean, se) = mean_se(&w);
    Ok(MCEstimate {
        value: scale * mean,
        std_err: scale * se,
        samples,
        seed,
    })
}

/// Result of [`scaling_fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub regime: RegimeTag,
    /// Supercritical: slope of `log I_ε` against `log ε`.
    /// Critical: slope of `I_ε` against `log(1/ε)`.
    pub slope: f64,
    pub slope_err: f64,
    pub r2: f64,
    /// Expected slope `(m−1)(1−mα²)` (supercritical only).
    pub expected: Option<f64>,
    pub estimates: Vec<MCEstimate>,
}

/// Fits the small-`ε` growth of `I_ε` over `eps_grid`. All grid points share
/// `seed`, so the fitted slope is not dominated by independent noise.
pub fn scaling_fit(m: u32, alpha: f64, eps_grid: &[f64], samples: u64, seed: u64) -> Result<ScalingFit> {
    let regime = RegimeTag::classify(m, alpha);
    if regime == RegimeTag::Subcritical {
        return Err(Error::RegimeMismatch("I_eps stays bounded when m*alpha^2 < 1"));
    }
    if eps_grid.len() < 2 || eps_grid.iter().any(|&e| !(e > 0.0)) {
        return Err(crate::error::invalid(
            "scaling_fit needs two or more positive eps values",
        ));
    }
    let estimates = eps_grid
        .iter()
        .map(|&e| i_eps_mc(m, alpha, e, samples, seed))
        .collect::<Result<Vec<_>>>()?;
    let (x, y): (Vec<f64>, Vec<f64>) = match regime {
        RegimeTag::Critical => eps_grid.iter().zip(&estimates).map(|(e, s)| (-e.ln(), s.value)).unzip(),
        _ => eps_grid
            .iter()
            .zip(&estimates)
            .map(|(e, s)| (e.ln(), s.value.ln()))
            .unzip(),
    };
    let f = linear_fit(&x, &y)?;
    let expected = match regime {
        RegimeTag::Supercritical => Some((m as f64 - 1.0) * (1.0 - m as f64 * alpha * alpha)),
        _ => None,
    };
    Ok(ScalingFit {
        regime,
        slope: f.slope,
        slope_err: f.slope_err,
        r2: f.r2,
        expected,
        estimates,
    })
}
