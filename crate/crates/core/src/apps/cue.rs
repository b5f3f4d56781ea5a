//! Moments of `X_n(α) = (1/2π)∫|P_n(e^{it})|^{2α} dt` for the CUE
//! characteristic polynomial `P_n`.
//!
//! `E[X_n(α)^m]` is the average over `t_1..t_m` of `D_n(∏_j |z − e^{it_j}|^{2α})`.
//! For `m = 1` rotation invariance leaves a single determinant; for `m = 2`
//! it leaves a one-dimensional integral over the gap `t`.

use super::{rng_stream, uniform, MCEstimate, RegimeTag};
use crate::specfun::{integrate_1d, ln_barnes_g, ln_gamma, Hint, QuadratureSpec};
use crate::symbol::{fourier_coeffs, AnalyticPart, FhSymbol, Singularity, TWO_PI};
use crate::toeplitz::logdet_levinson;
use crate::{Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// Relative accuracy requested from the Fourier coefficients inside integrals.
const COEFF_TOL: f64 = 1e-11;
/// The gap integral is split at `GAP_SPLIT/n`, with geometric panels below.
const GAP_SPLIT: f64 = 8.0;
const GAP_LEVELS: i32 = 12;

pub(crate) fn det_of_roots(n: usize, sings: Vec<Singularity>) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    let sym = FhSymbol::new(AnalyticPart::zero(), sings)?;
    let c = fourier_coeffs(&sym, (n - 1).max(1), COEFF_TOL)?;
    Ok(logdet_levinson(&c, n)?.log_det.exp())
}

/// `(1/π)∫_0^π D_n(|z−1|^{2α}|z−e^{it}|^{2α}) dt`.
///
/// `D_n` varies on the scale `1/n` near `t = 0`, so `[0, 8/n]` is cut into
/// geometric panels `[2^{−j−1}, 2^{−j}]·8/n`; only the innermost one, which
/// touches the merging point, gets endpoint-clustered nodes.
pub(crate) fn gap_average(n: usize, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    if n == 0 || alpha == 0.0 {
        return Ok(1.0);
    }
    let scale = (GAP_SPLIT / n as f64).min(PI / 2.0);
    let mut cuts: Vec<f64> = (0..=GAP_LEVELS).rev().map(|j| scale * 0.5f64.powi(j)).collect();
    cuts.insert(0, 0.0);
    cuts.push(PI);
    let mut failure = None;
    let mut total = 0.0;
    for (i, w) in cuts.windows(2).enumerate() {
        let hints = if i == 0 {
            alloc::vec![Hint::new(0.0, 0.0)]
        } else {
            Vec::new()
        };
        let (v, _) = integrate_1d(
            |t| match det_of_roots(
                n,
                alloc::vec![Singularity::root(0.0, alpha), Singularity::root(t, alpha)],
            ) {
                Ok(d) => d,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            w[0],
            w[1],
            &hints,
            spec,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        total += v;
    }
    Ok(total / PI)
}

/// `E[X_n(α)^m]` for `m ∈ {1, 2}` by Toeplitz determinants.
pub fn xn_moment_exact(n: usize, m: u32, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    if n == 0 || !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(crate::error::invalid("xn_moment_exact needs n >= 1 and alpha >= 0"));
    }
    match m {
        1 if alpha == 0.0 => Ok(1.0),
        1 => det_of_roots(n, alloc::vec![Singularity::root(0.0, alpha)]),
        2 => gap_average(n, alpha, spec),
        _ => Err(crate::error::invalid("xn_moment_exact supports m = 1 and m = 2")),
    }
}

/// `C_m(α) = m log[G(1+α)²/(G(1+2α)Γ(1−α²))] + log Γ(1−mα²)` for `mα² < 1`.
pub fn fk_constant(m: u32, alpha: f64) -> Result<f64> {
    if RegimeTag::classify(m, alpha) != RegimeTag::Subcritical {
        return Err(Error::RegimeMismatch("C_m(alpha) needs m*alpha^2 < 1"));
    }
    let a2 = alpha * alpha;
    let one = 2.0 * ln_barnes_g(1.0 + alpha)? - ln_barnes_g(1.0 + 2.0 * alpha)? - ln_gamma(1.0 - a2)?;
    Ok(m as f64 * one + ln_gamma(1.0 - m as f64 * a2)?)
}

/// Leading asymptotics of `log E[X_n(α)^m]` and the regime it belongs to:
/// `mα² log n + C_m(α)`, `log n + log log n`, or `((mα)² + 1 − m) log n`.
/// The last two omit the unknown constant.
pub fn fk_prediction(n: usize, m: u32, alpha: f64) -> Result<(f64, RegimeTag)> {
    if n < 2 || m == 0 || !(alpha > 0.0) {
        return Err(crate::error::invalid("fk_prediction needs n >= 2, m >= 1, alpha > 0"));
    }
    let ln_n = (n as f64).ln();
    let regime = RegimeTag::classify(m, alpha);
    let mf = m as f64;
    let v = match regime {
        RegimeTag::Subcritical => mf * alpha * alpha * ln_n + fk_constant(m, alpha)?,
        RegimeTag::Critical => ln_n + ln_n.ln(),
        RegimeTag::Supercritical => ((mf * alpha).powi(2) + 1.0 - mf) * ln_n,
    };
    Ok((v, regime))
}

/// `X_n(α)` for eigenangles `thetas`.
pub fn xn_sample(thetas: &[f64], alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    let hints: Vec<Hint> = thetas
        .iter()
        .map(|&t| Hint::new(crate::symbol::wrap_angle(t), 2.0 * alpha))
        .collect();
    let (v, _) = integrate_1d(
        |t| {
            let s: f64 = thetas.iter().map(|&th| (2.0 * (0.5 * (t - th)).sin().abs()).ln()).sum();
            (2.0 * alpha * s).exp()
        },
        0.0,
        TWO_PI,
        &hints,
        spec,
    )?;
    Ok(v / TWO_PI)
}

/// Largest `n` accepted by [`cue_mc_moment`].
pub const CUE_MAX_N: usize = 64;
/// Gelman–Rubin `R̂` above this is reported as [`Error::NotMixing`].
pub const RHAT_LIMIT: f64 = 1.2;
const BATCHES_PER_CHAIN: usize = 10;

/// `E[X_n(α)^m]` by Metropolis sampling of the CUE eigenangles.
///
/// Each chain runs `steps` sweeps of single-angle random-walk updates on the
/// log-density `Σ_{i<j} log|e^{iθ_i} − e^{iθ_j}|²`, discards the first fifth,
/// and records `X_n(α)^m` after every sweep. Chain `c` uses stream `c` of the
/// generator keyed by `seed`. The standard error comes from batch means
/// (10 per chain).
pub fn cue_mc_moment(n: usize, m: u32, alpha: f64, chains: usize, steps: usize, seed: u64) -> Result<MCEstimate> {
    if n == 0 || n > CUE_MAX_N {
        return Err(crate::error::invalid("cue_mc_moment needs 1 <= n <= 64"));
    }
    if chains < 4 || m == 0 || !(alpha >= 0.0) {
        return Err(crate::error::invalid(
            "cue_mc_moment needs chains >= 4, m >= 1, alpha >= 0",
        ));
    }
    let burn = steps / 5;
    let kept = steps - burn;
    if kept < BATCHES_PER_CHAIN * 2 {
        return Err(crate::error::invalid("cue_mc_moment needs more steps"));
    }
    let kept = kept - kept % BATCHES_PER_CHAIN;
    // Far below the sampling noise.
    let spec = QuadratureSpec::with_tol(1e-10, 1e-7);
    let half_width = (3.0 * PI / n as f64).min(PI);

    let mut chain_samples: Vec<Vec<f64>> = Vec::with_capacity(chains);
    for c in 0..chains {
        let mut rng = rng_stream(seed, c as u64);
        let offset = TWO_PI * uniform(&mut rng);
        let mut th: Vec<f64> = (0..n).map(|j| offset + TWO_PI * j as f64 / n as f64).collect();
        let mut out = Vec::with_capacity(kept);
        for sweep in 0..burn + kept {
            for i in 0..n {
                let prop = th[i] + half_width * (2.0 * uniform(&mut rng) - 1.0);
                let mut delta = 0.0;
                for (j, &tj) in th.iter().enumerate() {
                    if j != i {
                        delta += 2.0 * ((0.5 * (prop - tj)).sin().abs().ln() - (0.5 * (th[i] - tj)).sin().abs().ln());
                    }
                }
                let u = uniform(&mut rng);
                if delta >= 0.0 || u < delta.exp() {
                    th[i] = crate::symbol::wrap_angle(prop);
                }
            }
            if sweep >= burn {
                out.push(xn_sample(&th, alpha, &spec)?.powi(m as i32));
            }
        }
        chain_samples.push(out);
    }

    let batch = kept / BATCHES_PER_CHAIN;
    let mut batch_means = Vec::with_capacity(chains * BATCHES_PER_CHAIN);
    for s in &chain_samples {
        for b in s.chunks(batch) {
            batch_means.push(b.iter().sum::<f64>() / batch as f64);
        }
    }
    let (value, std_err) = super::mean_se(&batch_means);

    let rhat = gelman_rubin(&chain_samples);
    if rhat > RHAT_LIMIT {
        return Err(Error::NotMixing(rhat));
    }
    Ok(MCEstimate {
        value,
        std_err,
        samples: (chains * kept) as u64,
        seed,
    })
}

/// Potential scale reduction `R̂` of equal-length chains (1 when all chains
/// are constant).
pub(crate) fn gelman_rubin(chains: &[Vec<f64>]) -> f64 {
    let k = chains[0].len() as f64;
    let means: Vec<f64> = chains.iter().map(|c| c.iter().sum::<f64>() / k).collect();
    let w = chains
        .iter()
        .zip(&means)
        .map(|(c, m)| c.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (k - 1.0))
        .sum::<f64>()
        / chains.len() as f64;
    if w == 0.0 {
        return 1.0;
    }
    let grand = means.iter().sum::<f64>() / means.len() as f64;
    let b = k * means.iter().map(|m| (m - grand) * (m - grand)).sum::<f64>() / (means.len() as f64 - 1.0);
    (((k - 1.0) / k * w + b / k) / w).sqrt()
}
