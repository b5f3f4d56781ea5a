//! Least squares and extrapolation helpers for convergence studies.

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Ordinary least-squares line `y ≈ intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (0 for two points).
    pub slope_err: f64,
    pub r2: f64,
    /// Residual sum of squares.
    pub rss: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(crate::error::invalid("linear_fit needs two or more (x, y) pairs"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(crate::error::invalid("linear_fit needs distinct x values"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let slope_err = if x.len() > 2 {
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    let r2 = if syy > 0.0 { 1.0 - rss / syy } else { 1.0 };
    Ok(LinearFit {
        slope,
        intercept,
        slope_err,
        r2,
        rss,
    })
}

/// Residual sum of squares of `y ≈ g(x) + c` with the best constant `c`.
pub fn offset_rss(x: &[f64], y: &[f64], g: impl Fn(f64) -> f64) -> f64 {
    let r: alloc::vec::Vec<f64> = x.iter().zip(y).map(|(&a, &b)| b - g(a)).collect();
    let c = r.iter().sum::<f64>() / r.len() as f64;
    r.iter().map(|v| (v - c) * (v - c)).sum()
}

/// Limit of `v(n) = L + c·n^{−rate}` from the last two samples.
pub fn richardson(ns: &[f64], values: &[f64], rate: f64) -> Result<f64> {
    if ns.len() != values.len() || ns.len() < 2 {
        return Err(crate::error::invalid("richardson needs two or more samples"));
    }
    let k = ns.len();
    let (w1, w2) = (ns[k - 2].powf(rate), ns[k - 1].powf(rate));
    if w1 == w2 {
        return Err(crate::error::invalid("richardson needs distinct n"));
    }
    Ok((values[k - 1] * w2 - values[k - 2] * w1) / (w2 - w1))
}
