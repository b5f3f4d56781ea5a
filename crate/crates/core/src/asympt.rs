//! Asymptotic predictions for `log D_n` and `log χ_n`.
//!
//! - [`szego_constant`]: `Σ_{k≥1} k V_k V_{−k}`.
//! - [`widom_log_e`], [`widom_prediction`]: the separated-singularity formula
//!   `log D_n ≈ nV_0 + Σ(α_j² − β_j²) log n + log E`.
//! - [`uniform_prediction`]: the uniform main terms, valid when singularities
//!   merge; the pair interaction `2(α_jα_k − β_jβ_k) log(1/(sin(|Δ|/2) + 1/n))`
//!   interpolates between the separated and the coalesced regimes. It carries
//!   no constant term.
//! - [`cluster_partition`], [`hn_correction`], [`phi1_matrix`].

use crate::specfun::{log_barnes_g, log_gamma, rgamma};
use crate::symbol::{circle_distance, AnalyticPart, FhSymbol, Singularity};
use crate::{Complex, Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// Which asymptotic statement a [`Prediction`] comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Fixed, distinct singularities: all terms including `log E`.
    Separated,
    /// Uniform in the positions: main terms only, the `O(1)` is unknown.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub n: usize,
    /// `n V_0`
    pub term_szego: f64,
    /// `Σ_j (α_j² − β_j²) log n`
    pub term_log_n: f64,
    /// Pairwise merging terms (zero in the separated regime, where the
    /// interaction sits inside `log E`).
    pub term_pairs: f64,
    /// `log E`, present only for separated singularities.
    pub const_e: Option<f64>,
    pub regime: Regime,
}

impl Prediction {
    /// Sum of the terms that are present.
    pub fn total(&self) -> f64 {
        self.term_szego + self.term_log_n + self.term_pairs + self.const_e.unwrap_or(0.0)
    }
}

/// `Σ_{k≥1} k |V_k|²`.
pub fn szego_constant(analytic: &AnalyticPart) -> f64 {
    (1..=analytic.degree() as i64)
        .map(|k| k as f64 * analytic.coeff(k).norm_sqr())
        .sum()
}

/// `log E` of the separated-singularity formula.
pub fn widom_log_e(sym: &FhSymbol) -> Result<f64> {
    let v = sym.analytic();
    let s = sym.singularities();
    let mut acc = Complex::new(szego_constant(v), 0.0);
    for sj in s {
        let beta = Complex::new(0.0, sj.beta_im);
        // G(1+α+β) G(1+α−β) = |G(1+α+β)|² for imaginary β.
        let g = log_barnes_g(Complex::new(1.0 + sj.alpha, sj.beta_im))?;
        acc += 2.0 * g.re - log_barnes_g(Complex::new(1.0 + 2.0 * sj.alpha, 0.0))?.re;
        let zj = Complex::from_polar(1.0, sj.t);
        acc += 2.0 * ((beta - sj.alpha) * v.v_plus(zj)).re;
    }
    for j in 0..s.len() {
        for k in j + 1..s.len() {
            let (a, b) = (&s[j], &s[k]);
            let chord = (Complex::from_polar(1.0, a.t) - Complex::from_polar(1.0, b.t)).norm();
            if chord == 0.0 {
                return Err(Error::CoincidentSingularities(j, k));
            }
            // β_jβ_k = −b_j b_k; i(α_jβ_k − α_kβ_j) = −(α_j b_k − α_k b_j).
            acc += 2.0 * (-a.beta_im * b.beta_im - a.alpha * b.alpha) * chord.ln();
            acc -= (b.t - a.t - PI) * (a.alpha * b.beta_im - b.alpha * a.beta_im);
        }
    }
    debug_assert!(acc.im.abs() < 1e-10);
    Ok(acc.re)
}

fn strength_sum(s: &[Singularity]) -> f64 {
    s.iter().map(Singularity::strength).sum()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(crate::error::invalid("n must be at least 1"));
    }
    Ok(())
}

/// `nV_0 + Σ(α_j² − β_j²) log n + log E`.
pub fn widom_prediction(sym: &FhSymbol, n: usize) -> Result<Prediction> {
    check_n(n)?;
    let ln_n = (n as f64).ln();
    Ok(Prediction {
        n,
        term_szego: n as f64 * sym.analytic().v0(),
        term_log_n: strength_sum(sym.singularities()) * ln_n,
        term_pairs: 0.0,
        const_e: Some(widom_log_e(sym)?),
        regime: Regime::Separated,
    })
}

/// The uniform main terms for a validated symbol.
pub fn uniform_prediction(sym: &FhSymbol, n: usize) -> Result<Prediction> {
    uniform_terms(sym.analytic().v0(), sym.singularities(), n)
}

/// The uniform main terms for any list of singularities, coincident points
/// included (a coincident pair contributes `2(α_jα_k − β_jβ_k) log n`).
pub fn uniform_terms(v0: f64, sings: &[Singularity], n: usize) -> Result<Prediction> {
    check_n(n)?;
    let nf = n as f64;
    let mut pairs = 0.0;
    for j in 0..sings.len() {
        for k in j + 1..sings.len() {
            let (a, b) = (&sings[j], &sings[k]);
            let half_sin = (0.5 * circle_distance(a.t, b.t)).sin();
            pairs += 2.0 * (a.alpha * b.alpha + a.beta_im * b.beta_im) * -(half_sin + 1.0 / nf).ln();
        }
    }
    Ok(Prediction {
        n,
        term_szego: nf * v0,
        term_log_n: strength_sum(sings) * nf.ln(),
        term_pairs: pairs,
        const_e: None,
        regime: Regime::Uniform,
    })
}

/// Clusters of singularities under condition `(ε, U, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterPartition {
    /// Index sets (0-based, increasing) into the input angles.
    pub clusters: Vec<Vec<usize>>,
    /// `n · max` within-cluster distance.
    pub eps_n: f64,
    /// `n · min` between-cluster distance (`+∞` for a single cluster).
    pub u_hat_n: f64,
}

/// Partitions sorted angles into clusters if every pairwise distance
/// `|t_k − t_j|` is either `< eps/n` or `≥ u/n`, and the "close" relation is
/// transitive. Returns `None` otherwise.
pub fn cluster_partition(ts: &[f64], eps: f64, u: f64, n: usize) -> Result<Option<ClusterPartition>> {
    check_n(n)?;
    if !(eps > 0.0 && eps < u) {
        return Err(crate::error::invalid("cluster_partition needs 0 < eps < U"));
    }
    if ts.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(crate::error::invalid(
            "cluster_partition needs strictly increasing angles",
        ));
    }
    let nf = n as f64;
    let m = ts.len();
    for j in 0..m {
        for k in j + 1..m {
            let d = nf * (ts[k] - ts[j]);
            if d >= eps && d < u {
                return Ok(None);
            }
        }
    }
    // Sorted input: clusters are runs joined by close neighbours.
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for j in 0..m {
        match clusters.last_mut() {
            Some(c) if nf * (ts[j] - ts[j - 1]) < eps => c.push(j),
            _ => clusters.push(alloc::vec![j]),
        }
    }
    let mut eps_n: f64 = 0.0;
    for c in &clusters {
        let d = nf * (ts[*c.last().unwrap()] - ts[c[0]]);
        if d >= eps {
            return Ok(None);
        }
        eps_n = eps_n.max(d);
    }
    let mut u_hat_n = f64::INFINITY;
    for w in clusters.windows(2) {
        u_hat_n = u_hat_n.min(nf * (ts[w[1][0]] - ts[*w[0].last().unwrap()]));
    }
    Ok(Some(ClusterPartition {
        clusters,
        eps_n,
        u_hat_n,
    }))
}

/// Default `U_0` for [`hn_correction`].
pub const DEFAULT_U0: f64 = 1.0;

/// `H_n = (1/2n) Σ(α_j² − β_j²) + (1/n) Σ_{j<k} (α_jα_k − β_jβ_k)·1[d_jk < U_0/n]`,
/// with `d_jk` the angular distance on the circle.
pub fn hn_correction(sym: &FhSymbol, n: usize, u0: f64) -> Result<f64> {
    check_n(n)?;
    if !(u0 > 0.0) {
        return Err(crate::error::invalid("U0 must be positive"));
    }
    let nf = n as f64;
    let s = sym.singularities();
    let mut h = strength_sum(s) / (2.0 * nf);
    for j in 0..s.len() {
        for k in j + 1..s.len() {
            if circle_distance(s[j].t, s[k].t) < u0 / nf {
                h += (s[j].alpha * s[k].alpha + s[j].beta_im * s[k].beta_im) / nf;
            }
        }
    }
    Ok(h)
}

/// The 2×2 matrix `Φ₁` of the merged limit, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phi1Matrix {
    pub entries: [[Complex; 2]; 2],
}

impl Phi1Matrix {
    pub fn trace(&self) -> Complex {
        self.entries[0][0] + self.entries[1][1]
    }
}

/// `Φ₁` for `A = Σα_j`, `B = i Σ beta_im_j`:
/// `diag(A² − B², B² − A²)`, `(1,2) = −e^{−πi(A+B)} Γ(1+A−B)/Γ(A+B)`,
/// `(2,1) = e^{πi(A+B)} Γ(1+A+B)/Γ(A−B)`; an entry is 0 where its
/// denominator Γ has a pole.
pub fn phi1_matrix(alphas: &[f64], betas_im: &[f64]) -> Result<Phi1Matrix> {
    if alphas.len() != betas_im.len() {
        return Err(crate::error::invalid("alphas and betas must have equal length"));
    }
    if alphas.iter().any(|&a| !(a >= 0.0)) {
        return Err(crate::error::invalid("alphas must be non-negative"));
    }
    let a: f64 = alphas.iter().sum();
    let b = Complex::new(0.0, betas_im.iter().sum());
    let a_c = Complex::new(a, 0.0);
    let d = a_c * a_c - b * b;
    let i_pi = Complex::new(0.0, PI);
    let e12 = -(-i_pi * (a_c + b)).exp() * log_gamma(1.0 + a_c - b)?.exp() * rgamma(a_c + b)?;
    let e21 = (i_pi * (a_c + b)).exp() * log_gamma(1.0 + a_c + b)?.exp() * rgamma(a_c - b)?;
    Ok(Phi1Matrix {
        entries: [[d, e12], [e21, -d]],
    })
}
