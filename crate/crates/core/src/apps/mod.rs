//! Applications: circular Selberg-type integrals, moments of the CUE
//! characteristic polynomial, and momentum statistics of impenetrable bosons.

mod boson;
mod cue;
pub mod fit;
mod selberg;

pub use boson::{n0_limit_constant, n0_limit_torus, pi_kn_zero};
pub use cue::{cue_mc_moment, fk_constant, fk_prediction, xn_moment_exact, xn_sample};
pub use selberg::{i_eps_mc, scaling_fit, selberg_i0, ScalingFit};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub value: f64,
    pub std_err: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Regime of the moment `E[X_n(α)^m]`, decided by `mα²` against 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    Subcritical,
    Critical,
    Supercritical,
}

impl RegimeTag {
    /// `mα² = 1` is matched with a relative tolerance of `1e−12`, so that
    /// `α = 1/√2` counts as critical for `m = 2`.
    pub fn classify(m: u32, alpha: f64) -> Self {
        let x = m as f64 * alpha * alpha;
        if (x - 1.0).abs() <= 1e-12 {
            RegimeTag::Critical
        } else if x < 1.0 {
            RegimeTag::Subcritical
        } else {
            RegimeTag::Supercritical
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTag::Subcritical => "subcritical",
            RegimeTag::Critical => "critical",
            RegimeTag::Supercritical => "supercritical",
        }
    }
}

/// Stream `stream` of the ChaCha8 generator keyed by `seed`.
pub(crate) fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform on `[0, 1)` with 53 random bits.
pub(crate) fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// Mean and standard error of the mean.
pub(crate) fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mut s = crate::toeplitz::KahanSum::default();
    for &x in xs {
        s.add(x);
    }
    let mean = s.value() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[allow(unused_imports)]
use num_traits::Float;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        assert_eq!(RegimeTag::classify(1, 0.5), RegimeTag::Subcritical);
        assert_eq!(RegimeTag::classify(1, 1.0), RegimeTag::Critical);
        assert_eq!(
            RegimeTag::classify(2, core::f64::consts::FRAC_1_SQRT_2),
            RegimeTag::Critical
        );
        assert_eq!(RegimeTag::classify(2, 1.0), RegimeTag::Supercritical);
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a: [f64; 4] = core::array::from_fn({
            let mut r = rng_stream(7, 0);
            move |_| uniform(&mut r)
        });
        let b: [f64; 4] = core::array::from_fn({
            let mut r = rng_stream(7, 0);
            move |_| uniform(&mut r)
        });
        let c = uniform(&mut rng_stream(7, 1));
        assert_eq!(a, b);
        assert_ne!(a[0], c);
        assert!(a.iter().all(|x| (0.0..1.0).contains(x)));
    }
}
