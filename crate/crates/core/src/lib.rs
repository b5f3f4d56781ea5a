//! Toeplitz determinants of Fisher–Hartwig symbols.
//!
//! The crate is `no_std` (with `alloc`) and contains only numerics:
//!
//! - [`specfun`]: complex log-Gamma, log Barnes G, and 1-D quadrature.
//! - [`symbol`]: Fisher–Hartwig symbols `e^V ∏ ω_{α,β}(z/z_j)` and their
//!   Fourier coefficients.
//! - [`toeplitz`]: exact `log D_n` through the Szegő/Levinson recursion, which
//!   also yields the leading coefficients `χ_j` of the orthonormal polynomials,
//!   plus a dense Cholesky reference.
//! - [`asympt`]: strong Szegő, Widom and uniform (merging-singularity)
//!   asymptotics, the `χ_n` correction `H_n`, cluster partitions, and `Φ₁`.
//! - [`apps`]: Selberg-type integrals, CUE moments of the characteristic
//!   polynomial, and momentum statistics of impenetrable bosons.
//!
//! IO, configuration and the command line live in the companion `fht-harness`
//! crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod apps;
pub mod asympt;
mod error;
pub mod specfun;
pub mod symbol;
pub mod toeplitz;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;
