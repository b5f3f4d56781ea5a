use alloc::string::String;

/// Errors produced by the numerical kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite argument")]
    NonFinite,
    #[error("Gamma has a pole at {0}")]
    GammaPole(f64),
    #[error("Barnes G vanishes at {0}")]
    BarnesZero(f64),
    #[error("argument {re}{im:+}i outside the supported range")]
    OutOfRange { re: f64, im: f64 },
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (partial value {value}, error estimate {err_est})"
    )]
    QuadratureNonConvergence {
        value: f64,
        err_est: f64,
        subdivisions: usize,
    },
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),
    #[error("symbol has a jump at t = {0}; a side must be given")]
    JumpWithoutSide(f64),
    #[error("coefficient tolerance {requested:e} not achievable (attainable bound {attainable:e})")]
    ToleranceNotAchievable { requested: f64, attainable: f64 },
    #[error("Levinson recursion broke down at step {step} (prediction error {value:e})")]
    Breakdown { step: usize, value: f64 },
    #[error("matrix not positive definite at pivot {pivot} (value {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("singularities {0} and {1} coincide")]
    CoincidentSingularities(usize, usize),
    #[error("integral diverges: m*alpha^2 = {0} >= 1")]
    Divergent(f64),
    #[error("regime mismatch: {0}")]
    RegimeMismatch(&'static str),
    #[error("Markov chains did not mix (R-hat = {0})")]
    NotMixing(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("symbol literal: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
