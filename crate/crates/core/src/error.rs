use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} out of domain: {reason}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("step size underflow at r = {r}")]
    StepSizeUnderflow { r: f64 },

    #[error("solution left the admissible regime at r = {r}: {reason}")]
    OutOfRegime { r: f64, reason: &'static str },

    #[error("degenerate metric at r = {r}: warping function vanishes")]
    DegenerateMetric { r: f64 },

    #[error(
        "cone angle {target} not bracketed: achieved slopes range over [{slope_low}, {slope_high}]"
    )]
    BracketFailure {
        target: f64,
        slope_low: f64,
        slope_high: f64,
    },

    #[error("shooting map not monotone: slope {slope_a} at kappa {kappa_a}, slope {slope_b} at kappa {kappa_b}")]
    NonMonotoneShooting {
        kappa_a: f64,
        slope_a: f64,
        kappa_b: f64,
        slope_b: f64,
    },

    #[error("no cutoff parameter on the candidate grid works for t = {t}: condition ({condition}) fails")]
    NoDeltaCandidate { t: f64, condition: char },

    #[error("profile too short: need r = {needed}, profile ends at {available}")]
    ProfileTooShort { needed: f64, available: f64 },

    #[error("asymptotic volume ratio not stabilised: closed form {closed}, direct limit {direct}")]
    AvrMismatch { closed: f64, direct: f64 },

    #[error("sample grid not strictly increasing at index {index}")]
    NonMonotoneGrid { index: usize },

    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// True for errors caused by the caller's parameters rather than by numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::ParameterDomain { .. } | Error::NonMonotoneGrid { .. } | Error::Malformed(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_domain(
    name: &'static str,
    value: f64,
    ok: bool,
    reason: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterDomain {
            name,
            value,
            reason,
        })
    }
}
