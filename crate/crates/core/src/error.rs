use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{function}: argument {argument} outside the domain")]
    Domain {
        function: &'static str,
        argument: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("could not parse decimal `{0}`")]
    Parse(String),

    /// Step halving reached its limit. Carries the best estimate and the size
    /// of the last correction so callers can decide whether to use it anyway.
    #[error("quadrature did not converge (step {step:e}, best estimate {estimate}, last correction {last_correction:e})")]
    NotConverged {
        estimate: String,
        last_correction: f64,
        step: f64,
    },

    #[error("internal numerical failure: {0}")]
    Internal(String),

    #[error("degenerate series: leading coefficient vanishes")]
    DegenerateSeries,

    #[error("series too short: quotient-difference breakdown in the first column")]
    SeriesTooShort,

    #[error("continued fraction has a pole: Q_{k} vanished")]
    Pole { k: usize },

    #[error("found only {found} of {wanted} sign changes before x = {limit}")]
    Partition {
        found: usize,
        wanted: usize,
        limit: String,
    },

    #[error("unknown catalog integral {0} (valid ids are 1..=8)")]
    UnknownIntegral(u32),
}
