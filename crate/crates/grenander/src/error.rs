use thiserror::Error;

/// Errors for model construction, evaluation domains, and experiment plans.
#[derive(Debug, Error)]
pub enum Error {
    /// An evaluation argument fell outside its stated domain.
    #[error("{what} = {value} outside {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    /// Model parameters rejected at construction.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// An integration interval with a > b or endpoints outside [0,1].
    #[error("invalid interval [{a}, {b}]; need 0 <= a <= b <= 1")]
    Interval { a: f64, b: f64 },

    /// A model specification string that does not parse.
    #[error("cannot parse model spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },

    /// A sample set with no observations.
    #[error("empty sample")]
    EmptySample,

    /// A sample value outside (0, 1].
    #[error("sample value {value} (entry {index}) outside (0, 1]")]
    InvalidSample { index: usize, value: f64 },

    /// An experiment plan that fails validation.
    #[error("invalid plan: {0}")]
    Plan(String),

    /// A certified inequality failed on a concrete trial. This signals an
    /// implementation bug, never statistical noise; the replay key pins the
    /// exact sample that produced it.
    #[error("certified inequality violated on trial {replay}")]
    Violation { replay: String },
}

pub type Result<T> = std::result::Result<T, Error>;
