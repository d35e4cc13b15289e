use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("irreps belong to different point groups ({0} vs {1})")]
    MismatchedGroups(&'static str, &'static str),

    #[error("unknown irrep label `{label}` for {group}; valid labels: {valid}")]
    UnknownIrrep {
        label: String,
        group: &'static str,
        valid: String,
    },

    #[error("unknown point group `{0}`")]
    UnknownGroup(String),

    #[error("size mismatch: {0}")]
    Size(String),

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("invalid symmetry configuration: {0}")]
    Configuration(String),

    #[error("no determinant satisfies the requested constraints")]
    EmptyBasis,

    #[error("expected {expected} parameters, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("calibration matrix is singular or ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },
}
