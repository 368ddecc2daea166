use thiserror::Error;

/// Errors raised by the special-function, basis, forward and reconstruction layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid index: {0}")]
    Index(String),

    #[error("surface gradient requested at sin(theta) = {sin_theta:e}, below the pole guard {guard:e}")]
    PoleProximity { sin_theta: f64, guard: f64 },

    #[error("degree {degree} exceeds the exact-arithmetic cap {cap}")]
    DegreeOverflow { degree: u32, cap: u32 },

    #[error("coefficient (k={k}, ell={ell}, m={m}) is required but neither stored nor certified zero")]
    IncompleteSupport { k: usize, ell: usize, m: i64 },

    #[error("measurement (k={k}, ell={ell}, m={m}) is missing")]
    MissingMeasurement { k: usize, ell: usize, m: i64 },

    #[error("infeasible truncation schedule: {}", format_violations(.0))]
    InfeasibleSchedule(Vec<crate::recon::ScheduleViolation>),

    #[error("divisor |Q| = {value:e} at (k={k}, ell={ell}, m={m}) is below {threshold:e}")]
    DivisorUnderflow {
        k: usize,
        ell: usize,
        m: i64,
        value: f64,
        threshold: f64,
    },

    #[error("invalid phantom: {0}")]
    Phantom(String),

    #[error("malformed document: {0}")]
    Format(String),
}

fn format_violations(v: &[crate::recon::ScheduleViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
