//! Forward-substitution recovery of Zernike coefficients from linearised data.

mod constants;
mod schedule;
mod solver;

pub use constants::{big_d, big_q, big_q_factored, tau, tau_unsimplified, StageConstants};
pub use schedule::{validate_schedule, ScheduleViolation, TruncationSchedule};
pub use solver::{
    reconstruct, reconstruct_with, ReconOptions, ReconReport, StageDiagnostics, StageOrder, DIVISOR_TRIPWIRE,
};
