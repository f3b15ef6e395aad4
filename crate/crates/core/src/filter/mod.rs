//! The spectral filter: projector matrix on a Galerkin window, selection of
//! the filtered subspace, Rayleigh-Ritz on it, and refinement sweeps.

mod projection;
mod ritz;
mod select;
mod sweep;

pub use projection::{projection_matrix, ReferenceSubspace};
pub use ritz::{filtered_solve, ritz_values, FilteredSolve, RitzResult, SolveStatus};
pub use select::{filter_eigs, FilterSelection, Policy, UNIT_SLACK, ZERO_FLOOR};
pub use sweep::{
    pollution_flags, summarize, sweep, Escalation, EscalationReason, GapDiagnostics,
    ReferencePolicy, SweepOptions, SweepRecord, SweepReport, SweepStatus, TrialFamily,
    DEFAULT_STABILIZATION_TOL,
};
