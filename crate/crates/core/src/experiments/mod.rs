//! Time loop, convergence and blow-up studies, slope fitting and self checks.

mod config;
mod errors;
mod fit;
mod run;
mod selfcheck;
mod study;

pub use config::{RunConfig, BLOWUP_SNAPSHOT_TIMES, MANUFACTURED_DTS};
pub use errors::{ErrorAccumulator, ErrorRecord, ExactErrors, NormPair, ReferenceErrors, Variant};
pub use fit::{check_geometric, slope_fit, slope_fit_above, FloorFit};
pub use run::{
    run_simulation, run_simulation_with, Observer, RunOutput, Snapshot, TimeSeriesRow, LENGTH_TOLERANCE,
};
pub use selfcheck::{coefficient_defect, self_check, CheckOutcome};
pub use study::{
    blowup_study, convergence_study, error_run, near_origin_indices, origin_index, reference_run, BlowupRun,
    ConvergenceTable, Norm, Reference, ERROR_FLOOR,
};
