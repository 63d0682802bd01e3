//! Manufactured-solution experiments: error norms, h- and p-refinement
//! sweeps, method comparison, CSV output and the verification suite.

mod convergence;
mod errors;
mod manufactured;
mod random;
mod records;
mod verify;

pub use convergence::{
    fit_slope, fit_slopes, measure, method_difference, projection_errors, run_case, run_h_convergence, run_p_convergence,
    run_sweep, solution_errors, ExperimentConfig, HConvergence, MethodDifference, PConvergence, ProjectionRecord,
    SlopeFit, ROUND_OFF_FLOOR,
};
pub use errors::{
    l2_error, l2_error_1form, l2_error_2form, projection_error_1form, projection_error_2form, reduce_on_mesh,
};
pub use manufactured::{manufactured_problem, manufactured_spec, ManufacturedSolution};
pub use records::{read_csv, write_csv, write_csv_file, ErrorRecord, CSV_HEADER};
pub use random::{random_form, TrigField};
pub use verify::{
    criterion_basis, criterion_commuting, criterion_conservation, criterion_h_convergence, criterion_metric_separation,
    criterion_method_difference, criterion_p_convergence, criterion_topology, verify_all, verify_criterion,
    CriterionReport, CRITERIA,
};
