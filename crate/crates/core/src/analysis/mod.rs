//! Error measures, convergence studies, benchmark drivers, job files and CSV output.

mod config;
mod errors;
mod examples;
mod report;

pub use config::{KeyValues, MeshSource, SolveJob};
pub use errors::{
    boundary_displacement, convergence_slope, error_displacement_skeleton, error_strain_l2,
    locate_element, RelativeError,
};
pub use examples::{
    run_convergence_study, run_cylinder, run_plate, run_rigid_benchmark, solve_manufactured,
    ConvergenceTable, CylinderOptions, CylinderResult, CylinderStep, ErrorReport, Manufactured,
    PlateOptions, PlateResult, PlateStep, StudyOptions,
};
pub use report::{cylinder_history_csv, errors_csv, plate_history_csv, reports_csv, sigma_rho_csv};
