//! Error scans, alpha balancing, convergence studies and the rate theory.

pub mod balance;
pub mod baseline;
pub mod scan;
pub mod study;
pub mod theory;

pub use balance::{balance_alpha, Balanced};
pub use baseline::{newton_baseline, scan_newton_error};
pub use scan::{
    equioscillation_points, scan_abs_error, scan_rel_error, sector_equioscillation, sector_error_scan,
    signed_rel_error_at_root,
    ErrorReport, Extremum, Metric, Spacing, DEFAULT_SAMPLES,
};
pub use study::{convergence_study, convergence_study_with_samples, ConvergenceRow, ConvergenceTable, LinearFit};
pub use theory::{exponent_c, exponent_c_hat, predict_k, stage_counts, StageCounts, TheoryParams};
