//! Empirical convergence, monotonicity and separation checks, and report export.

pub mod checks;
pub mod export;
pub mod report;

pub use checks::{
    finite_order_witness, monotonicity_check, separation_check, LevelClass, MonotonicityReport, Separation,
};
pub use export::{export, ExportFormat, ReportRecord, RowRecord};
pub use report::{convergence_report, ConvergenceReport, Distance, Metric, ReportRow};
