//! Approximation systems on germs: the D, K and K∘D transforms combined with
//! power or log/exp nonlinearities, cycle detection on their codes, numerical
//! evaluation of convergents along complex paths, and a nested-integral printer.

pub mod config;
pub mod cycle;
pub mod display;
pub mod path;
pub mod system;

pub use config::{AlphaSchedule, AsConfig, Nonlinearity, Transform, DEFAULT_ORDER};
pub use cycle::detect_cycle;
pub use display::nested_form;
pub use path::{eval_convergent_path, PathEvaluation, QuadSettings};
pub use system::{head_coincidence, head_coincidence_profile, multiplicity, ApproximationSystem, HeadCheck, Multiplicity};
