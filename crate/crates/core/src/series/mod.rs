//! Systems on function spaces and the exact kernels they share.

pub mod fourier;
pub mod newton;
pub mod norm_fixture;
pub mod polynomial;
pub mod power_series;
pub mod taylor;
pub mod trig;

pub use fourier::FourierSystem;
pub use newton::{NewtonBackwardSystem, NewtonForwardSystem};
pub use norm_fixture::{approx_sup_norm, sup_norm_at_most_one, NormRestrictedTaylor};
pub use polynomial::Polynomial;
pub use power_series::PowerSeries;
pub use taylor::TaylorSystem;
pub use trig::{cq, cq_real, render_cq, TrigPolynomial, CQ};
