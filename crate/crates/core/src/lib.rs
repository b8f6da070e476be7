//! Expansion systems: encode an element as a coefficient code through a chain of
//! projection/expansion maps, and rebuild `n`-th order convergents backwards.
//!
//! Built-in systems cover radix digits, continued fractions, Egyptian and Engel
//! expansions, f-expansions, Taylor and Newton series, Fourier modes, and the
//! iterated-integral approximation systems on power series.

pub mod analysis;
pub mod approx;
pub mod element;
pub mod error;
pub mod interval;
pub mod morphism;
pub mod rational;
pub mod real;
pub mod series;
pub mod system;

pub use element::{CoefficientKind, CoefficientValue, Element, ElementKind};
pub use error::{Error, Result};
pub use interval::CertifiedReal;
pub use rational::{ExtInt, NatOrInf, Q};
pub use system::{
    code_head_coincides, coefficient_code, convergent, order, properness_profile, roundtrip_check,
    trajectory, CoefficientCode, CoefficientOrder, ConvergentTrace, ExpansionSystem, OrderResult,
    SystemRef, Verdict,
};
