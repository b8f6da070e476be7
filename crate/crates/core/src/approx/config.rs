use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    /// Differentiation.
    D,
    /// Subtraction of the constant term.
    K,
    /// `K` after `D`; the dropped value `Dy(x0)` becomes the extra coefficient `b`.
    KD,
}

impl Transform {
    pub fn name(&self) -> &'static str {
        match self {
            Transform::D => "d",
            Transform::K => "k",
            Transform::KD => "kd",
        }
    }
}

/// Level-dependent exponents `alpha_i`.
#[derive(Clone)]
pub enum AlphaSchedule {
    Constant(Q),
    /// Finite list; the last entry repeats.
    List(Vec<Q>),
    Indexed { label: String, f: Arc<dyn Fn(usize) -> Q + Send + Sync> },
}

impl AlphaSchedule {
    pub fn constant(a: Q) -> Self {
        AlphaSchedule::Constant(a)
    }

    pub fn indexed(label: impl Into<String>, f: impl Fn(usize) -> Q + Send + Sync + 'static) -> Self {
        AlphaSchedule::Indexed { label: label.into(), f: Arc::new(f) }
    }

    pub fn at(&self, i: usize) -> Q {
        match self {
            AlphaSchedule::Constant(a) => a.clone(),
            AlphaSchedule::List(v) => v.get(i).or(v.last()).cloned().unwrap_or_else(Q::one),
            AlphaSchedule::Indexed { f, .. } => f(i),
        }
    }

    /// Rejects zero exponents among the first `levels` entries.
    pub fn validate(&self, levels: usize) -> Result<()> {
        if let AlphaSchedule::List(v) = self {
            if v.is_empty() {
                return Err(Error::domain("empty alpha list"));
            }
        }
        for i in 0..levels {
            if self.at(i).is_zero() {
                return Err(Error::domain(format!("alpha_{i} is zero")));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlphaSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlphaSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSchedule::Constant(a) => write!(f, "{}", rational::render(a)),
            AlphaSchedule::List(v) => {
                let parts: Vec<String> = v.iter().map(rational::render).collect();
                write!(f, "{}", parts.join(","))
            }
            AlphaSchedule::Indexed { label, .. } => write!(f, "{label}"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Nonlinearity {
    Power(AlphaSchedule),
    LogExp,
}

/// Configuration of an approximation system on germs at `x0`.
///
/// `Power` works on germs with constant term 1, `LogExp` on germs with constant term 0.
#[derive(Debug, Clone)]
pub struct AsConfig {
    pub transform: Transform,
    pub nonlinearity: Nonlinearity,
    pub x0: Q,
    /// Truncation order used whenever an exact polynomial must become a series.
    pub order: usize,
}

pub const DEFAULT_ORDER: usize = 64;

impl AsConfig {
    pub fn new(transform: Transform, nonlinearity: Nonlinearity) -> Self {
        AsConfig { transform, nonlinearity, x0: Q::zero(), order: DEFAULT_ORDER }
    }

    pub fn power(transform: Transform, alpha: Q) -> Self {
        Self::new(transform, Nonlinearity::Power(AlphaSchedule::Constant(alpha)))
    }

    pub fn logexp(transform: Transform) -> Self {
        Self::new(transform, Nonlinearity::LogExp)
    }

    pub fn at(mut self, x0: Q) -> Self {
        self.x0 = x0;
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    /// Constant term of admissible germs: 1 for `Power`, 0 for `LogExp`.
    pub fn base_value(&self) -> Q {
        match self.nonlinearity {
            Nonlinearity::Power(_) => Q::one(),
            Nonlinearity::LogExp => Q::zero(),
        }
    }

    pub fn alpha(&self, i: usize) -> Option<Q> {
        match &self.nonlinearity {
            Nonlinearity::Power(s) => Some(s.at(i)),
            Nonlinearity::LogExp => None,
        }
    }

    pub fn id(&self) -> String {
        let nl = match &self.nonlinearity {
            Nonlinearity::Power(s) => format!("power[{s}]"),
            Nonlinearity::LogExp => "logexp".to_string(),
        };
        let at = if self.x0.is_zero() {
            String::new()
        } else {
            format!("@{}", rational::render(&self.x0))
        };
        format!("as-{}-{nl}{at}", self.transform.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn list_schedule_repeats_last() {
        let s = AlphaSchedule::List(vec![q(1, 2), q(1, 3)]);
        assert_eq!(s.at(0), q(1, 2));
        assert_eq!(s.at(5), q(1, 3));
    }

    #[test]
    fn indexed_schedule() {
        let s = AlphaSchedule::indexed("1/(i+2)", |i| q(1, i as i64 + 2));
        assert_eq!(s.at(3), q(1, 5));
        assert!(s.validate(10).is_ok());
        assert!(AlphaSchedule::Constant(Q::zero()).validate(1).is_err());
    }

    #[test]
    fn ids_are_descriptive() {
        let c = AsConfig::power(Transform::KD, q(3, 1)).at(q(1, 1));
        assert_eq!(c.id(), "as-kd-power[3]@1");
        assert_eq!(AsConfig::logexp(Transform::D).base_value(), Q::zero());
    }
}
