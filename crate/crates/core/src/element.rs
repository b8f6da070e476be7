//! Elements of the level spaces and the coefficient values emitted by projections.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::interval::CertifiedReal;
use crate::rational::{self, ExtInt, NatOrInf, Q};
use crate::series::polynomial::Polynomial;
use crate::series::power_series::PowerSeries;
use crate::series::trig::{render_cq, TrigPolynomial, CQ};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    /// Exact rationals, certified intervals, and the point at infinity.
    Real,
    Polynomial,
    Trig,
    Series,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Element {
    Rational(Q),
    Interval(CertifiedReal),
    /// The point at infinity; only appears in shifted continued-fraction spaces.
    Infinity,
    Polynomial(Polynomial),
    Trig(TrigPolynomial),
    Series(PowerSeries),
}

impl Element {
    pub fn kind(&self) -> ElementKind {
        match self {
            Element::Rational(_) | Element::Interval(_) | Element::Infinity => ElementKind::Real,
            Element::Polynomial(_) => ElementKind::Polynomial,
            Element::Trig(_) => ElementKind::Trig,
            Element::Series(_) => ElementKind::Series,
        }
    }

    pub fn rational(x: Q) -> Self {
        Element::Rational(x)
    }

    pub fn zero() -> Self {
        Element::Rational(Q::zero())
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            Element::Rational(x) => Some(x),
            Element::Interval(iv) => iv.as_exact(),
            _ => None,
        }
    }

    pub fn as_polynomial(&self) -> Result<&Polynomial> {
        match self {
            Element::Polynomial(p) => Ok(p),
            other => Err(Error::domain(format!("expected a polynomial, got {other}"))),
        }
    }

    pub fn as_trig(&self) -> Result<&TrigPolynomial> {
        match self {
            Element::Trig(t) => Ok(t),
            other => Err(Error::domain(format!("expected a trigonometric polynomial, got {other}"))),
        }
    }

    pub fn as_series(&self) -> Result<&PowerSeries> {
        match self {
            Element::Series(s) => Ok(s),
            other => Err(Error::domain(format!("expected a power series, got {other}"))),
        }
    }

    /// Equality that refuses to guess: intervals must be certified equal or
    /// certified distinct, truncated series must differ within their known range.
    pub fn certified_eq(&self, other: &Element) -> Result<bool> {
        use Element::*;
        match (self, other) {
            (Rational(a), Rational(b)) => Ok(a == b),
            (Interval(a), Rational(b)) | (Rational(b), Interval(a)) => {
                Ok(a.cmp_q(b)? == std::cmp::Ordering::Equal)
            }
            (Interval(a), Interval(b)) => Ok(a.cmp_certified(b)? == std::cmp::Ordering::Equal),
            (Infinity, Infinity) => Ok(true),
            (Infinity, _) | (_, Infinity) => Ok(false),
            (Polynomial(a), Polynomial(b)) => Ok(a == b),
            (Trig(a), Trig(b)) => Ok(a == b),
            (Series(a), Series(b)) => a.certified_eq(b),
            (a, b) => Err(Error::domain(format!("cannot compare {a} with {b}"))),
        }
    }

    /// Agreement up to the available information: overlapping intervals,
    /// series equal on their common truncation range, exact equality otherwise.
    pub fn consistent_with(&self, other: &Element) -> bool {
        use Element::*;
        match (self, other) {
            (Interval(a), Rational(b)) | (Rational(b), Interval(a)) => a.contains(b),
            (Interval(a), Interval(b)) => a.overlaps(b),
            (Series(a), Series(b)) => a.agrees_with(b),
            (a, b) => a == b,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Rational(x) => write!(f, "{}", rational::render(x)),
            Element::Interval(iv) => write!(f, "{iv}"),
            Element::Infinity => write!(f, "inf"),
            Element::Polynomial(p) => write!(f, "{p}"),
            Element::Trig(t) => write!(f, "{t}"),
            Element::Series(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientKind {
    Int,
    Ext,
    Scalar,
    Pair,
    As,
    As3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoefficientValue {
    Int(BigInt),
    /// Integer or signed infinity; `+inf` marks the neutral branch of reciprocal systems.
    Ext(ExtInt),
    Scalar(Q),
    /// Fourier pair `(c_{-i}, c_{+i})`.
    Pair(CQ, CQ),
    As { c: Q, m: NatOrInf },
    As3 { b: Q, c: Q, m: NatOrInf },
}

impl CoefficientValue {
    pub fn kind(&self) -> CoefficientKind {
        match self {
            CoefficientValue::Int(_) => CoefficientKind::Int,
            CoefficientValue::Ext(_) => CoefficientKind::Ext,
            CoefficientValue::Scalar(_) => CoefficientKind::Scalar,
            CoefficientValue::Pair(..) => CoefficientKind::Pair,
            CoefficientValue::As { .. } => CoefficientKind::As,
            CoefficientValue::As3 { .. } => CoefficientKind::As3,
        }
    }

    pub fn int(n: i64) -> Self {
        CoefficientValue::Int(BigInt::from(n))
    }

    pub fn ext(n: i64) -> Self {
        CoefficientValue::Ext(ExtInt::Finite(BigInt::from(n)))
    }

    pub fn inf() -> Self {
        CoefficientValue::Ext(ExtInt::PosInf)
    }

    pub fn scalar(&self) -> Result<&Q> {
        match self {
            CoefficientValue::Scalar(x) => Ok(x),
            other => Err(Error::domain(format!("expected a scalar coefficient, got {other}"))),
        }
    }
}

impl fmt::Display for CoefficientValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientValue::Int(n) => write!(f, "{n}"),
            CoefficientValue::Ext(e) => write!(f, "{e}"),
            CoefficientValue::Scalar(x) => write!(f, "{}", rational::render(x)),
            CoefficientValue::Pair(a, b) => write!(f, "({},{})", render_cq(a), render_cq(b)),
            CoefficientValue::As { c, m } => write!(f, "({},{m})", rational::render(c)),
            CoefficientValue::As3 { b, c, m } => {
                write!(f, "({},{},{m})", rational::render(b), rational::render(c))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn interval_equality_is_certified() {
        let iv = CertifiedReal::new(q(1, 3), q(1, 2), 32).unwrap();
        let a = Element::Interval(iv);
        assert_eq!(a.certified_eq(&Element::Rational(q(1, 1))), Ok(false));
        assert!(matches!(
            a.certified_eq(&Element::Rational(q(2, 5))),
            Err(Error::PrecisionExhausted(_))
        ));
        assert!(a.consistent_with(&Element::Rational(q(2, 5))));
    }

    #[test]
    fn coefficient_rendering() {
        assert_eq!(CoefficientValue::inf().to_string(), "inf");
        let c = CoefficientValue::As { c: q(1, 2), m: NatOrInf::Finite(0) };
        assert_eq!(c.to_string(), "(1/2,0)");
    }
}
