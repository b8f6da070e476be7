//! Digit-style systems on real numbers, over exact rationals or certified intervals.

pub mod base;
pub mod cf;
pub mod fexp;
pub mod magnitude;
pub mod unit_fraction;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::rational::{self, Q};

pub use base::{BaseSystem, DecimalExtSystem};
pub use cf::ContinuedFractionSystem;
pub use fexp::{FExpansionSpec, FExpansionSystem, FValue, LinearMap, MonotoneMap, ReciprocalMap};
pub use magnitude::magnitude_prefix;
pub use unit_fraction::{EgyptianSystem, EngelSystem};

pub(crate) fn cmp_q(y: &Element, x: &Q) -> Result<Ordering> {
    match y {
        Element::Rational(a) => Ok(a.cmp(x)),
        Element::Interval(iv) => iv.cmp_q(x),
        Element::Infinity => Ok(Ordering::Greater),
        other => Err(Error::domain(format!("expected a real number, got {other}"))),
    }
}

/// Certified order of two reals; the point at infinity is the largest element.
pub fn cmp_reals(a: &Element, b: &Element) -> Result<Ordering> {
    match (a, b) {
        (Element::Infinity, Element::Infinity) => Ok(Ordering::Equal),
        (Element::Infinity, _) => Ok(cmp_reals(b, a)?.reverse()),
        (_, Element::Rational(x)) => cmp_q(a, x),
        (Element::Rational(x), _) => Ok(cmp_q(b, x)?.reverse()),
        (Element::Interval(x), Element::Interval(y)) => x.cmp_certified(y),
        (_, Element::Infinity) => {
            cmp_q(a, &Q::zero())?;
            Ok(Ordering::Less)
        }
        _ => Err(Error::domain(format!("cannot order {a} and {b}"))),
    }
}

pub(crate) fn is_zero(y: &Element) -> Result<bool> {
    Ok(cmp_q(y, &Q::zero())? == Ordering::Equal)
}

pub(crate) fn mul_q(y: &Element, k: &Q) -> Result<Element> {
    match y {
        Element::Rational(a) => Ok(Element::Rational(a * k)),
        Element::Interval(iv) => Ok(Element::Interval(iv.mul_q(k))),
        other => Err(Error::domain(format!("expected a finite real number, got {other}"))),
    }
}

pub(crate) fn add_q(y: &Element, k: &Q) -> Result<Element> {
    match y {
        Element::Rational(a) => Ok(Element::Rational(a + k)),
        Element::Interval(iv) => Ok(Element::Interval(iv.add_q(k))),
        other => Err(Error::domain(format!("expected a finite real number, got {other}"))),
    }
}

pub(crate) fn recip(y: &Element) -> Result<Element> {
    match y {
        Element::Rational(a) if a.is_zero() => Ok(Element::Infinity),
        Element::Rational(a) => Ok(Element::Rational(a.recip())),
        Element::Interval(iv) => Ok(Element::Interval(iv.recip()?)),
        Element::Infinity => Ok(Element::zero()),
        other => Err(Error::domain(format!("expected a real number, got {other}"))),
    }
}

pub(crate) fn floor(y: &Element) -> Result<BigInt> {
    match y {
        Element::Rational(a) => Ok(rational::floor(a)),
        Element::Interval(iv) => iv.floor(),
        other => Err(Error::domain(format!("expected a finite real number, got {other}"))),
    }
}

pub(crate) fn ceil(y: &Element) -> Result<BigInt> {
    match y {
        Element::Rational(a) => Ok(rational::ceil(a)),
        Element::Interval(iv) => iv.ceil(),
        other => Err(Error::domain(format!("expected a finite real number, got {other}"))),
    }
}

/// `lo <= y < hi` (or `<= hi` when `closed`), certified.
pub(crate) fn in_range(y: &Element, lo: &Q, hi: &Q, closed: bool) -> Result<bool> {
    let above = cmp_q(y, lo)? != Ordering::Less;
    let c = cmp_q(y, hi)?;
    let below = c == Ordering::Less || (closed && c == Ordering::Equal);
    Ok(above && below)
}

pub(crate) fn require_unit(y: &Element, closed: bool, who: &str) -> Result<()> {
    if !in_range(y, &Q::zero(), &Q::one(), closed)? {
        let range = if closed { "[0,1]" } else { "[0,1)" };
        return Err(Error::domain(format!("{who}: {y} is outside {range}")));
    }
    Ok(())
}
