use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::element::{CoefficientKind, CoefficientValue, Element, ElementKind};
use crate::error::Result;
use crate::rational::{ExtInt, Q};
use crate::real as r;
use crate::system::{CoefficientOrder, ExpansionSystem};

fn greedy_denominator(who: &str, y: &Element) -> Result<Option<BigInt>> {
    r::require_unit(y, false, who)?;
    if r::is_zero(y)? {
        return Ok(None);
    }
    Ok(Some(r::ceil(&r::recip(y)?)?))
}

fn finite_denominator(c: &CoefficientValue) -> Option<&BigInt> {
    match c {
        CoefficientValue::Ext(ExtInt::Finite(n)) if n >= &BigInt::from(2) => Some(n),
        _ => None,
    }
}

/// Greedy Egyptian fractions: `P y = ceil(1/y)`, `E y = y - 1/P y`.
#[derive(Debug, Clone, Default)]
pub struct EgyptianSystem;

impl EgyptianSystem {
    pub fn new() -> Self {
        EgyptianSystem
    }
}

impl ExpansionSystem for EgyptianSystem {
    fn id(&self) -> String {
        "egyptian".into()
    }

    fn element_kind(&self) -> ElementKind {
        ElementKind::Real
    }

    fn coefficient_kind(&self) -> CoefficientKind {
        CoefficientKind::Ext
    }

    fn neutral(&self, _level: usize) -> Element {
        Element::zero()
    }

    fn project(&self, level: usize, y: &Element) -> Result<CoefficientValue> {
        Ok(self.step(level, y)?.0)
    }

    fn expand(&self, level: usize, y: &Element) -> Result<Element> {
        Ok(self.step(level, y)?.1)
    }

    fn step(&self, _level: usize, y: &Element) -> Result<(CoefficientValue, Element)> {
        match greedy_denominator("egyptian", y)? {
            None => Ok((CoefficientValue::inf(), Element::zero())),
            Some(c) => {
                let rest = r::add_q(y, &-Q::new(BigInt::one(), c.clone()))?;
                Ok((CoefficientValue::Ext(ExtInt::Finite(c)), rest))
            }
        }
    }

    /// Image of `F`: `c >= 2` with `0 <= t < 1/(c(c-1))`, plus `(inf, 0)`.
    fn reconstruct(&self, level: usize, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
        if matches!(c, CoefficientValue::Ext(ExtInt::PosInf)) {
            return Ok(self.is_neutral(level + 1, y)?.then(Element::zero));
        }
        let Some(n) = finite_denominator(c) else {
            return Ok(None);
        };
        let bound = Q::new(BigInt::one(), n * (n - BigInt::one()));
        if !r::in_range(y, &Q::from_integer(0.into()), &bound, false)? {
            return Ok(None);
        }
        Ok(Some(r::add_q(y, &Q::new(BigInt::one(), n.clone()))?))
    }

    fn coefficient_order(&self) -> CoefficientOrder {
        CoefficientOrder::Reversed
    }
}

/// Engel expansions: `P y = ceil(1/y)`, `E y = y P y - 1`.
#[derive(Debug, Clone, Default)]
pub struct EngelSystem;

impl EngelSystem {
    pub fn new() -> Self {
        EngelSystem
    }
}

impl ExpansionSystem for EngelSystem {
    fn id(&self) -> String {
        "engel".into()
    }

    fn element_kind(&self) -> ElementKind {
        ElementKind::Real
    }

    fn coefficient_kind(&self) -> CoefficientKind {
        CoefficientKind::Ext
    }

    fn neutral(&self, _level: usize) -> Element {
        Element::zero()
    }

    fn project(&self, level: usize, y: &Element) -> Result<CoefficientValue> {
        Ok(self.step(level, y)?.0)
    }

    fn expand(&self, level: usize, y: &Element) -> Result<Element> {
        Ok(self.step(level, y)?.1)
    }

    fn step(&self, _level: usize, y: &Element) -> Result<(CoefficientValue, Element)> {
        match greedy_denominator("engel", y)? {
            None => Ok((CoefficientValue::inf(), Element::zero())),
            Some(c) => {
                let scaled = r::mul_q(y, &Q::from_integer(c.clone()))?;
                let rest = r::add_q(&scaled, &-Q::one())?;
                Ok((CoefficientValue::Ext(ExtInt::Finite(c)), rest))
            }
        }
    }

    /// Image of `F`: `c >= 2` with `0 <= t < 1/(c-1)`, plus `(inf, 0)`.
    fn reconstruct(&self, level: usize, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
        if matches!(c, CoefficientValue::Ext(ExtInt::PosInf)) {
            return Ok(self.is_neutral(level + 1, y)?.then(Element::zero));
        }
        let Some(n) = finite_denominator(c) else {
            return Ok(None);
        };
        debug_assert!(n.is_positive());
        let bound = Q::new(BigInt::one(), n - BigInt::one());
        if !r::in_range(y, &Q::from_integer(0.into()), &bound, false)? {
            return Ok(None);
        }
        let lifted = r::add_q(y, &Q::one())?;
        Ok(Some(r::mul_q(&lifted, &Q::new(BigInt::one(), n.clone()))?))
    }

    fn coefficient_order(&self) -> CoefficientOrder {
        CoefficientOrder::Reversed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::CertifiedReal;
    use crate::rational::q;
    use crate::system::{coefficient_code, convergent, roundtrip_check};

    #[test]
    fn egyptian_three_quarters() {
        let sys = EgyptianSystem;
        let y = Element::Rational(q(3, 4));
        assert_eq!(coefficient_code(&sys, &y, 3).unwrap().to_string(), "2 4 inf");
    }

    #[test]
    fn egyptian_inverse_sqrt_two() {
        let y = CertifiedReal::sqrt_q(&q(1, 2), 256).unwrap();
        let code = coefficient_code(&EgyptianSystem, &Element::Interval(y), 4).unwrap();
        assert_eq!(code.to_string(), "2 5 141 68575");
    }

    #[test]
    fn engel_three_eighths() {
        let sys = EngelSystem;
        let y = Element::Rational(q(3, 8));
        let code = coefficient_code(&sys, &y, 3).unwrap();
        assert_eq!(code.to_string(), "3 8 inf");
        assert_eq!(convergent(&sys, &code.values, 2).unwrap().value(), Some(&y));
        assert!(roundtrip_check(&sys, &y, 3).unwrap());
    }

    #[test]
    fn image_bounds_enforced() {
        let e = EgyptianSystem;
        // 1/2 + 1/2 would leave [0,1).
        assert_eq!(e.reconstruct(0, &CoefficientValue::ext(2), &Element::Rational(q(1, 2))).unwrap(), None);
        let g = EngelSystem;
        assert_eq!(g.reconstruct(0, &CoefficientValue::ext(3), &Element::Rational(q(1, 2))).unwrap(), None);
        assert_eq!(g.reconstruct(0, &CoefficientValue::ext(1), &Element::zero()).unwrap(), None);
    }
}
