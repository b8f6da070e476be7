use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::element::{CoefficientKind, CoefficientValue, Element, ElementKind};
use crate::error::Result;
use crate::rational::{ExtInt, Q};
use crate::real as r;
use crate::system::ExpansionSystem;

/// Regular continued fractions: `P y = floor(1/y)`, `E y = 1/y - P y`, with
/// `P 0 = inf` and `E 0 = 0`.
///
/// Level spaces are taken as `[0,1]` so that `(1, 0)` reconstructs to `1`;
/// with `[0,1)` every convergent whose last partial quotient is 1 would be improper.
#[derive(Debug, Clone, Default)]
pub struct ContinuedFractionSystem;

impl ContinuedFractionSystem {
    pub fn new() -> Self {
        ContinuedFractionSystem
    }
}

impl ExpansionSystem for ContinuedFractionSystem {
    fn id(&self) -> String {
        "cf".into()
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
        r::require_unit(y, true, "cf")?;
        if r::is_zero(y)? {
            return Ok((CoefficientValue::inf(), Element::zero()));
        }
        let inv = r::recip(y)?;
        let c = r::floor(&inv)?;
        let rest = r::add_q(&inv, &-Q::from_integer(c.clone()))?;
        Ok((CoefficientValue::Ext(ExtInt::Finite(c)), rest))
    }

    fn reconstruct(&self, level: usize, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
        match c {
            CoefficientValue::Ext(ExtInt::PosInf) => {
                Ok(if self.is_neutral(level + 1, y)? { Some(Element::zero()) } else { None })
            }
            CoefficientValue::Ext(ExtInt::Finite(n)) if n >= &BigInt::one() => {
                if !r::in_range(y, &Q::zero(), &Q::one(), false)? {
                    return Ok(None);
                }
                let denom = r::add_q(y, &Q::from_integer(n.clone()))?;
                Ok(Some(r::recip(&denom)?))
            }
            _ => Ok(None),
        }
    }
}

/// The `M(p/q) = p + q` termination certificate along a rational trajectory.
pub fn termination_certificate(y: &Q, max_steps: usize) -> Option<Vec<BigInt>> {
    let sys = ContinuedFractionSystem;
    let mut cur = Element::Rational(y.clone());
    let mut out = Vec::new();
    for i in 0..max_steps {
        let Element::Rational(v) = &cur else { return None };
        out.push(v.numer() + v.denom());
        if v.is_zero() {
            return Some(out);
        }
        cur = sys.expand(i, &cur).ok()?;
    }
    None
}
