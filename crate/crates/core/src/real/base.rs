use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::element::{CoefficientKind, CoefficientValue, Element, ElementKind};
use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::real::{self as r, magnitude_prefix};
use crate::system::ExpansionSystem;

/// Radix-`b` digits on `[0,1)`: `P y = floor(b y)`, `E y = b y - P y`.
#[derive(Debug, Clone)]
pub struct BaseSystem {
    b: u32,
}

impl BaseSystem {
    pub fn new(b: u32) -> Result<Self> {
        if b < 2 {
            return Err(Error::domain(format!("base must be at least 2, got {b}")));
        }
        Ok(BaseSystem { b })
    }

    pub fn decimal() -> Self {
        BaseSystem { b: 10 }
    }

    pub fn base(&self) -> u32 {
        self.b
    }

    fn bq(&self) -> Q {
        rational::qi(self.b as i64)
    }

    fn digit(&self, c: &CoefficientValue) -> Option<BigInt> {
        match c {
            CoefficientValue::Int(d) if !d.is_negative() && d < &BigInt::from(self.b) => {
                Some(d.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn reconstruct_digit(&self, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
        let Some(d) = self.digit(c) else {
            return Ok(None);
        };
        if !r::in_range(y, &Q::zero(), &Q::one(), false)? {
            return Ok(None);
        }
        let shifted = r::add_q(y, &Q::from_integer(d))?;
        Ok(Some(r::mul_q(&shifted, &self.bq().recip())?))
    }
}

impl ExpansionSystem for BaseSystem {
    fn id(&self) -> String {
        match self.b {
            10 => "decimal".into(),
            2 => "binary".into(),
            b => format!("base{b}"),
        }
    }

    fn element_kind(&self) -> ElementKind {
        ElementKind::Real
    }

    fn coefficient_kind(&self) -> CoefficientKind {
        CoefficientKind::Int
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
        r::require_unit(y, false, &self.id())?;
        let scaled = r::mul_q(y, &self.bq())?;
        let d = r::floor(&scaled)?;
        let rest = r::add_q(&scaled, &-Q::from_integer(d.clone()))?;
        Ok((CoefficientValue::Int(d), rest))
    }

    fn reconstruct(&self, _level: usize, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
        self.reconstruct_digit(c, y)
    }
}

/// Decimal expansion of nonnegative reals: level 0 emits the magnitude prefix,
/// higher levels emit decimal digits of the normalized mantissa.
#[derive(Debug, Clone, Default)]
pub struct DecimalExtSystem;

impl DecimalExtSystem {
    pub fn new() -> Self {
        DecimalExtSystem
    }
}

impl ExpansionSystem for DecimalExtSystem {
    fn id(&self) -> String {
        "decimal-ext".into()
    }

    fn element_kind(&self) -> ElementKind {
        ElementKind::Real
    }

    fn coefficient_kind(&self) -> CoefficientKind {
        CoefficientKind::Int
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

    fn step(&self, level: usize, y: &Element) -> Result<(CoefficientValue, Element)> {
        if level == 0 {
            let (c, rest) = magnitude_prefix(y)?;
            Ok((CoefficientValue::Int(c), rest))
        } else {
            BaseSystem::decimal().step(level - 1, y)
        }
    }

    fn reconstruct(&self, level: usize, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
        if level > 0 {
            return BaseSystem::decimal().reconstruct_digit(c, y);
        }
        let CoefficientValue::Int(e) = c else {
            return Ok(None);
        };
        let tenth = rational::q(1, 10);
        let zero_branch = e.is_zero() && r::is_zero(y)?;
        if !zero_branch && !r::in_range(y, &tenth, &Q::one(), false)? {
            return Ok(None);
        }
        let e = e.to_i64().ok_or_else(|| Error::domain("magnitude exponent out of range"))?;
        Ok(Some(r::mul_q(y, &rational::pow_i(&rational::qi(10), e))?))
    }
}
