use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::element::{CoefficientKind, CoefficientValue, Element, ElementKind};
use crate::error::{Error, Result};
use crate::rational::{self, ExtInt, ExtQ, Q};
use crate::real as r;
use crate::system::ExpansionSystem;

/// Value of a monotone map, allowing poles at the interval ends.
#[derive(Debug, Clone, PartialEq)]
pub enum FValue {
    NegInf,
    Finite(Element),
    PosInf,
}

/// Strictly monotone `f: [0,1) -> I` with an exact inverse on rationals.
pub trait MonotoneMap: Send + Sync {
    fn name(&self) -> String;
    fn increasing(&self) -> bool;
    /// `f(y)` on either real backend.
    fn apply(&self, y: &Element) -> Result<FValue>;
    /// `f^{-1}(t)`, or `None` when `t` is outside the image.
    fn inverse(&self, t: &ExtQ) -> Option<Q>;
}

/// `f(y) = k y` with rational `k > 1`; integer `k` gives radix digits, others beta expansions.
#[derive(Debug, Clone)]
pub struct LinearMap {
    k: Q,
}

impl LinearMap {
    pub fn new(k: Q) -> Result<Self> {
        if k <= Q::one() {
            return Err(Error::domain("linear f-expansion needs slope > 1"));
        }
        Ok(LinearMap { k })
    }
}

impl MonotoneMap for LinearMap {
    fn name(&self) -> String {
        format!("linear-{}", rational::render(&self.k))
    }

    fn increasing(&self) -> bool {
        true
    }

    fn apply(&self, y: &Element) -> Result<FValue> {
        Ok(FValue::Finite(r::mul_q(y, &self.k)?))
    }

    fn inverse(&self, t: &ExtQ) -> Option<Q> {
        match t {
            ExtQ::Finite(v) if !v.is_negative() && v < &self.k => Some(v / &self.k),
            _ => None,
        }
    }
}

/// `f(y) = 1/y` with `f(0) = +inf`.
#[derive(Debug, Clone, Default)]
pub struct ReciprocalMap;

impl MonotoneMap for ReciprocalMap {
    fn name(&self) -> String {
        "reciprocal".into()
    }

    fn increasing(&self) -> bool {
        false
    }

    fn apply(&self, y: &Element) -> Result<FValue> {
        if r::is_zero(y)? {
            return Ok(FValue::PosInf);
        }
        Ok(FValue::Finite(r::recip(y)?))
    }

    fn inverse(&self, t: &ExtQ) -> Option<Q> {
        match t {
            ExtQ::PosInf => Some(Q::zero()),
            ExtQ::Finite(v) if v > &Q::one() => Some(v.recip()),
            _ => None,
        }
    }
}

#[derive(Clone)]
pub struct FExpansionSpec {
    pub map: Arc<dyn MonotoneMap>,
}

impl FExpansionSpec {
    pub fn new(map: impl MonotoneMap + 'static) -> Self {
        FExpansionSpec { map: Arc::new(map) }
    }
}

/// `P y = floor(f y)`, `E y = f y - floor(f y)`; an infinite `f y` emits an
/// infinite coefficient and expands to 0.
#[derive(Clone)]
pub struct FExpansionSystem {
    spec: FExpansionSpec,
}

impl FExpansionSystem {
    pub fn new(spec: FExpansionSpec) -> Self {
        FExpansionSystem { spec }
    }

    fn forward(&self, y: &Element) -> Result<(CoefficientValue, Element)> {
        r::require_unit(y, false, &self.id())?;
        match self.spec.map.apply(y)? {
            FValue::PosInf => Ok((CoefficientValue::Ext(ExtInt::PosInf), Element::zero())),
            FValue::NegInf => Ok((CoefficientValue::Ext(ExtInt::NegInf), Element::zero())),
            FValue::Finite(v) => {
                let c = r::floor(&v)?;
                let rest = r::add_q(&v, &-Q::from_integer(c.clone()))?;
                Ok((CoefficientValue::Ext(ExtInt::Finite(c)), rest))
            }
        }
    }
}

impl ExpansionSystem for FExpansionSystem {
    fn id(&self) -> String {
        format!("fexp-{}", self.spec.map.name())
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

    fn project(&self, _level: usize, y: &Element) -> Result<CoefficientValue> {
        Ok(self.forward(y)?.0)
    }

    fn expand(&self, _level: usize, y: &Element) -> Result<Element> {
        Ok(self.forward(y)?.1)
    }

    fn step(&self, _level: usize, y: &Element) -> Result<(CoefficientValue, Element)> {
        self.forward(y)
    }

    /// `f^{-1}(c + t)`, accepted only if applying `F` gives back `(c, t)`.
    fn reconstruct(&self, _level: usize, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
        let CoefficientValue::Ext(e) = c else {
            return Ok(None);
        };
        let Some(t) = y.as_rational() else {
            return Err(Error::domain("f-expansion reconstruction needs an exact rational tail"));
        };
        let target = match e {
            ExtInt::Finite(n) => ExtQ::Finite(Q::from_integer(n.clone()) + t),
            ExtInt::PosInf if t.is_zero() => ExtQ::PosInf,
            ExtInt::NegInf if t.is_zero() => ExtQ::NegInf,
            _ => return Ok(None),
        };
        let Some(x) = self.spec.map.inverse(&target) else {
            return Ok(None);
        };
        if x.is_negative() || x >= Q::one() {
            return Ok(None);
        }
        let cand = Element::Rational(x);
        let (c2, t2) = self.forward(&cand)?;
        Ok((&c2 == c && t2 == Element::Rational(t.clone())).then_some(cand))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::system::{coefficient_code, convergent};

    #[test]
    fn beta_expansion_golden_ratio_like() {
        let sys = FExpansionSystem::new(FExpansionSpec::new(LinearMap::new(q(3, 2)).unwrap()));
        let y = Element::Rational(q(1, 2));
        let code = coefficient_code(&sys, &y, 6).unwrap();
        for c in &code.values {
            let CoefficientValue::Ext(ExtInt::Finite(n)) = c else { panic!() };
            assert!(n == &0.into() || n == &1.into());
        }
        let t = convergent(&sys, &code.values, 6).unwrap();
        assert!(t.verdict.is_proper());
    }

    #[test]
    fn reciprocal_matches_cf_on_seven_tenths() {
        let sys = FExpansionSystem::new(FExpansionSpec::new(ReciprocalMap));
        let code = coefficient_code(&sys, &Element::Rational(q(7, 10)), 4).unwrap();
        assert_eq!(code.to_string(), "1 2 3 inf");
    }

    #[test]
    fn out_of_image_is_improper() {
        let sys = FExpansionSystem::new(FExpansionSpec::new(LinearMap::new(q(10, 1)).unwrap()));
        let c = CoefficientValue::ext(10);
        assert_eq!(sys.reconstruct(0, &c, &Element::zero()).unwrap(), None);
    }

    #[test]
    fn zero_with_increasing_map_is_fixed() {
        let sys = FExpansionSystem::new(FExpansionSpec::new(LinearMap::new(q(10, 1)).unwrap()));
        let (c, e) = sys.step(0, &Element::zero()).unwrap();
        assert_eq!(c, CoefficientValue::ext(0));
        assert_eq!(e, Element::zero());
    }
}
