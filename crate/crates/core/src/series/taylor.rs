use num_traits::Zero;

use crate::element::{CoefficientKind, CoefficientValue, Element, ElementKind};
use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::series::power_series::PowerSeries;
use crate::system::ExpansionSystem;

/// Taylor coefficients at `x0`: `P y = y(x0)`, `E y = (y - y(x0)) / (x - x0)`.
#[derive(Debug, Clone)]
pub struct TaylorSystem {
    x0: Q,
}

impl TaylorSystem {
    pub fn new(x0: Q) -> Self {
        TaylorSystem { x0 }
    }

    fn series<'a>(&self, y: &'a Element) -> Result<&'a PowerSeries> {
        let s = y.as_series()?;
        if s.x0() != &self.x0 {
            return Err(Error::domain(format!(
                "taylor system at {} got a series at {}",
                rational::render(&self.x0),
                rational::render(s.x0())
            )));
        }
        Ok(s)
    }
}

impl ExpansionSystem for TaylorSystem {
    fn id(&self) -> String {
        if self.x0.is_zero() {
            "taylor".into()
        } else {
            format!("taylor@{}", rational::render(&self.x0))
        }
    }

    fn element_kind(&self) -> ElementKind {
        ElementKind::Series
    }

    fn coefficient_kind(&self) -> CoefficientKind {
        CoefficientKind::Scalar
    }

    fn neutral(&self, _level: usize) -> Element {
        Element::Series(PowerSeries::zero(self.x0.clone()))
    }

    fn project(&self, _level: usize, y: &Element) -> Result<CoefficientValue> {
        Ok(CoefficientValue::Scalar(self.series(y)?.constant_term()))
    }

    fn expand(&self, _level: usize, y: &Element) -> Result<Element> {
        let s = self.series(y)?;
        let c = s.constant_term();
        Ok(Element::Series(s.add_constant(&-c).shift_down(1)?))
    }

    fn reconstruct(&self, _level: usize, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
        let c = c.scalar()?;
        let s = self.series(y)?;
        Ok(Some(Element::Series(s.shift_up(1).add_constant(c))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::system::{coefficient_code, convergent, order, OrderResult};

    #[test]
    fn geometric_series_code() {
        let sys = TaylorSystem::new(Q::zero());
        let geo = PowerSeries::exact(Q::zero(), vec![qi(1), qi(-1)]).with_order(8).recip().unwrap();
        let code = coefficient_code(&sys, &Element::Series(geo), 5).unwrap();
        assert_eq!(code.to_string(), "1 1 1 1 1");
    }

    #[test]
    fn convergent_is_taylor_polynomial() {
        let sys = TaylorSystem::new(Q::zero());
        let s = PowerSeries::truncated(Q::zero(), vec![qi(2), q(1, 3), qi(-4), qi(7)], 3);
        let code = coefficient_code(&sys, &Element::Series(s), 3).unwrap();
        let y3 = convergent(&sys, &code.values, 3).unwrap().into_value().unwrap();
        assert_eq!(y3, Element::Series(PowerSeries::exact(Q::zero(), vec![qi(2), q(1, 3), qi(-4)])));
    }

    #[test]
    fn polynomial_order_is_degree_plus_one() {
        let sys = TaylorSystem::new(Q::zero());
        let p = PowerSeries::exact(Q::zero(), vec![qi(1), qi(0), qi(5)]);
        assert_eq!(order(&sys, &Element::Series(p), 10).unwrap(), OrderResult::Finite(3));
        let z = Element::Series(PowerSeries::zero(Q::zero()));
        assert_eq!(order(&sys, &z, 3).unwrap(), OrderResult::Finite(0));
    }
}
