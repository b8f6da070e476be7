use crate::element::{CoefficientKind, CoefficientValue, Element, ElementKind};
use crate::error::{Error, Result};
use crate::series::trig::TrigPolynomial;
use crate::system::ExpansionSystem;

/// Fourier modes peeled off in pairs: level `i` emits `(c_{-i}, c_{+i})` and
/// removes both modes. Level 0 emits `(c_0, c_0)` and removes the mean once.
///
/// Amplitudes are the normalized coefficients `(1/2pi) int e^{-ikt} y(t) dt`, so
/// `E_i` annihilates exactly the projected modes.
#[derive(Debug, Clone, Default)]
pub struct FourierSystem;

impl FourierSystem {
    pub fn new() -> Self {
        FourierSystem
    }

    fn check_level(level: usize, t: &TrigPolynomial) -> Result<()> {
        if t.min_mode().is_some_and(|m| (m as usize) < level) {
            return Err(Error::domain(format!(
                "fourier level {level} element still carries a mode below {level}"
            )));
        }
        Ok(())
    }
}

impl ExpansionSystem for FourierSystem {
    fn id(&self) -> String {
        "fourier".into()
    }

    fn element_kind(&self) -> ElementKind {
        ElementKind::Trig
    }

    fn coefficient_kind(&self) -> CoefficientKind {
        CoefficientKind::Pair
    }

    fn neutral(&self, _level: usize) -> Element {
        Element::Trig(TrigPolynomial::zero())
    }

    fn project(&self, level: usize, y: &Element) -> Result<CoefficientValue> {
        let t = y.as_trig()?;
        Self::check_level(level, t)?;
        let k = level as i64;
        Ok(CoefficientValue::Pair(t.mode(-k), t.mode(k)))
    }

    fn expand(&self, level: usize, y: &Element) -> Result<Element> {
        let t = y.as_trig()?;
        Self::check_level(level, t)?;
        let k = level as i64;
        Ok(Element::Trig(t.without_modes(&[-k, k])))
    }

    fn reconstruct(&self, level: usize, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
        let CoefficientValue::Pair(a, b) = c else {
            return Ok(None);
        };
        let t = y.as_trig()?;
        if t.min_mode().is_some_and(|m| m as usize <= level) {
            return Ok(None);
        }
        let k = level as i64;
        if k == 0 {
            if a != b {
                return Ok(None);
            }
            return Ok(Some(Element::Trig(t.add(&TrigPolynomial::new([(0, a.clone())])))));
        }
        let added = TrigPolynomial::new([(-k, a.clone()), (k, b.clone())]);
        Ok(Some(Element::Trig(t.add(&added))))
    }
}
