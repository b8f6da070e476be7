use num_traits::Zero;

use crate::element::{CoefficientKind, CoefficientValue, Element, ElementKind};
use crate::error::Result;
use crate::rational::Q;
use crate::series::polynomial::Polynomial;
use crate::system::ExpansionSystem;

/// Coordinates of `y` in the basis `b_k`, given that `op` lowers `b_k` to `b_{k-1}`
/// and every `b_k` with `k >= 1` vanishes at 0: `a_k = (op^k y)(0)`.
fn newton_coordinates(y: &Polynomial, op: fn(&Polynomial) -> Polynomial) -> Vec<Q> {
    let mut out = Vec::new();
    let mut cur = y.clone();
    while !cur.is_zero() {
        out.push(cur.eval(&Q::zero()));
        cur = op(&cur);
    }
    out
}

/// Solves `op p = y`, `p(0) = c` by raising every basis index by one.
fn lift(c: &Q, y: &Polynomial, op: fn(&Polynomial) -> Polynomial, basis: fn(usize) -> Polynomial) -> Polynomial {
    newton_coordinates(y, op)
        .iter()
        .enumerate()
        .fold(Polynomial::constant(c.clone()), |acc, (k, a)| acc.add(&basis(k + 1).scale(a)))
}

/// Forward differences: `P y = y(0)`, `E y = y(x+1) - y(x)`.
#[derive(Debug, Clone, Default)]
pub struct NewtonForwardSystem;

/// Backward differences: `P y = y(0)`, `E y = y(x) - y(x-1)`.
#[derive(Debug, Clone, Default)]
pub struct NewtonBackwardSystem;

macro_rules! newton_impl {
    ($ty:ident, $id:expr, $op:expr, $basis:expr) => {
        impl $ty {
            pub fn new() -> Self {
                $ty
            }

            /// Direct evaluation of the `n`-th Newton interpolant from a code prefix.
            pub fn interpolant(code: &[Q]) -> Polynomial {
                code.iter()
                    .enumerate()
                    .fold(Polynomial::zero(), |acc, (k, c)| acc.add(&$basis(k).scale(c)))
            }
        }

        impl ExpansionSystem for $ty {
            fn id(&self) -> String {
                $id.into()
            }

            fn element_kind(&self) -> ElementKind {
                ElementKind::Polynomial
            }

            fn coefficient_kind(&self) -> CoefficientKind {
                CoefficientKind::Scalar
            }

            fn neutral(&self, _level: usize) -> Element {
                Element::Polynomial(Polynomial::zero())
            }

            fn project(&self, _level: usize, y: &Element) -> Result<CoefficientValue> {
                Ok(CoefficientValue::Scalar(y.as_polynomial()?.eval(&Q::zero())))
            }

            fn expand(&self, _level: usize, y: &Element) -> Result<Element> {
                Ok(Element::Polynomial($op(y.as_polynomial()?)))
            }

            fn reconstruct(&self, _level: usize, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
                let p = lift(c.scalar()?, y.as_polynomial()?, $op, $basis);
                Ok(Some(Element::Polynomial(p)))
            }
        }
    };
}

newton_impl!(NewtonForwardSystem, "newton-forward", Polynomial::forward_difference, Polynomial::falling_basis);
newton_impl!(NewtonBackwardSystem, "newton-backward", Polynomial::backward_difference, Polynomial::rising_basis);
