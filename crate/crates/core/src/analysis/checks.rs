use std::cmp::Ordering;
use std::fmt;

use crate::element::{CoefficientValue, Element};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::real::cmp_reals;
use crate::system::{coefficient_code, convergent, order, CoefficientOrder, ExpansionSystem, OrderResult};

#[derive(Debug, Clone, PartialEq)]
pub enum LevelClass {
    /// No ordered pair reached this level.
    Unclassified,
    Increasing,
    Decreasing,
    /// Two pairs with opposite orientation, each given as the level-`i` elements.
    Violated { witness: Box<[(Element, Element); 2]> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub levels: Vec<LevelClass>,
}

impl MonotonicityReport {
    /// Every level classified and none violated.
    pub fn is_monotonic(&self) -> bool {
        self.levels.iter().all(|l| matches!(l, LevelClass::Increasing | LevelClass::Decreasing))
    }

    pub fn all(&self, class: &LevelClass) -> bool {
        self.levels.iter().all(|l| l == class)
    }
}

impl fmt::Display for LevelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelClass::Unclassified => write!(f, "unclassified"),
            LevelClass::Increasing => write!(f, "increasing"),
            LevelClass::Decreasing => write!(f, "decreasing"),
            LevelClass::Violated { witness } => {
                let [(a, b), (c, d)] = witness.as_ref();
                write!(f, "violated ({a} < {b} and {c} < {d} map in opposite orders)")
            }
        }
    }
}

fn cmp_coefficients(a: &CoefficientValue, b: &CoefficientValue) -> Result<Ordering> {
    use CoefficientValue::*;
    match (a, b) {
        (Int(x), Int(y)) => Ok(x.cmp(y)),
        (Ext(x), Ext(y)) => Ok(x.cmp(y)),
        (Scalar(x), Scalar(y)) => Ok(x.cmp(y)),
        _ => Err(Error::domain(format!("coefficients {a} and {b} are not ordered"))),
    }
}

/// Dictionary order on `C_i x S_{i+1}`, with `C_i` ordered as the system declares.
fn cmp_images(
    order: CoefficientOrder,
    (c1, t1): &(CoefficientValue, Element),
    (c2, t2): &(CoefficientValue, Element),
) -> Result<Ordering> {
    let c = cmp_coefficients(c1, c2)?;
    let c = if order == CoefficientOrder::Reversed { c.reverse() } else { c };
    if c != Ordering::Equal {
        return Ok(c);
    }
    cmp_reals(t1, t2)
}

/// Classifies each `F_i` as increasing or decreasing on the sampled pairs.
///
/// Both trajectories of a pair are followed together; at level `i` the current
/// elements are compared with their images under `F_i`.
pub fn monotonicity_check(
    sys: &dyn ExpansionSystem,
    pairs: &[(Element, Element)],
    depth: usize,
) -> Result<MonotonicityReport> {
    let mut seen: Vec<[Option<(Element, Element)>; 2]> = vec![[None, None]; depth];
    for (a, b) in pairs {
        let (mut y, mut z) = (a.clone(), b.clone());
        for (i, slot) in seen.iter_mut().enumerate() {
            let dir = cmp_reals(&y, &z)?;
            if dir == Ordering::Equal {
                break;
            }
            let fy = sys.step(i, &y)?;
            let fz = sys.step(i, &z)?;
            let img = cmp_images(sys.coefficient_order(), &fy, &fz)?;
            let (lo, hi) = if dir == Ordering::Less { (y.clone(), z.clone()) } else { (z.clone(), y.clone()) };
            let k = if img == dir { 0 } else { 1 };
            if slot[k].is_none() {
                slot[k] = Some((lo, hi));
            }
            y = fy.1;
            z = fz.1;
        }
    }
    let levels = seen
        .into_iter()
        .map(|s| match s {
            [None, None] => LevelClass::Unclassified,
            [Some(_), None] => LevelClass::Increasing,
            [None, Some(_)] => LevelClass::Decreasing,
            [Some(p), Some(q)] => LevelClass::Violated { witness: Box::new([p, q]) },
        })
        .collect();
    Ok(MonotonicityReport { levels })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separation {
    /// First level where the coefficients differ.
    DiffersAt(usize),
    NoneToDepth(usize),
}

/// First differing coefficient for each pair of distinct elements.
pub fn separation_check(
    sys: &dyn ExpansionSystem,
    pairs: &[(Element, Element)],
    depth: usize,
) -> Result<Vec<Separation>> {
    pairs
        .iter()
        .map(|(a, b)| {
            if a == b {
                return Err(Error::domain(format!("separation needs distinct elements, got {a} twice")));
            }
            let ca = coefficient_code(sys, a, depth)?;
            let cb = coefficient_code(sys, b, depth)?;
            Ok(match ca.values.iter().zip(&cb.values).position(|(x, y)| x != y) {
                Some(i) => Separation::DiffersAt(i),
                None => Separation::NoneToDepth(depth),
            })
        })
        .collect()
}

/// A finite-order element strictly between `a < b`, found among the
/// convergents of the midpoint.
pub fn finite_order_witness(
    sys: &dyn ExpansionSystem,
    a: &Q,
    b: &Q,
    max_depth: usize,
) -> Result<Option<(Q, usize)>> {
    if a >= b {
        return Err(Error::domain("witness search needs a < b"));
    }
    let mid = Element::Rational((a + b) / Q::from_integer(2.into()));
    let code = coefficient_code(sys, &mid, max_depth)?;
    for n in 0..=max_depth {
        let Some(Element::Rational(w)) = convergent(sys, &code.values, n)?.value().cloned() else {
            continue;
        };
        if &w > a && &w < b {
            if let OrderResult::Finite(k) = order(sys, &Element::Rational(w.clone()), max_depth)? {
                return Ok(Some((w, k)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::real::{BaseSystem, ContinuedFractionSystem, EgyptianSystem};

    fn pairs(v: &[(i64, i64, i64, i64)]) -> Vec<(Element, Element)> {
        v.iter().map(|&(a, b, c, d)| (Element::Rational(q(a, b)), Element::Rational(q(c, d)))).collect()
    }

    #[test]
    fn decimal_increasing_cf_decreasing() {
        let p = pairs(&[(1, 7, 2, 7), (1, 3, 5, 13), (11, 97, 12, 97), (3, 10, 31, 100)]);
        let dec = monotonicity_check(&BaseSystem::decimal(), &p, 2).unwrap();
        assert!(dec.all(&LevelClass::Increasing), "{:?}", dec);
        let cf = monotonicity_check(&ContinuedFractionSystem, &p, 2).unwrap();
        assert!(cf.all(&LevelClass::Decreasing), "{:?}", cf);
        let eg = monotonicity_check(&EgyptianSystem, &p, 2).unwrap();
        assert!(eg.all(&LevelClass::Increasing), "{:?}", eg);
    }

    #[test]
    fn separation_of_close_thirds() {
        let a = Element::Rational(q(1, 3));
        let b = Element::Rational(q(1, 3) + q(1, 10_000_000));
        let r = separation_check(&BaseSystem::decimal(), &[(a.clone(), b)], 10).unwrap();
        assert_eq!(r, vec![Separation::DiffersAt(6)]);
        assert!(separation_check(&BaseSystem::decimal(), &[(a.clone(), a)], 3).is_err());
    }

    #[test]
    fn witness_between_close_rationals() {
        let (w, k) = finite_order_witness(&ContinuedFractionSystem, &q(1, 3), &q(34, 100), 40).unwrap().unwrap();
        assert!(w > q(1, 3) && w < q(34, 100));
        assert!(k > 0);
    }
}
