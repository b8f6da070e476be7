use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::approx::{eval_convergent_path, AsConfig, QuadSettings};
use crate::element::{CoefficientValue, Element};
use crate::error::{Error, Result};
use crate::interval::CertifiedReal;
use crate::rational::{self, Q};
use crate::system::{coefficient_code, convergent, ExpansionSystem, Verdict};

/// How `y` and `y^[n]` are compared. The metric id is recorded in every report.
#[derive(Debug, Clone)]
pub enum Metric {
    /// `|y - y^[n]|` on real elements.
    Absolute,
    /// `2^-k` with `k` the first level where the codes of `y` and `y^[n]` differ
    /// (0 when they agree through one level past the report depth).
    CoefficientHead,
    /// Largest `|y(x) - y^[n](x)|` over the nodes of a path, with `y^[n]`
    /// evaluated numerically and `y` by its truncated series.
    SupGrid { cfg: AsConfig, path: Vec<Complex64>, quad: QuadSettings },
}

impl Metric {
    pub fn id(&self) -> &'static str {
        match self {
            Metric::Absolute => "abs",
            Metric::CoefficientHead => "head",
            Metric::SupGrid { .. } => "sup-grid",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Distance {
    Exact(Q),
    Interval(CertifiedReal),
    Float(f64),
}

impl Distance {
    pub fn upper_f64(&self) -> f64 {
        match self {
            Distance::Exact(q) => rational::to_f64(q),
            Distance::Interval(iv) => rational::to_f64(iv.hi()),
            Distance::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Distance::Exact(q) => q.is_zero(),
            Distance::Interval(iv) => iv.hi().is_zero(),
            Distance::Float(x) => *x == 0.0,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(q) => write!(f, "{}", rational::render(q)),
            Distance::Interval(iv) => write!(f, "{iv}"),
            Distance::Float(x) => write!(f, "{x:e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub n: usize,
    pub verdict: Verdict,
    /// Absent on improper rows.
    pub distance: Option<Distance>,
    /// First `min(n, 8)` coefficients.
    pub coeffs: Vec<CoefficientValue>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub system_id: String,
    pub element: String,
    pub metric_id: String,
    pub rows: Vec<ReportRow>,
}

fn absolute(y: &Element, yn: &Element) -> Result<Distance> {
    let exact = yn
        .as_rational()
        .ok_or_else(|| Error::domain(format!("absolute metric needs a rational convergent, got {yn}")))?;
    match y {
        Element::Rational(a) => {
            let d = a - exact;
            Ok(Distance::Exact(if d < Q::zero() { -d } else { d }))
        }
        Element::Interval(iv) => Ok(Distance::Interval(iv.add_q(&-exact.clone()).abs())),
        other => Err(Error::domain(format!("absolute metric needs a real element, got {other}"))),
    }
}

fn head(sys: &dyn ExpansionSystem, code: &[CoefficientValue], yn: &Element) -> Result<Distance> {
    let other = coefficient_code(sys, yn, code.len())?;
    Ok(match code.iter().zip(&other.values).position(|(a, b)| a != b) {
        None => Distance::Exact(Q::zero()),
        Some(k) => Distance::Exact(Q::new(BigInt::one(), BigInt::one() << k)),
    })
}

fn sup_grid(cfg: &AsConfig, path: &[Complex64], quad: &QuadSettings, y: &Element, code: &[CoefficientValue], n: usize) -> Result<Distance> {
    let s = y.as_series()?;
    let ev = eval_convergent_path(cfg, code, n, path, quad)?;
    let sup = path
        .iter()
        .zip(&ev.values)
        .map(|(x, v)| (s.eval_complex(*x) - v).norm())
        .fold(0.0, f64::max);
    Ok(Distance::Float(sup))
}

/// One row per `n = 0..=n_max` comparing `y` with its `n`-th convergent.
pub fn convergence_report(
    sys: &dyn ExpansionSystem,
    y: &Element,
    n_max: usize,
    metric: &Metric,
) -> Result<ConvergenceReport> {
    let code = coefficient_code(sys, y, n_max)?;
    // One extra level so the head metric can see where y^[n_max] departs from y.
    let deep = match metric {
        Metric::CoefficientHead => coefficient_code(sys, y, n_max + 1).map(|c| c.values).unwrap_or_else(|_| code.values.clone()),
        _ => code.values.clone(),
    };
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let trace = convergent(sys, &code.values, n)?;
        let distance = match trace.value() {
            None => None,
            Some(yn) => Some(match metric {
                Metric::Absolute => absolute(y, yn)?,
                Metric::CoefficientHead => head(sys, &deep, yn)?,
                Metric::SupGrid { cfg, path, quad } => sup_grid(cfg, path, quad, y, &code.values, n)?,
            }),
        };
        rows.push(ReportRow { n, verdict: trace.verdict, distance, coeffs: code.prefix(n.min(8)).to_vec() });
    }
    Ok(ConvergenceReport { system_id: sys.id(), element: y.to_string(), metric_id: metric.id().into(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::real::{BaseSystem, ContinuedFractionSystem};

    #[test]
    fn decimal_third() {
        let rep = convergence_report(&BaseSystem::decimal(), &Element::Rational(q(1, 3)), 6, &Metric::Absolute).unwrap();
        assert_eq!(rep.rows.len(), 7);
        for row in &rep.rows {
            let want = Q::new(BigInt::one(), BigInt::from(3) * BigInt::from(10).pow(row.n as u32));
            assert_eq!(row.distance, Some(Distance::Exact(want)));
        }
        assert_eq!(rep.metric_id, "abs");
    }

    #[test]
    fn finite_order_reaches_zero() {
        let rep = convergence_report(&ContinuedFractionSystem, &Element::Rational(q(7, 10)), 6, &Metric::Absolute).unwrap();
        assert!(rep.rows[3..].iter().all(|r| r.distance.as_ref().unwrap().is_zero()));
        assert!(!rep.rows[2].distance.as_ref().unwrap().is_zero());
    }

    #[test]
    fn head_metric_agrees_on_prefix() {
        let rep = convergence_report(&BaseSystem::decimal(), &Element::Rational(q(2, 7)), 5, &Metric::CoefficientHead).unwrap();
        for row in &rep.rows {
            assert_eq!(row.distance, Some(Distance::Exact(Q::new(BigInt::one(), BigInt::one() << row.n))));
        }
    }
}
