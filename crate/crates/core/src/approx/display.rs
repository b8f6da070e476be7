use num_traits::{One, Zero};

use crate::approx::config::{AsConfig, Nonlinearity, Transform};
use crate::element::CoefficientValue;
use crate::error::{Error, Result};
use crate::rational::{self, NatOrInf, Q};

fn var(x0: &Q) -> String {
    if x0.is_zero() {
        "x".into()
    } else if x0 < &Q::zero() {
        format!("(x+{})", rational::render(&-x0.clone()))
    } else {
        format!("(x-{})", rational::render(x0))
    }
}

fn term(c: &Q, m: usize, x: &str) -> String {
    let c = if c.is_integer() { rational::render(c) } else { format!("({})", rational::render(c)) };
    match m {
        0 => c,
        1 => format!("{c}*{x}"),
        _ => format!("{c}*{x}^{m}"),
    }
}

/// Renders the raw nested reconstruction of `y^[n]`, innermost level last.
///
/// Codes are printed as stored; no constants are moved outside integrals.
pub fn nested_form(cfg: &AsConfig, code: &[CoefficientValue], n: usize) -> Result<String> {
    if code.len() < n {
        return Err(Error::domain(format!("need {n} coefficients, got {}", code.len())));
    }
    let base = rational::render(&cfg.base_value());
    let x = var(&cfg.x0);
    let x0 = rational::render(&cfg.x0);
    let mut inner = base.clone();
    for i in (0..n).rev() {
        let (b, c, m) = match &code[i] {
            CoefficientValue::As { c, m } => (None, c, m),
            CoefficientValue::As3 { b, c, m } => (Some(b), c, m),
            other => return Err(Error::domain(format!("not an approximation-system coefficient: {other}"))),
        };
        let mut out = base.clone();
        if let Some(b) = b.filter(|b| !b.is_zero()) {
            out = format!("{out} + {}", term(b, 1, &x));
        }
        if let NatOrInf::Finite(m) = m {
            let lifted = match &cfg.nonlinearity {
                _ if inner == base && cfg.base_value().is_one() => String::new(),
                Nonlinearity::Power(s) => {
                    let e = s.at(i).recip();
                    if e.is_one() {
                        format!("*({inner})")
                    } else {
                        format!("*({inner})^({})", rational::render(&e))
                    }
                }
                Nonlinearity::LogExp => format!("*exp({inner})"),
            };
            let body = format!("{}{lifted}", term(c, *m, &x));
            out = match cfg.transform {
                Transform::K => format!("{out} + {body}"),
                Transform::D | Transform::KD => format!("{out} + int[{x0}..x]({body})"),
            };
        }
        inner = out;
    }
    Ok(inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn ac(c: Q, m: usize) -> CoefficientValue {
        CoefficientValue::As { c, m: NatOrInf::Finite(m) }
    }

    #[test]
    fn two_levels_of_inverse_sqrt() {
        let cfg = AsConfig::power(Transform::D, q(1, 2));
        let code = vec![ac(q(1, 2), 0), ac(q(3, 4), 0)];
        assert_eq!(nested_form(&cfg, &code, 0).unwrap(), "1");
        assert_eq!(nested_form(&cfg, &code, 1).unwrap(), "1 + int[0..x]((1/2))");
        assert_eq!(
            nested_form(&cfg, &code, 2).unwrap(),
            "1 + int[0..x]((1/2)*(1 + int[0..x]((3/4)))^(2))"
        );
    }

    #[test]
    fn k_transform_is_not_integrated() {
        let cfg = AsConfig::logexp(Transform::K);
        let code = vec![ac(q(1, 1), 1), ac(q(-1, 1), 1)];
        assert_eq!(nested_form(&cfg, &code, 2).unwrap(), "0 + 1*x*exp(0 + -1*x*exp(0))");
    }
}
