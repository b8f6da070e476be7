//! Built-in systems addressable by id.

use std::sync::Arc;

use expsys::approx::{AlphaSchedule, ApproximationSystem, AsConfig, Nonlinearity, Transform};
use expsys::rational::Q;
use expsys::real::{
    BaseSystem, ContinuedFractionSystem, DecimalExtSystem, EgyptianSystem, EngelSystem, FExpansionSpec,
    FExpansionSystem, LinearMap, ReciprocalMap,
};
use expsys::series::{FourierSystem, NewtonBackwardSystem, NewtonForwardSystem, NormRestrictedTaylor, TaylorSystem};
use expsys::{Error, Result, SystemRef};

use crate::expr;

pub const LISTING: &[(&str, &str)] = &[
    ("decimal", "base-10 digits on [0,1)"),
    ("binary", "base-2 digits on [0,1)"),
    ("base<b>", "base-b digits on [0,1), b >= 2"),
    ("decimal-ext", "decimal digits on [0,inf) with a magnitude prefix at level 0"),
    ("cf", "regular continued fractions on [0,1]"),
    ("egyptian", "greedy Egyptian fractions on [0,1)"),
    ("engel", "Engel expansions on [0,1)"),
    ("fexp-reciprocal", "f-expansion with f(y) = 1/y"),
    ("fexp-linear-<k>", "f-expansion with f(y) = k y, k > 1 rational"),
    ("taylor[@x0]", "Taylor coefficients of a series"),
    ("newton-forward", "Newton forward differences of a polynomial"),
    ("newton-backward", "Newton backward differences of a polynomial"),
    ("fourier", "Fourier mode pairs of a trigonometric polynomial"),
    ("norm-fixture", "Taylor on polynomials with sup-norm at most 1 on [0,1]"),
    ("as-<d|k|kd>-<power[alpha]|logexp>[@x0]", "approximation system on germs"),
];

pub fn transform(s: &str) -> Result<Transform> {
    match s {
        "d" => Ok(Transform::D),
        "k" => Ok(Transform::K),
        "kd" => Ok(Transform::KD),
        other => Err(Error::domain(format!("unknown transform {other:?} (expected d, k or kd)"))),
    }
}

/// A constant, a comma list (last entry repeats), or an expression in `i`.
pub fn alpha_schedule(s: &str) -> Result<AlphaSchedule> {
    let parts = expr::split_top_level(s);
    if parts.len() > 1 {
        let vals = parts
            .iter()
            .map(|p| expr::eval_rational(&expr::parse(p)?.expr, None))
            .collect::<Result<Vec<Q>>>()?;
        return Ok(AlphaSchedule::List(vals));
    }
    let ast = expr::parse(s)?.expr;
    if let Ok(v) = expr::eval_rational(&ast, None) {
        return Ok(AlphaSchedule::Constant(v));
    }
    // Validate now so that a bad expression fails before any expansion runs.
    expr::eval_rational(&ast, Some(0))?;
    Ok(AlphaSchedule::indexed(s.trim(), move |i| expr::eval_rational(&ast, Some(i)).unwrap_or_default()))
}

pub fn nonlinearity(kind: &str, alpha: Option<&str>) -> Result<Nonlinearity> {
    match kind {
        "power" => Ok(Nonlinearity::Power(alpha_schedule(alpha.unwrap_or("1"))?)),
        "logexp" => Ok(Nonlinearity::LogExp),
        other => Err(Error::domain(format!("unknown nonlinearity {other:?} (expected power or logexp)"))),
    }
}

fn parse_q(s: &str) -> Result<Q> {
    expr::eval_rational(&expr::parse(s)?.expr, None)
}

/// Parses ids of the form produced by `AsConfig::id`.
fn as_config(id: &str) -> Result<AsConfig> {
    let rest = &id[3..];
    let (body, x0) = match rest.rfind('@') {
        Some(k) if !rest[k..].contains(']') => (&rest[..k], Some(parse_q(&rest[k + 1..])?)),
        _ => (rest, None),
    };
    let (t, nl) = body.split_once('-').ok_or_else(|| Error::domain(format!("malformed system id {id:?}")))?;
    let nonlin = if nl == "logexp" {
        Nonlinearity::LogExp
    } else if let Some(a) = nl.strip_prefix("power[").and_then(|s| s.strip_suffix(']')) {
        Nonlinearity::Power(alpha_schedule(a)?)
    } else {
        return Err(Error::domain(format!("malformed system id {id:?}")));
    };
    let mut cfg = AsConfig::new(transform(t)?, nonlin);
    if let Some(x0) = x0 {
        cfg = cfg.at(x0);
    }
    Ok(cfg)
}

pub fn resolve_as(id: &str, order: usize) -> Result<Option<AsConfig>> {
    if id.starts_with("as-") {
        Ok(Some(as_config(id)?.with_order(order)))
    } else {
        Ok(None)
    }
}

pub fn resolve(id: &str, series_order: usize) -> Result<SystemRef> {
    let sys: SystemRef = match id {
        "decimal" => Arc::new(BaseSystem::decimal()),
        "binary" => Arc::new(BaseSystem::new(2)?),
        "decimal-ext" => Arc::new(DecimalExtSystem::new()),
        "cf" => Arc::new(ContinuedFractionSystem),
        "egyptian" => Arc::new(EgyptianSystem),
        "engel" => Arc::new(EngelSystem),
        "fexp-reciprocal" => Arc::new(FExpansionSystem::new(FExpansionSpec::new(ReciprocalMap))),
        "taylor" => Arc::new(TaylorSystem::new(Q::default())),
        "newton-forward" => Arc::new(NewtonForwardSystem),
        "newton-backward" => Arc::new(NewtonBackwardSystem),
        "fourier" => Arc::new(FourierSystem::new()),
        "norm-fixture" => Arc::new(NormRestrictedTaylor::new()),
        other => {
            if let Some(b) = other.strip_prefix("base") {
                let b: u32 = b.parse().map_err(|_| Error::domain(format!("bad base in {other:?}")))?;
                Arc::new(BaseSystem::new(b)?)
            } else if let Some(k) = other.strip_prefix("fexp-linear-") {
                Arc::new(FExpansionSystem::new(FExpansionSpec::new(LinearMap::new(parse_q(k)?)?)))
            } else if let Some(x0) = other.strip_prefix("taylor@") {
                Arc::new(TaylorSystem::new(parse_q(x0)?))
            } else if let Some(cfg) = resolve_as(other, series_order)? {
                Arc::new(ApproximationSystem::new(cfg)?)
            } else {
                return Err(Error::domain(format!("unknown system {other:?}; see `systems list`")));
            }
        }
    };
    Ok(sys)
}

/// Base point a series-valued system expects, if it fixes one.
pub fn base_point(id: &str) -> Result<Option<Q>> {
    if let Some(x0) = id.strip_prefix("taylor@") {
        return Ok(Some(parse_q(x0)?));
    }
    Ok(resolve_as(id, 1)?.map(|c| c.x0))
}
