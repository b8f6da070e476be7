//! Numerical evaluation of approximation-system convergents along a polyline.
//!
//! The nested reconstruction is evaluated innermost level first. Each level is a
//! function of the polyline parameter `s` (segment `j` is `s in [j, j+1]`) stored
//! as piecewise Chebyshev interpolants; integration is done on the expansions,
//! so every level is available at arbitrary `s` for the next one.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use crate::approx::config::{AsConfig, Nonlinearity, Transform};
use crate::element::CoefficientValue;
use crate::error::{Error, Result};
use crate::rational::{self, NatOrInf};

#[derive(Debug, Clone)]
pub struct QuadSettings {
    /// Target absolute accuracy of the final values.
    pub tol: f64,
    /// Chebyshev degree per panel.
    pub degree: usize,
    /// Maximum bisection depth of a segment.
    pub max_depth: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings { tol: 1e-10, degree: 24, max_depth: 30 }
    }
}

#[derive(Debug, Clone)]
pub struct PathEvaluation {
    pub nodes: Vec<Complex64>,
    pub values: Vec<Complex64>,
    /// Pessimistic bound on the absolute error of `values`.
    pub error_estimate: f64,
    pub panels: usize,
}

#[derive(Debug, Clone)]
struct Panel {
    a: f64,
    b: f64,
    coeffs: Vec<Complex64>,
}

impl Panel {
    fn eval(&self, s: f64) -> Complex64 {
        let t = (2.0 * s - self.a - self.b) / (self.b - self.a);
        clenshaw(&self.coeffs, t)
    }
}

fn clenshaw(c: &[Complex64], t: f64) -> Complex64 {
    let mut b1 = Complex64::zero();
    let mut b2 = Complex64::zero();
    for ck in c.iter().skip(1).rev() {
        let b0 = ck + b1 * (2.0 * t) - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + b1 * t - b2
}

/// Chebyshev coefficients from values at the Lobatto nodes `cos(pi j / d)`, `j = 0..=d`.
fn cheb_coeffs(vals: &[Complex64]) -> Vec<Complex64> {
    let d = vals.len() - 1;
    (0..=d)
        .map(|k| {
            let mut s = Complex64::zero();
            for (j, v) in vals.iter().enumerate() {
                let w = if j == 0 || j == d { 0.5 } else { 1.0 };
                s += v * (w * (PI * (j * k) as f64 / d as f64).cos());
            }
            let scale = if k == 0 || k == d { 1.0 / d as f64 } else { 2.0 / d as f64 };
            s * scale
        })
        .collect()
}

/// Antiderivative coefficients on `[-1, 1]`, vanishing at `t = -1`.
fn cheb_integral(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len();
    let get = |k: usize| if k < n { c[k] } else { Complex64::zero() };
    let mut out = vec![Complex64::zero(); n + 1];
    for (k, o) in out.iter_mut().enumerate().skip(1) {
        let prev = if k == 1 { get(0) * 2.0 } else { get(k - 1) };
        *o = (prev - get(k + 1)) / (2.0 * k as f64);
    }
    let at_minus_one: Complex64 =
        out.iter().enumerate().skip(1).map(|(k, v)| if k % 2 == 0 { *v } else { -*v }).sum();
    out[0] = -at_minus_one;
    out
}

/// A level function: constant, or piecewise Chebyshev in `s`.
#[derive(Debug, Clone)]
enum Level {
    Constant(Complex64),
    Panels(Vec<Panel>),
}

impl Level {
    fn eval(&self, s: f64) -> Complex64 {
        match self {
            Level::Constant(v) => *v,
            Level::Panels(ps) => {
                let i = ps.partition_point(|p| p.b < s).min(ps.len() - 1);
                ps[i].eval(s)
            }
        }
    }

    fn min_abs(&self, samples: &[f64]) -> f64 {
        samples.iter().map(|&s| self.eval(s).norm()).fold(f64::INFINITY, f64::min)
    }
}

struct Polyline {
    pts: Vec<Complex64>,
}

impl Polyline {
    fn segments(&self) -> usize {
        self.pts.len() - 1
    }

    fn point(&self, s: f64) -> Complex64 {
        let j = (s.floor() as usize).min(self.segments() - 1);
        let u = s - j as f64;
        self.pts[j] + (self.pts[j + 1] - self.pts[j]) * u
    }

    fn velocity(&self, j: usize) -> Complex64 {
        self.pts[j + 1] - self.pts[j]
    }

    fn length(&self) -> f64 {
        (0..self.segments()).map(|j| self.velocity(j).norm()).sum()
    }
}

struct LevelSpec {
    b: Complex64,
    c: Complex64,
    m: usize,
    inv_alpha: Option<f64>,
}

/// Value of `N^{-1}(v)` with a continuous logarithm branch `prev_log` tracking.
fn inverse_nonlinear(spec: &LevelSpec, v: Complex64, prev_log: &mut Complex64) -> Result<Complex64> {
    match spec.inv_alpha {
        None => Ok(v.exp()),
        Some(e) => {
            if v.norm() < 1e-280 || !v.is_finite() {
                return Err(Error::SingularityOnPath(format!("inner level reaches {v}")));
            }
            let mut l = v.ln();
            let k = ((prev_log.im - l.im) / (2.0 * PI)).round();
            l.im += 2.0 * PI * k;
            *prev_log = l;
            Ok((l * e).exp())
        }
    }
}

struct Fitter<'a> {
    path: &'a Polyline,
    inner: &'a Level,
    spec: &'a LevelSpec,
    x0: Complex64,
    quad: &'a QuadSettings,
    fit_tol: f64,
}

struct FitOut {
    panels: Vec<Panel>,
    /// Sum over panels of tail size times panel length.
    weighted_tail: f64,
    max_tail: f64,
    sup: f64,
}

impl Fitter<'_> {
    fn integrand(&self, s: f64, log_state: &mut Complex64) -> Result<Complex64> {
        let w = self.path.point(s) - self.x0;
        let v = self.inner.eval(s);
        let g = self.spec.c * w.powu(self.spec.m as u32) * inverse_nonlinear(self.spec, v, log_state)?;
        if !g.is_finite() || g.norm() > 1e150 {
            return Err(Error::SingularityOnPath(format!("integrand blows up near x = {}", self.path.point(s))));
        }
        Ok(g)
    }

    /// Fits the integrand on `[a, b]`, splitting until the Chebyshev tail is small.
    fn fit(&self, a: f64, b: f64, log_a: Complex64, depth: usize, out: &mut FitOut) -> Result<Complex64> {
        let d = self.quad.degree;
        let mut log_state = log_a;
        let mut vals = vec![Complex64::zero(); d + 1];
        // Ascending s means descending node index, so the log branch follows the path.
        for j in (0..=d).rev() {
            let t = (PI * j as f64 / d as f64).cos();
            let s = 0.5 * (a + b) + 0.5 * (b - a) * t;
            vals[j] = self.integrand(s, &mut log_state)?;
        }
        let coeffs = cheb_coeffs(&vals);
        let scale = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let tail = coeffs[d - 2..].iter().map(|c| c.norm()).fold(0.0, f64::max);
        if tail > self.fit_tol * scale {
            if depth >= self.quad.max_depth {
                return Err(Error::QuadratureFailure(format!(
                    "no convergence on [{a}, {b}] after {depth} bisections (tail {tail:e})"
                )));
            }
            let mid = 0.5 * (a + b);
            let log_mid = self.fit(a, mid, log_a, depth + 1, out)?;
            return self.fit(mid, b, log_mid, depth + 1, out);
        }
        out.sup = vals.iter().map(|v| v.norm()).fold(out.sup, f64::max);
        out.weighted_tail += tail * (b - a);
        out.max_tail = out.max_tail.max(tail);
        out.panels.push(Panel { a, b, coeffs });
        Ok(log_state)
    }
}

fn level_specs(cfg: &AsConfig, code: &[CoefficientValue], n: usize) -> Result<Vec<Option<LevelSpec>>> {
    let to_c = |q: &rational::Q| Complex64::new(rational::to_f64(q), 0.0);
    (0..n)
        .map(|i| {
            let (b, c, m) = match &code[i] {
                CoefficientValue::As { c, m } => (Complex64::zero(), c, m),
                CoefficientValue::As3 { b, c, m } => (to_c(b), c, m),
                other => return Err(Error::domain(format!("not an approximation-system coefficient: {other}"))),
            };
            let inv_alpha = match &cfg.nonlinearity {
                Nonlinearity::Power(s) => Some(rational::to_f64(&s.at(i).recip())),
                Nonlinearity::LogExp => None,
            };
            Ok(match m {
                NatOrInf::Finite(m) => Some(LevelSpec { b, c: to_c(c), m: *m, inv_alpha }),
                // Neutral branch; KD may still carry a linear term.
                NatOrInf::Infinite if b.is_zero() => None,
                NatOrInf::Infinite => Some(LevelSpec { b, c: Complex64::zero(), m: 0, inv_alpha }),
            })
        })
        .collect()
}

/// Evaluates `y^[n]` at the nodes of a polyline starting at `x0`.
pub fn eval_convergent_path(
    cfg: &AsConfig,
    code: &[CoefficientValue],
    n: usize,
    path: &[Complex64],
    quad: &QuadSettings,
) -> Result<PathEvaluation> {
    if code.len() < n {
        return Err(Error::domain(format!("need {n} coefficients, got {}", code.len())));
    }
    if path.len() < 2 {
        return Err(Error::domain("path needs at least two nodes"));
    }
    let x0 = Complex64::new(rational::to_f64(&cfg.x0), 0.0);
    if (path[0] - x0).norm() > 1e-14 * (1.0 + x0.norm()) {
        return Err(Error::domain("path must start at the base point"));
    }
    let poly = Polyline { pts: path.to_vec() };
    let base = Complex64::new(rational::to_f64(&cfg.base_value()), 0.0);
    let specs = level_specs(cfg, code, n)?;
    let samples: Vec<f64> = (0..=64 * poly.segments()).map(|k| k as f64 / 64.0).collect();
    let length = poly.length();
    // Split the tolerance budget evenly over the levels.
    let fit_tol = (quad.tol / (n.max(1) as f64 * (1.0 + length))).max(1e-15);

    let mut level = Level::Constant(base);
    let mut err = 0.0f64;
    let mut panel_count = 0;
    for i in (0..n).rev() {
        let Some(spec) = &specs[i] else {
            level = Level::Constant(base);
            continue;
        };
        let kappa = match spec.inv_alpha {
            Some(e) => e.abs() / level.min_abs(&samples).max(1e-300),
            None => 1.0,
        };
        let fitter = Fitter { path: &poly, inner: &level, spec, x0, quad, fit_tol };
        let mut out = FitOut { panels: Vec::new(), weighted_tail: 0.0, max_tail: 0.0, sup: 0.0 };
        let start_log = match &level {
            Level::Constant(v) => v.ln(),
            Level::Panels(_) => level.eval(0.0).ln(),
        };
        if spec.c.is_zero() {
            out.panels = (0..poly.segments())
                .map(|j| Panel { a: j as f64, b: j as f64 + 1.0, coeffs: vec![Complex64::zero()] })
                .collect();
        } else {
            let mut log_state = start_log;
            for j in 0..poly.segments() {
                log_state = fitter.fit(j as f64, j as f64 + 1.0, log_state, 0, &mut out)?;
            }
        }
        let propagated = out.sup * kappa * err;
        let mut panels = Vec::with_capacity(out.panels.len());
        let mut offset = Complex64::zero();
        for p in out.panels {
            let j = (p.a.floor() as usize).min(poly.segments() - 1);
            let xv = poly.velocity(j);
            let w_lin = |s: f64| poly.point(s) - x0;
            let coeffs = match cfg.transform {
                Transform::K => {
                    let mut c = p.coeffs.clone();
                    c[0] += base;
                    c
                }
                Transform::D | Transform::KD => {
                    let half = 0.5 * (p.b - p.a);
                    let mut c: Vec<Complex64> = cheb_integral(&p.coeffs).into_iter().map(|v| v * xv * half).collect();
                    c[0] += offset + base;
                    if cfg.transform == Transform::KD {
                        // b (x(s) - x0) is linear on the panel.
                        let mid = w_lin(0.5 * (p.a + p.b));
                        let slope = xv * half;
                        c[0] += spec.b * mid;
                        if c.len() < 2 {
                            c.resize(2, Complex64::zero());
                        }
                        c[1] += spec.b * slope;
                    }
                    let end: Complex64 = cheb_integral(&p.coeffs).iter().sum::<Complex64>() * xv * half;
                    offset += end;
                    c
                }
            };
            panels.push(Panel { a: p.a, b: p.b, coeffs });
        }
        panel_count += panels.len();
        err = match cfg.transform {
            Transform::K => out.max_tail + propagated,
            Transform::D | Transform::KD => {
                let speed = (0..poly.segments()).map(|j| poly.velocity(j).norm()).fold(0.0, f64::max);
                out.weighted_tail * speed + length * propagated
            }
        };
        level = Level::Panels(panels);
    }
    let values = (0..path.len()).map(|k| level.eval(k as f64)).collect();
    Ok(PathEvaluation { nodes: path.to_vec(), values, error_estimate: err, panels: panel_count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_integral_of_constant() {
        let c = vec![Complex64::new(1.0, 0.0)];
        let i = cheb_integral(&c);
        // integral of 1 from -1 to t is t + 1
        assert!((clenshaw(&i, 1.0) - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert!(clenshaw(&i, -1.0).norm() < 1e-15);
    }

    #[test]
    fn chebyshev_fit_reproduces_polynomial() {
        let d = 8;
        let vals: Vec<Complex64> = (0..=d)
            .map(|j| {
                let t = (PI * j as f64 / d as f64).cos();
                Complex64::new(t * t * t - 2.0 * t, 0.0)
            })
            .collect();
        let c = cheb_coeffs(&vals);
        let t = 0.3;
        assert!((clenshaw(&c, t).re - (t * t * t - 2.0 * t)).abs() < 1e-14);
        let ic = cheb_integral(&c);
        let exact = |t: f64| t.powi(4) / 4.0 - t * t;
        assert!((clenshaw(&ic, t).re - (exact(t) - exact(-1.0))).abs() < 1e-14);
    }
}
