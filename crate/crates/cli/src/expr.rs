//! Input expressions.
//!
//! Grammar (LL(1)):
//!
//! ```text
//! input  := expr ("at" expr)? EOF
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary | juxt)*
//! unary  := "-" unary | power
//! power  := atom ("^" unary)?
//! atom   := NUMBER | "(" expr ")" | IDENT ("(" expr ("," expr)* ")" | power)?
//! ```
//!
//! `juxt` is implicit multiplication by a following atom (`2x`, `3 pi`). A known
//! function name followed by an atom other than `(` applies to that power
//! expression (`tan x`). Unknown identifiers spelled only with `x` and `i` are
//! products of those letters (`ix`).

use expsys::interval::CertifiedReal;
use expsys::rational::{self, Q};
use expsys::series::{cq, cq_real, Polynomial, PowerSeries, TrigPolynomial, CQ};
use expsys::{Element, Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Num(Q),
    Ident(String),
    Call(String, Vec<Ast>),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Box<Ast>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub expr: Ast,
    pub at: Option<Ast>,
}

const FUNCTIONS: &[&str] = &[
    "sqrt", "frac", "exp", "log", "sin", "cos", "tan", "sinh", "cosh", "tanh", "pow", "lambertw",
];

fn parse_error(pos: usize, msg: impl std::fmt::Display) -> Error {
    Error::domain(format!("parse error at column {}: {msg}", pos + 1))
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = rational::parse(&text).map_err(|_| parse_error(start, format!("bad number {text:?}")))?;
            out.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(parse_error(i, format!("unexpected character {c:?}")));
        }
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Tok::Sym(s) if *s == c => {
                self.bump();
                Ok(())
            }
            other => Err(parse_error(self.col(), format!("expected '{c}', found {}", describe(other)))),
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Num(_) | Tok::Sym('(') => true,
            Tok::Ident(s) => s != "at",
            _ => false,
        }
    }

    fn input(&mut self) -> Result<Parsed> {
        let expr = self.expr()?;
        let at = match self.peek() {
            Tok::Ident(s) if s == "at" => {
                self.bump();
                Some(self.expr()?)
            }
            _ => None,
        };
        match self.peek() {
            Tok::End => Ok(Parsed { expr, at }),
            other => Err(parse_error(self.col(), format!("unexpected {}", describe(other)))),
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ if self.starts_atom() => lhs = Ast::Mul(Box::new(lhs), Box::new(self.power()?)),
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.peek() == &Tok::Sym('-') {
            self.bump();
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.peek() == &Tok::Sym('^') {
            self.bump();
            return Ok(Ast::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        let col = self.col();
        match self.bump() {
            Tok::Num(v) => Ok(Ast::Num(v)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if self.peek() == &Tok::Sym('(') {
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while self.peek() == &Tok::Sym(',') {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    return Ok(Ast::Call(name, args));
                }
                if FUNCTIONS.contains(&name.as_str()) && name != "pow" && self.starts_atom() {
                    return Ok(Ast::Call(name, vec![self.power()?]));
                }
                Ok(Ast::Ident(name))
            }
            other => Err(parse_error(col, format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {}", rational::render(v)),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::End => "end of input".into(),
    }
}

pub fn parse(src: &str) -> Result<Parsed> {
    Parser { toks: lex(src)?, pos: 0 }.input()
}

fn unsupported(what: impl std::fmt::Display, ctx: &str) -> Error {
    Error::domain(format!("{what} is not supported in {ctx} context"))
}

fn letters(name: &str) -> Option<Vec<char>> {
    (!name.is_empty() && name.chars().all(|c| c == 'x' || c == 'i')).then(|| name.chars().collect())
}

/// Exact rational value of a constant expression; `i` is bound when `index` is given.
pub fn eval_rational(ast: &Ast, index: Option<usize>) -> Result<Q> {
    let rec = |a: &Ast| eval_rational(a, index);
    Ok(match ast {
        Ast::Num(v) => v.clone(),
        Ast::Ident(s) if s == "i" && index.is_some() => rational::qi(index.unwrap_or(0) as i64),
        Ast::Neg(a) => -rec(a)?,
        Ast::Add(a, b) => rec(a)? + rec(b)?,
        Ast::Sub(a, b) => rec(a)? - rec(b)?,
        Ast::Mul(a, b) => rec(a)? * rec(b)?,
        Ast::Div(a, b) => {
            let d = rec(b)?;
            if d.is_zero() {
                return Err(Error::domain("division by zero"));
            }
            rec(a)? / d
        }
        Ast::Pow(a, b) => {
            let e = integer_exponent(&rec(b)?)?;
            let base = rec(a)?;
            if base.is_zero() && e < 0 {
                return Err(Error::domain("division by zero"));
            }
            rational::pow_i(&base, e)
        }
        other => return Err(unsupported(format!("{other:?}"), "rational")),
    })
}

fn integer_exponent(e: &Q) -> Result<i64> {
    if !e.is_integer() {
        return Err(Error::domain(format!("exponent {} must be an integer here", rational::render(e))));
    }
    e.to_integer().to_i64().ok_or_else(|| Error::domain("exponent too large"))
}

/// Real-number context: exact rationals, or certified intervals at `bits` precision.
pub fn eval_scalar(ast: &Ast, bits: u32) -> Result<CertifiedReal> {
    let rec = |a: &Ast| eval_scalar(a, bits);
    Ok(match ast {
        Ast::Num(v) => CertifiedReal::exact(v.clone(), bits),
        Ast::Ident(s) => match s.as_str() {
            "pi" => CertifiedReal::pi(bits),
            "e" => CertifiedReal::e(bits),
            other => return Err(unsupported(format!("identifier '{other}'"), "scalar")),
        },
        Ast::Call(f, args) => match (f.as_str(), args.as_slice()) {
            ("sqrt", [a]) => rec(a)?.sqrt()?,
            ("frac", [a]) => rec(a)?.frac()?,
            (name, _) => return Err(unsupported(format!("function '{name}'"), "scalar")),
        },
        Ast::Neg(a) => rec(a)?.neg(),
        Ast::Add(a, b) => rec(a)?.add(&rec(b)?),
        Ast::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        Ast::Mul(a, b) => rec(a)?.mul(&rec(b)?),
        Ast::Div(a, b) => rec(a)?.div(&rec(b)?)?,
        Ast::Pow(a, b) => rec(a)?.powi(integer_exponent(&eval_rational(b, None)?)?)?,
    })
}

pub fn scalar_element(ast: &Ast, bits: u32) -> Result<Element> {
    let v = eval_scalar(ast, bits)?;
    Ok(match v.as_exact() {
        Some(x) => Element::Rational(x.clone()),
        None => Element::Interval(v),
    })
}

pub fn eval_polynomial(ast: &Ast) -> Result<Polynomial> {
    Ok(match ast {
        Ast::Num(v) => Polynomial::constant(v.clone()),
        Ast::Ident(s) if s == "x" => Polynomial::x(),
        Ast::Ident(s) => match letters(s) {
            Some(cs) if cs.iter().all(|&c| c == 'x') => Polynomial::x().powi(cs.len()),
            _ => return Err(unsupported(format!("identifier '{s}'"), "polynomial")),
        },
        Ast::Neg(a) => eval_polynomial(a)?.neg(),
        Ast::Add(a, b) => eval_polynomial(a)?.add(&eval_polynomial(b)?),
        Ast::Sub(a, b) => eval_polynomial(a)?.sub(&eval_polynomial(b)?),
        Ast::Mul(a, b) => eval_polynomial(a)?.mul(&eval_polynomial(b)?),
        Ast::Div(a, b) => {
            let d = eval_rational(b, None)?;
            if d.is_zero() {
                return Err(Error::domain("division by zero"));
            }
            eval_polynomial(a)?.scale(&d.recip())
        }
        Ast::Pow(a, b) => {
            let e = integer_exponent(&eval_rational(b, None)?)?;
            let e = usize::try_from(e).map_err(|_| Error::domain("negative power of a polynomial"))?;
            eval_polynomial(a)?.powi(e)
        }
        Ast::Call(f, _) => return Err(unsupported(format!("function '{f}'"), "polynomial")),
    })
}

/// `a` such that the expression equals `a*x`, with `i` the imaginary unit.
fn linear_in_x(ast: &Ast) -> Result<CQ> {
    fn go(ast: &Ast) -> Result<(CQ, usize)> {
        Ok(match ast {
            Ast::Num(v) => (cq_real(v.clone()), 0),
            Ast::Ident(s) => match letters(s) {
                Some(cs) => cs.iter().fold((cq_real(Q::one()), 0), |(c, k), ch| {
                    if *ch == 'i' {
                        (c * cq(Q::zero(), Q::one()), k)
                    } else {
                        (c, k + 1)
                    }
                }),
                None => return Err(unsupported(format!("identifier '{s}'"), "trigonometric")),
            },
            Ast::Neg(a) => {
                let (c, k) = go(a)?;
                (-c, k)
            }
            Ast::Mul(a, b) => {
                let (c1, k1) = go(a)?;
                let (c2, k2) = go(b)?;
                (c1 * c2, k1 + k2)
            }
            Ast::Add(a, b) | Ast::Sub(a, b) => {
                let (c1, k1) = go(a)?;
                let (c2, k2) = go(b)?;
                if k1 != k2 {
                    return Err(Error::domain("trigonometric arguments must be multiples of x"));
                }
                (if matches!(ast, Ast::Add(..)) { c1 + c2 } else { c1 - c2 }, k1)
            }
            _ => return Err(Error::domain("trigonometric arguments must be multiples of x")),
        })
    }
    match go(ast)? {
        (c, 1) => Ok(c),
        _ => Err(Error::domain("trigonometric arguments must be k*x for an integer k")),
    }
}

fn integer_mode(c: &Q) -> Result<i64> {
    if !c.is_integer() {
        return Err(Error::domain(format!("frequency {} is not an integer", rational::render(c))));
    }
    c.to_integer().to_i64().ok_or_else(|| Error::domain("frequency too large"))
}

pub fn eval_trig(ast: &Ast) -> Result<TrigPolynomial> {
    Ok(match ast {
        Ast::Num(v) => TrigPolynomial::constant(cq_real(v.clone())),
        Ast::Ident(s) if s == "i" => TrigPolynomial::constant(cq(Q::zero(), Q::one())),
        Ast::Ident(s) => return Err(unsupported(format!("identifier '{s}'"), "trigonometric")),
        Ast::Call(f, args) if args.len() == 1 => {
            let a = linear_in_x(&args[0])?;
            match f.as_str() {
                "cos" | "sin" if a.im.is_zero() => {
                    let k = integer_mode(&a.re)?;
                    if f == "cos" {
                        TrigPolynomial::cos_kx(k)
                    } else {
                        TrigPolynomial::sin_kx(k)
                    }
                }
                "exp" if a.re.is_zero() => TrigPolynomial::exp_ikx(integer_mode(&a.im)?),
                _ => return Err(Error::domain(format!("{f}({}) is not a trigonometric polynomial", render_cq_arg(&a)))),
            }
        }
        Ast::Call(f, _) => return Err(unsupported(format!("function '{f}'"), "trigonometric")),
        Ast::Neg(a) => eval_trig(a)?.neg(),
        Ast::Add(a, b) => eval_trig(a)?.add(&eval_trig(b)?),
        Ast::Sub(a, b) => eval_trig(a)?.sub(&eval_trig(b)?),
        Ast::Mul(a, b) => eval_trig(a)?.mul(&eval_trig(b)?),
        Ast::Div(a, b) => {
            let d = eval_rational(b, None)?;
            if d.is_zero() {
                return Err(Error::domain("division by zero"));
            }
            eval_trig(a)?.scale(&cq_real(d.recip()))
        }
        Ast::Pow(a, b) => {
            let e = integer_exponent(&eval_rational(b, None)?)?;
            let e = usize::try_from(e).map_err(|_| Error::domain("negative power of a trigonometric polynomial"))?;
            let base = eval_trig(a)?;
            (0..e).fold(TrigPolynomial::constant(cq_real(Q::one())), |acc, _| acc.mul(&base))
        }
    })
}

fn render_cq_arg(a: &CQ) -> String {
    format!("({})x", expsys::series::render_cq(a))
}

/// Power-series context at `x0`, truncated at `order`.
pub struct SeriesContext {
    pub x0: Q,
    pub order: usize,
}

impl SeriesContext {
    fn var(&self) -> PowerSeries {
        PowerSeries::exact(self.x0.clone(), vec![self.x0.clone(), Q::one()])
    }

    fn trunc(&self, s: &PowerSeries) -> PowerSeries {
        s.ensure_order(self.order)
    }

    /// Splits `s = c (1 + g)`; `c` must be nonzero.
    fn normalize(&self, s: &PowerSeries, what: &str) -> Result<(Q, PowerSeries)> {
        let c = s.constant_term();
        if c.is_zero() {
            return Err(Error::domain(format!("{what} needs a nonzero constant term at the base point")));
        }
        Ok((c.clone(), s.scale(&c.recip())))
    }

    fn power(&self, s: &PowerSeries, e: &Q) -> Result<PowerSeries> {
        if e.is_integer() && !e.is_negative() {
            let n = e.to_integer().to_usize().ok_or_else(|| Error::domain("exponent too large"))?;
            return (0..n).try_fold(PowerSeries::one(self.x0.clone()), |acc, _| acc.mul(s));
        }
        let (c, u) = self.normalize(s, "a fractional or negative power")?;
        let ce = rational::rational_pow(&c, e).ok_or_else(|| {
            Error::domain(format!(
                "{}^{} is irrational; rescale the input",
                rational::render(&c),
                rational::render(e)
            ))
        })?;
        Ok(self.trunc(&u).pow(e)?.scale(&ce))
    }

    fn zero_constant<'a>(&self, s: &'a PowerSeries, f: &str) -> Result<&'a PowerSeries> {
        if !s.constant_term().is_zero() {
            return Err(Error::domain(format!(
                "{f} of a series with nonzero value {} at the base point has irrational coefficients",
                rational::render(&s.constant_term())
            )));
        }
        Ok(s)
    }

    fn lambert_w(&self, s: &PowerSeries) -> Result<PowerSeries> {
        let g = self.trunc(self.zero_constant(s, "lambertw")?);
        // W(z) = sum_{n>=1} (-n)^(n-1)/n! z^n, composed by Horner's rule.
        let coeff = |n: usize| {
            let num = BigInt::from(-(n as i64)).pow(n as u32 - 1);
            Q::new(num, rational::factorial(n))
        };
        let mut acc = PowerSeries::constant(self.x0.clone(), coeff(self.order));
        for n in (1..self.order).rev() {
            acc = acc.mul(&g)?.add_constant(&coeff(n));
        }
        acc.mul(&g)
    }

    fn call(&self, f: &str, args: &[Ast]) -> Result<PowerSeries> {
        if f == "pow" {
            return match args {
                [a] => self.power(&self.var(), &eval_rational(a, None)?),
                [a, b] => self.power(&self.eval(b)?, &eval_rational(a, None)?),
                _ => Err(Error::domain("pow takes an exponent and an optional base")),
            };
        }
        let [arg] = args else {
            return Err(Error::domain(format!("{f} takes one argument")));
        };
        let s = self.eval(arg)?;
        match f {
            "sqrt" => self.power(&s, &rational::q(1, 2)),
            "exp" => self.trunc(self.zero_constant(&s, "exp")?).exp(),
            "log" => {
                let (c, u) = self.normalize(&s, "log")?;
                if !c.is_one() {
                    return Err(Error::domain("log of a series needs value 1 at the base point"));
                }
                self.trunc(&u).log()
            }
            "sin" | "cos" | "tan" | "sinh" | "cosh" | "tanh" => {
                let hyper = f.ends_with('h');
                let (sn, cs) = self.trunc(self.zero_constant(&s, f)?).sin_cos(hyper)?;
                match f {
                    "sin" | "sinh" => Ok(sn),
                    "cos" | "cosh" => Ok(cs),
                    _ => sn.div(&cs),
                }
            }
            "lambertw" => self.lambert_w(&s),
            other => Err(unsupported(format!("function '{other}'"), "series")),
        }
    }

    pub fn eval(&self, ast: &Ast) -> Result<PowerSeries> {
        Ok(match ast {
            Ast::Num(v) => PowerSeries::constant(self.x0.clone(), v.clone()),
            Ast::Ident(s) if s == "x" => self.var(),
            Ast::Ident(s) if FUNCTIONS.contains(&s.as_str()) && s != "pow" => {
                self.call(s, &[Ast::Ident("x".into())])?
            }
            Ast::Ident(s) => match letters(s) {
                Some(cs) if cs.iter().all(|&c| c == 'x') => self.power(&self.var(), &rational::qi(cs.len() as i64))?,
                _ => return Err(unsupported(format!("identifier '{s}'"), "series")),
            },
            Ast::Call(f, args) => self.call(f, args)?,
            Ast::Neg(a) => self.eval(a)?.neg(),
            Ast::Add(a, b) => self.eval(a)?.add(&self.eval(b)?)?,
            Ast::Sub(a, b) => self.eval(a)?.sub(&self.eval(b)?)?,
            Ast::Mul(a, b) => self.eval(a)?.mul(&self.eval(b)?)?,
            Ast::Div(a, b) => {
                let d = self.eval(b)?;
                let n = self.eval(a)?;
                if d.is_exact() && d.coeffs().len() <= 1 {
                    let c = d.constant_term();
                    if c.is_zero() {
                        return Err(Error::domain("division by zero"));
                    }
                    n.scale(&c.recip())
                } else {
                    self.trunc(&n).div(&self.trunc(&d))?
                }
            }
            Ast::Pow(a, b) if matches!(a.as_ref(), Ast::Ident(s) if s == "e") => {
                self.trunc(self.zero_constant(&self.eval(b)?, "exp")?).exp()?
            }
            Ast::Pow(a, b) => self.power(&self.eval(a)?, &eval_rational(b, None)?)?,
        })
    }

    /// Exact polynomials stay exact; everything else is cut to the context order.
    pub fn element(&self, ast: &Ast) -> Result<Element> {
        let s = self.eval(ast)?;
        Ok(Element::Series(if s.is_exact() { s } else { s.with_order(self.order.min(s.trunc().unwrap_or(self.order))) }))
    }
}

/// Complex number with `i` as the imaginary unit, for path nodes.
pub fn eval_complex(ast: &Ast) -> Result<Complex64> {
    Ok(match ast {
        Ast::Num(v) => Complex64::new(rational::to_f64(v), 0.0),
        Ast::Ident(s) if s == "i" => Complex64::i(),
        Ast::Ident(s) if s == "pi" => Complex64::new(std::f64::consts::PI, 0.0),
        Ast::Neg(a) => -eval_complex(a)?,
        Ast::Add(a, b) => eval_complex(a)? + eval_complex(b)?,
        Ast::Sub(a, b) => eval_complex(a)? - eval_complex(b)?,
        Ast::Mul(a, b) => eval_complex(a)? * eval_complex(b)?,
        Ast::Div(a, b) => eval_complex(a)? / eval_complex(b)?,
        other => return Err(unsupported(format!("{other:?}"), "complex")),
    })
}

/// Splits on commas outside parentheses.
pub fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}
