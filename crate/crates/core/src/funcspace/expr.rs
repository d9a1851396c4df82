//! Scalar expressions of one variable.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' factor)?
//! base   := NUMBER | VAR | IDENT '(' expr ')' | '(' expr ')'
//! IDENT  := exp | ln | sin | cos | sqrt | abs
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`. Real expressions
//! use the variable `x`; complex expressions ([`parse_complex_expr`]) use `p`,
//! and additionally accept the imaginary unit `i` and the function `gamma`.
//!
//! Derivatives are symbolic. The constructors used while differentiating fold
//! constants and drop neutral elements so repeated differentiation stays small.

use std::fmt;
use std::ops;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
    Abs,
    Gamma,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Gamma => "gamma",
        }
    }

    fn from_name(name: &str, grammar: Grammar) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "gamma" if grammar == Grammar::Complex => Func::Gamma,
            _ => return None,
        })
    }

    fn apply(self, v: f64) -> Result<f64> {
        let out = match self {
            Func::Exp => v.exp(),
            Func::Ln => {
                if v <= 0.0 {
                    return Err(Error::domain(format!("ln of non-positive value {v}")));
                }
                v.ln()
            }
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Sqrt => {
                if v < 0.0 {
                    return Err(Error::domain(format!("sqrt of negative value {v}")));
                }
                v.sqrt()
            }
            Func::Abs => v.abs(),
            Func::Gamma => special::gamma_complex(Complex64::new(v, 0.0))?.re,
        };
        Ok(out)
    }

    fn apply_complex(self, z: Complex64) -> Result<Complex64> {
        let out = match self {
            Func::Exp => z.exp(),
            Func::Ln => {
                if z == Complex64::new(0.0, 0.0) {
                    return Err(Error::domain("ln of zero"));
                }
                z.ln()
            }
            Func::Sin => z.sin(),
            Func::Cos => z.cos(),
            Func::Sqrt => z.sqrt(),
            Func::Abs => Complex64::new(z.norm(), 0.0),
            Func::Gamma => special::gamma_complex(z)?,
        };
        Ok(out)
    }
}

/// Which identifiers the parser accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grammar {
    /// Variable `x`, real-valued builtins only.
    Real,
    /// Variable `p`, imaginary unit `i`, plus `gamma`.
    Complex,
}

impl Grammar {
    fn var_name(self) -> &'static str {
        match self {
            Grammar::Real => "x",
            Grammar::Complex => "p",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Imag,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

pub fn parse_expr(source: &str) -> Result<Expr> {
    Parser::new(source, Grammar::Real).parse()
}

pub fn parse_complex_expr(source: &str) -> Result<Expr> {
    Parser::new(source, Grammar::Complex).parse()
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}

impl Expr {
    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        if let Expr::Const(c) = arg {
            if let Ok(v) = func.apply(c) {
                if v.is_finite() && func != Func::Gamma {
                    return Expr::Const(v);
                }
            }
        }
        Expr::Call(func, Box::new(arg))
    }

    pub fn powf(self, exponent: Expr) -> Expr {
        match (&self, &exponent) {
            (_, Expr::Const(e)) if *e == 0.0 => Expr::Const(1.0),
            (_, Expr::Const(e)) if *e == 1.0 => self,
            (Expr::Const(b), Expr::Const(e)) => match pow_real(*b, *e) {
                Ok(v) if v.is_finite() => Expr::Const(v),
                _ => Expr::Pow(Box::new(self), Box::new(exponent)),
            },
            _ => Expr::Pow(Box::new(self), Box::new(exponent)),
        }
    }

    pub fn is_const(&self) -> bool {
        !self.contains_var()
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Imag => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.contains_var(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.contains_var() || b.contains_var(),
        }
    }

    fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var | Expr::Imag => 1,
            Expr::Neg(a) | Expr::Call(_, a) => 1 + a.size(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Imag => return Err(Error::domain("imaginary unit in a real expression")),
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => {
                // exp(u) - 1 loses everything for small u
                if let (Expr::Call(Func::Exp, u), Some(1.0)) = (a.as_ref(), b.as_const()) {
                    return Ok(u.eval(x)?.exp_m1());
                }
                a.eval(x)? - b.eval(x)?
            }
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let den = b.eval(x)?;
                if den == 0.0 {
                    return Err(Error::domain(format!("division by zero at x = {x}")));
                }
                a.eval(x)? / den
            }
            Expr::Pow(a, b) => pow_real(a.eval(x)?, b.eval(x)?)?,
            Expr::Call(Func::Ln, arg) => match arg.as_ref() {
                Expr::Add(l, r) if l.as_const() == Some(1.0) => log1p_checked(r.eval(x)?)?,
                Expr::Add(l, r) if r.as_const() == Some(1.0) => log1p_checked(l.eval(x)?)?,
                _ => Func::Ln.apply(arg.eval(x)?)?,
            },
            Expr::Call(f, a) => f.apply(a.eval(x)?)?,
        };
        if v.is_nan() {
            return Err(Error::domain(format!("NaN produced at x = {x}")));
        }
        Ok(v)
    }

    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        let v = match self {
            Expr::Const(c) => Complex64::new(*c, 0.0),
            Expr::Var => z,
            Expr::Imag => Complex64::i(),
            Expr::Neg(a) => -a.eval_complex(z)?,
            Expr::Add(a, b) => a.eval_complex(z)? + b.eval_complex(z)?,
            Expr::Sub(a, b) => a.eval_complex(z)? - b.eval_complex(z)?,
            Expr::Mul(a, b) => a.eval_complex(z)? * b.eval_complex(z)?,
            Expr::Div(a, b) => {
                let den = b.eval_complex(z)?;
                if den.norm() == 0.0 {
                    return Err(Error::domain(format!("division by zero at p = {z}")));
                }
                a.eval_complex(z)? / den
            }
            Expr::Pow(a, b) => pow_complex(a.eval_complex(z)?, b.eval_complex(z)?)?,
            Expr::Call(f, a) => f.apply_complex(a.eval_complex(z)?)?,
        };
        if v.re.is_nan() || v.im.is_nan() {
            return Err(Error::domain(format!("NaN produced at p = {z}")));
        }
        Ok(v)
    }

    /// Symbolic derivative with respect to the variable.
    pub fn derivative(&self) -> Result<Expr> {
        let d = match self {
            Expr::Const(_) | Expr::Imag => Expr::Const(0.0),
            Expr::Var => Expr::Const(1.0),
            Expr::Neg(a) => -a.derivative()?,
            Expr::Add(a, b) => a.derivative()? + b.derivative()?,
            Expr::Sub(a, b) => a.derivative()? - b.derivative()?,
            Expr::Mul(a, b) => {
                a.derivative()? * b.as_ref().clone() + a.as_ref().clone() * b.derivative()?
            }
            Expr::Div(a, b) => {
                let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
                (a.derivative()? * b.clone() - a * b.derivative()?) / b.powf(Expr::Const(2.0))
            }
            Expr::Pow(a, b) => {
                let (base, exponent) = (a.as_ref().clone(), b.as_ref().clone());
                if !exponent.contains_var() {
                    let lowered = exponent.clone() - Expr::Const(1.0);
                    exponent * base.clone().powf(lowered) * base.derivative()?
                } else if !base.contains_var() {
                    self.clone() * Expr::call(Func::Ln, base) * exponent.derivative()?
                } else {
                    let inner = exponent.derivative()? * Expr::call(Func::Ln, base.clone())
                        + exponent * base.derivative()? / base;
                    self.clone() * inner
                }
            }
            Expr::Call(func, a) => {
                let inner = a.as_ref().clone();
                let da = inner.derivative()?;
                let outer = match func {
                    Func::Exp => self.clone(),
                    Func::Ln => Expr::Const(1.0) / inner,
                    Func::Sin => Expr::call(Func::Cos, inner),
                    Func::Cos => -Expr::call(Func::Sin, inner),
                    Func::Sqrt => Expr::Const(0.5) / self.clone(),
                    Func::Abs => inner.clone() / Expr::call(Func::Abs, inner),
                    Func::Gamma => {
                        return Err(Error::Unsupported(
                            "derivative of gamma is not available".into(),
                        ))
                    }
                };
                outer * da
            }
        };
        Ok(d)
    }

    /// The n-th derivative.
    pub fn nth_derivative(&self, n: usize) -> Result<Expr> {
        let mut e = self.clone();
        for _ in 0..n {
            e = e.derivative()?;
        }
        Ok(e)
    }

    /// Replaces every occurrence of the variable by `inner`, i.e. `self ∘ inner`.
    pub fn substitute(&self, inner: &Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Imag => Expr::Imag,
            Expr::Var => inner.clone(),
            Expr::Neg(a) => -a.substitute(inner),
            Expr::Add(a, b) => a.substitute(inner) + b.substitute(inner),
            Expr::Sub(a, b) => a.substitute(inner) - b.substitute(inner),
            Expr::Mul(a, b) => a.substitute(inner) * b.substitute(inner),
            Expr::Div(a, b) => a.substitute(inner) / b.substitute(inner),
            Expr::Pow(a, b) => a.substitute(inner).powf(b.substitute(inner)),
            Expr::Call(f, a) => Expr::call(*f, a.substitute(inner)),
        }
    }
}

fn log1p_checked(v: f64) -> Result<f64> {
    if v <= -1.0 {
        return Err(Error::domain(format!("ln of non-positive value {}", 1.0 + v)));
    }
    Ok(v.ln_1p())
}

pub(crate) fn pow_real(base: f64, exponent: f64) -> Result<f64> {
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        if base == 0.0 && exponent < 0.0 {
            return Err(Error::domain("zero raised to a negative power"));
        }
        return Ok(base.powi(exponent as i32));
    }
    if base > 0.0 {
        Ok(base.powf(exponent))
    } else if base == 0.0 {
        if exponent > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::domain("zero raised to a non-positive power"))
        }
    } else {
        Err(Error::domain(format!(
            "negative base {base} raised to non-integer power {exponent}"
        )))
    }
}

fn pow_complex(base: Complex64, exponent: Complex64) -> Result<Complex64> {
    if exponent.im == 0.0 && exponent.re.fract() == 0.0 && exponent.re.abs() <= i32::MAX as f64 {
        if base.norm() == 0.0 && exponent.re < 0.0 {
            return Err(Error::domain("zero raised to a negative power"));
        }
        return Ok(base.powi(exponent.re as i32));
    }
    if base.norm() == 0.0 {
        return if exponent.re > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(Error::domain("zero raised to a power with non-positive real part"))
        };
    }
    Ok(base.powc(exponent))
}

impl ops::Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(a) => *a,
            e => Expr::Neg(Box::new(e)),
        }
    }
}

impl ops::Add for Expr {
    type Output = Expr;

    fn add(self, rhs: Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Expr::Const(a + b),
            (Some(a), _) if a == 0.0 => rhs,
            (_, Some(b)) if b == 0.0 => self,
            _ => Expr::Add(Box::new(self), Box::new(rhs)),
        }
    }
}

impl ops::Sub for Expr {
    type Output = Expr;

    fn sub(self, rhs: Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Expr::Const(a - b),
            (Some(a), _) if a == 0.0 => -rhs,
            (_, Some(b)) if b == 0.0 => self,
            _ => Expr::Sub(Box::new(self), Box::new(rhs)),
        }
    }
}

impl ops::Mul for Expr {
    type Output = Expr;

    fn mul(self, rhs: Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Expr::Const(a * b),
            (Some(a), _) | (_, Some(a)) if a == 0.0 => Expr::Const(0.0),
            (Some(a), _) if a == 1.0 => rhs,
            (_, Some(b)) if b == 1.0 => self,
            (Some(a), _) if a == -1.0 => -rhs,
            (_, Some(b)) if b == -1.0 => -self,
            _ => Expr::Mul(Box::new(self), Box::new(rhs)),
        }
    }
}

impl ops::Div for Expr {
    type Output = Expr;

    fn div(self, rhs: Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) if b != 0.0 => Expr::Const(a / b),
            (Some(a), _) if a == 0.0 => Expr::Const(0.0),
            (_, Some(b)) if b == 1.0 => self,
            _ => Expr::Div(Box::new(self), Box::new(rhs)),
        }
    }
}

/// Canonical, fully parenthesised form. Parsing the output gives back the
/// same tree for any tree produced by the parser.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 => write!(f, "(-{:?})", -c),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var => write!(f, "x"),
            Expr::Imag => write!(f, "i"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    grammar: Grammar,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, grammar: Grammar) -> Self {
        Parser { src, pos: 0, grammar }
    }

    fn parse(mut self) -> Result<Expr> {
        let e = self.expr()?;
        self.skip_ws();
        if let Some(c) = self.peek() {
            return Err(self.syntax(format!("unexpected `{c}`")));
        }
        Ok(e)
    }

    fn syntax(&self, message: impl Into<String>) -> Error {
        Error::Syntax { offset: self.pos, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += want.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.eat('^') {
            let exponent = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.identifier(),
            Some(c) => Err(self.syntax(format!("unexpected `{c}`"))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        let digits = |end: &mut usize| {
            let from = *end;
            while *end < bytes.len() && bytes[*end].is_ascii_digit() {
                *end += 1;
            }
            *end - from
        };
        let mut n_digits = digits(&mut end);
        if end < bytes.len() && bytes[end] == b'.' {
            end += 1;
            n_digits += digits(&mut end);
        }
        if n_digits == 0 {
            return Err(self.syntax("malformed number"));
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut probe = end + 1;
            if probe < bytes.len() && (bytes[probe] == b'+' || bytes[probe] == b'-') {
                probe += 1;
            }
            if digits(&mut probe) == 0 {
                self.pos = probe;
                return Err(self.syntax("malformed exponent"));
            }
            end = probe;
        }
        let text = &self.src[start..end];
        let value: f64 = text.parse().map_err(|_| self.syntax(format!("malformed number `{text}`")))?;
        self.pos = end;
        Ok(Expr::Const(value))
    }

    fn identifier(&mut self) -> Result<Expr> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
            end += 1;
        }
        let name = &self.src[start..end];
        self.pos = end;
        if name == self.grammar.var_name() {
            return Ok(Expr::Var);
        }
        if name == "i" && self.grammar == Grammar::Complex {
            return Ok(Expr::Imag);
        }
        match Func::from_name(name, self.grammar) {
            Some(func) => {
                if !self.eat('(') {
                    return Err(self.syntax(format!("expected `(` after `{name}`")));
                }
                let arg = self.expr()?;
                if !self.eat(')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(Expr::Call(func, Box::new(arg)))
            }
            None => Err(Error::UnknownIdentifier { name: name.to_string(), offset: start }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn builtin_values() {
        assert_eq!(parse_expr("exp(-x)").unwrap().eval(0.0).unwrap(), 1.0);
        assert_eq!(parse_expr("ln(1+x)").unwrap().eval(0.0).unwrap(), 0.0);
        let d = parse_expr("x^3").unwrap().derivative().unwrap();
        assert_eq!(d.eval(2.0).unwrap(), 12.0);
    }

    #[test]
    fn precedence() {
        let e = parse_expr("-x^2").unwrap();
        assert_eq!(e.eval(3.0).unwrap(), -9.0);
        let e = parse_expr("2^-x").unwrap();
        assert_eq!(e.eval(1.0).unwrap(), 0.5);
        let e = parse_expr("2^3^2").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 512.0);
        let e = parse_expr("1 - 2 - 3").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), -4.0);
        let e = parse_expr("8 / 4 / 2").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 1.0);
        let e = parse_expr(" 1.5e1 * x ").unwrap();
        assert_eq!(e.eval(2.0).unwrap(), 30.0);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse_expr("x + * 2") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_expr("exp(x") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
        match parse_expr("1 + tan(x)") {
            Err(Error::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "tan");
                assert_eq!(offset, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_expr("gamma(x)"), Err(Error::UnknownIdentifier { .. })));
        assert!(matches!(parse_expr("p"), Err(Error::UnknownIdentifier { .. })));
        assert!(matches!(parse_expr(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("2x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("1e"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("exp x"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(parse_expr("ln(x)").unwrap().eval(0.0), Err(Error::Domain(_))));
        assert!(matches!(parse_expr("sqrt(x)").unwrap().eval(-1.0), Err(Error::Domain(_))));
        assert!(matches!(parse_expr("1/x").unwrap().eval(0.0), Err(Error::Domain(_))));
        assert!(matches!(parse_expr("x^0.5").unwrap().eval(-1.0), Err(Error::Domain(_))));
        assert_eq!(parse_expr("x^2").unwrap().eval(-3.0).unwrap(), 9.0);
    }

    #[test]
    fn log1p_and_expm1_forms_keep_precision() {
        let psi = parse_expr("ln(1+x)").unwrap();
        let v = psi.eval(1e-12).unwrap();
        assert!(close(v, 1e-12 - 0.5e-24, 1e-15));
        let inv = parse_expr("exp(x) - 1").unwrap();
        assert!(close(inv.eval(1e-12).unwrap(), 1e-12, 1e-15));
    }

    #[test]
    fn complex_grammar() {
        let e = parse_complex_expr("gamma(p) * 2^(-p) + i").unwrap();
        let v = e.eval_complex(Complex64::new(1.0, 0.0)).unwrap();
        assert!((v - Complex64::new(0.5, 1.0)).norm() < 1e-14);
        assert!(parse_complex_expr("x").is_err());
    }

    #[test]
    fn derivative_rules() {
        let cases = [
            ("sin(x)*cos(x)", 0.7),
            ("exp(-x^2/2)", 1.3),
            ("ln(1+x)/(1+x)", 2.0),
            ("sqrt(1+2*x)", 0.4),
            ("x^x", 1.7),
            ("2^x", 0.3),
            ("abs(x - 3)", 1.0),
            ("(1+x)^(-2)", 0.9),
        ];
        for (src, x) in cases {
            let e = parse_expr(src).unwrap();
            let d = e.derivative().unwrap().eval(x).unwrap();
            let h = 1e-5;
            let fd = (e.eval(x + h).unwrap() - e.eval(x - h).unwrap()) / (2.0 * h);
            assert!(close(d, fd, 1e-8), "{src}: {d} vs {fd}");
        }
    }

    #[test]
    fn printer_round_trip() {
        for src in ["exp(-x)", "-x^2 + 3*x/(1+x)", "2^-x", "abs(sin(x)) - cos(x)^2", "1e-10*x"] {
            let e = parse_expr(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expr(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }

    #[test]
    fn substitution_composes() {
        let f = parse_expr("x^2 + 1").unwrap();
        let g = parse_expr("exp(x) - 1").unwrap();
        let fg = f.substitute(&g);
        let x: f64 = 0.3;
        assert!(close(fg.eval(x).unwrap(), x.exp_m1().powi(2) + 1.0, 1e-15));
    }

    #[test]
    fn simplification_keeps_trees_small() {
        let e = parse_expr("x^3").unwrap();
        let d3 = e.nth_derivative(3).unwrap();
        assert_eq!(d3.eval(5.0).unwrap(), 6.0);
        assert!(d3.size() <= 5, "{d3}");
    }
}
