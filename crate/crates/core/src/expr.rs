//! A small arithmetic expression language for metric components.
//!
//! Grammar (standard precedence, `^` binds tighter than unary minus):
//!
//! ```text
//! expr   := term   { ('+' | '-') term }
//! term   := factor { ('*' | '/') factor }
//! factor := '-' factor | power
//! power  := atom [ '^' integer ]
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponents are integer literals. Known functions: `sin`, `cos`, `sinh`,
//! `cosh`, `exp`, `sqrt`. Identifiers resolve against a caller-supplied
//! variable list; anything else is an unknown-identifier error. Parse errors
//! carry the byte offset into the source.

use crate::jet::Jet;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Sqrt,
}

impl Func {
    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

/// Parsed expression tree. Variables are indices into the list of names
/// the source was parsed against.
#[derive(Clone, Debug)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("parse error at byte {offset}: expected {expected}, found `{found}`")]
    Unexpected {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("parse error at byte {offset}: unknown identifier `{name}`")]
    UnknownIdent { offset: usize, name: String },
    #[error("parse error at byte {offset}: malformed number")]
    BadNumber { offset: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("sqrt of a non-positive argument")]
    SqrtDomain,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
}

/// Numeric carrier for expression evaluation: plain values or jets.
pub trait Scalar: Sized + Copy {
    fn from_const(v: f64, n: usize) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Result<Self, EvalError>;
    fn neg(&self) -> Self;
    fn powi(&self, k: i32) -> Result<Self, EvalError>;
    fn call(&self, f: Func) -> Result<Self, EvalError>;
    fn nvars(&self) -> usize;
}

impl Scalar for f64 {
    fn from_const(v: f64, _n: usize) -> Self {
        v
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Result<Self, EvalError> {
        if *o == 0.0 {
            Err(EvalError::DivisionByZero)
        } else {
            Ok(self / o)
        }
    }
    fn neg(&self) -> Self {
        -self
    }
    fn powi(&self, k: i32) -> Result<Self, EvalError> {
        if *self == 0.0 && k < 0 {
            return Err(EvalError::ZeroToNegativePower);
        }
        Ok(f64::powi(*self, k))
    }
    fn call(&self, f: Func) -> Result<Self, EvalError> {
        Ok(match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Sinh => self.sinh(),
            Func::Cosh => self.cosh(),
            Func::Exp => self.exp(),
            Func::Sqrt => {
                if *self < 0.0 {
                    return Err(EvalError::SqrtDomain);
                }
                self.sqrt()
            }
        })
    }
    fn nvars(&self) -> usize {
        0
    }
}

impl Scalar for Jet {
    fn from_const(v: f64, n: usize) -> Self {
        Jet::constant(v, n)
    }
    fn add(&self, o: &Self) -> Self {
        Jet::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Jet::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Jet::mul(self, o)
    }
    fn div(&self, o: &Self) -> Result<Self, EvalError> {
        Jet::div(self, o).ok_or(EvalError::DivisionByZero)
    }
    fn neg(&self) -> Self {
        Jet::neg(self)
    }
    fn powi(&self, k: i32) -> Result<Self, EvalError> {
        Jet::powi(self, k).ok_or(EvalError::ZeroToNegativePower)
    }
    fn call(&self, f: Func) -> Result<Self, EvalError> {
        Ok(match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Sinh => self.sinh(),
            Func::Cosh => self.cosh(),
            Func::Exp => self.exp(),
            Func::Sqrt => return self.sqrt().ok_or(EvalError::SqrtDomain),
        })
    }
    fn nvars(&self) -> usize {
        0
    }
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self, Expr::Const(v) if *v == 0.0)
    }

    pub fn eval<T: Scalar>(&self, vars: &[T]) -> Result<T, EvalError> {
        let n = vars.len();
        Ok(match self {
            Expr::Const(v) => T::from_const(*v, n),
            Expr::Var(i) => vars[*i],
            Expr::Add(a, b) => a.eval(vars)?.add(&b.eval(vars)?),
            Expr::Sub(a, b) => a.eval(vars)?.sub(&b.eval(vars)?),
            Expr::Mul(a, b) => a.eval(vars)?.mul(&b.eval(vars)?),
            Expr::Div(a, b) => a.eval(vars)?.div(&b.eval(vars)?)?,
            Expr::Neg(a) => a.eval(vars)?.neg(),
            Expr::Pow(a, k) => a.eval(vars)?.powi(*k)?,
            Expr::Call(f, a) => a.eval(vars)?.call(*f)?,
        })
    }

    /// Evaluate the value at a point.
    pub fn value_at(&self, x: &[f64]) -> Result<f64, EvalError> {
        self.eval(x)
    }

    /// Evaluate with first and second derivatives at a point.
    pub fn jet_at(&self, x: &[f64]) -> Result<Jet, EvalError> {
        let vars: Vec<Jet> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| Jet::variable(v, i, x.len()))
            .collect();
        self.eval(&vars)
    }

    /// Replace variables with index `>= n_keep` by the fixed values
    /// `tail[i - n_keep]`; used to bake named scalar parameters into a
    /// chart whose evaluation points carry only coordinates.
    pub fn resolve_tail(&self, n_keep: usize, tail: &[f64]) -> Expr {
        match self {
            Expr::Const(v) => Expr::Const(*v),
            Expr::Var(i) => {
                if *i >= n_keep {
                    Expr::Const(tail[*i - n_keep])
                } else {
                    Expr::Var(*i)
                }
            }
            Expr::Add(a, b) => Expr::Add(
                Box::new(a.resolve_tail(n_keep, tail)),
                Box::new(b.resolve_tail(n_keep, tail)),
            ),
            Expr::Sub(a, b) => Expr::Sub(
                Box::new(a.resolve_tail(n_keep, tail)),
                Box::new(b.resolve_tail(n_keep, tail)),
            ),
            Expr::Mul(a, b) => Expr::Mul(
                Box::new(a.resolve_tail(n_keep, tail)),
                Box::new(b.resolve_tail(n_keep, tail)),
            ),
            Expr::Div(a, b) => Expr::Div(
                Box::new(a.resolve_tail(n_keep, tail)),
                Box::new(b.resolve_tail(n_keep, tail)),
            ),
            Expr::Neg(a) => Expr::Neg(Box::new(a.resolve_tail(n_keep, tail))),
            Expr::Pow(a, k) => Expr::Pow(Box::new(a.resolve_tail(n_keep, tail)), *k),
            Expr::Call(f, a) => Expr::Call(*f, Box::new(a.resolve_tail(n_keep, tail))),
        }
    }

    /// `self + t * other`, used for metric perturbations.
    pub fn plus_scaled(&self, t: f64, other: &Expr) -> Expr {
        if other.is_zero_const() || t == 0.0 {
            return self.clone();
        }
        Expr::Add(
            Box::new(self.clone()),
            Box::new(Expr::Mul(Box::new(Expr::Const(t)), Box::new(other.clone()))),
        )
    }
}

/// Parse `source` against the given variable names.
pub fn parse_expression(source: &str, names: &[&str]) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: source.as_bytes(),
        pos: 0,
        names,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.unexpected("end of input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn found(&self) -> String {
        match self.peek() {
            None => "end of input".to_string(),
            Some(c) => (c as char).to_string(),
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::Unexpected {
            offset: self.pos,
            expected: expected.to_string(),
            found: self.found(),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.factor()?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'/') {
                let rhs = self.factor()?;
                lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let k = self.integer()?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat(b'-');
        self.skip_ws();
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.unexpected("integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
        let v: i32 = text
            .parse()
            .map_err(|_| ParseError::BadNumber { offset: start })?;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.unexpected("`)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            _ => Err(self.unexpected("number, identifier or `(`")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                // `e` belonged to something else (an identifier can't follow
                // a number, so this is an error either way); back off.
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: f64 = text
            .parse()
            .map_err(|_| ParseError::BadNumber { offset: start })?;
        Ok(Expr::Const(v))
    }

    fn ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string();
        if let Some(f) = Func::from_name(&name) {
            if !self.eat(b'(') {
                return Err(self.unexpected("`(` after function name"));
            }
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.unexpected("`)`"));
            }
            return Ok(Expr::Call(f, Box::new(arg)));
        }
        match self.names.iter().position(|n| *n == name) {
            Some(i) => Ok(Expr::Var(i)),
            None => Err(ParseError::UnknownIdent {
                offset: start,
                name,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn parse1(src: &str) -> Expr {
        parse_expression(src, &["x1", "x2"]).unwrap()
    }

    #[test]
    fn critical_point_of_sin_squared() {
        let e = parse1("sin(x1)^2");
        let j = e.jet_at(&[FRAC_PI_2, 0.0]).unwrap();
        assert_relative_eq!(j.value(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(j.d(0), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn division_by_zero_surfaces_at_eval() {
        let e = parse1("1/(1-x1)");
        assert!(e.value_at(&[0.5, 0.0]).is_ok());
        assert_eq!(e.value_at(&[1.0, 0.0]), Err(EvalError::DivisionByZero));
    }

    #[test]
    fn linear_derivative_is_exact() {
        let e = parse1("2*x1 + x2");
        let j = e.jet_at(&[0.3, 0.4]).unwrap();
        assert_eq!(j.d(0), 2.0);
        assert_eq!(j.d(1), 1.0);
        assert_eq!(j.dd(0, 0), 0.0);
    }

    #[test]
    fn precedence_matches_convention() {
        // ^ binds tighter than unary minus, which binds tighter than '*'.
        let e = parse1("-x1^2");
        assert_relative_eq!(e.value_at(&[3.0, 0.0]).unwrap(), -9.0);
        let e = parse1("2*x1^2 + 1");
        assert_relative_eq!(e.value_at(&[3.0, 0.0]).unwrap(), 19.0);
        let e = parse1("1 - 2 - 3");
        assert_relative_eq!(e.value_at(&[0.0, 0.0]).unwrap(), -4.0);
        let e = parse1("x1^-2");
        assert_relative_eq!(e.value_at(&[2.0, 0.0]).unwrap(), 0.25);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match parse_expression("sin(x1", &["x1"]) {
            Err(ParseError::Unexpected { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("expected unexpected-token error, got {other:?}"),
        }
        match parse_expression("x1 + y", &["x1"]) {
            Err(ParseError::UnknownIdent { offset, name }) => {
                assert_eq!(offset, 5);
                assert_eq!(name, "y");
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn scientific_notation() {
        let e = parse1("1e-3 + x1*1.5E2");
        assert_relative_eq!(e.value_at(&[2.0, 0.0]).unwrap(), 0.001 + 300.0);
    }

    #[test]
    fn full_circle_constant() {
        let e = parse1("cos(x1)^2 + sin(x1)^2");
        for t in [0.0, 0.3, PI, 2.0] {
            assert_relative_eq!(e.value_at(&[t, 0.0]).unwrap(), 1.0, epsilon = 1e-15);
        }
    }
}
