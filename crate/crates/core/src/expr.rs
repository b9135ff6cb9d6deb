//! Small arithmetic expressions in the surface parameters `u` and `v`.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := number | 'u' | 'v' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | tan | exp | ln | sqrt | sinh | cosh
//! number  := digits ('.' digits)? (('e' | 'E') ('+' | '-')? digits)?
//! ```
//!
//! `^` is right associative and binds tighter than unary minus, so
//! `-u^2` is `-(u^2)`. Expressions are differentiated symbolically, which
//! gives Monge and parametric patches exact partials of every order.

use crate::error::{GeomError, Result};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Sinh,
    Cosh,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    U,
    V,
    Neg(Arc<Expr>),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Pow(Arc<Expr>, Arc<Expr>),
    Call(Func, Arc<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    U,
    V,
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, u: f64, v: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::U => u,
            Expr::V => v,
            Expr::Neg(a) => -a.eval(u, v),
            Expr::Add(a, b) => a.eval(u, v) + b.eval(u, v),
            Expr::Sub(a, b) => a.eval(u, v) - b.eval(u, v),
            Expr::Mul(a, b) => a.eval(u, v) * b.eval(u, v),
            Expr::Div(a, b) => a.eval(u, v) / b.eval(u, v),
            Expr::Pow(a, b) => {
                let base = a.eval(u, v);
                match b.as_ref() {
                    Expr::Const(n) if n.fract() == 0.0 && n.abs() < 64.0 => base.powi(*n as i32),
                    _ => base.powf(b.eval(u, v)),
                }
            }
            Expr::Call(f, a) => f.apply(a.eval(u, v)),
        }
    }

    /// Symbolic partial derivative with light constant folding.
    pub fn diff(&self, var: Var) -> Expr {
        use Expr::*;
        match self {
            Const(_) => Const(0.0),
            U => Const(if var == Var::U { 1.0 } else { 0.0 }),
            V => Const(if var == Var::V { 1.0 } else { 0.0 }),
            Neg(a) => neg(a.diff(var)),
            Add(a, b) => add(a.diff(var), b.diff(var)),
            Sub(a, b) => sub(a.diff(var), b.diff(var)),
            Mul(a, b) => add(
                mul(a.diff(var), (**b).clone()),
                mul((**a).clone(), b.diff(var)),
            ),
            Div(a, b) => div(
                sub(
                    mul(a.diff(var), (**b).clone()),
                    mul((**a).clone(), b.diff(var)),
                ),
                pow((**b).clone(), Const(2.0)),
            ),
            Pow(a, b) => match b.as_ref() {
                Const(n) => mul(
                    mul(Const(*n), pow((**a).clone(), Const(n - 1.0))),
                    a.diff(var),
                ),
                _ => {
                    // d(a^b) = a^b (b' ln a + b a'/a)
                    let inner = add(
                        mul(b.diff(var), call(Func::Ln, (**a).clone())),
                        div(mul((**b).clone(), a.diff(var)), (**a).clone()),
                    );
                    mul(self.clone(), inner)
                }
            },
            Call(f, a) => {
                let a0 = (**a).clone();
                let outer = match f {
                    Func::Sin => call(Func::Cos, a0),
                    Func::Cos => neg(call(Func::Sin, a0)),
                    Func::Tan => div(Const(1.0), pow(call(Func::Cos, a0), Const(2.0))),
                    Func::Exp => call(Func::Exp, a0),
                    Func::Ln => div(Const(1.0), a0),
                    Func::Sqrt => div(Const(0.5), call(Func::Sqrt, a0)),
                    Func::Sinh => call(Func::Cosh, a0),
                    Func::Cosh => call(Func::Sinh, a0),
                };
                mul(outer, a.diff(var))
            }
        }
    }
}

fn is_const(e: &Expr, c: f64) -> bool {
    matches!(e, Expr::Const(x) if *x == c)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => (*inner).clone(),
        a => Expr::Neg(Arc::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        _ if is_const(&a, 0.0) => b,
        _ if is_const(&b, 0.0) => a,
        _ => Expr::Add(Arc::new(a), Arc::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        _ if is_const(&b, 0.0) => a,
        _ if is_const(&a, 0.0) => neg(b),
        _ => Expr::Sub(Arc::new(a), Arc::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        _ if is_const(&a, 0.0) || is_const(&b, 0.0) => Expr::Const(0.0),
        _ if is_const(&a, 1.0) => b,
        _ if is_const(&b, 1.0) => a,
        _ => Expr::Mul(Arc::new(a), Arc::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) if *y != 0.0 => Expr::Const(x / y),
        _ if is_const(&a, 0.0) => Expr::Const(0.0),
        _ if is_const(&b, 1.0) => a,
        _ => Expr::Div(Arc::new(a), Arc::new(b)),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_const(&b, 0.0) => Expr::Const(1.0),
        _ if is_const(&b, 1.0) => a,
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x.powf(*y)),
        _ => Expr::Pow(Arc::new(a), Arc::new(b)),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(f.apply(c)),
        a => Expr::Call(f, Arc::new(a)),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::U => write!(f, "u"),
            Expr::V => write!(f, "v"),
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
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> GeomError {
        GeomError::Expression {
            pos: self.pos + 1,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Arc::new(lhs), Arc::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Arc::new(lhs), Arc::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Arc::new(lhs), Arc::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Arc::new(lhs), Arc::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Arc::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            Ok(Expr::Pow(Arc::new(base), Arc::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.err("unexpected end of expression")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match name {
                    "u" => Ok(Expr::U),
                    "v" => Ok(Expr::V),
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    _ => {
                        let func = Func::from_name(name).ok_or_else(|| {
                            self.pos = start;
                            self.err(&format!("unknown identifier `{name}`"))
                        })?;
                        if !self.eat(b'(') {
                            return Err(self.err("expected `(` after function name"));
                        }
                        let arg = self.expr()?;
                        if !self.eat(b')') {
                            return Err(self.err("expected `)`"));
                        }
                        Ok(Expr::Call(func, Arc::new(arg)))
                    }
                }
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            digits(self);
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(self);
            if self.pos == exp_start {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<f64>().map(Expr::Const).map_err(|_| {
            self.pos = start;
            self.err(&format!("malformed number `{text}`"))
        })
    }
}

/// An expression together with all of its partial derivatives up to
/// third order, laid out as `[f, fu, fv, fuu, fuv, fvv, fuuu, fuuv, fuvv, fvvv]`.
#[derive(Debug, Clone)]
pub struct ExprJet {
    source: String,
    terms: Vec<Expr>,
}

impl ExprJet {
    pub fn new(source: &str) -> Result<ExprJet> {
        let f = Expr::parse(source)?;
        let fu = f.diff(Var::U);
        let fv = f.diff(Var::V);
        let fuu = fu.diff(Var::U);
        let fuv = fu.diff(Var::V);
        let fvv = fv.diff(Var::V);
        let fuuu = fuu.diff(Var::U);
        let fuuv = fuu.diff(Var::V);
        let fuvv = fuv.diff(Var::V);
        let fvvv = fvv.diff(Var::V);
        Ok(ExprJet {
            source: source.to_string(),
            terms: vec![f, fu, fv, fuu, fuv, fvv, fuuu, fuuv, fuvv, fvvv],
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn value(&self, u: f64, v: f64) -> f64 {
        self.terms[0].eval(u, v)
    }

    pub fn eval_all(&self, u: f64, v: f64) -> [f64; 10] {
        std::array::from_fn(|i| self.terms[i].eval(u, v))
    }
}
