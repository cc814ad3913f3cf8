//! Parser and evaluator for univariate profile expressions.
//!
//! Grammar (loosest to tightest): `+ -`, `* /`, unary `-`, `^`
//! (right-associative), atoms. Atoms are decimal literals, the invariant
//! variable (`xi` or `r`, but not both in one expression), parenthesised
//! subexpressions, and the functions `exp ln sin cos sinh cosh sqrt`.
//!
//! Integer literal exponents are folded into a dedicated power node so that
//! `xi^-2` evaluates for negative bases; every other exponent goes through
//! `exp(b·ln a)` and needs a positive base.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dual::Dual2;
use crate::error::{Error, ParseError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Xi,
    R,
}

impl VarKind {
    pub fn name(self) -> &'static str {
        match self {
            VarKind::Xi => "xi",
            VarKind::R => "r",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    /// Integer-literal power, kept separate so negative bases work.
    PowI(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

/// A parsed expression plus the variable it mentions (if any).
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedExpr {
    pub ast: Expr,
    pub var: Option<VarKind>,
}

impl ParsedExpr {
    /// Evaluates value, first and second derivative at `t`; rejects
    /// non-finite results so callers never see silent overflow.
    pub fn eval2(&self, t: f64) -> Result<Dual2> {
        let d = eval(&self.ast, Dual2::variable(t))?;
        if !d.is_finite() {
            return Err(Error::EvalDomain { what: "non-finite expression value", at: t });
        }
        Ok(d)
    }

    pub fn pretty(&self) -> String {
        pretty(&self.ast)
    }
}

pub fn parse_expr(src: &str) -> Result<ParsedExpr> {
    let toks = lex(src)?;
    let mut p = Parser { toks: &toks, i: 0, var: None, src_len: src.len() };
    let ast = p.expr()?;
    if p.i < p.toks.len() {
        return Err(p.error_here("end of input"));
    }
    Ok(ParsedExpr { ast, var: p.var })
}

pub fn eval(e: &Expr, t: Dual2) -> Result<Dual2> {
    Ok(match e {
        Expr::Num(v) => Dual2::constant(*v),
        Expr::Var => t,
        Expr::Neg(x) => -eval(x, t)?,
        Expr::Bin(op, a, b) => {
            let a = eval(a, t)?;
            let b = eval(b, t)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.v == 0.0 {
                        return Err(Error::EvalDomain { what: "division by zero", at: t.v });
                    }
                    a / b
                }
                BinOp::Pow => a.powf(b)?,
            }
        }
        Expr::PowI(a, k) => eval(a, t)?.powi(*k)?,
        Expr::Call(f, x) => {
            let x = eval(x, t)?;
            match f {
                Func::Exp => x.exp(),
                Func::Ln => x.ln()?,
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
                Func::Sqrt => x.sqrt()?,
            }
        }
    })
}

/// Prints with the fewest parentheses that still reparse to the same tree.
/// Guaranteed to round-trip for parser-produced trees (which never hold
/// negative literals; the lexer emits unary minus instead).
pub fn pretty(e: &Expr) -> String {
    fn prec(e: &Expr) -> u8 {
        match e {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) | Expr::PowI(..) => 4,
            Expr::Num(_) | Expr::Var | Expr::Call(..) => 5,
        }
    }
    fn wrap(e: &Expr, need: bool) -> String {
        if need {
            format!("({})", pretty(e))
        } else {
            pretty(e)
        }
    }
    match e {
        Expr::Num(v) => format!("{v}"),
        Expr::Var => "xi".to_string(),
        Expr::Neg(x) => format!("-{}", wrap(x, prec(x) < 3)),
        Expr::Bin(op, a, b) => {
            let (sym, p) = match op {
                BinOp::Add => ("+", 1),
                BinOp::Sub => ("-", 1),
                BinOp::Mul => ("*", 2),
                BinOp::Div => ("/", 2),
                BinOp::Pow => ("^", 4),
            };
            if *op == BinOp::Pow {
                // Right-associative: parenthesise any structured left child.
                format!("{}^{}", wrap(a, prec(a) <= p), wrap(b, prec(b) < p))
            } else {
                format!("{}{}{}", wrap(a, prec(a) < p), sym, wrap(b, prec(b) <= p))
            }
        }
        Expr::PowI(a, k) => {
            let base = wrap(a, prec(a) <= 4);
            if *k < 0 {
                format!("{}^-{}", base, k.unsigned_abs())
            } else {
                format!("{}^{}", base, k)
            }
        }
        Expr::Call(f, x) => format!("{}({})", f.name(), pretty(x)),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b'0'..=b'9' | b'.' => {
                while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                    i += 1;
                }
                if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                    let mut j = i + 1;
                    if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                        j += 1;
                    }
                    if j < b.len() && b[j].is_ascii_digit() {
                        i = j;
                        while i < b.len() && b[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| ParseError {
                    offset: start,
                    expected: "a decimal number",
                    found: text.to_string(),
                })?;
                out.push((Tok::Num(v), start));
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == b'_' => {
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(ParseError {
                    offset: start,
                    expected: "a number, variable, function, or operator",
                    found: src[start..].chars().next().unwrap_or('?').to_string(),
                }
                .into())
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    i: usize,
    var: Option<VarKind>,
    src_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.i).map(|(t, _)| t);
        self.i += 1;
        t
    }

    fn error_here(&self, expected: &'static str) -> Error {
        match self.toks.get(self.i) {
            Some((t, off)) => ParseError {
                offset: *off,
                expected,
                found: match t {
                    Tok::Num(v) => format!("{v}"),
                    Tok::Ident(s) => s.clone(),
                    Tok::Plus => "+".to_string(),
                    Tok::Minus => "-".to_string(),
                    Tok::Star => "*".to_string(),
                    Tok::Slash => "/".to_string(),
                    Tok::Caret => "^".to_string(),
                    Tok::LParen => "(".to_string(),
                    Tok::RParen => ")".to_string(),
                },
            }
            .into(),
            None => ParseError {
                offset: self.src_len,
                expected,
                found: "end of input".to_string(),
            }
            .into(),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.i += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.i += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Tok::Minus) = self.peek() {
            self.i += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.i += 1;
            let exp = self.unary()?;
            return Ok(make_pow(base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Num(_)) => {
                if let Some(Tok::Num(v)) = self.bump() {
                    Ok(Expr::Num(*v))
                } else {
                    unreachable!()
                }
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.i += 1;
                        Ok(inner)
                    }
                    _ => Err(self.error_here("')'")),
                }
            }
            Some(Tok::Ident(_)) => {
                let off = self.toks[self.i].1;
                let name = if let Some(Tok::Ident(s)) = self.bump() { s } else { unreachable!() };
                if let Some(f) = Func::from_name(name) {
                    match self.peek() {
                        Some(Tok::LParen) => {
                            self.i += 1;
                            let arg = self.expr()?;
                            match self.peek() {
                                Some(Tok::RParen) => {
                                    self.i += 1;
                                    Ok(Expr::Call(f, Box::new(arg)))
                                }
                                _ => Err(self.error_here("')'")),
                            }
                        }
                        _ => Err(self.error_here("'(' after a function name")),
                    }
                } else if name == "xi" || name == "r" {
                    let kind = if name == "xi" { VarKind::Xi } else { VarKind::R };
                    match self.var {
                        None => self.var = Some(kind),
                        Some(prev) if prev != kind => {
                            return Err(ParseError {
                                offset: off,
                                expected: "a single invariant variable per expression",
                                found: name.clone(),
                            }
                            .into())
                        }
                        _ => {}
                    }
                    Ok(Expr::Var)
                } else {
                    Err(ParseError {
                        offset: off,
                        expected: "xi, r, or one of exp, ln, sin, cos, sinh, cosh, sqrt",
                        found: name.clone(),
                    }
                    .into())
                }
            }
            _ => Err(self.error_here("a number, variable, function, or '('")),
        }
    }
}

/// Folds integer-literal exponents (optionally negated) into [`Expr::PowI`].
fn make_pow(base: Expr, exp: Expr) -> Expr {
    let lit = match &exp {
        Expr::Num(v) => Some(*v),
        Expr::Neg(inner) => match inner.as_ref() {
            Expr::Num(v) => Some(-*v),
            _ => None,
        },
        _ => None,
    };
    if let Some(v) = lit {
        if crate::math::floor(v) == v && v.abs() <= i32::MAX as f64 {
            return Expr::PowI(Box::new(base), v as i32);
        }
    }
    Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp))
}
