//! Expression syntax shared by every document kind, and its evaluation into
//! a target ring.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::cyclotomic::CycScalar;
use crate::multipoly::MPoly;
use crate::tower::{TowerElem, TowerSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: Pos,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col: col0 + i };
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, pos });
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), pos });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
        } else {
            return Err(ParseError::new(pos, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    /// `name` followed by a nonnegative index, e.g. `s2` or `a0`.
    Var(String, u32),
    /// Primitive root of unity of the given order: `w(q)`, or `i` for order 4.
    Unit(u32),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

/// Token stream for one line, consumed by the document and expression parsers.
pub(crate) struct Cursor {
    toks: Vec<Token>,
    at: usize,
    end: Pos,
}

impl Cursor {
    pub(crate) fn new(src: &str, line: usize) -> Result<Self, ParseError> {
        let toks = lex(src, line, 1)?;
        Ok(Cursor { toks, at: 0, end: Pos { line, col: src.chars().count() + 1 } })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |t| t.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    pub(crate) fn at_end(&self) -> bool {
        self.at >= self.toks.len()
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(ParseError::new(self.pos(), "unexpected trailing input"))
        }
    }

    pub(crate) fn ident(&mut self) -> Option<(String, Pos)> {
        if let Some(Tok::Ident(s)) = self.peek() {
            let s = s.clone();
            let pos = self.pos();
            self.at += 1;
            Some((s, pos))
        } else {
            None
        }
    }

    pub(crate) fn int(&mut self) -> Result<(BigInt, Pos), ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Token { tok: Tok::Int(v), .. }) => Ok((v, pos)),
            _ => Err(ParseError::new(pos, "expected an integer")),
        }
    }

    pub(crate) fn small_int(&mut self) -> Result<(u32, Pos), ParseError> {
        let (v, pos) = self.int()?;
        let v = v.to_u32().ok_or_else(|| ParseError::new(pos, "integer out of range"))?;
        Ok((v, pos))
    }

    pub(crate) fn eat_eq(&mut self) -> bool {
        if self.peek() == Some(&Tok::Eq) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_minus(&mut self) -> bool {
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_eq(&mut self) -> Result<(), ParseError> {
        if self.eat_eq() {
            Ok(())
        } else {
            Err(ParseError::new(self.pos(), "expected '='"))
        }
    }

    pub(crate) fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let pos = self.pos();
            self.at += 1;
            let rhs = self.term()?;
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            let pos = self.pos();
            self.at += 1;
            let rhs = self.unary()?;
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                Ok(Expr { kind: ExprKind::Neg(Box::new(self.unary()?)), pos })
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let pos = self.pos();
        self.at += 1;
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            true
        } else {
            false
        };
        let (e, epos) = self.int()?;
        let e = e.to_i64().ok_or_else(|| ParseError::new(epos, "exponent out of range"))?;
        let e = if negative { -e } else { e };
        Ok(Expr { kind: ExprKind::Pow(Box::new(base), e), pos })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump().map(|t| t.tok) {
            Some(Tok::Int(v)) => Ok(Expr { kind: ExprKind::Int(v), pos }),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump().map(|t| t.tok) {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(ParseError::new(self.prev_pos(), "expected ')'")),
                }
            }
            Some(Tok::Ident(name)) => self.ident_atom(name, pos),
            Some(_) => Err(ParseError::new(pos, "expected a variable, number or '('")),
            None => Err(ParseError::new(pos, "unexpected end of expression")),
        }
    }

    fn prev_pos(&self) -> Pos {
        self.toks.get(self.at.saturating_sub(1)).map_or(self.end, |t| t.pos)
    }

    fn ident_atom(&mut self, name: String, pos: Pos) -> Result<Expr, ParseError> {
        if name == "i" {
            return Ok(Expr { kind: ExprKind::Unit(4), pos });
        }
        if name == "w" {
            if self.bump().map(|t| t.tok) != Some(Tok::LParen) {
                return Err(ParseError::new(pos, "expected '(' after w"));
            }
            let (q, qpos) = self.small_int()?;
            if q == 0 {
                return Err(ParseError::new(qpos, "root of unity of order 0"));
            }
            if self.bump().map(|t| t.tok) != Some(Tok::RParen) {
                return Err(ParseError::new(self.prev_pos(), "expected ')'"));
            }
            return Ok(Expr { kind: ExprKind::Unit(q), pos });
        }
        let split = name.find(|c: char| c.is_ascii_digit());
        match split {
            Some(k) if k > 0 && name[k..].chars().all(|c| c.is_ascii_digit()) => {
                let idx = name[k..]
                    .parse::<u32>()
                    .map_err(|_| ParseError::new(pos, "variable index out of range"))?;
                Ok(Expr { kind: ExprKind::Var(name[..k].to_string(), idx), pos })
            }
            _ => Err(ParseError::new(pos, format!("unknown identifier '{name}'"))),
        }
    }
}

/// Parses a complete expression.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut c = Cursor::new(src, 1)?;
    let e = c.expr()?;
    c.expect_end()?;
    Ok(e)
}

/// Largest index among variables named `prefix`, or 0 if none occur.
pub fn max_var_index(e: &Expr, prefix: &str) -> u32 {
    match &e.kind {
        ExprKind::Var(name, i) if name == prefix => *i,
        ExprKind::Int(_) | ExprKind::Var(..) | ExprKind::Unit(_) => 0,
        ExprKind::Neg(a) | ExprKind::Pow(a, _) => max_var_index(a, prefix),
        ExprKind::Bin(_, a, b) => max_var_index(a, prefix).max(max_var_index(b, prefix)),
    }
}

/// A polynomial in `x1..xn`; `n` defaults to the largest index used (at least 1).
pub fn parse_root_poly(src: &str, n: Option<usize>) -> Result<MPoly, ParseError> {
    let e = parse_expr(src)?;
    let n = n.unwrap_or_else(|| (max_var_index(&e, "x") as usize).max(1));
    eval(&e, &PolyAlgebra::new(n, vec![VarFamily::new("x", 1, 0, n)]))
}

/// A ring the expression language can be evaluated into.
pub trait Algebra {
    type V: Clone;
    fn var(&self, name: &str, index: u32, pos: Pos) -> Result<Self::V, ParseError>;
    fn constant(&self, c: CycScalar) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V, pos: Pos) -> Result<Self::V, ParseError>;
    fn pow(&self, a: &Self::V, e: i64, pos: Pos) -> Result<Self::V, ParseError>;
}

pub fn eval<A: Algebra>(e: &Expr, alg: &A) -> Result<A::V, ParseError> {
    match &e.kind {
        ExprKind::Int(v) => Ok(alg.constant(CycScalar::from_rational(BigRational::from_integer(v.clone())))),
        ExprKind::Unit(q) => Ok(alg.constant(CycScalar::epsilon(*q))),
        ExprKind::Var(name, idx) => alg.var(name, *idx, e.pos),
        ExprKind::Neg(a) => Ok(alg.neg(&eval(a, alg)?)),
        ExprKind::Bin(op, a, b) => {
            let (a, b) = (eval(a, alg)?, eval(b, alg)?);
            match op {
                BinOp::Add => Ok(alg.add(&a, &b)),
                BinOp::Sub => Ok(alg.sub(&a, &b)),
                BinOp::Mul => Ok(alg.mul(&a, &b)),
                BinOp::Div => alg.div(&a, &b, e.pos),
            }
        }
        ExprKind::Pow(a, k) => alg.pow(&eval(a, alg)?, *k, e.pos),
    }
}

/// Variables `prefix{first}..prefix{first+count-1}` mapped to consecutive indices from `offset`.
#[derive(Clone, Debug)]
pub struct VarFamily {
    pub prefix: &'static str,
    pub first: u32,
    pub offset: usize,
    pub count: usize,
}

impl VarFamily {
    pub fn new(prefix: &'static str, first: u32, offset: usize, count: usize) -> Self {
        VarFamily { prefix, first, offset, count }
    }
}

/// Polynomials over named variable families; division only by nonzero constants.
pub struct PolyAlgebra {
    pub nvars: usize,
    pub families: Vec<VarFamily>,
}

impl PolyAlgebra {
    pub fn new(nvars: usize, families: Vec<VarFamily>) -> Self {
        PolyAlgebra { nvars, families }
    }

    fn available(&self) -> String {
        self.families
            .iter()
            .filter(|f| f.count > 0)
            .map(|f| {
                if f.count == 1 {
                    format!("{}{}", f.prefix, f.first)
                } else {
                    format!("{}{}..{}{}", f.prefix, f.first, f.prefix, f.first as usize + f.count - 1)
                }
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl Algebra for PolyAlgebra {
    type V = MPoly;

    fn var(&self, name: &str, index: u32, pos: Pos) -> Result<MPoly, ParseError> {
        for f in &self.families {
            if f.prefix == name && index >= f.first && ((index - f.first) as usize) < f.count {
                return Ok(MPoly::var(self.nvars, f.offset + (index - f.first) as usize));
            }
        }
        let avail = self.available();
        let avail = if avail.is_empty() { "none".to_string() } else { avail };
        Err(ParseError::new(pos, format!("variable {name}{index} is not available here (allowed: {avail})")))
    }

    fn constant(&self, c: CycScalar) -> MPoly {
        MPoly::constant(self.nvars, c)
    }

    fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a + b
    }

    fn sub(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a - b
    }

    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a * b
    }

    fn neg(&self, a: &MPoly) -> MPoly {
        -a
    }

    fn div(&self, a: &MPoly, b: &MPoly, pos: Pos) -> Result<MPoly, ParseError> {
        let c = b
            .as_constant()
            .ok_or_else(|| ParseError::new(pos, "division by a non-constant is not allowed in a polynomial"))?;
        let inv = c.inv().map_err(|_| ParseError::new(pos, "division by zero"))?;
        Ok(a.scale(&inv))
    }

    fn pow(&self, a: &MPoly, e: i64, pos: Pos) -> Result<MPoly, ParseError> {
        if e >= 0 {
            let e = u32::try_from(e).map_err(|_| ParseError::new(pos, "exponent out of range"))?;
            return Ok(a.pow(e));
        }
        let c = a
            .as_constant()
            .ok_or_else(|| ParseError::new(pos, "negative power of a non-constant"))?;
        let v = c.pow_signed(e).map_err(|_| ParseError::new(pos, "division by zero"))?;
        Ok(MPoly::constant(self.nvars, v))
    }
}

/// Elements of a radical tower: `s1..sn` and `y1..y{max_level}`.
pub struct TowerAlgebra<'a> {
    pub spec: &'a TowerSpec,
    pub max_level: usize,
}

impl Algebra for TowerAlgebra<'_> {
    type V = TowerElem;

    fn var(&self, name: &str, index: u32, pos: Pos) -> Result<TowerElem, ParseError> {
        let i = index as usize;
        match name {
            "s" if (1..=self.spec.n()).contains(&i) => Ok(self.spec.sigma(i)),
            "y" if (1..=self.max_level).contains(&i) => Ok(self.spec.gen(i).expect("level exists")),
            _ => {
                let ys = match self.max_level {
                    0 => String::new(),
                    1 => ", y1".to_string(),
                    m => format!(", y1..y{m}"),
                };
                Err(ParseError::new(
                    pos,
                    format!("variable {name}{index} is not available here (allowed: s1..s{}{ys})", self.spec.n()),
                ))
            }
        }
    }

    fn constant(&self, c: CycScalar) -> TowerElem {
        self.spec.constant(c, 0)
    }

    fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.spec.add(a, b)
    }

    fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.spec.sub(a, b)
    }

    fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.spec.mul(a, b)
    }

    fn neg(&self, a: &TowerElem) -> TowerElem {
        a.neg()
    }

    fn div(&self, a: &TowerElem, b: &TowerElem, pos: Pos) -> Result<TowerElem, ParseError> {
        self.spec.div(a, b).map_err(|e| ParseError::new(pos, e.to_string()))
    }

    fn pow(&self, a: &TowerElem, e: i64, pos: Pos) -> Result<TowerElem, ParseError> {
        self.spec.pow_signed(a, e).map_err(|err| ParseError::new(pos, err.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(src: &str, n: usize) -> Result<MPoly, ParseError> {
        let alg = PolyAlgebra::new(n, vec![VarFamily::new("x", 1, 0, n)]);
        eval(&parse_expr(src)?, &alg)
    }

    #[test]
    fn root_poly_infers_degree() {
        let f = parse_root_poly("x1^2 + x3", None).unwrap();
        assert_eq!(f.nvars(), 3);
        assert_eq!(parse_root_poly("2", None).unwrap().nvars(), 1);
        assert!(parse_root_poly("x4", Some(3)).is_err());
        assert!(parse_root_poly("s1", None).is_err());
    }

    #[test]
    fn precedence() {
        let x1 = MPoly::var(2, 0);
        let x2 = MPoly::var(2, 1);
        assert_eq!(poly("-x1^2", 2).unwrap(), -x1.pow(2));
        assert_eq!(poly("x1 - x2 - x1", 2).unwrap(), -&x2);
        assert_eq!(poly("3/2*x1", 2).unwrap(), x1.scale(&CycScalar::from_ratio(3, 2)));
        assert_eq!(poly("(x1 + x2)^2", 2).unwrap(), (&x1 + &x2).pow(2));
        assert_eq!(poly("w(4)^2", 2).unwrap(), MPoly::constant(2, CycScalar::from_integer(-1)));
        assert_eq!(poly("i*i", 2).unwrap(), MPoly::constant(2, CycScalar::from_integer(-1)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = poly("x1 + x3", 2).unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 6 });
        let e = poly("x1 / x2", 2).unwrap_err();
        assert_eq!(e.pos.col, 4);
        let e = poly("(x1 + x2", 2).unwrap_err();
        assert!(e.msg.contains("')'"));
        let e = poly("x1 $ x2", 2).unwrap_err();
        assert_eq!(e.pos.col, 4);
        assert!(poly("x1 x2", 2).is_err());
        assert!(poly("1/0", 2).is_err());
    }

    #[test]
    fn display_reparses() {
        let src = "3/2*w(3)*x1^2 - (1 + w(3))*x1*x2 + x2 - 7";
        let p = poly(src, 2).unwrap();
        assert_eq!(poly(&p.to_string(), 2).unwrap(), p);
    }
}
