//! The expression mini-language for elements and scalars.
//!
//! Grammar (whitespace ignored between tokens):
//!
//! ```text
//! element := [ '+' | '-' ] term { ( '+' | '-' ) term }
//! term    := factor { '*' factor }
//! factor  := rational                  e.g. 2, -1, 1/3
//!          | 's' [ '^' uint ]          the odd parameter
//!          | 'T' '^' '[' int,... ']'   a monoid class
//!          | 't'<idx> [ '^' uint ]     a formal variable, e.g. t0^2
//!          | <basis name>              e.g. vol
//!          | '(' element ')'           a parenthesized scalar subexpression
//! ```
//!
//! A term may name at most one basis element; everything else multiplies into
//! its scalar coefficient as a plain commutative monomial product. The names
//! `s`, `T` and `t<digits>` are reserved and may not be used as basis names in
//! files meant for this parser. The language is round-trippable: the rendered
//! form of every scalar and element produced by the engine parses back to the
//! same value.

use std::collections::BTreeMap;
use std::fmt;

use ainfty_core::algebra::{Element, GradedBasis};
use ainfty_core::coeff::{CoeffElem, TermKey, TowerConfig};
use ainfty_core::Rat;

/// Errors raised by the expression parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    /// Unexpected character or token.
    Unexpected { at: usize, found: String },
    /// Input ended in the middle of a construct.
    Eof,
    /// An identifier is neither reserved syntax nor a basis name.
    UnknownName(String),
    /// A class or exponent vector has the wrong length.
    RankMismatch { expected: usize, got: usize },
    /// A monoid class is outside the allowed cone.
    OutsideCone(Vec<i64>),
    /// A term multiplies two basis elements.
    DoubleBasis(String),
    /// A scalar was required but the expression names a basis element.
    NotScalar,
    /// An element was required but the expression is purely scalar.
    NotElement,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Unexpected { at, found } => {
                write!(f, "unexpected {found:?} at byte {at}")
            }
            ExprError::Eof => write!(f, "unexpected end of expression"),
            ExprError::UnknownName(s) => write!(f, "unknown name {s:?}"),
            ExprError::RankMismatch { expected, got } => {
                write!(f, "expected vector of length {expected}, got {got}")
            }
            ExprError::OutsideCone(beta) => {
                write!(f, "class {beta:?} is not in the allowed cone")
            }
            ExprError::DoubleBasis(s) => {
                write!(f, "term multiplies a second basis element {s:?}")
            }
            ExprError::NotScalar => write!(f, "expected a scalar expression"),
            ExprError::NotElement => write!(f, "expected a basis-valued expression"),
        }
    }
}

impl std::error::Error for ExprError {}

/// Parsed value: a scalar part plus basis-indexed parts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Val {
    scalar: CoeffElem,
    by_basis: BTreeMap<usize, CoeffElem>,
}

struct Parser<'a> {
    cfg: &'a TowerConfig,
    basis: Option<&'a GradedBasis>,
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(ExprError::Unexpected {
                at: self.pos,
                found: (got as char).to_string(),
            }),
            None => Err(ExprError::Eof),
        }
    }

    fn uint(&mut self) -> Result<u64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return match self.text.get(self.pos) {
                Some(&c) => Err(ExprError::Unexpected {
                    at: self.pos,
                    found: (c as char).to_string(),
                }),
                None => Err(ExprError::Eof),
            };
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(ExprError::Eof)
    }

    fn int(&mut self) -> Result<i64, ExprError> {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let v = self.uint()? as i64;
        Ok(if neg { -v } else { v })
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.text[start..self.pos]).into_owned()
    }

    fn element(&mut self) -> Result<Val, ExprError> {
        let mut total = Val::default();
        let mut sign = match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                1
            }
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            _ => 1,
        };
        loop {
            let term = self.term()?;
            let q = Rat::from_integer(sign.into());
            total.scalar = total.scalar.add(self.cfg, &term.scalar.scale(&q));
            for (i, c) in &term.by_basis {
                let entry = total.by_basis.entry(*i).or_default();
                *entry = entry.add(self.cfg, &c.scale(&q));
            }
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => break,
            }
        }
        Ok(total)
    }

    fn term(&mut self) -> Result<Val, ExprError> {
        let mut scalar = CoeffElem::one(self.cfg);
        let mut basis_index: Option<usize> = None;
        loop {
            let factor = self.factor()?;
            match factor {
                Factor::Scalar(c) => scalar = scalar.mul(self.cfg, &c),
                Factor::Basis(i) => {
                    if basis_index.is_some() {
                        let name = self.basis.map_or_else(String::new, |b| b.name(i).into());
                        return Err(ExprError::DoubleBasis(name));
                    }
                    basis_index = Some(i);
                }
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let mut out = Val::default();
        match basis_index {
            Some(i) => {
                out.by_basis.insert(i, scalar);
            }
            None => out.scalar = scalar,
        }
        Ok(out)
    }

    fn factor(&mut self) -> Result<Factor, ExprError> {
        match self.peek() {
            None => Err(ExprError::Eof),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.element()?;
                self.expect(b')')?;
                if !inner.by_basis.is_empty() {
                    return Err(ExprError::NotScalar);
                }
                Ok(Factor::Scalar(inner.scalar))
            }
            Some(c) if c.is_ascii_digit() || c == b'-' => {
                let num = self.int()?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.uint()? as i64
                } else {
                    1
                };
                let q = Rat::new(num.into(), den.into());
                Ok(Factor::Scalar(CoeffElem::one(self.cfg).scale(&q)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let at = self.pos;
                let name = self.ident();
                self.named_factor(at, name)
            }
            Some(c) => Err(ExprError::Unexpected {
                at: self.pos,
                found: (c as char).to_string(),
            }),
        }
    }

    fn named_factor(&mut self, at: usize, name: String) -> Result<Factor, ExprError> {
        if name == "s" {
            let k = if self.peek() == Some(b'^') {
                self.pos += 1;
                self.uint()? as u32
            } else {
                1
            };
            let mut key = TermKey::unit(self.cfg);
            key.s_pow = k;
            return Ok(Factor::Scalar(CoeffElem::monomial_unchecked(
                self.cfg,
                key,
                Rat::from_integer(1.into()),
            )));
        }
        if name == "T" {
            self.expect(b'^')?;
            self.expect(b'[')?;
            let mut beta = Vec::new();
            if self.peek() != Some(b']') {
                loop {
                    beta.push(self.int()?);
                    if self.peek() == Some(b',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            self.expect(b']')?;
            if beta.len() != self.cfg.monoid.rank {
                return Err(ExprError::RankMismatch {
                    expected: self.cfg.monoid.rank,
                    got: beta.len(),
                });
            }
            if !self.cfg.monoid.in_cone(&beta) {
                return Err(ExprError::OutsideCone(beta));
            }
            let mut key = TermKey::unit(self.cfg);
            key.beta = beta;
            return Ok(Factor::Scalar(CoeffElem::monomial_unchecked(
                self.cfg,
                key,
                Rat::from_integer(1.into()),
            )));
        }
        if let Some(rest) = name.strip_prefix('t') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                let j: usize = rest.parse().map_err(|_| ExprError::UnknownName(name))?;
                if j >= self.cfg.vars.t_degrees.len() {
                    return Err(ExprError::RankMismatch {
                        expected: self.cfg.vars.t_degrees.len(),
                        got: j + 1,
                    });
                }
                let l = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.uint()? as u32
                } else {
                    1
                };
                let mut key = TermKey::unit(self.cfg);
                key.t_exp[j] = l;
                return Ok(Factor::Scalar(CoeffElem::monomial_unchecked(
                    self.cfg,
                    key,
                    Rat::from_integer(1.into()),
                )));
            }
        }
        if let Some(basis) = self.basis {
            if let Some(i) = basis.index_of(&name) {
                return Ok(Factor::Basis(i));
            }
        }
        let _ = at;
        Err(ExprError::UnknownName(name))
    }
}

enum Factor {
    Scalar(CoeffElem),
    Basis(usize),
}

fn parse_val(
    cfg: &TowerConfig,
    basis: Option<&GradedBasis>,
    input: &str,
) -> Result<Val, ExprError> {
    let mut p = Parser {
        cfg,
        basis,
        text: input.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return Err(ExprError::Eof);
    }
    let v = p.element()?;
    if let Some(c) = p.peek() {
        return Err(ExprError::Unexpected {
            at: p.pos,
            found: (c as char).to_string(),
        });
    }
    Ok(v)
}

/// Parses a basis-valued element; purely scalar nonzero input is rejected.
pub fn parse_element(
    cfg: &TowerConfig,
    basis: &GradedBasis,
    input: &str,
) -> Result<Element, ExprError> {
    let v = parse_val(cfg, Some(basis), input)?;
    if !v.scalar.is_zero() {
        return Err(ExprError::NotElement);
    }
    let mut out = Element::zero();
    for (i, c) in &v.by_basis {
        out = out.add(cfg, &Element::term(*i, c.clone()));
    }
    Ok(out)
}

/// Parses a scalar; basis names are rejected.
pub fn parse_scalar(cfg: &TowerConfig, input: &str) -> Result<CoeffElem, ExprError> {
    let v = parse_val(cfg, None, input)?;
    if !v.by_basis.is_empty() {
        return Err(ExprError::NotScalar);
    }
    Ok(v.scalar)
}
