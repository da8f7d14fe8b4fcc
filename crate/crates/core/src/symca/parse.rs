//! Text syntax for symbolic expressions.
//!
//! ```text
//! sum     := ['-'] product (('+' | '-') product)*
//! product := power (('*' | '/' | <juxtaposition>) power)*
//! power   := primary ('^' integer)?
//! primary := integer | 'i' | 'eps' | 'S' | 'Sinv' | 'B0'..'B3' | 'psi'
//!          | 'd0'..'d3'                 free derivative operator
//!          | 'd0'..'d3' '(' sum ')'     derivative of a subexpression
//!          | '(' sum ')' | '[' sum ',' sum ']' | '-' primary
//! ```
//!
//! `d0(X)` requires the parenthesis to follow immediately; `d0 (X)` is the
//! operator `d0` times `X`. Division is only by scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use super::{AtomKind, ScalarCoef, SymExpr};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymParseError {
    #[error("syntax error at position {pos}: expected {expected}, found {found}")]
    Syntax { pos: usize, expected: &'static str, found: String },
    #[error("unknown symbol {name:?} at position {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("division by a non-scalar expression at position {pos}")]
    NonScalarDivisor { pos: usize },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
}

impl SymParseError {
    pub fn position(&self) -> usize {
        match self {
            SymParseError::Syntax { pos, .. }
            | SymParseError::UnknownSymbol { pos, .. }
            | SymParseError::NonScalarDivisor { pos }
            | SymParseError::DivisionByZero { pos } => *pos,
        }
    }
}

/// Parses `text` into an unnormalized expression.
///
/// Brackets are expanded to `XY − YX`, `d_mu(X)` to a derivative-decorated
/// atom when `X` is a single atom and to `d_mu X − X d_mu` otherwise; no
/// other rewriting takes place.
pub fn parse_expr(text: &str) -> Result<SymExpr, SymParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("operator or end of input"));
    }
    Ok(SymExpr { terms: e.terms.into_iter().filter(|m| !m.coef.is_zero()).collect() })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, expected: &'static str) -> SymParseError {
        let found = match self.src.get(self.pos) {
            Some(b) => format!("{:?}", *b as char),
            None => "end of input".to_string(),
        };
        SymParseError::Syntax { pos: self.pos, expected, found }
    }

    fn expect(&mut self, c: u8, what: &'static str) -> Result<(), SymParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(what))
        }
    }

    fn sum(&mut self) -> Result<SymExpr, SymParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.product()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_primary(c: u8) -> bool {
        c.is_ascii_alphanumeric() || c == b'(' || c == b'['
    }

    fn product(&mut self) -> Result<SymExpr, SymParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let divisor = self.power()?;
                    acc = acc.scaled(&invert_scalar(&divisor, at)?);
                }
                Some(c) if Self::starts_primary(c) => acc = acc * self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<SymExpr, SymParseError> {
        let base = self.primary()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let n: u32 = std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                self.pos = start;
                self.syntax("non-negative integer exponent")
            })?;
        Ok((0..n).fold(SymExpr::one(), |acc, _| acc * base.clone()))
    }

    fn primary(&mut self) -> Result<SymExpr, SymParseError> {
        let Some(c) = self.peek() else {
            return Err(self.syntax("operand"));
        };
        let start = self.pos;
        match c {
            b'-' => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            b'(' => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')', "')'")?;
                Ok(e)
            }
            b'[' => {
                self.pos += 1;
                let a = self.sum()?;
                self.expect(b',', "','")?;
                let b = self.sum()?;
                self.expect(b']', "']'")?;
                Ok(a.commutator(&b))
            }
            c if c.is_ascii_digit() => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("0");
                let n: BigInt = digits.parse().map_err(|_| self.syntax("integer"))?;
                Ok(SymExpr::scalar(ScalarCoef::new(BigRational::from_integer(n), 0, 0)))
            }
            c if c.is_ascii_alphabetic() => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                self.symbol(name, start)
            }
            _ => Err(self.syntax("operand")),
        }
    }

    fn symbol(&mut self, name: &str, start: usize) -> Result<SymExpr, SymParseError> {
        let index = |s: &str| -> Option<u8> {
            match s.as_bytes() {
                [d] if (b'0'..=b'3').contains(d) => Some(d - b'0'),
                _ => None,
            }
        };
        let e = match name {
            "i" => SymExpr::scalar(ScalarCoef::i()),
            "eps" => SymExpr::scalar(ScalarCoef::eps(1)),
            "S" => SymExpr::bare(AtomKind::S),
            "Sinv" => SymExpr::bare(AtomKind::Sinv),
            "psi" => SymExpr::bare(AtomKind::Psi),
            _ => {
                if let Some(mu) = name.strip_prefix('B').and_then(index) {
                    SymExpr::bare(AtomKind::B(mu))
                } else if let Some(mu) = name.strip_prefix('d').and_then(index) {
                    // application only when '(' follows without whitespace
                    if self.src.get(self.pos) == Some(&b'(') {
                        self.pos += 1;
                        let inner = self.sum()?;
                        self.expect(b')', "')'")?;
                        inner.derivative(mu)
                    } else {
                        SymExpr::op(mu)
                    }
                } else {
                    return Err(SymParseError::UnknownSymbol { pos: start, name: name.to_string() });
                }
            }
        };
        Ok(e)
    }
}

fn invert_scalar(e: &SymExpr, pos: usize) -> Result<ScalarCoef, SymParseError> {
    if !e.terms.iter().all(|m| m.factors.is_empty()) {
        return Err(SymParseError::NonScalarDivisor { pos });
    }
    // a scalar sum such as (2 + 3) still divides
    let collapsed = collapse_scalars(e);
    let coef = match collapsed.as_slice() {
        [] => return Err(SymParseError::DivisionByZero { pos }),
        [c] => c,
        _ => return Err(SymParseError::NonScalarDivisor { pos }),
    };
    // (r i^k eps^n)^{-1} = r^{-1} i^{-k} eps^{-n}
    let inv_i = (4 - coef.i_power as u32) % 4;
    Ok(ScalarCoef::new(coef.rational.recip(), inv_i, -coef.eps_power))
}

/// Merges factor-free monomials with equal `(i, eps)` powers.
fn collapse_scalars(e: &SymExpr) -> Vec<ScalarCoef> {
    let mut merged: Vec<ScalarCoef> = Vec::new();
    for m in &e.terms {
        match merged.iter_mut().find(|c| c.i_power == m.coef.i_power && c.eps_power == m.coef.eps_power) {
            Some(c) => c.rational += &m.coef.rational,
            None => merged.push(m.coef.clone()),
        }
    }
    merged.retain(|c| !c.is_zero());
    merged
}
