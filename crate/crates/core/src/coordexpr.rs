//! Scalar expressions over the spacetime coordinates `x0..x3`.
//!
//! Grammar (precedence low to high):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' integer)?
//! primary := number | 'x0'..'x3' | ('sin' | 'cos' | 'exp') '(' sum ')' | '(' sum ')'
//! ```

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::jet::{Jet2, DIM};
use crate::liealg::ComplexScalar;

#[derive(Clone, Debug, PartialEq)]
pub enum CoordExpr {
    Const(f64),
    Coord(usize),
    Add(Arc<CoordExpr>, Arc<CoordExpr>),
    Mul(Arc<CoordExpr>, Arc<CoordExpr>),
    Neg(Arc<CoordExpr>),
    Pow(Arc<CoordExpr>, u32),
    Sin(Arc<CoordExpr>),
    Cos(Arc<CoordExpr>),
    Exp(Arc<CoordExpr>),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprParseError {
    #[error("unexpected character {found:?} at position {pos}")]
    UnexpectedChar { pos: usize, found: char },
    #[error("unexpected end of input at position {pos}")]
    UnexpectedEnd { pos: usize },
    #[error("unknown symbol {name:?} at position {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("exponent at position {pos} must be a non-negative integer")]
    BadExponent { pos: usize },
    #[error("invalid number {text:?} at position {pos}")]
    BadNumber { pos: usize, text: String },
}

#[allow(clippy::should_implement_trait)]
impl CoordExpr {
    pub fn constant(c: f64) -> Self {
        CoordExpr::Const(c)
    }

    pub fn coord(mu: usize) -> Self {
        assert!(mu < DIM, "coordinate index {mu} out of range");
        CoordExpr::Coord(mu)
    }

    pub fn zero() -> Self {
        CoordExpr::Const(0.0)
    }

    pub fn add(a: CoordExpr, b: CoordExpr) -> Self {
        CoordExpr::Add(Arc::new(a), Arc::new(b))
    }

    pub fn mul(a: CoordExpr, b: CoordExpr) -> Self {
        CoordExpr::Mul(Arc::new(a), Arc::new(b))
    }

    pub fn neg(a: CoordExpr) -> Self {
        CoordExpr::Neg(Arc::new(a))
    }

    pub fn pow(a: CoordExpr, n: u32) -> Self {
        CoordExpr::Pow(Arc::new(a), n)
    }

    pub fn sin(a: CoordExpr) -> Self {
        CoordExpr::Sin(Arc::new(a))
    }

    pub fn cos(a: CoordExpr) -> Self {
        CoordExpr::Cos(Arc::new(a))
    }

    pub fn exp(a: CoordExpr) -> Self {
        CoordExpr::Exp(Arc::new(a))
    }

    pub fn scaled(self, c: f64) -> Self {
        CoordExpr::mul(CoordExpr::Const(c), self)
    }

    pub fn parse(text: &str) -> Result<Self, ExprParseError> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(ExprParseError::UnexpectedChar { pos: p.pos, found: p.src[p.pos] as char });
        }
        Ok(e)
    }

    /// Plain value at `x`.
    pub fn eval(&self, x: &[f64; DIM]) -> f64 {
        use CoordExpr::*;
        match self {
            Const(c) => *c,
            Coord(mu) => x[*mu],
            Add(a, b) => a.eval(x) + b.eval(x),
            Mul(a, b) => a.eval(x) * b.eval(x),
            Neg(a) => -a.eval(x),
            Pow(a, n) => a.eval(x).powi(*n as i32),
            Sin(a) => a.eval(x).sin(),
            Cos(a) => a.eval(x).cos(),
            Exp(a) => a.eval(x).exp(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            CoordExpr::Add(..) => 1,
            CoordExpr::Mul(..) => 2,
            CoordExpr::Neg(..) => 3,
            CoordExpr::Const(c) if *c < 0.0 => 3,
            CoordExpr::Pow(..) => 4,
            _ => 5,
        }
    }
}

/// Forward propagation of a second-order jet through the tree.
pub fn eval_jet(e: &CoordExpr, x: &[f64; DIM]) -> Jet2 {
    use CoordExpr::*;
    match e {
        Const(c) => Jet2::constant((*c).into()),
        Coord(mu) => Jet2::coordinate(*mu, x),
        Add(a, b) => eval_jet(a, x) + eval_jet(b, x),
        Mul(a, b) => eval_jet(a, x) * eval_jet(b, x),
        Neg(a) => -eval_jet(a, x),
        Pow(a, n) => eval_jet(a, x).powi(*n),
        Sin(a) => eval_jet(a, x).sin(),
        Cos(a) => eval_jet(a, x).cos(),
        Exp(a) => eval_jet(a, x).exp(),
    }
}

/// Central difference `(e(x + h êμ) − e(x − h êμ)) / 2h`.
pub fn finite_difference_partial(e: &CoordExpr, mu: usize, x: &[f64; DIM], h: f64) -> ComplexScalar {
    assert!(h > 0.0, "step must be positive");
    let mut fwd = *x;
    let mut bwd = *x;
    fwd[mu] += h;
    bwd[mu] -= h;
    Complex64::new((e.eval(&fwd) - e.eval(&bwd)) / (2.0 * h), 0.0)
}

impl fmt::Display for CoordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CoordExpr::*;
        let wrap = |f: &mut fmt::Formatter<'_>, e: &CoordExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            // `{:?}` on f64 is the shortest round-tripping form
            Const(c) => write!(f, "{c:?}"),
            Coord(mu) => write!(f, "x{mu}"),
            Add(a, b) => {
                wrap(f, a, 1)?;
                write!(f, " + ")?;
                wrap(f, b, 2)
            }
            Mul(a, b) => {
                wrap(f, a, 2)?;
                write!(f, " * ")?;
                wrap(f, b, 3)
            }
            Neg(a) => {
                write!(f, "-")?;
                wrap(f, a, 3)
            }
            Pow(a, n) => {
                wrap(f, a, 5)?;
                write!(f, "^{n}")
            }
            Sin(a) => write!(f, "sin({a})"),
            Cos(a) => write!(f, "cos({a})"),
            Exp(a) => write!(f, "exp({a})"),
        }
    }
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

    fn expect(&mut self, c: u8) -> Result<(), ExprParseError> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(ExprParseError::UnexpectedChar { pos: self.pos, found: b as char }),
            None => Err(ExprParseError::UnexpectedEnd { pos: self.pos }),
        }
    }

    fn sum(&mut self) -> Result<CoordExpr, ExprParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = CoordExpr::add(acc, self.product()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = CoordExpr::add(acc, CoordExpr::neg(self.product()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<CoordExpr, ExprParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = CoordExpr::mul(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<CoordExpr, ExprParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(CoordExpr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<CoordExpr, ExprParseError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            let n = digits.parse::<u32>().map_err(|_| ExprParseError::BadExponent { pos: start })?;
            return Ok(CoordExpr::pow(base, n));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<CoordExpr, ExprParseError> {
        let Some(c) = self.peek() else {
            return Err(ExprParseError::UnexpectedEnd { pos: self.pos });
        };
        let start = self.pos;
        if c == b'(' {
            self.pos += 1;
            let e = self.sum()?;
            self.expect(b')')?;
            return Ok(e);
        }
        if c.is_ascii_digit() || c == b'.' {
            while self.pos < self.src.len() {
                let b = self.src[self.pos];
                let exp_sign = (b == b'+' || b == b'-')
                    && matches!(self.src.get(self.pos.wrapping_sub(1)), Some(b'e' | b'E'));
                if b.is_ascii_digit() || b == b'.' || b == b'e' || b == b'E' || exp_sign {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            return text
                .parse::<f64>()
                .map(CoordExpr::Const)
                .map_err(|_| ExprParseError::BadNumber { pos: start, text: text.to_string() });
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            return match name {
                "x0" => Ok(CoordExpr::Coord(0)),
                "x1" => Ok(CoordExpr::Coord(1)),
                "x2" => Ok(CoordExpr::Coord(2)),
                "x3" => Ok(CoordExpr::Coord(3)),
                "sin" | "cos" | "exp" => {
                    self.expect(b'(')?;
                    let arg = self.sum()?;
                    self.expect(b')')?;
                    Ok(match name {
                        "sin" => CoordExpr::sin(arg),
                        "cos" => CoordExpr::cos(arg),
                        _ => CoordExpr::exp(arg),
                    })
                }
                _ => Err(ExprParseError::UnknownSymbol { pos: start, name: name.to_string() }),
            };
        }
        Err(ExprParseError::UnexpectedChar { pos: start, found: c as char })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> CoordExpr {
        CoordExpr::parse(s).unwrap()
    }

    #[test]
    fn jet_examples() {
        let j = eval_jet(&p("x1^2"), &[0., 3., 0., 0.]);
        assert_eq!(j.value.re, 9.0);
        assert_eq!(j.grad.map(|g| g.re), [0., 6., 0., 0.]);
        assert_eq!(j.second(1, 1).re, 2.0);
        for (i, k) in [(0, 0), (0, 1), (0, 2), (2, 3), (3, 3)] {
            assert_eq!(j.second(i, k).re, 0.0);
        }

        let j = eval_jet(&p("sin(x0)"), &[0.0; 4]);
        assert_eq!((j.value.re, j.grad[0].re, j.second(0, 0).re), (0.0, 1.0, 0.0));

        let j = eval_jet(&p("x0*x2"), &[2., 0., 5., 0.]);
        assert_eq!(j.value.re, 10.0);
        assert_eq!((j.grad[0].re, j.grad[2].re, j.second(0, 2).re), (5.0, 2.0, 1.0));
    }

    #[test]
    fn finite_difference_examples() {
        let sq = p("x0^2");
        for h in [0.5, 0.1, 1e-3] {
            assert!((finite_difference_partial(&sq, 0, &[1., 0., 0., 0.], h).re - 2.0).abs() < 1e-12);
        }
        let h = 1e-3;
        let fd = finite_difference_partial(&p("sin(x0)"), 0, &[0.0; 4], h).re;
        assert!((fd - 1.0).abs() <= h * h);
    }

    #[test]
    fn finite_difference_converges_at_second_order() {
        let e = p("exp(0.3*x1) * sin(x0 - 2*x1) + cos(x2*x3)");
        let x = [0.4, -0.2, 0.7, 1.1];
        let jet = eval_jet(&e, &x);
        for mu in 0..4 {
            let err = |h: f64| (finite_difference_partial(&e, mu, &x, h) - jet.grad[mu]).norm();
            let (e1, e2) = (err(1e-2), err(5e-3));
            if e1 < 1e-12 {
                continue;
            }
            let order = (e1 / e2).log2();
            assert!(order >= 1.9, "mu={mu} order={order}");
        }
    }

    #[test]
    fn parser_precedence_and_errors() {
        assert_eq!(p("1 + 2 * x0^2").eval(&[3., 0., 0., 0.]), 19.0);
        assert_eq!(p("-x1^2").eval(&[0., 3., 0., 0.]), -9.0);
        assert_eq!(p("2 - 3 - 4").eval(&[0.0; 4]), -5.0);
        assert_eq!(p("1.5e-1*x3").eval(&[0., 0., 0., 2.]), 0.3);
        assert!(matches!(CoordExpr::parse("x4"), Err(ExprParseError::UnknownSymbol { pos: 0, .. })));
        assert!(matches!(CoordExpr::parse("x0^-1"), Err(ExprParseError::BadExponent { .. })));
        assert!(matches!(CoordExpr::parse("sin(x0"), Err(ExprParseError::UnexpectedEnd { .. })));
        assert!(matches!(CoordExpr::parse("x0 )"), Err(ExprParseError::UnexpectedChar { pos: 3, .. })));
    }

    #[test]
    fn display_round_trips() {
        for s in ["x0 + -x1 * 2.5", "(x0 + x1)^3", "-(x2 + 1.0)", "sin(x0 * x1) * exp(-0.5 * x3)", "-1.0 * x0"] {
            let e = p(s);
            let back = p(&e.to_string());
            let x = [0.3, -0.7, 1.2, 0.9];
            assert_eq!(e.eval(&x), back.eval(&x), "{s} -> {e}");
        }
    }
}
