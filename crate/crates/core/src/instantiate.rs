//! Numerical instantiation of symbolic expressions.
//!
//! Every expression is read as an operator and applied to a generic matrix
//! test field `Φ(x)`: atoms become their matrix jets from the field engine,
//! free operators differentiate everything to their right. `psi` is embedded
//! as the 2×2 matrix whose columns are the spinor `ψ` and an auxiliary
//! spinor, which keeps products well-typed wherever `psi` appears.
//!
//! Jets carry two orders of derivatives, so each product may use at most two
//! derivative units in total; exceeding that shows up as NaN and is reported
//! as [`InstantiateError::OrderExceeded`].

use num_complex::Complex64;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::coordexpr::{eval_jet, CoordExpr};
use crate::fieldnum::{b_jet, psi_jets, s_jet, FieldSpec, SamplePoint};
use crate::jet::{MatJet, DIM};
use crate::liealg::Mat2;
use crate::symca::{Atom, AtomKind, Factor, Monomial, ScalarCoef, SymExpr};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstantiateError {
    #[error("expression needs more than two derivatives of a field")]
    OrderExceeded,
    #[error("coefficient does not fit in a double")]
    CoefficientRange,
}

/// Matrix jets of every atom at one sample point.
#[derive(Clone, Debug)]
pub struct Instantiation {
    s: MatJet,
    s_inv: MatJet,
    b: [MatJet; DIM],
    psi: MatJet,
    operand: MatJet,
    epsilon: f64,
}

impl Instantiation {
    /// `aux[0..2]` is the second column of the `psi` matrix, `aux[2..6]` the
    /// entries of the operand `Φ` in row-major order.
    pub fn new(spec: &FieldSpec, aux: &[CoordExpr; 6], x: &SamplePoint) -> Self {
        let s = s_jet(spec, x);
        let p = psi_jets(spec, x);
        let a = [0, 1, 2, 3, 4, 5].map(|k| eval_jet(&aux[k], &x.0));
        Instantiation {
            s,
            s_inv: s.dagger(),
            b: [0, 1, 2, 3].map(|mu| b_jet(spec, mu, x)),
            psi: MatJet::from_entries([[p[0], a[0]], [p[1], a[1]]]),
            operand: MatJet::from_entries([[a[2], a[3]], [a[4], a[5]]]),
            epsilon: spec.epsilon(),
        }
    }

    fn atom_jet(&self, atom: &Atom) -> MatJet {
        let base = match atom.kind {
            AtomKind::S => self.s,
            AtomKind::Sinv => self.s_inv,
            AtomKind::B(mu) => self.b[mu as usize],
            AtomKind::Psi => self.psi,
        };
        atom.derivs().iter().fold(base, |j, d| j.partial(*d as usize))
    }

    fn coefficient(&self, c: &ScalarCoef) -> Result<Complex64, InstantiateError> {
        let r = c.rational.to_f64().ok_or(InstantiateError::CoefficientRange)?;
        let i = if c.i_power == 1 { Complex64::new(0.0, 1.0) } else { Complex64::new(1.0, 0.0) };
        Ok(i * r * self.epsilon.powi(c.eps_power))
    }

    pub fn eval_monomial(&self, m: &Monomial) -> Result<Mat2, InstantiateError> {
        let mut cur = self.operand;
        for f in m.factors.iter().rev() {
            cur = match f {
                Factor::Atom(a) => self.atom_jet(a) * cur,
                Factor::Op(mu) => cur.partial(*mu as usize),
            };
        }
        if !cur.value.is_finite() {
            return Err(InstantiateError::OrderExceeded);
        }
        Ok(cur.value.scale(self.coefficient(&m.coef)?))
    }

    /// `expr` applied to the operand, as a 2×2 matrix.
    pub fn eval(&self, expr: &SymExpr) -> Result<Mat2, InstantiateError> {
        expr.terms.iter().try_fold(Mat2::ZERO, |acc, m| Ok(acc + self.eval_monomial(m)?))
    }
}
