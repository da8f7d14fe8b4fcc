//! Noncommutative symbolic engine for covariant-derivative algebra.
//!
//! Expressions are sums of products over the atoms `S`, `Sinv`, `B0..B3` and
//! `psi`, where each atom may carry partial derivatives (`d0(S)` is `∂₀S`),
//! interleaved with free derivative operators `d0..d3` that act on everything
//! to their right. Coefficients are exact: a rational times `i^k` times
//! `eps^n`.
//!
//! [`normalize`] drives an expression to its canonical sum of monomials, in
//! which all free operators have been pushed to the right end of each product.
//! Two expressions are equal iff their normal forms coincide.

mod derivations;
mod normalize;
mod parse;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use derivations::{
    build_transformed_potential, commutator_expand, commutator_reduction_expected, counterterm_check,
    counterterm_check_flipped, counterterm_product, covariance_residual_sym, field_strength_sym,
    inverse_derivative_identity, potential_atoms,
};
pub use normalize::{normalize, normalize_with_stats, NormalizeStats, RewriteRule};
pub use parse::{parse_expr, SymParseError};

use crate::fieldnum::SignConvention;

/// Exact scalar `rational · i^i_power · eps^eps_power`.
///
/// Normalized so that `i_power ∈ {0, 1}`; `i²` is folded into the sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarCoef {
    pub rational: BigRational,
    pub i_power: u8,
    pub eps_power: i32,
}

impl ScalarCoef {
    pub fn new(rational: BigRational, i_power: u32, eps_power: i32) -> Self {
        let mut rational = rational;
        let k = i_power % 4;
        if k >= 2 {
            rational = -rational;
        }
        ScalarCoef { rational, i_power: (k % 2) as u8, eps_power }
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn integer(n: i64) -> Self {
        ScalarCoef { rational: BigRational::from_integer(BigInt::from(n)), i_power: 0, eps_power: 0 }
    }

    pub fn i() -> Self {
        ScalarCoef::new(BigRational::one(), 1, 0)
    }

    pub fn eps(power: i32) -> Self {
        ScalarCoef::new(BigRational::one(), 0, power)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    pub fn mul(&self, other: &ScalarCoef) -> ScalarCoef {
        ScalarCoef::new(
            &self.rational * &other.rational,
            (self.i_power + other.i_power) as u32,
            self.eps_power + other.eps_power,
        )
    }

    pub fn neg(&self) -> ScalarCoef {
        ScalarCoef { rational: -self.rational.clone(), ..self.clone() }
    }

    /// Renders the magnitude, e.g. `3/2 i eps^2` or `i/eps`; empty for `1`.
    fn render_magnitude(&self) -> String {
        let r = self.rational.abs();
        let mut out = String::new();
        let num = r.numer().to_string();
        let den = r.denom();
        if num != "1" || !den.is_one() {
            out.push_str(&num);
            if !den.is_one() {
                out.push('/');
                out.push_str(&den.to_string());
            }
        }
        if self.i_power == 1 {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push('i');
        }
        match self.eps_power.cmp(&0) {
            Ordering::Greater => {
                if !out.is_empty() {
                    out.push(' ');
                }
                out.push_str("eps");
                if self.eps_power > 1 {
                    out.push_str(&format!("^{}", self.eps_power));
                }
            }
            Ordering::Less => {
                if out.is_empty() {
                    out.push('1');
                }
                out.push_str("/eps");
                if self.eps_power < -1 {
                    out.push_str(&format!("^{}", -self.eps_power));
                }
            }
            Ordering::Equal => {}
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    S,
    Sinv,
    B(u8),
    Psi,
}

/// An atom with the multiset of partial derivatives applied to it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub kind: AtomKind,
    derivs: Vec<u8>,
}

impl Atom {
    pub fn new(kind: AtomKind) -> Self {
        Atom { kind, derivs: Vec::new() }
    }

    pub fn with_derivs(kind: AtomKind, mut derivs: Vec<u8>) -> Self {
        derivs.sort_unstable();
        Atom { kind, derivs }
    }

    pub fn derivs(&self) -> &[u8] {
        &self.derivs
    }

    /// `∂_mu` of this atom.
    pub fn differentiated(&self, mu: u8) -> Atom {
        let mut derivs = self.derivs.clone();
        let at = derivs.partition_point(|d| *d <= mu);
        derivs.insert(at, mu);
        Atom { kind: self.kind, derivs }
    }

    pub fn is_bare(&self, kind: AtomKind) -> bool {
        self.kind == kind && self.derivs.is_empty()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.derivs {
            write!(f, "d{d}(")?;
        }
        match self.kind {
            AtomKind::S => write!(f, "S")?,
            AtomKind::Sinv => write!(f, "Sinv")?,
            AtomKind::B(mu) => write!(f, "B{mu}")?,
            AtomKind::Psi => write!(f, "psi")?,
        }
        for _ in &self.derivs {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// One factor of a product: an atom or a free derivative operator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Atom(Atom),
    Op(u8),
}

/// A coefficient times an ordered product of factors.
///
/// In normal form every `Op` sits at the right end, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coef: ScalarCoef,
    pub factors: Vec<Factor>,
}

impl Monomial {
    pub fn new(coef: ScalarCoef, factors: Vec<Factor>) -> Self {
        Monomial { coef, factors }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.factors.iter().filter_map(|f| match f {
            Factor::Atom(a) => Some(a),
            Factor::Op(_) => None,
        })
    }

    /// Free operators; meaningful as "trailing" only in normal form.
    pub fn trailing_ops(&self) -> Vec<u8> {
        self.factors
            .iter()
            .filter_map(|f| match f {
                Factor::Op(m) => Some(*m),
                Factor::Atom(_) => None,
            })
            .collect()
    }

    pub fn has_free_ops(&self) -> bool {
        self.factors.iter().any(|f| matches!(f, Factor::Op(_)))
    }

    fn render_factors(&self) -> String {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Atom(a) => a.to_string(),
                Factor::Op(m) => format!("d{m}"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A sum of monomials; the empty sum is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymExpr {
    pub terms: Vec<Monomial>,
}

impl SymExpr {
    pub fn zero() -> Self {
        SymExpr { terms: Vec::new() }
    }

    pub fn scalar(coef: ScalarCoef) -> Self {
        if coef.is_zero() {
            return Self::zero();
        }
        SymExpr { terms: vec![Monomial::new(coef, Vec::new())] }
    }

    pub fn one() -> Self {
        Self::scalar(ScalarCoef::one())
    }

    pub fn atom(atom: Atom) -> Self {
        SymExpr { terms: vec![Monomial::new(ScalarCoef::one(), vec![Factor::Atom(atom)])] }
    }

    pub fn bare(kind: AtomKind) -> Self {
        Self::atom(Atom::new(kind))
    }

    /// Free derivative operator `d_mu`.
    pub fn op(mu: u8) -> Self {
        SymExpr { terms: vec![Monomial::new(ScalarCoef::one(), vec![Factor::Op(mu)])] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: &ScalarCoef) -> SymExpr {
        if c.is_zero() {
            return SymExpr::zero();
        }
        SymExpr {
            terms: self.terms.iter().map(|m| Monomial::new(m.coef.mul(c), m.factors.clone())).collect(),
        }
    }

    /// `XY − YX`, unnormalized.
    pub fn commutator(&self, other: &SymExpr) -> SymExpr {
        self.clone() * other.clone() - other.clone() * self.clone()
    }

    /// `∂_mu` of this expression regarded as a multiplication operator.
    ///
    /// A lone atom gets a derivative decoration; any other product `X`
    /// becomes the operator commutator `d_mu X − X d_mu`.
    pub fn derivative(&self, mu: u8) -> SymExpr {
        let mut out = SymExpr::zero();
        for m in &self.terms {
            match m.factors.as_slice() {
                [] => {}
                [Factor::Atom(a)] => out.terms.push(Monomial::new(
                    m.coef.clone(),
                    vec![Factor::Atom(a.differentiated(mu))],
                )),
                _ => {
                    let single = SymExpr { terms: vec![m.clone()] };
                    out = out + SymExpr::op(mu).commutator(&single);
                }
            }
        }
        out
    }

    /// Exchanges `S` and `Sinv`, keeping derivative decorations.
    pub fn swap_group_atoms(&self) -> SymExpr {
        let terms = self
            .terms
            .iter()
            .map(|m| {
                let factors = m
                    .factors
                    .iter()
                    .map(|f| match f {
                        Factor::Atom(a) => {
                            let kind = match a.kind {
                                AtomKind::S => AtomKind::Sinv,
                                AtomKind::Sinv => AtomKind::S,
                                k => k,
                            };
                            Factor::Atom(Atom { kind, derivs: a.derivs.clone() })
                        }
                        op => op.clone(),
                    })
                    .collect();
                Monomial::new(m.coef.clone(), factors)
            })
            .collect();
        SymExpr { terms }
    }

    /// True if every monomial has its free operators only at the right end.
    pub fn ops_trailing(&self) -> bool {
        self.terms.iter().all(|m| {
            let first_op = m.factors.iter().position(|f| matches!(f, Factor::Op(_)));
            first_op.is_none_or(|p| m.factors[p..].iter().all(|f| matches!(f, Factor::Op(_))))
        })
    }

    /// The operator applied to the wave function: each normal monomial's
    /// trailing operators become derivatives of a closing `psi` atom.
    pub fn applied_to_psi(&self) -> SymExpr {
        let terms = normalize(self)
            .terms
            .into_iter()
            .map(|m| {
                let psi = Atom::with_derivs(AtomKind::Psi, m.trailing_ops());
                let mut factors: Vec<Factor> = m.atoms().cloned().map(Factor::Atom).collect();
                factors.push(Factor::Atom(psi));
                Monomial::new(m.coef, factors)
            })
            .collect();
        normalize(&SymExpr { terms })
    }
}

/// `true` iff `a` and `b` have the same normal form.
pub fn expr_equal(a: &SymExpr, b: &SymExpr) -> bool {
    normalize(&(a.clone() - b.clone())).is_zero()
}

impl Add for SymExpr {
    type Output = SymExpr;
    fn add(mut self, rhs: SymExpr) -> SymExpr {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Sub for SymExpr {
    type Output = SymExpr;
    fn sub(self, rhs: SymExpr) -> SymExpr {
        self + (-rhs)
    }
}

impl Neg for SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        SymExpr { terms: self.terms.into_iter().map(|m| Monomial::new(m.coef.neg(), m.factors)).collect() }
    }
}

impl Mul for SymExpr {
    type Output = SymExpr;
    fn mul(self, rhs: SymExpr) -> SymExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                terms.push(Monomial::new(a.coef.mul(&b.coef), factors));
            }
        }
        SymExpr { terms }
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            let negative = m.coef.rational.is_negative();
            match (k, negative) {
                (0, true) => write!(f, "- ")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = m.coef.render_magnitude();
            let body = m.render_factors();
            match (mag.is_empty(), body.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag} {body}")?,
            }
        }
        Ok(())
    }
}

/// `D_mu = d_mu ∓ i eps B_mu` for the given sign convention.
pub fn covariant_derivative(mu: u8, sign: SignConvention) -> SymExpr {
    let coupling = match sign {
        SignConvention::Minus => ScalarCoef::new(-BigRational::one(), 1, 1),
        SignConvention::Plus => ScalarCoef::new(BigRational::one(), 1, 1),
    };
    SymExpr::op(mu) + SymExpr::bare(AtomKind::B(mu)).scaled(&coupling)
}
