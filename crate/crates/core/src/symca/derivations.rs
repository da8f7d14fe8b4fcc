//! Gauge-theory identities built on the rewrite engine.
//!
//! Field strength in the minus convention:
//! `F_μν = (∂_ν B_μ − ∂_μ B_ν) + iε(B_μ B_ν − B_ν B_μ)`.

use num_rational::BigRational;
use num_traits::One;

use super::{covariant_derivative, normalize, Atom, AtomKind, ScalarCoef, SymExpr};
use crate::fieldnum::{SignConvention, TransformConvention};

fn i_over_eps() -> ScalarCoef {
    ScalarCoef::new(BigRational::one(), 1, -1)
}

fn i_eps() -> ScalarCoef {
    ScalarCoef::new(BigRational::one(), 1, 1)
}

fn s() -> SymExpr {
    SymExpr::bare(AtomKind::S)
}

fn sinv() -> SymExpr {
    SymExpr::bare(AtomKind::Sinv)
}

fn d_s(mu: u8) -> SymExpr {
    SymExpr::atom(Atom::with_derivs(AtomKind::S, vec![mu]))
}

fn b(mu: u8) -> SymExpr {
    SymExpr::bare(AtomKind::B(mu))
}

/// The untransformed potentials `[B0, B1, B2, B3]`.
pub fn potential_atoms() -> [SymExpr; 4] {
    [0, 1, 2, 3].map(b)
}

/// `B′_μ`: `Sinv B_μ S + (i/eps) Sinv d_μ(S)` (ym) or
/// `S B_μ Sinv − (i/eps) d_μ(S) Sinv` (author). Unnormalized.
pub fn build_transformed_potential(mu: u8, convention: TransformConvention) -> SymExpr {
    match convention {
        TransformConvention::Ym => sinv() * b(mu) * s() + (sinv() * d_s(mu)).scaled(&i_over_eps()),
        TransformConvention::Author => s() * b(mu) * sinv() - (d_s(mu) * sinv()).scaled(&i_over_eps()),
    }
}

/// Normal form of `F_μν` over the supplied potentials.
///
/// Without the commutator this is the curl part `∂_ν P_μ − ∂_μ P_ν` alone.
pub fn field_strength_sym(mu: u8, nu: u8, with_commutator: bool, potentials: &[SymExpr; 4]) -> SymExpr {
    normalize(&field_strength_raw(mu, nu, with_commutator, potentials))
}

fn field_strength_raw(mu: u8, nu: u8, with_commutator: bool, potentials: &[SymExpr; 4]) -> SymExpr {
    let (p_mu, p_nu) = (&potentials[mu as usize], &potentials[nu as usize]);
    let curl = p_mu.derivative(nu) - p_nu.derivative(mu);
    if with_commutator {
        curl + p_mu.commutator(p_nu).scaled(&i_eps())
    } else {
        curl
    }
}

/// `Sinv X S` (ym) or `S X Sinv` (author).
fn conjugate(x: SymExpr, convention: TransformConvention) -> SymExpr {
    match convention {
        TransformConvention::Ym => sinv() * x * s(),
        TransformConvention::Author => s() * x * sinv(),
    }
}

fn transformed_potentials(convention: TransformConvention) -> [SymExpr; 4] {
    [0, 1, 2, 3].map(|mu| build_transformed_potential(mu, convention))
}

/// Normal form of `F(B′) − conj(F(B))`; empty iff the field strength
/// transforms covariantly.
pub fn covariance_residual_sym(mu: u8, nu: u8, with_commutator: bool, convention: TransformConvention) -> SymExpr {
    let primed = field_strength_raw(mu, nu, with_commutator, &transformed_potentials(convention));
    let bare = field_strength_raw(mu, nu, with_commutator, &potential_atoms());
    normalize(&(primed - conjugate(bare, convention)))
}

fn counterterm_raw(mu: u8, nu: u8, convention: TransformConvention, sign: i64) -> SymExpr {
    let primed = transformed_potentials(convention);
    let bare = potential_atoms();
    let coupling = i_eps().mul(&ScalarCoef::integer(sign));
    let counter = primed[mu as usize].commutator(&primed[nu as usize]).scaled(&coupling);
    let untransformed = conjugate(bare[mu as usize].commutator(&bare[nu as usize]).scaled(&coupling), convention);
    let extraneous = covariance_residual_sym(mu, nu, false, convention);
    counter - untransformed + extraneous
}

/// `iε[B′_μ, B′_ν] − conj(iε[B_μ, B_ν]) + (curl-only residual)`, normalized.
/// Empty when the added commutator cancels exactly the extraneous terms.
pub fn counterterm_check(mu: u8, nu: u8, convention: TransformConvention) -> SymExpr {
    normalize(&counterterm_raw(mu, nu, convention, 1))
}

/// [`counterterm_check`] with the counterterm's sign reversed.
pub fn counterterm_check_flipped(mu: u8, nu: u8, convention: TransformConvention) -> SymExpr {
    normalize(&counterterm_raw(mu, nu, convention, -1))
}

/// Normal form of `iε B′_μ B′_ν`.
pub fn counterterm_product(mu: u8, nu: u8, convention: TransformConvention) -> SymExpr {
    let primed = transformed_potentials(convention);
    normalize(&(primed[mu as usize].clone() * primed[nu as usize].clone()).scaled(&i_eps()))
}

/// Normal form of `[D_μ, D_ν]` as an operator.
pub fn commutator_expand(mu: u8, nu: u8, sign: SignConvention) -> SymExpr {
    let d_mu = covariant_derivative(mu, sign);
    let d_nu = covariant_derivative(nu, sign);
    normalize(&d_mu.commutator(&d_nu))
}

/// Closed form the commutator must reduce to:
/// `iε(∂_ν B_μ − ∂_μ B_ν) − ε²[B_μ, B_ν]` (minus) or
/// `iε(∂_μ B_ν − ∂_ν B_μ) − ε²[B_μ, B_ν]` (plus).
pub fn commutator_reduction_expected(mu: u8, nu: u8, sign: SignConvention) -> SymExpr {
    let d = |field: u8, index: u8| SymExpr::atom(Atom::with_derivs(AtomKind::B(field), vec![index]));
    let curl = match sign {
        SignConvention::Minus => d(mu, nu) - d(nu, mu),
        SignConvention::Plus => d(nu, mu) - d(mu, nu),
    };
    let eps_sq = ScalarCoef::new(-BigRational::one(), 0, 2);
    normalize(&(curl.scaled(&i_eps()) + b(mu).commutator(&b(nu)).scaled(&eps_sq)))
}

/// Normal form of `d_μ(Sinv) + Sinv d_μ(S) Sinv`, which vanishes.
pub fn inverse_derivative_identity(mu: u8) -> SymExpr {
    let d_sinv = SymExpr::atom(Atom::with_derivs(AtomKind::Sinv, vec![mu]));
    normalize(&(d_sinv + sinv() * d_s(mu) * sinv()))
}
