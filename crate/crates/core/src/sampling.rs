//! Seeded random generators for fields, points and symbolic expressions.
//!
//! All randomness flows from ChaCha8 streams: trial `k` of a campaign with
//! seed `s` draws from `ChaCha8Rng::seed_from_u64(s)` on stream `k`, so each
//! trial is reproducible on its own and independent of thread scheduling.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coordexpr::CoordExpr;
use crate::fieldnum::{FieldSpec, SamplePoint, SignConvention, TransformConvention, U1Config};
use crate::jet::DIM;
use crate::symca::{Atom, AtomKind, Factor, Monomial, ScalarCoef, SymExpr};

pub const EPSILON_CHOICES: [f64; 3] = [0.5, 1.0, 2.0];

pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn coef(rng: &mut impl Rng) -> f64 {
    rng.gen_range(-1.0..=1.0)
}

fn linear_form(rng: &mut impl Rng) -> CoordExpr {
    (0..DIM).fold(CoordExpr::constant(coef(rng)), |acc, mu| {
        CoordExpr::add(acc, CoordExpr::coord(mu).scaled(coef(rng)))
    })
}

/// Degree-≤2 polynomial in `x0..x3` with uniform `[−1, 1]` coefficients,
/// plus (with probability 1/2) a scaled `sin`, `cos` or `exp` of a linear form.
pub fn random_scalar_field(rng: &mut impl Rng) -> CoordExpr {
    let mut e = CoordExpr::constant(coef(rng));
    for mu in 0..DIM {
        e = CoordExpr::add(e, CoordExpr::coord(mu).scaled(coef(rng)));
    }
    for mu in 0..DIM {
        for nu in mu..DIM {
            let quad = if mu == nu {
                CoordExpr::pow(CoordExpr::coord(mu), 2)
            } else {
                CoordExpr::mul(CoordExpr::coord(mu), CoordExpr::coord(nu))
            };
            e = CoordExpr::add(e, quad.scaled(coef(rng)));
        }
    }
    if rng.gen_bool(0.5) {
        let arg = linear_form(rng);
        let amp = coef(rng);
        let wave = match rng.gen_range(0..3) {
            0 => CoordExpr::sin(arg),
            1 => CoordExpr::cos(arg),
            _ => CoordExpr::exp(arg.scaled(0.5)),
        };
        e = CoordExpr::add(e, wave.scaled(amp));
    }
    e
}

pub fn random_epsilon(rng: &mut impl Rng) -> f64 {
    *EPSILON_CHOICES.choose(rng).expect("nonempty")
}

/// Random smooth configuration; `epsilon = None` draws from [`EPSILON_CHOICES`].
pub fn random_field_spec(
    rng: &mut impl Rng,
    epsilon: Option<f64>,
    sign: SignConvention,
    transform: TransformConvention,
) -> FieldSpec {
    let alpha = [(); 3].map(|_| random_scalar_field(rng));
    let b = [(); DIM].map(|_| [(); 3].map(|_| random_scalar_field(rng)));
    let psi = [(); 2].map(|_| random_scalar_field(rng));
    let eps = epsilon.unwrap_or_else(|| random_epsilon(rng));
    FieldSpec::new(alpha, b, psi, eps)
        .expect("sampled epsilon is nonzero")
        .with_conventions(sign, transform)
}

/// Configuration with every `b_μ = f_μ(x) n` for one fixed direction `n`.
pub fn random_parallel_spec(rng: &mut impl Rng) -> (FieldSpec, [CoordExpr; DIM], [f64; 3]) {
    let mut spec = random_field_spec(rng, None, SignConvention::Minus, TransformConvention::Ym);
    let n = [coef(rng), coef(rng), coef(rng)];
    let profiles = [(); DIM].map(|_| random_scalar_field(rng));
    spec.b = profiles.clone().map(|f| n.map(|nk| f.clone().scaled(nk)));
    (spec, profiles, n)
}

pub fn random_point(rng: &mut impl Rng) -> SamplePoint {
    SamplePoint([(); DIM].map(|_| rng.gen_range(-1.0..=1.0)))
}

pub fn random_u1_config(rng: &mut impl Rng) -> U1Config {
    U1Config {
        a: [(); DIM].map(|_| random_scalar_field(rng)),
        alpha: random_scalar_field(rng),
        q: random_epsilon(rng),
        psi: [(); 2].map(|_| random_scalar_field(rng)),
    }
}

fn random_atom(rng: &mut impl Rng, derivs: usize) -> Atom {
    let kind = match rng.gen_range(0..7) {
        0 => AtomKind::S,
        1 => AtomKind::Sinv,
        2..=5 => AtomKind::B(rng.gen_range(0..4)),
        _ => AtomKind::Psi,
    };
    Atom::with_derivs(kind, (0..derivs).map(|_| rng.gen_range(0..4)).collect())
}

fn random_coef(rng: &mut impl Rng) -> ScalarCoef {
    let num = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let den = rng.gen_range(1..=2);
    let r = BigRational::new(BigInt::from(num), BigInt::from(den));
    ScalarCoef::new(r, rng.gen_range(0..4), rng.gen_range(-1..=2))
}

/// Random sum of `terms` products, each of 1 to `max_len` factors and at most
/// `max_derivs` derivative units (free operators plus atom decorations).
pub fn random_sym_expr(rng: &mut impl Rng, terms: usize, max_len: usize, max_derivs: usize) -> SymExpr {
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let len = rng.gen_range(1..=max_len);
        let mut budget = max_derivs;
        let mut factors = Vec::with_capacity(len);
        for _ in 0..len {
            if budget > 0 && rng.gen_bool(0.25) {
                budget -= 1;
                factors.push(Factor::Op(rng.gen_range(0..4)));
            } else {
                let d = if budget > 0 && rng.gen_bool(0.3) { rng.gen_range(1..=budget) } else { 0 };
                budget -= d;
                factors.push(Factor::Atom(random_atom(rng, d)));
            }
        }
        out.push(Monomial::new(random_coef(rng), factors));
    }
    SymExpr { terms: out }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream_same_spec() {
        let a = random_field_spec(&mut trial_rng(42, 7), None, SignConvention::Minus, TransformConvention::Ym);
        let b = random_field_spec(&mut trial_rng(42, 7), None, SignConvention::Minus, TransformConvention::Ym);
        let c = random_field_spec(&mut trial_rng(42, 8), None, SignConvention::Minus, TransformConvention::Ym);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_expressions_respect_derivative_budget() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..200 {
            let e = random_sym_expr(&mut rng, 4, 6, 2);
            for m in &e.terms {
                let units: usize = m
                    .factors
                    .iter()
                    .map(|f| match f {
                        Factor::Op(_) => 1,
                        Factor::Atom(a) => a.derivs().len(),
                    })
                    .sum();
                assert!(units <= 2);
                assert!((1..=6).contains(&m.factors.len()));
            }
        }
    }
}
