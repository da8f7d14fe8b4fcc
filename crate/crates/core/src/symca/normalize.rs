//! Terminating rewrite system to the canonical sum of monomials.
//!
//! Rules, applied innermost-leftmost until none matches:
//!
//! * **R1** `d_m A → (∂_m A) + A d_m` (operator Leibniz rule), and
//!   `d_m d_n → d_n d_m` for `m > n` (free derivatives commute).
//! * **R2** `∂_D Sinv`, `D` nonempty → `−∂_{D∖ν}(Sinv (∂_ν S) Sinv)` expanded by
//!   Leibniz over the three factors.
//! * **R3** `S Sinv → 1`, `Sinv S → 1` for underived atoms.
//! * **R4/R5** scalars multiply into the coefficient; like monomials merge
//!   and zero monomials disappear.
//!
//! Per-step measures: R1 lowers the total number of atoms standing to the
//! right of free operators (the operator swap lowers the operator inversion
//! count instead), R2 lowers the number of derivatives carried by `Sinv`
//! atoms, and R3 lowers the atom count. Debug builds assert each of these.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{Atom, AtomKind, Factor, Monomial, ScalarCoef, SymExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RewriteRule {
    OperatorLeibniz,
    OperatorSwap,
    InverseDerivative,
    InverseCancel,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizeStats {
    pub operator_leibniz: usize,
    pub operator_swap: usize,
    pub inverse_derivative: usize,
    pub inverse_cancel: usize,
}

impl NormalizeStats {
    pub fn total(&self) -> usize {
        self.operator_leibniz + self.operator_swap + self.inverse_derivative + self.inverse_cancel
    }

    fn record(&mut self, rule: RewriteRule) {
        match rule {
            RewriteRule::OperatorLeibniz => self.operator_leibniz += 1,
            RewriteRule::OperatorSwap => self.operator_swap += 1,
            RewriteRule::InverseDerivative => self.inverse_derivative += 1,
            RewriteRule::InverseCancel => self.inverse_cancel += 1,
        }
    }
}

/// Sort key of a normal monomial: atoms, then trailing operators, then the
/// scalar's `eps` and `i` powers (monomials differing only there cannot merge).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct NormalKey {
    atoms: Vec<Atom>,
    ops: Vec<u8>,
    eps_power: i32,
    i_power: u8,
}

pub fn normalize(e: &SymExpr) -> SymExpr {
    normalize_with_stats(e).0
}

pub fn normalize_with_stats(e: &SymExpr) -> (SymExpr, NormalizeStats) {
    let mut stats = NormalizeStats::default();
    let mut collected: BTreeMap<NormalKey, BigRational> = BTreeMap::new();
    let mut work: Vec<Monomial> = e.terms.iter().rev().filter(|m| !m.coef.is_zero()).cloned().collect();

    while let Some(term) = work.pop() {
        match find_redex(&term.factors) {
            None => {
                let key = NormalKey {
                    atoms: term.atoms().cloned().collect(),
                    ops: term.trailing_ops(),
                    eps_power: term.coef.eps_power,
                    i_power: term.coef.i_power,
                };
                *collected.entry(key).or_insert_with(BigRational::zero) += term.coef.rational;
            }
            Some((pos, rule)) => {
                stats.record(rule);
                let produced = rewrite(&term, pos, rule);
                #[cfg(debug_assertions)]
                for p in &produced {
                    assert_measure_decreases(&term.factors, &p.factors, rule);
                }
                // reversed so the leftmost product is processed next
                work.extend(produced.into_iter().rev());
            }
        }
    }

    let terms = collected
        .into_iter()
        .filter(|(_, r)| !r.is_zero())
        .map(|(key, rational)| {
            let mut factors: Vec<Factor> = key.atoms.into_iter().map(Factor::Atom).collect();
            factors.extend(key.ops.into_iter().map(Factor::Op));
            Monomial::new(ScalarCoef::new(rational, key.i_power as u32, key.eps_power), factors)
        })
        .collect();
    (SymExpr { terms }, stats)
}

fn find_redex(factors: &[Factor]) -> Option<(usize, RewriteRule)> {
    for (i, f) in factors.iter().enumerate() {
        let next = factors.get(i + 1);
        match (f, next) {
            (Factor::Atom(a), _) if a.kind == AtomKind::Sinv && !a.derivs.is_empty() => {
                return Some((i, RewriteRule::InverseDerivative));
            }
            (Factor::Op(_), Some(Factor::Atom(_))) => return Some((i, RewriteRule::OperatorLeibniz)),
            (Factor::Op(m), Some(Factor::Op(n))) if m > n => return Some((i, RewriteRule::OperatorSwap)),
            (Factor::Atom(a), Some(Factor::Atom(b)))
                if (a.is_bare(AtomKind::S) && b.is_bare(AtomKind::Sinv))
                    || (a.is_bare(AtomKind::Sinv) && b.is_bare(AtomKind::S)) =>
            {
                return Some((i, RewriteRule::InverseCancel));
            }
            _ => {}
        }
    }
    None
}

fn splice(factors: &[Factor], pos: usize, len: usize, middle: Vec<Factor>) -> Vec<Factor> {
    let mut out = Vec::with_capacity(factors.len() + middle.len());
    out.extend_from_slice(&factors[..pos]);
    out.extend(middle);
    out.extend_from_slice(&factors[pos + len..]);
    out
}

fn rewrite(term: &Monomial, pos: usize, rule: RewriteRule) -> Vec<Monomial> {
    let f = &term.factors;
    match rule {
        RewriteRule::OperatorLeibniz => {
            let (Factor::Op(m), Factor::Atom(a)) = (&f[pos], &f[pos + 1]) else {
                unreachable!("redex shape checked by find_redex")
            };
            vec![
                Monomial::new(term.coef.clone(), splice(f, pos, 2, vec![Factor::Atom(a.differentiated(*m))])),
                Monomial::new(term.coef.clone(), splice(f, pos, 2, vec![Factor::Atom(a.clone()), Factor::Op(*m)])),
            ]
        }
        RewriteRule::OperatorSwap => {
            let mut swapped = f.clone();
            swapped.swap(pos, pos + 1);
            vec![Monomial::new(term.coef.clone(), swapped)]
        }
        RewriteRule::InverseCancel => vec![Monomial::new(term.coef.clone(), splice(f, pos, 2, Vec::new()))],
        RewriteRule::InverseDerivative => {
            let Factor::Atom(a) = &f[pos] else { unreachable!("redex shape checked by find_redex") };
            let neg = term.coef.neg();
            inverse_derivative_expansion(&a.derivs)
                .into_iter()
                .map(|triple| Monomial::new(neg.clone(), splice(f, pos, 1, triple.into_iter().map(Factor::Atom).collect())))
                .collect()
        }
    }
}

/// `∂_D Sinv = −Σ (∂_{D₁}Sinv)(∂_{D₂}∂_ν S)(∂_{D₃}Sinv)` over all ways of
/// distributing the remaining indices `D ∖ {ν}` among the three factors.
/// Returned without the overall minus sign.
fn inverse_derivative_expansion(derivs: &[u8]) -> Vec<[Atom; 3]> {
    let (nu, rest) = derivs.split_first().expect("R2 needs at least one derivative");
    let mut out = vec![[Atom::new(AtomKind::Sinv), Atom::new(AtomKind::S).differentiated(*nu), Atom::new(AtomKind::Sinv)]];
    for d in rest {
        out = out
            .into_iter()
            .flat_map(|triple| {
                (0..3).map(move |slot| {
                    let mut t = triple.clone();
                    t[slot] = t[slot].differentiated(*d);
                    t
                })
            })
            .collect();
    }
    out
}

#[cfg(debug_assertions)]
fn assert_measure_decreases(before: &[Factor], after: &[Factor], rule: RewriteRule) {
    let span = |fs: &[Factor]| -> usize {
        let mut atoms_right = 0;
        let mut total = 0;
        for f in fs.iter().rev() {
            match f {
                Factor::Atom(_) => atoms_right += 1,
                Factor::Op(_) => total += atoms_right,
            }
        }
        total
    };
    let inversions = |fs: &[Factor]| -> usize {
        let ops: Vec<u8> = fs.iter().filter_map(|f| if let Factor::Op(m) = f { Some(*m) } else { None }).collect();
        let mut n = 0;
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                if ops[i] > ops[j] {
                    n += 1;
                }
            }
        }
        n
    };
    let sinv_derivs = |fs: &[Factor]| -> usize {
        fs.iter()
            .map(|f| match f {
                Factor::Atom(a) if a.kind == AtomKind::Sinv => a.derivs.len(),
                _ => 0,
            })
            .sum()
    };
    let atoms = |fs: &[Factor]| fs.iter().filter(|f| matches!(f, Factor::Atom(_))).count();
    match rule {
        RewriteRule::OperatorLeibniz => assert!(span(after) < span(before), "R1 must shrink operator span"),
        RewriteRule::OperatorSwap => {
            assert_eq!(span(after), span(before));
            assert!(inversions(after) < inversions(before), "operator swap must sort");
        }
        RewriteRule::InverseDerivative => {
            assert!(sinv_derivs(after) < sinv_derivs(before), "R2 must shrink Sinv derivatives")
        }
        RewriteRule::InverseCancel => assert!(atoms(after) < atoms(before), "R3 must shrink atom count"),
    }
}
