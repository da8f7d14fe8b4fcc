//! The symbolic identity corpus run by `verify-identities`.

use serde_json::json;
use thiserror::Error;

use crate::fieldnum::{SignConvention, TransformConvention};
use crate::report::{CheckRecord, Report};
use crate::symca::{
    build_transformed_potential, commutator_expand, commutator_reduction_expected, counterterm_check,
    counterterm_check_flipped, counterterm_product, covariance_residual_sym, field_strength_sym,
    inverse_derivative_identity, normalize, parse_expr, potential_atoms, ScalarCoef, SymExpr, SymParseError,
};

pub const COMMUTATOR_TAG: &str = "[D_mu, D_nu] = i eps (d_nu B_mu - d_mu B_nu) - eps^2 [B_mu, B_nu]";
pub const FIELD_STRENGTH_TAG: &str = "[D_mu, D_nu] = i eps F_mu_nu";
pub const COVARIANCE_TAG: &str = "F'_mu_nu = S^-1 F_mu_nu S";
pub const EXTRANEOUS_TAG: &str = "d_nu B'_mu - d_mu B'_nu = S^-1 (d_nu B_mu - d_mu B_nu) S + extraneous";
pub const COUNTERTERM_TAG: &str = "i eps [B'_mu, B'_nu] cancels the extraneous terms";
pub const PRODUCT_TAG: &str = "i eps B'_mu B'_nu expansion";
pub const INVERSE_TAG: &str = "d_mu S^-1 = -S^-1 (d_mu S) S^-1";
pub const DUALITY_TAG: &str = "B' (ym, S -> S^-1) = B' (author)";

/// All index pairs `μ < ν`.
pub fn index_pairs() -> Vec<(u8, u8)> {
    (0..4u8).flat_map(|m| (m + 1..4).map(move |n| (m, n))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CustomIdentity {
    pub name: String,
    pub lhs: SymExpr,
    pub rhs: SymExpr,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdentityFileError {
    #[error("line {line}: expected `LHS == RHS`")]
    MissingEquals { line: usize },
    #[error("line {line}, column {column}: {source}")]
    Parse { line: usize, column: usize, source: SymParseError },
}

/// One identity per line, `[name:] LHS == RHS`; `#` starts a comment.
pub fn parse_identity_file(text: &str) -> Result<Vec<CustomIdentity>, IdentityFileError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let (name, body, body_offset) = match content.split_once(':') {
            Some((n, b)) => (n.trim().to_string(), b, n.len() + 1),
            None => (format!("line {line}"), content, 0),
        };
        let (lhs, rhs) = body.split_once("==").ok_or(IdentityFileError::MissingEquals { line })?;
        let parse = |text: &str, offset: usize| {
            parse_expr(text).map_err(|source| IdentityFileError::Parse {
                line,
                column: offset + source.position() + 1,
                source,
            })
        };
        let lhs_expr = parse(lhs, body_offset)?;
        let rhs_expr = parse(rhs, body_offset + lhs.len() + 2)?;
        out.push(CustomIdentity { name, lhs: lhs_expr, rhs: rhs_expr });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityOptions {
    /// Run the covariance checks with the full field strength; when false
    /// they are expected to leave a nonzero residual.
    pub with_commutator: bool,
    pub custom: Vec<CustomIdentity>,
}

impl Default for IdentityOptions {
    fn default() -> Self {
        IdentityOptions { with_commutator: true, custom: Vec::new() }
    }
}

/// Passes iff `residual` is empty; failing records carry the normal form.
fn must_vanish(record: CheckRecord, residual: &SymExpr) -> CheckRecord {
    let mut r = record;
    r.term_count = Some(residual.len());
    r.passed = residual.is_zero();
    if !r.passed {
        r.normal_form = Some(residual.to_string());
    }
    r
}

/// Passes iff `residual` is nonempty; the normal form is always attached.
fn must_not_vanish(record: CheckRecord, residual: &SymExpr) -> CheckRecord {
    let mut r = record;
    r.expected_nonzero = true;
    r.term_count = Some(residual.len());
    r.passed = !residual.is_zero();
    r.normal_form = Some(residual.to_string());
    r
}

fn difference(a: &SymExpr, b: &SymExpr) -> SymExpr {
    normalize(&(a.clone() - b.clone()))
}

/// The extraneous terms left by the curl-only field strength under the ym
/// transformation, written out by hand.
pub fn extraneous_terms_expected(mu: u8, nu: u8) -> SymExpr {
    let text = format!(
        "- Sinv d{nu}(S) Sinv B{mu} S + Sinv d{mu}(S) Sinv B{nu} S \
         + Sinv B{mu} d{nu}(S) - Sinv B{nu} d{mu}(S) \
         + i/eps (- Sinv d{nu}(S) Sinv d{mu}(S) + Sinv d{mu}(S) Sinv d{nu}(S))"
    );
    normalize(&parse_expr(&text).expect("well-formed corpus expression"))
}

/// Hand expansion of `iε B′_μ B′_ν` in the ym convention.
pub fn counterterm_product_expected(mu: u8, nu: u8) -> SymExpr {
    let text = format!(
        "i eps Sinv B{mu} B{nu} S - i/eps Sinv d{mu}(S) Sinv d{nu}(S) \
         - Sinv B{mu} d{nu}(S) - Sinv d{mu}(S) Sinv B{nu} S"
    );
    normalize(&parse_expr(&text).expect("well-formed corpus expression"))
}

pub fn verify_identities(opts: &IdentityOptions) -> Report {
    let mut records = Vec::new();
    let conventions = [TransformConvention::Ym, TransformConvention::Author];
    let i_eps = ScalarCoef::new(num_rational::BigRational::from_integer(1.into()), 1, 1);

    for (mu, nu) in index_pairs() {
        let pair = format!("{mu}{nu}");
        for sign in [SignConvention::Minus, SignConvention::Plus] {
            let got = commutator_expand(mu, nu, sign);
            let want = commutator_reduction_expected(mu, nu, sign);
            let rec = CheckRecord::new(format!("commutator_reduction_{pair}"), COMMUTATOR_TAG, sign.name());
            records.push(must_vanish(rec, &difference(&got, &want)));
        }

        let f = field_strength_sym(mu, nu, true, &potential_atoms()).scaled(&i_eps);
        let rec = CheckRecord::new(format!("commutator_field_strength_{pair}"), FIELD_STRENGTH_TAG, "minus");
        records.push(must_vanish(rec, &difference(&commutator_expand(mu, nu, SignConvention::Minus), &f)));

        for conv in conventions {
            let residual = covariance_residual_sym(mu, nu, opts.with_commutator, conv);
            let rec = CheckRecord::new(format!("covariance_{pair}"), COVARIANCE_TAG, conv.name());
            records.push(if opts.with_commutator {
                must_vanish(rec, &residual)
            } else {
                must_not_vanish(rec.with_detail("field strength without commutator term"), &residual)
            });
        }

        let extraneous = covariance_residual_sym(mu, nu, false, TransformConvention::Ym);
        let rec = CheckRecord::new(format!("extraneous_terms_{pair}"), EXTRANEOUS_TAG, "ym");
        records.push(must_vanish(rec, &difference(&extraneous, &extraneous_terms_expected(mu, nu))));

        let rec = CheckRecord::new(format!("counterterm_product_{pair}"), PRODUCT_TAG, "ym");
        let product = counterterm_product(mu, nu, TransformConvention::Ym);
        records.push(must_vanish(rec, &difference(&product, &counterterm_product_expected(mu, nu))));

        for conv in conventions {
            let rec = CheckRecord::new(format!("counterterm_{pair}"), COUNTERTERM_TAG, conv.name());
            records.push(must_vanish(rec, &counterterm_check(mu, nu, conv)));
            let rec = CheckRecord::new(format!("counterterm_sign_control_{pair}"), COUNTERTERM_TAG, conv.name())
                .with_detail("counterterm sign reversed");
            records.push(must_not_vanish(rec, &counterterm_check_flipped(mu, nu, conv)));
        }
    }

    for mu in 0..4u8 {
        let rec = CheckRecord::new(format!("inverse_derivative_{mu}"), INVERSE_TAG, "none");
        records.push(must_vanish(rec, &inverse_derivative_identity(mu)));

        let swapped = build_transformed_potential(mu, TransformConvention::Ym).swap_group_atoms();
        let author = build_transformed_potential(mu, TransformConvention::Author);
        let rec = CheckRecord::new(format!("potential_duality_{mu}"), DUALITY_TAG, "ym/author");
        records.push(must_vanish(rec, &difference(&swapped, &author)));
    }

    for id in &opts.custom {
        let rec = CheckRecord::new(format!("custom: {}", id.name), "user identity", "none");
        records.push(must_vanish(rec, &difference(&id.lhs, &id.rhs)));
    }

    let config = json!({
        "with_commutator": opts.with_commutator,
        "custom_identities": opts.custom.len(),
    });
    Report::new("verify-identities", config, records)
}
