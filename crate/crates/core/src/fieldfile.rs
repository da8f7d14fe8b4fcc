//! JSON field-configuration files and the transform output document.
//!
//! ```json
//! {
//!   "alpha": ["0.3*x0", "0", "sin(x1)"],
//!   "b": [["x0", "0", "0"], ["0", "x1^2", "0"], ["0", "0", "0"], ["1", "0", "0"]],
//!   "psi": ["1", "x2"],
//!   "epsilon": 1.0,
//!   "points": [[0.1, 0.2, 0.3, 0.4]]
//! }
//! ```

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::coordexpr::{CoordExpr, ExprParseError};
use crate::fieldnum::{
    field_strength_direct, field_strength_transformed, transform_potential, FieldError, FieldSpec, SamplePoint,
    SignConvention, TransformConvention,
};
use crate::jet::DIM;
use crate::liealg::Mat2;
use crate::report::json_f64;
use crate::VERSION;

#[derive(Debug, Error)]
pub enum FieldFileError {
    #[error("invalid field file: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("invalid expression in {location}: {source}")]
    Expr { location: String, source: ExprParseError },
    #[error("sample point {index} is not finite")]
    NonFinitePoint { index: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub alpha: [String; 3],
    pub b: [[String; 3]; DIM],
    pub psi: [String; 2],
    pub epsilon: f64,
    pub points: Vec<[f64; DIM]>,
}

fn parse_at(text: &str, location: String) -> Result<CoordExpr, FieldFileError> {
    CoordExpr::parse(text).map_err(|source| FieldFileError::Expr { location, source })
}

impl FieldFile {
    pub fn from_json(text: &str) -> Result<Self, FieldFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_spec(spec: &FieldSpec, points: &[SamplePoint]) -> Self {
        FieldFile {
            alpha: spec.alpha.clone().map(|e| e.to_string()),
            b: spec.b.clone().map(|row| row.map(|e| e.to_string())),
            psi: spec.psi.clone().map(|e| e.to_string()),
            epsilon: spec.epsilon(),
            points: points.iter().map(|p| p.0).collect(),
        }
    }

    pub fn to_spec(
        &self,
        sign: SignConvention,
        transform: TransformConvention,
    ) -> Result<(FieldSpec, Vec<SamplePoint>), FieldFileError> {
        let mut alpha = Vec::with_capacity(3);
        for (k, s) in self.alpha.iter().enumerate() {
            alpha.push(parse_at(s, format!("alpha[{k}]"))?);
        }
        let mut b = Vec::with_capacity(DIM);
        for (mu, row) in self.b.iter().enumerate() {
            let mut comps = Vec::with_capacity(3);
            for (k, s) in row.iter().enumerate() {
                comps.push(parse_at(s, format!("b[{mu}][{k}]"))?);
            }
            b.push(<[CoordExpr; 3]>::try_from(comps).expect("three components"));
        }
        let mut psi = Vec::with_capacity(2);
        for (k, s) in self.psi.iter().enumerate() {
            psi.push(parse_at(s, format!("psi[{k}]"))?);
        }
        for (index, p) in self.points.iter().enumerate() {
            if !p.iter().all(|c| c.is_finite()) {
                return Err(FieldFileError::NonFinitePoint { index });
            }
        }
        let spec = FieldSpec::new(
            alpha.try_into().expect("three components"),
            b.try_into().expect("four potentials"),
            psi.try_into().expect("two components"),
            self.epsilon,
        )?
        .with_conventions(sign, transform);
        Ok((spec, self.points.iter().copied().map(SamplePoint).collect()))
    }
}

fn mat_json(m: &Mat2) -> Value {
    Value::Array(
        m.0.iter()
            .map(|row| Value::Array(row.iter().map(|c| Value::Array(vec![json_f64(c.re), json_f64(c.im)])).collect()))
            .collect(),
    )
}

/// `B`, `B′`, `F` and `F′ = F(B′)` at every point; matrices are nested
/// `[row][col][re, im]` arrays, field strengths listed for `μ < ν`.
pub fn transform_document(spec: &FieldSpec, points: &[SamplePoint]) -> Value {
    let pairs: Vec<(usize, usize)> = (0..DIM).flat_map(|m| (m + 1..DIM).map(move |n| (m, n))).collect();
    let samples: Vec<Value> = points
        .iter()
        .map(|x| {
            let b: Vec<Value> = (0..DIM).map(|mu| mat_json(&crate::fieldnum::eval_B(spec, mu, x).0)).collect();
            let bp: Vec<Value> = (0..DIM).map(|mu| mat_json(&transform_potential(spec, mu, x))).collect();
            let f = |primed: bool| -> Vec<Value> {
                pairs
                    .iter()
                    .map(|&(mu, nu)| {
                        let m = if primed {
                            field_strength_transformed(spec, mu, nu, x, true)
                        } else {
                            field_strength_direct(spec, mu, nu, x)
                        };
                        serde_json::json!({ "mu": mu, "nu": nu, "value": mat_json(&m) })
                    })
                    .collect()
            };
            serde_json::json!({
                "x": x.0.iter().map(|c| json_f64(*c)).collect::<Vec<_>>(),
                "b": b,
                "b_primed": bp,
                "f": f(false),
                "f_primed": f(true),
            })
        })
        .collect();
    serde_json::json!({
        "tool": "gaugecheck",
        "version": VERSION,
        "convention": spec.transform_convention.name(),
        "sign": spec.sign_convention.name(),
        "epsilon": json_f64(spec.epsilon()),
        "points": samples,
    })
}
