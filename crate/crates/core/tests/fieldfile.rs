use gaugecheck_core::fieldfile::{transform_document, FieldFile, FieldFileError};
use gaugecheck_core::fieldnum::{FieldError, SignConvention, TransformConvention};
use gaugecheck_core::sampling::{random_field_spec, random_point, trial_rng};

const SAMPLE: &str = r#"{
  "alpha": ["0.3*x0", "0", "sin(x1)"],
  "b": [["x0", "0", "0"], ["0", "x1^2", "0"], ["0", "0", "0"], ["1", "0", "0"]],
  "psi": ["1", "x2"],
  "epsilon": 1.0,
  "points": [[0.1, 0.2, 0.3, 0.4], [0, 0, 0, 0]]
}"#;

fn load(text: &str) -> Result<(gaugecheck_core::fieldnum::FieldSpec, Vec<gaugecheck_core::fieldnum::SamplePoint>), FieldFileError> {
    FieldFile::from_json(text)?.to_spec(SignConvention::Minus, TransformConvention::Ym)
}

fn entries(v: &serde_json::Value) -> Vec<f64> {
    match v {
        serde_json::Value::Array(a) => a.iter().flat_map(entries).collect(),
        serde_json::Value::Number(n) => vec![n.as_f64().unwrap()],
        _ => Vec::new(),
    }
}

#[test]
fn sample_file_loads() {
    let (spec, points) = load(SAMPLE).unwrap();
    assert_eq!(points.len(), 2);
    assert_eq!(spec.epsilon(), 1.0);
}

#[test]
fn missing_epsilon_names_the_key() {
    let text = SAMPLE.replace("\"epsilon\": 1.0,", "");
    let err = load(&text).unwrap_err();
    assert!(matches!(err, FieldFileError::Schema(_)));
    assert!(err.to_string().contains("epsilon"), "{err}");
}

#[test]
fn zero_epsilon_is_a_field_error() {
    let text = SAMPLE.replace("\"epsilon\": 1.0", "\"epsilon\": 0");
    assert!(matches!(load(&text), Err(FieldFileError::Field(FieldError::ZeroEpsilon))));
}

#[test]
fn bad_expression_reports_location() {
    let text = SAMPLE.replace("x1^2", "x1^^2");
    let err = load(&text).unwrap_err();
    assert!(err.to_string().contains("b[1][1]"), "{err}");
}

#[test]
fn zero_alpha_leaves_potentials_unchanged() {
    let text = SAMPLE.replace(r#"["0.3*x0", "0", "sin(x1)"]"#, r#"["0", "0", "0"]"#);
    let (spec, points) = load(&text).unwrap();
    let doc = transform_document(&spec, &points);
    for p in doc["points"].as_array().unwrap() {
        assert_eq!(entries(&p["b"]), entries(&p["b_primed"]));
        assert_eq!(entries(&p["f"]), entries(&p["f_primed"]));
    }
}

#[test]
fn pure_gauge_has_vanishing_transformed_field_strength() {
    let text = SAMPLE.replace(
        r#"[["x0", "0", "0"], ["0", "x1^2", "0"], ["0", "0", "0"], ["1", "0", "0"]]"#,
        r#"[["0", "0", "0"], ["0", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]"#,
    );
    let (spec, points) = load(&text).unwrap();
    let doc = transform_document(&spec, &points);
    for p in doc["points"].as_array().unwrap() {
        assert!(entries(&p["f_primed"]).iter().all(|v| v.abs() < 1e-12));
        assert!(entries(&p["b_primed"]).iter().any(|v| v.abs() > 1e-3));
    }
}

#[test]
fn spec_round_trips_through_file() {
    let mut rng = trial_rng(9, 0);
    let spec = random_field_spec(&mut rng, None, SignConvention::Plus, TransformConvention::Author);
    let points = vec![random_point(&mut rng)];
    let file = FieldFile::from_spec(&spec, &points);
    let text = serde_json::to_string(&file).unwrap();
    let (back, back_points) = FieldFile::from_json(&text).unwrap().to_spec(SignConvention::Plus, TransformConvention::Author).unwrap();
    assert_eq!(back_points, points);
    let a = transform_document(&spec, &points);
    let b = transform_document(&back, &back_points);
    let (ea, eb) = (entries(&a["points"]), entries(&b["points"]));
    assert!(ea.iter().zip(&eb).all(|(x, y)| (x - y).abs() <= 1e-12 * (1.0 + x.abs())));
}
