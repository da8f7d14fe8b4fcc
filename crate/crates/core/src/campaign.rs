//! Seeded numerical campaigns behind `check-covariance`.

use serde_json::json;
use thiserror::Error;

use crate::fieldnum::{
    commutator_rhs, covariance_residual_with, field_strength_via_commutator, infinitesimal_scaling_ratio,
    spinor_distance, u1_gauge_check, FieldSpec, SignConvention, TransformConvention,
};
use crate::identities::{COVARIANCE_TAG, FIELD_STRENGTH_TAG};
use crate::report::{json_f64, CheckRecord, Report};
use crate::sampling::{random_field_spec, random_point, random_u1_config, trial_rng};

pub const U1_TOLERANCE: f64 = 1e-10;
pub const TRUNCATED_FLOOR: f64 = 1e-3;
pub const TRUNCATED_FRACTION: f64 = 0.95;
pub const SCALING_BAND: (f64, f64) = (3.6, 4.4);
pub const SCALING_FRACTION: f64 = 0.9;
pub const SCALING_NORMS: (f64, f64) = (1e-4, 5e-5);

const U1_TAG: &str = "D'_mu psi' = e^{iq alpha} D_mu psi";
const SCALING_TAG: &str = "b'_mu = b_mu + 2 (b_mu x alpha) + (1/eps) d_mu alpha + O(alpha^2)";

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("points per trial must be at least 1")]
    NoPoints,
    #[error("tolerance must be a positive finite number, got {0}")]
    BadTolerance(f64),
    #[error("epsilon must be nonzero and finite, got {0}")]
    BadEpsilon(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignConfig {
    pub seed: u64,
    pub trials: usize,
    pub points_per_trial: usize,
    pub tolerance: f64,
    /// `None` draws ε per trial.
    pub epsilon: Option<f64>,
    pub sign: SignConvention,
    pub transform: TransformConvention,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            seed: 42,
            trials: 100,
            points_per_trial: 5,
            tolerance: 1e-9,
            epsilon: None,
            sign: SignConvention::Minus,
            transform: TransformConvention::Ym,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::NoTrials);
        }
        if self.points_per_trial == 0 {
            return Err(ConfigError::NoPoints);
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(ConfigError::BadTolerance(self.tolerance));
        }
        match self.epsilon {
            Some(e) if e == 0.0 || !e.is_finite() => Err(ConfigError::BadEpsilon(e)),
            _ => Ok(()),
        }
    }
}

/// Per-trial maxima over all sampled points and index pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub epsilon: f64,
    pub covariance: f64,
    pub truncated: f64,
    pub commutator: f64,
    pub u1: f64,
    pub scaling_ratio: Option<f64>,
}

/// Max that lets a NaN poison the result instead of being skipped.
fn worst(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

pub fn run_trial(cfg: &CampaignConfig, trial: usize) -> TrialOutcome {
    let mut rng = trial_rng(cfg.seed, trial as u64);
    let spec: FieldSpec = random_field_spec(&mut rng, cfg.epsilon, cfg.sign, cfg.transform);
    let u1_cfg = random_u1_config(&mut rng);
    let points: Vec<_> = (0..cfg.points_per_trial).map(|_| random_point(&mut rng)).collect();

    let mut out = TrialOutcome {
        epsilon: spec.epsilon(),
        covariance: 0.0,
        truncated: 0.0,
        commutator: 0.0,
        u1: 0.0,
        scaling_ratio: infinitesimal_scaling_ratio(&spec, 0, &points[0], SCALING_NORMS.0, SCALING_NORMS.1),
    };
    for x in &points {
        for mu in 0..4 {
            for nu in mu + 1..4 {
                out.covariance = worst(out.covariance, covariance_residual_with(&spec, mu, nu, x, true));
                out.truncated = worst(out.truncated, covariance_residual_with(&spec, mu, nu, x, false));
                let lhs = field_strength_via_commutator(&spec, mu, nu, x);
                out.commutator = worst(out.commutator, spinor_distance(&lhs, &commutator_rhs(&spec, mu, nu, x)));
            }
        }
        out.u1 = worst(out.u1, u1_gauge_check(&u1_cfg, x));
    }
    out
}

pub fn run_trials_sequential(cfg: &CampaignConfig) -> Vec<TrialOutcome> {
    (0..cfg.trials).map(|t| run_trial(cfg, t)).collect()
}

/// Same output as [`run_trials_sequential`]; uses rayon when the `parallel`
/// feature is enabled.
pub fn run_trials(cfg: &CampaignConfig) -> Vec<TrialOutcome> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_trials_sequential(cfg)
    }
}

fn max_of(outcomes: &[TrialOutcome], f: impl Fn(&TrialOutcome) -> f64) -> f64 {
    outcomes.iter().map(f).fold(0.0, worst)
}

fn required(trials: usize, fraction: f64) -> usize {
    (trials as f64 * fraction).ceil() as usize
}

pub fn summarize(cfg: &CampaignConfig, outcomes: &[TrialOutcome]) -> Report {
    let conv = format!("{}/{}", cfg.sign.name(), cfg.transform.name());
    let tol = cfg.tolerance;
    let mut records = Vec::new();

    records.push(
        CheckRecord::new("covariance", COVARIANCE_TAG, &conv)
            .with_seed(cfg.seed)
            .residual(max_of(outcomes, |o| o.covariance), tol),
    );
    records.push(
        CheckRecord::new("commutator_identity", FIELD_STRENGTH_TAG, cfg.sign.name())
            .with_seed(cfg.seed)
            .residual(max_of(outcomes, |o| o.commutator), tol),
    );
    records.push(
        CheckRecord::new("u1_gauge", U1_TAG, "abelian")
            .with_seed(cfg.seed)
            .residual(max_of(outcomes, |o| o.u1), tol.min(U1_TOLERANCE)),
    );

    let above = outcomes.iter().filter(|o| o.truncated > TRUNCATED_FLOOR).count();
    let floor = outcomes.iter().map(|o| o.truncated).fold(f64::INFINITY, f64::min);
    let mut truncated = CheckRecord::new("covariance_without_commutator", COVARIANCE_TAG, &conv)
        .with_seed(cfg.seed)
        .counted(above, required(outcomes.len(), TRUNCATED_FRACTION))
        .with_detail(format!("smallest per-trial residual {floor:.3e}, threshold {TRUNCATED_FLOOR:e}"));
    truncated.expected_nonzero = true;
    truncated.max_residual = Some(max_of(outcomes, |o| o.truncated));
    records.push(truncated);

    let (lo, hi) = SCALING_BAND;
    let in_band = outcomes
        .iter()
        .filter(|o| o.scaling_ratio.is_some_and(|r| (lo..=hi).contains(&r)))
        .count();
    records.push(
        CheckRecord::new("infinitesimal_scaling", SCALING_TAG, "author")
            .with_seed(cfg.seed)
            .counted(in_band, required(outcomes.len(), SCALING_FRACTION))
            .with_detail(format!(
                "error ratio between |alpha| = {:e} and {:e} in [{lo}, {hi}]",
                SCALING_NORMS.0, SCALING_NORMS.1
            )),
    );

    let config = json!({
        "seed": cfg.seed,
        "trials": cfg.trials,
        "points_per_trial": cfg.points_per_trial,
        "tolerance": json_f64(cfg.tolerance),
        "epsilon": cfg.epsilon.map(json_f64),
        "sign_convention": cfg.sign.name(),
        "transform_convention": cfg.transform.name(),
    });
    Report::new("check-covariance", config, records)
}

pub fn check_covariance(cfg: &CampaignConfig) -> Result<Report, ConfigError> {
    cfg.validate()?;
    Ok(summarize(cfg, &run_trials(cfg)))
}

/// Covariance and commutator residuals of one fixed configuration at the
/// given points, for `check-covariance --field`.
pub fn field_file_records(spec: &FieldSpec, points: &[crate::fieldnum::SamplePoint], tolerance: f64) -> Vec<CheckRecord> {
    let conv = format!("{}/{}", spec.sign_convention.name(), spec.transform_convention.name());
    let (mut cov, mut comm) = (0.0, 0.0);
    for x in points {
        for mu in 0..4 {
            for nu in mu + 1..4 {
                cov = worst(cov, covariance_residual_with(spec, mu, nu, x, true));
                let lhs = field_strength_via_commutator(spec, mu, nu, x);
                comm = worst(comm, spinor_distance(&lhs, &commutator_rhs(spec, mu, nu, x)));
            }
        }
    }
    vec![
        CheckRecord::new("field_file_covariance", COVARIANCE_TAG, &conv).residual(cov, tolerance),
        CheckRecord::new("field_file_commutator_identity", FIELD_STRENGTH_TAG, spec.sign_convention.name())
            .residual(comm, tolerance),
    ]
}
