//! Numerical field engine.
//!
//! Fields are given as coordinate expressions and evaluated through
//! second-order jets, so every derivative below is exact up to rounding.
//! The covariant derivative is written `D_μ = ∂_μ − i g B_μ` with the signed
//! coupling `g = ε` for [`SignConvention::Minus`] and `g = −ε` for
//! [`SignConvention::Plus`]; every gauge formula is expressed through `g`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coordexpr::{eval_jet, CoordExpr};
use crate::jet::{Jet2, MatJet, DIM};
use crate::liealg::{
    from_matrix, mat_commutator, ComplexScalar, GroupElement, LieAlgError, Mat2, Vec3, I, SIGMA,
};

/// Cut-off on `|α|²` below which the closed forms switch to power series.
const SERIES_CUTOFF_U: f64 = 1.0;
const SERIES_TERMS: usize = 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("coupling epsilon must be nonzero")]
    ZeroEpsilon,
    #[error("coupling epsilon must be finite")]
    NonFiniteEpsilon,
    #[error(transparent)]
    Group(#[from] LieAlgError),
}

/// Sign in front of the potential in the covariant derivative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    /// `D_μ = ∂_μ − iεB_μ`
    #[default]
    Minus,
    /// `D_μ = ∂_μ + iεB_μ`
    Plus,
}

/// Which side the group element acts from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformConvention {
    /// `ψ = Sψ′`, `B′ = S⁻¹BS + iS⁻¹(∂S)/ε`, `F′ = S⁻¹FS`.
    #[default]
    Ym,
    /// `ψ′ = Sψ`, `B′ = SBS⁻¹ − i(∂S)S⁻¹/ε`, `F′ = SFS⁻¹`.
    Author,
}

impl SignConvention {
    pub fn name(self) -> &'static str {
        match self {
            SignConvention::Minus => "minus",
            SignConvention::Plus => "plus",
        }
    }
}

impl TransformConvention {
    pub fn name(self) -> &'static str {
        match self {
            TransformConvention::Ym => "ym",
            TransformConvention::Author => "author",
        }
    }
}

/// A complete field configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSpec {
    pub alpha: [CoordExpr; 3],
    pub b: [[CoordExpr; 3]; DIM],
    pub psi: [CoordExpr; 2],
    epsilon: f64,
    pub sign_convention: SignConvention,
    pub transform_convention: TransformConvention,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint(pub [f64; DIM]);

pub type Spinor = [ComplexScalar; 2];

impl FieldSpec {
    pub fn new(
        alpha: [CoordExpr; 3],
        b: [[CoordExpr; 3]; DIM],
        psi: [CoordExpr; 2],
        epsilon: f64,
    ) -> Result<Self, FieldError> {
        if !epsilon.is_finite() {
            return Err(FieldError::NonFiniteEpsilon);
        }
        if epsilon == 0.0 {
            return Err(FieldError::ZeroEpsilon);
        }
        Ok(FieldSpec {
            alpha,
            b,
            psi,
            epsilon,
            sign_convention: SignConvention::default(),
            transform_convention: TransformConvention::default(),
        })
    }

    pub fn with_conventions(mut self, sign: SignConvention, transform: TransformConvention) -> Self {
        self.sign_convention = sign;
        self.transform_convention = transform;
        self
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Signed coupling `g` in `D = ∂ − i g B`.
    pub fn coupling(&self) -> f64 {
        match self.sign_convention {
            SignConvention::Minus => self.epsilon,
            SignConvention::Plus => -self.epsilon,
        }
    }

    /// Same configuration with `α` multiplied by `factor`.
    pub fn with_alpha_scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.alpha = self.alpha.clone().map(|a| a.scaled(factor));
        out
    }

    /// Same configuration with `α` replaced by `−α`.
    pub fn with_alpha_negated(&self) -> Self {
        let mut out = self.clone();
        out.alpha = self.alpha.clone().map(CoordExpr::neg);
        out
    }
}

pub fn alpha_jets(spec: &FieldSpec, x: &SamplePoint) -> [Jet2; 3] {
    [0, 1, 2].map(|k| eval_jet(&spec.alpha[k], &x.0))
}

pub fn psi_jets(spec: &FieldSpec, x: &SamplePoint) -> [Jet2; 2] {
    [0, 1].map(|k| eval_jet(&spec.psi[k], &x.0))
}

/// `Σ_k f_k σ_k` as a matrix jet.
fn su2_jet(components: &[Jet2; 3]) -> MatJet {
    components
        .iter()
        .zip(SIGMA.iter())
        .map(|(c, s)| c.times_matrix(s))
        .fold(MatJet::zero(), |acc, m| acc + m)
}

/// Jet of `B_μ = b_μ·σ`.
pub fn b_jet(spec: &FieldSpec, mu: usize, x: &SamplePoint) -> MatJet {
    let comps = [0, 1, 2].map(|k| eval_jet(&spec.b[mu][k], &x.0));
    su2_jet(&comps)
}

/// `cos √u` and `sin √u / √u` with their first two `u`-derivatives.
fn trig_of_sqrt(u: f64) -> ([f64; 3], [f64; 3]) {
    if u.abs() < SERIES_CUTOFF_U {
        // cos √u = Σ (−u)^k/(2k)!, sinc √u = Σ (−u)^k/(2k+1)!
        let mut c = [0.0; 3];
        let mut s = [0.0; 3];
        let mut fact_even = 1.0; // (2k)!
        let mut fact_odd = 1.0; // (2k+1)!
        for k in 0..SERIES_TERMS {
            if k > 0 {
                fact_even *= (2 * k - 1) as f64 * (2 * k) as f64;
                fact_odd *= (2 * k) as f64 * (2 * k + 1) as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let kf = k as f64;
            let pow = |p: i32| if p < 0 { 0.0 } else { u.powi(p) };
            let k = k as i32;
            c[0] += sign * pow(k) / fact_even;
            c[1] += sign * kf * pow(k - 1) / fact_even;
            c[2] += sign * kf * (kf - 1.0) * pow(k - 2) / fact_even;
            s[0] += sign * pow(k) / fact_odd;
            s[1] += sign * kf * pow(k - 1) / fact_odd;
            s[2] += sign * kf * (kf - 1.0) * pow(k - 2) / fact_odd;
        }
        (c, s)
    } else {
        let r = u.sqrt();
        let (sn, cs) = r.sin_cos();
        let sinc = sn / r;
        let c = [cs, -sinc / 2.0, (sn - r * cs) / (4.0 * r * r * r)];
        let s = [
            sinc,
            (r * cs - sn) / (2.0 * r * r * r),
            (3.0 * sn - 3.0 * r * cs - r * r * sn) / (4.0 * r.powi(5)),
        ];
        (c, s)
    }
}

/// Jet of `S = exp(iα·σ) = cos|α| I + i sinc|α| (α·σ)`.
pub fn s_jet(spec: &FieldSpec, x: &SamplePoint) -> MatJet {
    s_jet_from_alpha(&alpha_jets(spec, x))
}

pub fn s_jet_from_alpha(alpha: &[Jet2; 3]) -> MatJet {
    let u = alpha.iter().fold(Jet2::zero(), |acc, a| acc + *a * *a);
    let (c, s) = trig_of_sqrt(u.value.re);
    let cos_part = u.compose(c[0].into(), c[1].into(), c[2].into());
    let sinc_part = u.compose(s[0].into(), s[1].into(), s[2].into());
    let scaled = alpha.map(|a| sinc_part * a);
    cos_part.times_matrix(&Mat2::IDENTITY) + su2_jet(&scaled).scaled(I)
}

/// `B_μ(x)` and its four first partials.
#[allow(non_snake_case)]
pub fn eval_B(spec: &FieldSpec, mu: usize, x: &SamplePoint) -> (Mat2, [Mat2; DIM]) {
    let j = b_jet(spec, mu, x);
    (j.value, j.grad)
}

/// `S(x)` and its four first partials.
#[allow(non_snake_case)]
pub fn eval_S(spec: &FieldSpec, x: &SamplePoint) -> Result<(GroupElement, [Mat2; DIM]), FieldError> {
    let j = s_jet(spec, x);
    Ok((GroupElement::new(j.value)?, j.grad))
}

/// `(D_μ ψ)` as a jet pair; first order remains valid.
fn covariant_jet(g: f64, b_mu: &MatJet, psi: &[Jet2; 2], mu: usize) -> [Jet2; 2] {
    let coupled = b_mu.scaled(Complex64::new(0.0, -g)).apply(psi);
    [psi[0].partial(mu) + coupled[0], psi[1].partial(mu) + coupled[1]]
}

/// `D_μ ψ` at `x`.
pub fn covariant_deriv_apply(spec: &FieldSpec, mu: usize, x: &SamplePoint) -> Spinor {
    let psi = psi_jets(spec, x);
    let d = covariant_jet(spec.coupling(), &b_jet(spec, mu, x), &psi, mu);
    [d[0].value, d[1].value]
}

/// Field strength assembled from potential jets.
///
/// Minus convention: `(∂_ν B_μ − ∂_μ B_ν) + iε[B_μ, B_ν]`. Plus convention:
/// `(∂_μ B_ν − ∂_ν B_μ) + iε[B_μ, B_ν]`. With `with_commutator = false` only
/// the curl part is kept.
pub fn field_strength_from_potentials(
    b_mu: &MatJet,
    b_nu: &MatJet,
    mu: usize,
    nu: usize,
    epsilon: f64,
    sign: SignConvention,
    with_commutator: bool,
) -> Mat2 {
    let curl = match sign {
        SignConvention::Minus => b_mu.grad[nu] - b_nu.grad[mu],
        SignConvention::Plus => b_nu.grad[mu] - b_mu.grad[nu],
    };
    if !with_commutator {
        return curl;
    }
    curl + mat_commutator(&b_mu.value, &b_nu.value).scale(Complex64::new(0.0, epsilon))
}

pub fn field_strength_direct(spec: &FieldSpec, mu: usize, nu: usize, x: &SamplePoint) -> Mat2 {
    field_strength_with(spec, mu, nu, x, true)
}

pub fn field_strength_with(spec: &FieldSpec, mu: usize, nu: usize, x: &SamplePoint, with_commutator: bool) -> Mat2 {
    field_strength_from_potentials(
        &b_jet(spec, mu, x),
        &b_jet(spec, nu, x),
        mu,
        nu,
        spec.epsilon,
        spec.sign_convention,
        with_commutator,
    )
}

/// `[D_μ, D_ν] ψ` from second-order jets of ψ.
pub fn field_strength_via_commutator(spec: &FieldSpec, mu: usize, nu: usize, x: &SamplePoint) -> Spinor {
    let g = spec.coupling();
    let psi = psi_jets(spec, x);
    let (b_mu, b_nu) = (b_jet(spec, mu, x), b_jet(spec, nu, x));
    let outer = |b_out: &MatJet, out: usize, b_in: &MatJet, inner: usize| {
        let d_in = covariant_jet(g, b_in, &psi, inner);
        covariant_jet(g, b_out, &d_in, out)
    };
    let ab = outer(&b_mu, mu, &b_nu, nu);
    let ba = outer(&b_nu, nu, &b_mu, mu);
    [ab[0].value - ba[0].value, ab[1].value - ba[1].value]
}

/// `iε F_μν ψ`, the right-hand side of the commutator identity.
pub fn commutator_rhs(spec: &FieldSpec, mu: usize, nu: usize, x: &SamplePoint) -> Spinor {
    let f = field_strength_direct(spec, mu, nu, x).scale(Complex64::new(0.0, spec.epsilon));
    let psi = psi_jets(spec, x);
    f.apply([psi[0].value, psi[1].value])
}

/// Jet of the transformed potential `B′_μ`; valid to first order.
pub fn transformed_potential_jet(spec: &FieldSpec, mu: usize, x: &SamplePoint) -> MatJet {
    let s = s_jet(spec, x);
    transformed_potential_from(&s, &b_jet(spec, mu, x), mu, spec.coupling(), spec.transform_convention)
}

fn transformed_potential_from(s: &MatJet, b: &MatJet, mu: usize, g: f64, conv: TransformConvention) -> MatJet {
    let s_inv = s.dagger();
    let ds = s.partial(mu);
    let k = Complex64::new(0.0, 1.0 / g);
    match conv {
        TransformConvention::Ym => s_inv * *b * *s + (s_inv * ds).scaled(k),
        TransformConvention::Author => *s * *b * s_inv - (ds * s_inv).scaled(k),
    }
}

/// `B′_μ(x)` under the configured transform convention.
pub fn transform_potential(spec: &FieldSpec, mu: usize, x: &SamplePoint) -> Mat2 {
    transformed_potential_jet(spec, mu, x).value
}

/// `S⁻¹FS` (ym) or `SFS⁻¹` (author).
pub fn transform_field_strength(spec: &FieldSpec, f: &Mat2, x: &SamplePoint) -> Mat2 {
    let s = s_jet(spec, x).value;
    match spec.transform_convention {
        TransformConvention::Ym => s.dagger() * *f * s,
        TransformConvention::Author => s * *f * s.dagger(),
    }
}

/// Entrywise max of `F(B′) − S⁻¹F(B)S` (or its author-convention analogue).
pub fn covariance_residual(spec: &FieldSpec, mu: usize, nu: usize, x: &SamplePoint) -> f64 {
    covariance_residual_with(spec, mu, nu, x, true)
}

pub fn covariance_residual_with(
    spec: &FieldSpec,
    mu: usize,
    nu: usize,
    x: &SamplePoint,
    with_commutator: bool,
) -> f64 {
    let f = field_strength_with(spec, mu, nu, x, with_commutator);
    let f_primed = field_strength_transformed(spec, mu, nu, x, with_commutator);
    (f_primed - transform_field_strength(spec, &f, x)).max_abs()
}

/// Field strength built from the transformed potentials `B′_μ`, `B′_ν`.
pub fn field_strength_transformed(
    spec: &FieldSpec,
    mu: usize,
    nu: usize,
    x: &SamplePoint,
    with_commutator: bool,
) -> Mat2 {
    let s = s_jet(spec, x);
    let (g, conv) = (spec.coupling(), spec.transform_convention);
    let bp_mu = transformed_potential_from(&s, &b_jet(spec, mu, x), mu, g, conv);
    let bp_nu = transformed_potential_from(&s, &b_jet(spec, nu, x), nu, g, conv);
    field_strength_from_potentials(&bp_mu, &bp_nu, mu, nu, spec.epsilon, spec.sign_convention, with_commutator)
}

/// First-order transform `b′_μ = b_μ + 2(b_μ × α) + (1/g) ∂_μ α`.
pub fn infinitesimal_transform(spec: &FieldSpec, mu: usize, x: &SamplePoint) -> Vec3 {
    let alpha = alpha_jets(spec, x);
    let a = Vec3(alpha.map(|j| j.value));
    let da = Vec3(alpha.map(|j| j.grad[mu]));
    let b = Vec3([0, 1, 2].map(|k| eval_jet(&spec.b[mu][k], &x.0).value));
    b + b.cross(&a).scale(2.0.into()) + da.scale((1.0 / spec.coupling()).into())
}

/// `‖exact author-convention b′_μ − first-order b′_μ‖`.
pub fn infinitesimal_error(spec: &FieldSpec, mu: usize, x: &SamplePoint) -> f64 {
    let author = spec.clone().with_conventions(spec.sign_convention, TransformConvention::Author);
    let (_, exact) = from_matrix(&transform_potential(&author, mu, x));
    (exact - infinitesimal_transform(spec, mu, x)).norm()
}

/// Ratio of [`infinitesimal_error`] with `|α(x)|` rescaled to `large` versus
/// `small`. A quadratic remainder gives `(large/small)²`.
pub fn infinitesimal_scaling_ratio(spec: &FieldSpec, mu: usize, x: &SamplePoint, large: f64, small: f64) -> Option<f64> {
    let norm = alpha_jets(spec, x).iter().map(|a| a.value.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    let e_large = infinitesimal_error(&spec.with_alpha_scaled(large / norm), mu, x);
    let e_small = infinitesimal_error(&spec.with_alpha_scaled(small / norm), mu, x);
    if e_small == 0.0 {
        return None;
    }
    Some(e_large / e_small)
}

/// Abelian configuration for the U(1) pairing `ψ → ψ e^{iqα}`, `A → A − ∂α`.
#[derive(Clone, Debug, PartialEq)]
pub struct U1Config {
    pub a: [CoordExpr; DIM],
    pub alpha: CoordExpr,
    pub q: f64,
    pub psi: [CoordExpr; 2],
}

/// Max over μ and spinor components of `|D′_μψ′ − e^{iqα} D_μψ|` with
/// `D_μ = ∂_μ + iqA_μ`.
pub fn u1_gauge_check(cfg: &U1Config, x: &SamplePoint) -> f64 {
    assert!(cfg.q != 0.0, "charge must be nonzero");
    let iq = Complex64::new(0.0, cfg.q);
    let alpha = eval_jet(&cfg.alpha, &x.0);
    let a = alpha.value;
    let phase = alpha.compose((iq * a).exp(), iq * (iq * a).exp(), iq * iq * (iq * a).exp());
    let psi = cfg.psi.clone().map(|p| eval_jet(&p, &x.0));
    let mut worst: f64 = 0.0;
    for mu in 0..DIM {
        let a_mu = eval_jet(&cfg.a[mu], &x.0).value;
        let a_mu_primed = a_mu - alpha.grad[mu];
        for p in &psi {
            let p_primed = *p * phase;
            let lhs = p_primed.grad[mu] + iq * a_mu_primed * p_primed.value;
            let rhs = phase.value * (p.grad[mu] + iq * a_mu * p.value);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// Entrywise max of two spinors' difference.
pub fn spinor_distance(a: &Spinor, b: &Spinor) -> f64 {
    (a[0] - b[0]).norm().max((a[1] - b[1]).norm())
}

#[cfg(test)]
mod tests;
