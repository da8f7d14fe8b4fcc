#![allow(clippy::needless_range_loop)]

use super::*;
use crate::coordexpr::finite_difference_partial;
use crate::liealg::{to_matrix, SIGMA_1};
use crate::sampling::{random_field_spec, random_parallel_spec, random_point, random_u1_config, trial_rng};

const FD_STEP: f64 = 1e-3;

fn ex(s: &str) -> CoordExpr {
    CoordExpr::parse(s).unwrap()
}

fn spec_from(alpha: [&str; 3], b: [[&str; 3]; 4], psi: [&str; 2], eps: f64) -> FieldSpec {
    FieldSpec::new(alpha.map(ex), b.map(|row| row.map(ex)), psi.map(ex), eps).unwrap()
}

fn zero_b() -> [[&'static str; 3]; 4] {
    [["0"; 3]; 4]
}

fn random_specs(n: u64) -> Vec<(FieldSpec, SamplePoint)> {
    (0..n)
        .map(|t| {
            let mut rng = trial_rng(7, t);
            let spec = random_field_spec(&mut rng, None, SignConvention::Minus, TransformConvention::Ym);
            let x = random_point(&mut rng);
            (spec, x)
        })
        .collect()
}

fn shifted(x: &SamplePoint, mu: usize, h: f64) -> SamplePoint {
    let mut y = *x;
    y.0[mu] += h;
    y
}

fn all_specs_conventions(spec: &FieldSpec) -> Vec<FieldSpec> {
    let mut out = Vec::new();
    for sign in [SignConvention::Minus, SignConvention::Plus] {
        for conv in [TransformConvention::Ym, TransformConvention::Author] {
            out.push(spec.clone().with_conventions(sign, conv));
        }
    }
    out
}

#[test]
fn epsilon_validation() {
    let z = || [ex("0"), ex("0"), ex("0")];
    let b = || [z(), z(), z(), z()];
    assert_eq!(FieldSpec::new(z(), b(), [ex("0"), ex("0")], 0.0).unwrap_err(), FieldError::ZeroEpsilon);
    assert_eq!(
        FieldSpec::new(z(), b(), [ex("0"), ex("0")], f64::NAN).unwrap_err(),
        FieldError::NonFiniteEpsilon
    );
}

#[test]
fn eval_b_constant_has_zero_partials() {
    let spec = spec_from(["0"; 3], [["1", "2", "-3"]; 4], ["1", "0"], 1.0);
    let (v, d) = eval_B(&spec, 2, &SamplePoint([0.3, -0.2, 0.5, 0.9]));
    assert!((v - to_matrix(&Vec3::from_real([1.0, 2.0, -3.0]))).max_abs() < 1e-15);
    assert!(d.iter().all(|m| m.max_abs() == 0.0));
}

#[test]
fn eval_b_linear_in_x0() {
    let spec = spec_from(["0"; 3], [["x0", "0", "0"]; 4], ["1", "0"], 1.0);
    for mu in 0..4 {
        let (_, d) = eval_B(&spec, mu, &SamplePoint([0.4, 0.1, 0.0, 0.0]));
        assert_eq!(d[0], SIGMA_1);
        assert_eq!(d[1].max_abs(), 0.0);
    }
}

#[test]
fn eval_b_matches_finite_differences() {
    for (spec, x) in random_specs(20) {
        for mu in 0..4 {
            let (_, d) = eval_B(&spec, mu, &x);
            for nu in 0..4 {
                let (p, _) = eval_B(&spec, mu, &shifted(&x, nu, FD_STEP));
                let (m, _) = eval_B(&spec, mu, &shifted(&x, nu, -FD_STEP));
                let fd = (p - m).scale((0.5 / FD_STEP).into());
                assert!((fd - d[nu]).max_abs() < 1e-5, "mu {mu} nu {nu}");
            }
        }
    }
}

#[test]
fn eval_s_identity_for_zero_alpha() {
    let spec = spec_from(["0"; 3], zero_b(), ["1", "0"], 1.0);
    let (s, d) = eval_S(&spec, &SamplePoint([0.1, 0.2, 0.3, 0.4])).unwrap();
    assert_eq!(*s.matrix(), Mat2::IDENTITY);
    assert!(d.iter().all(|m| m.max_abs() == 0.0));
}

#[test]
fn eval_s_derivative_at_origin() {
    let spec = spec_from(["x0", "0", "0"], zero_b(), ["1", "0"], 1.0);
    let (s, d) = eval_S(&spec, &SamplePoint([0.0; 4])).unwrap();
    assert!((*s.matrix() - Mat2::IDENTITY).max_abs() < 1e-15);
    assert!((d[0] - SIGMA_1.scale(I)).max_abs() < 1e-15);
}

#[test]
fn eval_s_matches_finite_differences() {
    for (spec, x) in random_specs(20) {
        let (_, d) = eval_S(&spec, &x).unwrap();
        for nu in 0..4 {
            let (p, _) = eval_S(&spec, &shifted(&x, nu, FD_STEP)).unwrap();
            let (m, _) = eval_S(&spec, &shifted(&x, nu, -FD_STEP)).unwrap();
            let fd = (*p.matrix() - *m.matrix()).scale((0.5 / FD_STEP).into());
            assert!((fd - d[nu]).max_abs() < 1e-5, "nu {nu}: {:?} vs {:?}", fd, d[nu]);
        }
    }
}

#[test]
fn s_jet_second_derivatives_match_finite_differences() {
    // covers both the series branch and the closed form of the trig helpers
    for scale in [0.05, 1.0, 3.0] {
        for (spec, x) in random_specs(5) {
            let spec = spec.with_alpha_scaled(scale);
            let j = s_jet(&spec, &x);
            for mu in 0..4 {
                for nu in 0..4 {
                    let p = s_jet(&spec, &shifted(&x, nu, FD_STEP)).grad[mu];
                    let m = s_jet(&spec, &shifted(&x, nu, -FD_STEP)).grad[mu];
                    let fd = (p - m).scale((0.5 / FD_STEP).into());
                    let h = j.second(mu, nu);
                    assert!((fd - h).max_abs() < 1e-4 * (1.0 + scale * scale), "scale {scale}");
                }
            }
        }
    }
}

#[test]
fn trig_helpers_continuous_at_cutoff() {
    let (c_lo, s_lo) = trig_of_sqrt(SERIES_CUTOFF_U * (1.0 - 1e-12));
    let (c_hi, s_hi) = trig_of_sqrt(SERIES_CUTOFF_U * (1.0 + 1e-12));
    for k in 0..3 {
        assert!((c_lo[k] - c_hi[k]).abs() < 1e-10, "cos part {k}");
        assert!((s_lo[k] - s_hi[k]).abs() < 1e-10, "sinc part {k}");
    }
}

#[test]
fn covariant_derivative_free_when_b_vanishes() {
    let spec = spec_from(["0"; 3], zero_b(), ["x0 * x1", "sin(x2)"], 2.0);
    let x = SamplePoint([0.5, -1.0, 0.3, 0.0]);
    let d1 = covariant_deriv_apply(&spec, 1, &x);
    assert!((d1[0] - C(0.5)).norm() < 1e-15 && d1[1].norm() < 1e-15);
    let d2 = covariant_deriv_apply(&spec, 2, &x);
    assert!((d2[1] - C(0.3f64.cos())).norm() < 1e-15);
}

#[allow(non_snake_case)]
fn C(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn covariant_derivative_of_constant_spinor() {
    let spec = spec_from(["0"; 3], [["0.5", "-1", "2"]; 4], ["1", "2"], 0.5);
    let x = SamplePoint([0.0; 4]);
    let b = to_matrix(&Vec3::from_real([0.5, -1.0, 2.0]));
    let want = b.scale(Complex64::new(0.0, -0.5)).apply([C(1.0), C(2.0)]);
    assert!(spinor_distance(&covariant_deriv_apply(&spec, 3, &x), &want) < 1e-15);
}

#[test]
fn covariant_derivative_matches_reassembly() {
    for (spec, x) in random_specs(10) {
        for s in all_specs_conventions(&spec) {
            for mu in 0..4 {
                let psi = psi_jets(&s, &x);
                let (b, _) = eval_B(&s, mu, &x);
                let coupled = b.scale(Complex64::new(0.0, -s.coupling())).apply([psi[0].value, psi[1].value]);
                let want = [psi[0].grad[mu] + coupled[0], psi[1].grad[mu] + coupled[1]];
                assert!(spinor_distance(&covariant_deriv_apply(&s, mu, &x), &want) < 1e-13);
            }
        }
    }
}

#[test]
fn field_strength_trivial_cases() {
    let spec = spec_from(["x1", "0", "x2"], zero_b(), ["1", "x0"], 1.0);
    let x = SamplePoint([0.1, 0.2, 0.3, 0.4]);
    assert_eq!(field_strength_direct(&spec, 0, 1, &x).max_abs(), 0.0);
    let spinor = field_strength_via_commutator(&spec, 0, 1, &x);
    assert!(spinor[0].norm() + spinor[1].norm() < 1e-14);
    for (spec, x) in random_specs(5) {
        for mu in 0..4 {
            assert!(field_strength_direct(&spec, mu, mu, &x).max_abs() < 1e-15);
        }
    }
}

#[test]
fn field_strength_antisymmetric() {
    for (spec, x) in random_specs(5) {
        for s in all_specs_conventions(&spec) {
            let f01 = field_strength_direct(&s, 0, 2, &x);
            let f10 = field_strength_direct(&s, 2, 0, &x);
            assert!((f01 + f10).max_abs() < 1e-14);
        }
    }
}

#[test]
fn abelian_limit_reduces_to_scalar_curl() {
    for t in 0..20 {
        let mut rng = trial_rng(11, t);
        let (spec, profiles, n) = random_parallel_spec(&mut rng);
        let x = random_point(&mut rng);
        let n_sigma = to_matrix(&Vec3::from_real(n));
        for mu in 0..4 {
            for nu in mu + 1..4 {
                let full = field_strength_direct(&spec, mu, nu, &x);
                let curl_only = field_strength_with(&spec, mu, nu, &x, false);
                assert!((full - curl_only).max_abs() <= 1e-12, "commutator term");
                let f_mu = eval_jet(&profiles[mu], &x.0);
                let f_nu = eval_jet(&profiles[nu], &x.0);
                let want = n_sigma.scale(f_mu.grad[nu] - f_nu.grad[mu]);
                assert!((full - want).max_abs() <= 1e-10, "scalar curl");
            }
        }
    }
}

#[test]
fn constant_parallel_field_commutator_vanishes() {
    let spec = spec_from(["0"; 3], [["1", "2", "0"], ["-2", "-4", "0"], ["0.5", "1", "0"], ["0", "0", "0"]], ["1", "-1"], 1.5);
    let x = SamplePoint([0.2; 4]);
    let spinor = field_strength_via_commutator(&spec, 0, 2, &x);
    assert!(spinor[0].norm() + spinor[1].norm() < 1e-14);
}

#[test]
fn commutator_identity_randomized() {
    for (spec, x) in random_specs(20) {
        for s in all_specs_conventions(&spec) {
            for mu in 0..4 {
                for nu in 0..4 {
                    let lhs = field_strength_via_commutator(&s, mu, nu, &x);
                    let rhs = commutator_rhs(&s, mu, nu, &x);
                    assert!(spinor_distance(&lhs, &rhs) <= 1e-9);
                }
            }
        }
    }
}

#[test]
fn transform_with_zero_alpha_is_identity() {
    let mut rng = trial_rng(3, 0);
    let mut spec = random_field_spec(&mut rng, None, SignConvention::Minus, TransformConvention::Ym);
    spec.alpha = [ex("0"), ex("0"), ex("0")];
    let x = random_point(&mut rng);
    for s in all_specs_conventions(&spec) {
        for mu in 0..4 {
            let (b, _) = eval_B(&s, mu, &x);
            assert!((transform_potential(&s, mu, &x) - b).max_abs() < 1e-15);
            for nu in 0..4 {
                assert_eq!(covariance_residual(&s, mu, nu, &x), 0.0);
            }
        }
        let f = field_strength_direct(&s, 0, 1, &x);
        assert!((transform_field_strength(&s, &f, &x) - f).max_abs() < 1e-15);
    }
}

#[test]
fn pure_gauge_transform() {
    for (spec, x) in random_specs(5) {
        let mut s = spec.clone();
        s.b = [(); 4].map(|_| [ex("0"), ex("0"), ex("0")]);
        let (g, ds) = eval_S(&s, &x).unwrap();
        for mu in 0..4 {
            let want = (g.inverse().matrix().to_owned() * ds[mu]).scale(Complex64::new(0.0, 1.0 / s.epsilon()));
            assert!((transform_potential(&s, mu, &x) - want).max_abs() < 1e-13);
            for nu in 0..4 {
                let f_primed = field_strength_transformed(&s, mu, nu, &x, true);
                assert!(f_primed.max_abs() < 1e-12, "pure gauge has zero field strength");
            }
        }
    }
}

#[test]
fn transform_field_strength_fixes_identity_and_trace() {
    for (spec, x) in random_specs(10) {
        for s in all_specs_conventions(&spec) {
            assert!((transform_field_strength(&s, &Mat2::IDENTITY, &x) - Mat2::IDENTITY).max_abs() < 1e-14);
            let f = field_strength_direct(&s, 1, 3, &x);
            let fp = transform_field_strength(&s, &f, &x);
            assert!((fp.trace() - f.trace()).norm() <= 1e-12);
        }
    }
}

#[test]
fn ym_and_author_are_dual_under_alpha_negation() {
    for (spec, x) in random_specs(10) {
        let ym = spec.clone().with_conventions(SignConvention::Minus, TransformConvention::Ym);
        let author = spec.with_alpha_negated().with_conventions(SignConvention::Minus, TransformConvention::Author);
        for mu in 0..4 {
            assert!((transform_potential(&ym, mu, &x) - transform_potential(&author, mu, &x)).max_abs() < 1e-13);
        }
    }
}

#[test]
fn covariance_holds_in_every_convention() {
    for (spec, x) in random_specs(20) {
        for s in all_specs_conventions(&spec) {
            for mu in 0..4 {
                for nu in 0..4 {
                    assert!(covariance_residual(&s, mu, nu, &x) <= 1e-9);
                }
            }
        }
    }
}

#[test]
fn truncated_field_strength_is_not_covariant() {
    let mut above = 0;
    let specs = random_specs(20);
    for (spec, x) in &specs {
        let worst = (0..4)
            .flat_map(|mu| (mu + 1..4).map(move |nu| (mu, nu)))
            .map(|(mu, nu)| covariance_residual_with(spec, mu, nu, x, false))
            .fold(0.0, f64::max);
        if worst > 1e-3 {
            above += 1;
        }
    }
    assert!(above >= 19, "{above} of {}", specs.len());
}

#[test]
fn infinitesimal_transform_examples() {
    let x = SamplePoint([0.0; 4]);
    let spec = spec_from(["0"; 3], [["1", "0", "0"], ["0", "2", "0"], ["0"; 3], ["0"; 3]], ["1", "0"], 1.0);
    assert_eq!(infinitesimal_transform(&spec, 1, &x), Vec3::from_real([0.0, 2.0, 0.0]));

    let spec = spec_from(["0", "1", "0"], [["1", "0", "0"], ["0"; 3], ["0"; 3], ["0"; 3]], ["1", "0"], 1.0);
    // b × α = (1,0,0) × (0,1,0) = (0,0,1)
    assert_eq!(infinitesimal_transform(&spec, 0, &x), Vec3::from_real([1.0, 0.0, 2.0]));
}

#[test]
fn infinitesimal_error_is_quadratic() {
    let mut in_band = 0;
    for (spec, x) in random_specs(20) {
        let r = infinitesimal_scaling_ratio(&spec, 0, &x, 1e-4, 5e-5);
        if r.is_some_and(|r| (3.6..=4.4).contains(&r)) {
            in_band += 1;
        }
    }
    assert!(in_band >= 18, "{in_band}");
}

#[test]
fn u1_examples() {
    let x = SamplePoint([0.3, 0.1, -0.2, 0.7]);
    let zero4 = || [ex("0"), ex("0"), ex("0"), ex("0")];
    let cfg = U1Config { a: zero4(), alpha: ex("0"), q: 1.0, psi: [ex("x0"), ex("x1 * x2")] };
    assert_eq!(u1_gauge_check(&cfg, &x), 0.0);
    let cfg = U1Config { alpha: ex("x0"), ..cfg };
    assert!(u1_gauge_check(&cfg, &x) <= 1e-12);
}

#[test]
fn u1_randomized() {
    for t in 0..50 {
        let mut rng = trial_rng(5, t);
        let cfg = random_u1_config(&mut rng);
        let x = random_point(&mut rng);
        assert!(u1_gauge_check(&cfg, &x) <= 1e-10);
    }
}

#[test]
fn fd_partial_of_quadratic_is_exact() {
    let e = ex("x0^2");
    for h in [1e-3, 0.1, 0.5] {
        let d = finite_difference_partial(&e, 0, &[1.0, 0.0, 0.0, 0.0], h);
        assert!((d - C(2.0)).norm() < 1e-12);
    }
}
