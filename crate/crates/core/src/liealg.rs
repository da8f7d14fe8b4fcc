//! SU(2) and Pauli-matrix linear algebra.
//!
//! Everything here is fixed-size: 3-component coefficient vectors, dense 2×2
//! complex matrices and special-unitary group elements. A traceless matrix
//! `B` is identified with its coefficient vector `b` through `B = b·σ`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used by both numerical engines.
pub type ComplexScalar = Complex64;

pub const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
pub const ONE: ComplexScalar = Complex64::new(1.0, 0.0);
pub const I: ComplexScalar = Complex64::new(0.0, 1.0);

/// Deviation below which a matrix is accepted as an SU(2) element unchanged.
pub const GROUP_ACCEPT_TOL: f64 = 1e-9;
/// Deviation above which construction of a group element is refused.
pub const GROUP_REJECT_TOL: f64 = 1e-6;

/// Below this norm `sin|α|/|α|` is evaluated from its Taylor series.
const SINC_SERIES_CUTOFF: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieAlgError {
    #[error("matrix is not in SU(2): deviation {deviation:.3e} exceeds {limit:.1e}")]
    NotSpecialUnitary { deviation: f64, limit: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
}

/// Coefficient vector `(c1, c2, c3)`; real-valued in most uses.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec3(pub [ComplexScalar; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([ZERO; 3]);

    pub fn real(c1: f64, c2: f64, c3: f64) -> Self {
        Vec3([c1.into(), c2.into(), c3.into()])
    }

    pub fn from_real(c: [f64; 3]) -> Self {
        Self::real(c[0], c[1], c[2])
    }

    /// Bilinear dot product (no complex conjugation).
    pub fn dot(&self, other: &Vec3) -> ComplexScalar {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let (a, b) = (&self.0, &other.0);
        Vec3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn scale(&self, s: ComplexScalar) -> Vec3 {
        Vec3(self.0.map(|c| c * s))
    }

    /// Largest modulus among the components.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn re(&self) -> [f64; 3] {
        self.0.map(|c| c.re)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Index<usize> for Vec3 {
    type Output = ComplexScalar;
    fn index(&self, k: usize) -> &ComplexScalar {
        &self.0[k]
    }
}

/// Dense 2×2 complex matrix, row-major.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Mat2(pub [[ComplexScalar; 2]; 2]);

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1])
    }
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO; 2]; 2]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub const fn new(a: ComplexScalar, b: ComplexScalar, c: ComplexScalar, d: ComplexScalar) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn diag(a: ComplexScalar, d: ComplexScalar) -> Self {
        Mat2([[a, ZERO], [ZERO, d]])
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn trace(&self) -> ComplexScalar {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> ComplexScalar {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, s: ComplexScalar) -> Mat2 {
        Mat2(self.0.map(|row| row.map(|c| c * s)))
    }

    /// Entrywise max modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn apply(&self, v: [ComplexScalar; 2]) -> [ComplexScalar; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        out += rhs;
        out
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, rhs: Mat2) {
        for r in 0..2 {
            for c in 0..2 {
                self.0[r][c] += rhs.0[r][c];
            }
        }
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] -= rhs.0[r][c];
            }
        }
        out
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2(self.0.map(|row| row.map(|c| -c)))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}

impl Mul<ComplexScalar> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: ComplexScalar) -> Mat2 {
        self.scale(rhs)
    }
}

impl Index<(usize, usize)> for Mat2 {
    type Output = ComplexScalar;
    fn index(&self, (r, c): (usize, usize)) -> &ComplexScalar {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for Mat2 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut ComplexScalar {
        &mut self.0[r][c]
    }
}

pub const SIGMA_1: Mat2 = Mat2::new(ZERO, ONE, ONE, ZERO);
pub const SIGMA_2: Mat2 = Mat2::new(ZERO, Complex64::new(0.0, -1.0), I, ZERO);
pub const SIGMA_3: Mat2 = Mat2::new(ONE, ZERO, ZERO, Complex64::new(-1.0, 0.0));
pub const SIGMA: [Mat2; 3] = [SIGMA_1, SIGMA_2, SIGMA_3];

/// `b₁σ₁ + b₂σ₂ + b₃σ₃`.
pub fn to_matrix(b: &Vec3) -> Mat2 {
    let [b1, b2, b3] = b.0;
    // σ₂ contributes -i b₂ above and +i b₂ below the diagonal.
    Mat2::new(b3, b1 - I * b2, b1 + I * b2, -b3)
}

/// Decomposes `M = c0·I + c·σ`.
pub fn from_matrix(m: &Mat2) -> (ComplexScalar, Vec3) {
    let half = 0.5;
    let c0 = (m[(0, 0)] + m[(1, 1)]) * half;
    let c3 = (m[(0, 0)] - m[(1, 1)]) * half;
    let c1 = (m[(0, 1)] + m[(1, 0)]) * half;
    let c2 = (m[(1, 0)] - m[(0, 1)]) * Complex64::new(0.0, -0.5);
    (c0, Vec3([c1, c2, c3]))
}

/// `(a·σ)(b·σ) = (a·b) I + (i a×b)·σ`, returned as `(a·b, i a×b)`.
pub fn pauli_compose(a: &Vec3, b: &Vec3) -> (ComplexScalar, Vec3) {
    (a.dot(b), a.cross(b).scale(I))
}

pub fn mat_commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    *a * *b - *b * *a
}

/// `sin r / r` for `r ≥ 0`, continuous through `r = 0`.
pub fn sinc(r: f64) -> f64 {
    if r < SINC_SERIES_CUTOFF {
        let r2 = r * r;
        1.0 - r2 / 6.0 + r2 * r2 / 120.0
    } else {
        r.sin() / r
    }
}

/// `exp(i α·σ) = cos|α| I + i sin|α| (α̂·σ)`.
pub fn exp_i_alpha_sigma(alpha: [f64; 3]) -> GroupElement {
    let r = alpha.iter().map(|a| a * a).sum::<f64>().sqrt();
    let s = sinc(r);
    let gen = to_matrix(&Vec3::from_real(alpha));
    let m = Mat2::IDENTITY.scale(r.cos().into()) + gen.scale(I * s);
    GroupElement { m }
}

/// A 2×2 special-unitary matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement {
    m: Mat2,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { m: Mat2::IDENTITY };

    /// Validates `m` against `m m† = I`, `det m = 1`.
    ///
    /// Small deviations (up to [`GROUP_REJECT_TOL`]) are projected back onto
    /// SU(2); anything larger is an error.
    pub fn new(m: Mat2) -> Result<Self, LieAlgError> {
        if !m.is_finite() {
            return Err(LieAlgError::NonFinite);
        }
        let deviation = su2_deviation(&m);
        if deviation <= GROUP_ACCEPT_TOL {
            Ok(GroupElement { m })
        } else if deviation <= GROUP_REJECT_TOL {
            Ok(GroupElement { m: project_su2(&m) })
        } else {
            Err(LieAlgError::NotSpecialUnitary { deviation, limit: GROUP_REJECT_TOL })
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn inverse(&self) -> GroupElement {
        group_inverse(self)
    }

    /// `S⁻¹ M S`.
    pub fn conjugate_inv_left(&self, m: &Mat2) -> Mat2 {
        self.m.dagger() * *m * self.m
    }

    /// `S M S⁻¹`.
    pub fn conjugate_inv_right(&self, m: &Mat2) -> Mat2 {
        self.m * *m * self.m.dagger()
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        let m = self.m * rhs.m;
        GroupElement { m: project_su2(&m) }
    }
}

/// Max of `|m m† − I|` and `|det m − 1|`.
pub fn su2_deviation(m: &Mat2) -> f64 {
    let unitarity = (*m * m.dagger() - Mat2::IDENTITY).max_abs();
    unitarity.max((m.det() - ONE).norm())
}

/// Nearest element of SU(2) in the Frobenius norm.
///
/// SU(2) is the unit sphere inside the real span of `{I, iσ₁, iσ₂, iσ₃}`, so
/// the projection keeps the quaternion part `[[a, -b*], [b, a*]]` and rescales
/// it to unit norm.
fn project_su2(m: &Mat2) -> Mat2 {
    let a = (m[(0, 0)] + m[(1, 1)].conj()) * 0.5;
    let b = (m[(1, 0)] - m[(0, 1)].conj()) * 0.5;
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    Mat2::new(a, -b.conj(), b, a.conj())
}

/// `S⁻¹ = S†`.
pub fn group_inverse(s: &GroupElement) -> GroupElement {
    GroupElement { m: s.m.dagger() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> ComplexScalar {
        Complex64::new(re, im)
    }

    /// Power series `Σ (iA)^k / k!`, 30 terms.
    fn exp_series(alpha: [f64; 3]) -> Mat2 {
        let gen = to_matrix(&Vec3::from_real(alpha)).scale(I);
        let mut term = Mat2::IDENTITY;
        let mut sum = Mat2::IDENTITY;
        for k in 1..30 {
            term = (term * gen).scale(c(1.0 / k as f64, 0.0));
            sum += term;
        }
        sum
    }

    fn close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        (*a - *b).max_abs() <= tol
    }

    #[test]
    fn pauli_compose_examples() {
        let (s, v) = pauli_compose(&Vec3::real(1., 0., 0.), &Vec3::real(1., 0., 0.));
        assert_eq!(s, ONE);
        assert_eq!(v, Vec3::ZERO);

        let (s, v) = pauli_compose(&Vec3::real(1., 0., 0.), &Vec3::real(0., 1., 0.));
        assert_eq!(s, ZERO);
        // σ₁σ₂ computed entrywise
        let prod = SIGMA_1 * SIGMA_2;
        let (c0, cv) = from_matrix(&prod);
        assert_eq!(c0, ZERO);
        assert_eq!(cv, Vec3([ZERO, ZERO, I]));
        assert_eq!(v, cv);

        let a = Vec3::real(1., 2., 3.);
        let b = Vec3::real(3., 2., 1.);
        let (s, v) = pauli_compose(&a, &b);
        let (c0, cv) = from_matrix(&(to_matrix(&a) * to_matrix(&b)));
        assert_eq!(c0, c(10.0, 0.0));
        assert_eq!(cv, Vec3([c(0., -4.), c(0., 8.), c(0., -4.)]));
        assert_eq!((s, v), (c0, cv));
    }

    #[test]
    fn exponential_examples() {
        assert_eq!(*exp_i_alpha_sigma([0.0; 3]).matrix(), Mat2::IDENTITY);
        for alpha in [[PI, 0., 0.], [PI / 2.0, 0., 0.]] {
            let oracle = exp_series(alpha);
            assert!(close(exp_i_alpha_sigma(alpha).matrix(), &oracle, 1e-12));
        }
        assert!(close(exp_i_alpha_sigma([PI, 0., 0.]).matrix(), &(-Mat2::IDENTITY), 1e-12));
        assert!(close(exp_i_alpha_sigma([PI / 2.0, 0., 0.]).matrix(), &SIGMA_1.scale(I), 1e-12));
    }

    #[test]
    fn exponential_small_angle_branch_is_continuous() {
        for r in [1e-9, 5e-5, 0.99e-4, 1.01e-4, 1e-3] {
            let alpha = [r * 0.6, -r * 0.8, 0.0];
            assert!(close(exp_i_alpha_sigma(alpha).matrix(), &exp_series(alpha), 1e-15));
        }
    }

    #[test]
    fn to_matrix_examples() {
        assert_eq!(to_matrix(&Vec3::ZERO), Mat2::ZERO);
        assert_eq!(to_matrix(&Vec3::real(0., 0., 1.)), Mat2::diag(ONE, -ONE));
        assert_eq!(to_matrix(&Vec3::real(1., 0., 0.)), Mat2::new(ZERO, ONE, ONE, ZERO));
        for (k, s) in SIGMA.iter().enumerate() {
            let mut e = [0.0; 3];
            e[k] = 1.0;
            assert_eq!(to_matrix(&Vec3::from_real(e)), *s);
        }
    }

    #[test]
    fn from_matrix_examples() {
        assert_eq!(from_matrix(&Mat2::IDENTITY), (ONE, Vec3::ZERO));
        assert_eq!(from_matrix(&SIGMA_2), (ZERO, Vec3::real(0., 1., 0.)));
        assert_eq!(from_matrix(&Mat2::diag(c(2., 0.), ZERO)), (ONE, Vec3::real(0., 0., 1.)));
    }

    #[test]
    fn commutator_examples() {
        let b = Mat2::new(c(1., 2.), c(-3., 0.5), c(0.25, 0.), c(4., -1.));
        assert_eq!(mat_commutator(&Mat2::IDENTITY, &b), Mat2::ZERO);
        assert_eq!(mat_commutator(&b, &b), Mat2::ZERO);
        assert_eq!(mat_commutator(&SIGMA_1, &SIGMA_2), SIGMA_3.scale(c(0., 2.)));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(GroupElement::IDENTITY.inverse(), GroupElement::IDENTITY);
        let alpha = [0.3, -1.2, 0.7];
        let s = exp_i_alpha_sigma(alpha);
        let s_neg = exp_i_alpha_sigma(alpha.map(|a| -a));
        assert!(close(s.inverse().matrix(), s_neg.matrix(), 1e-15));
        assert!(close(&(*s.matrix() * *s.inverse().matrix()), &Mat2::IDENTITY, 1e-12));
    }

    #[test]
    fn group_element_validation() {
        let s = *exp_i_alpha_sigma([0.4, 0.1, -0.9]).matrix();
        assert_eq!(GroupElement::new(s).unwrap().matrix(), &s);

        let nudged = s + Mat2::new(c(1e-8, 0.), ZERO, ZERO, ZERO);
        let g = GroupElement::new(nudged).unwrap();
        assert!(su2_deviation(g.matrix()) < 1e-14);
        assert!(close(g.matrix(), &s, 1e-7));

        let bad = s.scale(c(1.01, 0.0));
        assert!(matches!(GroupElement::new(bad), Err(LieAlgError::NotSpecialUnitary { .. })));
        assert_eq!(GroupElement::new(Mat2::diag(c(f64::NAN, 0.), ONE)), Err(LieAlgError::NonFinite));
    }
}
