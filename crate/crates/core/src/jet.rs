//! Second-order forward-mode jets over the four spacetime coordinates.
//!
//! A jet carries a value, its four first partials and the ten distinct second
//! partials. The Hessian is stored packed and symmetric, so `∂μ∂ν = ∂ν∂μ`
//! holds by construction rather than up to rounding.
//!
//! Jets are generic over the value ring: [`Jet2`] is the complex-scalar jet,
//! [`MatJet`] the 2×2-matrix jet. Products keep operand order, which matters
//! for matrices.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::liealg::{ComplexScalar, Mat2};

pub const DIM: usize = 4;
pub const HESS_LEN: usize = 10;

/// Packed index of the symmetric pair `(i, j)`.
#[inline]
pub const fn hess_index(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    // rows of the upper triangle have lengths 4, 3, 2, 1
    a * DIM - a * (a + 1) / 2 + b
}

/// Value types a jet can carry.
pub trait JetValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> + Mul<Output = Self>
{
    fn zero() -> Self;
    fn scaled(self, s: ComplexScalar) -> Self;
    /// Poisoned entry marking a derivative order that is no longer known.
    fn unknown() -> Self;
}

impl JetValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn scaled(self, s: ComplexScalar) -> Self {
        self * s
    }
    fn unknown() -> Self {
        Complex64::new(f64::NAN, f64::NAN)
    }
}

impl JetValue for Mat2 {
    fn zero() -> Self {
        Mat2::ZERO
    }
    fn scaled(self, s: ComplexScalar) -> Self {
        self.scale(s)
    }
    fn unknown() -> Self {
        Mat2([[Complex64::unknown(); 2]; 2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T> {
    pub value: T,
    pub grad: [T; DIM],
    pub hess: [T; HESS_LEN],
}

/// Complex-scalar second-order jet.
pub type Jet2 = Jet<Complex64>;
/// 2×2-matrix second-order jet.
pub type MatJet = Jet<Mat2>;

impl<T: JetValue> Jet<T> {
    pub fn constant(value: T) -> Self {
        Jet { value, grad: [T::zero(); DIM], hess: [T::zero(); HESS_LEN] }
    }

    pub fn zero() -> Self {
        Self::constant(T::zero())
    }

    #[inline]
    pub fn second(&self, i: usize, j: usize) -> T {
        self.hess[hess_index(i, j)]
    }

    /// `∂μ` of this jet. Its own second partials would need third-order
    /// information, so they come back poisoned (NaN).
    pub fn partial(&self, mu: usize) -> Self {
        let mut grad = [T::zero(); DIM];
        for (nu, g) in grad.iter_mut().enumerate() {
            *g = self.second(mu, nu);
        }
        Jet { value: self.grad[mu], grad, hess: [T::unknown(); HESS_LEN] }
    }

    pub fn scaled(&self, s: ComplexScalar) -> Self {
        Jet {
            value: self.value.scaled(s),
            grad: self.grad.map(|g| g.scaled(s)),
            hess: self.hess.map(|h| h.scaled(s)),
        }
    }

    /// Applies `g(·)` to a value-type jet via per-component maps.
    pub fn map_parts<U: JetValue>(&self, f: impl Fn(T) -> U) -> Jet<U> {
        Jet { value: f(self.value), grad: self.grad.map(&f), hess: self.hess.map(&f) }
    }
}

impl Jet2 {
    pub fn coordinate(mu: usize, x: &[f64; DIM]) -> Self {
        let mut j = Self::constant(x[mu].into());
        j.grad[mu] = Complex64::new(1.0, 0.0);
        j
    }

    /// Chain rule for a scalar function with known `f`, `f'`, `f''` at the value.
    pub fn compose(&self, f: ComplexScalar, df: ComplexScalar, d2f: ComplexScalar) -> Self {
        let mut out = Jet::constant(f);
        for i in 0..DIM {
            out.grad[i] = df * self.grad[i];
        }
        for i in 0..DIM {
            for j in i..DIM {
                let k = hess_index(i, j);
                out.hess[k] = df * self.hess[k] + d2f * self.grad[i] * self.grad[j];
            }
        }
        out
    }

    pub fn powi(&self, n: u32) -> Self {
        match n {
            0 => Jet::constant(Complex64::new(1.0, 0.0)),
            1 => *self,
            _ => {
                let v = self.value;
                let nf = n as f64;
                self.compose(v.powu(n), v.powu(n - 1) * nf, v.powu(n - 2) * (nf * (nf - 1.0)))
            }
        }
    }

    pub fn sin(&self) -> Self {
        let v = self.value;
        self.compose(v.sin(), v.cos(), -v.sin())
    }

    pub fn cos(&self) -> Self {
        let v = self.value;
        self.compose(v.cos(), -v.sin(), -v.cos())
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.compose(e, e, e)
    }

    /// Promotes a scalar jet to a matrix jet `self · M` for constant `M`.
    pub fn times_matrix(&self, m: &Mat2) -> MatJet {
        self.map_parts(|c| m.scale(c))
    }
}

impl MatJet {
    pub fn dagger(&self) -> Self {
        self.map_parts(|m| m.dagger())
    }

    /// `s · self` for a scalar jet `s`.
    pub fn scale_by(&self, s: &Jet2) -> Self {
        let mut out = Jet::constant(self.value.scale(s.value));
        for i in 0..DIM {
            out.grad[i] = self.grad[i].scale(s.value) + self.value.scale(s.grad[i]);
        }
        for i in 0..DIM {
            for j in i..DIM {
                let k = hess_index(i, j);
                out.hess[k] = self.hess[k].scale(s.value)
                    + self.grad[i].scale(s.grad[j])
                    + self.grad[j].scale(s.grad[i])
                    + self.value.scale(s.hess[k]);
            }
        }
        out
    }

    /// Applies the matrix jet to a spinor given as two scalar jets.
    pub fn apply(&self, v: &[Jet2; 2]) -> [Jet2; 2] {
        let entry = |r: usize, c: usize| self.map_parts(|m| m[(r, c)]);
        [
            entry(0, 0) * v[0] + entry(0, 1) * v[1],
            entry(1, 0) * v[0] + entry(1, 1) * v[1],
        ]
    }

    pub fn from_entries(e: [[Jet2; 2]; 2]) -> Self {
        let pick = |f: &dyn Fn(&Jet2) -> Complex64| {
            Mat2([[f(&e[0][0]), f(&e[0][1])], [f(&e[1][0]), f(&e[1][1])]])
        };
        let mut out = Jet::constant(pick(&|j| j.value));
        for i in 0..DIM {
            out.grad[i] = pick(&|j| j.grad[i]);
        }
        for k in 0..HESS_LEN {
            out.hess[k] = pick(&|j| j.hess[k]);
        }
        out
    }
}

impl<T: JetValue> Add for Jet<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        out.value = self.value + rhs.value;
        for i in 0..DIM {
            out.grad[i] = self.grad[i] + rhs.grad[i];
        }
        for k in 0..HESS_LEN {
            out.hess[k] = self.hess[k] + rhs.hess[k];
        }
        out
    }
}

impl<T: JetValue> Sub for Jet<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: JetValue> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet { value: -self.value, grad: self.grad.map(|g| -g), hess: self.hess.map(|h| -h) }
    }
}

/// Leibniz rule, truncated at second order; operand order is preserved.
impl<T: JetValue> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self, &rhs);
        let mut out = Jet::constant(a.value * b.value);
        for i in 0..DIM {
            out.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
        }
        for i in 0..DIM {
            for j in i..DIM {
                let k = hess_index(i, j);
                out.hess[k] = a.hess[k] * b.value
                    + a.grad[i] * b.grad[j]
                    + a.grad[j] * b.grad[i]
                    + a.value * b.hess[k];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{SIGMA_1, SIGMA_2};

    #[test]
    fn packed_indices_cover_upper_triangle_once() {
        let mut seen = [false; HESS_LEN];
        for i in 0..DIM {
            for j in i..DIM {
                let k = hess_index(i, j);
                assert!(!seen[k]);
                seen[k] = true;
                assert_eq!(k, hess_index(j, i));
            }
        }
        assert!(seen.iter().all(|s| *s));
    }

    #[test]
    fn product_of_coordinates() {
        let x = [2.0, 0.0, 5.0, 0.0];
        let j = Jet2::coordinate(0, &x) * Jet2::coordinate(2, &x);
        assert_eq!(j.value.re, 10.0);
        assert_eq!(j.grad[0].re, 5.0);
        assert_eq!(j.grad[2].re, 2.0);
        assert_eq!(j.second(0, 2).re, 1.0);
        assert_eq!(j.second(0, 0).re, 0.0);
    }

    #[test]
    fn matrix_products_keep_order() {
        let x = [0.3, 0.0, 0.0, 0.0];
        let t = Jet2::coordinate(0, &x);
        let a = t.times_matrix(&SIGMA_1);
        let b = t.times_matrix(&SIGMA_2);
        let ab = a * b;
        let ba = b * a;
        // d²/dt² (t² σ₁σ₂) = 2 σ₁σ₂ = -(d²/dt² t² σ₂σ₁)
        assert_eq!(ab.second(0, 0), (SIGMA_1 * SIGMA_2).scale(2.0.into()));
        assert_eq!(ba.second(0, 0), -(SIGMA_1 * SIGMA_2).scale(2.0.into()));
    }

    #[test]
    fn partial_poisons_second_order() {
        let x = [1.0, 2.0, 0.0, 0.0];
        let j = (Jet2::coordinate(0, &x) * Jet2::coordinate(1, &x)).sin();
        let p = j.partial(1);
        assert_eq!(p.value, j.grad[1]);
        assert_eq!(p.grad[0], j.second(0, 1));
        assert!(p.hess.iter().all(|h| h.re.is_nan()));
    }
}
