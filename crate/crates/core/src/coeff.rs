//! Coefficient rings: exact rationals, complex doubles, square matrices over either.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Unital ring with a norm. Multiplication need not commute.
///
/// Constants are produced from an existing element (`zero_like`, `one_like`)
/// so that matrix rings carry their dimension along.
pub trait Coefficient: Clone + Debug + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
    /// Absolute value, modulus, or Frobenius norm (an operator-norm upper bound).
    fn norm(&self) -> f64;
    /// `n * 1` in this ring.
    fn from_int_like(&self, n: i64) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// Commutative scalar rings that embed into the complex numbers.
pub trait Scalar: Coefficient {
    fn to_complex(&self) -> Complex64;
    fn from_rational(q: &BigRational) -> Self;
    fn zero() -> Self;
    fn one() -> Self;
}

impl Coefficient for BigRational {
    fn zero_like(&self) -> Self {
        <BigRational as Zero>::zero()
    }
    fn one_like(&self) -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn norm(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn from_int_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

impl Scalar for BigRational {
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
}

impl Coefficient for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!Coefficient::is_zero(self)).then(|| self.inv())
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
    fn from_int_like(&self, n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

impl Scalar for Complex64 {
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
}

/// Dense `n x n` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("matrix rows must form a non-empty square".into()));
        }
        Ok(Self { dim, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![T::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = T::one();
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![T::zero(); dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.dim).map(<[T]>::to_vec).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix { dim: self.dim, data: self.data.iter().map(f).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect() }
    }

    /// Gauss-Jordan elimination with largest-norm pivoting.
    fn gauss_jordan_inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a.get(r, col).is_zero())
                .max_by(|&r, &s| a.get(r, col).norm().total_cmp(&a.get(s, col).norm()))?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).inverse()?;
            for j in 0..n {
                a.data[col * n + j] = p.mul(a.get(col, j));
                inv.data[col * n + j] = p.mul(inv.get(col, j));
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let av = a.get(r, j).sub(&factor.mul(a.get(col, j)));
                    let iv = inv.get(r, j).sub(&factor.mul(inv.get(col, j)));
                    a.data[r * n + j] = av;
                    inv.data[r * n + j] = iv;
                }
            }
        }
        Some(inv)
    }
}

impl<T: Scalar> Coefficient for SquareMatrix<T> {
    fn zero_like(&self) -> Self {
        Self::zeros(self.dim)
    }
    fn one_like(&self) -> Self {
        Self::identity(self.dim)
    }
    fn is_zero(&self) -> bool {
        self.data.iter().all(Coefficient::is_zero)
    }
    fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(b))
    }
    fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.sub(b))
    }
    fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.data[i * n + j] = acc;
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(Coefficient::neg).collect() }
    }
    fn inverse(&self) -> Option<Self> {
        self.gauss_jordan_inverse()
    }
    fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm().powi(2)).sum::<f64>().sqrt()
    }
    fn from_int_like(&self, n: i64) -> Self {
        let mut m = Self::identity(self.dim);
        for v in m.data.iter_mut() {
            *v = v.from_int_like(if v.is_zero() { 0 } else { n });
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_inverse() {
        assert_eq!(q(3, 4).inverse(), Some(q(4, 3)));
        assert_eq!(q(0, 1).inverse(), None);
    }

    #[test]
    fn complex_zero_is_exact() {
        assert!(!Coefficient::is_zero(&Complex64::new(1e-300, 0.0)));
        assert!(Coefficient::is_zero(&Complex64::new(0.0, -0.0)));
    }

    #[test]
    fn matrix_inverse_roundtrip() {
        let m = SquareMatrix::from_rows(vec![
            vec![q(0, 1), q(1, 1), q(2, 1)],
            vec![q(1, 1), q(0, 1), q(3, 1)],
            vec![q(4, 1), q(-3, 1), q(8, 1)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), m.one_like());
        assert_eq!(inv.mul(&m), m.one_like());
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = SquareMatrix::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]]).unwrap();
        assert!(m.inverse().is_none());
    }

    #[test]
    fn matrix_product_is_ordered() {
        let a = SquareMatrix::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(0, 1), q(0, 1)]]).unwrap();
        let b = SquareMatrix::from_rows(vec![vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(0, 1)]]).unwrap();
        assert_ne!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn from_int_like_scales_identity() {
        let m = SquareMatrix::<Complex64>::identity(2).from_int_like(3);
        assert_eq!(*m.get(0, 0), Complex64::new(3.0, 0.0));
        assert!(Coefficient::is_zero(m.get(0, 1)));
    }
}
