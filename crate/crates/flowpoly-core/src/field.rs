//! Scalar fields used when substituting a value for Q.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A field given by a context value (needed for a runtime modulus).
pub trait Field: Sync + Send {
    type E: Clone + Send + Sync + PartialEq + core::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    /// `None` when the denominator is not invertible.
    fn from_rational(&self, r: &BigRational) -> Option<Self::E>;
    fn from_i128(&self, x: i128) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool {
        *a == self.zero()
    }
    fn pow(&self, a: &Self::E, mut e: u64) -> Self::E {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
    /// Horner evaluation of integer coefficients (ascending) at `x`.
    fn eval_i128(&self, coeffs: &[i128], x: &Self::E) -> Self::E {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.from_i128(c));
        }
        acc
    }
}

/// Integers modulo a prime p < 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 31));
        PrimeField { p }
    }

    pub fn reduce_big(&self, x: &BigInt) -> u64 {
        let r = x.mod_floor(&BigInt::from(self.p));
        r.to_u64().unwrap()
    }

    /// Symmetric lift into (−p/2, p/2].
    pub fn lift(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Field for PrimeField {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if (*a).is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
    fn from_rational(&self, r: &BigRational) -> Option<u64> {
        let d = self.reduce_big(r.denom());
        let n = self.reduce_big(r.numer());
        self.inv(&d).map(|di| self.mul(&n, &di))
    }
    fn from_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.p as i128) as u64
    }
}

/// Exact rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalField;

impl Field for RationalField {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_rational(&self, r: &BigRational) -> Option<BigRational> {
        Some(r.clone())
    }
    fn from_i128(&self, x: i128) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }
}

/// Double-precision complex numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexField;

pub fn rational_to_f64(r: &BigRational) -> f64 {
    // Scale so that both parts fit comfortably in f64.
    let n = r.numer();
    let d = r.denom();
    let shift = (n.bits() as i64).max(d.bits() as i64) - 60;
    if shift <= 0 {
        return n.to_f64().unwrap() / d.to_f64().unwrap();
    }
    let s = shift as usize;
    let nf = (n.abs() >> s).to_f64().unwrap() * if n.is_negative() { -1.0 } else { 1.0 };
    let df = (d >> s).to_f64().unwrap();
    nf / df
}

impl Field for ComplexField {
    type E = Complex64;
    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn inv(&self, a: &Complex64) -> Option<Complex64> {
        if a.norm() == 0.0 {
            None
        } else {
            Some(a.inv())
        }
    }
    fn from_rational(&self, r: &BigRational) -> Option<Complex64> {
        Some(Complex64::new(rational_to_f64(r), 0.0))
    }
    fn from_i128(&self, x: i128) -> Complex64 {
        Complex64::new(x as f64, 0.0)
    }
}
