//! Dense univariate polynomials with exact coefficients, ascending by power.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial in one variable. The coefficient vector never ends in a zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl<T: Clone + Zero + PartialEq> Poly<T> {
    pub fn from_coeffs(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn map<U: Clone + Zero + PartialEq>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }
}

impl<T> Poly<T>
where
    T: Clone + Zero + One + PartialEq,
    for<'a> &'a T: Add<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    pub fn one() -> Self {
        Self::constant(T::one())
    }

    /// The monomial `c·x^d`.
    pub fn monomial(c: T, d: usize) -> Self {
        let mut v = vec![T::zero(); d + 1];
        v[d] = c;
        Self::from_coeffs(v)
    }

    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.push(&k * c);
            }
            k = &k + &T::one();
        }
        Self::from_coeffs(out)
    }
}

impl<'a, T> Add for &'a Poly<T>
where
    T: Clone + Zero + PartialEq,
    for<'b> &'b T: Add<&'b T, Output = T>,
{
    type Output = Poly<T>;
    fn add(self, rhs: &'a Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(v)
    }
}

impl<'a, T> Sub for &'a Poly<T>
where
    T: Clone + Zero + PartialEq + Neg<Output = T>,
    for<'b> &'b T: Sub<&'b T, Output = T>,
{
    type Output = Poly<T>;
    fn sub(self, rhs: &'a Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a - b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(v)
    }
}

impl<'a, T> Mul for &'a Poly<T>
where
    T: Clone + Zero + PartialEq,
    for<'b> &'b T: Add<&'b T, Output = T> + Mul<&'b T, Output = T>,
{
    type Output = Poly<T>;
    fn mul(self, rhs: &'a Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(v)
    }
}

impl<T> Neg for &Poly<T>
where
    T: Clone + Zero + PartialEq + Neg<Output = T>,
{
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T> $tr for Poly<T>
        where
            for<'a> &'a Poly<T>: $tr<&'a Poly<T>, Output = Poly<T>>,
        {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl IntPoly {
    pub fn from_i64(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Π (x − r) over the given integer roots.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| &acc * &Self::from_i64(&[-r, 1]))
    }

    pub fn to_rat(&self) -> RatPoly {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    pub fn eval_rat(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Exact division by a monic integer polynomial; `None` if it does not divide.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.to_rat().div_rem(&d.to_rat());
        if !r.is_zero() {
            return None;
        }
        q.to_int()
    }

    /// Content-free primitive part with positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        let g = self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return self.clone();
        }
        let g = if self.leading().unwrap().is_negative() { -g } else { g };
        self.map(|c| c / &g)
    }
}

impl RatPoly {
    pub fn from_ints(c: &[i64]) -> Self {
        IntPoly::from_i64(c).to_rat()
    }

    /// `Some` when every coefficient is an integer.
    pub fn to_int(&self) -> Option<IntPoly> {
        if self.coeffs.iter().all(|c| c.is_integer()) {
            Some(self.map(|c| c.to_integer()))
        } else {
            None
        }
    }

    /// Euclidean division: `self = q·d + r` with deg r < deg d.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (RatPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] = &r[i + j] - &(&c * dc);
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (RatPoly::from_coeffs(q), RatPoly::from_coeffs(r))
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
}

fn write_terms<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: impl DoubleEndedIterator<Item = (usize, bool, T, bool)>,
) -> fmt::Result {
    // (power, negative, |coefficient|, coefficient is one)
    let mut first = true;
    for (i, neg, mag, unit) in terms.rev() {
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        match (i, unit) {
            (0, _) => write!(f, "{mag}")?,
            (1, true) => write!(f, "Q")?,
            (1, false) => write!(f, "{mag}*Q")?,
            (_, true) => write!(f, "Q^{i}")?,
            (_, false) => write!(f, "{mag}*Q^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.is_negative(), c.abs(), c.abs().is_one())),
        )
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.is_negative(), c.abs(), c.abs().is_one())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_trim() {
        let a = IntPoly::from_i64(&[1, -3, 1]);
        let b = IntPoly::from_i64(&[-1, 3, -1]);
        assert!((&a + &b).is_zero());
        assert_eq!(&a - &a, IntPoly::zero());
        assert_eq!(IntPoly::from_i64(&[0, 0]).degree(), None);
        let p = IntPoly::from_roots(&[1, 2]);
        assert_eq!(p, IntPoly::from_i64(&[2, -3, 1]));
        assert_eq!(p.eval(&BigInt::from(2)), BigInt::zero());
        assert_eq!(IntPoly::from_i64(&[-2, 1]).pow(4), IntPoly::from_i64(&[16, -32, 24, -8, 1]));
    }

    #[test]
    fn division_and_gcd() {
        let a = IntPoly::from_roots(&[1, 2, 3]).to_rat();
        let b = IntPoly::from_roots(&[2, 5]).to_rat();
        assert_eq!(a.gcd(&b), IntPoly::from_i64(&[-2, 1]).to_rat());
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert_eq!(
            IntPoly::from_roots(&[1, 2, 3]).div_exact(&IntPoly::from_roots(&[3])),
            Some(IntPoly::from_roots(&[1, 2]))
        );
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[1, -3, 1]).to_string(), "Q^2 - 3*Q + 1");
        assert_eq!(IntPoly::from_i64(&[0, -1]).to_string(), "-Q");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn derivative() {
        assert_eq!(IntPoly::from_i64(&[5, 1, 3]).derivative(), IntPoly::from_i64(&[1, 6]));
    }
}
