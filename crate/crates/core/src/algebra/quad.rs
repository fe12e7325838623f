//! Exact values `a + b sqrt(D)` with rational `a, b` and a fixed rational `D`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub struct QuadValue {
    pub a: BigRational,
    pub b: BigRational,
    /// The radicand, `p(1-p)` at the evaluation point.
    pub disc: BigRational,
}

impl QuadValue {
    pub fn new(a: BigRational, b: BigRational, disc: BigRational) -> Self {
        QuadValue { a, b, disc }
    }

    pub fn rational(a: BigRational, disc: BigRational) -> Self {
        QuadValue::new(a, BigRational::zero(), disc)
    }

    /// Zero as a real number. When `disc` is a rational square the
    /// representation is not unique, so `a + b sqrt(D) = 0` is tested as
    /// `a^2 = b^2 D` with `a` and `b` of opposite signs.
    pub fn is_zero(&self) -> bool {
        if self.b.is_zero() {
            return self.a.is_zero();
        }
        if self.a.is_zero() {
            return self.disc.is_zero();
        }
        self.a.is_positive() != self.b.is_positive() && &self.a * &self.a == &self.b * &self.b * &self.disc
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * self.disc.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    fn check(&self, other: &QuadValue) {
        assert!(
            self.disc == other.disc,
            "mixing values from different evaluation points"
        );
    }
}

impl PartialEq for QuadValue {
    fn eq(&self, other: &QuadValue) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for QuadValue {}

impl Add for &QuadValue {
    type Output = QuadValue;
    fn add(self, rhs: &QuadValue) -> QuadValue {
        self.check(rhs);
        QuadValue::new(&self.a + &rhs.a, &self.b + &rhs.b, self.disc.clone())
    }
}

impl Sub for &QuadValue {
    type Output = QuadValue;
    fn sub(self, rhs: &QuadValue) -> QuadValue {
        self.check(rhs);
        QuadValue::new(&self.a - &rhs.a, &self.b - &rhs.b, self.disc.clone())
    }
}

impl Mul for &QuadValue {
    type Output = QuadValue;
    fn mul(self, rhs: &QuadValue) -> QuadValue {
        self.check(rhs);
        QuadValue::new(
            &self.a * &rhs.a + &self.b * &rhs.b * &self.disc,
            &self.a * &rhs.b + &self.b * &rhs.a,
            self.disc.clone(),
        )
    }
}

impl Neg for &QuadValue {
    type Output = QuadValue;
    fn neg(self) -> QuadValue {
        QuadValue::new(-self.a.clone(), -self.b.clone(), self.disc.clone())
    }
}

impl fmt::Display for QuadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + ({})*sqrt({})", self.a, self.b, self.disc)
        }
    }
}

impl fmt::Debug for QuadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
