//! The coefficient ring `Q[n, p][1/(p(1-p))][q]` with `q^2 = p(1-p)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Poly;
use super::quad::QuadValue;
use crate::error::{Error, Result};

/// `(a + b q) / (p(1-p))^k` with `a, b` polynomials in `(n, p)`.
///
/// Kept canonical: `k` is minimal, i.e. `a` and `b` are not both divisible
/// by `p(1-p)` when `k > 0`. Structural equality is therefore value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    a: Poly,
    b: Poly,
    k: u32,
}

impl RingElem {
    pub fn new(a: Poly, b: Poly, k: u32) -> Self {
        let mut r = RingElem { a, b, k };
        r.normalize();
        r
    }

    pub fn zero() -> Self {
        RingElem::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RingElem::from_poly(Poly::one())
    }

    pub fn int(c: i64) -> Self {
        RingElem::from_poly(Poly::int(c))
    }

    pub fn rational(c: BigRational) -> Self {
        RingElem::from_poly(Poly::constant(c))
    }

    pub fn from_poly(a: Poly) -> Self {
        RingElem {
            a,
            b: Poly::zero(),
            k: 0,
        }
    }

    pub fn q() -> Self {
        RingElem {
            a: Poly::zero(),
            b: Poly::one(),
            k: 0,
        }
    }

    pub fn q_pow(e: u32) -> Self {
        let half = Poly::q_squared();
        let mut a = Poly::one();
        for _ in 0..e / 2 {
            a = &a * &half;
        }
        if e % 2 == 0 {
            RingElem::from_poly(a)
        } else {
            RingElem::new(Poly::zero(), a, 0)
        }
    }

    /// `c = (2p - 1)/q = (2p - 1) q / (p(1-p))`, so that `chi^2 = 1 - c chi`.
    pub fn c() -> Self {
        RingElem::new(Poly::zero(), &Poly::p().scale(&BigRational::from_integer(2.into())) - &Poly::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Numerators and exponent `k` of the common denominator `(p(1-p))^k`.
    pub fn parts(&self) -> (&Poly, &Poly, u32) {
        (&self.a, &self.b, self.k)
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            let reduced = (|| {
                let a = self.a.div_p()?.div_one_minus_p()?;
                let b = self.b.div_p()?.div_one_minus_p()?;
                Some((a, b))
            })();
            let Some((a, b)) = reduced else { break };
            self.a = a;
            self.b = b;
            self.k -= 1;
        }
    }

    fn lift(&self, k: u32) -> (Poly, Poly) {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        let d = Poly::q_squared();
        for _ in self.k..k {
            a = &a * &d;
            b = &b * &d;
        }
        (a, b)
    }

    pub fn scale(&self, c: &BigRational) -> RingElem {
        RingElem::new(self.a.scale(c), self.b.scale(c), self.k)
    }

    pub fn pow(&self, e: u32) -> RingElem {
        let mut out = RingElem::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Exact value at `n`, `p = d/(n-1)` as an element of `Q(sqrt(p(1-p)))`.
    pub fn eval_exact(&self, n: usize, d: usize) -> Result<QuadValue> {
        let nn = BigRational::from_integer(n.into());
        let p = BigRational::new(d.into(), (n as i64 - 1).into());
        let disc = &p * (BigRational::one() - &p);
        let den = num_traits::pow(disc.clone(), self.k as usize);
        if den.is_zero() {
            return Err(Error::PoleAtEvaluation);
        }
        let a = self.a.eval(&nn, &p) / &den;
        let b = self.b.eval(&nn, &p) / &den;
        Ok(QuadValue::new(a, b, disc))
    }

    pub fn eval_f64(&self, n: usize, d: usize) -> Result<f64> {
        Ok(self.eval_exact(n, d)?.to_f64())
    }
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        let k = self.k.max(rhs.k);
        let (a1, b1) = self.lift(k);
        let (a2, b2) = rhs.lift(k);
        RingElem::new(&a1 + &a2, &b1 + &b2, k)
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self + &(-rhs)
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            a: -&self.a,
            b: -&self.b,
            k: self.k,
        }
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        let aa = &self.a * &rhs.a;
        let ab = &(&self.a * &rhs.b) + &(&self.b * &rhs.a);
        let bb = &self.b * &rhs.b;
        RingElem::new(&aa + &(&bb * &Poly::q_squared()), ab, self.k + rhs.k)
    }
}

impl Zero for RingElem {
    fn zero() -> Self {
        RingElem::zero()
    }
    fn is_zero(&self) -> bool {
        RingElem::is_zero(self)
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(self, rhs: RingElem) -> RingElem {
        &self + &rhs
    }
}

/// Renders one numerator over the common denominator, reducing it on its own
/// (`a` and `b` may individually need fewer powers of `p(1-p)`).
fn fmt_part(num: &Poly, k: u32) -> String {
    let mut num = num.clone();
    let mut k = k;
    while k > 0 {
        match num.div_p().and_then(|x| x.div_one_minus_p()) {
            Some(x) => {
                num = x;
                k -= 1;
            }
            None => break,
        }
    }
    match k {
        0 => num.to_string(),
        1 => format!("({num})/(p*(1-p))"),
        _ => format!("({num})/(p*(1-p))^{k}"),
    }
}

impl RingElem {
    pub fn a_string(&self) -> String {
        fmt_part(&self.a, self.k)
    }

    pub fn b_string(&self) -> String {
        fmt_part(&self.b, self.k)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.a_string(), self.b_string())
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} + ({})q]", self.a_string(), self.b_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_squared_reduces() {
        let q = RingElem::q();
        assert_eq!(&q * &q, RingElem::from_poly(Poly::q_squared()));
        assert_eq!(RingElem::q_pow(3), &(&q * &q) * &q);
    }

    #[test]
    fn c_squared_times_q_squared() {
        // c^2 q^2 = (2p-1)^2
        let c = RingElem::c();
        let lhs = &(&c * &c) * &RingElem::q_pow(2);
        let two_p_minus_1 = &Poly::p().scale(&BigRational::from_integer(2.into())) - &Poly::one();
        assert_eq!(lhs, RingElem::from_poly(&two_p_minus_1 * &two_p_minus_1));
    }

    #[test]
    fn chi_square_identity_numerically() {
        // chi^2 = 1 - c chi at chi = (1-p)/q (an edge) for n=6, d=3
        let c = RingElem::c().eval_f64(6, 3).unwrap();
        let p: f64 = 0.6;
        let q = (p * (1.0 - p)).sqrt();
        let chi = (1.0 - p) / q;
        assert!((chi * chi - (1.0 - c * chi)).abs() < 1e-12);
    }

    #[test]
    fn inverse_pairs_cancel() {
        let c = RingElem::c();
        let x = &(&c * &RingElem::q()) - &RingElem::from_poly(&Poly::p().scale(&BigRational::from_integer(2.into())) - &Poly::one());
        assert!(x.is_zero());
    }
}
