//! Polynomials in the formal variables `n` and `p` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `sum c_{ij} n^i p^j`, keyed by `(i, j)`; zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::monomial(c, 0, 0)
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(BigRational::from_integer(c.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Poly::constant(BigRational::new(num.into(), den.into()))
    }

    pub fn monomial(c: BigRational, deg_n: u32, deg_p: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((deg_n, deg_p), c);
        }
        Poly { terms }
    }

    pub fn n() -> Self {
        Poly::monomial(BigRational::one(), 1, 0)
    }

    pub fn p() -> Self {
        Poly::monomial(BigRational::one(), 0, 1)
    }

    /// `p(1-p)`, the square of `q`.
    pub fn q_squared() -> Self {
        &Poly::p() - &(&Poly::p() * &Poly::p())
    }

    /// `(n - a)(n - a - 1)...(n - a - k + 1)`.
    pub fn falling(a: i64, k: u32) -> Self {
        let mut out = Poly::one();
        for i in 0..k as i64 {
            out = &out * &(&Poly::n() - &Poly::int(a + i));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(&k, v)| (k, v * c))
                .collect(),
        }
    }

    fn add_term(&mut self, key: (u32, u32), c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn eval(&self, n: &BigRational, p: &BigRational) -> BigRational {
        let mut total = BigRational::zero();
        for (&(i, j), c) in &self.terms {
            total += c * pow(n, i) * pow(p, j);
        }
        total
    }

    pub fn eval_f64(&self, n: f64, p: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_f64().unwrap() * n.powi(i as i32) * p.powi(j as i32))
            .sum()
    }

    /// Exact quotient by `p`, if every term carries a factor of `p`.
    pub fn div_p(&self) -> Option<Poly> {
        if self.terms.keys().any(|&(_, j)| j == 0) {
            return None;
        }
        Some(Poly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i, j - 1), c.clone()))
                .collect(),
        })
    }

    /// Exact quotient by `1 - p`. Writing the polynomial as `sum_k c_k(n) p^k`,
    /// the quotient has coefficients `g_k = sum_{i<=k} c_i`, valid iff the
    /// full sum (the value at `p = 1`) vanishes.
    pub fn div_one_minus_p(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let mut by_p: BTreeMap<u32, Poly> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            by_p.entry(j)
                .or_default()
                .add_term((i, 0), c.clone());
        }
        let top = *by_p.keys().next_back().unwrap();
        let mut running = Poly::zero();
        let mut out = Poly::zero();
        for k in 0..=top {
            if let Some(ck) = by_p.get(&k) {
                running = &running + ck;
            }
            if k == top {
                return running.is_zero().then_some(out);
            }
            for (&(i, _), c) in &running.terms {
                out.add_term((i, k), c.clone());
            }
        }
        unreachable!()
    }
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow(x.clone(), e as usize)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.denom() == &BigInt::one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    /// Highest total degree first, e.g. `1/2*n^2 - 1/2*n`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        for (idx, key) in keys.iter().enumerate() {
            let c = &self.terms[key];
            let neg = c.is_negative();
            let mag = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !mag.is_one() || *key == (0, 0) {
                factors.push(fmt_rational(&mag));
            }
            for (var, e) in [("n", key.0), ("p", key.1)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
