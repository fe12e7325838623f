//! Linear combinations of products of graph factors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;

use super::quad::QuadValue;
use super::ring::RingElem;
use crate::error::Result;
use crate::factors::{ExactEvaluator, FactorEvaluator};
use crate::graphs::{CanonicalShape, Graph};

/// A sorted multiset of non-empty shapes standing for `prod gamma_S`.
/// The empty monomial is the constant 1.
pub type Monomial = Vec<CanonicalShape>;

/// `sum_k coeff_k * prod_{S in k} gamma_S + constant`.
///
/// Single-shape monomials are the usual linear terms; longer monomials come
/// from splitting disconnected shapes into products of their parts.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct FactorExpr {
    terms: BTreeMap<Monomial, RingElem>,
}

impl FactorExpr {
    pub fn zero() -> Self {
        FactorExpr::default()
    }

    pub fn constant_expr(c: RingElem) -> Self {
        let mut e = FactorExpr::zero();
        e.add_term(Vec::new(), c);
        e
    }

    /// `gamma_s` with coefficient 1 (`gamma` of the empty shape is 1).
    pub fn gamma(s: CanonicalShape) -> Self {
        let key = if s.is_empty() { Vec::new() } else { vec![s] };
        let mut e = FactorExpr::zero();
        e.add_term(key, RingElem::one());
        e
    }

    pub fn monomial(mut factors: Monomial, coeff: RingElem) -> Self {
        factors.retain(|s| !s.is_empty());
        factors.sort();
        let mut e = FactorExpr::zero();
        e.add_term(factors, coeff);
        e
    }

    pub fn add_term(&mut self, key: Monomial, coeff: RingElem) {
        debug_assert!(key.windows(2).all(|w| w[0] <= w[1]));
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(RingElem::zero);
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign(&mut self, other: &FactorExpr) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &RingElem) -> FactorExpr {
        let mut out = FactorExpr::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &BigRational) -> FactorExpr {
        self.scale(&RingElem::rational(c.clone()))
    }

    pub fn mul(&self, other: &FactorExpr) -> FactorExpr {
        let mut out = FactorExpr::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut key: Monomial = k1.iter().chain(k2).cloned().collect();
                key.sort();
                out.add_term(key, c1 * c2);
            }
        }
        out
    }

    /// Non-constant terms.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RingElem)> {
        self.terms.iter().filter(|(k, _)| !k.is_empty())
    }

    pub fn all_terms(&self) -> impl Iterator<Item = (&Monomial, &RingElem)> {
        self.terms.iter()
    }

    pub fn constant(&self) -> RingElem {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(RingElem::zero)
    }

    pub fn coefficient(&self, key: &[CanonicalShape]) -> RingElem {
        self.terms.get(key).cloned().unwrap_or_else(RingElem::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every factor is connected, simple and of minimum degree two.
    pub fn is_reduced(&self) -> bool {
        self.terms.keys().flatten().all(CanonicalShape::is_basis)
    }

    /// Distinct shapes used anywhere in the expression.
    pub fn shapes(&self) -> Vec<CanonicalShape> {
        let mut s: Vec<_> = self.terms.keys().flatten().cloned().collect();
        s.sort();
        s.dedup();
        s
    }

    /// Coefficients evaluated once at `(n, d)` for repeated use.
    pub fn at(&self, n: usize, d: usize) -> Result<NumericExpr> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            terms.push((k.clone(), c.eval_f64(n, d)?));
        }
        Ok(NumericExpr { n, d, terms })
    }
}

impl fmt::Display for FactorExpr {
    /// One line per term, `coeff_a | coeff_b | shape [* shape ...]`, with the
    /// constant last as `coeff_a | coeff_b | const`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.terms() {
            let shapes: Vec<String> = k.iter().map(ToString::to_string).collect();
            writeln!(f, "{} | {} | {}", c.a_string(), c.b_string(), shapes.join(" * "))?;
        }
        let c = self.constant();
        write!(f, "{} | {} | const", c.a_string(), c.b_string())
    }
}

impl fmt::Debug for FactorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A [`FactorExpr`] with coefficients fixed at one `(n, d)`.
#[derive(Clone, Debug)]
pub struct NumericExpr {
    n: usize,
    d: usize,
    terms: Vec<(Monomial, f64)>,
}

impl NumericExpr {
    pub fn evaluate(&self, ev: &mut FactorEvaluator) -> Result<f64> {
        assert_eq!(ev.field().n(), self.n, "evaluator built for another n");
        assert_eq!(ev.field().d(), self.d, "evaluator built for another d");
        let mut cache: HashMap<CanonicalShape, f64> = HashMap::new();
        let mut total = 0.0;
        for (k, c) in &self.terms {
            let mut prod = *c;
            for s in k {
                let v = match cache.get(s) {
                    Some(&v) => v,
                    None => {
                        let v = ev.gamma_raw(s)?;
                        cache.insert(s.clone(), v);
                        v
                    }
                };
                prod *= v;
            }
            total += prod;
        }
        Ok(total)
    }
}

/// Floating-point value of `e` on `g` with density `d/(n-1)`.
pub fn evaluate(e: &FactorExpr, g: &Graph, d: usize) -> Result<f64> {
    let mut ev = FactorEvaluator::new(g, d)?;
    e.at(g.n(), d)?.evaluate(&mut ev)
}

/// Exact value of `e` on `g` in `Q(sqrt(p(1-p)))`.
pub fn evaluate_exact(e: &FactorExpr, g: &Graph, d: usize) -> Result<QuadValue> {
    let mut ev = ExactEvaluator::new(g, d)?;
    evaluate_exact_with(e, &mut ev, g.n())
}

pub fn evaluate_exact_with(e: &FactorExpr, ev: &mut ExactEvaluator, n: usize) -> Result<QuadValue> {
    let mut cache: HashMap<CanonicalShape, QuadValue> = HashMap::new();
    let mut total = ev.constant(BigRational::from_integer(0.into()));
    for (k, c) in e.all_terms() {
        let mut prod = c.eval_exact(n, ev.d())?;
        for s in k {
            if !cache.contains_key(s) {
                let v = ev.gamma(s)?;
                cache.insert(s.clone(), v);
            }
            prod = &prod * &cache[s];
        }
        total = &total + &prod;
    }
    Ok(total)
}

