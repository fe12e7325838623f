//! Edge variables, graph factors and trace statistics on a fixed graph.

mod walks;

pub use walks::{
    trace_reconstruction, trace_stat, trace_stats, walk_types, WalkTag, WalkType, WalkTypeTable,
    MAX_WALK_LENGTH,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::algebra::QuadValue;
use crate::error::{Error, Result};
use crate::graphs::embed::{embedding_sum, product_pairs, Weights};
use crate::graphs::{CanonicalShape, Graph, Pattern};

/// Highest edge multiplicity the evaluators precompute powers for.
pub const MAX_MULTIPLICITY: u8 = 6;
/// Largest shape `gamma` accepts.
pub const MAX_FACTOR_VERTICES: usize = 8;

/// A graph together with its ensemble density `p = d/(n-1)`.
#[derive(Clone, Debug)]
pub struct EdgeField {
    n: usize,
    d: usize,
    p: f64,
    q: f64,
    chi: Vec<f64>,
    adjacency: Vec<bool>,
}

impl EdgeField {
    /// `d` fixes the density only; the graph itself need not be regular.
    pub fn new(g: &Graph, d: usize) -> Result<Self> {
        let n = g.n();
        if d == 0 || d + 1 >= n {
            return Err(Error::DegenerateDensity { n, d });
        }
        let p = d as f64 / (n - 1) as f64;
        let q = (p * (1.0 - p)).sqrt();
        let mut chi = vec![0.0; n * n];
        let mut adjacency = vec![false; n * n];
        let (on, off) = ((1.0 - p) / q, -p / q);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    let e = g.has_edge(u, v);
                    adjacency[u * n + v] = e;
                    chi[u * n + v] = if e { on } else { off };
                }
            }
        }
        Ok(EdgeField {
            n,
            d,
            p,
            q,
            chi,
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `chi_{uv}`, with `chi_{uu} = 0`.
    #[inline]
    pub fn chi(&self, u: usize, v: usize) -> f64 {
        self.chi[u * self.n + v]
    }

    pub fn chi_matrix(&self) -> &[f64] {
        &self.chi
    }
}

/// Floating-point factor evaluation with cached powers of the chi matrix.
pub struct FactorEvaluator {
    field: EdgeField,
    weights: Weights<f64>,
}

impl FactorEvaluator {
    pub fn new(g: &Graph, d: usize) -> Result<Self> {
        let field = EdgeField::new(g, d)?;
        let mut mats = BTreeMap::new();
        for m in 1..=MAX_MULTIPLICITY {
            mats.insert(m, field.chi.iter().map(|&x| x.powi(m as i32)).collect());
        }
        let weights = Weights::new(field.n, mats);
        Ok(FactorEvaluator { field, weights })
    }

    pub fn field(&self) -> &EdgeField {
        &self.field
    }

    /// `sum over injective embeddings of prod chi_e^{m_e}`.
    pub fn embedding_sum(&mut self, p: &Pattern) -> Result<f64> {
        check_multiplicities(p)?;
        self.weights.prepare_products(&product_pairs(p));
        Ok(embedding_sum(p, &self.weights))
    }

    /// Generic-path factor of a (multi)graph shape: the sum over unlabeled
    /// copies in `K_n` of `prod chi_e^{m_e}`.
    pub fn gamma_generic(&mut self, shape: &CanonicalShape) -> Result<f64> {
        if shape.is_empty() {
            return Ok(1.0);
        }
        let p = shape.to_pattern();
        Ok(self.embedding_sum(&p)? / shape.automorphisms() as f64)
    }

    /// Factor value; cycles of length 3 to 6 go through the trace of the chi
    /// matrix minus the degenerate closed-walk types.
    pub fn gamma_raw(&mut self, shape: &CanonicalShape) -> Result<f64> {
        if shape.vertex_count() > self.field.n {
            return Ok(0.0);
        }
        if shape.is_cycle() && (3..=6).contains(&shape.vertex_count()) {
            return walks::gamma_cycle_trace(self, shape.vertex_count());
        }
        self.gamma_generic(shape)
    }
}

/// Exact factor evaluation over `Q(sqrt(p(1-p)))` using integer weights
/// `Y = x (n-1) - d`, so that `chi = Y / ((n-1) q)`.
pub struct ExactEvaluator {
    n: usize,
    d: usize,
    weights: Weights<i128>,
    disc: BigRational,
}

impl ExactEvaluator {
    pub fn new(g: &Graph, d: usize) -> Result<Self> {
        let field = EdgeField::new(g, d)?;
        let n = field.n;
        let y: Vec<i128> = (0..n * n)
            .map(|idx| {
                if idx / n == idx % n {
                    0
                } else if field.adjacency[idx] {
                    (n - 1 - d) as i128
                } else {
                    -(d as i128)
                }
            })
            .collect();
        let mut mats = BTreeMap::new();
        for m in 1..=MAX_MULTIPLICITY {
            mats.insert(m, y.iter().map(|&x| x.pow(m as u32)).collect());
        }
        let p = BigRational::new(d.into(), (n - 1).into());
        let disc = &p * (BigRational::one() - &p);
        Ok(ExactEvaluator {
            n,
            d,
            weights: Weights::new(n, mats),
            disc,
        })
    }

    pub fn disc(&self) -> &BigRational {
        &self.disc
    }

    pub fn constant(&self, c: BigRational) -> QuadValue {
        QuadValue::rational(c, self.disc.clone())
    }

    pub fn gamma(&mut self, shape: &CanonicalShape) -> Result<QuadValue> {
        if shape.is_empty() {
            return Ok(self.constant(BigRational::one()));
        }
        if shape.vertex_count() > self.n {
            return Ok(self.constant(BigRational::from_integer(0.into())));
        }
        let p = shape.to_pattern();
        check_multiplicities(&p)?;
        let total_mult: u32 = shape.edges().map(|(_, _, m)| m as u32).sum();
        let span = (self.n.max(2) - 1) as f64;
        let bits = shape.vertex_count() as f64 * (self.n as f64).ln() + total_mult as f64 * span.ln();
        if bits >= 87.0 {
            return Err(Error::Overflow(format!(
                "shape {shape} on n={} exceeds the 128-bit exact range",
                self.n
            )));
        }
        self.weights.prepare_products(&product_pairs(&p));
        let l = embedding_sum(&p, &self.weights);
        let denom = BigInt::from(shape.automorphisms())
            * num_traits::pow(BigInt::from(self.n - 1), total_mult as usize);
        let r = BigRational::new(BigInt::from(l), denom);
        // q^{-M} = D^{-M/2} for even M, q D^{-(M+1)/2} for odd M
        let half = (total_mult as usize).div_ceil(2);
        let scaled = r / num_traits::pow(self.disc.clone(), half);
        Ok(if total_mult % 2 == 0 {
            QuadValue::rational(scaled, self.disc.clone())
        } else {
            QuadValue::new(BigRational::from_integer(0.into()), scaled, self.disc.clone())
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

fn check_multiplicities(p: &Pattern) -> Result<()> {
    if let Some((_, _, m)) = p.edges().into_iter().find(|e| e.2 > MAX_MULTIPLICITY) {
        return Err(Error::ShapeUnsupported(format!(
            "edge multiplicity {m} exceeds {MAX_MULTIPLICITY}"
        )));
    }
    Ok(())
}

/// Raw factor value plus the normalization where it is defined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorValue {
    pub raw: f64,
    pub expectation_shift: Option<f64>,
    pub scale: Option<f64>,
    pub normalized: Option<f64>,
}

/// `gamma_h(g)` for `g` viewed in the ensemble with degree `d`.
pub fn gamma(g: &Graph, d: usize, h: &CanonicalShape) -> Result<FactorValue> {
    let mut ev = FactorEvaluator::new(g, d)?;
    gamma_with(&mut ev, h)
}

pub fn gamma_with(ev: &mut FactorEvaluator, h: &CanonicalShape) -> Result<FactorValue> {
    if h.is_empty() {
        return Err(Error::ShapeUnsupported("empty shape".into()));
    }
    if h.vertex_count() > MAX_FACTOR_VERTICES {
        return Err(Error::TooLarge {
            what: "factor shape vertices",
            found: h.vertex_count(),
            limit: MAX_FACTOR_VERTICES,
        });
    }
    let raw = ev.gamma_raw(h)?;
    let (expectation_shift, scale, normalized) = match normalization_constants(h, ev.field.n) {
        Ok((e, s)) => (Some(e), Some(s), Some((raw - e) / s)),
        Err(_) => (None, None, None),
    };
    Ok(FactorValue {
        raw,
        expectation_shift,
        scale,
        normalized,
    })
}

/// `(E_H, sigma_H)`: `sigma_H = (n^v / aut)^{1/2}`, `E_H = 2 n^{v/2} / aut` for
/// even cycles and zero otherwise.
pub fn normalization_constants(h: &CanonicalShape, n: usize) -> Result<(f64, f64)> {
    if !h.is_basis() {
        return Err(Error::ShapeUnsupported(format!(
            "normalization needs a connected simple shape of minimum degree 2, got {h}"
        )));
    }
    let v = h.vertex_count();
    if v > n {
        return Err(Error::ShapeTooLargeForEnsemble { vertices: v, n });
    }
    let aut = h.automorphisms() as f64;
    let nv = (n as f64).powi(v as i32);
    let scale = (nv / aut).sqrt();
    let shift = if h.is_cycle() && v % 2 == 0 {
        2.0 * (n as f64).powf(v as f64 / 2.0) / aut
    } else {
        0.0
    };
    Ok((shift, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::enumerate_regular;

    #[test]
    fn normalization_examples() {
        let (e, s) = normalization_constants(&CanonicalShape::cycle(4), 10).unwrap();
        assert!((e - 25.0).abs() < 1e-12);
        assert!((s - (1e4f64 / 8.0).sqrt()).abs() < 1e-12);
        let (e, s) = normalization_constants(&CanonicalShape::cycle(3), 6).unwrap();
        assert_eq!(e, 0.0);
        assert!((s - 6.0).abs() < 1e-12);
        assert!(matches!(
            normalization_constants(&CanonicalShape::cycle(6), 4),
            Err(Error::ShapeTooLargeForEnsemble { .. })
        ));
        assert!(matches!(
            normalization_constants(&CanonicalShape::path(3), 6),
            Err(Error::ShapeUnsupported(_))
        ));
    }

    #[test]
    fn small_examples() {
        let c5 = Graph::cycle(5);
        let k2 = CanonicalShape::path(2);
        assert!(gamma(&c5, 2, &k2).unwrap().raw.abs() < 1e-12);
        assert!(gamma(&c5, 2, &CanonicalShape::cycle(3)).unwrap().raw.abs() < 1e-12);
        for g in enumerate_regular(6, 3).unwrap() {
            let v = gamma(&g, 3, &CanonicalShape::path(3)).unwrap().raw;
            assert!((v + 15.0).abs() < 1e-9, "{v}");
        }
        assert!(matches!(
            gamma(&Graph::complete(4), 3, &k2),
            Err(Error::DegenerateDensity { .. })
        ));
    }

    #[test]
    fn exact_matches_float() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 6), (2, 6)]);
        let mut ex = ExactEvaluator::new(&g, 3).unwrap();
        let mut fl = FactorEvaluator::new(&g, 3).unwrap();
        for s in ["C3", "C4", "P4", "0-1^2 1-2", "0-1^3", "K4", "0-1 2-3"] {
            let shape: CanonicalShape = s.parse().unwrap();
            let a = ex.gamma(&shape).unwrap().to_f64();
            let b = fl.gamma_generic(&shape).unwrap();
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "{s}: {a} vs {b}");
        }
    }
}
