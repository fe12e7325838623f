use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::expr::FactorExpr;
use super::poly::Poly;
use super::ring::RingElem;
use crate::error::{Error, Result};
use crate::graphs::{automorphism_count, CanonicalShape, Graph, Pattern};

/// Edge-subset enumeration bound for [`expand_subgraph_count`].
pub const MAX_EXPANSION_EDGES: usize = 20;

fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// `X_H` (the number of copies of `h`) as an exact combination of graph
/// factors: writing `x_e = p + q chi_e` and expanding,
/// `X_H = sum_S p^{e(H)-e(S)} q^{e(S)} c_{S,H} d_{S,H} C(n-v(S), v(H)-v(S)) gamma_S`
/// with `c_{S,H} = (v(H)-v(S))! aut(S)/aut(H)` and `d_{S,H} = N(H,S)`, over
/// isolated-vertex-free subgraphs `S` of `h` up to isomorphism (and the
/// empty graph). Holds on every graph.
pub fn expand_subgraph_count(h: &Graph) -> Result<FactorExpr> {
    let h = h.strip_isolated();
    if h.n() == 0 {
        return Err(Error::ShapeUnsupported("empty graph".into()));
    }
    if !h.is_connected() {
        return Err(Error::ShapeUnsupported("expansion needs a connected graph".into()));
    }
    let edges = h.edges();
    if edges.len() > MAX_EXPANSION_EDGES {
        return Err(Error::TooLarge {
            what: "edges for subgraph-count expansion",
            found: edges.len(),
            limit: MAX_EXPANSION_EDGES,
        });
    }
    let vh = h.n();
    let eh = edges.len() as u32;
    let aut_h = automorphism_count(&Pattern::from_graph(&h));

    // N(H, S) is the number of edge subsets with shape S
    let mut subgraph_counts: BTreeMap<CanonicalShape, u64> = BTreeMap::new();
    for mask in 0u32..(1 << edges.len()) {
        let mut p = Pattern::new(vh);
        for (i, &(a, b)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                p.set(a, b, 1);
            }
        }
        *subgraph_counts
            .entry(CanonicalShape::of_pattern(&p))
            .or_insert(0) += 1;
    }

    let mut out = FactorExpr::zero();
    for (s, n_hs) in subgraph_counts {
        let (vs, es) = (s.vertex_count(), s.edge_count() as u32);
        let k = vh - vs;
        let c_sh = BigRational::new(factorial(k) * BigInt::from(s.automorphisms()), BigInt::from(aut_h));
        let binom = Poly::falling(vs as i64, k as u32)
            .scale(&BigRational::new(BigInt::from(1), factorial(k)));
        let p_pow = {
            let mut x = Poly::one();
            for _ in 0..eh - es {
                x = &x * &Poly::p();
            }
            x
        };
        let coeff = (&RingElem::from_poly(&p_pow * &binom) * &RingElem::q_pow(es))
            .scale(&(c_sh * BigRational::from_integer(n_hs.into())));
        out.add_assign(&FactorExpr::gamma(s).scale(&coeff));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let e = expand_subgraph_count(&Graph::path(2)).unwrap();
        let half_pairs = Poly::falling(0, 2).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(e.constant(), RingElem::from_poly(&half_pairs * &Poly::p()));
        assert_eq!(e.coefficient(&[CanonicalShape::path(2)]), RingElem::q());
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn triangle_terms() {
        let e = expand_subgraph_count(&Graph::cycle(3)).unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(e.coefficient(&[CanonicalShape::cycle(3)]), RingElem::q_pow(3));
        let p = RingElem::from_poly(Poly::p());
        assert_eq!(e.coefficient(&[CanonicalShape::path(3)]), &p * &RingElem::q_pow(2));
        let n_minus_2 = RingElem::from_poly(&Poly::n() - &Poly::int(2));
        assert_eq!(
            e.coefficient(&[CanonicalShape::path(2)]),
            &(&(&p * &p) * &RingElem::q()) * &n_minus_2
        );
    }

    #[test]
    fn rejects_disconnected() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert!(expand_subgraph_count(&g).is_err());
    }
}
