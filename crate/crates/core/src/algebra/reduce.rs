//! Power reduction, degree-one elimination and splitting of disconnected
//! shapes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::expr::{FactorExpr, Monomial};
use super::poly::Poly;
use super::ring::RingElem;
use crate::error::{Error, Result};
use crate::factors::MAX_MULTIPLICITY;
use crate::graphs::{automorphism_count, CanonicalShape, Multigraph, Pattern};

/// `chi^m = a_m + b_m chi`, from `chi^2 = 1 - c chi`.
fn chi_power(m: u8) -> (RingElem, RingElem) {
    let c = RingElem::c();
    let (mut a, mut b) = (RingElem::zero(), RingElem::one());
    for _ in 1..m {
        // chi^{k+1} = a chi + b chi^2 = b + (a - c b) chi
        let next_b = &a - &(&c * &b);
        a = b;
        b = next_b;
    }
    (a, b)
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `gamma` of a multigraph shape (sum over unlabeled copies in `K_n` of
/// `prod chi_e^{m_e}`) as a combination of simple-shape factors.
pub fn power_reduce(m: &Multigraph) -> Result<FactorExpr> {
    power_reduce_pattern(&Pattern::from_multigraph(m))
}

pub fn power_reduce_shape(s: &CanonicalShape) -> Result<FactorExpr> {
    power_reduce_pattern(&s.to_pattern())
}

pub(crate) fn power_reduce_pattern(p: &Pattern) -> Result<FactorExpr> {
    let p = p.stripped();
    let edges = p.edges();
    if let Some(&(_, _, m)) = edges.iter().find(|e| e.2 > MAX_MULTIPLICITY) {
        return Err(Error::ShapeUnsupported(format!(
            "edge multiplicity {m} exceeds {MAX_MULTIPLICITY}"
        )));
    }
    if edges.len() > 24 {
        return Err(Error::TooLarge {
            what: "distinct edges for power reduction",
            found: edges.len(),
            limit: 24,
        });
    }
    if edges.iter().all(|e| e.2 == 1) {
        return Ok(FactorExpr::gamma(CanonicalShape::of_pattern(&p)));
    }
    let powers: Vec<(RingElem, RingElem)> = edges.iter().map(|e| chi_power(e.2)).collect();
    let aut_g = automorphism_count(&p);
    let v = p.v();

    // group edge subsets by their canonical shape first; coefficients add
    let mut by_shape: BTreeMap<CanonicalShape, RingElem> = BTreeMap::new();
    for mask in 0u32..(1 << edges.len()) {
        let mut coeff = RingElem::one();
        let mut sub = Pattern::new(v);
        for (i, &(a, b, _)) in edges.iter().enumerate() {
            let (ai, bi) = &powers[i];
            if mask >> i & 1 == 1 {
                coeff = &coeff * bi;
                sub.set(a, b, 1);
            } else {
                coeff = &coeff * ai;
            }
            if coeff.is_zero() {
                break;
            }
        }
        if coeff.is_zero() {
            continue;
        }
        let s = CanonicalShape::of_pattern(&sub);
        let slot = by_shape.entry(s).or_insert_with(RingElem::zero);
        *slot = &*slot + &coeff;
    }

    let mut out = FactorExpr::zero();
    for (s, coeff) in by_shape {
        let vs = s.vertex_count();
        let embed_rest = RingElem::from_poly(Poly::falling(vs as i64, (v - vs) as u32));
        let sym = ratio(s.automorphisms(), aut_g);
        let c = (&coeff * &embed_rest).scale(&sym);
        out.add_assign(&FactorExpr::gamma(s).scale(&c));
    }
    Ok(out)
}

/// `L_S = aut(S) gamma_S` for a labeled (multi)pattern, as an expression.
fn labeled_sum(p: &Pattern) -> Result<FactorExpr> {
    let p = p.stripped();
    let aut = automorphism_count(&p);
    Ok(power_reduce_pattern(&p)?.scale_rational(&ratio(aut, 1)))
}

/// Replace factor `idx` of `key` by `replacement`, keeping the other factors.
fn substitute(key: &Monomial, idx: usize, coeff: &RingElem, replacement: &FactorExpr) -> FactorExpr {
    let mut rest = key.clone();
    rest.remove(idx);
    replacement.mul(&FactorExpr::monomial(rest, coeff.clone()))
}

fn leaf_of(p: &Pattern) -> Option<(usize, usize)> {
    (0..p.v()).find_map(|v| {
        if p.degree(v) == 1 {
            let u = (0..p.v()).find(|&u| p.get(u, v) > 0).unwrap();
            Some((v, u))
        } else {
            None
        }
    })
}

/// On d-regular graphs with `p = d/(n-1)`, each row of the chi matrix sums to
/// zero, so for a leaf `v` hanging from `u`:
/// `L_S = -sum_{t != u, v} L_{S - v + ut}`.
fn degree_one_step(s: &CanonicalShape) -> Result<Option<FactorExpr>> {
    let p = s.to_pattern();
    let Some((v, u)) = leaf_of(&p) else {
        return Ok(None);
    };
    let keep: Vec<usize> = (0..p.v()).filter(|&x| x != v).collect();
    let base = p.induced(&keep);
    let u_idx = keep.iter().position(|&x| x == u).unwrap();
    let mut total = FactorExpr::zero();
    for t in 0..base.v() {
        if t == u_idx {
            continue;
        }
        let mut m = base.clone();
        m.add(u_idx, t, 1);
        total.add_assign(&labeled_sum(&m)?);
    }
    let aut = s.automorphisms();
    Ok(Some(total.scale_rational(&-ratio(1, aut))))
}

/// Partial injections from `0..a` into `0..b`, as `Some(target)` / `None`.
fn partial_injections(a: usize, b: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(a);
    let mut used = vec![false; b];
    fn rec(
        a: usize,
        b: usize,
        cur: &mut Vec<Option<usize>>,
        used: &mut [bool],
        out: &mut Vec<Vec<Option<usize>>>,
    ) {
        if cur.len() == a {
            out.push(cur.clone());
            return;
        }
        cur.push(None);
        rec(a, b, cur, used, out);
        cur.pop();
        for t in 0..b {
            if !used[t] {
                used[t] = true;
                cur.push(Some(t));
                rec(a, b, cur, used, out);
                cur.pop();
                used[t] = false;
            }
        }
    }
    rec(a, b, &mut cur, &mut used, &mut out);
    out
}

/// For `S = A + B` (A one component), `L_A L_B = sum_sigma L_{A u_sigma B}`
/// over partial injections `sigma: V(A) -> V(B)`; the empty `sigma` is
/// `L_S` itself.
fn disconnected_step(s: &CanonicalShape) -> Result<Option<FactorExpr>> {
    let p = s.to_pattern();
    let comps = p.components();
    if comps.len() < 2 {
        return Ok(None);
    }
    let a_verts = &comps[0];
    let b_verts: Vec<usize> = comps[1..].iter().flatten().copied().collect();
    let pa = p.induced(a_verts);
    let pb = p.induced(&b_verts);
    let (sa, sb) = (CanonicalShape::of_pattern(&pa), CanonicalShape::of_pattern(&pb));

    let mut merged_counts: BTreeMap<CanonicalShape, u64> = BTreeMap::new();
    for sigma in partial_injections(pa.v(), pb.v()) {
        if sigma.iter().all(Option::is_none) {
            continue;
        }
        let fresh = sigma.iter().filter(|x| x.is_none()).count();
        let mut m = Pattern::new(pb.v() + fresh);
        for (x, y, k) in pb.edges() {
            m.add(x, y, k);
        }
        let mut next = pb.v();
        let image: Vec<usize> = sigma
            .iter()
            .map(|t| {
                t.unwrap_or_else(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect();
        for (x, y, k) in pa.edges() {
            m.add(image[x], image[y], k);
        }
        *merged_counts.entry(CanonicalShape::of_pattern(&m)).or_insert(0) += 1;
    }

    let prod_coeff = RingElem::rational(ratio(sa.automorphisms() * sb.automorphisms(), 1));
    let mut l_s = FactorExpr::monomial(vec![sa, sb], prod_coeff);
    for (m, count) in merged_counts {
        let l_m = power_reduce_shape(&m)?.scale_rational(&ratio(m.automorphisms() * count, 1));
        l_s.add_assign(&l_m.scale_rational(&-ratio(1, 1)));
    }
    Ok(Some(l_s.scale_rational(&ratio(1, s.automorphisms()))))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rule {
    DegreeOne,
    Disconnected,
    Both,
}

fn rewrite_once(e: &FactorExpr, rule: Rule) -> Result<(FactorExpr, bool)> {
    let mut out = FactorExpr::zero();
    let mut changed = false;
    for (key, coeff) in e.all_terms() {
        let mut done = false;
        if matches!(rule, Rule::DegreeOne | Rule::Both) {
            for (idx, s) in key.iter().enumerate() {
                if let Some(r) = degree_one_step(s)? {
                    out.add_assign(&substitute(key, idx, coeff, &r));
                    done = true;
                    break;
                }
            }
        }
        if !done && matches!(rule, Rule::Disconnected | Rule::Both) {
            for (idx, s) in key.iter().enumerate() {
                if let Some(r) = disconnected_step(s)? {
                    out.add_assign(&substitute(key, idx, coeff, &r));
                    done = true;
                    break;
                }
            }
        }
        if !done {
            out.add_term(key.clone(), coeff.clone());
        }
        changed |= done;
    }
    Ok((out, changed))
}

fn fixpoint(e: &FactorExpr, rule: Rule) -> Result<FactorExpr> {
    let mut cur = e.clone();
    loop {
        let (next, changed) = rewrite_once(&cur, rule)?;
        if !changed {
            return Ok(next);
        }
        cur = next;
    }
}

/// Split every disconnected factor into a product of its parts plus overlay
/// corrections. Valid on all graphs.
pub fn reduce_disconnected(e: &FactorExpr) -> Result<FactorExpr> {
    fixpoint(e, Rule::Disconnected)
}

/// Eliminate every degree-1 vertex. Valid on d-regular graphs with
/// `p = d/(n-1)`.
pub fn reduce_degree_one(e: &FactorExpr) -> Result<FactorExpr> {
    fixpoint(e, Rule::DegreeOne)
}

/// Degree-one elimination and splitting, repeated to a fixpoint. The result
/// uses only connected, simple, minimum-degree-two factors. Valid on
/// d-regular graphs.
pub fn reduce_full(e: &FactorExpr) -> Result<FactorExpr> {
    fixpoint(e, Rule::Both)
}
