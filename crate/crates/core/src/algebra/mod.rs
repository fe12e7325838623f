//! Exact coefficient ring and the algebra of graph factors.

mod expand;
mod expr;
mod poly;
mod quad;
mod reduce;
mod ring;

pub use expand::{expand_subgraph_count, MAX_EXPANSION_EDGES};
pub use expr::{evaluate, evaluate_exact, evaluate_exact_with, FactorExpr, Monomial, NumericExpr};
pub use poly::Poly;
pub use quad::QuadValue;
pub use reduce::{
    power_reduce, power_reduce_shape, reduce_degree_one, reduce_disconnected, reduce_full,
};
pub use ring::RingElem;
