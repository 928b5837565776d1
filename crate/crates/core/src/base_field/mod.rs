//! Exact arithmetic in Q(e) and in Q ∪ {∞}, and the dominance order.

mod extrat;
mod parse;
mod poly;
mod ratfunc;

pub use extrat::{dominance_geq, ExtRat, QTuple};
pub use parse::{parse_ratfunc, parse_rational};
pub use poly::Poly;
pub use ratfunc::RatFunc;

/// Valuation of an element of Q(e); `INFINITY` exactly for zero.
pub fn val(f: &RatFunc) -> ExtRat {
    f.val()
}
