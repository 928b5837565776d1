//! Exact linear algebra over Q(e) and over Q.

mod matrix;
mod qspace;
mod smith;

pub use matrix::{combinations, LaurentMatrix};
pub use qspace::{qadd, qdot, qscale, qsub, qvec_from_ints, rref_rows, QSubspace, QVec};
pub use smith::smith_valuations;
