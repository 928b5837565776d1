//! Exact verification toolkit for Hodge-Newton decompositions, root
//! valuation lattices and generalized affine Springer fibers over the
//! computable Laurent field Q(e).

pub mod base_field;
pub mod error;
pub mod faults;
pub mod gmo_sets;
pub mod group_hn;
pub mod hodge_newton;
pub mod linalg;
pub mod root_system;
pub mod springer;
pub mod valuation_functions;
pub mod valuation_lattices;
pub mod verify;

pub use error::{Error, Result};
