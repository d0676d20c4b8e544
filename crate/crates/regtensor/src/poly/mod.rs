//! Polynomial and rational-function arithmetic: the substrate every other
//! module builds on.

pub mod gcd;
pub mod multi;
pub mod parse;
pub mod ratfunc;
pub mod uni;

pub use gcd::multi_gcd;
pub use multi::{Monomial, MultiPoly, PolyError};
pub use parse::{parse_ratfunc, parse_ratfunc_free, scan_idents, ExprError};
pub use ratfunc::RatFunc;
pub use uni::{Degree, UniError, UniPoly};
