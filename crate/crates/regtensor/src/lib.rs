//! Exact computer algebra for deciding whether tensor products of finitely
//! presented field extensions (and, at descriptor level, k-algebras) are
//! regular, reduced, domains, or fields, with machine-checkable certificates.
//!
//! The layers, bottom up:
//!
//! - [`scalar`]: arbitrary-precision rationals and `F_p`.
//! - [`poly`]: multivariate / univariate polynomials and rational functions.
//! - [`field`] / [`linalg`]: runtime coefficient fields and exact row
//!   echelon machinery over them.
//! - [`insep`]: the purely inseparable kernel; subfields of `F_p(x_1..x_n)`
//!   containing a p-power base as row spaces.
//! - [`factor`]: irreducibility and factorization oracles with replayable
//!   certificates.
//! - [`tower`]: presentations of finitely generated field extensions and
//!   separability classification.
//! - [`tensor`]: explicit `K (x)_k L` construction and structural analysis.
//! - [`engine`]: the decision rules, producing verdicts with certificates.
//! - [`session`] / [`report`] / [`corpus`]: the CLI session language,
//!   rendering, and the bundled example corpus.

pub mod algebra;
pub mod corpus;
pub mod engine;
pub mod factor;
pub mod field;
pub mod insep;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod session;
pub mod tensor;
pub mod tower;
