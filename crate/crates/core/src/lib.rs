//! Binary covering arrays: verification, equivalence and canonical forms,
//! explicit constructions, Hall-matching weight lifting, exact bounds, and
//! isomorph-free classification.
//!
//! A `CA(m; t, n, q)` is an `m x n` array over `{0, .., q-1}` in which every
//! choice of `t` columns shows all `q^t` patterns. Two arrays are equivalent
//! when one becomes the other by permuting rows, permuting columns and
//! relabelling the symbols of individual columns.

pub mod array;
pub mod bits;
pub mod bounds;
pub mod classify;
pub mod cli;
pub mod constructions;
pub mod coverage;
pub mod equivalence;
pub mod error;
pub mod normalization;

pub use array::{hamming_distance, CoveringArray, Matrix, ResidualSelector, RowDistanceStructure};
pub use bits::BitColumn;
pub use coverage::{is_covering, verify_coverage, weight_bounds, CoverageReport};
pub use error::{Error, Result};
