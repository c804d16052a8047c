//! Exact calculator for the Brauer group of moduli of parahoric torsors
//! over a curve, with the supporting Lie-theoretic machinery: root system
//! tables, residue (generalized Levi) root systems at parahoric points,
//! character-lattice weight maps, Dynkin indices, affine Weyl coset
//! combinatorics, and component-group / twisted-moduli arithmetic.
//!
//! All arithmetic is arbitrary-precision and exact; there is no floating
//! point anywhere in the pipeline.

pub mod affine_weyl;
pub mod brauer;
pub mod dynkin;
pub mod lattice;
pub mod parahoric;
pub mod report;
pub mod root_system;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("invalid group type: {0}")]
    InvalidType(String),
    #[error("malformed group element: {0}")]
    MalformedElement(String),
    #[error("invalid facet: {0}")]
    InvalidFacet(String),
    #[error("point outside the closed fundamental alcove: {0}")]
    OutsideAlcove(String),
    #[error("non-dominant weight: {0}")]
    NonDominant(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
    #[error("normalization failure: {0}")]
    Normalization(String),
    #[error("schema error: {0}")]
    Schema(String),
}
