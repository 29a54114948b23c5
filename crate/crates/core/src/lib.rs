//! Decide whether a finitely generated abelian group of affine maps of `C^n`
//! has a dense orbit.
//!
//! The pipeline validates a presentation, conjugates the group into block
//! lower-triangular form, takes branch-corrected logarithms of the generators,
//! and tests the resulting additive subgroup of `C^n` for density with an exact
//! (field tower) or numeric (lattice reduction) rank criterion.

pub mod affine;
pub mod cli;
pub mod config;
pub mod density;
pub mod error;
pub mod example;
pub mod explog;
pub mod linalg;
pub mod normal_form;
pub mod orbit;
pub mod pipeline;
pub mod presentation;
pub mod scalars;

pub use affine::AffineMap;
pub use error::{Error, Result, Stage};
