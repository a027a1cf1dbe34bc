//! Desk-scale workbench for computable group families with decidable word
//! problems, computable infinitary formulas with sound bounded evaluation,
//! and stage-based index-set constructions.

pub mod error;
pub mod formula;
pub mod groups;
pub mod intlin;
pub mod words;

pub use error::{Error, Result};
