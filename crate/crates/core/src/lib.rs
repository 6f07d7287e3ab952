//! Exact incidence geometry and sum-product statistics over finite fields.
//!
//! The crate is layered bottom-up: [`field`] arithmetic, [`set`] algebra,
//! [`incidence`] counters, the constructive [`lemma`] toolkit, and the
//! [`verifier`] that turns all of these into exact checks and ratio reports.

pub mod bounds;
pub mod error;
pub mod field;
pub mod incidence;
pub mod lemma;
pub mod report;
pub mod set;
pub mod verifier;

pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldSpec};
pub use set::{FSet, Family, OpKind, PairGraph};
