//! Scholarly jargon metrics over labeled corpora.
//!
//! This crate holds the algorithmic core and needs only `alloc`:
//!
//! * [`text`]: deterministic whole-word tokenization.
//! * [`corpus`]: documents, shard-mergeable count statistics, vocabulary
//!   selection and venue classification.
//! * [`npmi`]: type NPMI tables and field distinctiveness.
//! * [`louvain`] and [`wsi`]: substitute networks, community detection with a
//!   dynamically estimated resolution, sense induction and assignment.
//! * [`senses`]: sense NPMI and word-level sense scores.
//! * [`jargon`]: per-token classification, document scores, audience-design
//!   aggregates.
//! * [`validation`]: dictionary recall, AUC and paired score comparison.
//! * [`impact`]: citation matrices, Gini balance, DIV and design-matrix rows.
//!
//! File formats, parallel drivers and the command line live in the
//! `jargon-cli` crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod corpus;
pub mod error;
pub mod impact;
pub mod jargon;
pub mod louvain;
pub mod npmi;
pub mod senses;
pub mod stats;
pub mod text;
pub mod validation;
pub mod wsi;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
