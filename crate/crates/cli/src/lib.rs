//! File formats, parallel drivers and subcommands for the jargon pipeline.
//!
//! The algorithms live in `jargon-core`; this crate reads and writes the
//! exchanged files, spreads work over a rayon pool without letting the
//! thread count change any output, and records provenance.

pub mod config;
pub mod formats;
pub mod manifest;
pub mod pipeline;
pub mod synth;

pub use config::PipelineConfig;
pub use pipeline::{run, run_with_threads, Command, RunReport};
