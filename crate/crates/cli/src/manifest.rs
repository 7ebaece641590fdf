//! Provenance records: what ran, with which settings, on which bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;
use crate::pipeline::{Command, RunReport};

pub fn sha256_file(path: &Path) -> std::io::Result<String> {
    let digest = Sha256::digest(fs::read(path)?);
    Ok(digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    }))
}

/// `key=value` lines: command, versions, every configuration value, and
/// the path and SHA-256 of every input and output. The thread count is
/// left out because it does not affect outputs.
pub fn manifest_string(command: Command, cfg: &PipelineConfig, report: &RunReport) -> std::io::Result<String> {
    let mut out = String::from("# jargon provenance manifest\n");
    let _ = writeln!(out, "command={}", command.name());
    let _ = writeln!(out, "version.jargon-cli={}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "version.jargon-core={}", jargon_core::VERSION);
    for (k, v) in cfg.entries() {
        let _ = writeln!(out, "config.{k}={v}");
    }
    for (kind, files) in [("input", &report.inputs), ("output", &report.outputs)] {
        for (name, path) in files {
            let _ = writeln!(out, "{kind}.{name}={} sha256:{}", path.display(), sha256_file(path)?);
        }
    }
    Ok(out)
}
