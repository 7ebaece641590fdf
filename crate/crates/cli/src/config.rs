//! Pipeline configuration: defaults, `key=value` files and overrides.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use jargon_core::corpus::LabelLevel;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{origin}: expected key=value, found {line:?}")]
    Syntax { origin: String, line: String },
    #[error("{origin}: unknown key {key:?}")]
    UnknownKey { origin: String, key: String },
    #[error("{origin}: invalid value {value:?} for {key}: {reason}")]
    InvalidValue {
        origin: String,
        key: String,
        value: String,
        reason: String,
    },
}

/// Every tunable of the pipeline. Defaults follow the published method.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub out_dir: PathBuf,
    pub corpus: Option<PathBuf>,
    pub background: Option<PathBuf>,
    pub substitutes: Option<PathBuf>,
    pub lemmas: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub excluded_words: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub general_venues: Option<PathBuf>,
    pub hierarchy: Option<PathBuf>,

    pub seed: u64,
    pub label_level: LabelLevel,
    pub min_count: u64,
    pub cutoff: f64,
    pub n_substitutes: usize,
    pub sample_size: usize,
    pub initial_resolution: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub min_sense_substitutes: usize,
    pub min_second_count: u64,
    pub vocab_percentile: f64,
    pub venue_coverage: f64,
    pub venue_floor: u64,
    pub venue_dominance: f64,
    pub year_start: i32,
    pub year_end: i32,
    pub time_bins: usize,
    pub max_subfields: usize,
    pub parent_field: Option<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("."),
            corpus: None,
            background: None,
            substitutes: None,
            lemmas: None,
            stopwords: None,
            excluded_words: None,
            lexicon: None,
            general_venues: None,
            hierarchy: None,
            seed: 0,
            label_level: LabelLevel::Subfield,
            min_count: jargon_core::npmi::DEFAULT_MIN_COUNT,
            cutoff: jargon_core::jargon::DEFAULT_CUTOFF,
            n_substitutes: jargon_core::wsi::DEFAULT_SUBSTITUTES,
            sample_size: jargon_core::wsi::DEFAULT_SAMPLE_SIZE,
            initial_resolution: 1.0,
            max_iterations: 10,
            tolerance: 0.01,
            min_sense_substitutes: 2,
            min_second_count: 10,
            vocab_percentile: 98.0,
            venue_coverage: 0.5,
            venue_floor: 800,
            venue_dominance: 0.8,
            year_start: 2000,
            year_end: 2014,
            time_bins: 3,
            max_subfields: 2,
            parent_field: None,
        }
    }
}

fn parse<T: FromStr>(origin: &str, key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::InvalidValue {
        origin: origin.to_string(),
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

fn optional_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

fn show_path(p: &Option<PathBuf>) -> String {
    p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
}

impl PipelineConfig {
    /// Recognized keys, in the order they are reported.
    pub const KEYS: &'static [&'static str] = &[
        "out_dir",
        "corpus",
        "background",
        "substitutes",
        "lemmas",
        "stopwords",
        "excluded_words",
        "lexicon",
        "general_venues",
        "hierarchy",
        "seed",
        "label_level",
        "min_count",
        "cutoff",
        "n_substitutes",
        "sample_size",
        "initial_resolution",
        "max_iterations",
        "tolerance",
        "min_sense_substitutes",
        "min_second_count",
        "vocab_percentile",
        "venue_coverage",
        "venue_floor",
        "venue_dominance",
        "year_start",
        "year_end",
        "time_bins",
        "max_subfields",
        "parent_field",
    ];

    /// Sets one key; `origin` prefixes error messages.
    pub fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key {
            "out_dir" => self.out_dir = PathBuf::from(value),
            "corpus" => self.corpus = optional_path(value),
            "background" => self.background = optional_path(value),
            "substitutes" => self.substitutes = optional_path(value),
            "lemmas" => self.lemmas = optional_path(value),
            "stopwords" => self.stopwords = optional_path(value),
            "excluded_words" => self.excluded_words = optional_path(value),
            "lexicon" => self.lexicon = optional_path(value),
            "general_venues" => self.general_venues = optional_path(value),
            "hierarchy" => self.hierarchy = optional_path(value),
            "seed" => self.seed = parse(origin, key, value)?,
            "label_level" => {
                self.label_level = match value {
                    "field" => LabelLevel::Field,
                    "subfield" => LabelLevel::Subfield,
                    _ => {
                        return Err(ConfigError::InvalidValue {
                            origin: origin.to_string(),
                            key: key.to_string(),
                            value: value.to_string(),
                            reason: "expected field or subfield".into(),
                        })
                    }
                }
            }
            "min_count" => self.min_count = parse(origin, key, value)?,
            "cutoff" => self.cutoff = parse(origin, key, value)?,
            "n_substitutes" => self.n_substitutes = parse(origin, key, value)?,
            "sample_size" => self.sample_size = parse(origin, key, value)?,
            "initial_resolution" => self.initial_resolution = parse(origin, key, value)?,
            "max_iterations" => self.max_iterations = parse(origin, key, value)?,
            "tolerance" => self.tolerance = parse(origin, key, value)?,
            "min_sense_substitutes" => self.min_sense_substitutes = parse(origin, key, value)?,
            "min_second_count" => self.min_second_count = parse(origin, key, value)?,
            "vocab_percentile" => self.vocab_percentile = parse(origin, key, value)?,
            "venue_coverage" => self.venue_coverage = parse(origin, key, value)?,
            "venue_floor" => self.venue_floor = parse(origin, key, value)?,
            "venue_dominance" => self.venue_dominance = parse(origin, key, value)?,
            "year_start" => self.year_start = parse(origin, key, value)?,
            "year_end" => self.year_end = parse(origin, key, value)?,
            "time_bins" => self.time_bins = parse(origin, key, value)?,
            "max_subfields" => self.max_subfields = parse(origin, key, value)?,
            "parent_field" => self.parent_field = (!value.is_empty()).then(|| value.to_string()),
            _ => {
                return Err(ConfigError::UnknownKey {
                    origin: origin.to_string(),
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Applies a `key=value` file. Blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        for (i, line) in text.lines().enumerate() {
            let origin = format!("{}:{}", path.display(), i + 1);
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                origin: origin.clone(),
                line: line.to_string(),
            })?;
            self.set(key.trim(), value, &origin)?;
        }
        Ok(())
    }

    /// Applies a `key=value` assignment given on the command line.
    pub fn apply_assignment(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let origin = format!("--set {assignment}");
        let (key, value) = assignment.split_once('=').ok_or_else(|| ConfigError::Syntax {
            origin: origin.clone(),
            line: assignment.to_string(),
        })?;
        self.set(key.trim(), value, &origin)
    }

    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "out_dir" => self.out_dir.display().to_string(),
            "corpus" => show_path(&self.corpus),
            "background" => show_path(&self.background),
            "substitutes" => show_path(&self.substitutes),
            "lemmas" => show_path(&self.lemmas),
            "stopwords" => show_path(&self.stopwords),
            "excluded_words" => show_path(&self.excluded_words),
            "lexicon" => show_path(&self.lexicon),
            "general_venues" => show_path(&self.general_venues),
            "hierarchy" => show_path(&self.hierarchy),
            "seed" => self.seed.to_string(),
            "label_level" => match self.label_level {
                LabelLevel::Field => "field".into(),
                LabelLevel::Subfield => "subfield".into(),
            },
            "min_count" => self.min_count.to_string(),
            "cutoff" => self.cutoff.to_string(),
            "n_substitutes" => self.n_substitutes.to_string(),
            "sample_size" => self.sample_size.to_string(),
            "initial_resolution" => self.initial_resolution.to_string(),
            "max_iterations" => self.max_iterations.to_string(),
            "tolerance" => self.tolerance.to_string(),
            "min_sense_substitutes" => self.min_sense_substitutes.to_string(),
            "min_second_count" => self.min_second_count.to_string(),
            "vocab_percentile" => self.vocab_percentile.to_string(),
            "venue_coverage" => self.venue_coverage.to_string(),
            "venue_floor" => self.venue_floor.to_string(),
            "venue_dominance" => self.venue_dominance.to_string(),
            "year_start" => self.year_start.to_string(),
            "year_end" => self.year_end.to_string(),
            "time_bins" => self.time_bins.to_string(),
            "max_subfields" => self.max_subfields.to_string(),
            "parent_field" => self.parent_field.clone().unwrap_or_default(),
            _ => return None,
        })
    }

    /// All settings as `(key, value)` pairs in `KEYS` order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        Self::KEYS
            .iter()
            .map(|k| (*k, self.get(k).expect("every listed key is readable")))
            .collect()
    }

    /// Renders the configuration as a file `apply_file` accepts.
    pub fn to_file_string(&self) -> String {
        self.entries().into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn induction(&self) -> jargon_core::wsi::InductionConfig {
        jargon_core::wsi::InductionConfig {
            initial_resolution: self.initial_resolution,
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            min_substitutes: self.min_sense_substitutes,
            min_second_count: self.min_second_count,
            sample_size: self.sample_size,
        }
    }

    pub fn venue_rules(&self) -> jargon_core::corpus::VenueRules {
        jargon_core::corpus::VenueRules {
            min_documents: self.venue_floor,
            dominance: self.venue_dominance,
        }
    }

    pub fn time_bins(&self) -> jargon_core::impact::TimeBins {
        jargon_core::impact::TimeBins {
            start: self.year_start,
            end: self.year_end,
            bins: self.time_bins,
        }
    }
}
