//! Labeled documents and corpus-level statistics.

mod counts;
mod venue;
mod vocab;

use alloc::string::String;
use alloc::vec::Vec;

pub use counts::{accumulate_counts, CountAccumulator, CountStats};
pub use venue::{classify_venues, VenueClass, VenueRules, VenueTally};
pub use vocab::{select_vocabulary, Vocabulary, VocabularySpec};

/// Whether a document belongs to the labeled foreground corpus or only feeds
/// the overall (background) probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Role {
    #[default]
    Foreground,
    Background,
}

/// Which label list of a document defines the "field" of NPMI scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelLevel {
    Field,
    #[default]
    Subfield,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    pub doc_id: String,
    pub text: String,
    pub fields: Vec<String>,
    pub subfields: Vec<String>,
    pub venue: Option<String>,
    pub year: Option<i32>,
    pub role: Role,
    /// Citing subfield → number of citations received from it.
    pub citing_subfields: Vec<(String, u64)>,
    pub n_citations: Option<u64>,
    pub n_authors: Option<u32>,
    pub n_references: Option<u32>,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            doc_id: doc_id.into(),
            text: text.into(),
            ..Self::default()
        }
    }

    pub fn with_fields<S: Into<String>>(mut self, fields: impl IntoIterator<Item = S>) -> Self {
        self.fields = fields.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_subfields<S: Into<String>>(mut self, subfields: impl IntoIterator<Item = S>) -> Self {
        self.subfields = subfields.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_venue(mut self, venue: impl Into<String>) -> Self {
        self.venue = Some(venue.into());
        self
    }

    pub fn background(mut self) -> Self {
        self.role = Role::Background;
        self
    }

    pub fn is_background(&self) -> bool {
        self.role == Role::Background
    }

    /// Labels at `level`; background documents never carry any.
    pub fn labels(&self, level: LabelLevel) -> &[String] {
        if self.is_background() {
            return &[];
        }
        match level {
            LabelLevel::Field => &self.fields,
            LabelLevel::Subfield => &self.subfields,
        }
    }
}
