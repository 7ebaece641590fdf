//! Token-level jargon classification and document/venue aggregates.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::VenueClass;
use crate::npmi::TypeScoreTable;
use crate::senses::SenseScoreTable;
use crate::stats::{mean_ci95, MeanCi};
use crate::text::{tokenize_with, LemmaTable};
use crate::wsi::SenseId;
use crate::{Error, Result};

pub const DEFAULT_CUTOFF: f64 = 0.1;

/// Lowest value NPMI can take; unscored prefixes are floored to it when
/// averaged.
pub const SCORE_FLOOR: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TokenClass {
    SenseJargon,
    TypeJargon,
    None,
}

/// A token is sense jargon when its sense score exceeds both the cutoff and
/// the type score (an absent type score never blocks); otherwise type jargon
/// when the type score exceeds the cutoff.
pub fn classify_scores(type_score: Option<f64>, sense_score: Option<f64>, cutoff: f64) -> TokenClass {
    if let Some(s) = sense_score {
        if s > cutoff && type_score.is_none_or(|t| s > t) {
            return TokenClass::SenseJargon;
        }
    }
    match type_score {
        Some(t) if t > cutoff => TokenClass::TypeJargon,
        _ => TokenClass::None,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScoreTables<'a> {
    pub types: &'a TypeScoreTable,
    pub senses: &'a SenseScoreTable,
}

impl<'a> ScoreTables<'a> {
    pub fn new(types: &'a TypeScoreTable, senses: &'a SenseScoreTable) -> Self {
        Self { types, senses }
    }

    pub fn type_score(&self, field: &str, lemma: &str) -> Option<f64> {
        self.types.get(field, lemma)
    }

    pub fn sense_score(&self, field: &str, lemma: &str, sense: Option<SenseId>) -> Option<f64> {
        self.senses.get(field, lemma, sense?)
    }

    pub fn classify(&self, token: &LabeledToken, field: &str, cutoff: f64) -> TokenClass {
        classify_scores(
            self.type_score(field, &token.lemma),
            self.sense_score(field, &token.lemma, token.sense),
            cutoff,
        )
    }

    /// max(T, S) for the token, `None` when neither is scored.
    pub fn best_score(&self, token: &LabeledToken, field: &str) -> Option<f64> {
        let t = self.type_score(field, &token.lemma);
        let s = self.sense_score(field, &token.lemma, token.sense);
        match (t, s) {
            (Some(t), Some(s)) => Some(t.max(s)),
            (a, b) => a.or(b),
        }
    }
}

/// A countable token with its scoring lemma and, for vocabulary lemmas, its
/// assigned sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledToken {
    pub lemma: String,
    pub sense: Option<SenseId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentTokens {
    pub doc_id: String,
    pub tokens: Vec<LabeledToken>,
}

impl DocumentTokens {
    /// Tokenizes `text` with `lemmas` and looks up each position's sense.
    pub fn from_text(
        doc_id: &str,
        text: &str,
        lemmas: &LemmaTable,
        sense_at: impl Fn(usize) -> Option<SenseId>,
    ) -> Self {
        let tokens = tokenize_with(text, lemmas)
            .into_iter()
            .map(|t| LabeledToken {
                sense: sense_at(t.position),
                lemma: t.lemma,
            })
            .collect();
        Self {
            doc_id: String::from(doc_id),
            tokens,
        }
    }
}

/// Running maximum of the best token score over a document prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixMax {
    running: Vec<Option<f64>>,
}

impl PrefixMax {
    pub fn new(scores: impl IntoIterator<Item = Option<f64>>) -> Self {
        let mut best: Option<f64> = None;
        let running = scores
            .into_iter()
            .map(|s| {
                best = match (best, s) {
                    (Some(b), Some(s)) => Some(b.max(s)),
                    (b, s) => b.or(s),
                };
                best
            })
            .collect();
        Self { running }
    }

    /// Max over the first `m` tokens; past the end this is the whole
    /// document's max. `None` when all of them are unscored.
    pub fn at(&self, m: usize) -> Option<f64> {
        if m == 0 || self.running.is_empty() {
            return None;
        }
        self.running[m.min(self.running.len()) - 1]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentJargonScore {
    pub doc_id: String,
    pub fields: Vec<String>,
    pub n_tokens: usize,
    pub sense_count: usize,
    pub type_count: usize,
    pub prefix_max: PrefixMax,
}

impl DocumentJargonScore {
    pub fn sense_fraction(&self) -> f64 {
        self.sense_count as f64 / self.n_tokens as f64
    }

    pub fn type_fraction(&self) -> f64 {
        self.type_count as f64 / self.n_tokens as f64
    }

    pub fn jargon_fraction(&self) -> f64 {
        (self.sense_count + self.type_count) as f64 / self.n_tokens as f64
    }
}

/// Scores a document against one or more fields.
///
/// With several fields the jargon counts against each are summed over the
/// same token count, and a token's prefix score is its best over the fields.
pub fn score_document(
    doc: &DocumentTokens,
    fields: &[&str],
    tables: ScoreTables<'_>,
    cutoff: f64,
) -> Result<DocumentJargonScore> {
    if doc.tokens.is_empty() {
        return Err(Error::EmptyDocument(doc.doc_id.clone()));
    }
    if fields.is_empty() {
        return Err(Error::InvalidParameter(
            "a document is scored against at least one field",
        ));
    }
    let (mut sense_count, mut type_count) = (0, 0);
    for field in fields {
        for token in &doc.tokens {
            match tables.classify(token, field, cutoff) {
                TokenClass::SenseJargon => sense_count += 1,
                TokenClass::TypeJargon => type_count += 1,
                TokenClass::None => {}
            }
        }
    }
    let prefix_max = PrefixMax::new(doc.tokens.iter().map(|token| {
        fields
            .iter()
            .filter_map(|f| tables.best_score(token, f))
            .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.max(s))))
    }));
    Ok(DocumentJargonScore {
        doc_id: doc.doc_id.clone(),
        fields: fields.iter().map(|f| String::from(*f)).collect(),
        n_tokens: doc.tokens.len(),
        sense_count,
        type_count,
        prefix_max,
    })
}

/// A scored single-field document placed in a venue class.
#[derive(Debug, Clone)]
pub struct VenueScoredDocument<'a> {
    pub field: &'a str,
    pub venue_class: VenueClass,
    pub score: &'a DocumentJargonScore,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AudienceRow {
    pub field: String,
    pub venue_class: VenueClass,
    pub jargon_fraction: MeanCi,
}

fn group<'a>(docs: &'a [VenueScoredDocument<'a>]) -> BTreeMap<(&'a str, VenueClass), Vec<&'a DocumentJargonScore>> {
    let mut groups: BTreeMap<(&str, VenueClass), Vec<&DocumentJargonScore>> = BTreeMap::new();
    for d in docs.iter().filter(|d| d.venue_class != VenueClass::Other) {
        groups.entry((d.field, d.venue_class)).or_default().push(d.score);
    }
    groups
}

/// Mean jargon fraction with a 95% interval per (field, venue class).
/// Documents in `Other` venues are left out; empty groups never appear.
pub fn audience_design_table(docs: &[VenueScoredDocument<'_>]) -> Vec<AudienceRow> {
    group(docs)
        .into_iter()
        .filter_map(|((field, venue_class), scores)| {
            let fractions: Vec<f64> = scores.iter().map(|s| s.jargon_fraction()).collect();
            Some(AudienceRow {
                field: String::from(field),
                venue_class,
                jargon_fraction: mean_ci95(&fractions)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub field: String,
    pub venue_class: VenueClass,
    pub m: usize,
    pub prefix_max: MeanCi,
}

/// Expected prefix maximum per (field, venue class) at each `m`. Documents
/// without any scored token in the prefix count as [`SCORE_FLOOR`].
pub fn expected_prefix_max_curve(docs: &[VenueScoredDocument<'_>], m_grid: &[usize]) -> Vec<CurvePoint> {
    let mut out = Vec::new();
    for ((field, venue_class), scores) in group(docs) {
        for &m in m_grid {
            let values: Vec<f64> = scores
                .iter()
                .map(|s| s.prefix_max.at(m).unwrap_or(SCORE_FLOOR))
                .collect();
            if let Some(ci) = mean_ci95(&values) {
                out.push(CurvePoint {
                    field: String::from(field),
                    venue_class,
                    m,
                    prefix_max: ci,
                });
            }
        }
    }
    out
}

/// Default token-position grid 1..=50.
pub fn default_m_grid() -> Vec<usize> {
    (1..=50).collect()
}
