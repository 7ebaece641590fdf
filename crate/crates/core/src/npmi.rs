//! Normalized pointwise mutual information between word types and fields.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::CountStats;
use crate::{Error, Result};

/// Occurrences a term needs inside a field before it is scored there.
pub const DEFAULT_MIN_COUNT: u64 = 20;

/// NPMI of an event (word or sense occurrence) with a field, from counts.
///
/// `in_field` occurrences inside a field of `field_tokens` tokens, `overall`
/// occurrences among `total` tokens:
/// `ln(P(t|f) / P(t)) / -ln P(t,f)` with `P(t,f) = in_field / total`.
pub fn npmi_from_counts(in_field: u64, field_tokens: u64, overall: u64, total: u64) -> Result<f64> {
    if in_field == 0 || field_tokens == 0 || overall == 0 || total == 0 {
        return Err(Error::InvalidCounts("all counts must be positive"));
    }
    if in_field > field_tokens || in_field > overall || overall > total || field_tokens > total {
        return Err(Error::InvalidCounts("inconsistent counts"));
    }
    if in_field == total {
        return Err(Error::DegenerateProbability);
    }
    let p_given_field = in_field as f64 / field_tokens as f64;
    let p_overall = overall as f64 / total as f64;
    let p_joint = in_field as f64 / total as f64;
    Ok(libm::log(p_given_field / p_overall) / -libm::log(p_joint))
}

/// Type NPMI of `lemma` in `field`; `Ok(None)` below `min_count`.
pub fn type_npmi(stats: &CountStats, field: &str, lemma: &str, min_count: u64) -> Result<Option<f64>> {
    let in_field = stats.word_field_count(lemma, field);
    if in_field == 0 || in_field < min_count {
        return Ok(None);
    }
    npmi_from_counts(
        in_field,
        stats.field_tokens(field),
        stats.word_count(lemma),
        stats.total_tokens,
    )
    .map(Some)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredTerm {
    pub score: f64,
    pub count_in_field: u64,
}

/// Type NPMI per (field, lemma), holding only terms that met `min_count`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TypeScoreTable {
    scores: BTreeMap<String, BTreeMap<String, ScoredTerm>>,
    pub min_count: u64,
}

impl TypeScoreTable {
    pub fn new(min_count: u64) -> Self {
        Self {
            scores: BTreeMap::new(),
            min_count,
        }
    }

    pub fn from_counts(stats: &CountStats, min_count: u64) -> Result<Self> {
        let mut table = Self::new(min_count);
        for (lemma, per_field) in &stats.word_field_counts {
            for (field, &n) in per_field {
                if n == 0 || n < min_count {
                    continue;
                }
                let score = npmi_from_counts(
                    n,
                    stats.field_tokens(field),
                    stats.word_count(lemma),
                    stats.total_tokens,
                )?;
                table.insert(field, lemma, score, n);
            }
        }
        Ok(table)
    }

    pub fn insert(&mut self, field: &str, lemma: &str, score: f64, count_in_field: u64) {
        self.scores
            .entry(String::from(field))
            .or_default()
            .insert(String::from(lemma), ScoredTerm { score, count_in_field });
    }

    pub fn get(&self, field: &str, lemma: &str) -> Option<f64> {
        self.term(field, lemma).map(|t| t.score)
    }

    pub fn term(&self, field: &str, lemma: &str) -> Option<&ScoredTerm> {
        self.scores.get(field)?.get(lemma)
    }

    pub fn fields(&self) -> impl Iterator<Item = &str> {
        self.scores.keys().map(String::as_str)
    }

    /// Scored lemmas of `field`, in lemma order.
    pub fn field_terms(&self, field: &str) -> impl Iterator<Item = (&str, &ScoredTerm)> {
        self.scores
            .get(field)
            .into_iter()
            .flat_map(|m| m.iter().map(|(l, t)| (l.as_str(), t)))
    }

    /// All rows ordered by field, then lemma.
    pub fn rows(&self) -> impl Iterator<Item = (&str, &str, &ScoredTerm)> {
        self.scores
            .iter()
            .flat_map(|(f, m)| m.iter().map(move |(l, t)| (f.as_str(), l.as_str(), t)))
    }

    pub fn len(&self) -> usize {
        self.scores.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Mean of negative-zeroed scores over the field's scored lemmas.
pub fn field_distinctiveness(table: &TypeScoreTable, field: &str) -> Option<f64> {
    let adjusted: Vec<f64> = table.field_terms(field).map(|(_, t)| t.score.max(0.0)).collect();
    crate::stats::mean(&adjusted)
}

/// The `k` highest-scoring lemmas of `field`, ties broken by lemma.
pub fn top_terms(table: &TypeScoreTable, field: &str, k: usize) -> Vec<(String, f64)> {
    let mut terms: Vec<(&str, f64)> = table.field_terms(field).map(|(l, t)| (l, t.score)).collect();
    terms.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    terms.into_iter().take(k).map(|(l, s)| (String::from(l), s)).collect()
}
