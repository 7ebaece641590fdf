//! Sense NPMI: the type NPMI formula applied to occurrences of one induced
//! sense, over the same token event space.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::CountStats;
use crate::npmi::{npmi_from_counts, ScoredTerm, TypeScoreTable};
use crate::wsi::{SenseAssignment, SenseId};
use crate::{Error, Result};

/// Word-level sense scores below this are left out of the gain table.
pub const GAIN_MIN_SENSE_SCORE: f64 = 0.1;

/// Occurrence counts per sense, overall and per field label.
///
/// Unseen occurrences are counted like any other sense so that the per-sense
/// counts of a lemma always add up to its occurrences.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SenseCounts {
    overall: BTreeMap<String, BTreeMap<SenseId, u64>>,
    in_field: BTreeMap<String, BTreeMap<SenseId, BTreeMap<String, u64>>>,
}

impl SenseCounts {
    /// `labels` returns the field labels of a document (empty for background
    /// documents) or `None` for an unknown id.
    pub fn accumulate<'a, 'l>(
        assignments: impl IntoIterator<Item = &'a SenseAssignment>,
        labels: impl Fn(&str) -> Option<&'l [String]>,
    ) -> Result<Self> {
        let mut counts = Self::default();
        for a in assignments {
            let doc_labels = labels(&a.doc_id).ok_or_else(|| Error::UnknownDocument(a.doc_id.clone()))?;
            counts.add(a, doc_labels);
        }
        Ok(counts)
    }

    pub fn add(&mut self, assignment: &SenseAssignment, labels: &[String]) {
        *self
            .overall
            .entry(assignment.target_lemma.clone())
            .or_default()
            .entry(assignment.sense)
            .or_default() += 1;
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.is_empty() {
            return;
        }
        let per_field = self
            .in_field
            .entry(assignment.target_lemma.clone())
            .or_default()
            .entry(assignment.sense)
            .or_default();
        for label in distinct {
            *per_field.entry(label.clone()).or_default() += 1;
        }
    }

    pub fn overall(&self, lemma: &str, sense: SenseId) -> u64 {
        self.overall
            .get(lemma)
            .and_then(|m| m.get(&sense))
            .copied()
            .unwrap_or(0)
    }

    pub fn in_field(&self, lemma: &str, sense: SenseId, field: &str) -> u64 {
        self.in_field
            .get(lemma)
            .and_then(|m| m.get(&sense))
            .and_then(|m| m.get(field))
            .copied()
            .unwrap_or(0)
    }

    /// Sum over senses (Unseen included) of `lemma`'s occurrences in `field`.
    pub fn lemma_in_field(&self, lemma: &str, field: &str) -> u64 {
        self.in_field
            .get(lemma)
            .map_or(0, |m| m.values().filter_map(|f| f.get(field)).sum())
    }

    pub fn lemma_total(&self, lemma: &str) -> u64 {
        self.overall.get(lemma).map_or(0, |m| m.values().sum())
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.overall.keys().map(String::as_str)
    }

    /// The induced sense with the most occurrences corpus-wide, lowest
    /// index on ties.
    pub fn most_frequent_sense(&self, lemma: &str) -> Option<usize> {
        self.overall
            .get(lemma)?
            .iter()
            .filter_map(|(id, &n)| id.index().map(|i| (i, n)))
            .fold(None, |best: Option<(usize, u64)>, (i, n)| match best {
                Some((_, bn)) if bn >= n => best,
                _ => Some((i, n)),
            })
            .map(|(i, _)| i)
    }
}

/// Sense NPMI of induced sense `sense` of `lemma` in `field`; `Ok(None)` for
/// unseen senses and below `min_count`.
pub fn sense_npmi(
    stats: &CountStats,
    counts: &SenseCounts,
    field: &str,
    lemma: &str,
    sense: SenseId,
    min_count: u64,
) -> Result<Option<f64>> {
    if sense == SenseId::Unseen {
        return Ok(None);
    }
    let in_field = counts.in_field(lemma, sense, field);
    if in_field == 0 || in_field < min_count {
        return Ok(None);
    }
    npmi_from_counts(
        in_field,
        stats.field_tokens(field),
        counts.overall(lemma, sense),
        stats.total_tokens,
    )
    .map(Some)
}

/// Sense NPMI per (field, lemma, sense) plus each lemma's globally most
/// frequent sense, which stands in for the lemma at word level.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SenseScoreTable {
    scores: BTreeMap<String, BTreeMap<String, BTreeMap<usize, ScoredTerm>>>,
    most_frequent: BTreeMap<String, usize>,
    pub min_count: u64,
}

impl SenseScoreTable {
    pub fn new(min_count: u64) -> Self {
        Self {
            min_count,
            ..Self::default()
        }
    }

    pub fn from_counts(stats: &CountStats, counts: &SenseCounts, min_count: u64) -> Result<Self> {
        let mut table = Self::new(min_count);
        for (lemma, per_sense) in &counts.in_field {
            for (&sense, per_field) in per_sense {
                let Some(index) = sense.index() else { continue };
                for (field, &n) in per_field {
                    if n == 0 || n < min_count {
                        continue;
                    }
                    let score = npmi_from_counts(
                        n,
                        stats.field_tokens(field),
                        counts.overall(lemma, sense),
                        stats.total_tokens,
                    )?;
                    table.insert(field, lemma, index, score, n);
                }
            }
        }
        for lemma in counts.lemmas() {
            if let Some(i) = counts.most_frequent_sense(lemma) {
                table.set_most_frequent(lemma, i);
            }
        }
        Ok(table)
    }

    pub fn insert(&mut self, field: &str, lemma: &str, sense: usize, score: f64, count_in_field: u64) {
        self.scores
            .entry(String::from(field))
            .or_default()
            .entry(String::from(lemma))
            .or_default()
            .insert(sense, ScoredTerm { score, count_in_field });
    }

    pub fn set_most_frequent(&mut self, lemma: &str, sense: usize) {
        self.most_frequent.insert(String::from(lemma), sense);
    }

    pub fn most_frequent_sense(&self, lemma: &str) -> Option<usize> {
        self.most_frequent.get(lemma).copied()
    }

    pub fn get(&self, field: &str, lemma: &str, sense: SenseId) -> Option<f64> {
        let index = sense.index()?;
        Some(self.scores.get(field)?.get(lemma)?.get(&index)?.score)
    }

    pub fn has_senses(&self, lemma: &str) -> bool {
        self.most_frequent.contains_key(lemma)
    }

    /// Score of the lemma's most frequent sense in `field`.
    pub fn word_level(&self, field: &str, lemma: &str) -> Result<Option<f64>> {
        let sense = self
            .most_frequent_sense(lemma)
            .ok_or_else(|| Error::NoSenses(String::from(lemma)))?;
        Ok(self.get(field, lemma, SenseId::Induced(sense)))
    }

    /// Rows ordered by field, lemma, sense.
    pub fn rows(&self) -> impl Iterator<Item = (&str, &str, usize, &ScoredTerm)> {
        self.scores.iter().flat_map(|(f, lemmas)| {
            lemmas
                .iter()
                .flat_map(move |(l, senses)| senses.iter().map(move |(&i, t)| (f.as_str(), l.as_str(), i, t)))
        })
    }

    /// Scored word-level rows ordered by field, then lemma.
    pub fn word_level_rows(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.scores.iter().flat_map(move |(f, lemmas)| {
            lemmas.iter().filter_map(move |(l, senses)| {
                let i = self.most_frequent.get(l)?;
                senses.get(i).map(|t| (f.as_str(), l.as_str(), t.score))
            })
        })
    }

    pub fn fields(&self) -> impl Iterator<Item = &str> {
        self.scores.keys().map(String::as_str)
    }

    pub fn lemmas_with_senses(&self) -> impl Iterator<Item = (&str, usize)> {
        self.most_frequent.iter().map(|(l, &i)| (l.as_str(), i))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SenseGain {
    pub lemma: String,
    pub delta: f64,
    pub sense_score: f64,
    pub type_score: f64,
}

/// Lemmas whose word-level sense score exceeds 0.1 in `field`, by how much
/// it exceeds the type score (largest first, lemma order on ties).
pub fn sense_gain_table(types: &TypeScoreTable, senses: &SenseScoreTable, field: &str) -> Vec<SenseGain> {
    let mut rows: Vec<SenseGain> = types
        .field_terms(field)
        .filter_map(|(lemma, t)| {
            let s = senses.word_level(field, lemma).ok().flatten()?;
            (s > GAIN_MIN_SENSE_SCORE).then(|| SenseGain {
                lemma: String::from(lemma),
                delta: s - t.score,
                sense_score: s,
                type_score: t.score,
            })
        })
        .collect();
    rows.sort_by(|a, b| b.delta.total_cmp(&a.delta).then_with(|| a.lemma.cmp(&b.lemma)));
    rows
}

/// Mean over the field's type-scored lemmas of `max(0, T, S)`, with `S` the
/// word-level sense score where one exists.
pub fn max_distinctiveness(types: &TypeScoreTable, senses: &SenseScoreTable, field: &str) -> Option<f64> {
    let adjusted: Vec<f64> = types
        .field_terms(field)
        .map(|(lemma, t)| {
            let s = senses.word_level(field, lemma).ok().flatten();
            s.map_or(t.score, |s| s.max(t.score)).max(0.0)
        })
        .collect();
    crate::stats::mean(&adjusted)
}
