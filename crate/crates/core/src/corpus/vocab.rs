use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::CountStats;
use crate::text::LemmaTable;

/// Thresholds for the widely-used target vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct VocabularySpec {
    /// Words at or above this percentile of the word-frequency distribution
    /// qualify (nearest-rank percentile, in (0, 100]).
    pub frequency_percentile: f64,
    /// Minimum fraction of venues a word must appear in, in (0, 1].
    pub venue_coverage_fraction: f64,
    pub stopwords: BTreeSet<String>,
    /// Words the substitute generator splits into several pieces.
    pub excluded_words: BTreeSet<String>,
}

impl Default for VocabularySpec {
    fn default() -> Self {
        Self {
            frequency_percentile: 98.0,
            venue_coverage_fraction: 0.5,
            stopwords: BTreeSet::new(),
            excluded_words: BTreeSet::new(),
        }
    }
}

/// Qualifying words and the lemma each collapses to.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    words: BTreeMap<String, String>,
}

impl Vocabulary {
    pub fn from_words<W: Into<String>, L: Into<String>>(words: impl IntoIterator<Item = (W, L)>) -> Self {
        Self {
            words: words.into_iter().map(|(w, l)| (w.into(), l.into())).collect(),
        }
    }

    pub fn lemmas(&self) -> BTreeSet<&str> {
        self.words.values().map(String::as_str).collect()
    }

    pub fn contains_lemma(&self, lemma: &str) -> bool {
        self.words.values().any(|l| l == lemma)
    }

    pub fn words(&self) -> impl Iterator<Item = (&str, &str)> {
        self.words.iter().map(|(w, l)| (w.as_str(), l.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Lemma table restricted to vocabulary words; every other word stays
    /// unlemmatized.
    pub fn lemma_table(&self) -> LemmaTable {
        self.words.iter().map(|(w, l)| (w.clone(), l.clone())).collect()
    }
}

/// Nearest-rank percentile of `sorted` (ascending, nonempty).
fn nearest_rank(sorted: &[u64], percentile: f64) -> u64 {
    let n = sorted.len();
    let rank = libm::ceil(percentile * n as f64 / 100.0) as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Selects frequent words that appear in enough venues, minus stopwords and
/// excluded words, and collapses them through `lemmas`.
///
/// An empty result means the thresholds were unsatisfiable for this corpus;
/// callers decide how loudly to report it.
pub fn select_vocabulary(stats: &CountStats, spec: &VocabularySpec, lemmas: &LemmaTable) -> Vocabulary {
    if stats.word_counts.is_empty() || stats.n_venues() == 0 {
        return Vocabulary::default();
    }
    let mut counts: Vec<u64> = stats.word_counts.values().copied().collect();
    counts.sort_unstable();
    let threshold = nearest_rank(&counts, spec.frequency_percentile);
    let n_venues = stats.n_venues() as f64;

    let words = stats
        .word_counts
        .iter()
        .filter(|(_, &n)| n >= threshold)
        .filter(|(w, _)| !spec.stopwords.contains(*w) && !spec.excluded_words.contains(*w))
        .filter(|(w, _)| stats.venue_presence(w) as f64 / n_venues >= spec.venue_coverage_fraction)
        .map(|(w, _)| (w.clone(), lemmas.lemma(w).to_string()))
        .collect();
    Vocabulary { words }
}
