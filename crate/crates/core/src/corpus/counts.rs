use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};

use super::{Document, LabelLevel};
use crate::text::{tokenize_with, LemmaTable};
use crate::{Error, Result};

/// Token counts feeding type NPMI and vocabulary selection.
///
/// Every map is ordered, so two stats built from the same documents compare
/// equal regardless of the order or sharding the documents arrived in.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountStats {
    /// Tokens over foreground and background documents together.
    pub total_tokens: u64,
    /// Foreground tokens per label; a multi-label document adds its tokens
    /// to each of its labels.
    pub tokens_per_field: BTreeMap<String, u64>,
    pub word_counts: BTreeMap<String, u64>,
    /// word → field → count
    pub word_field_counts: BTreeMap<String, BTreeMap<String, u64>>,
    pub venue_doc_counts: BTreeMap<String, u64>,
    /// word → venues whose foreground documents contain it
    pub word_venues: BTreeMap<String, BTreeSet<String>>,
    pub documents: u64,
}

impl CountStats {
    pub fn word_count(&self, word: &str) -> u64 {
        self.word_counts.get(word).copied().unwrap_or(0)
    }

    pub fn word_field_count(&self, word: &str, field: &str) -> u64 {
        self.word_field_counts
            .get(word)
            .and_then(|m| m.get(field))
            .copied()
            .unwrap_or(0)
    }

    pub fn field_tokens(&self, field: &str) -> u64 {
        self.tokens_per_field.get(field).copied().unwrap_or(0)
    }

    pub fn fields(&self) -> impl Iterator<Item = &str> {
        self.tokens_per_field.keys().map(String::as_str)
    }

    /// Number of distinct venues containing `word`.
    pub fn venue_presence(&self, word: &str) -> usize {
        self.word_venues.get(word).map_or(0, BTreeSet::len)
    }

    pub fn n_venues(&self) -> usize {
        self.venue_doc_counts.len()
    }

    /// Adds `other` into `self`. Integer addition and set union make this
    /// associative and commutative.
    pub fn merge(&mut self, other: &CountStats) {
        self.total_tokens += other.total_tokens;
        self.documents += other.documents;
        add_all(&mut self.tokens_per_field, &other.tokens_per_field);
        add_all(&mut self.word_counts, &other.word_counts);
        add_all(&mut self.venue_doc_counts, &other.venue_doc_counts);
        for (word, per_field) in &other.word_field_counts {
            add_all(self.word_field_counts.entry(word.clone()).or_default(), per_field);
        }
        for (word, venues) in &other.word_venues {
            self.word_venues
                .entry(word.clone())
                .or_default()
                .extend(venues.iter().cloned());
        }
    }

    /// Re-keys word statistics through `lemmas`.
    ///
    /// Counts are additive over words, so this equals counting the corpus
    /// with `lemmas` applied during tokenization.
    pub fn relemmatize(&self, lemmas: &LemmaTable) -> CountStats {
        let mut out = CountStats {
            total_tokens: self.total_tokens,
            tokens_per_field: self.tokens_per_field.clone(),
            venue_doc_counts: self.venue_doc_counts.clone(),
            documents: self.documents,
            ..CountStats::default()
        };
        for (word, &n) in &self.word_counts {
            *out.word_counts.entry(lemmas.lemma(word).to_string()).or_default() += n;
        }
        for (word, per_field) in &self.word_field_counts {
            add_all(
                out.word_field_counts.entry(lemmas.lemma(word).to_string()).or_default(),
                per_field,
            );
        }
        for (word, venues) in &self.word_venues {
            out.word_venues
                .entry(lemmas.lemma(word).to_string())
                .or_default()
                .extend(venues.iter().cloned());
        }
        out
    }
}

fn add_all(into: &mut BTreeMap<String, u64>, from: &BTreeMap<String, u64>) {
    for (k, &v) in from {
        *into.entry(k.clone()).or_default() += v;
    }
}

/// Streaming builder for [`CountStats`] that rejects duplicate document ids,
/// including duplicates split across merged shards.
#[derive(Debug, Clone)]
pub struct CountAccumulator<'a> {
    stats: CountStats,
    seen: BTreeSet<String>,
    lemmas: &'a LemmaTable,
    level: LabelLevel,
}

impl<'a> CountAccumulator<'a> {
    pub fn new(lemmas: &'a LemmaTable, level: LabelLevel) -> Self {
        Self {
            stats: CountStats::default(),
            seen: BTreeSet::new(),
            lemmas,
            level,
        }
    }

    pub fn add(&mut self, doc: &Document) -> Result<()> {
        if !self.seen.insert(doc.doc_id.clone()) {
            return Err(Error::DuplicateDocument(doc.doc_id.clone()));
        }
        let stats = &mut self.stats;
        stats.documents += 1;
        let tokens = tokenize_with(&doc.text, self.lemmas);
        stats.total_tokens += tokens.len() as u64;

        let labels: BTreeSet<&str> = doc.labels(self.level).iter().map(String::as_str).collect();
        for label in &labels {
            *stats.tokens_per_field.entry((*label).to_string()).or_default() += tokens.len() as u64;
        }
        for token in &tokens {
            *stats.word_counts.entry(token.lemma.clone()).or_default() += 1;
            if !labels.is_empty() {
                let per_field = stats.word_field_counts.entry(token.lemma.clone()).or_default();
                for label in &labels {
                    *per_field.entry((*label).to_string()).or_default() += 1;
                }
            }
        }

        if doc.is_background() {
            return Ok(());
        }
        if let Some(venue) = &doc.venue {
            *stats.venue_doc_counts.entry(venue.clone()).or_default() += 1;
            let distinct: BTreeSet<&str> = tokens.iter().map(|t| t.lemma.as_str()).collect();
            for word in distinct {
                stats
                    .word_venues
                    .entry(word.to_string())
                    .or_default()
                    .insert(venue.clone());
            }
        }
        Ok(())
    }

    pub fn merge(&mut self, other: CountAccumulator<'_>) -> Result<()> {
        if let Some(dup) = self.seen.intersection(&other.seen).next() {
            return Err(Error::DuplicateDocument(dup.clone()));
        }
        self.seen.extend(other.seen);
        self.stats.merge(&other.stats);
        Ok(())
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.seen.iter().map(String::as_str)
    }

    pub fn finish(self) -> CountStats {
        self.stats
    }
}

/// Counts a document stream in one pass.
pub fn accumulate_counts<'d>(
    docs: impl IntoIterator<Item = &'d Document>,
    lemmas: &LemmaTable,
    level: LabelLevel,
) -> Result<CountStats> {
    let mut acc = CountAccumulator::new(lemmas, level);
    for doc in docs {
        acc.add(doc)?;
    }
    Ok(acc.finish())
}
