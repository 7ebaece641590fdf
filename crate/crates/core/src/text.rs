//! Whole-word tokenization.
//!
//! Text is NFC-normalized and lowercased, then split at every character that
//! is neither alphanumeric nor a combining mark. Runs made only of numeric
//! characters are dropped before positions are assigned, so positions index
//! countable words.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub position: usize,
}

/// Word → lemma lookup. Words missing from the table are their own lemma.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaTable {
    map: BTreeMap<String, String>,
}

impl LemmaTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, word: impl Into<String>, lemma: impl Into<String>) {
        self.map.insert(word.into(), lemma.into());
    }

    pub fn lemma<'a>(&'a self, word: &'a str) -> &'a str {
        self.map.get(word).map(String::as_str).unwrap_or(word)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.map.contains_key(word)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(w, l)| (w.as_str(), l.as_str()))
    }

    /// Keeps only the entries whose word satisfies `keep`.
    pub fn restricted(&self, mut keep: impl FnMut(&str) -> bool) -> Self {
        Self {
            map: self
                .map
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, l)| (w.clone(), l.clone()))
                .collect(),
        }
    }
}

impl<W: Into<String>, L: Into<String>> FromIterator<(W, L)> for LemmaTable {
    fn from_iter<I: IntoIterator<Item = (W, L)>>(iter: I) -> Self {
        Self {
            map: iter.into_iter().map(|(w, l)| (w.into(), l.into())).collect(),
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining_mark(c)
}

fn is_countable(word: &str) -> bool {
    word.chars().any(|c| !c.is_numeric())
}

/// Lowercased countable words of `text`, in order.
pub fn words(text: &str) -> Vec<String> {
    let normalized: String = text.nfc().collect();
    let lowered = normalized.to_lowercase();
    lowered
        .split(|c: char| !is_word_char(c))
        .filter(|w| !w.is_empty() && is_countable(w))
        .map(String::from)
        .collect()
}

pub fn tokenize(text: &str) -> Vec<Token> {
    tokenize_with(text, &LemmaTable::default())
}

pub fn tokenize_with(text: &str, lemmas: &LemmaTable) -> Vec<Token> {
    words(text)
        .into_iter()
        .enumerate()
        .map(|(position, surface)| Token {
            lemma: String::from(lemmas.lemma(&surface)),
            surface,
            position,
        })
        .collect()
}
