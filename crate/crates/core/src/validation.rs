//! Validation of word-level scores against a field-labeled dictionary.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::npmi::TypeScoreTable;
use crate::senses::SenseScoreTable;
use crate::stats::{mean, sample_sd, student_t_two_sided_p};
use crate::{Error, Result};

/// Word-level scores per (field, lemma).
pub trait WordScores {
    fn word_score(&self, field: &str, lemma: &str) -> Option<f64>;
    /// Fields in which `lemma` has a word-level score, in order.
    fn scored_fields(&self, lemma: &str) -> Vec<&str>;
}

impl WordScores for TypeScoreTable {
    fn word_score(&self, field: &str, lemma: &str) -> Option<f64> {
        self.get(field, lemma)
    }

    fn scored_fields(&self, lemma: &str) -> Vec<&str> {
        self.fields().filter(|f| self.get(f, lemma).is_some()).collect()
    }
}

/// Sense tables answer with the most frequent sense's score.
impl WordScores for SenseScoreTable {
    fn word_score(&self, field: &str, lemma: &str) -> Option<f64> {
        self.word_level(field, lemma).ok().flatten()
    }

    fn scored_fields(&self, lemma: &str) -> Vec<&str> {
        self.fields().filter(|f| self.word_score(f, lemma).is_some()).collect()
    }
}

impl WordScores for BTreeMap<(String, String), f64> {
    fn word_score(&self, field: &str, lemma: &str) -> Option<f64> {
        self.get(&(String::from(field), String::from(lemma))).copied()
    }

    fn scored_fields(&self, lemma: &str) -> Vec<&str> {
        self.keys()
            .filter(|(_, l)| l == lemma)
            .map(|(f, _)| f.as_str())
            .collect()
    }
}

/// (lemma, subfield) pairs a dictionary marks as discipline-specific.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledLexicon {
    entries: BTreeSet<(String, String)>,
}

impl LabeledLexicon {
    pub fn insert(&mut self, lemma: impl Into<String>, subfield: impl Into<String>) {
        self.entries.insert((lemma.into(), subfield.into()));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// (lemma, subfield) pairs in order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(l, s)| (l.as_str(), s.as_str()))
    }
}

impl<L: Into<String>, S: Into<String>> FromIterator<(L, S)> for LabeledLexicon {
    fn from_iter<I: IntoIterator<Item = (L, S)>>(iter: I) -> Self {
        let mut lex = Self::default();
        for (l, s) in iter {
            lex.insert(l, s);
        }
        lex
    }
}

/// Builds a lexicon from per-definition field labels.
///
/// Parent-field labels expand to all of their subfields. Words whose
/// definitions are all labeled with one and the same field are dropped, as
/// are labels outside the hierarchy.
#[derive(Debug, Clone, Default)]
pub struct LexiconBuilder {
    /// parent field → subfields
    hierarchy: BTreeMap<String, BTreeSet<String>>,
    definitions: BTreeMap<String, Vec<BTreeSet<String>>>,
}

impl LexiconBuilder {
    pub fn new(hierarchy: BTreeMap<String, BTreeSet<String>>) -> Self {
        Self {
            hierarchy,
            definitions: BTreeMap::new(),
        }
    }

    pub fn add_definition<S: Into<String>>(&mut self, lemma: &str, labels: impl IntoIterator<Item = S>) {
        self.definitions
            .entry(String::from(lemma))
            .or_default()
            .push(labels.into_iter().map(Into::into).collect());
    }

    fn expand(&self, label: &str) -> Vec<String> {
        if let Some(subs) = self.hierarchy.get(label) {
            return subs.iter().cloned().collect();
        }
        if self.hierarchy.values().any(|subs| subs.contains(label)) {
            return alloc::vec![String::from(label)];
        }
        Vec::new()
    }

    pub fn build(&self) -> LabeledLexicon {
        let mut lex = LabeledLexicon::default();
        for (lemma, defs) in &self.definitions {
            let all: BTreeSet<&String> = defs.iter().flatten().collect();
            let single_field = all.len() == 1 && defs.iter().all(|d| !d.is_empty());
            if single_field {
                continue;
            }
            for label in all {
                for sub in self.expand(label) {
                    lex.insert(lemma.clone(), sub);
                }
            }
        }
        lex
    }
}

fn labeled_scores<S: WordScores + ?Sized>(lexicon: &LabeledLexicon, scores: &S) -> Result<Vec<Option<f64>>> {
    if lexicon.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    Ok(lexicon.iter().map(|(l, f)| scores.word_score(f, l)).collect())
}

fn recall_of(scores: &[Option<f64>], threshold: f64) -> f64 {
    let hit = scores.iter().filter(|s| s.is_some_and(|s| s > threshold)).count();
    hit as f64 / scores.len() as f64
}

/// Fraction of lexicon pairs scored above `threshold`; unscored pairs are
/// misses.
pub fn recall_at_threshold<S: WordScores + ?Sized>(
    lexicon: &LabeledLexicon,
    scores: &S,
    threshold: f64,
) -> Result<f64> {
    Ok(recall_of(&labeled_scores(lexicon, scores)?, threshold))
}

/// Thresholds 0.00, 0.01, ..., 1.00.
pub fn default_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// Trapezoidal area under recall over `grid`, divided by the grid span.
pub fn recall_auc<S: WordScores + ?Sized>(lexicon: &LabeledLexicon, scores: &S, grid: &[f64]) -> Result<f64> {
    if grid.len() < 2
        || grid
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater))
    {
        return Err(Error::InvalidGrid);
    }
    let labeled = labeled_scores(lexicon, scores)?;
    let recalls: Vec<f64> = grid.iter().map(|&t| recall_of(&labeled, t)).collect();
    let area: f64 = grid
        .windows(2)
        .zip(recalls.windows(2))
        .map(|(x, r)| (x[1] - x[0]) * (r[0] + r[1]) / 2.0)
        .sum();
    Ok(area / (grid[grid.len() - 1] - grid[0]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairedTest {
    Statistic {
        t: f64,
        p: f64,
        df: f64,
    },
    /// Nonzero differences with zero variance: t is undefined.
    Degenerate {
        mean_difference: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairedComparison {
    pub n: usize,
    pub differences: Vec<f64>,
    pub test: PairedTest,
}

/// Paired t test on score differences.
pub fn paired_t_test(differences: &[f64]) -> Result<PairedTest> {
    let n = differences.len();
    if n < 2 {
        return Err(Error::TooFewPairs(n));
    }
    let m = mean(differences).unwrap_or(0.0);
    let sd = sample_sd(differences).unwrap_or(0.0);
    let df = (n - 1) as f64;
    if sd == 0.0 {
        return Ok(if m == 0.0 {
            PairedTest::Statistic { t: 0.0, p: 1.0, df }
        } else {
            PairedTest::Degenerate { mean_difference: m }
        });
    }
    let t = m / (sd / libm::sqrt(n as f64));
    Ok(PairedTest::Statistic {
        t,
        p: student_t_two_sided_p(t, df),
        df,
    })
}

/// Compares each labeled pair's score with the same word's score in one
/// uniformly drawn other field where it is scored. Pairs without a score in
/// their labeled field or without another scored field are skipped.
pub fn paired_score_comparison<S: WordScores + ?Sized>(
    lexicon: &LabeledLexicon,
    scores: &S,
    seed: u64,
) -> Result<PairedComparison> {
    if lexicon.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut differences = Vec::new();
    for (lemma, field) in lexicon.iter() {
        let Some(labeled) = scores.word_score(field, lemma) else {
            continue;
        };
        let others: Vec<&str> = scores
            .scored_fields(lemma)
            .into_iter()
            .filter(|f| *f != field)
            .collect();
        if others.is_empty() {
            continue;
        }
        let other = others[rng.random_range(0..others.len())];
        if let Some(s) = scores.word_score(other, lemma) {
            differences.push(labeled - s);
        }
    }
    let test = paired_t_test(&differences)?;
    Ok(PairedComparison {
        n: differences.len(),
        differences,
        test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn table(rows: &[(&str, &str, f64)]) -> BTreeMap<(String, String), f64> {
        rows.iter()
            .map(|(f, l, s)| ((f.to_string(), l.to_string()), *s))
            .collect()
    }

    fn lexicon(pairs: &[(&str, &str)]) -> LabeledLexicon {
        pairs.iter().copied().collect()
    }

    #[test]
    fn recall_fraction() {
        let scores = table(&[("f", "w1", 0.3), ("f", "w2", 0.05)]);
        let lex = lexicon(&[("w1", "f"), ("w2", "f")]);
        assert_eq!(recall_at_threshold(&lex, &scores, 0.1).unwrap(), 0.5);
        assert_eq!(recall_at_threshold(&lex, &scores, -1.0).unwrap(), 1.0);
        assert_eq!(recall_at_threshold(&lex, &scores, 0.9).unwrap(), 0.0);
        assert!(matches!(
            recall_at_threshold(&LabeledLexicon::default(), &scores, 0.1),
            Err(Error::EmptyLexicon)
        ));
    }

    #[test]
    fn unscored_pair_is_a_miss() {
        let scores = table(&[("f", "w1", 0.3)]);
        let lex = lexicon(&[("w1", "f"), ("w1", "g")]);
        assert_eq!(recall_at_threshold(&lex, &scores, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn auc_constant_recall() {
        let scores = table(&[("f", "a", 2.0), ("f", "b", -2.0)]);
        let lex = lexicon(&[("a", "f"), ("b", "f")]);
        assert!((recall_auc(&lex, &scores, &default_grid()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn auc_step_function() {
        let scores = table(&[("f", "a", 0.5)]);
        let lex = lexicon(&[("a", "f")]);
        let auc = recall_auc(&lex, &scores, &default_grid()).unwrap();
        assert!((auc - 0.5).abs() <= 0.01);
    }

    #[test]
    fn auc_needs_a_grid() {
        let scores = table(&[("f", "a", 0.5)]);
        let lex = lexicon(&[("a", "f")]);
        assert_eq!(recall_auc(&lex, &scores, &[0.0]), Err(Error::InvalidGrid));
        assert_eq!(recall_auc(&lex, &scores, &[0.5, 0.2]), Err(Error::InvalidGrid));
    }

    #[test]
    fn auc_ignores_unlabeled_words() {
        let lex = lexicon(&[("a", "f")]);
        let small = table(&[("f", "a", 0.37)]);
        let big = table(&[("f", "a", 0.37), ("f", "zzz", 0.9), ("g", "a", 0.1)]);
        assert_eq!(
            recall_auc(&lex, &small, &default_grid()).unwrap(),
            recall_auc(&lex, &big, &default_grid()).unwrap()
        );
    }

    #[test]
    fn t_test_hand_values() {
        match paired_t_test(&[0.2, 0.1, 0.3]).unwrap() {
            PairedTest::Statistic { t, p, df } => {
                assert!((t - libm::sqrt(12.0)).abs() < 1e-12);
                assert!((t - 3.464).abs() < 1e-3);
                assert_eq!(df, 2.0);
                assert!((p - (1.0 - t / libm::sqrt(2.0 + t * t))).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            paired_t_test(&[0.0, 0.0, 0.0]).unwrap(),
            PairedTest::Statistic {
                t: 0.0,
                p: 1.0,
                df: 2.0
            }
        );
        assert!(matches!(
            paired_t_test(&[0.1, 0.1, 0.1, 0.1]).unwrap(),
            PairedTest::Degenerate { .. }
        ));
        assert_eq!(paired_t_test(&[0.4]), Err(Error::TooFewPairs(1)));
    }

    #[test]
    fn paired_comparison_draws_other_fields() {
        let scores = table(&[
            ("f", "a", 0.5),
            ("g", "a", 0.1),
            ("f", "b", 0.6),
            ("h", "b", 0.0),
            ("f", "c", 0.4),
        ]);
        let lex = lexicon(&[("a", "f"), ("b", "f"), ("c", "f")]);
        let cmp = paired_score_comparison(&lex, &scores, 1).unwrap();
        assert_eq!(cmp.n, 2);
        assert!((cmp.differences[0] - 0.4).abs() < 1e-15);
        assert!((cmp.differences[1] - 0.6).abs() < 1e-15);
        assert_eq!(cmp, paired_score_comparison(&lex, &scores, 1).unwrap());
    }

    #[test]
    fn builder_expands_and_filters() {
        let mut hierarchy = BTreeMap::new();
        hierarchy.insert(
            "physics".to_string(),
            ["optics".to_string(), "particle".to_string()].into(),
        );
        hierarchy.insert("statistics".to_string(), ["econometrics".to_string()].into());
        let mut b = LexiconBuilder::new(hierarchy);
        b.add_definition("bias", ["physics"]);
        b.add_definition("bias", ["econometrics"]);
        b.add_definition("boson", ["particle"]);
        b.add_definition("ensemble", ["optics"]);
        b.add_definition("ensemble", Vec::<&str>::new());
        let lex = b.build();
        let pairs: Vec<(&str, &str)> = lex.iter().collect();
        assert_eq!(
            pairs,
            vec![
                ("bias", "econometrics"),
                ("bias", "optics"),
                ("bias", "particle"),
                ("ensemble", "optics"),
            ]
        );
    }

    proptest::proptest! {
        #[test]
        fn recall_non_increasing(scores in proptest::collection::vec(-1.0f64..1.0, 1..30), a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let rows: Vec<(String, String)> = (0..scores.len()).map(|i| ("f".to_string(), alloc::format!("w{i}"))).collect();
            let table: BTreeMap<(String, String), f64> = rows.iter().cloned().zip(scores.iter().copied()).collect();
            let lex: LabeledLexicon = rows.iter().map(|(f, l)| (l.clone(), f.clone())).collect();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            proptest::prop_assert!(recall_at_threshold(&lex, &table, hi).unwrap() <= recall_at_threshold(&lex, &table, lo).unwrap());
        }
    }
}
