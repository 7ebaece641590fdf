//! Seeded generators for synthetic corpora with planted structure.
//!
//! Generated words are made of consonant-vowel syllables behind a one-letter
//! class prefix that never starts a syllable, so words from different
//! classes can never collide.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use jargon_core::corpus::Document;
use jargon_core::validation::LabeledLexicon;
use jargon_core::wsi::SubstituteRecord;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formats::{self, FormatError};

const SYLLABLES: [&str; 16] = [
    "ba", "ke", "li", "mo", "nu", "pa", "re", "si", "to", "vu", "da", "fe", "gi", "ho", "ju", "zo",
];

/// Class prefixes; none is the first letter of a syllable.
const FILLER: char = 'w';
const PLANTED: char = 'q';
const SUBSTITUTE: char = 'x';
const FIELD_TERM: char = 'y';

/// The `index`-th word of a class: its prefix and at least two syllables.
pub fn pseudo_word(class: char, index: usize) -> String {
    let mut s = String::from(class);
    let mut n = index;
    let mut syllables = 0;
    while n > 0 || syllables < 2 {
        s.push_str(SYLLABLES[n % SYLLABLES.len()]);
        n /= SYLLABLES.len();
        syllables += 1;
    }
    s
}

pub fn subfield_name(i: usize) -> String {
    format!("subfield{i}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlantedKind {
    /// One sense in its home field, another everywhere else.
    Polysemous,
    /// One sense, spread over all fields.
    Monosemous,
    /// Substitutes never repeat, so no sense survives the size filter.
    Noisy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedWord {
    pub word: String,
    pub kind: PlantedKind,
    pub home: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSpec {
    pub fields: usize,
    pub docs_per_field: usize,
    /// Filler tokens per document before planted words are inserted.
    pub doc_length: usize,
    pub filler_vocabulary: usize,
    pub polysemous_words: usize,
    pub monosemous_words: usize,
    pub noisy_words: usize,
    /// Occurrences of a polysemous word in its home field.
    pub home_occurrences: usize,
    /// Occurrences of a polysemous word in each other field.
    pub away_occurrences: usize,
    /// Occurrences of a monosemous or noisy word in each field.
    pub spread_occurrences: usize,
    /// Candidates per sense; each occurrence draws five of them.
    pub sense_pool: usize,
    pub venues_per_field: usize,
    pub background_docs: usize,
    pub seed: u64,
}

impl PlantedSpec {
    /// The small corpus bundled as a test fixture.
    pub fn fixture() -> Self {
        Self {
            fields: 4,
            docs_per_field: 40,
            doc_length: 25,
            filler_vocabulary: 80,
            polysemous_words: 4,
            monosemous_words: 1,
            noisy_words: 1,
            home_occurrences: 80,
            away_occurrences: 20,
            spread_occurrences: 15,
            sense_pool: 6,
            venues_per_field: 2,
            background_docs: 10,
            seed: 2024,
        }
    }
}

impl Default for PlantedSpec {
    fn default() -> Self {
        Self {
            fields: 4,
            docs_per_field: 100,
            doc_length: 30,
            filler_vocabulary: 120,
            polysemous_words: 20,
            monosemous_words: 2,
            noisy_words: 2,
            home_occurrences: 300,
            away_occurrences: 80,
            spread_occurrences: 40,
            sense_pool: 6,
            venues_per_field: 2,
            background_docs: 20,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedCorpus {
    pub fields: Vec<String>,
    pub docs: Vec<Document>,
    /// One record per planted occurrence, in (doc_id, position) order.
    pub substitutes: Vec<SubstituteRecord>,
    pub words: Vec<PlantedWord>,
    /// (polysemous word, home field) pairs.
    pub lexicon: LabeledLexicon,
}

/// A token and, for planted words, what it stands for.
type Slot = (String, Option<Occurrence>);

struct Occurrence {
    word: usize,
    pool: Option<usize>,
}

/// Generates a corpus whose planted words carry the sense structure their
/// kind describes, with matching substitute records.
pub fn planted_corpus(spec: &PlantedSpec) -> PlantedCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let fields: Vec<String> = (0..spec.fields).map(subfield_name).collect();

    let mut words = Vec::new();
    for i in 0..spec.polysemous_words {
        words.push(PlantedWord {
            word: pseudo_word(PLANTED, words.len()),
            kind: PlantedKind::Polysemous,
            home: Some(fields[i % fields.len()].clone()),
        });
    }
    for kind in [PlantedKind::Monosemous, PlantedKind::Noisy] {
        let n = if kind == PlantedKind::Monosemous {
            spec.monosemous_words
        } else {
            spec.noisy_words
        };
        for _ in 0..n {
            words.push(PlantedWord {
                word: pseudo_word(PLANTED, words.len()),
                kind,
                home: None,
            });
        }
    }

    // token lists, per field, per document
    let mut docs: Vec<Vec<Vec<Slot>>> = (0..spec.fields)
        .map(|_| {
            (0..spec.docs_per_field)
                .map(|_| {
                    (0..spec.doc_length)
                        .map(|_| (pseudo_word(FILLER, rng.random_range(0..spec.filler_vocabulary)), None))
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut insert = |rng: &mut ChaCha8Rng, field: usize, occ: Occurrence, word: &str| {
        let doc = &mut docs[field][rng.random_range(0..spec.docs_per_field)];
        let at = rng.random_range(0..=doc.len());
        doc.insert(at, (word.to_string(), Some(occ)));
    };
    for (w, pw) in words.iter().enumerate() {
        for (f, field) in fields.iter().enumerate() {
            let (n, pool) = match pw.kind {
                PlantedKind::Polysemous if Some(field) == pw.home.as_ref() => (spec.home_occurrences, Some(0)),
                PlantedKind::Polysemous => (spec.away_occurrences, Some(1)),
                PlantedKind::Monosemous => (spec.spread_occurrences, Some(0)),
                PlantedKind::Noisy => (spec.spread_occurrences, None),
            };
            for _ in 0..n {
                insert(&mut rng, f, Occurrence { word: w, pool }, &pw.word);
            }
        }
    }

    let mut out_docs = Vec::new();
    let mut substitutes = Vec::new();
    let mut fresh = 0usize;
    for (f, field_docs) in docs.into_iter().enumerate() {
        for (d, tokens) in field_docs.into_iter().enumerate() {
            let doc_id = format!("{}-{d:04}", fields[f]);
            for (position, (_, occ)) in tokens.iter().enumerate() {
                let Some(occ) = occ else { continue };
                let subs: Vec<String> = match occ.pool {
                    Some(pool) => {
                        let base = (occ.word * 2 + pool) * spec.sense_pool;
                        sample(&mut rng, spec.sense_pool, 5)
                            .into_iter()
                            .map(|i| pseudo_word(SUBSTITUTE, base + i))
                            .collect()
                    }
                    None => (0..5)
                        .map(|_| {
                            fresh += 1;
                            pseudo_word(SUBSTITUTE, 1_000_000 + fresh)
                        })
                        .collect(),
                };
                substitutes.push(SubstituteRecord::new(&doc_id, position, &words[occ.word].word, subs));
            }
            let text = tokens.iter().map(|(w, _)| w.as_str()).collect::<Vec<_>>().join(" ");
            let mut doc = Document::new(doc_id, text)
                .with_fields([format!("field{}", f / 2)])
                .with_subfields([fields[f].clone()])
                .with_venue(format!("Venue {f}-{}", rng.random_range(0..spec.venues_per_field)));
            doc.year = Some(rng.random_range(2000..=2014));
            doc.n_citations = Some(rng.random_range(0..60));
            doc.n_authors = Some(rng.random_range(1..12));
            doc.n_references = Some(rng.random_range(5..80));
            let n_citing = rng.random_range(0..4);
            let citing: BTreeSet<usize> = (0..n_citing).map(|_| rng.random_range(0..=spec.fields)).collect();
            doc.citing_subfields = citing
                .into_iter()
                .map(|c| {
                    let label = if c == spec.fields {
                        jargon_core::impact::UNKNOWN_SUBFIELD.to_string()
                    } else {
                        fields[c].clone()
                    };
                    (label, rng.random_range(1..6))
                })
                .collect();
            out_docs.push(doc);
        }
    }
    for b in 0..spec.background_docs {
        let text = (0..spec.doc_length)
            .map(|_| pseudo_word(FILLER, rng.random_range(0..spec.filler_vocabulary)))
            .collect::<Vec<_>>()
            .join(" ");
        out_docs.push(Document::new(format!("background-{b:04}"), text).background());
    }
    substitutes.sort();

    let lexicon = words
        .iter()
        .filter_map(|w| Some((w.word.clone(), w.home.clone()?)))
        .collect();
    PlantedCorpus {
        fields,
        docs: out_docs,
        substitutes,
        words,
        lexicon,
    }
}

impl PlantedCorpus {
    pub fn words_of(&self, kind: PlantedKind) -> impl Iterator<Item = &PlantedWord> {
        self.words.iter().filter(move |w| w.kind == kind)
    }

    /// File name and contents of `corpus.jsonl`, `substitutes.tsv`,
    /// `lexicon.tsv` and `hierarchy.tsv`.
    pub fn files(&self) -> Vec<(&'static str, String)> {
        let mut h = String::from("subfield\tfield\n");
        for (i, f) in self.fields.iter().enumerate() {
            let _ = writeln!(h, "{f}\tfield{}", i / 2);
        }
        vec![
            ("corpus.jsonl", formats::corpus_string(&self.docs)),
            ("substitutes.tsv", formats::substitutes_string(&self.substitutes, 5)),
            ("lexicon.tsv", formats::lexicon_string(&self.lexicon)),
            ("hierarchy.tsv", h),
        ]
    }

    pub fn write(&self, dir: &Path) -> Result<(), FormatError> {
        for (name, contents) in self.files() {
            formats::write_text(&dir.join(name), &contents)?;
        }
        Ok(())
    }
}

/// Records for one target whose occurrences split evenly between two
/// disjoint substitute pools; returns each record with its planted sense.
pub fn two_sense_records(target: &str, per_sense: usize, pool: usize, seed: u64) -> Vec<(SubstituteRecord, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * per_sense);
    for i in 0..2 * per_sense {
        let sense = i % 2;
        let subs: Vec<String> = sample(&mut rng, pool, 5)
            .into_iter()
            .map(|j| pseudo_word(SUBSTITUTE, sense * pool + j))
            .collect();
        out.push((SubstituteRecord::new(format!("doc{i:05}"), 0, target, subs), sense));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct AudienceSpec {
    pub docs_per_group: usize,
    pub doc_length: usize,
    /// Jargon rate in the discipline-focused venue.
    pub focused_rate: f64,
    /// Jargon rate in the general-purpose venue.
    pub general_rate: f64,
    pub other_fields: usize,
    pub jargon_words: usize,
    pub filler_vocabulary: usize,
    pub seed: u64,
}

impl Default for AudienceSpec {
    fn default() -> Self {
        Self {
            docs_per_group: 500,
            doc_length: 40,
            focused_rate: 0.3,
            general_rate: 0.15,
            other_fields: 3,
            jargon_words: 20,
            filler_vocabulary: 200,
            seed: 11,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AudienceCorpus {
    pub docs: Vec<Document>,
    pub general_venues: BTreeSet<String>,
    pub target_field: String,
    pub general_venue: String,
    pub focused_venue: String,
}

/// The target field publishes in one discipline-focused and one
/// general-purpose venue; every other field has its own focused venue.
/// Each token is field jargon with the venue's planted rate.
pub fn audience_corpus(spec: &AudienceSpec) -> AudienceCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let target_field = subfield_name(0);
    let general_venue = "Open Letters".to_string();
    let focused_venue = "Review A".to_string();
    let mut docs = Vec::new();
    let doc = |rng: &mut ChaCha8Rng, field: usize, venue: &str, rate: f64, n: usize| {
        let text = (0..spec.doc_length)
            .map(|_| {
                if rng.random_bool(rate) {
                    pseudo_word(
                        FIELD_TERM,
                        field * spec.jargon_words + rng.random_range(0..spec.jargon_words),
                    )
                } else {
                    pseudo_word(FILLER, rng.random_range(0..spec.filler_vocabulary))
                }
            })
            .collect::<Vec<_>>()
            .join(" ");
        Document::new(format!("{}-{n:05}", subfield_name(field)), text)
            .with_subfields([subfield_name(field)])
            .with_venue(venue)
    };
    for i in 0..spec.docs_per_group {
        docs.push(doc(&mut rng, 0, &focused_venue, spec.focused_rate, i));
        docs.push(doc(
            &mut rng,
            0,
            &general_venue,
            spec.general_rate,
            spec.docs_per_group + i,
        ));
    }
    for f in 1..=spec.other_fields {
        let venue = format!("Review {}", (b'A' + f as u8) as char);
        for i in 0..spec.docs_per_group {
            docs.push(doc(&mut rng, f, &venue, spec.focused_rate, i));
        }
    }
    AudienceCorpus {
        docs,
        general_venues: [general_venue.clone()].into(),
        target_field,
        general_venue,
        focused_venue,
    }
}
