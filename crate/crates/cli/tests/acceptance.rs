//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use jargon_cli::pipeline::{assign_all, count_sharded, induce_all};
use jargon_cli::synth::{
    audience_corpus, planted_corpus, two_sense_records, AudienceSpec, PlantedCorpus, PlantedKind, PlantedSpec,
};
use jargon_core::corpus::{classify_venues, CountStats, Document, LabelLevel, VenueClass, VenueRules, VenueTally};
use jargon_core::impact::{div, gini, SubfieldVectors};
use jargon_core::jargon::{
    audience_design_table, score_document, DocumentTokens, LabeledToken, ScoreTables, VenueScoredDocument,
};
use jargon_core::npmi::{type_npmi, TypeScoreTable, DEFAULT_MIN_COUNT};
use jargon_core::senses::{sense_npmi, SenseCounts, SenseScoreTable};
use jargon_core::text::LemmaTable;
use jargon_core::validation::{default_grid, recall_auc};
use jargon_core::wsi::{
    assign_occurrence, induce_lemma, resolution_from_probabilities, InductionConfig, SenseAssignment, SenseId,
    SenseModel,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

// ---------------------------------------------------------------------------
// NPMI oracle

struct ToyCorpus {
    /// (tokens, labels); background documents have no labels.
    docs: Vec<(Vec<String>, Vec<String>)>,
}

fn toy_corpus(rng: &mut ChaCha8Rng) -> ToyCorpus {
    let n_fields = rng.random_range(1..=4);
    let vocab = rng.random_range(2..=12);
    let budget = rng.random_range(20..=500);
    let mut docs = Vec::new();
    let mut used = 0;
    while used < budget {
        let len = rng.random_range(1..=40).min(budget - used);
        used += len;
        let tokens = (0..len).map(|_| format!("w{}", rng.random_range(0..vocab))).collect();
        let labels = if rng.random_bool(0.15) {
            Vec::new()
        } else {
            let k = rng.random_range(1..=n_fields.min(2));
            let mut set = BTreeSet::new();
            while set.len() < k {
                set.insert(format!("f{}", rng.random_range(0..n_fields)));
            }
            set.into_iter().collect()
        };
        docs.push((tokens, labels));
    }
    ToyCorpus { docs }
}

impl ToyCorpus {
    fn documents(&self) -> Vec<Document> {
        self.docs
            .iter()
            .enumerate()
            .map(|(i, (tokens, labels))| {
                let d = Document::new(format!("d{i}"), tokens.join(" "));
                if labels.is_empty() {
                    d.background()
                } else {
                    d.with_subfields(labels.clone())
                }
            })
            .collect()
    }

    /// Every token is one event; `event` picks the events of interest.
    /// Returns (event, field, joint) probabilities and the joint count.
    fn probabilities(&self, field: &str, event: impl Fn(usize, usize) -> bool) -> ((f64, f64, f64), u64) {
        let (mut total, mut in_f, mut ev, mut joint) = (0u64, 0u64, 0u64, 0u64);
        for (d, (tokens, labels)) in self.docs.iter().enumerate() {
            let labelled = labels.iter().any(|l| l == field);
            for p in 0..tokens.len() {
                total += 1;
                let hit = event(d, p);
                in_f += labelled as u64;
                ev += hit as u64;
                joint += (hit && labelled) as u64;
            }
        }
        let t = total as f64;
        ((ev as f64 / t, in_f as f64 / t, joint as f64 / t), joint)
    }
}

/// NPMI from enumerated event probabilities; `None` when the pair never
/// co-occurs, `Err` when the joint probability is one.
fn brute_npmi((p_event, p_field, p_joint): (f64, f64, f64)) -> Result<Option<f64>, ()> {
    if p_joint == 0.0 {
        return Ok(None);
    }
    if p_joint == 1.0 {
        return Err(());
    }
    Ok(Some((p_joint / (p_event * p_field)).ln() / -p_joint.ln()))
}

fn compare(
    what: &str,
    got: jargon_core::Result<Option<f64>>,
    want: Result<Option<f64>, ()>,
    count: u64,
    min_count: u64,
) -> Result<f64, String> {
    let want = want.map(|w| w.filter(|_| count >= min_count));
    match (got, want) {
        (Ok(Some(g)), Ok(Some(w))) if close(g, w, 1e-12) => Ok((g - w).abs()),
        (Ok(None), Ok(None)) => Ok(0.0),
        (Err(_), Err(())) => Ok(0.0),
        (g, w) => Err(format!("{what}: got {g:?}, oracle {w:?}")),
    }
}

fn npmi_oracle() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut compared, mut worst) = (0usize, 0f64);
    for corpus_no in 0..100 {
        let corpus = toy_corpus(&mut rng);
        let docs = corpus.documents();
        let stats = count_sharded(&docs, &LemmaTable::new(), LabelLevel::Subfield).map_err(|e| e.to_string())?;

        // random senses for every occurrence of w0 and w1, some unseen
        let mut assignments = Vec::new();
        let mut sense_of: HashMap<(usize, usize), SenseId> = HashMap::new();
        for (d, (tokens, _)) in corpus.docs.iter().enumerate() {
            for (p, t) in tokens.iter().enumerate() {
                if t == "w0" || t == "w1" {
                    let sense = match rng.random_range(0..4) {
                        3 => SenseId::Unseen,
                        k => SenseId::Induced(k),
                    };
                    sense_of.insert((d, p), sense);
                    assignments.push(SenseAssignment {
                        doc_id: format!("d{d}"),
                        position: p,
                        target_lemma: t.clone(),
                        sense,
                    });
                }
            }
        }
        let labels: HashMap<String, Vec<String>> = docs
            .iter()
            .map(|d| (d.doc_id.clone(), d.labels(LabelLevel::Subfield).to_vec()))
            .collect();
        let sense_counts =
            SenseCounts::accumulate(&assignments, |id| labels.get(id).map(Vec::as_slice)).map_err(|e| e.to_string())?;

        let fields: BTreeSet<&String> = corpus.docs.iter().flat_map(|(_, l)| l).collect();
        let words: BTreeSet<&String> = corpus.docs.iter().flat_map(|(t, _)| t).collect();
        for field in &fields {
            for word in &words {
                let (probs, n) = corpus.probabilities(field, |d, p| &corpus.docs[d].0[p] == *word);
                let want = brute_npmi(probs);
                for min_count in [1, DEFAULT_MIN_COUNT] {
                    let got = type_npmi(&stats, field, word, min_count);
                    let what = format!("corpus {corpus_no} type ({field}, {word}) min_count {min_count}");
                    worst = worst.max(compare(&what, got, want, n, min_count)?);
                    compared += 1;
                }
            }
            for word in ["w0", "w1"] {
                for sense in [
                    SenseId::Induced(0),
                    SenseId::Induced(1),
                    SenseId::Induced(2),
                    SenseId::Unseen,
                ] {
                    let (probs, n) = corpus.probabilities(field, |d, p| {
                        corpus.docs[d].0[p] == word && sense_of.get(&(d, p)) == Some(&sense)
                    });
                    let want = if sense == SenseId::Unseen {
                        Ok(None)
                    } else {
                        brute_npmi(probs)
                    };
                    for min_count in [1, DEFAULT_MIN_COUNT] {
                        let got = sense_npmi(&stats, &sense_counts, field, word, sense, min_count);
                        let what = format!("corpus {corpus_no} sense ({field}, {word}, {sense}) min_count {min_count}");
                        worst = worst.max(compare(&what, got, want, n, min_count)?);
                        compared += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{compared} scores over 100 corpora, max |diff| {worst:e}, {elapsed:.2?}"
    ))
}

// ---------------------------------------------------------------------------
// Sense pipeline on planted corpora

struct SensePipeline {
    corpus: PlantedCorpus,
    stats: CountStats,
    models: Vec<SenseModel>,
    counts: SenseCounts,
}

fn sense_pipeline(spec: &PlantedSpec, seed: u64) -> Result<SensePipeline, String> {
    let corpus = planted_corpus(spec);
    let stats = count_sharded(&corpus.docs, &LemmaTable::new(), LabelLevel::Subfield).map_err(|e| e.to_string())?;
    let models =
        induce_all(corpus.substitutes.clone(), &InductionConfig::default(), seed).map_err(|e| format!("{e:#}"))?;
    let assignments = assign_all(&models, corpus.substitutes.clone()).map_err(|e| format!("{e:#}"))?;
    let labels: HashMap<&str, &[String]> = corpus
        .docs
        .iter()
        .map(|d| (d.doc_id.as_str(), d.labels(LabelLevel::Subfield)))
        .collect();
    let counts = SenseCounts::accumulate(&assignments, |id| labels.get(id).copied()).map_err(|e| e.to_string())?;
    Ok(SensePipeline {
        corpus,
        stats,
        models,
        counts,
    })
}

fn boundary_identity() -> Check {
    let p = sense_pipeline(&PlantedSpec::default(), 0)?;
    let fallback: Vec<&SenseModel> = p.models.iter().filter(|m| m.single_sense_fallback).collect();
    let noisy: BTreeSet<&str> = p.corpus.words_of(PlantedKind::Noisy).map(|w| w.word.as_str()).collect();
    let fallback_lemmas: BTreeSet<&str> = fallback.iter().map(|m| m.target_lemma.as_str()).collect();
    ensure(noisy.is_subset(&fallback_lemmas), || {
        format!("noisy words {noisy:?} not all fallback ({fallback_lemmas:?})")
    })?;
    let senses = SenseScoreTable::from_counts(&p.stats, &p.counts, DEFAULT_MIN_COUNT).map_err(|e| e.to_string())?;
    let types = TypeScoreTable::from_counts(&p.stats, DEFAULT_MIN_COUNT).map_err(|e| e.to_string())?;
    let mut scored = 0;
    for lemma in &fallback_lemmas {
        for field in p.stats.fields() {
            let t = type_npmi(&p.stats, field, lemma, DEFAULT_MIN_COUNT).map_err(|e| e.to_string())?;
            let s = sense_npmi(
                &p.stats,
                &p.counts,
                field,
                lemma,
                SenseId::Induced(0),
                DEFAULT_MIN_COUNT,
            )
            .map_err(|e| e.to_string())?;
            let word = senses.word_level(field, lemma).map_err(|e| e.to_string())?;
            let table = types.get(field, lemma);
            let same = |a: Option<f64>| match (a, t) {
                (Some(a), Some(b)) => close(a, b, 1e-12),
                (None, None) => true,
                _ => false,
            };
            ensure(same(s) && same(word) && same(table), || {
                format!("({field}, {lemma}): type {t:?}, sense {s:?}, word-level {word:?}, table {table:?}")
            })?;
            scored += t.is_some() as usize;
        }
    }
    ensure(scored > 0, || "no fallback lemma was scored in any field".into())?;
    Ok(format!(
        "{} fallback lemmas, {scored} scored (field, lemma) pairs identical",
        fallback_lemmas.len()
    ))
}

fn dynamic_resolution() -> Check {
    let hand = resolution_from_probabilities(0.5, 0.1).map_err(|e| e.to_string())?;
    // 0.2485 is 0.4 / ln 5 = 0.248534... to four places; the 1e-6 tolerance
    // applies to the closed form
    let exact = 0.4 / 5f64.ln();
    ensure(close(hand, exact, 1e-6) && (hand * 1e4).round() / 1e4 == 0.2485, || {
        format!("gamma(0.5, 0.1) = {hand}, closed form {exact}")
    })?;
    for w in [1e-6, 0.05, 0.3, 0.999] {
        let g = resolution_from_probabilities(w, w).map_err(|e| e.to_string())?;
        ensure(g == w, || format!("gamma({w}, {w}) = {g}"))?;
    }
    let mut models = Vec::new();
    for spec in [PlantedSpec::fixture(), PlantedSpec::default()] {
        models.extend(sense_pipeline(&spec, 0)?.models);
    }
    for seed in 0..5 {
        let recs: Vec<_> = two_sense_records("bass", 500, 6, seed)
            .into_iter()
            .map(|(r, _)| r)
            .collect();
        models.push(induce_lemma(&recs, &InductionConfig::default(), seed).map_err(|e| e.to_string())?);
    }
    let bad: Vec<String> = models
        .iter()
        .filter(|m| !m.converged || m.iterations > 10)
        .map(|m| format!("{} ({} iterations)", m.target_lemma, m.iterations))
        .collect();
    ensure(bad.is_empty(), || format!("not converged: {bad:?}"))?;
    let most = models.iter().map(|m| m.iterations).max().unwrap_or(0);
    Ok(format!(
        "gamma(0.5, 0.1) = {hand:.7}; {} planted networks converged, at most {most} iterations",
        models.len()
    ))
}

fn wsi_recovery() -> Check {
    let train = two_sense_records("bass", 500, 6, 1);
    let records: Vec<_> = train.iter().map(|(r, _)| r.clone()).collect();
    let model = induce_lemma(&records, &InductionConfig::default(), 0).map_err(|e| e.to_string())?;
    ensure(model.senses.len() == 2 && !model.single_sense_fallback, || {
        format!(
            "{} senses induced (fallback {})",
            model.senses.len(),
            model.single_sense_fallback
        )
    })?;
    // planted sense -> induced sense by majority over the training records
    let mut votes: BTreeMap<(usize, SenseId), usize> = BTreeMap::new();
    for (r, planted) in &train {
        let a = assign_occurrence(&model, r).map_err(|e| e.to_string())?;
        *votes.entry((*planted, a.sense)).or_default() += 1;
    }
    let mapping: BTreeMap<usize, SenseId> = (0..2)
        .map(|k| {
            let best = votes.iter().filter(|((p, _), _)| *p == k).max_by_key(|(_, n)| **n);
            (k, best.map_or(SenseId::Unseen, |((_, s), _)| *s))
        })
        .collect();
    ensure(mapping[&0] != mapping[&1], || {
        format!("both planted senses map to {}", mapping[&0])
    })?;
    let held_out = two_sense_records("bass", 500, 6, 2);
    let mut correct = 0;
    for (r, planted) in &held_out {
        correct += (assign_occurrence(&model, r).map_err(|e| e.to_string())?.sense == mapping[planted]) as usize;
    }
    let accuracy = correct as f64 / held_out.len() as f64;
    ensure(accuracy >= 0.99, || format!("held-out accuracy {accuracy}"))?;
    Ok(format!(
        "2 senses, held-out accuracy {accuracy} over {} records",
        held_out.len()
    ))
}

fn recall_ordering() -> Check {
    let start = Instant::now();
    let spec = PlantedSpec::default();
    ensure(spec.polysemous_words == 20, || {
        "expected 20 planted polysemous words".into()
    })?;
    let p = sense_pipeline(&spec, 0)?;
    let types = TypeScoreTable::from_counts(&p.stats, DEFAULT_MIN_COUNT).map_err(|e| e.to_string())?;
    let senses = SenseScoreTable::from_counts(&p.stats, &p.counts, DEFAULT_MIN_COUNT).map_err(|e| e.to_string())?;
    let grid = default_grid();
    let type_auc = recall_auc(&p.corpus.lexicon, &types, &grid).map_err(|e| e.to_string())?;
    let sense_auc = recall_auc(&p.corpus.lexicon, &senses, &grid).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(sense_auc > type_auc, || {
        format!("sense AUC {sense_auc} <= type AUC {type_auc}")
    })?;
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} lexicon pairs: sense AUC {sense_auc:.4} > type AUC {type_auc:.4}, {elapsed:.2?}",
        p.corpus.lexicon.len()
    ))
}

fn div_hand_cases() -> Check {
    // two subfields at cosine distance 0.5 (60 degrees apart) among N = 4
    let vectors = SubfieldVectors::from_vectors(BTreeMap::from([
        ("a".to_string(), vec![1.0, 0.0]),
        ("b".to_string(), vec![0.5, 3f64.sqrt() / 2.0]),
    ]));
    let d = vectors.distance("a", "b").map_err(|e| e.to_string())?;
    ensure(close(d, 0.5, 1e-12), || format!("distance {d}"))?;
    let case = |na: u64, nb: u64| -> Result<f64, String> {
        div(&[("a".into(), na), ("b".into(), nb)], &vectors, 4)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| "DIV undefined".to_string())
    };
    let equal = case(2, 2)?;
    let skewed = case(3, 1)?;
    let g31 = gini(&[3.0, 1.0]).map_err(|e| e.to_string())?;
    let geq = gini(&[2.0, 2.0, 2.0]).map_err(|e| e.to_string())?;
    ensure(close(equal, 0.25, 1e-12), || format!("equal counts DIV {equal}"))?;
    ensure(close(skewed, 0.1875, 1e-12), || format!("3:1 DIV {skewed}"))?;
    ensure(close(g31, 0.25, 1e-12), || format!("Gini([3,1]) {g31}"))?;
    ensure(geq == 0.0, || format!("Gini(equal) {geq}"))?;
    Ok(format!("DIV {equal}, {skewed}; Gini {g31}, {geq}"))
}

// ---------------------------------------------------------------------------
// Monotonicity

const LEMMAS: usize = 12;
const SENSES: usize = 3;

#[derive(Debug, Clone)]
struct RandomDoc {
    tokens: Vec<(usize, Option<SenseId>)>,
    type_scores: Vec<Option<f64>>,
    sense_scores: Vec<Vec<Option<f64>>>,
    cutoffs: (f64, f64),
}

fn random_doc() -> impl Strategy<Value = RandomDoc> {
    let sense = prop_oneof![
        Just(None),
        Just(Some(SenseId::Unseen)),
        (0..SENSES).prop_map(|k| Some(SenseId::Induced(k))),
    ];
    let score = proptest::option::weighted(0.8, -1.0..1.0f64);
    (
        proptest::collection::vec((0..LEMMAS, sense), 1..80),
        proptest::collection::vec(score.clone(), LEMMAS),
        proptest::collection::vec(proptest::collection::vec(score, SENSES), LEMMAS),
        (-1.0..1.0f64, -1.0..1.0f64),
    )
        .prop_map(|(tokens, type_scores, sense_scores, (a, b))| RandomDoc {
            tokens,
            type_scores,
            sense_scores,
            cutoffs: (a.min(b), a.max(b)),
        })
}

fn check_monotone(doc: &RandomDoc) -> Result<(), TestCaseError> {
    let mut types = TypeScoreTable::new(1);
    let mut senses = SenseScoreTable::new(1);
    for l in 0..LEMMAS {
        let lemma = format!("l{l}");
        if let Some(s) = doc.type_scores[l] {
            types.insert("f", &lemma, s, 1);
        }
        for (k, s) in doc.sense_scores[l].iter().enumerate() {
            if let Some(s) = s {
                senses.insert("f", &lemma, k, *s, 1);
            }
        }
        senses.set_most_frequent(&lemma, 0);
    }
    let tokens = DocumentTokens {
        doc_id: "d".into(),
        tokens: doc
            .tokens
            .iter()
            .map(|(l, sense)| LabeledToken {
                lemma: format!("l{l}"),
                sense: *sense,
            })
            .collect(),
    };
    let tables = ScoreTables::new(&types, &senses);
    let (lo, hi) = doc.cutoffs;
    let at = |c: f64| score_document(&tokens, &["f"], tables, c).map_err(|e| TestCaseError::fail(e.to_string()));
    let (s_lo, s_hi) = (at(lo)?, at(hi)?);
    prop_assert!(
        s_hi.jargon_fraction() <= s_lo.jargon_fraction(),
        "fraction {} at c={hi} above {} at c={lo}",
        s_hi.jargon_fraction(),
        s_lo.jargon_fraction()
    );
    let mut previous: Option<f64> = None;
    for m in 1..=tokens.tokens.len() + 5 {
        let current = s_lo.prefix_max.at(m);
        match (previous, current) {
            (Some(p), Some(c)) => prop_assert!(c >= p, "prefix max fell from {p} to {c} at m={m}"),
            (Some(p), None) => prop_assert!(false, "prefix max lost its value {p} at m={m}"),
            _ => {}
        }
        previous = current;
    }
    Ok(())
}

fn monotonicity() -> Check {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha,
        ..Config::default()
    });
    runner
        .run(&random_doc(), |doc| check_monotone(&doc))
        .map_err(|e| e.to_string())?;
    Ok("1000 random documents".into())
}

// ---------------------------------------------------------------------------
// Determinism

fn planted_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/planted")
}

fn run_pipeline(out: &Path, threads: Option<usize>) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let dir = planted_dir();
    let arg = |name: &str| dir.join(name).display().to_string();
    for command in jargon_cli::Command::ALL {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_jargon"));
        cmd.arg(command.name())
            .args(["--config", &arg("pipeline.conf")])
            .args(["--corpus", &arg("corpus.jsonl")])
            .args(["--substitutes", &arg("substitutes.tsv")])
            .args(["--lexicon", &arg("lexicon.tsv")])
            .args(["--hierarchy", &arg("hierarchy.tsv")])
            .args(["--general-venues", &arg("general_venues.txt")])
            .args(["--out", &out.display().to_string()]);
        if let Some(t) = threads {
            cmd.args(["--threads", &t.to_string()]);
        }
        let o = cmd.output().map_err(|e| e.to_string())?;
        if !o.status.success() {
            return Err(format!(
                "{} failed: {}",
                command.name(),
                String::from_utf8_lossy(&o.stderr)
            ));
        }
    }
    let mut files = BTreeMap::new();
    for entry in fs::read_dir(out).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let bytes = fs::read(&path).map_err(|e| e.to_string())?;
        files.insert(path.file_name().unwrap().to_string_lossy().into_owned(), bytes);
    }
    Ok(files)
}

fn determinism() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [
        ("first", None),
        ("second", None),
        ("1 thread", Some(1)),
        ("4 threads", Some(4)),
    ];
    let mut outputs = Vec::new();
    for (name, threads) in runs {
        let out = tmp.path().join(name.replace(' ', "_"));
        outputs.push((name, run_pipeline(&out, threads)?));
    }
    let (_, reference) = &outputs[0];
    ensure(reference.len() == 16, || {
        format!("expected 16 artifacts, found {:?}", reference.keys())
    })?;
    for (name, files) in &outputs[1..] {
        ensure(files.keys().eq(reference.keys()), || {
            format!("{name}: different artifact set")
        })?;
        for (file, bytes) in files {
            ensure(bytes == &reference[file], || {
                format!("{name}: {file} differs from the first run")
            })?;
        }
    }
    let bytes: usize = reference.values().map(Vec::len).sum();
    Ok(format!(
        "{} artifacts ({bytes} bytes) identical across 2 runs, 1 and 4 threads",
        reference.len()
    ))
}

// ---------------------------------------------------------------------------
// Audience design

fn audience_design() -> Check {
    let spec = AudienceSpec::default();
    ensure(spec.docs_per_group == 500, || "expected 500 documents per group".into())?;
    let corpus = audience_corpus(&spec);
    let identity = LemmaTable::new();
    let stats = count_sharded(&corpus.docs, &identity, LabelLevel::Subfield).map_err(|e| e.to_string())?;
    let types = TypeScoreTable::from_counts(&stats, DEFAULT_MIN_COUNT).map_err(|e| e.to_string())?;
    let senses = SenseScoreTable::new(DEFAULT_MIN_COUNT);
    let tables = ScoreTables::new(&types, &senses);

    let tally: VenueTally = corpus.docs.iter().collect();
    // each venue holds exactly one group of 500 documents
    let rules = VenueRules {
        min_documents: spec.docs_per_group as u64,
        ..VenueRules::default()
    };
    let classes = classify_venues(&tally, &corpus.general_venues, &rules);
    let scores = corpus
        .docs
        .iter()
        .map(|d| {
            let tokens = DocumentTokens::from_text(&d.doc_id, &d.text, &identity, |_| None);
            score_document(&tokens, &[d.labels(LabelLevel::Subfield)[0].as_str()], tables, 0.1)
        })
        .collect::<jargon_core::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let placed: Vec<VenueScoredDocument<'_>> = corpus
        .docs
        .iter()
        .zip(&scores)
        .map(|(d, s)| VenueScoredDocument {
            field: d.labels(LabelLevel::Subfield)[0].as_str(),
            venue_class: classes[d.venue.as_deref().unwrap()],
            score: s,
        })
        .collect();
    let table = audience_design_table(&placed);
    let row = |class: VenueClass| {
        table
            .iter()
            .find(|r| r.field == corpus.target_field && r.venue_class == class)
            .map(|r| r.jargon_fraction)
            .ok_or_else(|| format!("no {} row for {}", class.as_str(), corpus.target_field))
    };
    let general = row(VenueClass::GeneralPurpose)?;
    let focused = row(VenueClass::DisciplineFocused)?;
    ensure(general.n == 500 && focused.n == 500, || {
        format!("group sizes {} and {}", general.n, focused.n)
    })?;
    let (g_hi, f_lo) = (general.high().unwrap(), focused.low().unwrap());
    ensure(general.mean < focused.mean, || {
        format!("general mean {} >= focused {}", general.mean, focused.mean)
    })?;
    ensure(g_hi < f_lo, || {
        format!("intervals overlap: general high {g_hi}, focused low {f_lo}")
    })?;
    Ok(format!(
        "general {:.4} [{:.4}, {g_hi:.4}] < focused {:.4} [{f_lo:.4}, {:.4}]",
        general.mean,
        general.low().unwrap(),
        focused.mean,
        focused.high().unwrap()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("npmi_oracle_equivalence", npmi_oracle),
        ("boundary_identity_single_sense", boundary_identity),
        ("dynamic_resolution", dynamic_resolution),
        ("wsi_recovery", wsi_recovery),
        ("recall_ordering_sense_over_type", recall_ordering),
        ("div_and_gini_hand_cases", div_hand_cases),
        ("jargon_fraction_and_prefix_max_monotonicity", monotonicity),
        ("determinism", determinism),
        ("audience_design_mechanics", audience_design),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
