//! The pipeline subcommands. Each reads its inputs from files, writes its
//! outputs to the output directory and keeps no other state, so the output
//! of one command is the input of the next.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use jargon_core::corpus::{classify_venues, VenueClass, VenueTally};
use jargon_core::corpus::{select_vocabulary, CountAccumulator, CountStats, Document, Role, VocabularySpec};
use jargon_core::impact::{design_rows, div, CitationMatrix, DesignSpec, SubfieldVectors, UNKNOWN_SUBFIELD};
use jargon_core::jargon::{
    audience_design_table, default_m_grid, expected_prefix_max_curve, score_document, DocumentJargonScore,
    DocumentTokens, ScoreTables, VenueScoredDocument,
};
use jargon_core::npmi::TypeScoreTable;
use jargon_core::senses::{SenseCounts, SenseScoreTable};
use jargon_core::text::LemmaTable;
use jargon_core::validation::{
    default_grid, paired_score_comparison, recall_at_threshold, recall_auc, LabeledLexicon, PairedTest, WordScores,
};
use jargon_core::wsi::{assign_occurrence, induce_lemma, SenseAssignment, SenseId, SenseModel, SubstituteRecord};
use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::formats::{self, fmt_opt};

/// Documents per counting shard. Fixed so that the result never depends on
/// the thread count.
pub const SHARD_SIZE: usize = 512;

/// File names of the artifacts inside the output directory.
pub mod artifacts {
    pub const COUNTS: &str = "counts.tsv";
    pub const VOCAB: &str = "vocab.tsv";
    pub const SENSE_MODELS: &str = "sense_models.txt";
    pub const ASSIGNMENTS: &str = "assignments.tsv";
    pub const TYPE_SCORES: &str = "type_scores.tsv";
    pub const SENSE_SCORES: &str = "sense_scores.tsv";
    pub const SENSE_WORD_SCORES: &str = "sense_word_scores.tsv";
    pub const DOC_SCORES: &str = "doc_scores.tsv";
    pub const VENUES: &str = "venues.tsv";
    pub const AUDIENCE: &str = "audience.tsv";
    pub const CURVE: &str = "curve.tsv";
    pub const EVAL: &str = "eval.tsv";
    pub const CITATION_MATRIX: &str = "citation_matrix.tsv";
    pub const DIV: &str = "div.tsv";
    pub const DESIGN: &str = "design.tsv";
    pub const DESIGN_DROPPED: &str = "design_dropped.tsv";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    Count,
    Vocab,
    WsiInduce,
    WsiAssign,
    ScoreTypes,
    ScoreSenses,
    Jargon,
    Validate,
    Impact,
    ExportDesign,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Count,
        Command::Vocab,
        Command::WsiInduce,
        Command::WsiAssign,
        Command::ScoreTypes,
        Command::ScoreSenses,
        Command::Jargon,
        Command::Validate,
        Command::Impact,
        Command::ExportDesign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Count => "count",
            Command::Vocab => "vocab",
            Command::WsiInduce => "wsi-induce",
            Command::WsiAssign => "wsi-assign",
            Command::ScoreTypes => "score-types",
            Command::ScoreSenses => "score-senses",
            Command::Jargon => "jargon",
            Command::Validate => "validate",
            Command::Impact => "impact",
            Command::ExportDesign => "export-design",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("missing {what}: set `{key}` in the config file or pass --{flag}")]
    Unset {
        what: &'static str,
        key: &'static str,
        flag: String,
    },
    #[error("missing {what}: {} does not exist", path.display())]
    NotFound { what: &'static str, path: PathBuf },
    #[error("missing {what}: {} does not exist (run `jargon {producer}` first)", path.display())]
    NotProduced {
        what: &'static str,
        path: PathBuf,
        producer: &'static str,
    },
}

/// Files a command read and wrote, in the order it touched them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunReport {
    pub inputs: Vec<(String, PathBuf)>,
    pub outputs: Vec<(String, PathBuf)>,
}

struct Run<'c> {
    cfg: &'c PipelineConfig,
    report: RunReport,
}

impl<'c> Run<'c> {
    fn new(cfg: &'c PipelineConfig) -> Self {
        Self {
            cfg,
            report: RunReport::default(),
        }
    }

    /// A user-supplied input named by config key `key`.
    fn user_input(&mut self, what: &'static str, key: &'static str, path: &Option<PathBuf>) -> Result<PathBuf> {
        let path = path.clone().ok_or_else(|| InputError::Unset {
            what,
            key,
            flag: key.replace('_', "-"),
        })?;
        if !path.is_file() {
            return Err(InputError::NotFound { what, path }.into());
        }
        self.report.inputs.push((key.to_string(), path.clone()));
        Ok(path)
    }

    fn optional_input(
        &mut self,
        what: &'static str,
        key: &'static str,
        path: &Option<PathBuf>,
    ) -> Result<Option<PathBuf>> {
        match path {
            None => Ok(None),
            Some(_) => self.user_input(what, key, path).map(Some),
        }
    }

    /// An artifact another subcommand writes into the output directory.
    fn artifact(&mut self, what: &'static str, name: &'static str, producer: Command) -> Result<PathBuf> {
        let path = self.cfg.out_dir.join(name);
        if !path.is_file() {
            return Err(InputError::NotProduced {
                what,
                path,
                producer: producer.name(),
            }
            .into());
        }
        self.report.inputs.push((name.to_string(), path.clone()));
        Ok(path)
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.cfg.out_dir.join(name);
        formats::write_text(&path, contents)?;
        log::info!("wrote {}", path.display());
        self.report.outputs.push((name.to_string(), path));
        Ok(())
    }
}

/// Runs `command` on the current rayon pool.
pub fn run(command: Command, cfg: &PipelineConfig) -> Result<RunReport> {
    let mut run = Run::new(cfg);
    match command {
        Command::Count => count(&mut run),
        Command::Vocab => vocab(&mut run),
        Command::WsiInduce => wsi_induce(&mut run),
        Command::WsiAssign => wsi_assign(&mut run),
        Command::ScoreTypes => score_types(&mut run),
        Command::ScoreSenses => score_senses(&mut run),
        Command::Jargon => jargon(&mut run),
        Command::Validate => validate(&mut run),
        Command::Impact => impact(&mut run),
        Command::ExportDesign => export_design(&mut run),
    }
    .with_context(|| format!("{} failed", command.name()))?;
    Ok(run.report)
}

/// Runs `command` on a dedicated pool of `threads` workers (all cores when
/// `None`).
pub fn run_with_threads(command: Command, cfg: &PipelineConfig, threads: Option<usize>) -> Result<RunReport> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    builder.build()?.install(|| run(command, cfg))
}

fn load_corpus(run: &mut Run<'_>) -> Result<Vec<Document>> {
    let path = run.user_input("corpus file", "corpus", &run.cfg.corpus.clone())?;
    Ok(formats::read_corpus(&path)?)
}

/// Counts `docs` in fixed-size shards on the current pool.
pub fn count_sharded(
    docs: &[Document],
    lemmas: &LemmaTable,
    level: jargon_core::corpus::LabelLevel,
) -> Result<CountStats> {
    let shards = docs
        .par_chunks(SHARD_SIZE)
        .map(|chunk| {
            let mut acc = CountAccumulator::new(lemmas, level);
            for d in chunk {
                acc.add(d)?;
            }
            Ok(acc)
        })
        .collect::<jargon_core::Result<Vec<_>>>()?;
    let mut total = CountAccumulator::new(lemmas, level);
    for shard in shards {
        total.merge(shard)?;
    }
    Ok(total.finish())
}

fn count(run: &mut Run<'_>) -> Result<()> {
    let cfg = run.cfg;
    let corpus = run.user_input("corpus file", "corpus", &cfg.corpus)?;
    let background = run.optional_input("background corpus", "background", &cfg.background)?;
    let mut docs = formats::read_corpus(&corpus)?;
    if let Some(bg) = background {
        docs.extend(formats::read_corpus(&bg)?.into_iter().map(|mut d| {
            d.role = Role::Background;
            d
        }));
    }
    let stats = count_sharded(&docs, &LemmaTable::new(), cfg.label_level)?;
    log::info!(
        "counted {} tokens in {} documents over {} labels",
        stats.total_tokens,
        stats.documents,
        stats.tokens_per_field.len()
    );
    run.write(artifacts::COUNTS, &formats::counts_string(&stats))
}

fn vocab(run: &mut Run<'_>) -> Result<()> {
    let cfg = run.cfg;
    let counts = run.artifact("counts file", artifacts::COUNTS, Command::Count)?;
    let lemmas = run.optional_input("lemma table", "lemmas", &cfg.lemmas)?;
    let stopwords = run.optional_input("stopword list", "stopwords", &cfg.stopwords)?;
    let excluded = run.optional_input("excluded-words list", "excluded_words", &cfg.excluded_words)?;
    let stats = formats::read_counts(&counts)?;
    let lemmas = match lemmas {
        Some(p) => formats::read_lemma_table(&p)?,
        None => LemmaTable::new(),
    };
    let spec = VocabularySpec {
        frequency_percentile: cfg.vocab_percentile,
        venue_coverage_fraction: cfg.venue_coverage,
        stopwords: stopwords
            .map(|p| formats::read_word_list(&p))
            .transpose()?
            .unwrap_or_default(),
        excluded_words: excluded
            .map(|p| formats::read_word_list(&p))
            .transpose()?
            .unwrap_or_default(),
    };
    let vocab = select_vocabulary(&stats, &spec, &lemmas);
    if vocab.is_empty() {
        log::warn!("no word meets the vocabulary thresholds");
    } else {
        log::info!("selected {} vocabulary lemmas", vocab.lemmas().len());
    }
    run.write(artifacts::VOCAB, &formats::vocabulary_string(&vocab))
}

fn load_substitutes(run: &mut Run<'_>) -> Result<Vec<SubstituteRecord>> {
    let path = run.user_input("substitutes file", "substitutes", &run.cfg.substitutes.clone())?;
    Ok(formats::read_substitutes(&path, run.cfg.n_substitutes)?)
}

/// Induces one sense model per lemma, lemmas in parallel.
pub fn induce_all(
    records: Vec<SubstituteRecord>,
    config: &jargon_core::wsi::InductionConfig,
    seed: u64,
) -> Result<Vec<SenseModel>> {
    let mut by_lemma: BTreeMap<String, Vec<SubstituteRecord>> = BTreeMap::new();
    for r in records {
        by_lemma.entry(r.target_lemma.clone()).or_default().push(r);
    }
    by_lemma
        .par_iter()
        .map(|(lemma, recs)| induce_lemma(recs, config, seed).with_context(|| format!("inducing senses of {lemma:?}")))
        .collect()
}

fn wsi_induce(run: &mut Run<'_>) -> Result<()> {
    let records = load_substitutes(run)?;
    let models = induce_all(records, &run.cfg.induction(), run.cfg.seed)?;
    let fallback = models.iter().filter(|m| m.single_sense_fallback).count();
    let unconverged = models.iter().filter(|m| !m.converged).count();
    log::info!(
        "induced senses for {} lemmas ({} single-sense fallbacks, {} without resolution convergence)",
        models.len(),
        fallback,
        unconverged
    );
    run.write(artifacts::SENSE_MODELS, &formats::sense_models_string(&models))
}

/// Assigns every record, in (doc_id, position) order, records in parallel.
pub fn assign_all(models: &[SenseModel], mut records: Vec<SubstituteRecord>) -> Result<Vec<SenseAssignment>> {
    let by_lemma: HashMap<&str, &SenseModel> = models.iter().map(|m| (m.target_lemma.as_str(), m)).collect();
    records.sort();
    records
        .par_iter()
        .map(|r| {
            let model = by_lemma.get(r.target_lemma.as_str()).ok_or_else(|| {
                anyhow!(
                    "no sense model for lemma {:?} (doc {}, position {})",
                    r.target_lemma,
                    r.doc_id,
                    r.position
                )
            })?;
            Ok(assign_occurrence(model, r)?)
        })
        .collect()
}

fn wsi_assign(run: &mut Run<'_>) -> Result<()> {
    let models_path = run.artifact("sense models", artifacts::SENSE_MODELS, Command::WsiInduce)?;
    let records = load_substitutes(run)?;
    let models = formats::read_sense_models(&models_path)?;
    let assignments = assign_all(&models, records)?;
    let unseen = assignments.iter().filter(|a| a.sense == SenseId::Unseen).count();
    log::info!("assigned {} occurrences ({} unseen)", assignments.len(), unseen);
    run.write(artifacts::ASSIGNMENTS, &formats::assignments_string(&assignments))
}

fn score_types(run: &mut Run<'_>) -> Result<()> {
    let counts = run.artifact("counts file", artifacts::COUNTS, Command::Count)?;
    let vocab = run.artifact("vocabulary", artifacts::VOCAB, Command::Vocab)?;
    let stats = formats::read_counts(&counts)?.relemmatize(&formats::read_vocabulary(&vocab)?.lemma_table());
    let table = TypeScoreTable::from_counts(&stats, run.cfg.min_count)?;
    log::info!("scored {} (field, lemma) pairs", table.len());
    run.write(artifacts::TYPE_SCORES, &formats::type_scores_string(&table))
}

fn doc_labels(docs: &[Document], level: jargon_core::corpus::LabelLevel) -> HashMap<&str, &[String]> {
    docs.iter().map(|d| (d.doc_id.as_str(), d.labels(level))).collect()
}

fn score_senses(run: &mut Run<'_>) -> Result<()> {
    let counts = run.artifact("counts file", artifacts::COUNTS, Command::Count)?;
    let assignments = run.artifact("sense assignments", artifacts::ASSIGNMENTS, Command::WsiAssign)?;
    let docs = load_corpus(run)?;
    let stats = formats::read_counts(&counts)?;
    let assignments = formats::read_assignments(&assignments)?;
    let labels = doc_labels(&docs, run.cfg.label_level);
    let sense_counts = SenseCounts::accumulate(&assignments, |id| labels.get(id).copied())?;
    let table = SenseScoreTable::from_counts(&stats, &sense_counts, run.cfg.min_count)?;
    log::info!("scored {} (field, lemma, sense) triples", table.rows().count());
    run.write(artifacts::SENSE_SCORES, &formats::sense_scores_string(&table))?;
    run.write(artifacts::SENSE_WORD_SCORES, &formats::word_level_string(&table))
}

/// (doc_id → position → (lemma, sense)) for looking up token senses.
pub struct SenseIndex {
    by_doc: HashMap<String, BTreeMap<usize, (String, SenseId)>>,
}

impl SenseIndex {
    pub fn new(assignments: &[SenseAssignment]) -> Self {
        let mut by_doc: HashMap<String, BTreeMap<usize, (String, SenseId)>> = HashMap::new();
        for a in assignments {
            by_doc
                .entry(a.doc_id.clone())
                .or_default()
                .insert(a.position, (a.target_lemma.clone(), a.sense));
        }
        Self { by_doc }
    }

    /// Tokens of `doc` with the sense assigned to each position whose lemma
    /// matches the assignment.
    pub fn tokens(&self, doc: &Document, lemmas: &LemmaTable) -> DocumentTokens {
        let senses = self.by_doc.get(&doc.doc_id);
        let mut tokens = DocumentTokens::from_text(&doc.doc_id, &doc.text, lemmas, |p| {
            senses.and_then(|s| s.get(&p)).map(|(_, sense)| *sense)
        });
        if let Some(senses) = senses {
            for (p, t) in tokens.tokens.iter_mut().enumerate() {
                if let Some((lemma, _)) = senses.get(&p) {
                    if *lemma != t.lemma {
                        log::warn!(
                            "{}: position {p} is {:?} but was assigned as {lemma:?}",
                            doc.doc_id,
                            t.lemma
                        );
                        t.sense = None;
                    }
                }
            }
        }
        tokens
    }
}

struct ScoringInputs {
    lemmas: LemmaTable,
    types: TypeScoreTable,
    senses: SenseScoreTable,
    index: SenseIndex,
}

fn scoring_inputs(run: &mut Run<'_>) -> Result<ScoringInputs> {
    let vocab = run.artifact("vocabulary", artifacts::VOCAB, Command::Vocab)?;
    let types = run.artifact("type scores", artifacts::TYPE_SCORES, Command::ScoreTypes)?;
    let senses = run.artifact("sense scores", artifacts::SENSE_SCORES, Command::ScoreSenses)?;
    let assignments = run.artifact("sense assignments", artifacts::ASSIGNMENTS, Command::WsiAssign)?;
    let min_count = run.cfg.min_count;
    Ok(ScoringInputs {
        lemmas: formats::read_vocabulary(&vocab)?.lemma_table(),
        types: formats::read_type_scores(&types, min_count)?,
        senses: formats::read_sense_scores(&senses, min_count)?,
        index: SenseIndex::new(&formats::read_assignments(&assignments)?),
    })
}

fn jargon(run: &mut Run<'_>) -> Result<()> {
    let cfg = run.cfg;
    let inputs = scoring_inputs(run)?;
    let docs = load_corpus(run)?;
    let general = run
        .optional_input("general-purpose venue list", "general_venues", &cfg.general_venues)?
        .map(|p| formats::read_name_list(&p))
        .transpose()?
        .unwrap_or_default();
    let tables = ScoreTables::new(&inputs.types, &inputs.senses);

    let scored: Vec<(&Document, DocumentJargonScore)> = docs
        .par_iter()
        .filter(|d| !d.is_background() && !d.labels(cfg.label_level).is_empty())
        .filter_map(|d| {
            let tokens = inputs.index.tokens(d, &inputs.lemmas);
            let fields: Vec<&str> = d.labels(cfg.label_level).iter().map(String::as_str).collect();
            match score_document(&tokens, &fields, tables, cfg.cutoff) {
                Ok(s) => Some(Ok((d, s))),
                Err(jargon_core::Error::EmptyDocument(id)) => {
                    log::warn!("{id}: no countable tokens, not scored");
                    None
                }
                Err(e) => Some(Err(e)),
            }
        })
        .collect::<jargon_core::Result<_>>()?;

    let tally: VenueTally = docs.iter().collect();
    let classes = classify_venues(&tally, &general, &cfg.venue_rules());
    let mut venues = String::from("venue\tdocuments\tvenue_class\n");
    for (v, c) in &classes {
        let _ = writeln!(venues, "{v}\t{}\t{}", tally.documents(v), c.as_str());
    }

    let mut doc_rows = formats::DOC_SCORE_HEADER.join("\t");
    doc_rows.push('\n');
    let mut by_venue = Vec::new();
    for (d, s) in &scored {
        let class = d.venue.as_ref().and_then(|v| classes.get(v.as_str())).copied();
        let _ = writeln!(
            doc_rows,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            s.doc_id,
            s.fields.join(";"),
            d.venue.as_deref().unwrap_or(""),
            class.map_or(formats::NA, VenueClass::as_str),
            s.n_tokens,
            s.sense_count,
            s.type_count,
            s.sense_fraction(),
            s.type_fraction(),
            s.jargon_fraction()
        );
        if let (Some(class), [field]) = (class, s.fields.as_slice()) {
            by_venue.push(VenueScoredDocument {
                field,
                venue_class: class,
                score: s,
            });
        }
    }
    let audience = audience_design_table(&by_venue);
    let curve = expected_prefix_max_curve(&by_venue, &default_m_grid());
    log::info!(
        "scored {} documents, {} in classified venues",
        scored.len(),
        by_venue.len()
    );
    run.write(artifacts::DOC_SCORES, &doc_rows)?;
    run.write(artifacts::VENUES, &venues)?;
    run.write(artifacts::AUDIENCE, &formats::audience_string(&audience))?;
    run.write(artifacts::CURVE, &formats::curve_string(&curve))
}

fn paired_rows<S: WordScores>(
    rows: &mut Vec<(String, String, String)>,
    variant: &str,
    lexicon: &LabeledLexicon,
    scores: &S,
    seed: u64,
) {
    let mut push = |metric: &str, value: String| rows.push((metric.to_string(), variant.to_string(), value));
    match paired_score_comparison(lexicon, scores, seed) {
        Ok(c) => {
            push("paired_n", c.n.to_string());
            let mean = c.differences.iter().sum::<f64>() / c.n as f64;
            push("paired_mean_difference", mean.to_string());
            match c.test {
                PairedTest::Statistic { t, p, df } => {
                    push("paired_t", t.to_string());
                    push("paired_df", df.to_string());
                    push("paired_p", p.to_string());
                }
                PairedTest::Degenerate { .. } => {
                    push("paired_t", "degenerate".into());
                    push("paired_df", formats::NA.into());
                    push("paired_p", formats::NA.into());
                }
            }
        }
        Err(e) => {
            log::warn!("{variant}: paired comparison skipped: {e}");
            push("paired_n", fmt_opt(None));
        }
    }
}

/// The evaluation report rows for a lexicon against type and word-level
/// sense scores.
pub fn evaluation_rows<T: WordScores, S: WordScores>(
    lexicon: &LabeledLexicon,
    types: &T,
    senses: &S,
    cutoff: f64,
    seed: u64,
) -> Result<Vec<(String, String, String)>> {
    let grid = default_grid();
    let mut rows = vec![(
        "lexicon_pairs".to_string(),
        "all".to_string(),
        lexicon.len().to_string(),
    )];
    for (variant, scores) in [("type", types as &dyn WordScores), ("sense", senses as &dyn WordScores)] {
        rows.push((
            "recall_auc".into(),
            variant.into(),
            recall_auc(lexicon, scores, &grid)?.to_string(),
        ));
        rows.push((
            "recall_at_cutoff".into(),
            variant.into(),
            recall_at_threshold(lexicon, scores, cutoff)?.to_string(),
        ));
    }
    paired_rows(&mut rows, "type", lexicon, types, seed);
    paired_rows(&mut rows, "sense", lexicon, senses, seed);
    Ok(rows)
}

fn validate(run: &mut Run<'_>) -> Result<()> {
    let cfg = run.cfg;
    let lexicon = run.user_input("lexicon", "lexicon", &cfg.lexicon)?;
    let types = run.artifact("type scores", artifacts::TYPE_SCORES, Command::ScoreTypes)?;
    let senses = run.artifact(
        "word-level sense scores",
        artifacts::SENSE_WORD_SCORES,
        Command::ScoreSenses,
    )?;
    let lexicon = formats::read_lexicon(&lexicon)?;
    let types = formats::read_type_scores(&types, cfg.min_count)?;
    let senses = formats::read_word_level(&senses)?;
    let rows = evaluation_rows(&lexicon, &types, &senses, cfg.cutoff, cfg.seed)?;
    run.write(artifacts::EVAL, &formats::eval_report_string(&rows))
}

/// Subfields the citation matrix is built over: the hierarchy's when one is
/// given, otherwise every label on foreground documents and their citations.
pub fn subfield_universe(docs: &[Document], hierarchy: Option<&BTreeMap<String, String>>) -> BTreeSet<String> {
    if let Some(h) = hierarchy {
        return h.keys().cloned().collect();
    }
    docs.iter()
        .filter(|d| !d.is_background())
        .flat_map(|d| d.subfields.iter().chain(d.citing_subfields.iter().map(|(s, _)| s)))
        .filter(|s| *s != UNKNOWN_SUBFIELD)
        .cloned()
        .collect()
}

/// Builds the citation matrix in fixed-size shards on the current pool.
pub fn citation_matrix_sharded(universe: &BTreeSet<String>, docs: &[Document]) -> Result<CitationMatrix> {
    let shards = docs
        .par_chunks(SHARD_SIZE)
        .map(|chunk| {
            let mut m = CitationMatrix::new(universe.iter().cloned());
            for d in chunk.iter().filter(|d| !d.is_background()) {
                m.add_document(d).with_context(|| format!("document {}", d.doc_id))?;
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = CitationMatrix::new(universe.iter().cloned());
    for s in &shards {
        total.merge(s)?;
    }
    Ok(total)
}

fn load_hierarchy(run: &mut Run<'_>) -> Result<Option<BTreeMap<String, String>>> {
    let path = run.optional_input("subfield hierarchy", "hierarchy", &run.cfg.hierarchy.clone())?;
    Ok(path.map(|p| formats::read_hierarchy(&p)).transpose()?)
}

fn impact(run: &mut Run<'_>) -> Result<()> {
    let docs = load_corpus(run)?;
    let hierarchy = load_hierarchy(run)?;
    let universe = subfield_universe(&docs, hierarchy.as_ref());
    let matrix = citation_matrix_sharded(&universe, &docs)?;
    let vectors = SubfieldVectors::from_matrix(&matrix);
    for s in vectors.zero_vectors() {
        log::warn!("subfield {s:?} is never cited; its distance to every other subfield is 1");
    }
    let n = matrix.n_subfields();
    let rows: Vec<String> = docs
        .par_iter()
        .filter(|d| !d.is_background() && !d.citing_subfields.is_empty())
        .map(|d| {
            let known: BTreeSet<&str> = d
                .citing_subfields
                .iter()
                .filter(|(s, c)| s != UNKNOWN_SUBFIELD && *c > 0)
                .map(|(s, _)| s.as_str())
                .collect();
            let score = div(&d.citing_subfields, &vectors, n).with_context(|| format!("document {}", d.doc_id))?;
            Ok(format!("{}\t{}\t{}\n", d.doc_id, known.len(), fmt_opt(score)))
        })
        .collect::<Result<_>>()?;
    log::info!("citation matrix over {n} subfields; {} cited documents", rows.len());
    run.write(artifacts::CITATION_MATRIX, &formats::citation_matrix_string(&matrix))?;
    let mut out = String::from("doc_id\tn_citing_subfields\tdiv\n");
    out.extend(rows);
    run.write(artifacts::DIV, &out)
}

/// Year ranges of each bin, e.g. `2000-2004`.
pub fn bin_ranges(bins: &jargon_core::impact::TimeBins) -> Vec<String> {
    let mut ranges: Vec<(i32, i32)> = Vec::new();
    for y in bins.start..=bins.end {
        let Some(b) = bins.bin(y) else { continue };
        if b == ranges.len() {
            ranges.push((y, y));
        } else {
            ranges[b].1 = y;
        }
    }
    ranges.iter().map(|(a, b)| format!("{a}-{b}")).collect()
}

fn export_design(run: &mut Run<'_>) -> Result<()> {
    let cfg = run.cfg;
    let matrix = run.artifact("citation matrix", artifacts::CITATION_MATRIX, Command::Impact)?;
    let inputs = scoring_inputs(run)?;
    let docs = load_corpus(run)?;
    let hierarchy = load_hierarchy(run)?;
    if cfg.parent_field.is_some() && hierarchy.is_none() {
        log::warn!("parent_field set without a hierarchy; subfields are matched through document fields");
    }
    let matrix = formats::read_citation_matrix(&matrix)?;
    let vectors = SubfieldVectors::from_matrix(&matrix);
    let spec = DesignSpec {
        parent_field: cfg.parent_field.clone(),
        hierarchy: hierarchy.unwrap_or_default(),
        time_bins: cfg.time_bins(),
        max_subfields: cfg.max_subfields,
    };
    let tables = ScoreTables::new(&inputs.types, &inputs.senses);
    let level = cfg.label_level;
    let score = |d: &Document, subfields: &[&str]| {
        let tokens = inputs.index.tokens(d, &inputs.lemmas);
        match level {
            jargon_core::corpus::LabelLevel::Subfield => score_document(&tokens, subfields, tables, cfg.cutoff),
            jargon_core::corpus::LabelLevel::Field => {
                let fields: Vec<&str> = d.fields.iter().map(String::as_str).collect();
                score_document(&tokens, &fields, tables, cfg.cutoff)
            }
        }
    };
    let (rows, dropped) = design_rows(&docs, &spec, &vectors, matrix.n_subfields(), score)?;
    for (id, reason) in &dropped {
        log::debug!("{id}: dropped from design matrix: {reason}");
    }
    log::info!(
        "design matrix: {} rows, {} documents dropped",
        rows.len(),
        dropped.len()
    );
    let preamble = vec![
        format!("cutoff={}", cfg.cutoff),
        format!("time_bins={}", bin_ranges(&spec.time_bins).join(",")),
        "gini=relative mean absolute difference sum_ij |x_i - x_j| / (2 n^2 mean), no small-sample correction"
            .to_string(),
        format!(
            "div=(n/N)(1-gini)(mean cosine distance over ordered pairs of distinct citing subfields), N={}",
            matrix.n_subfields()
        ),
        format!("label_level={}", cfg.get("label_level").unwrap_or_default()),
        format!("parent_field={}", cfg.parent_field.as_deref().unwrap_or("")),
    ];
    run.write(artifacts::DESIGN, &formats::design_string(&preamble, &rows))?;
    let mut out = String::from("doc_id\treason\n");
    for (id, reason) in &dropped {
        let _ = writeln!(out, "{id}\t{reason}");
    }
    run.write(artifacts::DESIGN_DROPPED, &out)
}

/// Every command in pipeline order.
pub fn run_all(cfg: &PipelineConfig, threads: Option<usize>) -> Result<Vec<(Command, RunReport)>> {
    Command::ALL
        .iter()
        .map(|&c| Ok((c, run_with_threads(c, cfg, threads)?)))
        .collect()
}
