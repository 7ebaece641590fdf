//! Readers and writers for every file the pipeline exchanges.
//!
//! Tabular files are tab-separated UTF-8 with a header row; lines starting
//! with `#` are comments. Readers of files that other tools produce accept
//! them with or without the header. Floats are written in shortest
//! round-trip form and a missing score is written `NA`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use jargon_core::corpus::{CountStats, Document, Role, Vocabulary};
use jargon_core::impact::{CitationMatrix, DesignRow};
use jargon_core::jargon::{AudienceRow, CurvePoint};
use jargon_core::npmi::TypeScoreTable;
use jargon_core::senses::SenseScoreTable;
use jargon_core::text::{words, LemmaTable};
use jargon_core::validation::LabeledLexicon;
use jargon_core::wsi::{Sense, SenseAssignment, SenseId, SenseModel, SubstituteRecord};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

pub const NA: &str = "NA";

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `contents`, creating parent directories.
pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    let io = |source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(path, contents).map_err(io)
}

/// A data line with its 1-based line number, for diagnostics.
#[derive(Debug)]
pub struct Row<'t> {
    path: &'t Path,
    pub line: usize,
    pub cells: Vec<&'t str>,
}

impl<'t> Row<'t> {
    pub fn error(&self, message: impl Into<String>) -> FormatError {
        FormatError::Parse {
            path: self.path.to_path_buf(),
            line: self.line,
            message: message.into(),
        }
    }

    pub fn cell(&self, i: usize) -> &'t str {
        self.cells[i]
    }

    pub fn parse<T: std::str::FromStr>(&self, i: usize, what: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.cells[i]
            .parse()
            .map_err(|e| self.error(format!("invalid {what} {:?}: {e}", self.cells[i])))
    }

    pub fn parse_opt_f64(&self, i: usize, what: &str) -> Result<Option<f64>> {
        if self.cells[i] == NA {
            Ok(None)
        } else {
            self.parse(i, what).map(Some)
        }
    }

    /// A single normalized word, as the tokenizer would produce it.
    pub fn word(&self, i: usize, what: &str) -> Result<String> {
        let mut ws = words(self.cells[i]);
        if ws.len() != 1 {
            return Err(self.error(format!("{what} {:?} is not a single word", self.cells[i])));
        }
        Ok(ws.remove(0))
    }
}

/// Splits `text` into tab-separated rows of exactly `header.len()` cells.
/// A first row equal to `header` is skipped; it is required when
/// `header_required` is set.
pub fn tsv_rows<'t>(path: &'t Path, text: &'t str, header: &[&str], header_required: bool) -> Result<Vec<Row<'t>>> {
    let mut rows = Vec::new();
    let mut first = true;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let row = Row {
            path,
            line: i + 1,
            cells: line.split('\t').collect(),
        };
        if first {
            first = false;
            if row.cells == header {
                continue;
            }
            if header_required {
                return Err(row.error(format!("expected header {:?}", header.join("\t"))));
            }
        }
        if row.cells.len() != header.len() {
            return Err(row.error(format!(
                "expected {} columns ({}), found {}",
                header.len(),
                header.join(", "),
                row.cells.len()
            )));
        }
        rows.push(row);
    }
    if first && header_required {
        return Err(FormatError::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "empty file".into(),
        });
    }
    Ok(rows)
}

fn header_line(out: &mut String, header: &[&str]) {
    out.push_str(&header.join("\t"));
    out.push('\n');
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), |v| v.to_string())
}

// ---- corpus -------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CorpusRecord {
    doc_id: String,
    text: String,
    #[serde(default)]
    fields: Vec<String>,
    #[serde(default)]
    subfields: Vec<String>,
    #[serde(default)]
    venue: Option<String>,
    #[serde(default)]
    year: Option<i32>,
    #[serde(default)]
    role: Option<String>,
    #[serde(default)]
    citing_subfields: Vec<(String, u64)>,
    #[serde(default)]
    n_citations: Option<u64>,
    #[serde(default)]
    n_authors: Option<u32>,
    #[serde(default)]
    n_references: Option<u32>,
}

/// Reads newline-delimited JSON documents.
pub fn read_corpus(path: &Path) -> Result<Vec<Document>> {
    let text = read_text(path)?;
    let mut docs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| FormatError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let r: CorpusRecord = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        let role = match r.role.as_deref() {
            None | Some("foreground") => Role::Foreground,
            Some("background") => Role::Background,
            Some(other) => return Err(err(format!("unknown role {other:?}"))),
        };
        docs.push(Document {
            doc_id: r.doc_id,
            text: r.text,
            fields: r.fields,
            subfields: r.subfields,
            venue: r.venue,
            year: r.year,
            role,
            citing_subfields: r.citing_subfields,
            n_citations: r.n_citations,
            n_authors: r.n_authors,
            n_references: r.n_references,
        });
    }
    Ok(docs)
}

pub fn corpus_string(docs: &[Document]) -> String {
    let mut out = String::new();
    for d in docs {
        let r = CorpusRecord {
            doc_id: d.doc_id.clone(),
            text: d.text.clone(),
            fields: d.fields.clone(),
            subfields: d.subfields.clone(),
            venue: d.venue.clone(),
            year: d.year,
            role: Some(
                match d.role {
                    Role::Foreground => "foreground",
                    Role::Background => "background",
                }
                .into(),
            ),
            citing_subfields: d.citing_subfields.clone(),
            n_citations: d.n_citations,
            n_authors: d.n_authors,
            n_references: d.n_references,
        };
        out.push_str(&serde_json::to_string(&r).expect("corpus records serialize"));
        out.push('\n');
    }
    out
}

pub fn write_corpus(path: &Path, docs: &[Document]) -> Result<()> {
    write_text(path, &corpus_string(docs))
}

// ---- word lists and small tables -----------------------------------------

/// One normalized word per line.
pub fn read_word_list(path: &Path) -> Result<BTreeSet<String>> {
    let text = read_text(path)?;
    let mut out = BTreeSet::new();
    for row in tsv_rows(path, &text, &["word"], false)? {
        out.insert(row.word(0, "word")?);
    }
    Ok(out)
}

pub fn word_list_string<'a>(words: impl IntoIterator<Item = &'a str>) -> String {
    words.into_iter().map(|w| format!("{w}\n")).collect()
}

/// One raw, trimmed entry per line (venue names keep spaces and case).
pub fn read_name_list(path: &Path) -> Result<BTreeSet<String>> {
    let text = read_text(path)?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

const LEMMA_HEADER: &[&str] = &["word", "lemma"];

pub fn read_lemma_table(path: &Path) -> Result<LemmaTable> {
    let text = read_text(path)?;
    let mut table = LemmaTable::new();
    for row in tsv_rows(path, &text, LEMMA_HEADER, false)? {
        table.insert(row.word(0, "word")?, row.word(1, "lemma")?);
    }
    Ok(table)
}

pub fn read_vocabulary(path: &Path) -> Result<Vocabulary> {
    let text = read_text(path)?;
    let rows = tsv_rows(path, &text, LEMMA_HEADER, true)?;
    let pairs = rows
        .iter()
        .map(|r| Ok((r.word(0, "word")?, r.word(1, "lemma")?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Vocabulary::from_words(pairs))
}

pub fn vocabulary_string(vocab: &Vocabulary) -> String {
    let mut out = String::new();
    header_line(&mut out, LEMMA_HEADER);
    for (w, l) in vocab.words() {
        let _ = writeln!(out, "{w}\t{l}");
    }
    out
}

const HIERARCHY_HEADER: &[&str] = &["subfield", "field"];

/// subfield → parent field
pub fn read_hierarchy(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = read_text(path)?;
    let mut out = BTreeMap::new();
    for row in tsv_rows(path, &text, HIERARCHY_HEADER, false)? {
        if let Some(prev) = out.insert(row.cell(0).to_string(), row.cell(1).to_string()) {
            if prev != row.cell(1) {
                return Err(row.error(format!("subfield {:?} has two parents", row.cell(0))));
            }
        }
    }
    Ok(out)
}

const LEXICON_HEADER: &[&str] = &["lemma", "subfield"];

pub fn read_lexicon(path: &Path) -> Result<LabeledLexicon> {
    let text = read_text(path)?;
    let rows = tsv_rows(path, &text, LEXICON_HEADER, false)?;
    rows.iter()
        .map(|r| Ok((r.word(0, "lemma")?, r.cell(1).to_string())))
        .collect()
}

pub fn lexicon_string(lexicon: &LabeledLexicon) -> String {
    let mut out = String::new();
    header_line(&mut out, LEXICON_HEADER);
    for (l, s) in lexicon.iter() {
        let _ = writeln!(out, "{l}\t{s}");
    }
    out
}

// ---- counts ---------------------------------------------------------------

/// Line-tagged TSV: `total`, `documents`, `field`, `word`, `word_field`,
/// `venue` and `word_venue` records.
pub fn counts_string(stats: &CountStats) -> String {
    let mut out = String::from("# jargon counts\n");
    let _ = writeln!(out, "total\t{}", stats.total_tokens);
    let _ = writeln!(out, "documents\t{}", stats.documents);
    for (f, n) in &stats.tokens_per_field {
        let _ = writeln!(out, "field\t{f}\t{n}");
    }
    for (w, n) in &stats.word_counts {
        let _ = writeln!(out, "word\t{w}\t{n}");
    }
    for (w, per) in &stats.word_field_counts {
        for (f, n) in per {
            let _ = writeln!(out, "word_field\t{w}\t{f}\t{n}");
        }
    }
    for (v, n) in &stats.venue_doc_counts {
        let _ = writeln!(out, "venue\t{v}\t{n}");
    }
    for (w, vs) in &stats.word_venues {
        for v in vs {
            let _ = writeln!(out, "word_venue\t{w}\t{v}");
        }
    }
    out
}

pub fn read_counts(path: &Path) -> Result<CountStats> {
    let text = read_text(path)?;
    let mut stats = CountStats::default();
    let mut saw_total = false;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let row = Row {
            path,
            line: i + 1,
            cells: line.split('\t').collect(),
        };
        let arity = |n: usize| {
            if row.cells.len() == n {
                Ok(())
            } else {
                Err(row.error(format!(
                    "{} record needs {} columns, found {}",
                    row.cells[0],
                    n,
                    row.cells.len()
                )))
            }
        };
        match row.cells[0] {
            "total" => {
                arity(2)?;
                stats.total_tokens = row.parse(1, "total")?;
                saw_total = true;
            }
            "documents" => {
                arity(2)?;
                stats.documents = row.parse(1, "document count")?;
            }
            "field" => {
                arity(3)?;
                stats
                    .tokens_per_field
                    .insert(row.cell(1).into(), row.parse(2, "count")?);
            }
            "word" => {
                arity(3)?;
                stats.word_counts.insert(row.cell(1).into(), row.parse(2, "count")?);
            }
            "word_field" => {
                arity(4)?;
                stats
                    .word_field_counts
                    .entry(row.cell(1).into())
                    .or_default()
                    .insert(row.cell(2).into(), row.parse(3, "count")?);
            }
            "venue" => {
                arity(3)?;
                stats
                    .venue_doc_counts
                    .insert(row.cell(1).into(), row.parse(2, "count")?);
            }
            "word_venue" => {
                arity(3)?;
                stats
                    .word_venues
                    .entry(row.cell(1).into())
                    .or_default()
                    .insert(row.cell(2).into());
            }
            other => return Err(row.error(format!("unknown record kind {other:?}"))),
        }
    }
    if !saw_total {
        return Err(FormatError::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "missing total record".into(),
        });
    }
    Ok(stats)
}

// ---- substitutes, sense models, assignments --------------------------------

fn substitute_header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = ["doc_id", "position", "target_lemma"].map(String::from).into();
    h.extend((1..=n).map(|i| format!("sub{i}")));
    h
}

/// Reads rows of `doc_id, position, target_lemma, sub1..subN`.
pub fn read_substitutes(path: &Path, n_substitutes: usize) -> Result<Vec<SubstituteRecord>> {
    let text = read_text(path)?;
    let header = substitute_header(n_substitutes);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = tsv_rows(path, &text, &header, false)?;
    let mut out = Vec::with_capacity(rows.len());
    for r in &rows {
        let subs = (3..3 + n_substitutes)
            .map(|i| r.word(i, "substitute"))
            .collect::<Result<Vec<_>>>()?;
        out.push(SubstituteRecord::new(
            r.cell(0),
            r.parse(1, "position")?,
            r.word(2, "target lemma")?,
            subs,
        ));
    }
    Ok(out)
}

pub fn substitutes_string(records: &[SubstituteRecord], n_substitutes: usize) -> String {
    let mut out = String::new();
    out.push_str(&substitute_header(n_substitutes).join("\t"));
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            r.doc_id,
            r.position,
            r.target_lemma,
            r.substitutes.join("\t")
        );
    }
    out
}

/// One block per lemma:
///
/// ```text
/// lemma	bass
/// resolution	0.25
/// iterations	2
/// converged	true
/// fallback	false
/// sense	0	fish	12	trout	9
/// end
/// ```
#[allow(clippy::tabs_in_doc_comments)]
pub fn sense_models_string(models: &[SenseModel]) -> String {
    let mut out = String::from("# jargon sense models\n");
    for m in models {
        let _ = writeln!(out, "lemma\t{}", m.target_lemma);
        let _ = writeln!(out, "resolution\t{}", m.resolution);
        let _ = writeln!(out, "iterations\t{}", m.iterations);
        let _ = writeln!(out, "converged\t{}", m.converged);
        let _ = writeln!(out, "fallback\t{}", m.single_sense_fallback);
        for (i, s) in m.senses.iter().enumerate() {
            let _ = write!(out, "sense\t{i}");
            for (sub, n) in &s.substitutes {
                let _ = write!(out, "\t{sub}\t{n}");
            }
            out.push('\n');
        }
        out.push_str("end\n");
    }
    out
}

pub fn read_sense_models(path: &Path) -> Result<Vec<SenseModel>> {
    let text = read_text(path)?;
    let mut models = Vec::new();
    let mut current: Option<SenseModel> = None;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let row = Row {
            path,
            line: i + 1,
            cells: line.split('\t').collect(),
        };
        let key = row.cells[0];
        if key == "lemma" {
            if current.is_some() {
                return Err(row.error("lemma block not closed with end"));
            }
            if row.cells.len() != 2 {
                return Err(row.error("lemma record needs 2 columns"));
            }
            current = Some(SenseModel {
                target_lemma: row.cell(1).to_string(),
                senses: Vec::new(),
                single_sense_fallback: false,
                resolution: 0.0,
                iterations: 0,
                converged: false,
            });
            continue;
        }
        let Some(m) = current.as_mut() else {
            return Err(row.error(format!("{key:?} outside a lemma block")));
        };
        let two = || {
            if row.cells.len() == 2 {
                Ok(())
            } else {
                Err(row.error(format!("{key} record needs 2 columns")))
            }
        };
        match key {
            "resolution" => {
                two()?;
                m.resolution = row.parse(1, "resolution")?;
            }
            "iterations" => {
                two()?;
                m.iterations = row.parse(1, "iterations")?;
            }
            "converged" => {
                two()?;
                m.converged = row.parse(1, "converged flag")?;
            }
            "fallback" => {
                two()?;
                m.single_sense_fallback = row.parse(1, "fallback flag")?;
            }
            "sense" => {
                if row.cells.len() < 4 || !row.cells.len().is_multiple_of(2) {
                    return Err(row.error("sense record needs an index and substitute/count pairs"));
                }
                let index: usize = row.parse(1, "sense index")?;
                if index != m.senses.len() {
                    return Err(row.error(format!("expected sense {}, found {index}", m.senses.len())));
                }
                let mut substitutes = Vec::new();
                for j in (2..row.cells.len()).step_by(2) {
                    substitutes.push((row.cell(j).to_string(), row.parse(j + 1, "substitute count")?));
                }
                m.senses.push(Sense { substitutes });
            }
            "end" => {
                let m = current.take().expect("inside a block");
                if m.senses.is_empty() {
                    return Err(row.error(format!("lemma {:?} has no senses", m.target_lemma)));
                }
                models.push(m);
            }
            other => return Err(row.error(format!("unknown record kind {other:?}"))),
        }
    }
    if let Some(m) = current {
        return Err(FormatError::Parse {
            path: path.to_path_buf(),
            line: text.lines().count(),
            message: format!("lemma {:?} block not closed with end", m.target_lemma),
        });
    }
    Ok(models)
}

const ASSIGNMENT_HEADER: &[&str] = &["doc_id", "position", "target_lemma", "sense_index"];

pub fn assignments_string(assignments: &[SenseAssignment]) -> String {
    let mut out = String::new();
    header_line(&mut out, ASSIGNMENT_HEADER);
    for a in assignments {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", a.doc_id, a.position, a.target_lemma, a.sense);
    }
    out
}

pub fn read_assignments(path: &Path) -> Result<Vec<SenseAssignment>> {
    let text = read_text(path)?;
    tsv_rows(path, &text, ASSIGNMENT_HEADER, true)?
        .iter()
        .map(|r| {
            Ok(SenseAssignment {
                doc_id: r.cell(0).to_string(),
                position: r.parse(1, "position")?,
                target_lemma: r.cell(2).to_string(),
                sense: SenseId::parse(r.cell(3))
                    .ok_or_else(|| r.error(format!("invalid sense index {:?}", r.cell(3))))?,
            })
        })
        .collect()
}

// ---- score tables -----------------------------------------------------------

const TYPE_HEADER: &[&str] = &["field", "lemma", "score", "count_in_field"];
const SENSE_HEADER: &[&str] = &["field", "lemma", "sense_index", "score", "count_in_field"];
const WORD_LEVEL_HEADER: &[&str] = &["field", "lemma", "score"];

pub fn type_scores_string(table: &TypeScoreTable) -> String {
    let mut out = String::new();
    header_line(&mut out, TYPE_HEADER);
    for (f, l, t) in table.rows() {
        let _ = writeln!(out, "{f}\t{l}\t{}\t{}", t.score, t.count_in_field);
    }
    out
}

pub fn read_type_scores(path: &Path, min_count: u64) -> Result<TypeScoreTable> {
    let text = read_text(path)?;
    let mut table = TypeScoreTable::new(min_count);
    for r in tsv_rows(path, &text, TYPE_HEADER, true)? {
        table.insert(r.cell(0), r.cell(1), r.parse(2, "score")?, r.parse(3, "count")?);
    }
    Ok(table)
}

pub fn sense_scores_string(table: &SenseScoreTable) -> String {
    let mut out = String::new();
    header_line(&mut out, SENSE_HEADER);
    for (f, l, i, t) in table.rows() {
        let _ = writeln!(out, "{f}\t{l}\t{i}\t{}\t{}", t.score, t.count_in_field);
    }
    out
}

pub fn read_sense_scores(path: &Path, min_count: u64) -> Result<SenseScoreTable> {
    let text = read_text(path)?;
    let mut table = SenseScoreTable::new(min_count);
    for r in tsv_rows(path, &text, SENSE_HEADER, true)? {
        table.insert(
            r.cell(0),
            r.cell(1),
            r.parse(2, "sense index")?,
            r.parse(3, "score")?,
            r.parse(4, "count")?,
        );
    }
    Ok(table)
}

pub fn word_level_string(table: &SenseScoreTable) -> String {
    let mut out = String::new();
    header_line(&mut out, WORD_LEVEL_HEADER);
    for (f, l, s) in table.word_level_rows() {
        let _ = writeln!(out, "{f}\t{l}\t{s}");
    }
    out
}

/// (field, lemma) → word-level score
pub fn read_word_level(path: &Path) -> Result<BTreeMap<(String, String), f64>> {
    let text = read_text(path)?;
    tsv_rows(path, &text, WORD_LEVEL_HEADER, true)?
        .iter()
        .map(|r| Ok(((r.cell(0).to_string(), r.cell(1).to_string()), r.parse(2, "score")?)))
        .collect()
}

// ---- jargon reports -------------------------------------------------------------

pub const DOC_SCORE_HEADER: &[&str] = &[
    "doc_id",
    "fields",
    "venue",
    "venue_class",
    "n_tokens",
    "sense_jargon",
    "type_jargon",
    "sense_fraction",
    "type_fraction",
    "jargon_fraction",
];

pub fn audience_string(rows: &[AudienceRow]) -> String {
    let mut out = String::new();
    header_line(&mut out, &["field", "venue_class", "mean", "ci_low", "ci_high", "n"]);
    for r in rows {
        let ci = &r.jargon_fraction;
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.field,
            r.venue_class.as_str(),
            ci.mean,
            fmt_opt(ci.low()),
            fmt_opt(ci.high()),
            ci.n
        );
    }
    out
}

pub fn curve_string(points: &[CurvePoint]) -> String {
    let mut out = String::new();
    header_line(&mut out, &["field", "venue_class", "m", "mean", "ci_low", "ci_high"]);
    for p in points {
        let ci = &p.prefix_max;
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            p.field,
            p.venue_class.as_str(),
            p.m,
            ci.mean,
            fmt_opt(ci.low()),
            fmt_opt(ci.high())
        );
    }
    out
}

/// Rows of (metric, variant, value).
pub fn eval_report_string(rows: &[(String, String, String)]) -> String {
    let mut out = String::new();
    header_line(&mut out, &["metric", "variant", "value"]);
    for (m, v, x) in rows {
        let _ = writeln!(out, "{m}\t{v}\t{x}");
    }
    out
}

// ---- impact -------------------------------------------------------------------

const CITED_CORNER: &str = "cited\\citing";

/// Square table with a label row and column; the last label is `unknown`.
pub fn citation_matrix_string(m: &CitationMatrix) -> String {
    let labels: Vec<&str> = m
        .subfields()
        .iter()
        .map(String::as_str)
        .chain([jargon_core::impact::UNKNOWN_SUBFIELD])
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "{CITED_CORNER}\t{}", labels.join("\t"));
    for (i, label) in labels.iter().enumerate() {
        out.push_str(label);
        for c in m.row(i) {
            let _ = write!(out, "\t{c}");
        }
        out.push('\n');
    }
    out
}

pub fn read_citation_matrix(path: &Path) -> Result<CitationMatrix> {
    let text = read_text(path)?;
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let parse_err = |line: usize, message: String| FormatError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let Some((hl, header)) = lines.next() else {
        return Err(parse_err(0, "empty file".into()));
    };
    let labels: Vec<&str> = header.split('\t').collect();
    if labels.first() != Some(&CITED_CORNER) || labels.last() != Some(&jargon_core::impact::UNKNOWN_SUBFIELD) {
        return Err(parse_err(
            hl + 1,
            format!("header must start with {CITED_CORNER:?} and end with \"unknown\""),
        ));
    }
    let labels = &labels[1..];
    let mut m = CitationMatrix::new(labels[..labels.len() - 1].iter().copied());
    if m.n_subfields() + 1 != labels.len() {
        return Err(parse_err(hl + 1, "duplicate subfield labels".into()));
    }
    let mut seen = 0;
    for (i, line) in lines {
        let row = Row {
            path,
            line: i + 1,
            cells: line.split('\t').collect(),
        };
        if row.cells.len() != labels.len() + 1 {
            return Err(row.error(format!("expected {} columns", labels.len() + 1)));
        }
        let r = m.index(row.cell(0)).map_err(|e| row.error(e.to_string()))?;
        for (j, label) in labels.iter().enumerate() {
            let c = m.index(label).map_err(|e| row.error(e.to_string()))?;
            let n = row.parse(j + 1, "count")?;
            m.set(r, c, n);
        }
        seen += 1;
    }
    if seen != labels.len() {
        return Err(parse_err(0, format!("expected {} rows, found {seen}", labels.len())));
    }
    Ok(m)
}

pub const DESIGN_HEADER: &[&str] = &[
    "doc_id",
    "type_jargon_fraction",
    "sense_jargon_fraction",
    "time_bin",
    "abstract_length",
    "n_authors",
    "n_references",
    "n_subfields",
    "venue_mean_citations",
    "citation_count",
    "div",
];

/// `preamble` lines are written as `#` comments above the header.
pub fn design_string(preamble: &[String], rows: &[DesignRow]) -> String {
    let mut out = String::new();
    for p in preamble {
        let _ = writeln!(out, "# {p}");
    }
    header_line(&mut out, DESIGN_HEADER);
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.doc_id,
            r.type_jargon_fraction,
            r.sense_jargon_fraction,
            r.time_bin,
            r.abstract_length,
            r.n_authors,
            r.n_references,
            r.n_subfields,
            r.venue_mean_citations,
            r.citation_count,
            fmt_opt(r.div)
        );
    }
    out
}
