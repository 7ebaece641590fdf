//! Interdisciplinary impact: citation matrices, subfield distances, Gini
//! balance, DIV, and regression design rows.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::Document;
use crate::jargon::DocumentJargonScore;
use crate::{Error, Result};

/// Label marking a citing or cited subfield as unknown.
pub const UNKNOWN_SUBFIELD: &str = "unknown";

/// (N+1)×(N+1) counts: rows are cited subfields, columns citing subfields,
/// the last index is the unknown subfield.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationMatrix {
    subfields: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl CitationMatrix {
    /// `subfields` is deduplicated and sorted.
    pub fn new<S: Into<String>>(subfields: impl IntoIterator<Item = S>) -> Self {
        let mut subfields: Vec<String> = subfields.into_iter().map(Into::into).collect();
        subfields.sort();
        subfields.dedup();
        subfields.retain(|s| s != UNKNOWN_SUBFIELD);
        let size = subfields.len() + 1;
        Self {
            subfields,
            counts: vec![vec![0; size]; size],
        }
    }

    /// N, the number of known subfields.
    pub fn n_subfields(&self) -> usize {
        self.subfields.len()
    }

    pub fn subfields(&self) -> &[String] {
        &self.subfields
    }

    pub fn unknown_index(&self) -> usize {
        self.subfields.len()
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        if label == UNKNOWN_SUBFIELD {
            return Ok(self.unknown_index());
        }
        self.subfields
            .binary_search_by(|s| s.as_str().cmp(label))
            .map_err(|_| Error::UnknownSubfield(String::from(label)))
    }

    pub fn get(&self, cited: usize, citing: usize) -> u64 {
        self.counts[cited][citing]
    }

    pub fn set(&mut self, cited: usize, citing: usize, count: u64) {
        self.counts[cited][citing] = count;
    }

    pub fn row(&self, cited: usize) -> &[u64] {
        &self.counts[cited]
    }

    /// Adds the citations a document received. A document without subfields
    /// is cited as unknown; with several subfields each one receives them.
    pub fn add_document(&mut self, doc: &Document) -> Result<()> {
        if doc.citing_subfields.is_empty() {
            return Ok(());
        }
        let mut rows: Vec<usize> = doc.subfields.iter().map(|s| self.index(s)).collect::<Result<_>>()?;
        rows.sort_unstable();
        rows.dedup();
        if rows.is_empty() {
            rows.push(self.unknown_index());
        }
        let cols: Vec<(usize, u64)> = doc
            .citing_subfields
            .iter()
            .map(|(s, n)| Ok((self.index(s)?, *n)))
            .collect::<Result<_>>()?;
        for &r in &rows {
            for &(c, n) in &cols {
                self.counts[r][c] += n;
            }
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &CitationMatrix) -> Result<()> {
        if self.subfields != other.subfields {
            return Err(Error::InvalidParameter("citation matrices over different subfields"));
        }
        for (row, other_row) in self.counts.iter_mut().zip(&other.counts) {
            for (a, b) in row.iter_mut().zip(other_row) {
                *a += b;
            }
        }
        Ok(())
    }
}

/// Builds the matrix over `universe` from a document stream.
pub fn build_citation_matrix<'d, S: Into<String>>(
    universe: impl IntoIterator<Item = S>,
    docs: impl IntoIterator<Item = &'d Document>,
) -> Result<CitationMatrix> {
    let mut m = CitationMatrix::new(universe);
    for doc in docs {
        m.add_document(doc)?;
    }
    Ok(m)
}

fn cosine_distance(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = libm::sqrt(a.iter().map(|x| x * x).sum::<f64>());
    let nb = libm::sqrt(b.iter().map(|x| x * x).sum::<f64>());
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    (1.0 - dot / (na * nb)).clamp(0.0, 1.0)
}

/// Each known subfield's row of the citation matrix, compared by cosine
/// distance. A zero row is at distance 1 from every other subfield.
#[derive(Debug, Clone, PartialEq)]
pub struct SubfieldVectors {
    vectors: BTreeMap<String, Vec<f64>>,
}

impl SubfieldVectors {
    pub fn from_matrix(matrix: &CitationMatrix) -> Self {
        let vectors = matrix
            .subfields
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), matrix.row(i).iter().map(|&n| n as f64).collect()))
            .collect();
        Self { vectors }
    }

    pub fn from_vectors(vectors: BTreeMap<String, Vec<f64>>) -> Self {
        Self { vectors }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, subfield: &str) -> bool {
        self.vectors.contains_key(subfield)
    }

    /// Subfields whose vector is all zeros.
    pub fn zero_vectors(&self) -> impl Iterator<Item = &str> {
        self.vectors
            .iter()
            .filter(|(_, v)| v.iter().all(|x| *x == 0.0))
            .map(|(s, _)| s.as_str())
    }

    pub fn distance(&self, a: &str, b: &str) -> Result<f64> {
        let va = self
            .vectors
            .get(a)
            .ok_or_else(|| Error::MissingVector(String::from(a)))?;
        let vb = self
            .vectors
            .get(b)
            .ok_or_else(|| Error::MissingVector(String::from(b)))?;
        if a == b {
            return Ok(0.0);
        }
        Ok(cosine_distance(va, vb))
    }
}

/// Gini coefficient, `Σ_ij |x_i − x_j| / (2 n² mean)`, evaluated in
/// O(n log n) from the sorted values.
pub fn gini(counts: &[f64]) -> Result<f64> {
    if counts.is_empty() {
        return Err(Error::Empty("gini of an empty list"));
    }
    if counts.iter().any(|x| x.is_nan() || *x < 0.0) {
        return Err(Error::InvalidParameter("gini needs non-negative counts"));
    }
    let total: f64 = counts.iter().sum();
    if total == 0.0 {
        return Err(Error::InvalidParameter("gini needs a positive total"));
    }
    let mut sorted = counts.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, x)| (2.0 * (i + 1) as f64 - n - 1.0) * x)
        .sum();
    Ok(weighted / (n * total))
}

/// DIV of a citing set: `(n/N) · (1 − Gini) · mean_{i≠j} d_ij`.
///
/// Unknown citing subfields are not part of the set. Returns `Ok(None)` when
/// fewer than two known subfields cite.
pub fn div(citing: &[(String, u64)], vectors: &SubfieldVectors, n_subfields: usize) -> Result<Option<f64>> {
    let mut set: BTreeMap<&str, u64> = BTreeMap::new();
    for (s, n) in citing {
        if s != UNKNOWN_SUBFIELD && *n > 0 {
            *set.entry(s.as_str()).or_default() += n;
        }
    }
    let n = set.len();
    if n < 2 {
        return Ok(None);
    }
    if n_subfields == 0 {
        return Err(Error::InvalidParameter("N must be positive"));
    }
    let names: Vec<&str> = set.keys().copied().collect();
    let mut pair_sum = 0.0;
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            pair_sum += 2.0 * vectors.distance(a, b)?;
        }
    }
    let disparity = pair_sum / (n * (n - 1)) as f64;
    let counts: Vec<f64> = set.values().map(|&c| c as f64).collect();
    let balance = 1.0 - gini(&counts)?;
    Ok(Some(n as f64 / n_subfields as f64 * balance * disparity))
}

/// Evenly sized, inclusive year bins over `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeBins {
    pub start: i32,
    pub end: i32,
    pub bins: usize,
}

impl Default for TimeBins {
    fn default() -> Self {
        Self {
            start: 2000,
            end: 2014,
            bins: 3,
        }
    }
}

impl TimeBins {
    pub fn bin(&self, year: i32) -> Option<usize> {
        if year < self.start || year > self.end || self.bins == 0 {
            return None;
        }
        let span = (self.end - self.start + 1) as usize;
        Some((year - self.start) as usize * self.bins / span)
    }

    pub fn contains(&self, year: i32) -> bool {
        self.bin(year).is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpec {
    /// Restrict to documents in this parent field, summing jargon over their
    /// subfields that belong to it.
    pub parent_field: Option<String>,
    /// subfield → parent field
    pub hierarchy: BTreeMap<String, String>,
    pub time_bins: TimeBins,
    pub max_subfields: usize,
}

impl Default for DesignSpec {
    fn default() -> Self {
        Self {
            parent_field: None,
            hierarchy: BTreeMap::new(),
            time_bins: TimeBins::default(),
            max_subfields: 2,
        }
    }
}

impl DesignSpec {
    /// The document's subfields that count toward its jargon scores, or
    /// `None` when it falls outside the analyzed field.
    pub fn scoring_subfields<'d>(&self, doc: &'d Document) -> Option<Vec<&'d str>> {
        let subs: Vec<&str> = match &self.parent_field {
            None => doc.subfields.iter().map(String::as_str).collect(),
            Some(parent) => doc
                .subfields
                .iter()
                .filter(|s| match self.hierarchy.get(s.as_str()) {
                    Some(p) => p == parent,
                    None => doc.fields.iter().any(|f| f == parent),
                })
                .map(String::as_str)
                .collect(),
        };
        (!subs.is_empty()).then_some(subs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignRow {
    pub doc_id: String,
    pub type_jargon_fraction: f64,
    pub sense_jargon_fraction: f64,
    pub time_bin: usize,
    pub abstract_length: usize,
    pub n_authors: u32,
    pub n_references: u32,
    pub n_subfields: usize,
    pub venue_mean_citations: f64,
    pub citation_count: u64,
    pub div: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DropReason {
    Background,
    SubfieldCount(usize),
    OutsideField,
    MissingYear,
    OutsideWindow(i32),
    MissingVenue,
    MissingCitations,
    MissingAuthors,
    MissingReferences,
    Scoring(Error),
}

impl core::fmt::Display for DropReason {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DropReason::Background => f.write_str("background document"),
            DropReason::SubfieldCount(n) => write!(f, "{n} subfields"),
            DropReason::OutsideField => f.write_str("no subfield in the analyzed field"),
            DropReason::MissingYear => f.write_str("missing year"),
            DropReason::OutsideWindow(y) => write!(f, "year {y} outside the time bins"),
            DropReason::MissingVenue => f.write_str("missing venue"),
            DropReason::MissingCitations => f.write_str("missing citation count"),
            DropReason::MissingAuthors => f.write_str("missing author count"),
            DropReason::MissingReferences => f.write_str("missing reference count"),
            DropReason::Scoring(e) => write!(f, "scoring failed: {e}"),
        }
    }
}

/// Mean citations per article of each venue over foreground documents in
/// the time window.
pub fn venue_mean_citations<'d>(
    docs: impl IntoIterator<Item = &'d Document>,
    bins: &TimeBins,
) -> BTreeMap<String, f64> {
    let mut sums: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
    for doc in docs {
        if doc.is_background() || !doc.year.is_some_and(|y| bins.contains(y)) {
            continue;
        }
        if let (Some(v), Some(c)) = (&doc.venue, doc.n_citations) {
            let e = sums.entry(v.as_str()).or_default();
            e.0 += c;
            e.1 += 1;
        }
    }
    sums.into_iter()
        .map(|(v, (s, n))| (String::from(v), s as f64 / n as f64))
        .collect()
}

pub type DesignOutput = (Vec<DesignRow>, Vec<(String, DropReason)>);

/// One design row per eligible document; ineligible documents come back
/// with the reason they were dropped. `score` scores a document against
/// the given subfields.
pub fn design_rows<'d>(
    docs: &'d [Document],
    spec: &DesignSpec,
    vectors: &SubfieldVectors,
    n_subfields: usize,
    score: impl Fn(&'d Document, &[&'d str]) -> Result<DocumentJargonScore>,
) -> Result<DesignOutput> {
    let venue_means = venue_mean_citations(docs, &spec.time_bins);
    let mut rows = Vec::new();
    let mut dropped = Vec::new();
    for doc in docs {
        match design_row(doc, spec, vectors, n_subfields, &venue_means, &score)? {
            Ok(row) => rows.push(row),
            Err(reason) => dropped.push((doc.doc_id.clone(), reason)),
        }
    }
    Ok((rows, dropped))
}

fn design_row<'d>(
    doc: &'d Document,
    spec: &DesignSpec,
    vectors: &SubfieldVectors,
    n_subfields: usize,
    venue_means: &BTreeMap<String, f64>,
    score: &impl Fn(&'d Document, &[&'d str]) -> Result<DocumentJargonScore>,
) -> Result<core::result::Result<DesignRow, DropReason>> {
    use DropReason::*;
    if doc.is_background() {
        return Ok(Err(Background));
    }
    let n_subs = doc.subfields.len();
    if n_subs == 0 || n_subs > spec.max_subfields {
        return Ok(Err(SubfieldCount(n_subs)));
    }
    let Some(scoring) = spec.scoring_subfields(doc) else {
        return Ok(Err(OutsideField));
    };
    let Some(year) = doc.year else {
        return Ok(Err(MissingYear));
    };
    let Some(time_bin) = spec.time_bins.bin(year) else {
        return Ok(Err(OutsideWindow(year)));
    };
    let Some(venue) = &doc.venue else {
        return Ok(Err(MissingVenue));
    };
    let Some(citation_count) = doc.n_citations else {
        return Ok(Err(MissingCitations));
    };
    let Some(n_authors) = doc.n_authors else {
        return Ok(Err(MissingAuthors));
    };
    let Some(n_references) = doc.n_references else {
        return Ok(Err(MissingReferences));
    };
    let s = match score(doc, &scoring) {
        Ok(s) => s,
        Err(e) => return Ok(Err(Scoring(e))),
    };
    let div = div(&doc.citing_subfields, vectors, n_subfields)?;
    Ok(Ok(DesignRow {
        doc_id: doc.doc_id.clone(),
        type_jargon_fraction: s.type_fraction(),
        sense_jargon_fraction: s.sense_fraction(),
        time_bin,
        abstract_length: s.n_tokens,
        n_authors,
        n_references,
        n_subfields: n_subs,
        venue_mean_citations: venue_means[venue.as_str()],
        citation_count,
        div,
    }))
}
