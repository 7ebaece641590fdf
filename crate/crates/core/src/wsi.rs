//! Word sense induction from lexical substitutes.
//!
//! For each target lemma a sample of occurrences is turned into a substitute
//! co-occurrence network, Louvain communities are found with a resolution
//! re-estimated from within/between-community edge probabilities, surviving
//! communities become senses, and every occurrence is assigned to the sense
//! with the highest Jaccard overlap.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::louvain::{louvain, WeightedGraph};
use crate::{Error, Result};

pub const DEFAULT_SUBSTITUTES: usize = 5;
pub const DEFAULT_SAMPLE_SIZE: usize = 1000;

/// One occurrence of a target lemma with its ranked substitutes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubstituteRecord {
    pub doc_id: String,
    pub position: usize,
    pub target_lemma: String,
    pub substitutes: Vec<String>,
}

impl SubstituteRecord {
    pub fn new<S: Into<String>>(
        doc_id: impl Into<String>,
        position: usize,
        target_lemma: impl Into<String>,
        substitutes: impl IntoIterator<Item = S>,
    ) -> Self {
        Self {
            doc_id: doc_id.into(),
            position,
            target_lemma: target_lemma.into(),
            substitutes: substitutes.into_iter().map(Into::into).collect(),
        }
    }

    /// Distinct substitutes; lemmatization can map two predictions to one.
    pub fn substitute_set(&self) -> BTreeSet<&str> {
        self.substitutes.iter().map(String::as_str).collect()
    }
}

/// Substitute co-occurrence network of one target lemma.
///
/// Nodes are kept in lexicographic order; that order is also the Louvain
/// visiting order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstituteNetwork {
    pub target_lemma: String,
    nodes: Vec<String>,
    node_counts: Vec<u64>,
    /// (u, v) with u < v → number of records predicting both
    edges: BTreeMap<(usize, usize), u64>,
}

impl SubstituteNetwork {
    pub fn nodes(&self) -> impl Iterator<Item = (&str, u64)> {
        self.nodes
            .iter()
            .map(String::as_str)
            .zip(self.node_counts.iter().copied())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_weight(&self, a: &str, b: &str) -> u64 {
        let (Some(u), Some(v)) = (self.index_of(a), self.index_of(b)) else {
            return 0;
        };
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.get(&key).copied().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.edges
            .iter()
            .map(|(&(u, v), &w)| (self.nodes[u].as_str(), self.nodes[v].as_str(), w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn graph(&self) -> WeightedGraph {
        WeightedGraph::from_edges(
            self.nodes.len(),
            self.edges.iter().map(|(&(u, v), &w)| (u, v, w as f64)),
        )
    }
}

/// Builds the network: each record adds one to every distinct substitute and
/// to every unordered pair of its distinct substitutes.
pub fn build_network<'r>(records: impl IntoIterator<Item = &'r SubstituteRecord>) -> Result<SubstituteNetwork> {
    let mut target: Option<&str> = None;
    let mut node_counts: BTreeMap<&str, u64> = BTreeMap::new();
    let mut pair_counts: BTreeMap<(&str, &str), u64> = BTreeMap::new();
    for record in records {
        match target {
            None => target = Some(&record.target_lemma),
            Some(t) if t != record.target_lemma => {
                return Err(Error::TargetMismatch {
                    expected: t.into(),
                    found: record.target_lemma.clone(),
                })
            }
            Some(_) => {}
        }
        let subs: Vec<&str> = record.substitute_set().into_iter().collect();
        for (i, a) in subs.iter().enumerate() {
            *node_counts.entry(a).or_default() += 1;
            for b in &subs[i + 1..] {
                *pair_counts.entry((a, b)).or_default() += 1;
            }
        }
    }
    let target = target.ok_or_else(|| Error::EmptySample(String::new()))?;
    if node_counts.is_empty() {
        return Err(Error::EmptySample(target.into()));
    }

    let nodes: Vec<String> = node_counts.keys().map(|n| String::from(*n)).collect();
    let index: BTreeMap<&str, usize> = node_counts.keys().enumerate().map(|(i, n)| (*n, i)).collect();
    let edges = pair_counts
        .into_iter()
        .map(|((a, b), w)| ((index[a], index[b]), w))
        .collect();
    Ok(SubstituteNetwork {
        target_lemma: target.into(),
        node_counts: node_counts.values().copied().collect(),
        nodes,
        edges,
    })
}

/// Unweighted edge probabilities of a partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeProbabilities {
    pub edges_in: u64,
    pub pairs_in: u64,
    pub edges_out: u64,
    pub pairs_out: u64,
}

impl EdgeProbabilities {
    pub fn of(network: &SubstituteNetwork, partition: &[usize]) -> Result<Self> {
        if partition.len() != network.node_count() {
            return Err(Error::InvalidPartition("one community label per node required"));
        }
        let mut sizes: BTreeMap<usize, u64> = BTreeMap::new();
        for &c in partition {
            *sizes.entry(c).or_default() += 1;
        }
        let n = partition.len() as u64;
        let pairs_total = n * n.saturating_sub(1) / 2;
        let pairs_in: u64 = sizes.values().map(|s| s * (s - 1) / 2).sum();
        let edges_in = network
            .edges
            .keys()
            .filter(|(u, v)| partition[*u] == partition[*v])
            .count() as u64;
        Ok(Self {
            edges_in,
            pairs_in,
            edges_out: network.edges.len() as u64 - edges_in,
            pairs_out: pairs_total - pairs_in,
        })
    }

    /// (ω_in, ω_out); a zero probability is clamped to half a pair,
    /// `1 / (2 × pairs)`, so the log difference stays finite.
    pub fn omegas(&self) -> Result<(f64, f64)> {
        if self.pairs_in == 0 {
            return Err(Error::UndefinedResolution("no same-community node pairs"));
        }
        if self.pairs_out == 0 {
            return Err(Error::UndefinedResolution("a single community has no cross pairs"));
        }
        let clamp = |edges: u64, pairs: u64| {
            if edges == 0 {
                1.0 / (2.0 * pairs as f64)
            } else {
                edges as f64 / pairs as f64
            }
        };
        Ok((
            clamp(self.edges_in, self.pairs_in),
            clamp(self.edges_out, self.pairs_out),
        ))
    }
}

/// `(ω_in − ω_out) / (ln ω_in − ln ω_out)`, with the limit ω when both are
/// equal. Both probabilities must be positive.
pub fn resolution_from_probabilities(omega_in: f64, omega_out: f64) -> Result<f64> {
    if !(omega_in > 0.0 && omega_out > 0.0) {
        return Err(Error::UndefinedResolution("edge probabilities must be positive"));
    }
    if omega_in == omega_out {
        return Ok(omega_in);
    }
    // ln a − ln b = ln(1 + (a − b)/b); log1p keeps near-equal inputs accurate
    let diff = omega_in - omega_out;
    Ok(diff / libm::log1p(diff / omega_out))
}

/// Resolution implied by the edge probabilities of `partition`.
pub fn dynamic_resolution(network: &SubstituteNetwork, partition: &[usize]) -> Result<f64> {
    let (w_in, w_out) = EdgeProbabilities::of(network, partition)?.omegas()?;
    resolution_from_probabilities(w_in, w_out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InductionConfig {
    pub initial_resolution: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    /// A sense needs at least this many substitutes...
    pub min_substitutes: usize,
    /// ...and its second most frequent substitute must appear this often.
    pub min_second_count: u64,
    pub sample_size: usize,
}

impl Default for InductionConfig {
    fn default() -> Self {
        Self {
            initial_resolution: 1.0,
            max_iterations: 10,
            tolerance: 0.01,
            min_substitutes: 2,
            min_second_count: 10,
            sample_size: DEFAULT_SAMPLE_SIZE,
        }
    }
}

/// A sense: substitutes with their counts in the induction sample, most
/// frequent first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sense {
    pub substitutes: Vec<(String, u64)>,
}

impl Sense {
    fn new(mut substitutes: Vec<(String, u64)>) -> Self {
        substitutes.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        Self { substitutes }
    }

    pub fn total(&self) -> u64 {
        self.substitutes.iter().map(|(_, n)| n).sum()
    }

    pub fn contains(&self, substitute: &str) -> bool {
        self.substitutes.iter().any(|(s, _)| s == substitute)
    }

    pub fn top(&self, k: usize) -> impl Iterator<Item = &str> {
        self.substitutes.iter().take(k).map(|(s, _)| s.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SenseModel {
    pub target_lemma: String,
    pub senses: Vec<Sense>,
    /// All occurrences go to sense 0 because no community was large enough.
    pub single_sense_fallback: bool,
    /// Resolution of the Louvain run that produced `senses`.
    pub resolution: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Sense label of one occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SenseId {
    Induced(usize),
    /// Reserved for occurrences sharing no substitute with any sense.
    Unseen,
}

impl SenseId {
    pub fn index(self) -> Option<usize> {
        match self {
            SenseId::Induced(i) => Some(i),
            SenseId::Unseen => None,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        if s == "UNSEEN" {
            Some(SenseId::Unseen)
        } else {
            s.parse().ok().map(SenseId::Induced)
        }
    }
}

impl fmt::Display for SenseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SenseId::Induced(i) => write!(f, "{i}"),
            SenseId::Unseen => f.write_str("UNSEEN"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SenseAssignment {
    pub doc_id: String,
    pub position: usize,
    pub target_lemma: String,
    pub sense: SenseId,
}

/// Runs Louvain from the initial resolution, re-estimating the resolution
/// from each partition until it moves less than `tolerance` or
/// `max_iterations` Louvain runs have been made, then keeps the communities
/// that pass the size heuristics.
pub fn induce_senses(network: &SubstituteNetwork, config: &InductionConfig) -> SenseModel {
    let graph = network.graph();
    let mut resolution = config.initial_resolution;
    let mut partition = louvain(&graph, resolution);
    let mut iterations = 1;
    let mut converged = false;
    loop {
        let next = match dynamic_resolution(network, &partition) {
            Ok(next) => next,
            Err(_) => {
                // one community or all singletons: the estimate cannot move
                converged = true;
                break;
            }
        };
        if libm::fabs(next - resolution) < config.tolerance {
            converged = true;
            break;
        }
        if iterations >= config.max_iterations {
            break;
        }
        resolution = next;
        partition = louvain(&graph, resolution);
        iterations += 1;
    }

    let mut communities: BTreeMap<usize, Vec<(String, u64)>> = BTreeMap::new();
    for ((name, count), &c) in network.nodes().zip(&partition) {
        communities.entry(c).or_default().push((name.into(), count));
    }
    let mut senses: Vec<Sense> = communities
        .into_values()
        .map(Sense::new)
        .filter(|s| {
            s.substitutes.len() >= config.min_substitutes
                && s.substitutes.get(1).is_some_and(|(_, n)| *n >= config.min_second_count)
        })
        .collect();
    senses.sort_by(|a, b| {
        b.total()
            .cmp(&a.total())
            .then_with(|| a.substitutes[0].0.cmp(&b.substitutes[0].0))
    });

    let single_sense_fallback = senses.is_empty();
    if single_sense_fallback {
        senses.push(Sense::new(network.nodes().map(|(n, c)| (n.into(), c)).collect()));
    }
    SenseModel {
        target_lemma: network.target_lemma.clone(),
        senses,
        single_sense_fallback,
        resolution,
        iterations,
        converged,
    }
}

/// Assigns a record to the sense with the highest Jaccard similarity between
/// its substitute set and the sense's substitute set. Ties go to the lower
/// sense index; zero overlap with every sense yields [`SenseId::Unseen`].
pub fn assign_occurrence(model: &SenseModel, record: &SubstituteRecord) -> Result<SenseAssignment> {
    if record.target_lemma != model.target_lemma {
        return Err(Error::TargetMismatch {
            expected: model.target_lemma.clone(),
            found: record.target_lemma.clone(),
        });
    }
    let sense = if model.single_sense_fallback {
        SenseId::Induced(0)
    } else {
        let subs = record.substitute_set();
        // best as (intersection, union); compare fractions by cross-multiplying
        let mut best: Option<(usize, u64, u64)> = None;
        for (i, sense) in model.senses.iter().enumerate() {
            let inter = subs.iter().filter(|s| sense.contains(s)).count() as u64;
            if inter == 0 {
                continue;
            }
            let union = (subs.len() + sense.substitutes.len()) as u64 - inter;
            let better = match best {
                None => true,
                Some((_, bi, bu)) => inter * bu > bi * union,
            };
            if better {
                best = Some((i, inter, union));
            }
        }
        best.map_or(SenseId::Unseen, |(i, _, _)| SenseId::Induced(i))
    };
    Ok(SenseAssignment {
        doc_id: record.doc_id.clone(),
        position: record.position,
        target_lemma: record.target_lemma.clone(),
        sense,
    })
}

/// Stable per-lemma seed derived from the run seed (FNV-1a over the lemma).
pub fn lemma_seed(seed: u64, lemma: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in lemma.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ seed.rotate_left(17)
}

/// Uniform sample without replacement of at most `size` records, returned in
/// input order.
pub fn sample_records(records: &[SubstituteRecord], size: usize, seed: u64) -> Vec<&SubstituteRecord> {
    if records.len() <= size {
        return records.iter().collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, records.len(), size).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| &records[i]).collect()
}

/// Sample, build, and induce for one lemma's records, which are first put in
/// (doc_id, position) order so input order does not matter.
pub fn induce_lemma(records: &[SubstituteRecord], config: &InductionConfig, seed: u64) -> Result<SenseModel> {
    let Some(first) = records.first() else {
        return Err(Error::EmptySample(String::new()));
    };
    let mut sorted: Vec<SubstituteRecord> = records.to_vec();
    sorted.sort();
    let sample = sample_records(&sorted, config.sample_size, lemma_seed(seed, &first.target_lemma));
    let network = build_network(sample)?;
    Ok(induce_senses(&network, config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    fn rec(subs: &[&str]) -> SubstituteRecord {
        SubstituteRecord::new("d", 0, "bass", subs.iter().copied())
    }

    #[test]
    fn single_pair_network() {
        let net = build_network(&[rec(&["fish", "trout"])]).unwrap();
        assert_eq!(net.nodes().collect::<Vec<_>>(), vec![("fish", 1), ("trout", 1)]);
        assert_eq!(net.edge_weight("fish", "trout"), 1);
        assert_eq!(net.edge_weight("trout", "fish"), 1);
    }

    #[test]
    fn disjoint_records_give_disjoint_edges() {
        let net = build_network(&[rec(&["fish", "trout"]), rec(&["guitar", "music"])]).unwrap();
        assert_eq!(net.edge_count(), 2);
        assert_eq!(net.edge_weight("fish", "music"), 0);
    }

    #[test]
    fn duplicate_substitutes_deduplicated() {
        let net = build_network(&[rec(&["a", "a", "b"])]).unwrap();
        assert_eq!(net.nodes().collect::<Vec<_>>(), vec![("a", 1), ("b", 1)]);
        assert_eq!(net.edge_weight("a", "b"), 1);
        assert_eq!(net.edge_count(), 1);
    }

    #[test]
    fn empty_sample_is_error() {
        assert!(build_network(&[]).is_err());
        assert!(matches!(build_network(&[rec(&[])]), Err(Error::EmptySample(_))));
    }

    #[test]
    fn mixed_targets_rejected() {
        let other = SubstituteRecord::new("d", 1, "bias", ["skew"]);
        assert!(matches!(
            build_network(&[rec(&["fish"]), other]),
            Err(Error::TargetMismatch { .. })
        ));
    }

    #[test]
    fn resolution_hand_cases() {
        let g = resolution_from_probabilities(0.5, 0.1).unwrap();
        assert!((g - 0.4 / libm::log(5.0)).abs() < 1e-15);
        assert!((g - 0.2485).abs() < 1e-4);
        assert_eq!(resolution_from_probabilities(0.3, 0.3).unwrap(), 0.3);
        let near = resolution_from_probabilities(0.3, 0.3 + 1e-13).unwrap();
        assert!((near - 0.3).abs() < 1e-12);
        assert!(resolution_from_probabilities(0.0, 0.3).is_err());
    }

    #[test]
    fn zero_out_probability_clamped() {
        let mut records = Vec::new();
        for _ in 0..3 {
            records.push(rec(&["fish", "trout", "salmon"]));
            records.push(rec(&["guitar", "music", "sound"]));
        }
        let net = build_network(&records).unwrap();
        // nodes sorted: fish guitar music salmon sound trout
        let partition = [0, 1, 1, 0, 1, 0];
        let probs = EdgeProbabilities::of(&net, &partition).unwrap();
        assert_eq!(
            (probs.edges_in, probs.pairs_in, probs.edges_out, probs.pairs_out),
            (6, 6, 0, 9)
        );
        let (w_in, w_out) = probs.omegas().unwrap();
        assert_eq!(w_in, 1.0);
        assert_eq!(w_out, 1.0 / 18.0);
        let g = dynamic_resolution(&net, &partition).unwrap();
        assert!((g - (17.0 / 18.0) / libm::log(18.0)).abs() < 1e-15);
    }

    #[test]
    fn single_community_has_no_resolution() {
        let net = build_network(&[rec(&["a", "b", "c"])]).unwrap();
        assert!(dynamic_resolution(&net, &[0, 0, 0]).is_err());
        assert!(dynamic_resolution(&net, &[0, 0]).is_err());
    }

    fn planted(n: usize) -> Vec<SubstituteRecord> {
        let mut records = Vec::new();
        for i in 0..n {
            records.push(SubstituteRecord::new(
                format!("a{i}"),
                0,
                "bass",
                ["fish", "trout", "salmon"],
            ));
            records.push(SubstituteRecord::new(
                format!("b{i}"),
                0,
                "bass",
                ["guitar", "music", "sound"],
            ));
        }
        records
    }

    #[test]
    fn planted_two_senses() {
        let net = build_network(&planted(500)).unwrap();
        let model = induce_senses(&net, &InductionConfig::default());
        assert!(!model.single_sense_fallback);
        assert_eq!(model.senses.len(), 2);
        assert!(model.converged);
        let sets: Vec<BTreeSet<&str>> = model
            .senses
            .iter()
            .map(|s| s.substitutes.iter().map(|(n, _)| n.as_str()).collect())
            .collect();
        assert!(sets.contains(&["fish", "salmon", "trout"].into_iter().collect()));
        assert!(sets.contains(&["guitar", "music", "sound"].into_iter().collect()));
    }

    #[test]
    fn tiny_communities_fall_back() {
        let records: Vec<_> = (0..5)
            .map(|i| SubstituteRecord::new("d", i, "bass", [format!("x{i}"), format!("y{i}")]))
            .collect();
        let net = build_network(&records).unwrap();
        let model = induce_senses(&net, &InductionConfig::default());
        assert!(model.single_sense_fallback);
        assert_eq!(model.senses.len(), 1);
        assert_eq!(model.senses[0].substitutes.len(), 10);
        let a = assign_occurrence(&model, &rec(&["zzz"])).unwrap();
        assert_eq!(a.sense, SenseId::Induced(0));
    }

    #[test]
    fn dense_clique_is_one_sense() {
        let records: Vec<_> = (0..12)
            .map(|i| SubstituteRecord::new("d", i, "bass", ["a", "b", "c", "d", "e", "f"]))
            .collect();
        let net = build_network(&records).unwrap();
        let model = induce_senses(&net, &InductionConfig::default());
        assert!(!model.single_sense_fallback);
        assert_eq!(model.senses.len(), 1);
        assert_eq!(model.senses[0].substitutes.len(), 6);
    }

    fn model(senses: &[&[&str]]) -> SenseModel {
        SenseModel {
            target_lemma: "bass".into(),
            senses: senses
                .iter()
                .map(|s| Sense::new(s.iter().map(|n| (String::from(*n), 10)).collect()))
                .collect(),
            single_sense_fallback: false,
            resolution: 1.0,
            iterations: 1,
            converged: true,
        }
    }

    #[test]
    fn jaccard_assignment() {
        // sense ordering inside Sense is by count then name, contents unchanged
        let m = model(&[&["grain", "palm", "cell", "gross"], &["block", "ghost"]]);
        let a = assign_occurrence(&m, &rec(&["grain", "palm", "body"])).unwrap();
        assert_eq!(a.sense, SenseId::Induced(0));
        let b = assign_occurrence(&m, &rec(&["ghost", "x", "y", "z", "w"])).unwrap();
        assert_eq!(b.sense, SenseId::Induced(1));
    }

    #[test]
    fn zero_overlap_is_unseen() {
        let m = model(&[&["a", "b"], &["c", "d"]]);
        let a = assign_occurrence(&m, &rec(&["xyz1", "xyz2"])).unwrap();
        assert_eq!(a.sense, SenseId::Unseen);
    }

    #[test]
    fn ties_go_to_lower_index() {
        let m = model(&[&["a", "b"], &["c", "d"]]);
        let a = assign_occurrence(&m, &rec(&["a", "c"])).unwrap();
        assert_eq!(a.sense, SenseId::Induced(0));
    }

    #[test]
    fn assignment_checks_target() {
        let m = model(&[&["a", "b"]]);
        let r = SubstituteRecord::new("d", 0, "bias", ["a"]);
        assert!(assign_occurrence(&m, &r).is_err());
    }

    #[test]
    fn sense_id_text_round_trip() {
        for id in [SenseId::Induced(0), SenseId::Induced(12), SenseId::Unseen] {
            assert_eq!(SenseId::parse(&format!("{id}")), Some(id));
        }
        assert_eq!(SenseId::parse("x"), None);
    }

    #[test]
    fn sampling_is_seeded_and_bounded() {
        let records = planted(50);
        let a = sample_records(&records, 10, 7);
        let b = sample_records(&records, 10, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
        let distinct: BTreeSet<_> = a.iter().map(|r| &r.doc_id).collect();
        assert_eq!(distinct.len(), 10);
        assert_eq!(sample_records(&records, 1000, 7).len(), 100);
    }

    #[test]
    fn induce_lemma_ignores_input_order() {
        let records = planted(300);
        let mut reversed = records.clone();
        reversed.reverse();
        let config = InductionConfig {
            sample_size: 200,
            ..InductionConfig::default()
        };
        assert_eq!(
            induce_lemma(&records, &config, 3).unwrap(),
            induce_lemma(&reversed, &config, 3).unwrap()
        );
    }
}
