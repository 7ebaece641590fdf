//! Deterministic Louvain community detection with a resolution parameter.
//!
//! Nodes are visited in index order and candidate communities in ascending
//! id order, so a given graph and resolution always yield the same partition.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

const MIN_GAIN: f64 = 1e-12;
const MAX_PASSES: usize = 1000;

/// Undirected weighted graph in adjacency form.
///
/// A self loop stores twice the weight internal to the node, so a row sum is
/// the node's degree.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    adj: Vec<BTreeMap<usize, f64>>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![BTreeMap::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut g = Self::new(n);
        for (u, v, w) in edges {
            g.add_edge(u, v, w);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64) {
        if u == v {
            *self.adj[u].entry(u).or_default() += 2.0 * weight;
        } else {
            *self.adj[u].entry(v).or_default() += weight;
            *self.adj[v].entry(u).or_default() += weight;
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn degree(&self, u: usize) -> f64 {
        self.adj[u].values().sum()
    }

    /// Twice the total edge weight.
    fn total_degree(&self) -> f64 {
        (0..self.node_count()).map(|u| self.degree(u)).sum()
    }

    fn aggregate(&self, community: &[usize], n_communities: usize) -> Self {
        let mut adj = vec![BTreeMap::new(); n_communities];
        for (u, row) in self.adj.iter().enumerate() {
            for (&v, &w) in row {
                *adj[community[u]].entry(community[v]).or_default() += w;
            }
        }
        Self { adj }
    }
}

/// Modularity of `partition` at `resolution`:
/// `Q = 1/2m Σ_ij [A_ij − γ k_i k_j / 2m] δ(c_i, c_j)`.
pub fn modularity(graph: &WeightedGraph, partition: &[usize], resolution: f64) -> f64 {
    let two_m = graph.total_degree();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut internal: BTreeMap<usize, f64> = BTreeMap::new();
    let mut totals: BTreeMap<usize, f64> = BTreeMap::new();
    for (u, row) in graph.adj.iter().enumerate() {
        *totals.entry(partition[u]).or_default() += graph.degree(u);
        for (&v, &w) in row {
            if partition[u] == partition[v] {
                *internal.entry(partition[u]).or_default() += w;
            }
        }
    }
    totals
        .iter()
        .map(|(c, tot)| internal.get(c).copied().unwrap_or(0.0) / two_m - resolution * (tot / two_m) * (tot / two_m))
        .sum()
}

/// Relabels communities 0.. in order of first appearance.
pub fn canonicalize(partition: &[usize]) -> Vec<usize> {
    let mut relabel = BTreeMap::new();
    partition
        .iter()
        .map(|c| {
            let next = relabel.len();
            *relabel.entry(*c).or_insert(next)
        })
        .collect()
}

/// One round of local moves; returns the (canonical) partition and whether
/// any node changed community.
fn local_moving(graph: &WeightedGraph, resolution: f64) -> (Vec<usize>, bool) {
    let n = graph.node_count();
    let two_m = graph.total_degree();
    let degrees: Vec<f64> = (0..n).map(|u| graph.degree(u)).collect();
    let mut community: Vec<usize> = (0..n).collect();
    let mut totals = degrees.clone();
    let mut moved_any = false;

    if two_m == 0.0 {
        return (community, false);
    }

    for _ in 0..MAX_PASSES {
        let mut moved = false;
        for u in 0..n {
            let current = community[u];
            let k_u = degrees[u];
            totals[current] -= k_u;

            let mut links: BTreeMap<usize, f64> = BTreeMap::new();
            for (&v, &w) in &graph.adj[u] {
                if v != u {
                    *links.entry(community[v]).or_default() += w;
                }
            }
            let gain = |c: usize, link: f64| link - resolution * totals[c] * k_u / two_m;

            let mut best = current;
            let mut best_gain = gain(current, links.get(&current).copied().unwrap_or(0.0));
            for (&c, &link) in &links {
                let g = gain(c, link);
                if g > best_gain + MIN_GAIN {
                    best = c;
                    best_gain = g;
                }
            }
            totals[best] += k_u;
            if best != current {
                community[u] = best;
                moved = true;
                moved_any = true;
            }
        }
        if !moved {
            break;
        }
    }
    (canonicalize(&community), moved_any)
}

/// Multi-level Louvain; returns a canonical community label per node.
pub fn louvain(graph: &WeightedGraph, resolution: f64) -> Vec<usize> {
    let mut membership: Vec<usize> = (0..graph.node_count()).collect();
    let mut current = graph.clone();
    loop {
        let (partition, moved) = local_moving(&current, resolution);
        if !moved {
            break;
        }
        for m in membership.iter_mut() {
            *m = partition[*m];
        }
        let n_communities = partition.iter().max().map_or(0, |m| m + 1);
        current = current.aggregate(&partition, n_communities);
    }
    canonicalize(&membership)
}
