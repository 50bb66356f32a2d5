//! Directed weighted citation networks and their descriptive statistics:
//! density, degrees, centralization, weak components, and the citation
//! flows between shared and unique journal sets.

mod ranks;

pub use ranks::{average_ranks, rank_difference_table, spearman_rho, RankDiffRow};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// Sparse directed weighted citation graph. Keys are `(citing, cited)`;
/// journal self-citations sit on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationNetwork {
    n: usize,
    edges: BTreeMap<(usize, usize), u64>,
    loops_included: bool,
}

impl CitationNetwork {
    pub fn new(n: usize) -> Self {
        CitationNetwork {
            n,
            edges: BTreeMap::new(),
            loops_included: true,
        }
    }

    /// Builds a network from `(citing, cited, count)` triples, summing
    /// duplicates. Ids must lie in `[0, n)` and counts must be positive.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut network = CitationNetwork::new(n);
        for (citing, cited, count) in edges {
            network.add_edge(citing, cited, count)?;
        }
        Ok(network)
    }

    pub fn add_edge(&mut self, citing: usize, cited: usize, count: u64) -> Result<()> {
        if citing >= self.n || cited >= self.n {
            return Err(Error::contract(format!(
                "edge ({citing}, {cited}) outside node range 0..{}",
                self.n
            )));
        }
        if count == 0 {
            return Err(Error::contract(format!(
                "edge ({citing}, {cited}) has zero count"
            )));
        }
        *self.edges.entry((citing, cited)).or_insert(0) += count;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn link_count(&self) -> usize {
        self.edges.len()
    }

    pub fn loops_included(&self) -> bool {
        self.loops_included
    }

    pub fn count(&self, citing: usize, cited: usize) -> u64 {
        self.edges.get(&(citing, cited)).copied().unwrap_or(0)
    }

    /// Iterates edges in `(citing, cited)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.edges.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    pub fn total_citations(&self) -> u64 {
        self.edges.values().sum()
    }

    pub fn self_citations(&self) -> u64 {
        self.edges
            .iter()
            .filter(|(&(i, j), _)| i == j)
            .map(|(_, &w)| w)
            .sum()
    }

    /// Drops every edge with count below `min`. The node set is unchanged.
    pub fn filter_min_weight(&self, min: u64) -> Result<CitationNetwork> {
        if min < 1 {
            return Err(Error::param("minimum edge weight must be >= 1"));
        }
        Ok(CitationNetwork {
            n: self.n,
            edges: self
                .edges
                .iter()
                .filter(|(_, &w)| w >= min)
                .map(|(&k, &w)| (k, w))
                .collect(),
            loops_included: self.loops_included,
        })
    }

    /// Removes the diagonal. Returns the loop-free network and the total
    /// count removed.
    pub fn remove_self_loops(&self) -> (CitationNetwork, u64) {
        let removed = self.self_citations();
        let network = CitationNetwork {
            n: self.n,
            edges: self
                .edges
                .iter()
                .filter(|(&(i, j), _)| i != j)
                .map(|(&k, &w)| (k, w))
                .collect(),
            loops_included: false,
        };
        (network, removed)
    }

    /// Restricts the network to `nodes`, re-indexing ids densely.
    ///
    /// Returns the subnetwork plus the new-id -> old-id map (ascending in
    /// old id). An empty node set yields an empty network with a warning.
    pub fn induced_subnetwork(&self, nodes: &BTreeSet<usize>) -> Result<(CitationNetwork, Vec<usize>)> {
        if let Some(&bad) = nodes.iter().find(|&&v| v >= self.n) {
            return Err(Error::contract(format!(
                "subnetwork node {bad} outside node range 0..{}",
                self.n
            )));
        }
        if nodes.is_empty() {
            log::warn!("induced_subnetwork called with an empty node set");
        }
        let node_map: Vec<usize> = nodes.iter().copied().collect();
        let old_to_new: BTreeMap<usize, usize> =
            node_map.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut edges = BTreeMap::new();
        for (&(i, j), &w) in &self.edges {
            if let (Some(&ni), Some(&nj)) = (old_to_new.get(&i), old_to_new.get(&j)) {
                edges.insert((ni, nj), w);
            }
        }
        Ok((
            CitationNetwork {
                n: node_map.len(),
                edges,
                loops_included: self.loops_included,
            },
            node_map,
        ))
    }

    /// Re-maps node ids through `mapping` (old id -> new id), summing the
    /// rows and columns of journals that were merged together.
    pub fn remap(&self, new_n: usize, mapping: &[usize]) -> Result<CitationNetwork> {
        if mapping.len() != self.n {
            return Err(Error::contract(format!(
                "mapping covers {} nodes, network has {}",
                mapping.len(),
                self.n
            )));
        }
        if let Some(&bad) = mapping.iter().find(|&&v| v >= new_n) {
            return Err(Error::contract(format!(
                "mapping target {bad} outside node range 0..{new_n}"
            )));
        }
        let mut edges: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (&(i, j), &w) in &self.edges {
            *edges.entry((mapping[i], mapping[j])).or_insert(0) += w;
        }
        Ok(CitationNetwork {
            n: new_n,
            edges,
            loops_included: self.loops_included,
        })
    }

    /// Unweighted indegree per node: the number of distinct citing journals,
    /// self-citations excluded.
    pub fn indegrees(&self) -> Vec<u64> {
        let mut degrees = vec![0u64; self.n];
        for (&(i, j), _) in &self.edges {
            if i != j {
                degrees[j] += 1;
            }
        }
        degrees
    }

    /// Weighted indegree per node: total citations received. Self-citations
    /// count when `include_loops` is set and the diagonal is present.
    pub fn citations_received(&self, include_loops: bool) -> Vec<u64> {
        let mut received = vec![0u64; self.n];
        for (&(i, j), &w) in &self.edges {
            if i != j || include_loops {
                received[j] += w;
            }
        }
        received
    }
}

/// Density of a loop-free directed network with `n` nodes and `links`
/// distinct edges: `links / (n * (n - 1))`.
pub fn density_from_counts(n: u64, links: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    links as f64 / (n as f64 * (n - 1) as f64)
}

/// Descriptive statistics of one (sub)network, mirroring the comparison
/// table of the analysis: structural measures are computed with the
/// diagonal excluded, while citation totals report the network as given.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkStats {
    pub n_journals: usize,
    /// Distinct directed edges, loops excluded.
    pub n_links: usize,
    /// Total citations of the input network, diagonal included if present.
    pub sum_citations: u64,
    pub self_citations: u64,
    pub density: f64,
    /// Unweighted: links / n.
    pub avg_indegree: f64,
    pub indegree_centralization: f64,
    pub n_weak_components: usize,
    pub largest_component_share: f64,
    pub n_isolates: usize,
    /// Weighted: sum of citations / n.
    pub avg_citations_received: f64,
}

/// Computes [`NetworkStats`]. Self-loops are stripped internally before any
/// structural measure; totals are taken from the network as passed in.
pub fn network_stats(network: &CitationNetwork) -> NetworkStats {
    let n = network.node_count();
    let sum_citations = network.total_citations();
    let self_citations = network.self_citations();
    let (loopless, _) = network.remove_self_loops();

    let links = loopless.link_count();
    let indegrees = loopless.indegrees();
    let max_indegree = indegrees.iter().copied().max().unwrap_or(0);

    let centralization = if n < 2 {
        log::warn!("indegree centralization undefined for n < 2; reporting 0");
        0.0
    } else {
        let spread: u64 = indegrees.iter().map(|&d| max_indegree - d).sum();
        spread as f64 / ((n - 1) as f64 * (n - 1) as f64)
    };

    let mut degree = vec![0u64; n];
    let mut uf = UnionFind::new(n);
    for (i, j, _) in loopless.edges() {
        degree[i] += 1;
        degree[j] += 1;
        uf.union(i, j);
    }
    let components = uf.components();
    let largest = components.iter().map(|c| c.len()).max().unwrap_or(0);
    let isolates = degree.iter().filter(|&&d| d == 0).count();

    NetworkStats {
        n_journals: n,
        n_links: links,
        sum_citations,
        self_citations,
        density: density_from_counts(n as u64, links as u64),
        avg_indegree: if n == 0 { 0.0 } else { links as f64 / n as f64 },
        indegree_centralization: centralization,
        n_weak_components: components.len(),
        largest_component_share: if n == 0 { 0.0 } else { largest as f64 / n as f64 },
        n_isolates: isolates,
        avg_citations_received: if n == 0 {
            0.0
        } else {
            sum_citations as f64 / n as f64
        },
    }
}

/// Citation totals between the shared and unique halves of a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FlowSummary {
    pub shared_to_shared: u64,
    pub shared_to_unique: u64,
    pub unique_to_shared: u64,
    pub unique_to_unique: u64,
}

impl FlowSummary {
    pub fn total(&self) -> u64 {
        self.shared_to_shared + self.shared_to_unique + self.unique_to_shared + self.unique_to_unique
    }

    /// The four cells as shares of the total, in the field order above.
    pub fn shares(&self) -> [f64; 4] {
        let total = self.total();
        if total == 0 {
            return [0.0; 4];
        }
        [
            self.shared_to_shared as f64 / total as f64,
            self.shared_to_unique as f64 / total as f64,
            self.unique_to_shared as f64 / total as f64,
            self.unique_to_unique as f64 / total as f64,
        ]
    }
}

/// Tabulates the four directional citation totals between `shared` and
/// `unique`, which must partition the node set exactly.
pub fn cross_flows(
    network: &CitationNetwork,
    shared: &BTreeSet<usize>,
    unique: &BTreeSet<usize>,
) -> Result<FlowSummary> {
    if let Some(&overlap) = shared.intersection(unique).next() {
        return Err(Error::contract(format!(
            "node {overlap} appears in both the shared and unique sets"
        )));
    }
    if shared.len() + unique.len() != network.node_count() {
        return Err(Error::contract(format!(
            "shared ({}) + unique ({}) do not partition {} nodes",
            shared.len(),
            unique.len(),
            network.node_count()
        )));
    }
    if let Some(&bad) = shared.union(unique).find(|&&v| v >= network.node_count()) {
        return Err(Error::contract(format!(
            "partition node {bad} outside node range 0..{}",
            network.node_count()
        )));
    }
    let mut flows = FlowSummary::default();
    for (i, j, w) in network.edges() {
        match (shared.contains(&i), shared.contains(&j)) {
            (true, true) => flows.shared_to_shared += w,
            (true, false) => flows.shared_to_unique += w,
            (false, true) => flows.unique_to_shared += w,
            (false, false) => flows.unique_to_unique += w,
        }
    }
    Ok(flows)
}
