//! Base-map machinery: cosine-normalized similarity graphs over citing
//! patterns, giant-component extraction, Louvain clustering with
//! modularity, stress-majorization layout, and the tab-delimited map file.

mod basemap;
mod layout;
mod louvain;

pub use basemap::{
    exclude_outliers, read_map_file, write_map_file, BaseMap, MapNode, NodeStatus,
    OutlierOptions,
};
pub use layout::{layout, LayoutConfig, LayoutResult};
pub use louvain::{louvain_cluster, ClusteringResult};

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use crate::error::{Error, Result};
use crate::network::CitationNetwork;
use crate::union_find::UnionFind;

/// Sparse symmetric graph of cosine similarities; keys are `(i, j)` with
/// `i < j`, values in `(0, 1]`. No self-edges.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), f64>,
    threshold_applied: f64,
    /// Nodes whose citing vector was empty; they can produce no edges.
    zero_vector_nodes: Vec<usize>,
}

impl SimilarityGraph {
    pub fn new(n: usize) -> Self {
        SimilarityGraph {
            n,
            edges: BTreeMap::new(),
            threshold_applied: 0.0,
            zero_vector_nodes: Vec::new(),
        }
    }

    /// Inserts a symmetric edge. Values must lie in `(0, 1]`.
    pub fn insert(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if i == j {
            return Err(Error::contract(format!("self-edge on node {i}")));
        }
        if i >= self.n || j >= self.n {
            return Err(Error::contract(format!(
                "edge ({i}, {j}) outside node range 0..{}",
                self.n
            )));
        }
        if !(value > 0.0 && value <= 1.0) {
            return Err(Error::contract(format!(
                "similarity {value} outside (0, 1] on edge ({i}, {j})"
            )));
        }
        self.edges.insert((i.min(j), i.max(j)), value);
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn threshold_applied(&self) -> f64 {
        self.threshold_applied
    }

    pub fn zero_vector_nodes(&self) -> &[usize] {
        &self.zero_vector_nodes
    }

    pub fn value(&self, i: usize, j: usize) -> Option<f64> {
        if i == j {
            return None;
        }
        self.edges.get(&(i.min(j), i.max(j))).copied()
    }

    /// Iterates edges as `(i, j, value)` with `i < j`, in key order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    /// Adjacency lists, each sorted by neighbor id.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (&(i, j), &v) in &self.edges {
            adj[i].push((j, v));
            adj[j].push((i, v));
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _)| j);
        }
        adj
    }

    /// Restricts the graph to `nodes`, re-indexing densely. Returns the
    /// subgraph and the new-id -> old-id map.
    pub fn induced(&self, nodes: &BTreeSet<usize>) -> Result<(SimilarityGraph, Vec<usize>)> {
        if let Some(&bad) = nodes.iter().find(|&&v| v >= self.n) {
            return Err(Error::contract(format!(
                "subgraph node {bad} outside node range 0..{}",
                self.n
            )));
        }
        let node_map: Vec<usize> = nodes.iter().copied().collect();
        let old_to_new: BTreeMap<usize, usize> =
            node_map.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut sub = SimilarityGraph::new(node_map.len());
        sub.threshold_applied = self.threshold_applied;
        for (&(i, j), &v) in &self.edges {
            if let (Some(&ni), Some(&nj)) = (old_to_new.get(&i), old_to_new.get(&j)) {
                sub.edges.insert((ni.min(nj), ni.max(nj)), v);
            }
        }
        Ok((sub, node_map))
    }

    /// Writes edges as CSV `i,j,cosine` with full-precision values.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|source| Error::IoPath {
            path: path.to_path_buf(),
            source,
        })?;
        let mut writer = csv::Writer::from_writer(file);
        writer
            .write_record(["i", "j", "cosine"])
            .map_err(|e| Error::parse(0, e.to_string()))?;
        for (i, j, v) in self.edges() {
            writer
                .write_record([i.to_string(), j.to_string(), format!("{v}")])
                .map_err(|e| Error::parse(0, e.to_string()))?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Reads a similarity graph written by [`SimilarityGraph::write_csv`].
    /// Node count is `max id + 1` unless a larger `min_n` is given.
    pub fn read_csv(path: &Path, min_n: usize) -> Result<SimilarityGraph> {
        let file = File::open(path).map_err(|source| Error::IoPath {
            path: path.to_path_buf(),
            source,
        })?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(BufReader::new(file));
        let mut edges = Vec::new();
        let mut max_id = 0usize;
        for record in reader.records() {
            let record = record.map_err(|e| Error::parse(0, e.to_string()))?;
            let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
            if record.len() < 3 {
                return Err(Error::parse(line, "expected columns i,j,cosine"));
            }
            let i: usize = record[0]
                .parse()
                .map_err(|_| Error::parse(line, format!("bad node id {:?}", &record[0])))?;
            let j: usize = record[1]
                .parse()
                .map_err(|_| Error::parse(line, format!("bad node id {:?}", &record[1])))?;
            let v: f64 = record[2]
                .parse()
                .map_err(|_| Error::parse(line, format!("bad cosine {:?}", &record[2])))?;
            max_id = max_id.max(i).max(j);
            edges.push((i, j, v));
        }
        let mut graph = SimilarityGraph::new(min_n.max(if edges.is_empty() { min_n } else { max_id + 1 }));
        for (i, j, v) in edges {
            graph.insert(i, j, v)?;
        }
        Ok(graph)
    }
}

/// Options for [`cosine_similarity_graph`].
#[derive(Debug, Clone, Copy)]
pub struct CosineOptions {
    /// Keep journal self-citations in the citing vectors. Off by default so
    /// self-citation volume cannot dominate similarity.
    pub include_self_citations: bool,
}

impl Default for CosineOptions {
    fn default() -> Self {
        CosineOptions {
            include_self_citations: false,
        }
    }
}

/// Builds the cosine-normalized similarity graph over citing patterns.
///
/// Node `i`'s vector is row `i` of the citing matrix — its outgoing
/// reference distribution over all journals — with the diagonal excluded
/// unless configured otherwise. Every pair with a nonzero dot product gets
/// an edge `dot / (|v_i| * |v_j|)`.
pub fn cosine_similarity_graph(network: &CitationNetwork, options: CosineOptions) -> SimilarityGraph {
    let n = network.node_count();
    let mut rows: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    // Inverted index: cited column -> (citing row, count).
    let mut columns: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for (citing, cited, count) in network.edges() {
        if citing == cited && !options.include_self_citations {
            continue;
        }
        rows[citing].push((cited, count));
        columns.entry(cited).or_default().push((citing, count));
    }

    // Exact integer squared norms and dot products keep cosine == 1 exact
    // for proportional vectors.
    let norms_sq: Vec<u128> = rows
        .iter()
        .map(|row| row.iter().map(|&(_, w)| (w as u128) * (w as u128)).sum())
        .collect();

    let mut dots: BTreeMap<(usize, usize), u128> = BTreeMap::new();
    for entries in columns.values() {
        for (a, &(i, wi)) in entries.iter().enumerate() {
            for &(j, wj) in &entries[a + 1..] {
                let key = (i.min(j), i.max(j));
                *dots.entry(key).or_insert(0) += (wi as u128) * (wj as u128);
            }
        }
    }

    let mut graph = SimilarityGraph::new(n);
    graph.zero_vector_nodes = (0..n).filter(|&i| norms_sq[i] == 0).collect();
    if !graph.zero_vector_nodes.is_empty() {
        log::warn!(
            "{} node(s) have empty citing vectors and produce no similarity edges",
            graph.zero_vector_nodes.len()
        );
    }
    for ((i, j), dot) in dots {
        if dot == 0 {
            continue;
        }
        let value = if dot * dot == norms_sq[i] * norms_sq[j] {
            1.0
        } else {
            let v = dot as f64 / (norms_sq[i] as f64 * norms_sq[j] as f64).sqrt();
            v.min(1.0)
        };
        graph.edges.insert((i, j), value);
    }
    graph
}

/// Drops edges with value `<= t` (strict ">" semantics) and records the
/// threshold.
pub fn apply_cosine_threshold(graph: &SimilarityGraph, t: f64) -> Result<SimilarityGraph> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::param(format!("cosine threshold {t} outside [0, 1)")));
    }
    Ok(SimilarityGraph {
        n: graph.n,
        edges: graph
            .edges
            .iter()
            .filter(|(_, &v)| v > t)
            .map(|(&k, &v)| (k, v))
            .collect(),
        threshold_applied: t,
        zero_vector_nodes: graph.zero_vector_nodes.clone(),
    })
}

/// The largest connected component of the similarity graph and its share
/// of all nodes. Size ties go to the component containing the smallest id.
pub fn giant_component(graph: &SimilarityGraph) -> (BTreeSet<usize>, f64) {
    if graph.n == 0 {
        return (BTreeSet::new(), 0.0);
    }
    let mut uf = UnionFind::new(graph.n);
    for (i, j, _) in graph.edges() {
        uf.union(i, j);
    }
    let components = uf.components();
    let largest = components
        .iter()
        .max_by_key(|c| (c.len(), std::cmp::Reverse(c[0])))
        .expect("n > 0 implies at least one component");
    let share = largest.len() as f64 / graph.n as f64;
    (largest.iter().copied().collect(), share)
}

/// Weighted modularity `Q` of `assignment` on the undirected graph:
/// `(1/2m) * sum_ij [A_ij - k_i k_j / 2m] * delta(c_i, c_j)`.
pub fn modularity(graph: &SimilarityGraph, assignment: &[usize]) -> Result<f64> {
    if assignment.len() != graph.n {
        return Err(Error::contract(format!(
            "assignment covers {} nodes, graph has {}",
            assignment.len(),
            graph.n
        )));
    }
    let m: f64 = graph.edges.values().sum();
    if m == 0.0 {
        return Err(Error::contract("modularity undefined: graph has no edge weight"));
    }
    let two_m = 2.0 * m;
    let mut degree = vec![0.0; graph.n];
    let mut intra = 0.0;
    for (&(i, j), &w) in &graph.edges {
        degree[i] += w;
        degree[j] += w;
        if assignment[i] == assignment[j] {
            intra += 2.0 * w;
        }
    }
    let mut community_degree: BTreeMap<usize, f64> = BTreeMap::new();
    for (node, &community) in assignment.iter().enumerate() {
        *community_degree.entry(community).or_insert(0.0) += degree[node];
    }
    let expected: f64 = community_degree
        .values()
        .map(|&d| (d / two_m) * (d / two_m))
        .sum();
    Ok(intra / two_m - expected)
}
