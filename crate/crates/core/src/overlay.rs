//! Document-set overlays: resolve downloaded titles onto a base map,
//! re-weight nodes by log document counts, and compute Rao-Stirling
//! diversity over the cosine distances.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::{DocumentSet, ReportEntry};
use crate::mapcore::{write_map_file, BaseMap, SimilarityGraph};
use crate::matching::gestalt_similarity;
use crate::registry::JournalRegistry;

/// Document counts projected onto base-map nodes, keyed by node id.
/// Unresolved titles are reported, never silently dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OverlayCounts {
    pub counts: BTreeMap<usize, u64>,
    pub unresolved: BTreeMap<String, u64>,
    pub total_documents: u64,
}

impl OverlayCounts {
    pub fn resolved_total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn unresolved_total(&self) -> u64 {
        self.unresolved.values().sum()
    }
}

/// Options for [`resolve_document_set`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ResolveOptions {
    /// Fall back to best-match gestalt similarity at this threshold for
    /// titles that fail exact lookup. Off by default.
    pub fuzzy_threshold: Option<f64>,
}

/// Resolves a document set against the base map's label index (full titles
/// first, then abbreviations). A registry, when given, contributes its
/// abbreviation -> full-title links to the lookup.
pub fn resolve_document_set(
    docs: &DocumentSet,
    basemap: &BaseMap,
    registry: Option<&JournalRegistry>,
    options: ResolveOptions,
) -> (OverlayCounts, Vec<ReportEntry>) {
    let mut map = basemap.clone();
    if let Some(registry) = registry {
        map.extend_lookup_from_registry(registry);
    }

    let mut result = OverlayCounts::default();
    let mut report = Vec::new();
    for (title, &count) in &docs.entries {
        result.total_documents += count;
        if let Some(pos) = map.resolve_label(title) {
            let id = map.nodes()[pos].id;
            *result.counts.entry(id).or_insert(0) += count;
            continue;
        }
        if let Some(threshold) = options.fuzzy_threshold {
            let key = crate::normalize::normalize_title(title);
            let mut best: Option<(f64, usize)> = None;
            for (label, pos) in map.label_keys() {
                let sim = gestalt_similarity(&key, label);
                if sim >= threshold {
                    let candidate = (sim, pos);
                    best = match best {
                        Some(current) if current.0 >= candidate.0 => Some(current),
                        _ => Some(candidate),
                    };
                }
            }
            if let Some((sim, pos)) = best {
                let node = &map.nodes()[pos];
                log::info!("fuzzy-resolved {title:?} -> {:?} ({sim:.3})", node.label);
                report.push(ReportEntry::new(
                    "fuzzy_resolved",
                    title.clone(),
                    format!("{} ({sim:.6})", node.label),
                ));
                *result.counts.entry(node.id).or_insert(0) += count;
                continue;
            }
        }
        report.push(ReportEntry::new("unresolved_title", title.clone(), ""));
        *result.unresolved.entry(title.clone()).or_insert(0) += count;
    }
    (result, report)
}

/// Builds the overlay variant of the base map: coordinates and clusters are
/// retained, node weight becomes `ln(1 + count)` (0 for unmatched nodes, so
/// viewers fade them).
pub fn build_overlay(counts: &OverlayCounts, basemap: &BaseMap) -> BaseMap {
    let weights: BTreeMap<usize, f64> = basemap
        .nodes()
        .iter()
        .map(|node| {
            let count = counts.counts.get(&node.id).copied().unwrap_or(0);
            (node.id, (1.0 + count as f64).ln())
        })
        .collect();
    basemap.with_weights(&weights)
}

/// Where the pairwise distances for diversity came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceSource {
    /// Unthresholded cosine values.
    RawCosine,
    /// A graph thresholded at the given cosine value.
    ThresholdedCosine(f64),
}

impl DistanceSource {
    pub fn from_graph(graph: &SimilarityGraph) -> Self {
        if graph.threshold_applied() > 0.0 {
            DistanceSource::ThresholdedCosine(graph.threshold_applied())
        } else {
            DistanceSource::RawCosine
        }
    }

    pub fn describe(self) -> String {
        match self {
            DistanceSource::RawCosine => "raw cosine".to_string(),
            DistanceSource::ThresholdedCosine(t) => format!("cosine thresholded at {t}"),
        }
    }
}

/// Rao-Stirling diversity of an overlay.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityReport {
    /// `delta = sum over ordered pairs i != j of p_i * p_j * d_ij`.
    pub delta: f64,
    /// Proportions over nodes with nonzero counts; sums to 1.
    pub p: BTreeMap<usize, f64>,
    pub distance_source: DistanceSource,
}

/// Computes Rao-Stirling diversity. `d_ij = 1 - cosine_ij`; a pair without
/// a similarity edge counts as maximally disparate (`d = 1`).
pub fn rao_stirling(counts: &OverlayCounts, similarity: &SimilarityGraph) -> Result<DiversityReport> {
    let total = counts.resolved_total();
    if total == 0 {
        return Err(Error::contract(format!(
            "no resolved documents; {} unresolved title(s)",
            counts.unresolved.len()
        )));
    }
    let nodes: Vec<usize> = counts
        .counts
        .iter()
        .filter(|&(_, &c)| c > 0)
        .map(|(&id, _)| id)
        .collect();
    let p: BTreeMap<usize, f64> = nodes
        .iter()
        .map(|&id| (id, counts.counts[&id] as f64 / total as f64))
        .collect();

    let mut delta = 0.0;
    for (a, &i) in nodes.iter().enumerate() {
        for &j in &nodes[a + 1..] {
            let cosine = similarity.value(i, j).unwrap_or(0.0);
            let distance = 1.0 - cosine;
            delta += 2.0 * p[&i] * p[&j] * distance;
        }
    }
    Ok(DiversityReport {
        delta,
        p,
        distance_source: DistanceSource::from_graph(similarity),
    })
}

/// Files emitted for one overlay run.
#[derive(Debug, Clone)]
pub struct OverlayOutputs {
    pub map_file: std::path::PathBuf,
    pub rao_file: std::path::PathBuf,
    pub journals_file: std::path::PathBuf,
}

/// Writes the overlay map (`overlay.txt`), the diversity value (`rao.txt`,
/// one decimal number on one line), and the per-journal CSV
/// (`overlay.csv`, columns `journal,count,weight,cluster`, zero-count
/// nodes omitted).
pub fn write_overlay_outputs(
    overlay: &BaseMap,
    counts: &OverlayCounts,
    report: &DiversityReport,
    dir: &Path,
) -> Result<OverlayOutputs> {
    std::fs::create_dir_all(dir).map_err(|source| Error::IoPath {
        path: dir.to_path_buf(),
        source,
    })?;
    let map_file = dir.join("overlay.txt");
    write_map_file(overlay, &map_file)?;

    let rao_file = dir.join("rao.txt");
    let file = File::create(&rao_file).map_err(|source| Error::IoPath {
        path: rao_file.clone(),
        source,
    })?;
    let mut out = BufWriter::new(file);
    writeln!(out, "{:.6}", report.delta)?;
    out.flush()?;

    let journals_file = dir.join("overlay.csv");
    let file = File::create(&journals_file).map_err(|source| Error::IoPath {
        path: journals_file.clone(),
        source,
    })?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record(["journal", "count", "weight", "cluster"])
        .map_err(|e| Error::parse(0, e.to_string()))?;
    for node in overlay.nodes() {
        let count = counts.counts.get(&node.id).copied().unwrap_or(0);
        if count == 0 {
            continue;
        }
        writer
            .write_record([
                node.label.clone(),
                count.to_string(),
                format!("{:.6}", node.weight),
                node.cluster.to_string(),
            ])
            .map_err(|e| Error::parse(0, e.to_string()))?;
    }
    writer.flush()?;
    Ok(OverlayOutputs {
        map_file,
        rao_file,
        journals_file,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Provenance;
    use crate::mapcore::MapNode;

    fn map_node(id: usize, label: &str, abbrev: &str) -> MapNode {
        MapNode {
            id,
            label: label.to_string(),
            abbrev: abbrev.to_string(),
            x: id as f64,
            y: 0.0,
            cluster: id % 2,
            weight: 1.0,
            status: None,
        }
    }

    fn demo_map() -> BaseMap {
        BaseMap::new(vec![
            map_node(0, "Journal A", "J A"),
            map_node(1, "Journal B", "J B"),
            map_node(2, "Journal C", ""),
        ])
        .unwrap()
    }

    fn docs(entries: &[(&str, u64)]) -> DocumentSet {
        let mut set = DocumentSet::new(Provenance::PlainCsv);
        for &(title, count) in entries {
            set.add(title, count);
        }
        set
    }

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> SimilarityGraph {
        let mut g = SimilarityGraph::new(n);
        for &(i, j, v) in edges {
            g.insert(i, j, v).unwrap();
        }
        g
    }

    #[test]
    fn resolution_normalizes_case_and_spacing() {
        let (counts, _) = resolve_document_set(
            &docs(&[("JOURNAL  a", 3)]),
            &demo_map(),
            None,
            ResolveOptions::default(),
        );
        assert_eq!(counts.counts.get(&0), Some(&3));
        assert_eq!(counts.total_documents, 3);
    }

    #[test]
    fn unknown_titles_are_reported_not_dropped() {
        let (counts, report) = resolve_document_set(
            &docs(&[("Journal A", 1), ("Nowhere Review", 2)]),
            &demo_map(),
            None,
            ResolveOptions::default(),
        );
        assert_eq!(counts.unresolved.get("Nowhere Review"), Some(&2));
        assert_eq!(counts.resolved_total() + counts.unresolved_total(), counts.total_documents);
        assert!(report.iter().any(|e| e.reason == "unresolved_title"));
    }

    #[test]
    fn full_and_abbreviated_forms_sum_onto_one_node() {
        let (counts, _) = resolve_document_set(
            &docs(&[("Journal A", 2), ("J A", 3)]),
            &demo_map(),
            None,
            ResolveOptions::default(),
        );
        assert_eq!(counts.counts.get(&0), Some(&5));
    }

    #[test]
    fn fuzzy_fallback_is_opt_in() {
        let strict = resolve_document_set(
            &docs(&[("Journal of A", 1)]),
            &demo_map(),
            None,
            ResolveOptions::default(),
        )
        .0;
        assert_eq!(strict.resolved_total(), 0);
        let fuzzy = resolve_document_set(
            &docs(&[("Journal of A", 1)]),
            &demo_map(),
            None,
            ResolveOptions {
                fuzzy_threshold: Some(0.8),
            },
        )
        .0;
        assert_eq!(fuzzy.counts.get(&0), Some(&1));
    }

    #[test]
    fn overlay_weights_are_log_counts() {
        let (counts, _) = resolve_document_set(
            &docs(&[("Journal A", 1), ("Journal B", 7)]),
            &demo_map(),
            None,
            ResolveOptions::default(),
        );
        let overlay = build_overlay(&counts, &demo_map());
        let weights: Vec<f64> = overlay.nodes().iter().map(|n| n.weight).collect();
        assert!((weights[0] - 2.0f64.ln()).abs() < 1e-15);
        assert!((weights[1] - 8.0f64.ln()).abs() < 1e-15);
        assert_eq!(weights[2], 0.0);
        // Coordinates and clusters are untouched.
        assert_eq!(overlay.nodes()[1].x, 1.0);
        assert_eq!(overlay.nodes()[1].cluster, 1);
    }

    #[test]
    fn diversity_of_single_journal_is_zero() {
        let mut counts = OverlayCounts::default();
        counts.counts.insert(0, 9);
        counts.total_documents = 9;
        let report = rao_stirling(&counts, &graph(3, &[])).unwrap();
        assert_eq!(report.delta, 0.0);
    }

    #[test]
    fn two_orthogonal_equal_journals_give_half() {
        let mut counts = OverlayCounts::default();
        counts.counts.insert(0, 5);
        counts.counts.insert(1, 5);
        counts.total_documents = 10;
        // No similarity edge: d = 1.
        let report = rao_stirling(&counts, &graph(2, &[])).unwrap();
        assert!((report.delta - 0.5).abs() < 1e-12);
        let p_sum: f64 = report.p.values().sum();
        assert!((p_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn similar_journals_reduce_diversity() {
        let mut counts = OverlayCounts::default();
        counts.counts.insert(0, 5);
        counts.counts.insert(1, 5);
        counts.total_documents = 10;
        let report = rao_stirling(&counts, &graph(2, &[(0, 1, 0.8)])).unwrap();
        // 2 * 0.25 * (1 - 0.8)
        assert!((report.delta - 0.1).abs() < 1e-12);
    }

    #[test]
    fn diversity_is_scale_invariant() {
        let mut counts = OverlayCounts::default();
        counts.counts.insert(0, 1);
        counts.counts.insert(1, 3);
        counts.counts.insert(2, 5);
        counts.total_documents = 9;
        let mut scaled = counts.clone();
        for value in scaled.counts.values_mut() {
            *value *= 10;
        }
        scaled.total_documents *= 10;
        let g = graph(3, &[(0, 1, 0.4), (1, 2, 0.9)]);
        let a = rao_stirling(&counts, &g).unwrap();
        let b = rao_stirling(&scaled, &g).unwrap();
        assert_eq!(a.delta, b.delta);
    }

    #[test]
    fn all_unresolved_is_an_error() {
        let mut counts = OverlayCounts::default();
        counts.unresolved.insert("Ghost Journal".to_string(), 4);
        counts.total_documents = 4;
        assert!(rao_stirling(&counts, &graph(2, &[])).is_err());
    }

    #[test]
    fn outputs_are_consistent_and_reparse() {
        let map = demo_map();
        let (counts, _) = resolve_document_set(
            &docs(&[("Journal A", 1), ("Journal C", 7)]),
            &map,
            None,
            ResolveOptions::default(),
        );
        let overlay = build_overlay(&counts, &map);
        let sim = graph(3, &[(0, 2, 0.25)]);
        let report = rao_stirling(&counts, &sim).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let outputs = write_overlay_outputs(&overlay, &counts, &report, dir.path()).unwrap();

        let rao_text = std::fs::read_to_string(&outputs.rao_file).unwrap();
        let parsed: f64 = rao_text.trim().parse().unwrap();
        assert!((parsed - report.delta).abs() < 5e-7);

        let map_back = crate::mapcore::read_map_file(&outputs.map_file).unwrap();
        assert_eq!(map_back.len(), 3);

        let csv_text = std::fs::read_to_string(&outputs.journals_file).unwrap();
        let lines: Vec<&str> = csv_text.lines().collect();
        // Header plus the two journals with nonzero counts.
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().skip(1).all(|l| !l.starts_with("Journal B")));
    }
}
