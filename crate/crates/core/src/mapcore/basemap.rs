//! The base map: node coordinates, clusters, weights, labels, and the
//! tab-delimited map-file format consumed by network viewers.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::normalize::normalize_title;
use crate::registry::JournalRegistry;

/// Whether a journal is covered by both databases or only this one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    Shared,
    Unique,
}

impl NodeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeStatus::Shared => "shared",
            NodeStatus::Unique => "unique",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "shared" | "1" => Some(NodeStatus::Shared),
            "unique" | "0" => Some(NodeStatus::Unique),
            _ => None,
        }
    }
}

/// One mapped journal.
#[derive(Debug, Clone, PartialEq)]
pub struct MapNode {
    /// Stable id; map files keep the id the node had in its source network.
    pub id: usize,
    pub label: String,
    /// Abbreviated label; empty when the source file carried none.
    pub abbrev: String,
    pub x: f64,
    pub y: f64,
    pub cluster: usize,
    pub weight: f64,
    pub status: Option<NodeStatus>,
}

/// Fixed journal layout onto which document sets are projected.
///
/// The lookup index resolves normalized full and abbreviated labels back to
/// node positions; colliding labels keep the first node and are logged.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseMap {
    nodes: Vec<MapNode>,
    lookup_full: BTreeMap<String, usize>,
    lookup_abbrev: BTreeMap<String, usize>,
}

impl BaseMap {
    pub fn new(nodes: Vec<MapNode>) -> Result<Self> {
        let mut ids = std::collections::BTreeSet::new();
        for node in &nodes {
            if !node.x.is_finite() || !node.y.is_finite() {
                return Err(Error::contract(format!(
                    "node {} has non-finite coordinates",
                    node.id
                )));
            }
            if !ids.insert(node.id) {
                return Err(Error::contract(format!("duplicate node id {}", node.id)));
            }
        }
        let mut map = BaseMap {
            nodes,
            lookup_full: BTreeMap::new(),
            lookup_abbrev: BTreeMap::new(),
        };
        map.rebuild_lookup();
        Ok(map)
    }

    fn rebuild_lookup(&mut self) {
        self.lookup_full.clear();
        self.lookup_abbrev.clear();
        for (pos, node) in self.nodes.iter().enumerate() {
            let full = normalize_title(&node.label);
            if !full.is_empty() {
                if self.lookup_full.contains_key(&full) {
                    log::warn!("label {full:?} names more than one node; keeping the first");
                } else {
                    self.lookup_full.insert(full, pos);
                }
            }
            if !node.abbrev.is_empty() {
                let abbrev = normalize_title(&node.abbrev);
                if !abbrev.is_empty() {
                    self.lookup_abbrev.entry(abbrev).or_insert(pos);
                }
            }
        }
    }

    pub fn nodes(&self) -> &[MapNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node position by normalized label, trying full labels first, then
    /// abbreviations.
    pub fn resolve_label(&self, raw: &str) -> Option<usize> {
        let key = normalize_title(raw);
        if key.is_empty() {
            return None;
        }
        self.lookup_full
            .get(&key)
            .or_else(|| self.lookup_abbrev.get(&key))
            .copied()
    }

    /// All distinct label keys with their node positions, full labels first;
    /// used by the fuzzy resolver.
    pub fn label_keys(&self) -> Vec<(&str, usize)> {
        let mut keys: Vec<(&str, usize)> = self
            .lookup_full
            .iter()
            .map(|(k, &v)| (k.as_str(), v))
            .collect();
        keys.extend(self.lookup_abbrev.iter().map(|(k, &v)| (k.as_str(), v)));
        keys
    }

    /// Extends the lookup with a registry's titles: a document naming a
    /// registry title (full or abbreviated) resolves to the map node whose
    /// label normalizes to the same full title. Useful when the map file
    /// itself carries no abbreviations.
    pub fn extend_lookup_from_registry(&mut self, registry: &JournalRegistry) {
        for record in registry.records() {
            let full = normalize_title(&record.full_title);
            let Some(&pos) = self.lookup_full.get(&full) else {
                continue;
            };
            if !record.abbrev_title.is_empty() {
                let abbrev = normalize_title(&record.abbrev_title);
                if !abbrev.is_empty() {
                    self.lookup_abbrev.entry(abbrev).or_insert(pos);
                }
            }
        }
    }

    /// Applies a weight per node id, replacing existing weights.
    pub fn with_weights(&self, weights: &BTreeMap<usize, f64>) -> BaseMap {
        let mut map = self.clone();
        for node in &mut map.nodes {
            node.weight = weights.get(&node.id).copied().unwrap_or(0.0);
        }
        map
    }

    /// Rotates all coordinates by `degrees` counter-clockwise and/or flips
    /// axes; presentational only.
    pub fn transform(&mut self, rotate_degrees: f64, flip_x: bool, flip_y: bool) {
        let radians = rotate_degrees.to_radians();
        let (sin, cos) = radians.sin_cos();
        for node in &mut self.nodes {
            let (x, y) = (node.x, node.y);
            node.x = cos * x - sin * y;
            node.y = sin * x + cos * y;
            if flip_x {
                node.x = -node.x;
            }
            if flip_y {
                node.y = -node.y;
            }
        }
    }
}

/// Options for [`exclude_outliers`].
#[derive(Debug, Clone)]
pub struct OutlierOptions {
    pub manual_ids: Vec<usize>,
    /// Remove nodes farther than `factor * median distance` from the centroid.
    pub auto: bool,
    pub factor: f64,
}

impl Default for OutlierOptions {
    fn default() -> Self {
        OutlierOptions {
            manual_ids: Vec::new(),
            auto: false,
            factor: 10.0,
        }
    }
}

/// Removes manually named nodes and, optionally, automatic outliers; the
/// surviving map is re-centered so its centroid stays at the origin.
/// Removals are reported as `(id, label, reason)`.
pub fn exclude_outliers(
    map: &BaseMap,
    options: &OutlierOptions,
) -> Result<(BaseMap, Vec<(usize, String, String)>)> {
    let mut removed = Vec::new();
    let manual: std::collections::BTreeSet<usize> = options.manual_ids.iter().copied().collect();

    let mut auto_removed: std::collections::BTreeSet<usize> = Default::default();
    if options.auto && !map.is_empty() {
        let n = map.len() as f64;
        let cx = map.nodes.iter().map(|p| p.x).sum::<f64>() / n;
        let cy = map.nodes.iter().map(|p| p.y).sum::<f64>() / n;
        let mut distances: Vec<(usize, f64)> = map
            .nodes
            .iter()
            .map(|p| (p.id, ((p.x - cx).powi(2) + (p.y - cy).powi(2)).sqrt()))
            .collect();
        let mut sorted: Vec<f64> = distances.iter().map(|&(_, d)| d).collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = if sorted.len() % 2 == 1 {
            sorted[sorted.len() / 2]
        } else {
            (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2]) / 2.0
        };
        let cutoff = options.factor * median;
        for (id, distance) in distances.drain(..) {
            if distance > cutoff {
                auto_removed.insert(id);
            }
        }
    }

    let mut kept = Vec::new();
    for node in &map.nodes {
        if manual.contains(&node.id) {
            removed.push((node.id, node.label.clone(), "manual".to_string()));
        } else if auto_removed.contains(&node.id) {
            removed.push((node.id, node.label.clone(), "auto_distance".to_string()));
        } else {
            kept.push(node.clone());
        }
    }
    if kept.is_empty() {
        return Err(Error::contract("outlier exclusion would remove every node"));
    }
    let n = kept.len() as f64;
    let cx = kept.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = kept.iter().map(|p| p.y).sum::<f64>() / n;
    for node in &mut kept {
        node.x -= cx;
        node.y -= cy;
    }
    Ok((BaseMap::new(kept)?, removed))
}

const MAP_COLUMNS: [&str; 6] = ["id", "label", "x", "y", "cluster", "weight"];

/// Writes the tab-delimited map file: header `id label x y cluster weight`,
/// coordinates and weights with 6 decimal places. Tabs inside labels are
/// replaced by single spaces (logged).
pub fn write_map_file(map: &BaseMap, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::IoPath {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = BufWriter::new(file);
    writeln!(out, "{}", MAP_COLUMNS.join("\t"))?;
    for node in map.nodes() {
        let label = if node.label.contains('\t') {
            log::warn!("label {:?} contains a tab; writing spaces", node.label);
            node.label.replace('\t', " ")
        } else {
            node.label.clone()
        };
        writeln!(
            out,
            "{}\t{}\t{:.6}\t{:.6}\t{}\t{:.6}",
            node.id, label, node.x, node.y, node.cluster, node.weight
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a map file written by [`write_map_file`]. All six named columns
/// must be present; unknown extra columns are ignored. Abbreviations and
/// statuses are not part of the format and come back empty.
pub fn read_map_file(path: &Path) -> Result<BaseMap> {
    let text = crate::ingest::read_file(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty map file"))?;
    let names: Vec<&str> = header.split('\t').map(str::trim).collect();
    let mut positions = [0usize; 6];
    for (slot, column) in MAP_COLUMNS.iter().enumerate() {
        positions[slot] = names
            .iter()
            .position(|n| n.eq_ignore_ascii_case(column))
            .ok_or_else(|| Error::parse(1, format!("missing column {column:?}")))?;
    }

    let mut nodes = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let field = |slot: usize| -> Result<&str> {
            fields
                .get(positions[slot])
                .copied()
                .ok_or_else(|| Error::parse(line_no, format!("missing field {:?}", MAP_COLUMNS[slot])))
        };
        let id: usize = field(0)?
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad id {:?}", field(0).unwrap_or(""))))?;
        let label = field(1)?.to_string();
        let x: f64 = field(2)?
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, "bad x coordinate"))?;
        let y: f64 = field(3)?
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, "bad y coordinate"))?;
        let cluster: usize = field(4)?
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, "bad cluster id"))?;
        let weight: f64 = field(5)?
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, "bad weight"))?;
        nodes.push(MapNode {
            id,
            label,
            abbrev: String::new(),
            x,
            y,
            cluster,
            weight,
            status: None,
        });
    }
    BaseMap::new(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(id: usize, label: &str, x: f64, y: f64) -> MapNode {
        MapNode {
            id,
            label: label.to_string(),
            abbrev: String::new(),
            x,
            y,
            cluster: 0,
            weight: 1.0,
            status: None,
        }
    }

    #[test]
    fn lookup_resolves_full_and_abbreviated_labels() {
        let mut a = node(0, "Journal of Informetrics", 0.0, 0.0);
        a.abbrev = "J Informetr".to_string();
        let map = BaseMap::new(vec![a, node(1, "Scientometrics", 1.0, 0.0)]).unwrap();
        assert_eq!(map.resolve_label("JOURNAL OF INFORMETRICS"), Some(0));
        assert_eq!(map.resolve_label("j informetr"), Some(0));
        assert_eq!(map.resolve_label("Scientometrics"), Some(1));
        assert_eq!(map.resolve_label("Nature"), None);
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let err = BaseMap::new(vec![node(0, "A", 0.0, 0.0), node(0, "B", 1.0, 0.0)]);
        assert!(err.is_err());
    }

    #[test]
    fn one_node_map_writes_two_lines() {
        let map = BaseMap::new(vec![node(3, "Solo", 0.0, 0.0)]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.txt");
        write_map_file(&map, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "id\tlabel\tx\ty\tcluster\tweight\n3\tSolo\t0.000000\t0.000000\t0\t1.000000\n");
    }

    #[test]
    fn map_file_round_trips_within_rounding() {
        let nodes: Vec<MapNode> = (0..20)
            .map(|i| {
                let mut n = node(i, &format!("Journal {i}"), i as f64 * 0.1234567, -(i as f64) * 0.7654321);
                n.cluster = i % 3;
                n.weight = i as f64 * 0.5;
                n
            })
            .collect();
        let map = BaseMap::new(nodes).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.txt");
        write_map_file(&map, &path).unwrap();
        let back = read_map_file(&path).unwrap();
        assert_eq!(back.len(), map.len());
        for (a, b) in map.nodes().iter().zip(back.nodes()) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.label, b.label);
            assert_eq!(a.cluster, b.cluster);
            assert!((a.x - b.x).abs() <= 1e-6);
            assert!((a.y - b.y).abs() <= 1e-6);
            assert!((a.weight - b.weight).abs() <= 1e-6);
        }
    }

    #[test]
    fn tabs_in_labels_become_spaces() {
        let map = BaseMap::new(vec![node(0, "Bad\tLabel", 0.0, 0.0)]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.txt");
        write_map_file(&map, &path).unwrap();
        let back = read_map_file(&path).unwrap();
        assert_eq!(back.nodes()[0].label, "Bad Label");
    }

    #[test]
    fn missing_header_column_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.txt");
        std::fs::write(&path, "id\tlabel\tx\ty\tcluster\n0\tA\t0\t0\t0\n").unwrap();
        let err = read_map_file(&path).unwrap_err();
        assert!(err.to_string().contains("weight"), "{err}");
    }

    #[test]
    fn exclusion_is_identity_when_nothing_matches() {
        let map = BaseMap::new(vec![node(0, "A", -1.0, 0.0), node(1, "B", 1.0, 0.0)]).unwrap();
        let (same, removed) = exclude_outliers(&map, &OutlierOptions::default()).unwrap();
        assert!(removed.is_empty());
        assert_eq!(same.nodes(), map.nodes());
    }

    #[test]
    fn auto_exclusion_removes_far_nodes() {
        let mut nodes: Vec<MapNode> = (0..20)
            .map(|i| node(i, &format!("J{i}"), (i as f64 * 0.7).sin(), (i as f64 * 0.7).cos()))
            .collect();
        nodes.push(node(20, "Far", 100.0, 100.0));
        let map = BaseMap::new(nodes).unwrap();
        let (cleaned, removed) = exclude_outliers(
            &map,
            &OutlierOptions {
                auto: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(removed.len(), 1);
        assert_eq!(removed[0].0, 20);
        assert_eq!(cleaned.len(), 20);
        // Survivors are re-centered.
        let cx: f64 = cleaned.nodes().iter().map(|n| n.x).sum::<f64>() / 20.0;
        assert!(cx.abs() < 1e-12);
    }

    #[test]
    fn manual_exclusion_keeps_lookup_consistent() {
        let map = BaseMap::new(vec![
            node(0, "A", -1.0, 0.0),
            node(1, "B", 0.0, 0.0),
            node(2, "C", 1.0, 0.0),
        ])
        .unwrap();
        let (cleaned, removed) = exclude_outliers(
            &map,
            &OutlierOptions {
                manual_ids: vec![0, 2],
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(cleaned.len(), 1);
        assert_eq!(removed.len(), 2);
        assert_eq!(cleaned.resolve_label("B"), Some(0));
        assert_eq!(cleaned.resolve_label("A"), None);
    }

    #[test]
    fn excluding_everything_is_an_error() {
        let map = BaseMap::new(vec![node(0, "A", 0.0, 0.0)]).unwrap();
        let err = exclude_outliers(
            &map,
            &OutlierOptions {
                manual_ids: vec![0],
                ..Default::default()
            },
        );
        assert!(err.is_err());
    }
}
