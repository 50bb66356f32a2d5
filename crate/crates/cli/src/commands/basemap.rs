//! `citemap basemap`: filter, drop loops, cosine-normalize, threshold,
//! extract the giant component, cluster, lay out, and write the map files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use citemap::mapcore::{
    apply_cosine_threshold, cosine_similarity_graph, exclude_outliers, giant_component,
    layout, louvain_cluster, write_map_file, BaseMap, CosineOptions, LayoutConfig, MapNode,
    NodeStatus, OutlierOptions, SimilarityGraph,
};
use citemap::normalize::normalize_title;
use citemap::registry::Source;
use clap::Args;

use crate::commands::{ensure_out_dir, load_database, write_merge_log};
use crate::config::CommonArgs;
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct BasemapArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Journal list CSV.
    #[arg(long, value_name = "FILE", requires = "edges")]
    pub journals: Option<PathBuf>,

    /// Citation edge CSV.
    #[arg(long, value_name = "FILE", requires = "journals")]
    pub edges: Option<PathBuf>,

    /// Pajek .net file (alternative to --journals/--edges).
    #[arg(long, value_name = "FILE", conflicts_with_all = ["journals", "edges"])]
    pub pajek: Option<PathBuf>,

    /// Per-journal status file (`title,status`) from `citemap match`.
    #[arg(long, value_name = "FILE")]
    pub status: Option<PathBuf>,

    /// Minimum citation count for a link to be kept.
    #[arg(long)]
    pub min_weight: Option<u64>,

    /// Similarity edges must exceed this cosine value (strict); 0 keeps all.
    #[arg(long)]
    pub cosine_threshold: Option<f64>,

    /// Louvain resolution (1 = plain modularity).
    #[arg(long)]
    pub resolution: Option<f64>,

    /// Layout iteration cap.
    #[arg(long)]
    pub max_iter: Option<usize>,

    /// Map node ids to remove before writing, comma-separated.
    #[arg(long, value_delimiter = ',', value_name = "ID,...")]
    pub exclude_ids: Vec<usize>,

    /// Also remove nodes far from the centroid automatically.
    #[arg(long)]
    pub auto_outliers: bool,

    /// Auto-outlier cutoff: distance > factor * median distance.
    #[arg(long)]
    pub outlier_factor: Option<f64>,

    /// Rotate the final map by this many degrees (counter-clockwise).
    #[arg(long, value_name = "DEGREES", allow_hyphen_values = true)]
    pub rotate: Option<f64>,

    /// Mirror the map along the vertical axis.
    #[arg(long)]
    pub flip_x: bool,

    /// Mirror the map along the horizontal axis.
    #[arg(long)]
    pub flip_y: bool,

    /// Warn when the giant component covers less than this share.
    #[arg(long)]
    pub min_component_share: Option<f64>,

    /// Keep the diagonal in the citing vectors.
    #[arg(long)]
    pub include_self_citations: bool,
}

fn load_status(path: &Path) -> anyhow::Result<BTreeMap<String, NodeStatus>> {
    let file = std::fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let mut map = BTreeMap::new();
    for record in reader.records() {
        let record = record?;
        if record.len() < 2 {
            continue;
        }
        if let Some(status) = NodeStatus::parse(record[1].trim()) {
            map.insert(normalize_title(&record[0]), status);
        }
    }
    Ok(map)
}

/// Writes the sidecar listing every mapped journal's labels and status.
fn write_journal_table(map: &BaseMap, path: &Path) -> anyhow::Result<()> {
    let file =
        std::fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(["id", "full_title", "abbrev_title", "status"])?;
    for node in map.nodes() {
        writer.write_record([
            node.id.to_string(),
            node.label.clone(),
            node.abbrev.clone(),
            node.status.map(|s| s.as_str().to_string()).unwrap_or_default(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes the raw cosine edges among the surviving map nodes, keyed by the
/// nodes' original ids; overlays use these distances for diversity.
fn write_cosine_csv(raw: &SimilarityGraph, map: &BaseMap, path: &Path) -> anyhow::Result<()> {
    let keep: std::collections::BTreeSet<usize> = map.nodes().iter().map(|n| n.id).collect();
    let file =
        std::fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(["i", "j", "cosine"])?;
    for (i, j, v) in raw.edges() {
        if keep.contains(&i) && keep.contains(&j) {
            writer.write_record([i.to_string(), j.to_string(), format!("{v}")])?;
        }
    }
    writer.flush()?;
    Ok(())
}

pub fn run(args: BasemapArgs) -> anyhow::Result<()> {
    let mut config = args.common.resolve()?;
    if let Some(v) = args.min_weight {
        config.min_weight = v;
    }
    if let Some(v) = args.cosine_threshold {
        config.cosine_threshold = v;
    }
    if let Some(v) = args.resolution {
        config.resolution = v;
    }
    if let Some(v) = args.max_iter {
        config.max_iter = v;
    }
    if let Some(v) = args.outlier_factor {
        config.outlier_factor = v;
    }
    if let Some(v) = args.rotate {
        config.rotate = v;
    }
    if let Some(v) = args.min_component_share {
        config.min_component_share = v;
    }
    config.auto_outliers |= args.auto_outliers;
    config.flip_x |= args.flip_x;
    config.flip_y |= args.flip_y;
    config.include_self_citations |= args.include_self_citations;

    ensure_out_dir(&args.common.out)?;
    let out = &args.common.out;
    let mut manifest = RunManifest::new("basemap", &config);
    for (role, path) in [
        ("journals", &args.journals),
        ("edges", &args.edges),
        ("pajek", &args.pajek),
        ("status", &args.status),
    ] {
        if let Some(path) = path {
            manifest.add_input(role, path)?;
        }
    }

    let db = load_database(
        args.journals.as_deref(),
        args.edges.as_deref(),
        args.pajek.as_deref(),
        Source::A,
    )?;
    write_merge_log(&db.dedupe_log, out, "merge_log.csv")?;
    let filtered = db.network.filter_min_weight(config.min_weight)?;

    let (cosine_input, loops_removed) = if config.include_self_citations {
        (filtered.clone(), 0)
    } else {
        filtered.remove_self_loops()
    };
    let raw = cosine_similarity_graph(
        &cosine_input,
        CosineOptions {
            include_self_citations: config.include_self_citations,
        },
    );
    let thresholded = apply_cosine_threshold(&raw, config.cosine_threshold)?;
    let (giant, share) = giant_component(&thresholded);
    if share < config.min_component_share {
        log::warn!(
            "giant component covers only {:.1}% of journals (threshold {:.1}%)",
            100.0 * share,
            100.0 * config.min_component_share
        );
    }
    let (subgraph, node_map) = thresholded.induced(&giant)?;
    if subgraph.edge_count() == 0 {
        anyhow::bail!(citemap::Error::contract(
            "no similarity structure survives the threshold; nothing to map",
        ));
    }

    let clustering = louvain_cluster(&subgraph, config.resolution, config.seed)?;
    let placed = layout(
        &subgraph,
        &LayoutConfig {
            seed: config.seed,
            max_iter: config.max_iter,
            tolerance: 1e-6,
        },
    )?;

    let status_by_title = match &args.status {
        Some(path) => load_status(path)?,
        None => BTreeMap::new(),
    };
    // Node weight: citations sent plus received in the filtered loop-free
    // network.
    let (loopless, _) = filtered.remove_self_loops();
    let mut weighted_degree = vec![0u64; loopless.node_count()];
    for (i, j, w) in loopless.edges() {
        weighted_degree[i] += w;
        weighted_degree[j] += w;
    }

    let nodes: Vec<MapNode> = node_map
        .iter()
        .enumerate()
        .map(|(new, &old)| {
            let record = &db.registry.records()[old];
            MapNode {
                id: old,
                label: record.full_title.clone(),
                abbrev: record.abbrev_title.clone(),
                x: placed.coords[new].0,
                y: placed.coords[new].1,
                cluster: clustering.assignment[new],
                weight: weighted_degree[old] as f64,
                status: status_by_title.get(&normalize_title(&record.full_title)).copied(),
            }
        })
        .collect();
    let map = BaseMap::new(nodes)?;
    let (mut map, removed) = exclude_outliers(
        &map,
        &OutlierOptions {
            manual_ids: args.exclude_ids.clone(),
            auto: config.auto_outliers,
            factor: config.outlier_factor,
        },
    )?;
    map.transform(config.rotate, config.flip_x, config.flip_y);

    write_map_file(&map, &out.join("basemap.txt"))?;
    write_journal_table(&map, &out.join("basemap_journals.csv"))?;
    write_cosine_csv(&raw, &map, &out.join("cosine.csv"))?;
    if !removed.is_empty() {
        let entries: Vec<citemap::ingest::ReportEntry> = removed
            .iter()
            .map(|(id, label, reason)| citemap::ingest::ReportEntry::new(reason.clone(), id, label.clone()))
            .collect();
        citemap::ingest::write_report_csv(&entries, &out.join("outliers.csv"))?;
    }

    manifest.stage("journals", db.registry.len() as u64);
    manifest.stage("merged_duplicates", db.dedupe_log.merges.len() as u64);
    manifest.stage("links", db.network.link_count() as u64);
    manifest.stage("links_filtered", filtered.link_count() as u64);
    manifest.stage("citations_filtered", filtered.total_citations());
    manifest.stage("self_citations_removed", loops_removed);
    manifest.stage("cosine_edges_raw", raw.edge_count() as u64);
    manifest.stage("cosine_edges_kept", thresholded.edge_count() as u64);
    manifest.stage("zero_vector_nodes", raw.zero_vector_nodes().len() as u64);
    manifest.stage("giant_component", giant.len() as u64);
    manifest.stage("giant_share", share);
    manifest.stage("clusters", clustering.n_clusters as u64);
    manifest.stage("modularity_q", clustering.q);
    manifest.stage("layout_iterations", placed.iterations as u64);
    manifest.stage("layout_stress", *placed.stress_history.last().unwrap());
    manifest.stage("outliers_removed", removed.len() as u64);
    manifest.stage("map_nodes", map.len() as u64);
    manifest.write(out)?;

    println!(
        "basemap: {} journals -> giant component {} ({:.1}%), {} clusters, Q = {:.4}, {} nodes mapped",
        db.registry.len(),
        giant.len(),
        100.0 * share,
        clustering.n_clusters,
        clustering.q,
        map.len()
    );
    Ok(())
}
