//! `citemap overlay` and `citemap diversity`: project a document download
//! onto a base map, write the overlay files, and report Rao-Stirling
//! diversity.

use std::path::{Path, PathBuf};

use anyhow::Context;
use citemap::mapcore::{read_map_file, BaseMap, NodeStatus, SimilarityGraph};
use citemap::overlay::{
    build_overlay, rao_stirling, resolve_document_set, write_overlay_outputs, OverlayCounts,
    ResolveOptions,
};
use clap::Args;

use crate::commands::{ensure_out_dir, parse_docs, DocFormat};
use crate::config::CommonArgs;
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct OverlayArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Base map file written by `citemap basemap`.
    #[arg(long, value_name = "FILE")]
    pub basemap: PathBuf,

    /// Document download to overlay.
    #[arg(long, value_name = "FILE")]
    pub docs: PathBuf,

    /// Format of --docs.
    #[arg(long, value_enum)]
    pub format: DocFormat,

    /// Journal table sidecar (`id,full_title,abbrev_title,status`);
    /// defaults to basemap_journals.csv next to the base map.
    #[arg(long, value_name = "FILE")]
    pub journals: Option<PathBuf>,

    /// Cosine edge list for diversity distances; defaults to cosine.csv
    /// next to the base map.
    #[arg(long, value_name = "FILE")]
    pub cosine: Option<PathBuf>,

    /// Resolve leftover titles by best gestalt similarity.
    #[arg(long)]
    pub fuzzy_resolve: bool,

    /// Similarity needed for the fuzzy fallback.
    #[arg(long)]
    pub fuzzy_threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DiversityArgs {
    #[command(flatten)]
    pub args: OverlayArgs,
}

/// Reads the base map and, when available, re-attaches abbreviations and
/// statuses from the journal-table sidecar.
fn load_basemap(map_path: &Path, journals: Option<&Path>) -> anyhow::Result<BaseMap> {
    let map = read_map_file(map_path)
        .with_context(|| format!("reading base map {}", map_path.display()))?;
    let sidecar = journals
        .map(PathBuf::from)
        .or_else(|| {
            let candidate = map_path.parent()?.join("basemap_journals.csv");
            candidate.exists().then_some(candidate)
        });
    let Some(sidecar) = sidecar else {
        return Ok(map);
    };
    let file = std::fs::File::open(&sidecar)
        .with_context(|| format!("reading journal table {}", sidecar.display()))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let mut meta: std::collections::BTreeMap<usize, (String, Option<NodeStatus>)> =
        Default::default();
    for record in reader.records() {
        let record = record?;
        if record.len() < 3 {
            continue;
        }
        let Ok(id) = record[0].trim().parse::<usize>() else {
            continue;
        };
        let status = record.get(3).and_then(|s| NodeStatus::parse(s.trim()));
        meta.insert(id, (record[2].trim().to_string(), status));
    }
    let mut nodes = map.nodes().to_vec();
    for node in &mut nodes {
        if let Some((abbrev, status)) = meta.get(&node.id) {
            node.abbrev = abbrev.clone();
            node.status = *status;
        }
    }
    Ok(BaseMap::new(nodes)?)
}

fn resolve_cosine_path(args: &OverlayArgs) -> anyhow::Result<PathBuf> {
    if let Some(path) = &args.cosine {
        return Ok(path.clone());
    }
    let candidate = args
        .basemap
        .parent()
        .map(|dir| dir.join("cosine.csv"))
        .filter(|p| p.exists());
    candidate.ok_or_else(|| {
        anyhow::anyhow!(
            "no cosine edge list found next to {}; pass --cosine",
            args.basemap.display()
        )
    })
}

fn run_impl(args: OverlayArgs, emit_map: bool, command: &str) -> anyhow::Result<()> {
    let mut config = args.common.resolve()?;
    config.fuzzy_resolve |= args.fuzzy_resolve;
    if let Some(threshold) = args.fuzzy_threshold {
        config.fuzzy_threshold = threshold;
    }
    ensure_out_dir(&args.common.out)?;
    let out = args.common.out.clone();

    let mut manifest = RunManifest::new(command, &config);
    manifest.add_input("basemap", &args.basemap)?;
    manifest.add_input("docs", &args.docs)?;

    let basemap = load_basemap(&args.basemap, args.journals.as_deref())?;
    let cosine_path = resolve_cosine_path(&args)?;
    manifest.add_input("cosine", &cosine_path)?;
    let max_id = basemap.nodes().iter().map(|n| n.id).max().unwrap_or(0);
    let similarity = SimilarityGraph::read_csv(&cosine_path, max_id + 1)
        .with_context(|| format!("reading {}", cosine_path.display()))?;

    let (docs, doc_report) = parse_docs(&args.docs, args.format)?;
    let options = ResolveOptions {
        fuzzy_threshold: config.fuzzy_resolve.then_some(config.fuzzy_threshold),
    };
    let (counts, resolve_report) = resolve_document_set(&docs, &basemap, None, options);
    if !resolve_report.is_empty() {
        citemap::ingest::write_report_csv(&resolve_report, &out.join("unresolved.csv"))?;
    }
    if counts.resolved_total() == 0 {
        for title in counts.unresolved.keys() {
            eprintln!("unresolved: {title}");
        }
        anyhow::bail!(citemap::Error::contract(format!(
            "none of the {} document titles resolved against the base map",
            counts.unresolved.len()
        )));
    }

    let report = rao_stirling(&counts, &similarity)?;
    let overlay_map = build_overlay(&counts, &basemap);
    if emit_map {
        write_overlay_outputs(&overlay_map, &counts, &report, &out)?;
    } else {
        std::fs::write(out.join("rao.txt"), format!("{:.6}\n", report.delta))?;
        write_counts_csv(&overlay_map, &counts, &out.join("overlay.csv"))?;
    }

    manifest.stage("documents", counts.total_documents);
    manifest.stage("resolved_documents", counts.resolved_total());
    manifest.stage("unresolved_documents", counts.unresolved_total());
    manifest.stage("unresolved_titles", counts.unresolved.len() as u64);
    manifest.stage("journals_hit", counts.counts.len() as u64);
    manifest.stage("records_missing_title", doc_report.missing_title);
    manifest.stage("rao_stirling", report.delta);
    manifest.stage("distance_source", report.distance_source.describe());
    manifest.write(&out)?;

    println!("Rao-Stirling diversity: {:.6}", report.delta);
    if !counts.unresolved.is_empty() {
        println!(
            "{} title(s) unresolved ({} documents); see unresolved.csv",
            counts.unresolved.len(),
            counts.unresolved_total()
        );
    }
    Ok(())
}

fn write_counts_csv(
    overlay_map: &BaseMap,
    counts: &OverlayCounts,
    path: &Path,
) -> anyhow::Result<()> {
    let file =
        std::fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(["journal", "count", "weight", "cluster"])?;
    for node in overlay_map.nodes() {
        let count = counts.counts.get(&node.id).copied().unwrap_or(0);
        if count == 0 {
            continue;
        }
        writer.write_record([
            node.label.clone(),
            count.to_string(),
            format!("{:.6}", node.weight),
            node.cluster.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn run_overlay(args: OverlayArgs) -> anyhow::Result<()> {
    run_impl(args, true, "overlay")
}

pub fn run_diversity(args: DiversityArgs) -> anyhow::Result<()> {
    run_impl(args.args, false, "diversity")
}
