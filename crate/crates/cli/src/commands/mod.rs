pub mod basemap;
pub mod ingest;
pub mod matchcmd;
pub mod overlay;
pub mod stats;

use std::path::Path;

use anyhow::Context;
use citemap::ingest::{parse_journals_csv, ReportEntry};
use citemap::network::CitationNetwork;
use citemap::registry::{dedupe_registry, DedupeLog, JournalRegistry, Source};

pub(crate) fn ensure_out_dir(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// Document-set formats accepted by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DocFormat {
    WosTagged,
    WosAnalyze,
    Ris,
    Csv,
}

pub(crate) fn parse_docs(
    path: &Path,
    format: DocFormat,
) -> citemap::Result<(citemap::ingest::DocumentSet, citemap::ingest::DocReport)> {
    match format {
        DocFormat::WosTagged => citemap::ingest::parse_wos_tagged(path),
        DocFormat::WosAnalyze => citemap::ingest::parse_wos_analyze(path),
        DocFormat::Ris => citemap::ingest::parse_scopus_ris(path),
        DocFormat::Csv => citemap::ingest::parse_docs_csv(path),
    }
}

/// A journal list plus its citation network, deduplicated and remapped.
pub(crate) struct LoadedDatabase {
    pub registry: JournalRegistry,
    pub network: CitationNetwork,
    pub dedupe_log: DedupeLog,
    pub issn_report: Vec<ReportEntry>,
    pub edge_report: Option<citemap::ingest::EdgeCsvReport>,
}

/// Loads journals + edges (CSV pair) or a Pajek file, then applies the
/// duplicate-ISSN correction and folds merged journals' rows and columns
/// together.
pub(crate) fn load_database(
    journals: Option<&Path>,
    edges: Option<&Path>,
    pajek: Option<&Path>,
    source: Source,
) -> anyhow::Result<LoadedDatabase> {
    let (registry, issn_report, network, edge_report) = match (journals, edges, pajek) {
        (Some(journals), Some(edges), None) => {
            let (registry, issn_report) = parse_journals_csv(journals, source)
                .with_context(|| format!("parsing {}", journals.display()))?;
            let (network, edge_report) = citemap::ingest::parse_edge_csv(edges, &registry)
                .with_context(|| format!("parsing {}", edges.display()))?;
            (registry, issn_report, network, Some(edge_report))
        }
        (None, None, Some(pajek)) => {
            let (registry, network) = citemap::ingest::parse_pajek(pajek, source)
                .with_context(|| format!("parsing {}", pajek.display()))?;
            (registry, Vec::new(), network, None)
        }
        _ => anyhow::bail!("provide either --journals with --edges, or --pajek"),
    };
    let (deduped, log) = dedupe_registry(&registry);
    let network = if log.is_identity() {
        network
    } else {
        network.remap(deduped.len(), &log.mapping)?
    };
    Ok(LoadedDatabase {
        registry: deduped,
        network,
        dedupe_log: log,
        issn_report,
        edge_report,
    })
}

pub(crate) fn write_merge_log(
    log: &DedupeLog,
    dir: &Path,
    name: &str,
) -> anyhow::Result<()> {
    if log.is_identity() {
        return Ok(());
    }
    let entries: Vec<ReportEntry> = log
        .merges
        .iter()
        .map(|m| {
            ReportEntry::new(
                "duplicate_issn",
                m.kept_id,
                format!("alias {:?} merged into {:?}", m.alias_title, m.kept_title),
            )
        })
        .collect();
    citemap::ingest::write_report_csv(&entries, &dir.join(name))?;
    Ok(())
}
