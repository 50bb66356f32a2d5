//! `citemap ingest`: normalize any supported input into the canonical
//! interchange files (journals.csv + edges.csv + network.net, or docs.csv).

use std::path::PathBuf;

use anyhow::Context;
use citemap::ingest::{write_edge_csv, write_journals_csv, write_pajek, write_report_csv};
use citemap::registry::Source;
use clap::Args;

use crate::commands::{ensure_out_dir, load_database, parse_docs, write_merge_log, DocFormat};
use crate::config::CommonArgs;
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Journal list CSV (`full_title,abbrev_title,issns`).
    #[arg(long, value_name = "FILE", requires = "edges")]
    pub journals: Option<PathBuf>,

    /// Citation edge CSV (`citing,cited,count`).
    #[arg(long, value_name = "FILE", requires = "journals")]
    pub edges: Option<PathBuf>,

    /// Pajek .net file (alternative to --journals/--edges).
    #[arg(long, value_name = "FILE", conflicts_with_all = ["journals", "edges"])]
    pub pajek: Option<PathBuf>,

    /// Document download to turn into a docs.csv.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["journals", "edges", "pajek"])]
    pub docs: Option<PathBuf>,

    /// Format of --docs.
    #[arg(long, value_enum, requires = "docs")]
    pub format: Option<DocFormat>,

    /// Which database label the journals belong to.
    #[arg(long, value_enum, default_value = "a")]
    pub source: SourceArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SourceArg {
    A,
    B,
}

impl From<SourceArg> for Source {
    fn from(value: SourceArg) -> Source {
        match value {
            SourceArg::A => Source::A,
            SourceArg::B => Source::B,
        }
    }
}

pub fn run(args: IngestArgs) -> anyhow::Result<()> {
    let config = args.common.resolve()?;
    ensure_out_dir(&args.common.out)?;
    let out = &args.common.out;
    let mut manifest = RunManifest::new("ingest", &config);

    if let Some(docs) = &args.docs {
        let format = args
            .format
            .ok_or_else(|| anyhow::anyhow!("--docs requires --format"))?;
        manifest.add_input("docs", docs)?;
        let (set, report) = parse_docs(docs, format)?;

        let docs_csv = out.join("docs.csv");
        let file = std::fs::File::create(&docs_csv)
            .with_context(|| format!("writing {}", docs_csv.display()))?;
        let mut writer = csv::Writer::from_writer(file);
        writer.write_record(["title", "count"])?;
        for (title, count) in &set.entries {
            writer.write_record([title.as_str(), &count.to_string()])?;
        }
        writer.flush()?;
        write_report_csv(&report.entries, &out.join("report.csv"))?;

        manifest.stage("provenance", set.provenance.as_str());
        manifest.stage("records", report.records_total);
        manifest.stage("missing_title", report.missing_title);
        manifest.stage("skipped_rows", report.skipped_rows);
        manifest.stage("distinct_titles", set.entries.len() as u64);
        manifest.stage("documents", set.total());
        manifest.write(out)?;
        println!(
            "ingest: {} documents over {} titles ({} records without a title)",
            set.total(),
            set.entries.len(),
            report.missing_title
        );
        return Ok(());
    }

    let source: Source = args.source.into();
    if let Some(journals) = &args.journals {
        manifest.add_input("journals", journals)?;
    }
    if let Some(edges) = &args.edges {
        manifest.add_input("edges", edges)?;
    }
    if let Some(pajek) = &args.pajek {
        manifest.add_input("pajek", pajek)?;
    }
    let db = load_database(
        args.journals.as_deref(),
        args.edges.as_deref(),
        args.pajek.as_deref(),
        source,
    )?;

    write_journals_csv(&db.registry, &out.join("journals.csv"))?;
    write_edge_csv(&db.network, &out.join("edges.csv"))?;
    write_pajek(&db.network, &db.registry, &out.join("network.net"))?;
    write_merge_log(&db.dedupe_log, out, "merge_log.csv")?;

    let mut report = db.issn_report.clone();
    if let Some(edge_report) = &db.edge_report {
        report.extend(edge_report.entries.iter().cloned());
    }
    write_report_csv(&report, &out.join("report.csv"))?;

    manifest.stage("journals", db.registry.len() as u64);
    manifest.stage("merged_duplicates", db.dedupe_log.merges.len() as u64);
    manifest.stage("links", db.network.link_count() as u64);
    manifest.stage("citations", db.network.total_citations());
    manifest.stage("self_citations", db.network.self_citations());
    if let Some(edge_report) = &db.edge_report {
        manifest.stage("rows", edge_report.rows_total as u64);
        manifest.stage("dropped_all_others", edge_report.dropped_missing as u64);
        manifest.stage("dropped_invalid", edge_report.dropped_invalid as u64);
    }
    manifest.write(out)?;
    println!(
        "ingest: {} journals ({} duplicates merged), {} links, {} citations",
        db.registry.len(),
        db.dedupe_log.merges.len(),
        db.network.link_count(),
        db.network.total_citations()
    );
    Ok(())
}
