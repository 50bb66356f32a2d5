//! `citemap match`: stepwise matching between two journal lists, with the
//! match table, candidate list, and per-side status files.

use std::path::PathBuf;

use anyhow::Context;
use citemap::ingest::parse_journals_csv;
use citemap::matching::{
    build_match_table, export_candidates_csv, export_match_csv, IssnVariants, MatchMethod,
};
use citemap::registry::{dedupe_registry, JournalRegistry, Source};
use clap::Args;

use crate::commands::{ensure_out_dir, write_merge_log};
use crate::config::CommonArgs;
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct MatchArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Journal list of database A.
    #[arg(long, value_name = "FILE")]
    pub journals_a: PathBuf,

    /// Journal list of database B.
    #[arg(long, value_name = "FILE")]
    pub journals_b: PathBuf,

    /// Optional print/electronic ISSN variant table (`issn_1,issn_2`).
    #[arg(long, value_name = "FILE")]
    pub variants: Option<PathBuf>,

    /// Minimum gestalt similarity for stage-3 fuzzy candidates.
    #[arg(long)]
    pub fuzzy_threshold: Option<f64>,
}

fn write_status_csv(
    registry: &JournalRegistry,
    matched: &std::collections::BTreeSet<usize>,
    path: &std::path::Path,
) -> anyhow::Result<()> {
    let file =
        std::fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(["title", "status"])?;
    for record in registry.records() {
        let status = if matched.contains(&record.id) {
            "shared"
        } else {
            "unique"
        };
        writer.write_record([record.full_title.as_str(), status])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn run(args: MatchArgs) -> anyhow::Result<()> {
    let mut config = args.common.resolve()?;
    if let Some(threshold) = args.fuzzy_threshold {
        config.fuzzy_threshold = threshold;
    }
    ensure_out_dir(&args.common.out)?;
    let out = &args.common.out;

    let mut manifest = RunManifest::new("match", &config);
    manifest.add_input("journals_a", &args.journals_a)?;
    manifest.add_input("journals_b", &args.journals_b)?;

    let (raw_a, _) = parse_journals_csv(&args.journals_a, Source::A)
        .with_context(|| format!("parsing {}", args.journals_a.display()))?;
    let (raw_b, _) = parse_journals_csv(&args.journals_b, Source::B)
        .with_context(|| format!("parsing {}", args.journals_b.display()))?;
    let (reg_a, log_a) = dedupe_registry(&raw_a);
    let (reg_b, log_b) = dedupe_registry(&raw_b);
    write_merge_log(&log_a, out, "merge_log_a.csv")?;
    write_merge_log(&log_b, out, "merge_log_b.csv")?;

    let variants = match &args.variants {
        Some(path) => {
            manifest.add_input("variants", path)?;
            IssnVariants::from_csv(path)?
        }
        None => IssnVariants::new(),
    };

    let table = build_match_table(&reg_a, &reg_b, config.fuzzy_threshold, &variants)?;
    export_match_csv(&table, &reg_a, &reg_b, &out.join("match.csv"))?;
    export_candidates_csv(&table, &reg_a, &reg_b, &out.join("candidates.csv"))?;
    write_status_csv(&reg_a, &table.matched_ids_a(), &out.join("status_a.csv"))?;
    write_status_csv(&reg_b, &table.matched_ids_b(), &out.join("status_b.csv"))?;

    let count = |method: MatchMethod| -> u64 {
        table.stage_counts.get(&method).copied().unwrap_or(0) as u64
    };
    manifest.stage("journals_a", reg_a.len() as u64);
    manifest.stage("journals_b", reg_b.len() as u64);
    manifest.stage("merged_duplicates_a", log_a.merges.len() as u64);
    manifest.stage("merged_duplicates_b", log_b.merges.len() as u64);
    manifest.stage("matched_issn", count(MatchMethod::Issn));
    manifest.stage("matched_exact_title", count(MatchMethod::ExactTitle));
    manifest.stage("matched_fuzzy", count(MatchMethod::FuzzyConfirmed));
    manifest.stage("matched_total", table.confirmed().count() as u64);
    manifest.stage("candidates", table.candidates().count() as u64);
    manifest.stage("unique_a", table.unmatched_a.len() as u64);
    manifest.stage("unique_b", table.unmatched_b.len() as u64);
    manifest.write(out)?;

    println!(
        "match: {} by ISSN + {} by exact title + {} fuzzy = {} matched; {} unique to {}, {} unique to {}; {} candidates for review",
        count(MatchMethod::Issn),
        count(MatchMethod::ExactTitle),
        count(MatchMethod::FuzzyConfirmed),
        table.confirmed().count(),
        table.unmatched_a.len(),
        config.label_a,
        table.unmatched_b.len(),
        config.label_b,
        table.candidates().count()
    );
    Ok(())
}
