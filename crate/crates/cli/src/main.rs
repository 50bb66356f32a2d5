//! `citemap` — journal citation networks, cross-database matching, base
//! maps, and document overlays from the command line.

mod commands;
mod config;
mod manifest;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "citemap",
    version,
    about = "Journal citation network analysis, matching, base maps, and overlays",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse journal lists, edge CSVs, Pajek files, or document downloads
    /// into the canonical interchange formats.
    Ingest(commands::ingest::IngestArgs),
    /// Match the journals of two databases stepwise (ISSN, exact title,
    /// fuzzy with ISSN corroboration).
    Match(commands::matchcmd::MatchArgs),
    /// Compare citation networks: per-subnetwork statistics, cross-flows,
    /// rank correlations, and rank differences.
    Stats(commands::stats::StatsArgs),
    /// Build a base map: filter, cosine-normalize, threshold, extract the
    /// giant component, cluster, and lay out.
    Basemap(commands::basemap::BasemapArgs),
    /// Project a document set onto a base map and compute Rao-Stirling
    /// diversity.
    Overlay(commands::overlay::OverlayArgs),
    /// Rao-Stirling diversity of a document set without emitting a map.
    Diversity(commands::overlay::DiversityArgs),
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(args) => commands::ingest::run(args),
        Command::Match(args) => commands::matchcmd::run(args),
        Command::Stats(args) => commands::stats::run(args),
        Command::Basemap(args) => commands::basemap::run(args),
        Command::Overlay(args) => commands::overlay::run_overlay(args),
        Command::Diversity(args) => commands::overlay::run_diversity(args),
    };
    if let Err(error) = result {
        eprintln!("error: {error:#}");
        std::process::exit(exit_code(&error));
    }
}

/// 2 = parse errors, 3 = contract violations / bad parameters, 4 = I/O,
/// 1 = anything else.
fn exit_code(error: &anyhow::Error) -> i32 {
    for cause in error.chain() {
        if let Some(e) = cause.downcast_ref::<citemap::Error>() {
            return match e {
                citemap::Error::Parse { .. } => 2,
                citemap::Error::Contract(_) | citemap::Error::Param(_) => 3,
                citemap::Error::Io(_) | citemap::Error::IoPath { .. } => 4,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 4;
        }
    }
    1
}
