//! `citemap stats`: per-subnetwork descriptive statistics for one or two
//! databases, citation cross-flows, Spearman rank correlations, and
//! rank-difference tables over the shared journals.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::Context;
use citemap::matching::import_match_csv;
use citemap::network::{
    cross_flows, network_stats, rank_difference_table, spearman_rho, CitationNetwork,
    FlowSummary, NetworkStats,
};
use citemap::registry::{JournalRegistry, Source};
use clap::Args;

use crate::commands::{ensure_out_dir, load_database};
use crate::config::CommonArgs;
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Journal list of database A.
    #[arg(long, value_name = "FILE", requires = "edges_a")]
    pub journals_a: Option<PathBuf>,

    /// Citation edges of database A.
    #[arg(long, value_name = "FILE", requires = "journals_a")]
    pub edges_a: Option<PathBuf>,

    /// Pajek file for database A (alternative to the CSV pair).
    #[arg(long, value_name = "FILE", conflicts_with_all = ["journals_a", "edges_a"])]
    pub pajek_a: Option<PathBuf>,

    /// Journal list of database B (two-database mode).
    #[arg(long, value_name = "FILE", requires = "edges_b")]
    pub journals_b: Option<PathBuf>,

    /// Citation edges of database B.
    #[arg(long, value_name = "FILE", requires = "journals_b")]
    pub edges_b: Option<PathBuf>,

    /// Pajek file for database B.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["journals_b", "edges_b"])]
    pub pajek_b: Option<PathBuf>,

    /// Match table produced by `citemap match` (required with database B).
    #[arg(long, value_name = "FILE")]
    pub match_table: Option<PathBuf>,

    /// Minimum citation count for a link to be kept.
    #[arg(long)]
    pub min_weight: Option<u64>,

    /// Rows in the rank-difference tables.
    #[arg(long)]
    pub top_k: Option<usize>,
}

struct StatsColumn {
    name: String,
    stats: NetworkStats,
    pct_of_overall: f64,
}

fn stats_rows(columns: &[StatsColumn]) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut push = |name: &str, f: &dyn Fn(&StatsColumn) -> String| {
        let mut row = vec![name.to_string()];
        row.extend(columns.iter().map(|c| f(c)));
        rows.push(row);
    };
    push("Number of journals", &|c| c.stats.n_journals.to_string());
    push("% of overall network", &|c| format!("{:.1}", c.pct_of_overall));
    push("Average number of citations received (per journal)", &|c| {
        format!("{:.6}", c.stats.avg_citations_received)
    });
    push("Citation links", &|c| c.stats.n_links.to_string());
    push("Sum of citations", &|c| c.stats.sum_citations.to_string());
    push("Self-citations", &|c| c.stats.self_citations.to_string());
    push("Density", &|c| format!("{:.6}", c.stats.density));
    push("Average indegree", &|c| format!("{:.6}", c.stats.avg_indegree));
    push("Indegree centralization", &|c| {
        format!("{:.6}", c.stats.indegree_centralization)
    });
    push("Number of weak components", &|c| {
        c.stats.n_weak_components.to_string()
    });
    push("Size of largest weak component (% of journals)", &|c| {
        format!("{:.1}", 100.0 * c.stats.largest_component_share)
    });
    push("Number of isolates", &|c| c.stats.n_isolates.to_string());
    rows
}

fn write_stats_csv(columns: &[StatsColumn], path: &Path) -> anyhow::Result<()> {
    let file =
        std::fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    let mut writer = csv::Writer::from_writer(file);
    let mut header = vec!["metric".to_string()];
    header.extend(columns.iter().map(|c| c.name.clone()));
    writer.write_record(&header)?;
    for row in stats_rows(columns) {
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

fn write_flows_csv(flows: &[(String, FlowSummary)], path: &Path) -> anyhow::Result<()> {
    let file =
        std::fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(["database", "flow", "citations", "share"])?;
    for (database, summary) in flows {
        let shares = summary.shares();
        let cells = [
            ("shared->shared", summary.shared_to_shared, shares[0]),
            ("shared->unique", summary.shared_to_unique, shares[1]),
            ("unique->shared", summary.unique_to_shared, shares[2]),
            ("unique->unique", summary.unique_to_unique, shares[3]),
        ];
        for (flow, citations, share) in cells {
            writer.write_record([
                database.as_str(),
                flow,
                &citations.to_string(),
                &format!("{share:.6}"),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Metrics over the shared subnetwork, aligned to the match-table order.
struct SharedMetrics {
    titles: Vec<String>,
    indegree_a: Vec<f64>,
    indegree_b: Vec<f64>,
    citations_a: Vec<f64>,
    citations_b: Vec<f64>,
}

fn shared_metrics(
    table: &citemap::matching::MatchTable,
    reg_a: &JournalRegistry,
    shared_net_a: &CitationNetwork,
    map_a: &[usize],
    shared_net_b: &CitationNetwork,
    map_b: &[usize],
) -> SharedMetrics {
    let old_to_new = |map: &[usize]| -> std::collections::BTreeMap<usize, usize> {
        map.iter().enumerate().map(|(new, &old)| (old, new)).collect()
    };
    let new_a = old_to_new(map_a);
    let new_b = old_to_new(map_b);
    let indeg_a = shared_net_a.indegrees();
    let indeg_b = shared_net_b.indegrees();
    let recv_a = shared_net_a.citations_received(true);
    let recv_b = shared_net_b.citations_received(true);

    let mut metrics = SharedMetrics {
        titles: Vec::new(),
        indegree_a: Vec::new(),
        indegree_b: Vec::new(),
        citations_a: Vec::new(),
        citations_b: Vec::new(),
    };
    let mut entries: Vec<_> = table.confirmed().collect();
    entries.sort_by_key(|e| e.id_a);
    for entry in entries {
        let (Some(&na), Some(&nb)) = (new_a.get(&entry.id_a), new_b.get(&entry.id_b)) else {
            continue;
        };
        metrics.titles.push(reg_a.records()[entry.id_a].full_title.clone());
        metrics.indegree_a.push(indeg_a[na] as f64);
        metrics.indegree_b.push(indeg_b[nb] as f64);
        metrics.citations_a.push(recv_a[na] as f64);
        metrics.citations_b.push(recv_b[nb] as f64);
    }
    metrics
}

fn write_rank_files(
    titles: &[String],
    metric_a: &[f64],
    metric_b: &[f64],
    top_k: usize,
    table_path: &Path,
    distribution_path: &Path,
) -> anyhow::Result<()> {
    let (rows, distribution) = rank_difference_table(metric_a, metric_b, top_k)?;
    let file = std::fs::File::create(table_path)
        .with_context(|| format!("writing {}", table_path.display()))?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(["journal", "metric_a", "metric_b", "rank_a", "rank_b", "abs_diff"])?;
    for row in rows {
        writer.write_record([
            titles[row.journal].as_str(),
            &format!("{}", row.metric_a),
            &format!("{}", row.metric_b),
            &format!("{}", row.rank_a),
            &format!("{}", row.rank_b),
            &format!("{}", row.abs_diff),
        ])?;
    }
    writer.flush()?;

    let file = std::fs::File::create(distribution_path)
        .with_context(|| format!("writing {}", distribution_path.display()))?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(["abs_diff"])?;
    for value in distribution {
        writer.write_record([format!("{value}")])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn run(args: StatsArgs) -> anyhow::Result<()> {
    let mut config = args.common.resolve()?;
    if let Some(min_weight) = args.min_weight {
        config.min_weight = min_weight;
    }
    if let Some(top_k) = args.top_k {
        config.top_k = top_k;
    }
    ensure_out_dir(&args.common.out)?;
    let out = &args.common.out;

    let mut manifest = RunManifest::new("stats", &config);
    for (role, path) in [
        ("journals_a", &args.journals_a),
        ("edges_a", &args.edges_a),
        ("pajek_a", &args.pajek_a),
        ("journals_b", &args.journals_b),
        ("edges_b", &args.edges_b),
        ("pajek_b", &args.pajek_b),
        ("match", &args.match_table),
    ] {
        if let Some(path) = path {
            manifest.add_input(role, path)?;
        }
    }

    let db_a = load_database(
        args.journals_a.as_deref(),
        args.edges_a.as_deref(),
        args.pajek_a.as_deref(),
        Source::A,
    )?;
    let net_a = db_a.network.filter_min_weight(config.min_weight)?;

    let two_database = args.journals_b.is_some() || args.pajek_b.is_some();
    if !two_database {
        let columns = vec![StatsColumn {
            name: format!("{}_overall", config.label_a),
            stats: network_stats(&net_a),
            pct_of_overall: 100.0,
        }];
        write_stats_csv(&columns, &out.join("stats.csv"))?;
        manifest.stage("journals_a", net_a.node_count() as u64);
        manifest.stage("links_a", columns[0].stats.n_links as u64);
        manifest.write(out)?;
        println!(
            "stats: {} journals, {} links, density {:.6}",
            columns[0].stats.n_journals, columns[0].stats.n_links, columns[0].stats.density
        );
        return Ok(());
    }

    let match_path = args
        .match_table
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("two-database mode requires --match-table"))?;
    let db_b = load_database(
        args.journals_b.as_deref(),
        args.edges_b.as_deref(),
        args.pajek_b.as_deref(),
        Source::B,
    )?;
    let net_b = db_b.network.filter_min_weight(config.min_weight)?;
    let table = import_match_csv(match_path, &db_a.registry, &db_b.registry)
        .with_context(|| format!("reading {}", match_path.display()))?;

    let shared_a = table.matched_ids_a();
    let unique_a: BTreeSet<usize> = (0..net_a.node_count())
        .filter(|id| !shared_a.contains(id))
        .collect();
    let shared_b = table.matched_ids_b();
    let unique_b: BTreeSet<usize> = (0..net_b.node_count())
        .filter(|id| !shared_b.contains(id))
        .collect();

    let (shared_net_a, map_a) = net_a.induced_subnetwork(&shared_a)?;
    let (unique_net_a, _) = net_a.induced_subnetwork(&unique_a)?;
    let (shared_net_b, map_b) = net_b.induced_subnetwork(&shared_b)?;
    let (unique_net_b, _) = net_b.induced_subnetwork(&unique_b)?;

    let pct = |part: usize, whole: usize| -> f64 {
        if whole == 0 {
            0.0
        } else {
            100.0 * part as f64 / whole as f64
        }
    };
    let columns = vec![
        StatsColumn {
            name: format!("{}_shared", config.label_a),
            stats: network_stats(&shared_net_a),
            pct_of_overall: pct(shared_a.len(), net_a.node_count()),
        },
        StatsColumn {
            name: format!("{}_unique", config.label_a),
            stats: network_stats(&unique_net_a),
            pct_of_overall: pct(unique_a.len(), net_a.node_count()),
        },
        StatsColumn {
            name: format!("{}_overall", config.label_a),
            stats: network_stats(&net_a),
            pct_of_overall: 100.0,
        },
        StatsColumn {
            name: format!("{}_shared", config.label_b),
            stats: network_stats(&shared_net_b),
            pct_of_overall: pct(shared_b.len(), net_b.node_count()),
        },
        StatsColumn {
            name: format!("{}_unique", config.label_b),
            stats: network_stats(&unique_net_b),
            pct_of_overall: pct(unique_b.len(), net_b.node_count()),
        },
        StatsColumn {
            name: format!("{}_overall", config.label_b),
            stats: network_stats(&net_b),
            pct_of_overall: 100.0,
        },
    ];
    write_stats_csv(&columns, &out.join("stats.csv"))?;

    // Flows are computed on the loop-handled networks, matching the
    // structural statistics.
    let (loopless_a, _) = net_a.remove_self_loops();
    let (loopless_b, _) = net_b.remove_self_loops();
    let flows = vec![
        (config.label_a.clone(), cross_flows(&loopless_a, &shared_a, &unique_a)?),
        (config.label_b.clone(), cross_flows(&loopless_b, &shared_b, &unique_b)?),
    ];
    write_flows_csv(&flows, &out.join("flows.csv"))?;

    let metrics = shared_metrics(&table, &db_a.registry, &shared_net_a, &map_a, &shared_net_b, &map_b);
    let rho_indegree = spearman_rho(&metrics.indegree_a, &metrics.indegree_b);
    let rho_citations = spearman_rho(&metrics.citations_a, &metrics.citations_b);
    {
        let path = out.join("correlations.csv");
        let file =
            std::fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
        let mut writer = csv::Writer::from_writer(file);
        writer.write_record(["metric", "spearman_rho"])?;
        let cell = |r: &citemap::Result<f64>| match r {
            Ok(v) => format!("{v:.6}"),
            Err(_) => String::new(),
        };
        writer.write_record(["indegree", &cell(&rho_indegree)])?;
        writer.write_record(["total_citations", &cell(&rho_citations)])?;
        writer.flush()?;
    }
    write_rank_files(
        &metrics.titles,
        &metrics.indegree_a,
        &metrics.indegree_b,
        config.top_k,
        &out.join("rank_diff_indegree.csv"),
        &out.join("rank_distribution_indegree.csv"),
    )?;
    write_rank_files(
        &metrics.titles,
        &metrics.citations_a,
        &metrics.citations_b,
        config.top_k,
        &out.join("rank_diff_citations.csv"),
        &out.join("rank_distribution_citations.csv"),
    )?;

    manifest.stage("journals_a", net_a.node_count() as u64);
    manifest.stage("journals_b", net_b.node_count() as u64);
    manifest.stage("shared", shared_a.len() as u64);
    manifest.stage("unique_a", unique_a.len() as u64);
    manifest.stage("unique_b", unique_b.len() as u64);
    manifest.stage(
        "flows_a_unique_to_shared",
        flows[0].1.unique_to_shared,
    );
    manifest.stage(
        "flows_b_unique_to_shared",
        flows[1].1.unique_to_shared,
    );
    if let Ok(rho) = &rho_indegree {
        manifest.stage("spearman_indegree", *rho);
    }
    if let Ok(rho) = &rho_citations {
        manifest.stage("spearman_total_citations", *rho);
    }
    manifest.write(out)?;

    println!(
        "stats: {} shared journals; density {} {:.6} vs {} {:.6}",
        shared_a.len(),
        config.label_a,
        columns[0].stats.density,
        config.label_b,
        columns[3].stats.density
    );
    match (&rho_indegree, &rho_citations) {
        (Ok(a), Ok(b)) => println!(
            "stats: Spearman rho {a:.3} (indegree), {b:.3} (total citations)"
        ),
        _ => log::warn!("rank correlations undefined on this input (zero variance)"),
    }
    Ok(())
}
