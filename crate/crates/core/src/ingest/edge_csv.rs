//! The canonical citation-edge interchange: a CSV with header
//! `citing,cited,count` where journals are named by registry id or by
//! exact full title.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::ReportEntry;
use crate::network::CitationNetwork;
use crate::normalize::is_all_others;
use crate::registry::JournalRegistry;

/// What happened to the rows of one edge CSV.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeCsvReport {
    pub rows_total: usize,
    pub rows_applied: usize,
    /// Rows naming the residual "All others" category (a missing value).
    pub dropped_missing: usize,
    /// Rows whose citing or cited journal is not in the registry.
    pub dropped_invalid: usize,
    pub entries: Vec<ReportEntry>,
}

fn resolve(field: &str, registry: &JournalRegistry) -> Option<usize> {
    if let Ok(id) = field.trim().parse::<usize>() {
        if id < registry.len() {
            return Some(id);
        }
        return None;
    }
    let ids = registry.ids_for_title(field)?;
    if ids.len() == 1 {
        ids.iter().next().copied()
    } else {
        None
    }
}

/// Parses an edge CSV against a registry. Duplicate `(citing, cited)` rows
/// are summed. Rows naming "All others" or an unknown journal are dropped
/// and counted; malformed rows (bad count, wrong arity) are fatal.
pub fn parse_edge_csv(
    path: &Path,
    registry: &JournalRegistry,
) -> Result<(CitationNetwork, EdgeCsvReport)> {
    let file = File::open(path).map_err(|source| Error::IoPath {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(BufReader::new(file));

    let headers = reader
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?
        .clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::parse(1, format!("missing column {name:?}")))
    };
    let citing_col = col("citing")?;
    let cited_col = col("cited")?;
    let count_col = col("count")?;

    let mut network = CitationNetwork::new(registry.len());
    let mut report = EdgeCsvReport::default();

    for record in reader.records() {
        let record = record.map_err(|e| Error::parse(0, e.to_string()))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        report.rows_total += 1;
        if record.len() <= citing_col.max(cited_col).max(count_col) {
            return Err(Error::parse(
                line,
                format!("expected 3 columns, found {}", record.len()),
            ));
        }
        let citing_raw = &record[citing_col];
        let cited_raw = &record[cited_col];
        let count: u64 = record[count_col].trim().parse().map_err(|_| {
            Error::parse(line, format!("count {:?} is not an integer", &record[count_col]))
        })?;
        if count == 0 {
            return Err(Error::parse(line, "count must be >= 1"));
        }

        if is_all_others(citing_raw) || is_all_others(cited_raw) {
            report.dropped_missing += 1;
            report.entries.push(ReportEntry::new(
                "all_others",
                line,
                format!("{citing_raw} -> {cited_raw}"),
            ));
            continue;
        }
        let (Some(citing), Some(cited)) = (resolve(citing_raw, registry), resolve(cited_raw, registry))
        else {
            report.dropped_invalid += 1;
            report.entries.push(ReportEntry::new(
                "invalid_relation",
                line,
                format!("{citing_raw} -> {cited_raw}"),
            ));
            continue;
        };
        network.add_edge(citing, cited, count)?;
        report.rows_applied += 1;
    }
    Ok((network, report))
}

/// Writes a network as the canonical edge CSV, ids ascending.
pub fn write_edge_csv(network: &CitationNetwork, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::IoPath {
        path: path.to_path_buf(),
        source,
    })?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record(["citing", "cited", "count"])
        .map_err(|e| Error::parse(0, e.to_string()))?;
    for (citing, cited, count) in network.edges() {
        writer
            .write_record([citing.to_string(), cited.to_string(), count.to_string()])
            .map_err(|e| Error::parse(0, e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}
