//! Input parsing: journal lists, citation edge CSVs, Pajek files, and the
//! three document-set export formats, plus the CSV drop/merge reports.

mod docs_csv;
mod edge_csv;
mod journals;
mod pajek;
mod ris;
mod wos;

pub use docs_csv::parse_docs_csv;
pub use edge_csv::{parse_edge_csv, write_edge_csv, EdgeCsvReport};
pub use journals::{parse_journals_csv, write_journals_csv};
pub use pajek::{parse_pajek, write_pajek};
pub use ris::parse_scopus_ris;
pub use wos::{parse_wos_analyze, parse_wos_tagged};

use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use crate::error::{Error, Result};

/// Where a document set came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    WosTagged,
    WosAnalyze,
    ScopusRis,
    PlainCsv,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::WosTagged => "wos_tagged",
            Provenance::WosAnalyze => "wos_analyze",
            Provenance::ScopusRis => "scopus_ris",
            Provenance::PlainCsv => "plain_csv",
        }
    }
}

/// Per-journal document counts from one download.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentSet {
    /// Raw journal-name string -> document count.
    pub entries: BTreeMap<String, u64>,
    pub provenance: Provenance,
}

impl DocumentSet {
    pub fn new(provenance: Provenance) -> Self {
        DocumentSet {
            entries: BTreeMap::new(),
            provenance,
        }
    }

    pub fn add(&mut self, title: &str, count: u64) {
        *self.entries.entry(title.to_string()).or_insert(0) += count;
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }
}

/// One skipped or rewritten input item; serialized to the report CSVs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportEntry {
    pub reason: String,
    /// Line or record number, empty when not applicable.
    pub locus: String,
    pub detail: String,
}

impl ReportEntry {
    pub fn new(reason: impl Into<String>, locus: impl ToString, detail: impl Into<String>) -> Self {
        ReportEntry {
            reason: reason.into(),
            locus: locus.to_string(),
            detail: detail.into(),
        }
    }
}

/// Writes a drop/merge report with columns `reason,record,detail`.
pub fn write_report_csv(entries: &[ReportEntry], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::IoPath {
        path: path.to_path_buf(),
        source,
    })?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record(["reason", "record", "detail"])
        .map_err(|e| Error::parse(0, e.to_string()))?;
    for entry in entries {
        writer
            .write_record([&entry.reason, &entry.locus, &entry.detail])
            .map_err(|e| Error::parse(0, e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

/// Counters shared by the document-set parsers. For every parser the sum of
/// document counts plus `missing_title` equals the number of records seen.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocReport {
    pub records_total: u64,
    /// Records without a recognized source-title field.
    pub missing_title: u64,
    /// Non-data rows skipped (headers, summaries); analyze format only.
    pub skipped_rows: u64,
    pub entries: Vec<ReportEntry>,
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|source| Error::IoPath {
        path: path.to_path_buf(),
        source,
    })?;
    let mut text = String::from_utf8_lossy(&bytes).into_owned();
    if let Some(stripped) = text.strip_prefix('\u{feff}') {
        text = stripped.to_string();
    }
    Ok(text)
}
