//! Plain-CSV document sets: header `title,count`, or a single `title`
//! column where every row counts one document.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::{DocReport, DocumentSet, Provenance, ReportEntry};

pub fn parse_docs_csv(path: &Path) -> Result<(DocumentSet, DocReport)> {
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
    let title_col = headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case("title"))
        .ok_or_else(|| Error::parse(1, "missing column \"title\""))?;
    let count_col = headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case("count"));

    let mut set = DocumentSet::new(Provenance::PlainCsv);
    let mut report = DocReport::default();

    for record in reader.records() {
        let record = record.map_err(|e| Error::parse(0, e.to_string()))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let title = record.get(title_col).unwrap_or("").trim();
        if title.is_empty() {
            report.missing_title += 1;
            report
                .entries
                .push(ReportEntry::new("empty_title", line, ""));
            report.records_total += 1;
            continue;
        }
        let count = match count_col {
            Some(col) => record
                .get(col)
                .unwrap_or("")
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::parse(line, format!("count {:?} is not an integer", record.get(col).unwrap_or(""))))?,
            None => 1,
        };
        set.add(title, count);
        report.records_total += count;
    }
    if set.entries.is_empty() {
        return Err(Error::parse(0, "no document rows parsed"));
    }
    Ok((set, report))
}
