//! Journal-list CSV: header `full_title,abbrev_title,issns`, ISSNs joined
//! by `;`, record ids assigned by row order.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::ReportEntry;
use crate::registry::{JournalInput, JournalRegistry, Source};

pub fn parse_journals_csv(path: &Path, source: Source) -> Result<(JournalRegistry, Vec<ReportEntry>)> {
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
    let col = |name: &str| -> Option<usize> {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
    };
    let title_col =
        col("full_title").ok_or_else(|| Error::parse(1, "missing column \"full_title\""))?;
    let abbrev_col = col("abbrev_title");
    let issns_col = col("issns");

    let mut inputs = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::parse(0, e.to_string()))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let title = record.get(title_col).unwrap_or("").trim();
        if title.is_empty() {
            return Err(Error::parse(line, "journal row has an empty full_title"));
        }
        let mut input = JournalInput::new(title);
        if let Some(col) = abbrev_col {
            input.abbrev_title = record.get(col).unwrap_or("").trim().to_string();
        }
        if let Some(col) = issns_col {
            input.issns = record
                .get(col)
                .unwrap_or("")
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
        }
        inputs.push(input);
    }

    let (registry, rejected) = JournalRegistry::from_inputs(inputs, source)?;
    let report = rejected
        .into_iter()
        .map(|(id, raw)| ReportEntry::new("invalid_issn", id, raw))
        .collect();
    Ok((registry, report))
}

pub fn write_journals_csv(registry: &JournalRegistry, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::IoPath {
        path: path.to_path_buf(),
        source,
    })?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record(["full_title", "abbrev_title", "issns"])
        .map_err(|e| Error::parse(0, e.to_string()))?;
    for record in registry.records() {
        let issns = record.issns.iter().cloned().collect::<Vec<_>>().join(";");
        writer
            .write_record([&record.full_title, &record.abbrev_title, &issns])
            .map_err(|e| Error::parse(0, e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn round_trips_registry_rows() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(b"full_title,abbrev_title,issns\nJournal A,J A,1111-1111;2222-2222\nJournal B,,\n")
            .unwrap();
        let (registry, report) = parse_journals_csv(file.path(), Source::A).unwrap();
        assert!(report.is_empty());
        assert_eq!(registry.len(), 2);
        assert_eq!(registry.records()[0].issns.len(), 2);

        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("journals.csv");
        write_journals_csv(&registry, &out).unwrap();
        let (reparsed, _) = parse_journals_csv(&out, Source::A).unwrap();
        assert_eq!(registry.records(), reparsed.records());
    }

    #[test]
    fn bad_issns_are_reported() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(b"full_title,abbrev_title,issns\nJournal A,,garbage\n")
            .unwrap();
        let (registry, report) = parse_journals_csv(file.path(), Source::A).unwrap();
        assert_eq!(registry.records()[0].issns.len(), 0);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].reason, "invalid_issn");
    }
}
