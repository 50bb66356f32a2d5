//! Parsers for the two WoS export shapes: the tagged plain-text download
//! (`SO` source-title lines, records terminated by `ER`) and the
//! "Analyze Results" tab-delimited `analyze.txt`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::{read_file, DocReport, DocumentSet, Provenance, ReportEntry};

/// Parses a tagged WoS download. One document per `ER`-terminated record;
/// the source title is the record's `SO` line, continuation lines (leading
/// whitespace) joined with a single space.
pub fn parse_wos_tagged(path: &Path) -> Result<(DocumentSet, DocReport)> {
    let text = read_file(path)?;
    let mut set = DocumentSet::new(Provenance::WosTagged);
    let mut report = DocReport::default();

    let mut in_record = false;
    let mut current_tag = String::new();
    let mut so_title: Option<String> = None;
    let mut record_no = 0u64;

    let finish_record = |so_title: &mut Option<String>, set: &mut DocumentSet, report: &mut DocReport, record_no: u64| {
        report.records_total += 1;
        match so_title.take() {
            Some(title) if !title.trim().is_empty() => set.add(title.trim(), 1),
            _ => {
                report.missing_title += 1;
                report
                    .entries
                    .push(ReportEntry::new("missing_so", record_no, "record has no SO tag"));
            }
        }
    };

    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let is_continuation = line.starts_with(' ') || line.starts_with('\t');
        if is_continuation {
            if in_record && current_tag == "SO" {
                if let Some(title) = so_title.as_mut() {
                    title.push(' ');
                    title.push_str(line.trim());
                }
            }
            continue;
        }
        let (tag, value) = match line.split_once(' ') {
            Some((tag, value)) => (tag.trim(), value.trim()),
            None => (line.trim(), ""),
        };
        match tag {
            "ER" => {
                if in_record {
                    record_no += 1;
                    finish_record(&mut so_title, &mut set, &mut report, record_no);
                    in_record = false;
                    current_tag.clear();
                }
            }
            // File header/footer tags live outside records.
            "FN" | "VR" | "EF" => {
                current_tag = tag.to_string();
            }
            _ => {
                in_record = true;
                current_tag = tag.to_string();
                if tag == "SO" {
                    if so_title.is_none() {
                        so_title = Some(value.to_string());
                    } else {
                        log::warn!("record {} has a repeated SO tag; keeping the first", record_no + 1);
                    }
                }
            }
        }
    }

    if report.records_total == 0 {
        return Err(Error::parse(
            0,
            "not a tagged export: no ER record terminators found",
        ));
    }
    Ok((set, report))
}

/// Parses a WoS "Analyze Results" export: tab-delimited rows of
/// `title<TAB>record count<TAB>...`. Header and non-numeric-count rows are
/// skipped with warnings; zero data rows is an error.
pub fn parse_wos_analyze(path: &Path) -> Result<(DocumentSet, DocReport)> {
    let text = read_file(path)?;
    let mut set = DocumentSet::new(Provenance::WosAnalyze);
    let mut report = DocReport::default();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 2 {
            report.skipped_rows += 1;
            report
                .entries
                .push(ReportEntry::new("not_a_data_row", line_no, line.trim()));
            continue;
        }
        let title = fields[0].trim();
        let count: Option<u64> = fields[1].trim().replace(',', "").parse().ok();
        match count {
            Some(count) if count > 0 && !title.is_empty() => {
                set.add(title, count);
                report.records_total += count;
            }
            _ => {
                report.skipped_rows += 1;
                report.entries.push(ReportEntry::new(
                    "non_numeric_count",
                    line_no,
                    format!("{title} / {:?}", fields[1]),
                ));
            }
        }
    }

    if set.entries.is_empty() {
        return Err(Error::parse(0, "no data rows parsed from analyze export"));
    }
    Ok((set, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(content.as_bytes()).unwrap();
        file
    }

    #[test]
    fn tagged_counts_one_per_record() {
        let file = write_temp(
            "FN Thomson Reuters Web of Science\nVR 1.0\n\
             PT J\nAU Smith, J\nSO JOURNAL A\nER\n\
             PT J\nSO JOURNAL A\nER\nEF\n",
        );
        let (set, report) = parse_wos_tagged(file.path()).unwrap();
        assert_eq!(set.entries.get("JOURNAL A"), Some(&2));
        assert_eq!(report.records_total, 2);
        assert_eq!(report.missing_title, 0);
        assert_eq!(set.total() + report.missing_title, report.records_total);
    }

    #[test]
    fn tagged_joins_continuation_lines() {
        let file = write_temp("PT J\nSO JOURNAL OF LONG\n   TITLES\nER\n");
        let (set, _) = parse_wos_tagged(file.path()).unwrap();
        assert_eq!(set.entries.get("JOURNAL OF LONG TITLES"), Some(&1));
    }

    #[test]
    fn tagged_counts_missing_so_separately() {
        let file = write_temp("PT J\nAU Smith, J\nER\nPT J\nSO JOURNAL B\nER\n");
        let (set, report) = parse_wos_tagged(file.path()).unwrap();
        assert_eq!(set.total(), 1);
        assert_eq!(report.missing_title, 1);
        assert_eq!(report.records_total, 2);
    }

    #[test]
    fn tagged_rejects_files_without_terminators() {
        let file = write_temp("just some text\nwith lines\n");
        let err = parse_wos_tagged(file.path()).unwrap_err();
        assert!(err.to_string().contains("not a tagged export"));
    }

    #[test]
    fn analyze_parses_data_rows() {
        let file = write_temp(
            "Field Value\tRecord Count\t% of 6\tBar Chart\n\
             J A\t5\t83.3%\t***\nJ B\t1\t16.7%\t*\n",
        );
        let (set, report) = parse_wos_analyze(file.path()).unwrap();
        assert_eq!(set.entries.get("J A"), Some(&5));
        assert_eq!(set.entries.get("J B"), Some(&1));
        assert_eq!(report.skipped_rows, 1); // the header
        assert_eq!(report.records_total, 6);
    }

    #[test]
    fn analyze_skips_non_numeric_counts() {
        let file = write_temp("J A\t5\nJ C\tn/a\n");
        let (set, report) = parse_wos_analyze(file.path()).unwrap();
        assert_eq!(set.total(), 5);
        assert_eq!(report.skipped_rows, 1);
        assert_eq!(report.entries[0].reason, "non_numeric_count");
    }

    #[test]
    fn analyze_with_no_data_rows_is_an_error() {
        let file = write_temp("Field Value\tRecord Count\n");
        assert!(parse_wos_analyze(file.path()).is_err());
    }

    #[test]
    fn analyze_sums_duplicate_titles() {
        let file = write_temp("J A\t5\nJ A\t2\n");
        let (set, _) = parse_wos_analyze(file.path()).unwrap();
        assert_eq!(set.entries.get("J A"), Some(&7));
    }
}
