//! RIS parser for Scopus source-title exports. Records run from `TY  - `
//! to `ER  - `; the journal title is read from the first present tag among
//! `T2`, `JF`, `JO`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::{read_file, DocReport, DocumentSet, Provenance, ReportEntry};

const TITLE_TAGS: [&str; 3] = ["T2", "JF", "JO"];

fn split_tag(line: &str) -> Option<(&str, &str)> {
    // Canonical RIS framing is `XX  - value`; exporters vary in spacing.
    let bytes = line.as_bytes();
    if bytes.len() < 2 {
        return None;
    }
    let tag = &line[..2];
    if !tag.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit()) {
        return None;
    }
    let rest = &line[2..];
    let rest = rest.strip_prefix("  - ").or_else(|| {
        let trimmed = rest.trim_start();
        trimmed.strip_prefix("- ").or_else(|| trimmed.strip_prefix('-'))
    })?;
    Some((tag, rest.trim()))
}

/// Parses an RIS file (possibly several exports pasted together) into a
/// document set. Records without any recognized source-title tag are
/// counted as missing.
pub fn parse_scopus_ris(path: &Path) -> Result<(DocumentSet, DocReport)> {
    let text = read_file(path)?;
    let mut set = DocumentSet::new(Provenance::ScopusRis);
    let mut report = DocReport::default();

    let mut in_record = false;
    // Values for T2/JF/JO in the current record.
    let mut titles: [Option<String>; 3] = [None, None, None];
    let mut record_no = 0u64;

    let finish = |titles: &mut [Option<String>; 3], report: &mut DocReport, set: &mut DocumentSet, record_no: u64| {
        report.records_total += 1;
        let title = titles.iter_mut().find_map(|slot| slot.take());
        *titles = [None, None, None];
        match title {
            Some(title) if !title.is_empty() => set.add(&title, 1),
            _ => {
                report.missing_title += 1;
                report.entries.push(ReportEntry::new(
                    "missing_source_title",
                    record_no,
                    "record has no T2/JF/JO tag",
                ));
            }
        }
    };

    for line in text.lines() {
        let Some((tag, value)) = split_tag(line) else {
            continue;
        };
        match tag {
            "TY" => {
                if in_record {
                    // A new TY before ER: close the dangling record.
                    record_no += 1;
                    log::warn!("record {record_no} not terminated by ER");
                    finish(&mut titles, &mut report, &mut set, record_no);
                }
                in_record = true;
            }
            "ER" => {
                if in_record {
                    record_no += 1;
                    finish(&mut titles, &mut report, &mut set, record_no);
                    in_record = false;
                }
            }
            _ if in_record => {
                if let Some(pos) = TITLE_TAGS.iter().position(|&t| t == tag) {
                    if titles[pos].is_none() {
                        titles[pos] = Some(value.to_string());
                    }
                }
            }
            _ => {}
        }
    }
    if in_record {
        record_no += 1;
        log::warn!("file ends inside a record; counting it anyway");
        finish(&mut titles, &mut report, &mut set, record_no);
    }

    if report.records_total == 0 {
        return Err(Error::parse(0, "not an RIS file: no TY record markers found"));
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
    fn t2_names_the_source_title() {
        let file = write_temp("TY  - JOUR\nT2  - Scientometrics\nER  - \n");
        let (set, report) = parse_scopus_ris(file.path()).unwrap();
        assert_eq!(set.entries.get("Scientometrics"), Some(&1));
        assert_eq!(report.records_total, 1);
    }

    #[test]
    fn t2_wins_over_jo() {
        let file = write_temp("TY  - JOUR\nJO  - Short Name\nT2  - Full Name\nER  - \n");
        let (set, _) = parse_scopus_ris(file.path()).unwrap();
        assert_eq!(set.entries.get("Full Name"), Some(&1));
        assert_eq!(set.entries.get("Short Name"), None);
    }

    #[test]
    fn jf_used_when_t2_absent() {
        let file = write_temp("TY  - JOUR\nJF  - Fallback Journal\nER  - \n");
        let (set, _) = parse_scopus_ris(file.path()).unwrap();
        assert_eq!(set.entries.get("Fallback Journal"), Some(&1));
    }

    #[test]
    fn concatenated_exports_merge_counts() {
        let one = "TY  - JOUR\nT2  - Scientometrics\nER  - \n";
        let two = "TY  - JOUR\nT2  - Scientometrics\nER  - \nTY  - JOUR\nT2  - Other\nER  - \n";
        let file = write_temp(&format!("{one}{two}"));
        let (set, report) = parse_scopus_ris(file.path()).unwrap();
        assert_eq!(set.entries.get("Scientometrics"), Some(&2));
        assert_eq!(set.entries.get("Other"), Some(&1));
        assert_eq!(report.records_total, 3);
        assert_eq!(set.total() + report.missing_title, report.records_total);
    }

    #[test]
    fn records_without_title_tags_count_as_missing() {
        let file = write_temp("TY  - JOUR\nAU  - Smith, J.\nER  - \n");
        let (set, report) = parse_scopus_ris(file.path()).unwrap();
        assert_eq!(set.total(), 0);
        assert_eq!(report.missing_title, 1);
    }

    #[test]
    fn non_ris_files_are_rejected() {
        let file = write_temp("this is not ris\nat all\n");
        let err = parse_scopus_ris(file.path()).unwrap_err();
        assert!(err.to_string().contains("not an RIS file"));
    }
}
