//! Stepwise cross-database journal matching: shared ISSNs first, identical
//! normalized titles second, gestalt fuzzy matching with ISSN corroboration
//! third. Pairs that would need human judgment are surfaced as candidates,
//! never silently matched.

mod gestalt;

pub use gestalt::gestalt_similarity;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::normalize::clean_issn;
use crate::registry::JournalRegistry;

/// How a pair of journals was matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchMethod {
    Issn,
    ExactTitle,
    FuzzyConfirmed,
    /// At or above the fuzzy threshold but without ISSN corroboration, or an
    /// ambiguous exact-title tie; surfaced for review, not counted as a match.
    CandidateReview,
}

impl MatchMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchMethod::Issn => "issn",
            MatchMethod::ExactTitle => "exact_title",
            MatchMethod::FuzzyConfirmed => "fuzzy_confirmed",
            MatchMethod::CandidateReview => "candidate_review",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "issn" => Some(MatchMethod::Issn),
            "exact_title" => Some(MatchMethod::ExactTitle),
            "fuzzy_confirmed" => Some(MatchMethod::FuzzyConfirmed),
            "candidate_review" => Some(MatchMethod::CandidateReview),
            _ => None,
        }
    }
}

/// One matched (or candidate) pair across the two registries.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchEntry {
    pub id_a: usize,
    pub id_b: usize,
    pub method: MatchMethod,
    /// 1.0 for ISSN and exact-title matches.
    pub similarity: f64,
}

/// The cross-database identity mapping. Confirmed entries form a partial
/// one-to-one mapping; candidates are kept separately visible.
#[derive(Debug, Clone, Default)]
pub struct MatchTable {
    pub entries: Vec<MatchEntry>,
    pub unmatched_a: BTreeSet<usize>,
    pub unmatched_b: BTreeSet<usize>,
    pub stage_counts: BTreeMap<MatchMethod, usize>,
}

impl MatchTable {
    /// Confirmed matches only (everything except candidate-review entries).
    pub fn confirmed(&self) -> impl Iterator<Item = &MatchEntry> {
        self.entries
            .iter()
            .filter(|e| e.method != MatchMethod::CandidateReview)
    }

    pub fn candidates(&self) -> impl Iterator<Item = &MatchEntry> {
        self.entries
            .iter()
            .filter(|e| e.method == MatchMethod::CandidateReview)
    }

    pub fn matched_ids_a(&self) -> BTreeSet<usize> {
        self.confirmed().map(|e| e.id_a).collect()
    }

    pub fn matched_ids_b(&self) -> BTreeSet<usize> {
        self.confirmed().map(|e| e.id_b).collect()
    }
}

/// Optional print/electronic ISSN variant pairs, supplied as data.
#[derive(Debug, Clone, Default)]
pub struct IssnVariants {
    pairs: BTreeSet<(String, String)>,
}

impl IssnVariants {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, issn_1: &str, issn_2: &str) -> Result<()> {
        let a = clean_issn(issn_1)
            .ok_or_else(|| Error::param(format!("invalid ISSN in variant table: {issn_1:?}")))?;
        let b = clean_issn(issn_2)
            .ok_or_else(|| Error::param(format!("invalid ISSN in variant table: {issn_2:?}")))?;
        let pair = if a <= b { (a, b) } else { (b, a) };
        self.pairs.insert(pair);
        Ok(())
    }

    pub fn linked(&self, issn_1: &str, issn_2: &str) -> bool {
        let pair = if issn_1 <= issn_2 {
            (issn_1.to_string(), issn_2.to_string())
        } else {
            (issn_2.to_string(), issn_1.to_string())
        };
        self.pairs.contains(&pair)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Reads a CSV with header `issn_1,issn_2`.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|source| Error::IoPath {
            path: path.to_path_buf(),
            source,
        })?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(BufReader::new(file));
        let mut variants = IssnVariants::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::parse(0, e.to_string()))?;
            let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
            if record.len() < 2 {
                return Err(Error::parse(line, "expected two ISSN columns"));
            }
            variants.add(&record[0], &record[1]).map_err(|e| match e {
                Error::Param(msg) => Error::parse(line, msg),
                other => other,
            })?;
        }
        Ok(variants)
    }
}

/// True when two journals' ISSN sets are linked: they intersect, or the
/// variant table ties any pair of their ISSNs together.
fn issn_linked(a: &BTreeSet<String>, b: &BTreeSet<String>, variants: &IssnVariants) -> bool {
    if a.intersection(b).next().is_some() {
        return true;
    }
    a.iter()
        .any(|ia| b.iter().any(|ib| variants.linked(ia, ib)))
}

/// Builds the stepwise match table between two deduplicated registries.
///
/// Stage 1 matches on any shared ISSN; stage 2 matches remaining journals
/// with identical normalized full titles (ambiguous titles become review
/// candidates); stage 3 scans the larger remaining side against the smaller
/// with [`gestalt_similarity`], confirming a pair only when its ISSNs are
/// linked. Assembly is deterministic: candidate pairs are sorted before
/// conflict resolution and only the best ISSN-linked pair per journal is kept.
pub fn build_match_table(
    reg_a: &JournalRegistry,
    reg_b: &JournalRegistry,
    fuzzy_threshold: f64,
    variants: &IssnVariants,
) -> Result<MatchTable> {
    if !(0.0..=1.0).contains(&fuzzy_threshold) {
        return Err(Error::param(format!(
            "fuzzy threshold {fuzzy_threshold} outside [0, 1]"
        )));
    }

    let mut table = MatchTable::default();
    let mut free_a: BTreeSet<usize> = (0..reg_a.len()).collect();
    let mut free_b: BTreeSet<usize> = (0..reg_b.len()).collect();

    // Stage 1: shared ISSNs. Registries are deduplicated, so an ISSN names at
    // most one journal per side; a journal holding several ISSNs can still
    // reach several counterparts, in which case the largest overlap wins.
    for id_a in 0..reg_a.len() {
        if !free_a.contains(&id_a) {
            continue;
        }
        let record_a = &reg_a.records()[id_a];
        let mut candidates: BTreeMap<usize, usize> = BTreeMap::new();
        for issn in &record_a.issns {
            if let Some(ids) = reg_b.ids_for_issn(issn) {
                for &id_b in ids {
                    if free_b.contains(&id_b) {
                        *candidates.entry(id_b).or_insert(0) += 1;
                    }
                }
            }
        }
        let best = candidates
            .iter()
            .max_by_key(|&(&id_b, &overlap)| (overlap, std::cmp::Reverse(id_b)))
            .map(|(&id_b, _)| id_b);
        if let Some(id_b) = best {
            free_a.remove(&id_a);
            free_b.remove(&id_b);
            table.entries.push(MatchEntry {
                id_a,
                id_b,
                method: MatchMethod::Issn,
                similarity: 1.0,
            });
        }
    }

    // Stage 2: identical normalized titles among the remainder. A title held
    // by several journals on either side is ambiguous and goes to review.
    let mut titles_a: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for &id_a in &free_a {
        let title = crate::normalize::normalize_title(&reg_a.records()[id_a].full_title);
        titles_a.entry(title).or_default().push(id_a);
    }
    let mut titles_b: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for &id_b in &free_b {
        let title = crate::normalize::normalize_title(&reg_b.records()[id_b].full_title);
        titles_b.entry(title).or_default().push(id_b);
    }
    for (title, ids_a) in &titles_a {
        let Some(ids_b) = titles_b.get(title) else {
            continue;
        };
        if ids_a.len() == 1 && ids_b.len() == 1 {
            free_a.remove(&ids_a[0]);
            free_b.remove(&ids_b[0]);
            table.entries.push(MatchEntry {
                id_a: ids_a[0],
                id_b: ids_b[0],
                method: MatchMethod::ExactTitle,
                similarity: 1.0,
            });
        } else {
            log::warn!(
                "title {title:?} is ambiguous ({}x in A, {}x in B); logged for review",
                ids_a.len(),
                ids_b.len()
            );
            for &id_a in ids_a {
                for &id_b in ids_b {
                    table.entries.push(MatchEntry {
                        id_a,
                        id_b,
                        method: MatchMethod::CandidateReview,
                        similarity: 1.0,
                    });
                }
            }
        }
    }

    // Stage 3: fuzzy matching over the remainder, scanning the larger side
    // against the smaller. Pair order is fixed before conflict resolution so
    // the outcome does not depend on scan scheduling.
    let normalized_a: BTreeMap<usize, String> = free_a
        .iter()
        .map(|&id| (id, crate::normalize::normalize_title(&reg_a.records()[id].full_title)))
        .collect();
    let normalized_b: BTreeMap<usize, String> = free_b
        .iter()
        .map(|&id| (id, crate::normalize::normalize_title(&reg_b.records()[id].full_title)))
        .collect();
    let mut scored: Vec<(f64, usize, usize)> = Vec::new();
    if free_a.len() >= free_b.len() {
        for (&id_a, title_a) in &normalized_a {
            for (&id_b, title_b) in &normalized_b {
                let sim = gestalt_similarity(title_a, title_b);
                if sim >= fuzzy_threshold {
                    scored.push((sim, id_a, id_b));
                }
            }
        }
    } else {
        for (&id_b, title_b) in &normalized_b {
            for (&id_a, title_a) in &normalized_a {
                let sim = gestalt_similarity(title_b, title_a);
                if sim >= fuzzy_threshold {
                    scored.push((sim, id_a, id_b));
                }
            }
        }
    }
    scored.sort_by(|x, y| {
        y.0.partial_cmp(&x.0)
            .unwrap()
            .then(x.1.cmp(&y.1))
            .then(x.2.cmp(&y.2))
    });
    for &(sim, id_a, id_b) in &scored {
        let linked = issn_linked(
            &reg_a.records()[id_a].issns,
            &reg_b.records()[id_b].issns,
            variants,
        );
        if linked && free_a.contains(&id_a) && free_b.contains(&id_b) {
            free_a.remove(&id_a);
            free_b.remove(&id_b);
            table.entries.push(MatchEntry {
                id_a,
                id_b,
                method: MatchMethod::FuzzyConfirmed,
                similarity: sim,
            });
        } else {
            table.entries.push(MatchEntry {
                id_a,
                id_b,
                method: MatchMethod::CandidateReview,
                similarity: sim,
            });
        }
    }

    table.unmatched_a = free_a;
    table.unmatched_b = free_b;
    // A pair can surface as a candidate from both stage 2 and stage 3; keep
    // the first listing.
    let mut seen_candidates: BTreeSet<(usize, usize)> = BTreeSet::new();
    table.entries.retain(|entry| {
        entry.method != MatchMethod::CandidateReview
            || seen_candidates.insert((entry.id_a, entry.id_b))
    });
    for entry in &table.entries {
        if entry.method != MatchMethod::CandidateReview {
            *table.stage_counts.entry(entry.method).or_insert(0) += 1;
        }
    }
    Ok(table)
}

fn issns_cell(issns: &BTreeSet<String>) -> String {
    issns.iter().cloned().collect::<Vec<_>>().join(";")
}

fn write_rows<W: Write>(
    writer: &mut csv::Writer<W>,
    table: &MatchTable,
    reg_a: &JournalRegistry,
    reg_b: &JournalRegistry,
    include_candidates: bool,
) -> Result<()> {
    writer
        .write_record([
            "status", "title_a", "abbrev_a", "issns_a", "title_b", "abbrev_b", "issns_b",
            "method", "similarity",
        ])
        .map_err(csv_io_error)?;

    // status -> (sort title, record)
    let mut rows: Vec<(u8, String, Vec<String>)> = Vec::new();
    for entry in table.confirmed() {
        let a = &reg_a.records()[entry.id_a];
        let b = &reg_b.records()[entry.id_b];
        rows.push((
            0,
            a.full_title.clone(),
            vec![
                "matched".into(),
                a.full_title.clone(),
                a.abbrev_title.clone(),
                issns_cell(&a.issns),
                b.full_title.clone(),
                b.abbrev_title.clone(),
                issns_cell(&b.issns),
                entry.method.as_str().into(),
                format!("{:.6}", entry.similarity),
            ],
        ));
    }
    for &id_a in &table.unmatched_a {
        let a = &reg_a.records()[id_a];
        rows.push((
            1,
            a.full_title.clone(),
            vec![
                "unique_a".into(),
                a.full_title.clone(),
                a.abbrev_title.clone(),
                issns_cell(&a.issns),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ],
        ));
    }
    for &id_b in &table.unmatched_b {
        let b = &reg_b.records()[id_b];
        rows.push((
            2,
            b.full_title.clone(),
            vec![
                "unique_b".into(),
                String::new(),
                String::new(),
                String::new(),
                b.full_title.clone(),
                b.abbrev_title.clone(),
                issns_cell(&b.issns),
                String::new(),
                String::new(),
            ],
        ));
    }
    if include_candidates {
        for entry in table.candidates() {
            let a = &reg_a.records()[entry.id_a];
            let b = &reg_b.records()[entry.id_b];
            rows.push((
                3,
                a.full_title.clone(),
                vec![
                    "candidate".into(),
                    a.full_title.clone(),
                    a.abbrev_title.clone(),
                    issns_cell(&a.issns),
                    b.full_title.clone(),
                    b.abbrev_title.clone(),
                    issns_cell(&b.issns),
                    entry.method.as_str().into(),
                    format!("{:.6}", entry.similarity),
                ],
            ));
        }
    }
    rows.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    for (_, _, row) in rows {
        writer.write_record(&row).map_err(csv_io_error)?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_io_error(e: csv::Error) -> Error {
    Error::parse(0, e.to_string())
}

/// Writes the matched / unique_a / unique_b listing, sorted by status then
/// title. Candidate entries are excluded; see [`export_candidates_csv`].
pub fn export_match_csv(
    table: &MatchTable,
    reg_a: &JournalRegistry,
    reg_b: &JournalRegistry,
    path: &Path,
) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::IoPath {
        path: path.to_path_buf(),
        source,
    })?;
    let mut writer = csv::Writer::from_writer(file);
    write_rows(&mut writer, table, reg_a, reg_b, false)
}

/// Writes only the candidate-review pairs, same columns with status
/// `candidate`.
pub fn export_candidates_csv(
    table: &MatchTable,
    reg_a: &JournalRegistry,
    reg_b: &JournalRegistry,
    path: &Path,
) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::IoPath {
        path: path.to_path_buf(),
        source,
    })?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record([
            "status", "title_a", "abbrev_a", "issns_a", "title_b", "abbrev_b", "issns_b",
            "method", "similarity",
        ])
        .map_err(csv_io_error)?;
    for entry in table.candidates() {
        let a = &reg_a.records()[entry.id_a];
        let b = &reg_b.records()[entry.id_b];
        writer
            .write_record([
                "candidate",
                &a.full_title,
                &a.abbrev_title,
                &issns_cell(&a.issns),
                &b.full_title,
                &b.abbrev_title,
                &issns_cell(&b.issns),
                entry.method.as_str(),
                &format!("{:.6}", entry.similarity),
            ])
            .map_err(csv_io_error)?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a match CSV back, resolving titles against the two registries.
pub fn import_match_csv(
    path: &Path,
    reg_a: &JournalRegistry,
    reg_b: &JournalRegistry,
) -> Result<MatchTable> {
    let file = File::open(path).map_err(|source| Error::IoPath {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(BufReader::new(file));

    let resolve = |reg: &JournalRegistry, title: &str, line: usize| -> Result<usize> {
        let ids = reg
            .ids_for_title(title)
            .ok_or_else(|| Error::parse(line, format!("title {title:?} not found in registry")))?;
        if ids.len() != 1 {
            return Err(Error::parse(
                line,
                format!("title {title:?} is ambiguous in registry"),
            ));
        }
        Ok(*ids.iter().next().unwrap())
    };

    let mut table = MatchTable::default();
    for record in reader.records() {
        let record = record.map_err(|e| Error::parse(0, e.to_string()))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() < 9 {
            return Err(Error::parse(line, "expected 9 columns"));
        }
        match &record[0] {
            "matched" => {
                let id_a = resolve(reg_a, &record[1], line)?;
                let id_b = resolve(reg_b, &record[4], line)?;
                let method = MatchMethod::parse(&record[7])
                    .ok_or_else(|| Error::parse(line, format!("unknown method {:?}", &record[7])))?;
                let similarity: f64 = record[8]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad similarity {:?}", &record[8])))?;
                *table.stage_counts.entry(method).or_insert(0) += 1;
                table.entries.push(MatchEntry {
                    id_a,
                    id_b,
                    method,
                    similarity,
                });
            }
            "unique_a" => {
                table.unmatched_a.insert(resolve(reg_a, &record[1], line)?);
            }
            "unique_b" => {
                table.unmatched_b.insert(resolve(reg_b, &record[4], line)?);
            }
            other => {
                return Err(Error::parse(line, format!("unknown status {other:?}")));
            }
        }
    }
    let matched_a = table.matched_ids_a();
    let matched_b = table.matched_ids_b();
    if matched_a.len() + table.unmatched_a.len() != reg_a.len()
        || matched_b.len() + table.unmatched_b.len() != reg_b.len()
    {
        return Err(Error::contract(
            "match CSV does not partition the registries; was it built from these journal lists?",
        ));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{dedupe_registry, JournalInput, JournalRegistry, Source};

    fn registry(source: Source, rows: Vec<JournalInput>) -> JournalRegistry {
        let (reg, rejected) = JournalRegistry::from_inputs(rows, source).unwrap();
        assert!(rejected.is_empty());
        let (deduped, _) = dedupe_registry(&reg);
        deduped
    }

    fn stage_count(table: &MatchTable, method: MatchMethod) -> usize {
        table.stage_counts.get(&method).copied().unwrap_or(0)
    }

    #[test]
    fn shared_issn_beats_different_titles() {
        let reg_a = registry(
            Source::A,
            vec![JournalInput::new("Journal of X").with_issns(["1111-1111"])],
        );
        let reg_b = registry(
            Source::B,
            vec![JournalInput::new("J. X (Print)").with_issns(["1111-1111"])],
        );
        let table = build_match_table(&reg_a, &reg_b, 0.9, &IssnVariants::new()).unwrap();
        assert_eq!(table.entries.len(), 1);
        assert_eq!(table.entries[0].method, MatchMethod::Issn);
        assert!(table.unmatched_a.is_empty() && table.unmatched_b.is_empty());
    }

    #[test]
    fn threshold_outside_unit_interval_is_rejected() {
        let reg = registry(Source::A, vec![JournalInput::new("A")]);
        assert!(build_match_table(&reg, &reg, -0.1, &IssnVariants::new()).is_err());
        assert!(build_match_table(&reg, &reg, 1.5, &IssnVariants::new()).is_err());
    }

    #[test]
    fn exact_title_stage_requires_unambiguous_titles() {
        let reg_a = registry(
            Source::A,
            vec![
                JournalInput::new("Alpha Review").with_issns(["1111-1111"]),
                JournalInput::new("Shared Name").with_issns(["2222-2222"]),
            ],
        );
        let reg_b = registry(
            Source::B,
            vec![
                JournalInput::new("Shared name").with_issns(["3333-3333"]),
                JournalInput::new("SHARED NAME").with_issns(["4444-4444"]),
            ],
        );
        let table = build_match_table(&reg_a, &reg_b, 0.99, &IssnVariants::new()).unwrap();
        // "Shared Name" maps to two B journals: ambiguous, review only.
        assert_eq!(stage_count(&table, MatchMethod::ExactTitle), 0);
        assert_eq!(table.candidates().count(), 2);
        assert_eq!(table.unmatched_a.len(), 2);
        assert_eq!(table.unmatched_b.len(), 2);
    }

    #[test]
    fn fuzzy_needs_issn_linkage() {
        let reg_a = registry(
            Source::A,
            vec![JournalInput::new("Journal of Theoretical Examples").with_issns(["1111-1111"])],
        );
        let reg_b = registry(
            Source::B,
            vec![JournalInput::new("Journal of Theoretical Example").with_issns(["9999-9999"])],
        );
        // Without a variant link the pair stays a candidate.
        let table = build_match_table(&reg_a, &reg_b, 0.9, &IssnVariants::new()).unwrap();
        assert_eq!(stage_count(&table, MatchMethod::FuzzyConfirmed), 0);
        assert_eq!(table.candidates().count(), 1);
        assert_eq!(table.unmatched_a.len(), 1);

        let mut variants = IssnVariants::new();
        variants.add("1111-1111", "9999-9999").unwrap();
        let table = build_match_table(&reg_a, &reg_b, 0.9, &variants).unwrap();
        assert_eq!(stage_count(&table, MatchMethod::FuzzyConfirmed), 1);
        assert!(table.unmatched_a.is_empty());
    }

    #[test]
    fn stages_are_strictly_prioritized() {
        // Same ISSN and same title: must match at stage 1, not stage 2.
        let reg_a = registry(
            Source::A,
            vec![JournalInput::new("Twin Journal").with_issns(["1111-1111"])],
        );
        let reg_b = registry(
            Source::B,
            vec![JournalInput::new("Twin Journal").with_issns(["1111-1111"])],
        );
        let table = build_match_table(&reg_a, &reg_b, 0.9, &IssnVariants::new()).unwrap();
        assert_eq!(stage_count(&table, MatchMethod::Issn), 1);
        assert_eq!(stage_count(&table, MatchMethod::ExactTitle), 0);
        assert_eq!(table.candidates().count(), 0);
    }

    #[test]
    fn confirmed_entries_are_injective_both_ways() {
        let mut variants = IssnVariants::new();
        variants.add("1000-0001", "2000-0001").unwrap();
        variants.add("1000-0002", "2000-0002").unwrap();
        let reg_a = registry(
            Source::A,
            vec![
                JournalInput::new("Annals of Chemistry Part Alpha").with_issns(["1000-0001"]),
                JournalInput::new("Annals of Chemistry Part Beta").with_issns(["1000-0002"]),
            ],
        );
        let reg_b = registry(
            Source::B,
            vec![JournalInput::new("Annals of Chemistry Part Alph").with_issns([
                "2000-0001",
                "2000-0002",
            ])],
        );
        let table = build_match_table(&reg_a, &reg_b, 0.85, &IssnVariants::new()).unwrap();
        let mut seen_a = BTreeSet::new();
        let mut seen_b = BTreeSet::new();
        for entry in table.confirmed() {
            assert!(seen_a.insert(entry.id_a), "id_a {} reused", entry.id_a);
            assert!(seen_b.insert(entry.id_b), "id_b {} reused", entry.id_b);
        }
        let table = build_match_table(&reg_a, &reg_b, 0.85, &variants).unwrap();
        assert!(table.confirmed().count() <= 1);
    }

    #[test]
    fn result_is_invariant_under_record_permutation() {
        let rows_a = vec![
            JournalInput::new("Journal of Applied Examples").with_issns(["1000-0001"]),
            JournalInput::new("Review of Important Things").with_issns(["1000-0002"]),
            JournalInput::new("Bulletin of Cases").with_issns(["1000-0003"]),
        ];
        let rows_b = vec![
            JournalInput::new("Journal of Applied Examples").with_issns(["2000-0001"]),
            JournalInput::new("Review of Important Things").with_issns(["1000-0002"]),
            JournalInput::new("Annals of Other Matters").with_issns(["2000-0003"]),
        ];
        let table_key = |table: &MatchTable, ra: &JournalRegistry, rb: &JournalRegistry| {
            let mut key: Vec<(String, String, &'static str)> = table
                .confirmed()
                .map(|e| {
                    (
                        ra.records()[e.id_a].full_title.clone(),
                        rb.records()[e.id_b].full_title.clone(),
                        e.method.as_str(),
                    )
                })
                .collect();
            key.sort();
            key
        };
        let reg_a = registry(Source::A, rows_a.clone());
        let reg_b = registry(Source::B, rows_b.clone());
        let base = build_match_table(&reg_a, &reg_b, 0.9, &IssnVariants::new()).unwrap();
        let base_key = table_key(&base, &reg_a, &reg_b);

        let mut rows_a2 = rows_a;
        rows_a2.reverse();
        let mut rows_b2 = rows_b;
        rows_b2.rotate_left(1);
        let reg_a2 = registry(Source::A, rows_a2);
        let reg_b2 = registry(Source::B, rows_b2);
        let permuted = build_match_table(&reg_a2, &reg_b2, 0.9, &IssnVariants::new()).unwrap();
        assert_eq!(base_key, table_key(&permuted, &reg_a2, &reg_b2));
        assert_eq!(base.stage_counts, permuted.stage_counts);
    }

    #[test]
    fn export_sorts_by_status_then_title() {
        let reg_a = registry(
            Source::A,
            vec![
                JournalInput::new("Matched Journal").with_issns(["1111-1111"]),
                JournalInput::new("Only in A").with_issns(["2222-2222"]),
            ],
        );
        let reg_b = registry(
            Source::B,
            vec![
                JournalInput::new("Matched Journal").with_issns(["1111-1111"]),
                JournalInput::new("Only in B").with_issns(["3333-3333"]),
            ],
        );
        let table = build_match_table(&reg_a, &reg_b, 0.9, &IssnVariants::new()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("match.csv");
        export_match_csv(&table, &reg_a, &reg_b, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("matched,Matched Journal"));
        assert!(lines[2].starts_with("unique_a,Only in A"));
        assert!(lines[3].starts_with("unique_b,"));

        let reparsed = import_match_csv(&path, &reg_a, &reg_b).unwrap();
        assert_eq!(reparsed.stage_counts, table.stage_counts);
        assert_eq!(reparsed.unmatched_a, table.unmatched_a);
        assert_eq!(reparsed.unmatched_b, table.unmatched_b);
    }

    #[test]
    fn empty_registries_export_header_only() {
        let reg_a = registry(Source::A, vec![]);
        let reg_b = registry(Source::B, vec![]);
        let table = build_match_table(&reg_a, &reg_b, 0.9, &IssnVariants::new()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("match.csv");
        export_match_csv(&table, &reg_a, &reg_b, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 1);
    }
}
