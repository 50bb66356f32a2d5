//! Journal registries: one record per journal of one source database, with
//! ISSN and normalized-title indexes, and the duplicate-ISSN correction.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::normalize::{clean_issn, normalize_title};
use crate::union_find::UnionFind;

/// Which of the two databases under comparison a record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    A,
    B,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::A => "A",
            Source::B => "B",
        }
    }
}

/// One journal in one source database.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JournalRecord {
    /// Surrogate key; equals the record's position in its registry.
    pub id: usize,
    pub full_title: String,
    /// May be empty; not every export carries abbreviations.
    pub abbrev_title: String,
    /// Normalized `NNNN-NNNC` strings.
    pub issns: BTreeSet<String>,
    pub source: Source,
}

/// An ordered collection of [`JournalRecord`]s with ISSN and title indexes.
///
/// Indexes are rebuilt on construction and are always exactly consistent
/// with the records. Registries are immutable once built.
#[derive(Debug, Clone)]
pub struct JournalRegistry {
    records: Vec<JournalRecord>,
    issn_index: BTreeMap<String, BTreeSet<usize>>,
    title_index: BTreeMap<String, BTreeSet<usize>>,
}

/// Input for one registry row before ids are assigned.
#[derive(Debug, Clone, Default)]
pub struct JournalInput {
    pub full_title: String,
    pub abbrev_title: String,
    /// Raw ISSN strings; cleaned during registry construction. Invalid ones
    /// are reported back to the caller, not fatal.
    pub issns: Vec<String>,
}

impl JournalInput {
    pub fn new(full_title: impl Into<String>) -> Self {
        JournalInput {
            full_title: full_title.into(),
            ..Default::default()
        }
    }

    pub fn with_abbrev(mut self, abbrev: impl Into<String>) -> Self {
        self.abbrev_title = abbrev.into();
        self
    }

    pub fn with_issns<I: IntoIterator<Item = S>, S: Into<String>>(mut self, issns: I) -> Self {
        self.issns = issns.into_iter().map(Into::into).collect();
        self
    }
}

impl JournalRegistry {
    /// Builds a registry from row inputs. Ids are assigned by position.
    ///
    /// Returns the registry plus the list of rejected raw ISSN strings as
    /// `(record id, raw issn)`. A title that normalizes to the empty string
    /// is an error naming the offending row.
    pub fn from_inputs(
        inputs: Vec<JournalInput>,
        source: Source,
    ) -> Result<(Self, Vec<(usize, String)>)> {
        let mut records = Vec::with_capacity(inputs.len());
        let mut rejected = Vec::new();
        for (id, input) in inputs.into_iter().enumerate() {
            if normalize_title(&input.full_title).is_empty() {
                return Err(Error::parse(
                    id + 1,
                    format!("journal title {:?} is empty after normalization", input.full_title),
                ));
            }
            let mut issns = BTreeSet::new();
            for raw in &input.issns {
                if raw.trim().is_empty() {
                    continue;
                }
                match clean_issn(raw) {
                    Some(issn) => {
                        issns.insert(issn);
                    }
                    None => rejected.push((id, raw.clone())),
                }
            }
            records.push(JournalRecord {
                id,
                full_title: input.full_title,
                abbrev_title: input.abbrev_title,
                issns,
                source,
            });
        }
        Ok((Self::from_records(records), rejected))
    }

    fn from_records(records: Vec<JournalRecord>) -> Self {
        let mut registry = JournalRegistry {
            records,
            issn_index: BTreeMap::new(),
            title_index: BTreeMap::new(),
        };
        registry.rebuild_indexes();
        registry
    }

    fn rebuild_indexes(&mut self) {
        self.issn_index.clear();
        self.title_index.clear();
        for record in &self.records {
            for issn in &record.issns {
                self.issn_index.entry(issn.clone()).or_default().insert(record.id);
            }
            self.title_index
                .entry(normalize_title(&record.full_title))
                .or_default()
                .insert(record.id);
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[JournalRecord] {
        &self.records
    }

    pub fn record(&self, id: usize) -> Option<&JournalRecord> {
        self.records.get(id)
    }

    pub fn ids_for_issn(&self, issn: &str) -> Option<&BTreeSet<usize>> {
        self.issn_index.get(issn)
    }

    /// Looks up ids whose full title normalizes to the same string as `title`.
    pub fn ids_for_title(&self, title: &str) -> Option<&BTreeSet<usize>> {
        self.title_index.get(&normalize_title(title))
    }

    /// Ids already keyed by normalized title; used by matchers that iterate
    /// titles directly.
    pub fn ids_for_normalized_title(&self, normalized: &str) -> Option<&BTreeSet<usize>> {
        self.title_index.get(normalized)
    }

    #[cfg(test)]
    fn indexes_consistent(&self) -> bool {
        let rebuilt = Self::from_records(self.records.clone());
        rebuilt.issn_index == self.issn_index && rebuilt.title_index == self.title_index
    }
}

/// One merge event from [`dedupe_registry`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeEvent {
    /// Id of the surviving record in the deduplicated registry.
    pub kept_id: usize,
    pub kept_title: String,
    /// A title absorbed by the merge, retained as an alias.
    pub alias_title: String,
    pub alias_abbrev: String,
}

/// Outcome of the duplicate-ISSN correction.
#[derive(Debug, Clone, Default)]
pub struct DedupeLog {
    /// Old record id -> new record id.
    pub mapping: Vec<usize>,
    pub merges: Vec<MergeEvent>,
}

impl DedupeLog {
    pub fn is_identity(&self) -> bool {
        self.merges.is_empty()
    }
}

/// Merges records that share any ISSN, transitively.
///
/// The merged record keeps the union of ISSNs and the longest full title
/// (ties broken by the earlier record); the other titles are retained as
/// aliases in the log. New ids are dense, ordered by each group's smallest
/// old id, so the operation is idempotent.
pub fn dedupe_registry(registry: &JournalRegistry) -> (JournalRegistry, DedupeLog) {
    let n = registry.len();
    let mut uf = UnionFind::new(n);
    for ids in registry.issn_index.values() {
        let mut iter = ids.iter();
        if let Some(&first) = iter.next() {
            for &other in iter {
                uf.union(first, other);
            }
        }
    }

    let groups = uf.components();
    let mut mapping = vec![0usize; n];
    let mut merged_records = Vec::with_capacity(groups.len());
    let mut merges = Vec::new();

    for (new_id, group) in groups.iter().enumerate() {
        for &old in group {
            mapping[old] = new_id;
        }
        let keeper = group
            .iter()
            .map(|&old| &registry.records[old])
            .max_by_key(|r| (r.full_title.len(), std::cmp::Reverse(r.id)))
            .expect("group is non-empty");
        let mut issns = BTreeSet::new();
        for &old in group {
            issns.extend(registry.records[old].issns.iter().cloned());
        }
        let mut abbrev = keeper.abbrev_title.clone();
        if abbrev.is_empty() {
            for &old in group {
                if !registry.records[old].abbrev_title.is_empty() {
                    abbrev = registry.records[old].abbrev_title.clone();
                    break;
                }
            }
        }
        for &old in group {
            let record = &registry.records[old];
            if record.id != keeper.id {
                merges.push(MergeEvent {
                    kept_id: new_id,
                    kept_title: keeper.full_title.clone(),
                    alias_title: record.full_title.clone(),
                    alias_abbrev: record.abbrev_title.clone(),
                });
            }
        }
        merged_records.push(JournalRecord {
            id: new_id,
            full_title: keeper.full_title.clone(),
            abbrev_title: abbrev,
            issns,
            source: keeper.source,
        });
    }

    (
        JournalRegistry::from_records(merged_records),
        DedupeLog { mapping, merges },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn registry(rows: Vec<JournalInput>) -> JournalRegistry {
        JournalRegistry::from_inputs(rows, Source::A).unwrap().0
    }

    #[test]
    fn ids_follow_row_order_and_indexes_resolve() {
        let reg = registry(vec![
            JournalInput::new("Journal A").with_issns(["1111-1111"]),
            JournalInput::new("Journal B").with_issns(["2222-2222", "3333-3333"]),
        ]);
        assert_eq!(reg.len(), 2);
        assert_eq!(reg.ids_for_issn("3333-3333").unwrap().iter().next(), Some(&1));
        assert_eq!(reg.ids_for_title("journal a").unwrap().iter().next(), Some(&0));
        assert!(reg.indexes_consistent());
    }

    #[test]
    fn invalid_issns_are_reported_not_fatal() {
        let (reg, rejected) = JournalRegistry::from_inputs(
            vec![JournalInput::new("Journal A").with_issns(["bogus", "1111-1111"])],
            Source::A,
        )
        .unwrap();
        assert_eq!(rejected, vec![(0, "bogus".to_string())]);
        assert_eq!(reg.records()[0].issns.len(), 1);
    }

    #[test]
    fn empty_title_is_an_error() {
        let err = JournalRegistry::from_inputs(vec![JournalInput::new(" . ")], Source::A);
        assert!(err.is_err());
    }

    #[test]
    fn dedupe_merges_shared_issn_keeping_longest_title() {
        let reg = registry(vec![
            JournalInput::new("BIOMED TECH").with_issns(["0013-5585"]),
            JournalInput::new("BIOMEDICAL ENGINEERING-BIOMED TECH").with_issns(["0013-5585"]),
        ]);
        let (deduped, log) = dedupe_registry(&reg);
        assert_eq!(deduped.len(), 1);
        assert_eq!(deduped.records()[0].full_title, "BIOMEDICAL ENGINEERING-BIOMED TECH");
        assert_eq!(log.merges.len(), 1);
        assert_eq!(log.merges[0].alias_title, "BIOMED TECH");
        assert_eq!(log.mapping, vec![0, 0]);
        assert!(deduped.indexes_consistent());
    }

    #[test]
    fn dedupe_without_duplicates_is_identity() {
        let reg = registry(vec![
            JournalInput::new("Journal A").with_issns(["1111-1111"]),
            JournalInput::new("Journal B").with_issns(["2222-2222"]),
        ]);
        let (deduped, log) = dedupe_registry(&reg);
        assert!(log.is_identity());
        assert_eq!(deduped.records(), reg.records());
    }

    #[test]
    fn dedupe_closes_issn_chains_transitively() {
        let reg = registry(vec![
            JournalInput::new("J One").with_issns(["1111-1111", "2222-2222"]),
            JournalInput::new("J Two Longer").with_issns(["2222-2222", "3333-3333"]),
            JournalInput::new("J Three").with_issns(["3333-3333", "4444-4444"]),
        ]);
        let (deduped, log) = dedupe_registry(&reg);
        assert_eq!(deduped.len(), 1);
        let issns: Vec<_> = deduped.records()[0].issns.iter().cloned().collect();
        assert_eq!(issns, vec!["1111-1111", "2222-2222", "3333-3333", "4444-4444"]);
        assert_eq!(log.merges.len(), 2);
    }

    #[test]
    fn dedupe_is_idempotent() {
        let reg = registry(vec![
            JournalInput::new("A").with_issns(["1111-1111"]),
            JournalInput::new("A Longer").with_issns(["1111-1111", "2222-2222"]),
            JournalInput::new("B").with_issns(["5555-5555"]),
        ]);
        let (once, _) = dedupe_registry(&reg);
        let (twice, log) = dedupe_registry(&once);
        assert!(log.is_identity());
        assert_eq!(once.records(), twice.records());
    }
}
