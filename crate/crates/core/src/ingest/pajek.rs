//! Pajek `.net` reader and writer for citation networks.
//!
//! The writer is bit-exact: `*Vertices n`, one `i "label"` line per vertex
//! in id order, `*Arcs`, then `i j w` lines (1-based ids) sorted by
//! `(citing, cited)` with integer weights.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::read_file;
use crate::network::CitationNetwork;
use crate::registry::{JournalInput, JournalRegistry, Source};

fn parse_vertex_line(line: &str, line_no: usize) -> Result<(usize, String)> {
    let trimmed = line.trim();
    let (index_part, rest) = trimmed
        .split_once(char::is_whitespace)
        .ok_or_else(|| Error::parse(line_no, "vertex line needs an index and a label"))?;
    let index: usize = index_part
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad vertex index {index_part:?}")))?;
    let rest = rest.trim_start();
    let label = if let Some(stripped) = rest.strip_prefix('"') {
        match stripped.find('"') {
            Some(end) => stripped[..end].to_string(),
            None => return Err(Error::parse(line_no, "unterminated vertex label quote")),
        }
    } else {
        // Tolerate unquoted labels; everything up to end of line counts.
        rest.to_string()
    };
    Ok((index, label))
}

/// Reads a Pajek file into a registry (labels become full titles, tagged
/// with `source`) and a citation network. A file without an `*Arcs`
/// section yields an empty network with a warning.
pub fn parse_pajek(path: &Path, source: Source) -> Result<(JournalRegistry, CitationNetwork)> {
    let text = read_file(path)?;
    let mut lines = text.lines().enumerate().peekable();

    let mut n: Option<usize> = None;
    for (idx, line) in lines.by_ref() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lower = trimmed.to_lowercase();
        if let Some(rest) = lower.strip_prefix("*vertices") {
            n = Some(
                rest.trim()
                    .split_whitespace()
                    .next()
                    .and_then(|tok| tok.parse().ok())
                    .ok_or_else(|| Error::parse(idx + 1, "bad *Vertices count"))?,
            );
            break;
        }
        return Err(Error::parse(idx + 1, "expected *Vertices section"));
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing *Vertices section"))?;

    let mut labels: Vec<Option<String>> = vec![None; n];
    let mut in_arcs = false;
    let mut saw_arcs_header = false;
    let mut network = CitationNetwork::new(n);

    for (idx, line) in lines {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('*') {
            let lower = trimmed.to_lowercase();
            if lower.starts_with("*arcs") {
                in_arcs = true;
                saw_arcs_header = true;
            } else {
                // Other sections (*Edges, *Partition, ...) are not part of
                // the interchange; skip them.
                log::warn!("ignoring Pajek section {trimmed:?} at line {line_no}");
                in_arcs = false;
            }
            continue;
        }
        if in_arcs {
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens.len() != 3 {
                return Err(Error::parse(
                    line_no,
                    format!("arc line needs `source target weight`, found {} tokens", tokens.len()),
                ));
            }
            let citing: usize = tokens[0]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad arc source {:?}", tokens[0])))?;
            let cited: usize = tokens[1]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad arc target {:?}", tokens[1])))?;
            let weight: u64 = tokens[2]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad arc weight {:?}", tokens[2])))?;
            if citing == 0 || citing > n || cited == 0 || cited > n {
                return Err(Error::parse(
                    line_no,
                    format!("arc {citing} -> {cited} outside 1..={n}"),
                ));
            }
            if weight == 0 {
                return Err(Error::parse(line_no, "arc weight must be >= 1"));
            }
            network.add_edge(citing - 1, cited - 1, weight)?;
        } else {
            let (index, label) = parse_vertex_line(trimmed, line_no)?;
            if index == 0 || index > n {
                return Err(Error::parse(
                    line_no,
                    format!("vertex index {index} outside 1..={n}"),
                ));
            }
            labels[index - 1] = Some(label);
        }
    }

    if !saw_arcs_header {
        log::warn!("{}: no *Arcs section; network is empty", path.display());
    }

    let mut inputs = Vec::with_capacity(n);
    for (i, label) in labels.into_iter().enumerate() {
        let label = label.ok_or_else(|| Error::parse(0, format!("vertex {} has no label line", i + 1)))?;
        inputs.push(JournalInput::new(label));
    }
    let (registry, _) = JournalRegistry::from_inputs(inputs, source)?;
    Ok((registry, network))
}

/// Writes the network in Pajek format. Labels containing `"` are written
/// with `'` instead, since the format has no escape convention.
pub fn write_pajek(network: &CitationNetwork, registry: &JournalRegistry, path: &Path) -> Result<()> {
    if registry.len() != network.node_count() {
        return Err(Error::contract(format!(
            "registry has {} records, network has {} nodes",
            registry.len(),
            network.node_count()
        )));
    }
    let file = File::create(path).map_err(|source| Error::IoPath {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = BufWriter::new(file);
    writeln!(out, "*Vertices {}", network.node_count())?;
    for record in registry.records() {
        let label = record.full_title.replace('"', "'");
        writeln!(out, "{} \"{}\"", record.id + 1, label)?;
    }
    writeln!(out, "*Arcs")?;
    for (citing, cited, weight) in network.edges() {
        writeln!(out, "{} {} {}", citing + 1, cited + 1, weight)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(content.as_bytes()).unwrap();
        file
    }

    #[test]
    fn reads_two_vertex_one_arc_file() {
        let file = write_temp("*Vertices 2\n1 \"Journal A\"\n2 \"Journal B\"\n*Arcs\n1 2 5\n");
        let (registry, network) = parse_pajek(file.path(), Source::A).unwrap();
        assert_eq!(registry.len(), 2);
        assert_eq!(registry.records()[1].full_title, "Journal B");
        assert_eq!(network.edges().collect::<Vec<_>>(), vec![(0, 1, 5)]);
    }

    #[test]
    fn out_of_range_arc_names_its_line() {
        let file = write_temp("*Vertices 3\n1 \"A\"\n2 \"B\"\n3 \"C\"\n*Arcs\n1 4 2\n");
        let err = parse_pajek(file.path(), Source::A).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 6),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn missing_arcs_section_yields_empty_network() {
        let file = write_temp("*Vertices 1\n1 \"Solo\"\n");
        let (registry, network) = parse_pajek(file.path(), Source::B).unwrap();
        assert_eq!(registry.len(), 1);
        assert_eq!(network.link_count(), 0);
    }

    #[test]
    fn writer_output_is_bit_exact() {
        let (registry, _) = JournalRegistry::from_inputs(
            vec![JournalInput::new("Journal A"), JournalInput::new("Journal B")],
            Source::A,
        )
        .unwrap();
        let network = CitationNetwork::from_edges(2, [(1, 0, 3), (0, 1, 5)]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.net");
        write_pajek(&network, &registry, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "*Vertices 2\n1 \"Journal A\"\n2 \"Journal B\"\n*Arcs\n1 2 5\n2 1 3\n"
        );
    }

    proptest! {
        #[test]
        fn round_trip_preserves_registry_order_and_edges(
            n in 1usize..8,
            edges in proptest::collection::vec((0usize..8, 0usize..8, 1u64..50), 0..20),
        ) {
            let inputs: Vec<JournalInput> =
                (0..n).map(|i| JournalInput::new(format!("Journal {i}"))).collect();
            let (registry, _) = JournalRegistry::from_inputs(inputs, Source::A).unwrap();
            let edges: Vec<_> = edges
                .into_iter()
                .map(|(i, j, w)| (i % n, j % n, w))
                .collect();
            let network = CitationNetwork::from_edges(n, edges).unwrap();

            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("net.net");
            write_pajek(&network, &registry, &path).unwrap();
            let (registry2, network2) = parse_pajek(&path, Source::A).unwrap();

            let titles: Vec<_> = registry.records().iter().map(|r| &r.full_title).collect();
            let titles2: Vec<_> = registry2.records().iter().map(|r| &r.full_title).collect();
            prop_assert_eq!(titles, titles2);
            prop_assert_eq!(
                network.edges().collect::<Vec<_>>(),
                network2.edges().collect::<Vec<_>>()
            );
        }
    }
}
