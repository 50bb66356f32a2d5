//! Journal citation network analysis toolkit.
//!
//! The crate reconstructs a full analytical pipeline over aggregated
//! journal-journal citation data from two bibliographic databases:
//!
//! - [`ingest`]: parsers and writers for journal lists, citation edge CSVs,
//!   Pajek network files, and document-set exports (WoS tagged, WoS
//!   analyze.txt, RIS).
//! - [`matching`]: stepwise cross-database journal matching (ISSN, exact
//!   title, gestalt fuzzy matching with ISSN corroboration).
//! - [`network`]: citation-network statistics, shared/unique subnetwork
//!   comparison, cross-flows, Spearman rank correlation, rank differences.
//! - [`mapcore`]: cosine-normalized similarity graphs, giant components,
//!   Louvain clustering with modularity, stress-majorization layout, and
//!   map files.
//! - [`overlay`]: document-set overlays on a base map and Rao-Stirling
//!   diversity.

pub mod error;
pub mod ingest;
pub mod mapcore;
pub mod matching;
pub mod network;
pub mod normalize;
pub mod overlay;
pub mod registry;

mod union_find;

pub use error::{Error, Result};
