//! Research-front mapping over document corpora.
//!
//! The pipeline selects the most-cited documents of a corpus, builds their
//! internal citation network, partitions it by modularity, annotates each
//! document against a controlled vocabulary, contrasts clusters by their
//! vocabulary ([`textmine`]), and, for patent families, looks for densely
//! connected regions ([`dense`]). [`report`] ties the stages together and
//! writes every intermediate table.

pub mod annotate;
pub mod cluster;
pub mod corpus;
pub mod dense;
pub mod error;
pub mod netbuild;
pub mod report;
pub mod synth;
pub mod textmine;

pub use corpus::{Corpus, DocumentKind, DocumentRecord, Vocabulary};
pub use error::{Error, ErrorClass, Result};
pub use netbuild::{CitationGraph, SelectionReport};
pub use cluster::{ClusterGraph, Partition};
pub use annotate::DocumentAnnotation;
pub use textmine::{CaResult, ContingencyTable, TokenizedDocument};
pub use dense::DenseRegion;
pub use report::{RunConfig, RunReport};

/// Tool version recorded in run reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
