//! Shared inputs for the benchmarks.

use frontmap::cluster::Partition;
use frontmap::netbuild::{build_citation_network, select_top_cited};
use frontmap::synth::synthetic_papers;
use frontmap::textmine::{build_contingency, tokenize, ContingencyTable, Stopwords};
use frontmap::{CitationGraph, Corpus};

/// A synthetic paper corpus and the citation network over its top fifth.
pub fn corpus_and_network(n: usize, seed: u64) -> (Corpus, CitationGraph) {
    let corpus = synthetic_papers(n, 0.05, 0.002, seed);
    let (ids, _) = select_top_cited(&corpus, 0.2).expect("non-empty corpus");
    let graph = build_citation_network(&corpus, &ids).expect("selected ids exist");
    (corpus, graph)
}

/// Cluster × word table for a partition of `graph`.
pub fn contingency(corpus: &Corpus, partition: &Partition) -> ContingencyTable {
    let stop = Stopwords::english();
    let docs: Vec<_> = partition
        .nodes()
        .iter()
        .filter_map(|id| corpus.get(id))
        .map(|d| tokenize(d, &stop))
        .collect();
    build_contingency(&docs, partition, 2).expect("valid partition")
}
