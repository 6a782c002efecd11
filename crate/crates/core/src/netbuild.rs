//! Top-cited selection, internal citation networks and per-node statistics.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, DocumentKind};
use crate::error::{Error, Result};

/// Key used for documents without any author country.
pub const UNKNOWN_COUNTRY: &str = "(unknown)";

/// Slack absorbed before taking the ceiling of `fraction * n`, so that
/// products such as `0.3 * 10 = 3.0000000000000004` select 3, not 4.
const CEILING_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub fraction_requested: f64,
    pub n_total: usize,
    pub n_selected: usize,
    pub citations_selected: u64,
    pub citations_total: u64,
    pub share: f64,
}

/// Selects the most-cited documents.
///
/// Documents are ranked by `times_cited_global` descending, then id
/// ascending. The first `ceil(fraction * n)` are taken, plus every further
/// document tied with the last selected count.
pub fn select_top_cited(corpus: &Corpus, fraction: f64) -> Result<(Vec<String>, SelectionReport)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidFraction(fraction));
    }
    let n = corpus.len();
    let mut ranked: Vec<(u64, &str)> = corpus
        .documents()
        .iter()
        .map(|d| (d.times_cited_global, d.id.as_str()))
        .collect();
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));

    let base = ((fraction * n as f64 - CEILING_SLACK).ceil() as usize).clamp(1, n);
    let boundary = ranked[base - 1].0;
    let take = base
        + ranked[base..]
            .iter()
            .take_while(|(c, _)| *c == boundary)
            .count();

    let citations_total: u64 = ranked.iter().map(|(c, _)| c).sum();
    let citations_selected: u64 = ranked[..take].iter().map(|(c, _)| c).sum();
    let share = if citations_total > 0 {
        citations_selected as f64 / citations_total as f64
    } else {
        0.0
    };
    let ids = ranked[..take].iter().map(|(_, id)| id.to_string()).collect();
    Ok((
        ids,
        SelectionReport {
            fraction_requested: fraction,
            n_total: n,
            n_selected: take,
            citations_selected,
            citations_total,
            share,
        },
    ))
}

/// Directed citation graph over a document subset. Edges run citing → cited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationGraph {
    kind: DocumentKind,
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
}

impl CitationGraph {
    /// Builds a graph from node ids and id-pair edges. Duplicate edges
    /// collapse; self-loops and unknown endpoints are errors.
    pub fn new<I, S>(kind: DocumentKind, nodes: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let index = node_index(&nodes)?;
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownNode(id.to_string()))
        };
        let mut pairs = Vec::new();
        for (a, b) in edges {
            pairs.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::assemble(kind, nodes, index, pairs)
    }

    /// Like [`CitationGraph::new`] with edges given as node positions.
    pub fn from_indices(
        kind: DocumentKind,
        nodes: Vec<String>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let index = node_index(&nodes)?;
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= nodes.len() || b >= nodes.len()) {
            return Err(Error::UnknownNode(format!("#{}", a.max(b))));
        }
        Self::assemble(kind, nodes, index, edges)
    }

    fn assemble(
        kind: DocumentKind,
        nodes: Vec<String>,
        index: HashMap<String, usize>,
        mut edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if let Some(&(a, _)) = edges.iter().find(|(a, b)| a == b) {
            return Err(Error::SelfLoop(nodes[a].clone()));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(CitationGraph {
            kind,
            nodes,
            index,
            edges,
        })
    }

    pub fn kind(&self) -> DocumentKind {
        self.kind
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Edges as node positions, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn node_id(&self, index: usize) -> &str {
        &self.nodes[index]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges
            .iter()
            .map(|&(a, b)| (self.nodes[a].as_str(), self.nodes[b].as_str()))
    }

    /// Node and edge sets keyed by id, independent of node order.
    pub fn id_sets(&self) -> (BTreeSet<String>, BTreeSet<(String, String)>) {
        (
            self.nodes.iter().cloned().collect(),
            self.edge_ids()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
    }

    /// Undirected simple adjacency: mutual citations collapse to one edge.
    /// Neighbor lists are sorted.
    pub fn undirected_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Distinct undirected edges `(lo, hi)`, sorted.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Nodes with no incident edge in either direction.
    pub fn isolate_count(&self) -> usize {
        let mut touched = vec![false; self.nodes.len()];
        for &(a, b) in &self.edges {
            touched[a] = true;
            touched[b] = true;
        }
        touched.iter().filter(|t| !**t).count()
    }
}

fn node_index(nodes: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(nodes.len());
    for (i, id) in nodes.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::DuplicateNode(id.clone()));
        }
    }
    Ok(index)
}

/// Builds the internal citation network of `node_ids`: one edge `a → b`
/// whenever `a`'s references contain `b` and both are nodes.
pub fn build_citation_network(corpus: &Corpus, node_ids: &[String]) -> Result<CitationGraph> {
    let members: HashSet<&str> = node_ids.iter().map(String::as_str).collect();
    let mut edges = Vec::new();
    for id in node_ids {
        let doc = corpus
            .get(id)
            .ok_or_else(|| Error::UnknownNode(id.clone()))?;
        for r in &doc.references {
            if members.contains(r.as_str()) {
                edges.push((id.as_str(), r.as_str()));
            }
        }
    }
    CitationGraph::new(corpus.kind(), node_ids.to_vec(), edges)
}

/// In-degree of every node. With `restrict_to`, both the counted nodes and
/// the citing sources are limited to that subset (a cluster's internal
/// in-degree).
pub fn in_degree(
    graph: &CitationGraph,
    restrict_to: Option<&[String]>,
) -> Result<BTreeMap<String, usize>> {
    let allowed: Option<Vec<bool>> = match restrict_to {
        None => None,
        Some(ids) => {
            let mut mask = vec![false; graph.node_count()];
            for id in ids {
                let i = graph
                    .index_of(id)
                    .ok_or_else(|| Error::UnknownNode(id.clone()))?;
                mask[i] = true;
            }
            Some(mask)
        }
    };
    let keep = |i: usize| allowed.as_ref().is_none_or(|m| m[i]);
    let mut counts = vec![0usize; graph.node_count()];
    for &(src, dst) in graph.edges() {
        if keep(src) && keep(dst) {
            counts[dst] += 1;
        }
    }
    Ok(graph
        .nodes()
        .iter()
        .enumerate()
        .filter(|(i, _)| keep(*i))
        .map(|(i, id)| (id.clone(), counts[i]))
        .collect())
}

/// Documents per author country. A document counts once for every distinct
/// country among its authors; documents without any country count under
/// [`UNKNOWN_COUNTRY`].
pub fn country_counts(corpus: &Corpus, node_ids: &[String]) -> Result<BTreeMap<String, usize>> {
    let mut out: BTreeMap<String, usize> = BTreeMap::new();
    for id in node_ids {
        let doc = corpus
            .get(id)
            .ok_or_else(|| Error::UnknownNode(id.clone()))?;
        let countries: BTreeSet<&str> = doc
            .authors
            .iter()
            .filter_map(|a| a.country.as_deref())
            .filter(|c| !c.is_empty())
            .collect();
        if countries.is_empty() {
            *out.entry(UNKNOWN_COUNTRY.to_string()).or_default() += 1;
        }
        for c in countries {
            *out.entry(c.to_string()).or_default() += 1;
        }
    }
    Ok(out)
}
