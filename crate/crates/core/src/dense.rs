//! Dense-region detection in the MCODE style: k-core vertex weighting, then
//! seeded growth over similarly weighted neighbors.
//!
//! Citation direction is ignored throughout.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, DocumentKind};
use crate::error::{Error, Result};
use crate::netbuild::CitationGraph;

/// Key used for patent families without assignees.
pub const UNKNOWN_ASSIGNEE: &str = "(unknown)";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Neighborhood {
    /// The node together with its neighbors.
    #[default]
    Closed,
    /// Neighbors only.
    Open,
}

/// Per-node weight: `k * density` of the highest k-core of the node's
/// neighborhood.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexWeighting {
    nodes: Vec<String>,
    weights: Vec<f64>,
}

impl VertexWeighting {
    /// Weights aligned with the graph's node order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.nodes.iter().position(|n| n == id).map(|i| self.weights[i])
    }

    pub fn as_map(&self) -> BTreeMap<String, f64> {
        self.nodes.iter().cloned().zip(self.weights.iter().copied()).collect()
    }
}

/// Core number of every vertex of a small undirected graph.
pub fn core_numbers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; n];
    let mut core = vec![0usize; n];
    let mut k = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("a vertex remains");
        k = k.max(degree[v]);
        core[v] = k;
        removed[v] = true;
        for &w in &adj[v] {
            if !removed[w] {
                degree[w] -= 1;
            }
        }
    }
    core
}

/// `k * density` of the highest k-core of the subgraph induced by `members`.
fn core_weight(adj: &[Vec<usize>], members: &[usize]) -> f64 {
    let local: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let sub: Vec<Vec<usize>> = members
        .iter()
        .map(|v| adj[*v].iter().filter_map(|w| local.get(w).copied()).collect())
        .collect();
    let core = core_numbers(&sub);
    let k = core.iter().copied().max().unwrap_or(0);
    if k == 0 {
        return 0.0;
    }
    let inner: Vec<usize> = (0..sub.len()).filter(|&i| core[i] >= k).collect();
    let n = inner.len();
    let twice_edges: usize = inner
        .iter()
        .map(|&i| sub[i].iter().filter(|&&j| core[j] >= k).count())
        .sum();
    let density = twice_edges as f64 / (n * (n - 1)) as f64;
    k as f64 * density
}

pub fn vertex_weights(graph: &CitationGraph) -> VertexWeighting {
    vertex_weights_with(graph, Neighborhood::Closed)
}

pub fn vertex_weights_with(graph: &CitationGraph, neighborhood: Neighborhood) -> VertexWeighting {
    let adj = graph.undirected_adjacency();
    let weights = (0..graph.node_count())
        .into_par_iter()
        .map(|v| {
            let mut members = adj[v].clone();
            if neighborhood == Neighborhood::Closed {
                members.push(v);
                members.sort_unstable();
            }
            core_weight(&adj, &members)
        })
        .collect();
    VertexWeighting {
        nodes: graph.nodes().to_vec(),
        weights,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenseParams {
    /// Vertex weight percentage: neighbors join while their weight is at
    /// least `seed_weight * (1 - vwp)`.
    pub vwp: f64,
    /// Drop members with fewer than two neighbors inside the region.
    pub haircut: bool,
}

impl Default for DenseParams {
    fn default() -> Self {
        DenseParams {
            vwp: 0.2,
            haircut: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseRegion {
    /// Member ids, ascending.
    pub members: Vec<String>,
    pub seed: String,
    /// Mean member weight.
    pub score: f64,
    /// Internal edges over possible edges.
    pub density: f64,
}

/// Breadth-first growth from `seed` over unvisited nodes whose weight is at
/// least `weight(seed) * (1 - vwp)`. Returns member positions, ascending.
pub fn grow_region(
    adj: &[Vec<usize>],
    weights: &[f64],
    seed: usize,
    vwp: f64,
    visited: &[bool],
) -> Vec<usize> {
    let threshold = weights[seed] * (1.0 - vwp);
    let mut inside = vec![false; adj.len()];
    inside[seed] = true;
    let mut queue = VecDeque::from([seed]);
    let mut members = vec![seed];
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !inside[w] && !visited[w] && weights[w] >= threshold {
                inside[w] = true;
                members.push(w);
                queue.push_back(w);
            }
        }
    }
    members.sort_unstable();
    members
}

/// Repeatedly removes members with fewer than two neighbors in the set.
fn haircut(adj: &[Vec<usize>], members: &mut Vec<usize>) {
    loop {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        let before = members.len();
        members.retain(|v| adj[*v].iter().filter(|w| set.contains(w)).count() >= 2);
        if members.len() == before {
            break;
        }
    }
}

fn internal_edges(adj: &[Vec<usize>], members: &[usize]) -> usize {
    let set: BTreeSet<usize> = members.iter().copied().collect();
    members
        .iter()
        .map(|v| adj[*v].iter().filter(|w| set.contains(w)).count())
        .sum::<usize>()
        / 2
}

/// Finds node-disjoint dense regions, highest score first (ties by smallest
/// member id). Seeds are taken by weight descending, then id ascending.
/// Regions with fewer than two members are not reported.
pub fn find_dense_regions(
    graph: &CitationGraph,
    weighting: &VertexWeighting,
    params: DenseParams,
) -> Result<Vec<DenseRegion>> {
    if !(0.0..1.0).contains(&params.vwp) {
        return Err(Error::InvalidParameter(format!(
            "vwp {} outside [0, 1)",
            params.vwp
        )));
    }
    if weighting.nodes != graph.nodes() {
        return Err(Error::Inconsistent("weights were not computed for this graph".into()));
    }
    let adj = graph.undirected_adjacency();
    let weights = weighting.weights();
    let mut seeds: Vec<usize> = (0..graph.node_count()).collect();
    seeds.sort_by(|&a, &b| {
        weights[b]
            .total_cmp(&weights[a])
            .then_with(|| graph.node_id(a).cmp(graph.node_id(b)))
    });

    let mut visited = vec![false; graph.node_count()];
    let mut regions = Vec::new();
    for seed in seeds {
        if visited[seed] {
            continue;
        }
        let mut members = grow_region(&adj, weights, seed, params.vwp, &visited);
        for &m in &members {
            visited[m] = true;
        }
        if params.haircut {
            haircut(&adj, &mut members);
        }
        if members.len() < 2 {
            continue;
        }
        let n = members.len();
        let density = internal_edges(&adj, &members) as f64 / (n * (n - 1) / 2) as f64;
        let score = members.iter().map(|&m| weights[m]).sum::<f64>() / n as f64;
        let mut ids: Vec<String> = members.iter().map(|&m| graph.node_id(m).to_string()).collect();
        ids.sort();
        regions.push(DenseRegion {
            members: ids,
            seed: graph.node_id(seed).to_string(),
            score,
            density,
        });
    }
    regions.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.members[0].cmp(&b.members[0]))
    });
    Ok(regions)
}

/// Patent families per assignee among a region's members, count descending
/// then name. A family with several assignees counts for each.
pub fn leading_assignees(corpus: &Corpus, region: &DenseRegion) -> Result<Vec<(String, usize)>> {
    if corpus.kind() != DocumentKind::PatentFamily {
        return Err(Error::WrongCorpusKind {
            expected: DocumentKind::PatentFamily.to_string(),
            found: corpus.kind().to_string(),
        });
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for id in &region.members {
        let doc = corpus
            .get(id)
            .ok_or_else(|| Error::UnknownNode(id.clone()))?;
        let names: BTreeSet<&str> = doc
            .assignees
            .iter()
            .map(String::as_str)
            .filter(|a| !a.is_empty())
            .collect();
        if names.is_empty() {
            *counts.entry(UNKNOWN_ASSIGNEE.to_string()).or_default() += 1;
        }
        for a in names {
            *counts.entry(a.to_string()).or_default() += 1;
        }
    }
    let mut out: Vec<(String, usize)> = counts.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}
