use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::modularity::exact_modularity;
use crate::error::{Error, Result};
use crate::netbuild::CitationGraph;

/// A hard clustering of a graph's nodes.
///
/// Cluster indices are contiguous from 0 and ordered by size descending,
/// ties by smallest member id, so cluster 0 is always the largest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    nodes: Vec<String>,
    labels: Vec<usize>,
    sizes: Vec<usize>,
    q: f64,
}

impl Partition {
    /// Canonicalizes an arbitrary index-aligned labeling of `graph` and
    /// scores it.
    pub fn from_labels(graph: &CitationGraph, labels: &[usize]) -> Result<Self> {
        if labels.len() != graph.node_count() {
            let missing = graph
                .nodes()
                .get(labels.len())
                .cloned()
                .unwrap_or_else(|| format!("{} labels for {} nodes", labels.len(), graph.node_count()));
            return Err(Error::UncoveredNode(missing));
        }
        let canonical = canonical_labels(graph.nodes(), labels);
        let mut sizes = vec![0usize; canonical.iter().max().map_or(0, |m| m + 1)];
        for &c in &canonical {
            sizes[c] += 1;
        }
        let q = exact_modularity(graph.node_count(), &graph.undirected_edges(), &canonical).value();
        Ok(Partition {
            nodes: graph.nodes().to_vec(),
            labels: canonical,
            sizes,
            q,
        })
    }

    /// Rebuilds a partition from an id-keyed assignment.
    pub fn from_assignment(graph: &CitationGraph, assignment: &BTreeMap<String, usize>) -> Result<Self> {
        let labels = graph
            .nodes()
            .iter()
            .map(|id| {
                assignment
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::UncoveredNode(id.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::from_labels(graph, &labels)
    }

    /// Modularity of this partition.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Cluster of each node, aligned with the graph's node order.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn cluster_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn cluster_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == id).map(|i| self.labels[i])
    }

    /// Node positions in cluster `c`, ascending.
    pub fn members(&self, c: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == c)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn member_ids(&self, c: usize) -> Vec<String> {
        self.members(c)
            .into_iter()
            .map(|i| self.nodes[i].clone())
            .collect()
    }

    pub fn assignment(&self) -> BTreeMap<String, usize> {
        self.nodes
            .iter()
            .cloned()
            .zip(self.labels.iter().copied())
            .collect()
    }

    /// True when this partition was computed over exactly `graph`'s nodes.
    pub fn covers(&self, graph: &CitationGraph) -> bool {
        self.nodes == graph.nodes()
    }
}

/// Renumbers clusters by size descending, then smallest member id.
fn canonical_labels(nodes: &[String], labels: &[usize]) -> Vec<usize> {
    let mut groups: HashMap<usize, (usize, &str)> = HashMap::new();
    for (id, &l) in nodes.iter().zip(labels) {
        let entry = groups.entry(l).or_insert((0, id.as_str()));
        entry.0 += 1;
        if id.as_str() < entry.1 {
            entry.1 = id.as_str();
        }
    }
    let mut order: Vec<(usize, usize, &str)> =
        groups.into_iter().map(|(l, (size, min))| (l, size, min)).collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.2.cmp(b.2)));
    let renumber: HashMap<usize, usize> = order
        .iter()
        .enumerate()
        .map(|(new, &(old, _, _))| (old, new))
        .collect();
    labels.iter().map(|l| renumber[l]).collect()
}
