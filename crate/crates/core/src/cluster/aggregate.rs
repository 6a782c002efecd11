use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::partition::Partition;
use crate::error::{Error, Result};
use crate::netbuild::CitationGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterNode {
    pub index: usize,
    pub size: usize,
    /// Citations whose source and target both lie in this cluster.
    pub intra_citations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterEdge {
    pub from: usize,
    pub to: usize,
    pub weight: usize,
}

/// Clusters as nodes, citations between clusters summed into directed edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterGraph {
    pub clusters: Vec<ClusterNode>,
    pub edges: Vec<ClusterEdge>,
    pub threshold_applied: usize,
}

impl ClusterGraph {
    pub fn inter_weight(&self) -> usize {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn intra_weight(&self) -> usize {
        self.clusters.iter().map(|c| c.intra_citations).sum()
    }
}

/// Sums citations between clusters, dropping cluster edges lighter than
/// `threshold`. A threshold of 0 keeps every edge.
pub fn aggregate_clusters(
    graph: &CitationGraph,
    partition: &Partition,
    threshold: usize,
) -> Result<ClusterGraph> {
    if !partition.covers(graph) {
        return Err(Error::Inconsistent(
            "partition was not computed over this graph".into(),
        ));
    }
    let labels = partition.labels();
    let mut clusters: Vec<ClusterNode> = partition
        .sizes()
        .iter()
        .enumerate()
        .map(|(index, &size)| ClusterNode {
            index,
            size,
            intra_citations: 0,
        })
        .collect();
    let mut weights: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(src, dst) in graph.edges() {
        let (a, b) = (labels[src], labels[dst]);
        if a == b {
            clusters[a].intra_citations += 1;
        } else {
            *weights.entry((a, b)).or_default() += 1;
        }
    }
    let edges = weights
        .into_iter()
        .filter(|&(_, w)| w >= threshold)
        .map(|((from, to), weight)| ClusterEdge { from, to, weight })
        .collect();
    Ok(ClusterGraph {
        clusters,
        edges,
        threshold_applied: threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DocumentKind;

    /// Two clusters {0,1} and {2,3} with `cross` citations from the first
    /// to the second, built on a bipartite set of distinct node pairs.
    fn two_clusters(cross: usize) -> (CitationGraph, Partition) {
        let left = 6;
        let right = 6;
        let n = left + right;
        let nodes: Vec<String> = (0..n).map(|i| format!("n{i:02}")).collect();
        let mut edges = vec![];
        'outer: for a in 0..left {
            for b in left..n {
                if edges.len() == cross {
                    break 'outer;
                }
                edges.push((a, b));
            }
        }
        let g = CitationGraph::from_indices(DocumentKind::Paper, nodes, edges).unwrap();
        let labels: Vec<usize> = (0..n).map(|i| usize::from(i >= left)).collect();
        let p = Partition::from_labels(&g, &labels).unwrap();
        (g, p)
    }

    #[test]
    fn weight_below_threshold_dropped() {
        let (g, p) = two_clusters(29);
        let cg = aggregate_clusters(&g, &p, 30).unwrap();
        assert!(cg.edges.is_empty());
        let cg = aggregate_clusters(&g, &p, 0).unwrap();
        assert_eq!(cg.edges.len(), 1);
        assert_eq!(cg.edges[0].weight, 29);
    }

    #[test]
    fn conservation_at_zero_threshold() {
        let nodes: Vec<String> = (0..5).map(|i| format!("n{i}")).collect();
        let g = CitationGraph::from_indices(
            DocumentKind::Paper,
            nodes,
            vec![(0, 1), (1, 0), (2, 0), (3, 4), (4, 2), (1, 3)],
        )
        .unwrap();
        let p = Partition::from_labels(&g, &[0, 0, 0, 1, 1]).unwrap();
        let cg = aggregate_clusters(&g, &p, 0).unwrap();
        assert_eq!(cg.inter_weight() + cg.intra_weight(), g.edge_count());
        assert_eq!(cg.clusters[0].intra_citations, 3);
        assert_eq!(cg.clusters[1].intra_citations, 1);
    }

    #[test]
    fn foreign_partition_rejected() {
        let (g, p) = two_clusters(3);
        let (g2, _) = two_clusters(4);
        assert!(aggregate_clusters(&g, &p, 0).is_ok());
        // Same nodes, different edges: still covers.
        assert!(aggregate_clusters(&g2, &p, 0).is_ok());
        let other = CitationGraph::from_indices(DocumentKind::Paper, vec!["x".into()], vec![]).unwrap();
        assert!(aggregate_clusters(&other, &p, 0).is_err());
    }
}
