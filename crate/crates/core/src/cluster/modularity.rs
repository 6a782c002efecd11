use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::netbuild::CitationGraph;

/// Modularity held as an exact fraction `num / (4 m^2)`.
///
/// With `L_c` undirected edges inside cluster `c` and `D_c` the degree sum
/// of its members, `Q = sum_c (L_c/m - (D_c/2m)^2)`, so
/// `4 m^2 Q = sum_c (4 m L_c - D_c^2)` is an integer. Comparisons are exact
/// and the sum is independent of cluster order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ExactQ {
    pub num: i128,
    pub m: i128,
}

impl ExactQ {
    pub fn value(self) -> f64 {
        if self.m == 0 {
            0.0
        } else {
            self.num as f64 / (4 * self.m * self.m) as f64
        }
    }
}

/// Exact modularity of an index-aligned labeling over the undirected
/// simple view of `edges`.
pub(crate) fn exact_modularity(
    node_count: usize,
    undirected_edges: &[(usize, usize)],
    labels: &[usize],
) -> ExactQ {
    debug_assert_eq!(labels.len(), node_count);
    let m = undirected_edges.len() as i128;
    let mut inner: HashMap<usize, i128> = HashMap::new();
    let mut degree: HashMap<usize, i128> = HashMap::new();
    for &(a, b) in undirected_edges {
        let (la, lb) = (labels[a], labels[b]);
        *degree.entry(la).or_default() += 1;
        *degree.entry(lb).or_default() += 1;
        if la == lb {
            *inner.entry(la).or_default() += 1;
        }
    }
    let num = degree
        .iter()
        .map(|(c, &d)| 4 * m * inner.get(c).copied().unwrap_or(0) - d * d)
        .sum();
    ExactQ { num, m }
}

/// Newman modularity of a node labeling.
///
/// The graph is read as undirected: each citation is one edge and a mutual
/// citation pair still counts once. `labels[i]` is the cluster of node `i`;
/// labels need not be contiguous. A graph without edges has `Q = 0`.
pub fn modularity(graph: &CitationGraph, labels: &[usize]) -> Result<f64> {
    if labels.len() < graph.node_count() {
        return Err(Error::UncoveredNode(
            graph.node_id(labels.len()).to_string(),
        ));
    }
    if labels.len() > graph.node_count() {
        return Err(Error::Inconsistent(format!(
            "{} labels for {} nodes",
            labels.len(),
            graph.node_count()
        )));
    }
    Ok(exact_modularity(graph.node_count(), &graph.undirected_edges(), labels).value())
}

/// [`modularity`] with the assignment keyed by node id.
pub fn modularity_by_id(graph: &CitationGraph, assignment: &BTreeMap<String, usize>) -> Result<f64> {
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
    modularity(graph, &labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DocumentKind;

    fn graph(n: usize, edges: &[(usize, usize)]) -> CitationGraph {
        let nodes = (0..n).map(|i| format!("n{i}")).collect();
        CitationGraph::from_indices(DocumentKind::Paper, nodes, edges.to_vec()).unwrap()
    }

    #[test]
    fn one_cluster_is_zero() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        assert_eq!(modularity(&g, &[7, 7, 7, 7]).unwrap(), 0.0);
    }

    #[test]
    fn two_triangles() {
        let g = graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_eq!(modularity(&g, &[0, 0, 0, 1, 1, 1]).unwrap(), 0.5);
    }

    #[test]
    fn mutual_citation_counts_once() {
        let single = graph(3, &[(0, 1), (1, 2)]);
        let mutual = graph(3, &[(0, 1), (1, 0), (1, 2)]);
        let labels = [0, 0, 1];
        assert_eq!(
            modularity(&single, &labels).unwrap(),
            modularity(&mutual, &labels).unwrap()
        );
    }

    #[test]
    fn no_edges_is_zero() {
        let g = graph(3, &[]);
        assert_eq!(modularity(&g, &[0, 1, 2]).unwrap(), 0.0);
    }

    #[test]
    fn uncovered_node_reported() {
        let g = graph(3, &[(0, 1)]);
        assert!(matches!(modularity(&g, &[0, 0]), Err(Error::UncoveredNode(id)) if id == "n2"));
        let mut by_id = BTreeMap::new();
        by_id.insert("n0".to_string(), 0);
        assert!(matches!(modularity_by_id(&g, &by_id), Err(Error::UncoveredNode(_))));
    }
}
