use super::modularity::exact_modularity;
use super::partition::Partition;
use crate::error::{Error, Result};
use crate::netbuild::CitationGraph;

/// Default node limit for [`brute_force_best_partition`]; Bell(10) = 115,975
/// candidate partitions.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 10;

/// Maximum-modularity partition by enumerating every set partition.
///
/// Ties go to fewer clusters, then to the lexicographically smallest
/// restricted-growth labeling in node order. Intended as a reference for
/// small graphs.
pub fn brute_force_best_partition(graph: &CitationGraph, max_nodes: usize) -> Result<Partition> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > max_nodes {
        return Err(Error::GraphTooLarge {
            nodes: n,
            max: max_nodes,
        });
    }
    let edges = graph.undirected_edges();

    // Restricted growth strings: labels[0] = 0, labels[i] <= 1 + max(labels[..i]).
    let mut labels = vec![0usize; n];
    let mut best_labels = labels.clone();
    let mut best = (exact_modularity(n, &edges, &labels).num, 1usize);
    loop {
        // Advance to the next restricted growth string in lexicographic order.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Partition::from_labels(graph, &best_labels);
            }
            let ceiling = labels[..i].iter().max().copied().unwrap_or(0) + 1;
            if labels[i] < ceiling {
                labels[i] += 1;
                for l in &mut labels[i + 1..] {
                    *l = 0;
                }
                break;
            }
            i -= 1;
        }
        let num = exact_modularity(n, &edges, &labels).num;
        let clusters = labels.iter().max().copied().unwrap_or(0) + 1;
        if num > best.0 || (num == best.0 && clusters < best.1) {
            best = (num, clusters);
            best_labels.copy_from_slice(&labels);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DocumentKind;

    fn graph(n: usize, edges: &[(usize, usize)]) -> CitationGraph {
        let nodes = (0..n).map(|i| format!("{}", (b'a' + i as u8) as char)).collect();
        CitationGraph::from_indices(DocumentKind::Paper, nodes, edges.to_vec()).unwrap()
    }

    #[test]
    fn path_of_four() {
        let p = brute_force_best_partition(&graph(4, &[(0, 1), (1, 2), (2, 3)]), 10).unwrap();
        assert_eq!(p.labels(), &[0, 0, 1, 1]);
        assert!((p.q() - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn single_node() {
        let p = brute_force_best_partition(&graph(1, &[]), 10).unwrap();
        assert_eq!(p.cluster_count(), 1);
        assert_eq!(p.q(), 0.0);
    }

    #[test]
    fn too_large_rejected() {
        assert!(matches!(
            brute_force_best_partition(&graph(11, &[]), 10),
            Err(Error::GraphTooLarge { nodes: 11, max: 10 })
        ));
    }

    #[test]
    fn edgeless_prefers_one_cluster() {
        let p = brute_force_best_partition(&graph(3, &[]), 10).unwrap();
        assert_eq!(p.cluster_count(), 1);
    }
}
