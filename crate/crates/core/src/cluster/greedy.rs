use std::collections::BTreeMap;

use super::modularity::ExactQ;
use super::partition::Partition;
use crate::error::{Error, Result};
use crate::netbuild::CitationGraph;

struct Community {
    /// Rank of the smallest member id in lexicographic id order.
    rep: usize,
    degree: i128,
    /// Neighbor community → undirected edges between the two.
    links: BTreeMap<usize, i128>,
}

/// Agglomerative modularity maximization (fast greedy).
///
/// Starts from singletons and repeatedly merges the connected pair with the
/// largest modularity gain until no connected pairs remain. Gains are exact
/// integers, and ties go to the pair whose (smaller, larger) representative
/// ids are lexicographically smallest, a representative being a cluster's
/// smallest member id. The returned partition is the one with the highest
/// modularity along the merge sequence; among equal maxima the later, coarser
/// one wins. Isolated nodes are never merged.
pub fn greedy_modularity_clustering(graph: &CitationGraph) -> Result<Partition> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let edges = graph.undirected_edges();
    let m = edges.len() as i128;

    let mut by_id: Vec<usize> = (0..n).collect();
    by_id.sort_by(|&a, &b| graph.node_id(a).cmp(graph.node_id(b)));
    let mut rank = vec![0usize; n];
    for (r, &i) in by_id.iter().enumerate() {
        rank[i] = r;
    }

    let mut live: Vec<Option<Community>> = (0..n)
        .map(|i| {
            Some(Community {
                rep: rank[i],
                degree: 0,
                links: BTreeMap::new(),
            })
        })
        .collect();
    for &(a, b) in &edges {
        for (x, y) in [(a, b), (b, a)] {
            let c = live[x].as_mut().expect("fresh community");
            c.degree += 1;
            *c.links.entry(y).or_default() += 1;
        }
    }

    // Singletons: no internal edges, so num = -sum D_i^2.
    let mut num: i128 = -live
        .iter()
        .flatten()
        .map(|c| c.degree * c.degree)
        .sum::<i128>();
    let mut best = (num, 0usize);
    let mut merges: Vec<(usize, usize)> = Vec::new();

    loop {
        let mut choice: Option<(i128, (usize, usize), usize, usize)> = None;
        for (a, ca) in live.iter().enumerate() {
            let Some(ca) = ca else { continue };
            for (&b, &l_ab) in ca.links.range(a + 1..) {
                let cb = live[b].as_ref().expect("linked community is live");
                let gain = 4 * m * l_ab - 2 * ca.degree * cb.degree;
                let key = (ca.rep.min(cb.rep), ca.rep.max(cb.rep));
                let better = match &choice {
                    None => true,
                    Some((g, k, _, _)) => gain > *g || (gain == *g && key < *k),
                };
                if better {
                    choice = Some((gain, key, a, b));
                }
            }
        }
        let Some((gain, _, a, b)) = choice else { break };

        let absorbed = live[b].take().expect("live");
        let mut keep = live[a].take().expect("live");
        keep.degree += absorbed.degree;
        keep.rep = keep.rep.min(absorbed.rep);
        keep.links.remove(&b);
        for (c, l) in absorbed.links {
            if c == a {
                continue;
            }
            *keep.links.entry(c).or_default() += l;
            let other = live[c].as_mut().expect("neighbor is live");
            other.links.remove(&b);
            *other.links.entry(a).or_default() += l;
        }
        live[a] = Some(keep);

        num += gain;
        merges.push((a, b));
        if num >= best.0 {
            best = (num, merges.len());
        }
    }

    debug_assert!(ExactQ { num: best.0, m }.value() >= -0.5);
    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in &merges[..best.1] {
        parent[b] = a;
    }
    let labels: Vec<usize> = (0..n).map(|i| find(&parent, i)).collect();
    Partition::from_labels(graph, &labels)
}

fn find(parent: &[usize], mut i: usize) -> usize {
    while parent[i] != i {
        i = parent[i];
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DocumentKind;

    fn graph(n: usize, edges: &[(usize, usize)]) -> CitationGraph {
        let nodes = (0..n).map(|i| format!("n{i:02}")).collect();
        CitationGraph::from_indices(DocumentKind::Paper, nodes, edges.to_vec()).unwrap()
    }

    fn clique_edges(offset: usize, k: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                out.push((offset + j, offset + i));
            }
        }
        out
    }

    #[test]
    fn three_disjoint_four_cliques() {
        let mut edges = clique_edges(0, 4);
        edges.extend(clique_edges(4, 4));
        edges.extend(clique_edges(8, 4));
        let p = greedy_modularity_clustering(&graph(12, &edges)).unwrap();
        assert_eq!(p.cluster_count(), 3);
        assert_eq!(p.labels(), &[0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2]);
        assert!((p.q() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_clique_stays_whole() {
        let p = greedy_modularity_clustering(&graph(5, &clique_edges(0, 5))).unwrap();
        assert_eq!(p.cluster_count(), 1);
        assert_eq!(p.q(), 0.0);
    }

    #[test]
    fn isolates_remain_singletons() {
        let mut edges = clique_edges(0, 3);
        edges.extend(clique_edges(3, 3));
        let p = greedy_modularity_clustering(&graph(8, &edges)).unwrap();
        assert_eq!(p.cluster_count(), 4);
        assert_eq!(p.sizes(), &[3, 3, 1, 1]);
    }

    #[test]
    fn single_node() {
        let p = greedy_modularity_clustering(&graph(1, &[])).unwrap();
        assert_eq!(p.cluster_count(), 1);
        assert_eq!(p.q(), 0.0);
    }

    #[test]
    fn empty_graph_rejected() {
        assert!(matches!(greedy_modularity_clustering(&graph(0, &[])), Err(Error::EmptyGraph)));
    }
}
