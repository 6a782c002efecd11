//! Modularity-based community detection and cluster-level aggregation.
//!
//! Clustering reads the citation graph as undirected; aggregation keeps the
//! citation direction.

mod aggregate;
mod exhaustive;
mod greedy;
mod modularity;
mod partition;

pub use aggregate::{aggregate_clusters, ClusterEdge, ClusterGraph, ClusterNode};
pub use exhaustive::{brute_force_best_partition, DEFAULT_EXHAUSTIVE_LIMIT};
pub use greedy::greedy_modularity_clustering;
pub use modularity::{modularity, modularity_by_id};
pub use partition::Partition;
