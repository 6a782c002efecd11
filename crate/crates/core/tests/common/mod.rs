//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use frontmap::cluster::Partition;
use frontmap::netbuild::CitationGraph;
use frontmap::textmine::{ContingencyTable, TokenizedDocument};
use frontmap::DocumentKind;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graph(n: usize, edges: Vec<(usize, usize)>) -> CitationGraph {
    CitationGraph::from_indices(DocumentKind::Paper, (0..n).map(|i| format!("n{i}")).collect(), edges).unwrap()
}

/// Erdős–Rényi style directed graph without self loops.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> CitationGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < p {
                edges.push(if rng.random::<bool>() { (a, b) } else { (b, a) });
            }
        }
    }
    graph(n, edges)
}

/// Disjoint cliques of the given sizes laid out consecutively.
pub fn disjoint_cliques(sizes: &[usize]) -> CitationGraph {
    let mut edges = Vec::new();
    let mut base = 0;
    for &s in sizes {
        for a in 0..s {
            for b in a + 1..s {
                edges.push((base + a, base + b));
            }
        }
        base += s;
    }
    graph(base, edges)
}

/// Fraction of nodes on which two labelings agree under the best
/// one-to-one matching of their labels (exhaustive over permutations).
pub fn best_matching_agreement(a: &[usize], b: &[usize]) -> f64 {
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let k = ka.max(kb);
    let mut overlap = vec![vec![0usize; k]; k];
    for (&x, &y) in a.iter().zip(b) {
        overlap[x][y] += 1;
    }
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = 0;
    permute(&mut perm, 0, &overlap, &mut best);
    best as f64 / a.len() as f64
}

fn permute(perm: &mut Vec<usize>, i: usize, overlap: &[Vec<usize>], best: &mut usize) {
    if i == perm.len() {
        let s = perm.iter().enumerate().map(|(x, &y)| overlap[x][y]).sum();
        *best = (*best).max(s);
        return;
    }
    for j in i..perm.len() {
        perm.swap(i, j);
        permute(perm, i + 1, overlap, best);
        perm.swap(i, j);
    }
}

/// Random tokenized documents over a small alphabet, with a random
/// partition of them.
pub fn random_documents(rng: &mut ChaCha8Rng, n_docs: usize, n_words: usize, k: usize) -> (Vec<TokenizedDocument>, Partition) {
    let docs: Vec<TokenizedDocument> = (0..n_docs)
        .map(|d| {
            let tokens: BTreeSet<String> = (0..n_words)
                .filter(|_| rng.random::<f64>() < 0.3)
                .map(|w| format!("w{w:02}"))
                .collect();
            TokenizedDocument {
                doc_id: format!("n{d}"),
                display_forms: tokens.iter().map(|t| (t.clone(), t.to_uppercase())).collect(),
                tokens,
            }
        })
        .collect();
    let labels: Vec<usize> = (0..n_docs).map(|_| rng.random_range(0..k)).collect();
    let partition = Partition::from_labels(&graph(n_docs, vec![]), &labels).unwrap();
    (docs, partition)
}

/// Distinctive words by explicit set algebra: (word, jaccard), best first.
pub fn jaccard_oracle(
    docs: &[TokenizedDocument],
    partition: &Partition,
    cluster: usize,
    min_doc_freq: usize,
    top_n: usize,
) -> Vec<(String, f64)> {
    let in_cluster: BTreeSet<&str> = partition
        .nodes()
        .iter()
        .zip(partition.labels())
        .filter(|(_, &l)| l == cluster)
        .map(|(id, _)| id.as_str())
        .collect();
    let mut word_docs: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for d in docs {
        for w in &d.tokens {
            word_docs.entry(w).or_default().insert(d.doc_id.as_str());
        }
    }
    let mut scored: Vec<(String, f64)> = word_docs
        .into_iter()
        .filter(|(_, ds)| ds.len() >= min_doc_freq)
        .filter_map(|(w, ds)| {
            let inter = ds.intersection(&in_cluster).count();
            let union = ds.union(&in_cluster).count();
            (inter > 0).then(|| (w.to_string(), inter as f64 / union as f64))
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.truncate(top_n);
    scored
}

/// Random table with every row and column total positive.
pub fn random_table(rng: &mut ChaCha8Rng) -> ContingencyTable {
    let rows = rng.random_range(2..7usize);
    let cols = rng.random_range(2..9usize);
    let sizes: Vec<usize> = (0..rows).map(|_| rng.random_range(5..40usize)).collect();
    let counts: Vec<Vec<usize>> = sizes
        .iter()
        .map(|&s| (0..cols).map(|_| rng.random_range(1..=s)).collect())
        .collect();
    table(sizes, counts)
}

/// Outer-product table `a_i * b_j`, so rows and columns are independent.
pub fn rank_one_table(rng: &mut ChaCha8Rng) -> ContingencyTable {
    let rows = rng.random_range(2..6usize);
    let cols = rng.random_range(2..7usize);
    let a: Vec<usize> = (0..rows).map(|_| rng.random_range(1..6usize)).collect();
    let b: Vec<usize> = (0..cols).map(|_| rng.random_range(1..6usize)).collect();
    let counts: Vec<Vec<usize>> = a.iter().map(|x| b.iter().map(|y| x * y).collect()).collect();
    let sizes = counts.iter().map(|r| *r.iter().max().unwrap()).collect();
    table(sizes, counts)
}

pub fn table(sizes: Vec<usize>, counts: Vec<Vec<usize>>) -> ContingencyTable {
    let rows = sizes.len();
    let cols = counts[0].len();
    ContingencyTable::new(
        (0..rows).map(|r| r.to_string()).collect(),
        sizes,
        (0..cols).map(|c| format!("w{c}")).collect(),
        counts,
    )
    .unwrap()
}

/// Pearson chi-square statistic of a table.
pub fn chi_square(t: &ContingencyTable) -> f64 {
    let n = t.grand_total() as f64;
    let mut chi = 0.0;
    for r in 0..t.rows() {
        for c in 0..t.cols() {
            let e = t.row_total(r) as f64 * t.column_total(c) as f64 / n;
            let o = t.get(r, c) as f64;
            chi += (o - e) * (o - e) / e;
        }
    }
    chi
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues descending and matching eigenvectors (as columns of
/// the returned rows-by-k matrix, one `Vec` per eigenvector).
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[y][y].total_cmp(&a[x][x]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order.iter().map(|&i| (0..n).map(|r| v[r][i]).collect()).collect();
    (values, vectors)
}

/// Row principal coordinates by eigen-decomposition of `S Sᵀ`, where `S` is
/// the standardized residual matrix. Returns (singular values, coordinates
/// per dimension).
pub fn ca_row_oracle(t: &ContingencyTable) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = t.grand_total() as f64;
    let r: Vec<f64> = (0..t.rows()).map(|i| t.row_total(i) as f64 / n).collect();
    let c: Vec<f64> = (0..t.cols()).map(|j| t.column_total(j) as f64 / n).collect();
    let s: Vec<Vec<f64>> = (0..t.rows())
        .map(|i| {
            (0..t.cols())
                .map(|j| (t.get(i, j) as f64 / n - r[i] * c[j]) / (r[i] * c[j]).sqrt())
                .collect()
        })
        .collect();
    let sst: Vec<Vec<f64>> = (0..t.rows())
        .map(|i| (0..t.rows()).map(|k| (0..t.cols()).map(|j| s[i][j] * s[k][j]).sum()).collect())
        .collect();
    let (values, vectors) = jacobi_eigen(sst);
    let sigma: Vec<f64> = values.iter().map(|v| v.max(0.0).sqrt()).collect();
    let coords = vectors
        .iter()
        .zip(&sigma)
        .map(|(u, s)| u.iter().zip(&r).map(|(x, ri)| x * s / ri.sqrt()).collect())
        .collect();
    (sigma, coords)
}
