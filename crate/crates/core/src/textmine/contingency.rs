use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::tokenize::{most_frequent, TokenizedDocument};
use crate::cluster::Partition;
use crate::error::{Error, Result};

/// Default minimum network-wide document frequency for a word column.
pub const DEFAULT_MIN_DOC_FREQ: usize = 2;

/// Cluster × word table of document counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContingencyTable {
    row_labels: Vec<String>,
    /// Documents per row (cluster size).
    row_sizes: Vec<usize>,
    columns: Vec<String>,
    display: Vec<String>,
    /// Documents per column across all rows.
    column_docs: Vec<usize>,
    /// Row-major, `rows × columns`.
    counts: Vec<usize>,
}

impl ContingencyTable {
    /// Validates a table given row-major `counts`. All-zero columns are
    /// pruned. Column document counts default to column totals.
    pub fn new(
        row_labels: Vec<String>,
        row_sizes: Vec<usize>,
        columns: Vec<String>,
        counts: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let rows = row_labels.len();
        if row_sizes.len() != rows || counts.len() != rows {
            return Err(Error::Inconsistent("row count mismatch".into()));
        }
        let cols = columns.len();
        for (r, row) in counts.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Inconsistent(format!("row {r} has {} cells", row.len())));
            }
            if let Some(c) = row.iter().position(|&v| v > row_sizes[r]) {
                return Err(Error::Inconsistent(format!(
                    "cell ({}, {}) exceeds row size {}",
                    row_labels[r], columns[c], row_sizes[r]
                )));
            }
        }
        let keep: Vec<usize> = (0..cols)
            .filter(|&c| counts.iter().any(|row| row[c] > 0))
            .collect();
        let columns: Vec<String> = keep.iter().map(|&c| columns[c].clone()).collect();
        let flat: Vec<usize> = counts
            .iter()
            .flat_map(|row| keep.iter().map(move |&c| row[c]))
            .collect();
        let column_docs = keep
            .iter()
            .map(|&c| counts.iter().map(|row| row[c]).sum())
            .collect();
        Ok(ContingencyTable {
            row_labels,
            row_sizes,
            display: columns.clone(),
            columns,
            column_docs,
            counts: flat,
        })
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn row_sizes(&self) -> &[usize] {
        &self.row_sizes
    }

    /// Normalized word of each column, ascending.
    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    /// Surface form shown for each column.
    pub fn display_forms(&self) -> &[String] {
        &self.display
    }

    pub fn column_docs(&self) -> &[usize] {
        &self.column_docs
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.counts[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[usize] {
        let w = self.cols();
        &self.counts[row * w..(row + 1) * w]
    }

    pub fn row_total(&self, row: usize) -> usize {
        self.row(row).iter().sum()
    }

    pub fn column_total(&self, col: usize) -> usize {
        (0..self.rows()).map(|r| self.get(r, col)).sum()
    }

    pub fn grand_total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Restricts the table to the given rows, pruning emptied columns.
    pub fn select_rows(&self, keep: &[usize]) -> Result<Self> {
        let counts = keep.iter().map(|&r| self.row(r).to_vec()).collect();
        let mut t = ContingencyTable::new(
            keep.iter().map(|&r| self.row_labels[r].clone()).collect(),
            keep.iter().map(|&r| self.row_sizes[r]).collect(),
            self.columns.clone(),
            counts,
        )?;
        let display: HashMap<&str, &str> = self
            .columns
            .iter()
            .zip(&self.display)
            .map(|(c, d)| (c.as_str(), d.as_str()))
            .collect();
        t.display = t.columns.iter().map(|c| display[c.as_str()].to_string()).collect();
        Ok(t)
    }
}

/// Builds the cluster × word document-count table for the partition's
/// nodes. Words present in fewer than `min_doc_freq` network documents are
/// dropped. Nodes without a tokenized document count as empty documents.
pub fn build_contingency(
    docs: &[TokenizedDocument],
    partition: &Partition,
    min_doc_freq: usize,
) -> Result<ContingencyTable> {
    let by_id: HashMap<&str, &TokenizedDocument> =
        docs.iter().map(|d| (d.doc_id.as_str(), d)).collect();
    let k = partition.cluster_count();
    let mut cells: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    let mut surfaces: BTreeMap<&str, BTreeMap<&str, usize>> = BTreeMap::new();
    for (node, &c) in partition.nodes().iter().zip(partition.labels()) {
        let Some(doc) = by_id.get(node.as_str()) else {
            continue;
        };
        for w in &doc.tokens {
            cells.entry(w.as_str()).or_insert_with(|| vec![0; k])[c] += 1;
            if let Some(form) = doc.display_forms.get(w) {
                *surfaces.entry(w.as_str()).or_default().entry(form.as_str()).or_default() += 1;
            }
        }
    }
    cells.retain(|_, col| col.iter().sum::<usize>() >= min_doc_freq.max(1));
    let columns: Vec<String> = cells.keys().map(|w| w.to_string()).collect();
    let counts: Vec<Vec<usize>> = (0..k)
        .map(|c| cells.values().map(|col| col[c]).collect())
        .collect();
    let mut table = ContingencyTable::new(
        (0..k).map(|c| c.to_string()).collect(),
        partition.sizes().to_vec(),
        columns,
        counts,
    )?;
    table.display = table
        .columns
        .iter()
        .map(|w| {
            surfaces
                .get(w.as_str())
                .map_or_else(|| w.clone(), |f| most_frequent(f).to_string())
        })
        .collect();
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinctiveWord {
    pub word: String,
    pub display: String,
    pub jaccard: f64,
}

/// Words most specific to one cluster by Jaccard index between the word's
/// document set and the cluster's document set. Ties go to the word in
/// ascending order; words absent from the cluster are never listed.
pub fn distinctive_words(
    table: &ContingencyTable,
    cluster: usize,
    top_n: usize,
) -> Result<Vec<DistinctiveWord>> {
    if cluster >= table.rows() {
        return Err(Error::UnknownCluster(cluster));
    }
    let size = table.row_sizes()[cluster];
    let mut scored: Vec<DistinctiveWord> = (0..table.cols())
        .filter_map(|w| {
            let both = table.get(cluster, w);
            if both == 0 {
                return None;
            }
            let union = table.column_docs()[w] + size - both;
            Some(DistinctiveWord {
                word: table.columns()[w].clone(),
                display: table.display_forms()[w].clone(),
                jaccard: both as f64 / union as f64,
            })
        })
        .collect();
    scored.sort_by(|a, b| {
        b.jaccard
            .total_cmp(&a.jaccard)
            .then_with(|| a.word.cmp(&b.word))
    });
    scored.truncate(top_n);
    Ok(scored)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DocumentKind;
    use crate::netbuild::CitationGraph;
    use std::collections::BTreeSet;

    fn tdoc(id: &str, words: &[&str]) -> TokenizedDocument {
        TokenizedDocument {
            doc_id: id.into(),
            tokens: words.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>(),
            display_forms: words.iter().map(|s| (s.to_string(), s.to_uppercase())).collect(),
        }
    }

    fn partition(labels: &[usize]) -> Partition {
        let nodes: Vec<String> = (0..labels.len()).map(|i| format!("d{i}")).collect();
        let g = CitationGraph::from_indices(DocumentKind::Paper, nodes, vec![]).unwrap();
        Partition::from_labels(&g, labels).unwrap()
    }

    #[test]
    fn half_jaccard_case() {
        // Cluster 0 = d0..d2 (3 docs), "w" in d0, d1 and outside in d3.
        let docs = vec![
            tdoc("d0", &["w"]),
            tdoc("d1", &["w"]),
            tdoc("d2", &[]),
            tdoc("d3", &["w"]),
            tdoc("d4", &[]),
        ];
        let p = partition(&[0, 0, 0, 1, 1]);
        let t = build_contingency(&docs, &p, 1).unwrap();
        let top = distinctive_words(&t, 0, 10).unwrap();
        assert_eq!(top[0].word, "w");
        assert_eq!(top[0].jaccard, 0.5);
        assert_eq!(top[0].display, "W");
    }

    #[test]
    fn perfect_marker_and_absent_word() {
        let docs = vec![
            tdoc("d0", &["m", "x"]),
            tdoc("d1", &["m", "x"]),
            tdoc("d2", &["x"]),
            tdoc("d3", &["x"]),
        ];
        let p = partition(&[0, 0, 1, 1]);
        let t = build_contingency(&docs, &p, 1).unwrap();
        let c0 = distinctive_words(&t, 0, 10).unwrap();
        assert_eq!(c0[0].word, "m");
        assert_eq!(c0[0].jaccard, 1.0);
        let c1 = distinctive_words(&t, 1, 10).unwrap();
        assert!(c1.iter().all(|w| w.word != "m"));
    }

    #[test]
    fn min_doc_freq_prunes_singletons() {
        let docs = vec![tdoc("d0", &["a", "b"]), tdoc("d1", &["a"])];
        let p = partition(&[0, 1]);
        let t = build_contingency(&docs, &p, 2).unwrap();
        assert_eq!(t.columns(), &["a".to_string()]);
        assert_eq!(t.column_docs(), &[2]);
    }

    #[test]
    fn unknown_cluster() {
        let p = partition(&[0]);
        let t = build_contingency(&[tdoc("d0", &["a"])], &p, 1).unwrap();
        assert!(matches!(distinctive_words(&t, 3, 10), Err(Error::UnknownCluster(3))));
    }

    #[test]
    fn zero_columns_pruned_and_cells_bounded() {
        let t = ContingencyTable::new(
            vec!["r0".into(), "r1".into()],
            vec![2, 2],
            vec!["a".into(), "b".into()],
            vec![vec![1, 0], vec![2, 0]],
        )
        .unwrap();
        assert_eq!(t.cols(), 1);
        assert!(ContingencyTable::new(vec!["r".into()], vec![1], vec!["a".into()], vec![vec![2]]).is_err());
    }
}
