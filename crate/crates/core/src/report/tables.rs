//! CSV rendering and parsing for run outputs.

use std::collections::{BTreeMap, BTreeSet};

use crate::annotate::{ClusterTermTable, DocumentAnnotation};
use crate::cluster::ClusterGraph;
use crate::dense::DenseRegion;
use crate::error::{Error, Result};
use crate::textmine::{CaResult, ContingencyTable, DistinctiveWord, TokenizedDocument};

pub(crate) fn render<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        let row: Vec<String> = row.into_iter().collect();
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Parses CSV text whose header must equal `header`.
pub(crate) fn parse(text: &str, header: &[&str], what: &str) -> Result<Vec<Vec<String>>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let found = r
        .headers()
        .map_err(|e| Error::Csv(format!("{what}: {e}")))?
        .clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Csv(format!(
            "{what}: expected header {}, found {}",
            header.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.records()
        .map(|rec| {
            rec.map(|rec| rec.iter().map(str::to_string).collect())
                .map_err(|e| Error::Csv(format!("{what}: {e}")))
        })
        .collect()
}

fn field<T: std::str::FromStr>(row: &[String], i: usize, what: &str) -> Result<T> {
    row.get(i)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Csv(format!("{what}: bad field {i} in {row:?}")))
}

pub const SELECTION_HEADER: [&str; 3] = ["rank", "doc_id", "times_cited_global"];
pub const ANNOTATION_HEADER: [&str; 4] = ["doc_id", "term_id", "label", "is_clinical"];
pub const RATES_HEADER: [&str; 4] = ["doc_id", "n_terms", "n_clinical", "rate"];
pub const TOKENS_HEADER: [&str; 3] = ["doc_id", "word", "display"];

pub fn selection_csv(ids: &[String], cites: impl Fn(&str) -> u64) -> String {
    render(
        &SELECTION_HEADER,
        ids.iter()
            .enumerate()
            .map(|(i, id)| vec![(i + 1).to_string(), id.clone(), cites(id).to_string()]),
    )
}

pub fn parse_selection(text: &str) -> Result<Vec<String>> {
    parse(text, &SELECTION_HEADER, "selection.csv")?
        .into_iter()
        .map(|row| Ok(row[1].clone()))
        .collect()
}

/// One row per (document, term); `labels` maps term id → label.
pub fn annotations_csv(annotations: &[DocumentAnnotation], labels: &BTreeMap<String, String>) -> String {
    render(
        &ANNOTATION_HEADER,
        annotations.iter().flat_map(|a| {
            a.terms.iter().map(move |t| {
                vec![
                    a.doc_id.clone(),
                    t.clone(),
                    labels.get(t).cloned().unwrap_or_else(|| t.clone()),
                    a.clinical_terms.contains(t).to_string(),
                ]
            })
        }),
    )
}

pub fn rates_csv(annotations: &[DocumentAnnotation]) -> String {
    render(
        &RATES_HEADER,
        annotations.iter().map(|a| {
            vec![
                a.doc_id.clone(),
                a.terms.len().to_string(),
                a.clinical_terms.len().to_string(),
                a.clinical_rate.to_string(),
            ]
        }),
    )
}

/// Rebuilds annotations from the two annotation tables. Returns the
/// annotations (ordered as in the rates table) and the term label map.
pub fn parse_annotations(
    annotations: &str,
    rates: &str,
) -> Result<(Vec<DocumentAnnotation>, BTreeMap<String, String>)> {
    let mut terms: BTreeMap<String, (BTreeSet<String>, BTreeSet<String>)> = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for row in parse(annotations, &ANNOTATION_HEADER, "annotations.csv")? {
        let clinical: bool = field(&row, 3, "annotations.csv")?;
        let entry = terms.entry(row[0].clone()).or_default();
        entry.0.insert(row[1].clone());
        if clinical {
            entry.1.insert(row[1].clone());
        }
        labels.insert(row[1].clone(), row[2].clone());
    }
    let mut out = Vec::new();
    for row in parse(rates, &RATES_HEADER, "rates.csv")? {
        let (t, c) = terms.remove(&row[0]).unwrap_or_default();
        let a = DocumentAnnotation::new(row[0].clone(), t, c);
        let n_terms: usize = field(&row, 1, "rates.csv")?;
        let n_clinical: usize = field(&row, 2, "rates.csv")?;
        let rate: f64 = field(&row, 3, "rates.csv")?;
        if n_terms != a.terms.len() || n_clinical != a.clinical_terms.len() || rate != a.clinical_rate {
            return Err(Error::Csv(format!(
                "rates.csv row for {:?} disagrees with annotations.csv",
                a.doc_id
            )));
        }
        out.push(a);
    }
    if let Some(orphan) = terms.keys().next() {
        return Err(Error::Csv(format!("annotations.csv names {orphan:?}, absent from rates.csv")));
    }
    Ok((out, labels))
}

pub fn tokens_csv(docs: &[TokenizedDocument]) -> String {
    render(
        &TOKENS_HEADER,
        docs.iter().flat_map(|d| {
            d.tokens.iter().map(move |w| {
                vec![
                    d.doc_id.clone(),
                    w.clone(),
                    d.display_forms.get(w).cloned().unwrap_or_else(|| w.clone()),
                ]
            })
        }),
    )
}

pub fn parse_tokens(text: &str) -> Result<Vec<TokenizedDocument>> {
    let mut docs: BTreeMap<String, TokenizedDocument> = BTreeMap::new();
    for row in parse(text, &TOKENS_HEADER, "tokens.csv")? {
        let d = docs.entry(row[0].clone()).or_insert_with(|| TokenizedDocument {
            doc_id: row[0].clone(),
            tokens: BTreeSet::new(),
            display_forms: BTreeMap::new(),
        });
        d.tokens.insert(row[1].clone());
        d.display_forms.insert(row[1].clone(), row[2].clone());
    }
    Ok(docs.into_values().collect())
}

pub fn edges_csv(graph: &crate::netbuild::CitationGraph) -> String {
    render(
        &["source", "target"],
        graph.edge_ids().map(|(a, b)| vec![a.to_string(), b.to_string()]),
    )
}

pub fn partition_csv(ids: &[String], labels: &[usize]) -> String {
    render(
        &["doc_id", "cluster"],
        ids.iter().zip(labels).map(|(id, c)| vec![id.clone(), c.to_string()]),
    )
}

pub fn cluster_edges_csv(cg: &ClusterGraph) -> String {
    render(
        &["from", "to", "weight"],
        cg.edges
            .iter()
            .map(|e| vec![e.from.to_string(), e.to.to_string(), e.weight.to_string()]),
    )
}

pub fn term_tables_csv(tables: &[ClusterTermTable]) -> String {
    render(
        &["cluster", "rank", "term_id", "label", "count"],
        tables.iter().flat_map(|t| {
            t.rows.iter().enumerate().map(move |(i, r)| {
                vec![
                    t.cluster.to_string(),
                    (i + 1).to_string(),
                    r.term_id.clone(),
                    r.label.clone(),
                    r.count.to_string(),
                ]
            })
        }),
    )
}

pub fn distinctive_words_csv(lists: &[(usize, Vec<DistinctiveWord>)]) -> String {
    render(
        &["cluster", "rank", "word", "jaccard"],
        lists.iter().flat_map(|(c, words)| {
            words.iter().enumerate().map(move |(i, w)| {
                vec![
                    c.to_string(),
                    (i + 1).to_string(),
                    w.display.clone(),
                    format!("{:.3}", w.jaccard),
                ]
            })
        }),
    )
}

pub fn ca_coordinates_csv(table: &ContingencyTable, ca: &CaResult) -> String {
    let mut header = vec!["kind".to_string(), "label".to_string()];
    header.extend((1..=ca.dims()).map(|d| format!("dim{d}")));
    header.push("mass".into());
    header.push("inertia_contribution".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = (0..table.rows())
        .map(|r| {
            let mut row = vec!["row".to_string(), table.row_labels()[r].clone()];
            row.extend(ca.row_coords[r].iter().map(f64::to_string));
            row.push(ca.row_masses[r].to_string());
            row.push(ca.row_inertia[r].to_string());
            row
        })
        .chain((0..table.cols()).map(|c| {
            let mut row = vec!["col".to_string(), table.display_forms()[c].clone()];
            row.extend(ca.col_coords[c].iter().map(f64::to_string));
            row.push(ca.col_masses[c].to_string());
            row.push(ca.col_inertia[c].to_string());
            row
        }));
    render(&header, rows)
}

pub fn counts_csv(key: &str, counts: &[(String, usize)]) -> String {
    render(
        &[key, "count"],
        counts.iter().map(|(k, c)| vec![k.clone(), c.to_string()]),
    )
}

pub fn regions_csv(regions: &[DenseRegion], weight_of: impl Fn(&str) -> f64) -> String {
    render(
        &["region_rank", "node_id", "weight", "is_seed"],
        regions.iter().enumerate().flat_map(|(i, r)| {
            let weight_of = &weight_of;
            r.members.iter().map(move |m| {
                vec![
                    (i + 1).to_string(),
                    m.clone(),
                    weight_of(m).to_string(),
                    (*m == r.seed).to_string(),
                ]
            })
        }),
    )
}
