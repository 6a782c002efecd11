//! Dictionary annotation of titles and abstracts against a [`Vocabulary`],
//! with clinical-term rates and per-cluster term tables.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{normalize_phrase, DocumentRecord, Vocabulary};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentAnnotation {
    pub doc_id: String,
    /// Matched term ids, each once.
    pub terms: BTreeSet<String>,
    pub clinical_terms: BTreeSet<String>,
    pub clinical_rate: f64,
}

impl DocumentAnnotation {
    /// Assembles an annotation and derives its rate.
    pub fn new(doc_id: String, terms: BTreeSet<String>, clinical_terms: BTreeSet<String>) -> Self {
        debug_assert!(clinical_terms.is_subset(&terms));
        let clinical_rate = if terms.is_empty() {
            0.0
        } else {
            clinical_terms.len() as f64 / terms.len() as f64
        };
        DocumentAnnotation {
            doc_id,
            terms,
            clinical_terms,
            clinical_rate,
        }
    }
}

/// A vocabulary phrase found in normalized text, as a byte range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseMatch {
    pub start: usize,
    pub end: usize,
    pub terms: Vec<usize>,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Leftmost-longest scan of already-normalized text. Matches never split a
/// run of letters and digits, and text covered by a match is not scanned
/// again.
pub fn find_phrases(normalized: &str, vocab: &Vocabulary) -> Vec<PhraseMatch> {
    let chars: Vec<(usize, char)> = normalized.char_indices().collect();
    let len = chars.len();
    let byte_at = |i: usize| if i == len { normalized.len() } else { chars[i].0 };
    // A cut between i-1 and i is allowed unless both sides are word chars.
    let cut = |i: usize| i == 0 || i == len || !(is_word_char(chars[i - 1].1) && is_word_char(chars[i].1));
    let longest = vocab.longest_phrase_chars();

    let mut out = Vec::new();
    let mut i = 0;
    while i < len {
        if chars[i].1 == ' ' || !cut(i) {
            i += 1;
            continue;
        }
        let far = (i + longest).min(len);
        let hit = (i + 1..=far).rev().find_map(|e| {
            if !cut(e) || chars[e - 1].1 == ' ' {
                return None;
            }
            vocab
                .lookup(&normalized[byte_at(i)..byte_at(e)])
                .map(|terms| (e, terms))
        });
        match hit {
            Some((e, terms)) => {
                out.push(PhraseMatch {
                    start: byte_at(i),
                    end: byte_at(e),
                    terms: terms.to_vec(),
                });
                i = e;
            }
            None => i += 1,
        }
    }
    out
}

/// Annotates title and abstract. Matching is case-insensitive and treats any
/// whitespace run as one space; a term is clinical when one of its roots is
/// a clinical root.
pub fn annotate_document(doc: &DocumentRecord, vocab: &Vocabulary) -> DocumentAnnotation {
    let text = normalize_phrase(&format!("{} {}", doc.title, doc.abstract_text));
    let mut terms = BTreeSet::new();
    let mut clinical = BTreeSet::new();
    for m in find_phrases(&text, vocab) {
        for t in m.terms {
            let id = &vocab.term(t).term_id;
            terms.insert(id.clone());
            if vocab.is_clinical(t) {
                clinical.insert(id.clone());
            }
        }
    }
    DocumentAnnotation::new(doc.id.clone(), terms, clinical)
}

/// Annotates documents in parallel; output is ordered by document id.
/// Documents without any matched term are kept with rate 0 and logged.
pub fn annotate_documents(docs: &[&DocumentRecord], vocab: &Vocabulary) -> Vec<DocumentAnnotation> {
    let mut out: Vec<DocumentAnnotation> = docs
        .par_iter()
        .map(|d| annotate_document(d, vocab))
        .collect();
    out.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    for a in out.iter().filter(|a| a.terms.is_empty()) {
        log::warn!("document {:?} matched no vocabulary terms; rate set to 0", a.doc_id);
    }
    out
}

/// Arithmetic mean of member clinical rates.
pub fn mean_clinical_rate<'a, I>(members: I) -> Result<f64>
where
    I: IntoIterator<Item = &'a DocumentAnnotation>,
{
    let (sum, n) = members
        .into_iter()
        .fold((0.0, 0usize), |(s, n), a| (s + a.clinical_rate, n + 1));
    if n == 0 {
        return Err(Error::EmptyCluster);
    }
    Ok(sum / n as f64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRow {
    pub term_id: String,
    pub label: String,
    /// Cluster documents annotated with the term.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterTermTable {
    pub cluster: usize,
    pub cutoff: usize,
    pub rows: Vec<TermRow>,
}

/// Document frequency of each term within a cluster, keeping rows with
/// `count >= cutoff`, sorted by count descending then label.
pub fn cluster_term_table<'a, I>(
    cluster: usize,
    members: I,
    vocab: &Vocabulary,
    cutoff: usize,
) -> ClusterTermTable
where
    I: IntoIterator<Item = &'a DocumentAnnotation>,
{
    term_table_with_labels(cluster, members, cutoff, |id| {
        vocab
            .index_of(id)
            .map(|i| vocab.term(i).label.clone())
            .unwrap_or_else(|| id.to_string())
    })
}

/// [`cluster_term_table`] with labels supplied by a lookup.
pub fn term_table_with_labels<'a, I, F>(
    cluster: usize,
    members: I,
    cutoff: usize,
    label_of: F,
) -> ClusterTermTable
where
    I: IntoIterator<Item = &'a DocumentAnnotation>,
    F: Fn(&str) -> String,
{
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for a in members {
        for t in &a.terms {
            *counts.entry(t.as_str()).or_default() += 1;
        }
    }
    let mut rows: Vec<TermRow> = counts
        .into_iter()
        .filter(|&(_, c)| c >= cutoff)
        .map(|(id, count)| TermRow {
            term_id: id.to_string(),
            label: label_of(id),
            count,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then_with(|| a.label.cmp(&b.label))
            .then_with(|| a.term_id.cmp(&b.term_id))
    });
    ClusterTermTable {
        cluster,
        cutoff,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DocumentKind, Term, TermKind};

    fn term(id: &str, label: &str, syn: &[&str], parents: &[&str]) -> Term {
        Term {
            term_id: id.into(),
            label: label.into(),
            synonyms: syn.iter().map(|s| s.to_string()).collect(),
            parents: parents.iter().map(|s| s.to_string()).collect(),
            kind: TermKind::MeshLike,
        }
    }

    fn doc(title: &str, abs: &str) -> DocumentRecord {
        DocumentRecord {
            id: "D".into(),
            kind: DocumentKind::Paper,
            title: title.into(),
            abstract_text: abs.into(),
            year: 2000,
            authors: vec![],
            assignees: vec![],
            venue: None,
            times_cited_global: 0,
            references: vec![],
        }
    }

    fn vocab() -> Vocabulary {
        Vocabulary::new(
            vec![
                term("CHEM", "Chemicals", &[], &[]),
                term("GLY", "Glycoproteins", &["glycoprotein"], &["CHEM"]),
                term("THER", "Therapeutics", &[], &[]),
                term("VAC", "Vaccines", &["vaccine"], &["THER"]),
                term("VACN", "Vaccination", &[], &["THER"]),
                term("NAT", "nation", &[], &["CHEM"]),
                term("EV", "Ebolavirus", &["ebola virus"], &["CHEM"]),
                term("EVD", "Ebola virus disease", &[], &["THER"]),
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn glycoprotein_vaccine_example() {
        let v = Vocabulary::new(
            vec![
                term("CHEM", "Chemicals", &[], &[]),
                term("GLY", "Glycoproteins", &["glycoprotein"], &["CHEM"]),
                term("THER", "Therapeutics", &[], &[]),
                term("VAC", "Vaccines", &["vaccine"], &["THER"]),
            ],
            None,
        )
        .unwrap();
        let a = annotate_document(&doc("Ebola virus glycoprotein vaccine", ""), &v);
        assert_eq!(a.terms, ["GLY", "VAC"].iter().map(|s| s.to_string()).collect());
        assert_eq!(a.clinical_terms, ["VAC"].iter().map(|s| s.to_string()).collect());
        assert_eq!(a.clinical_rate, 0.5);
    }

    #[test]
    fn empty_text() {
        let a = annotate_document(&doc("", ""), &vocab());
        assert!(a.terms.is_empty());
        assert_eq!(a.clinical_rate, 0.0);
    }

    #[test]
    fn word_boundary_blocks_inner_match() {
        let a = annotate_document(&doc("Mass vaccination campaign", ""), &vocab());
        assert_eq!(a.terms, ["VACN"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn longest_match_suppresses_prefix() {
        let a = annotate_document(&doc("Ebola virus disease in Gabon", ""), &vocab());
        assert_eq!(a.terms, ["EVD"].iter().map(|s| s.to_string()).collect());
        let b = annotate_document(&doc("Ebola virus replication", ""), &vocab());
        assert_eq!(b.terms, ["EV"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn whitespace_and_case_insensitive() {
        let a = annotate_document(&doc("EBOLA \t\n  Virus", ""), &vocab());
        let b = annotate_document(&doc("ebola virus", ""), &vocab());
        assert_eq!(a.terms, b.terms);
        assert!(!a.terms.is_empty());
    }

    #[test]
    fn punctuation_is_a_boundary() {
        let a = annotate_document(&doc("(glycoprotein), vaccine.", ""), &vocab());
        assert_eq!(a.terms.len(), 2);
    }

    #[test]
    fn mean_rate() {
        let mk = |r: f64| DocumentAnnotation {
            doc_id: "x".into(),
            terms: BTreeSet::new(),
            clinical_terms: BTreeSet::new(),
            clinical_rate: r,
        };
        assert_eq!(mean_clinical_rate(&[mk(0.0), mk(0.5)]).unwrap(), 0.25);
        assert_eq!(mean_clinical_rate(&[mk(0.0), mk(0.0)]).unwrap(), 0.0);
        assert!(matches!(mean_clinical_rate(&[]), Err(Error::EmptyCluster)));
    }

    fn ann(terms: &[&str]) -> DocumentAnnotation {
        DocumentAnnotation::new(
            "d".into(),
            terms.iter().map(|s| s.to_string()).collect(),
            BTreeSet::new(),
        )
    }

    #[test]
    fn term_table_sorted_with_cutoff() {
        let members = vec![
            ann(&["A", "B", "C", "D"]),
            ann(&["A", "B", "C"]),
            ann(&["A", "B", "C"]),
            ann(&["A"]),
            ann(&["A"]),
        ];
        let t = term_table_with_labels(0, &members, 2, |id| id.to_string());
        let rows: Vec<(&str, usize)> = t.rows.iter().map(|r| (r.label.as_str(), r.count)).collect();
        assert_eq!(rows, vec![("A", 5), ("B", 3), ("C", 3)]);
        let empty = term_table_with_labels(0, &members, 6, |id| id.to_string());
        assert!(empty.rows.is_empty());
    }

    #[test]
    fn term_table_uses_vocab_labels() {
        let v = vocab();
        let members: Vec<DocumentAnnotation> = (0..33).map(|_| ann(&["EV", "GLY"])).collect();
        let t = cluster_term_table(0, &members, &v, 1);
        assert_eq!(t.rows[0].label, "Ebolavirus");
        assert_eq!(t.rows[0].count, 33);
    }
}
