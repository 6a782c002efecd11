use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Root categories whose descendants count as clinical when a vocabulary
/// file does not name its own set.
pub const DEFAULT_CLINICAL_ROOTS: [&str; 6] = [
    "Diagnosis",
    "Therapeutics",
    "Surgical Procedures, Operative",
    "Named Groups",
    "Persons",
    "Health Care",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    MeshLike,
    GoLike,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub term_id: String,
    pub label: String,
    #[serde(default)]
    pub synonyms: Vec<String>,
    #[serde(default)]
    pub parents: Vec<String>,
    pub kind: TermKind,
}

#[derive(Debug, Serialize, Deserialize)]
struct VocabularyFile {
    terms: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    clinical_roots: Option<Vec<String>>,
}

/// A poly-hierarchical controlled vocabulary with a phrase index.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    terms: Vec<Term>,
    clinical_roots: BTreeSet<String>,
    by_id: HashMap<String, usize>,
    roots_of: Vec<Vec<usize>>,
    clinical: Vec<bool>,
    phrases: HashMap<String, Vec<usize>>,
    longest_phrase: usize,
}

/// Lowercases and collapses whitespace runs to one space.
pub fn normalize_phrase(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    out
}

impl Vocabulary {
    /// Builds and validates a vocabulary. An explicit `clinical_roots` set
    /// must match root labels exactly; `None` selects
    /// [`DEFAULT_CLINICAL_ROOTS`], keeping only those present as roots.
    pub fn new(terms: Vec<Term>, clinical_roots: Option<BTreeSet<String>>) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if t.term_id.is_empty() {
                return Err(Error::MalformedVocabulary("empty term_id".into()));
            }
            if by_id.insert(t.term_id.clone(), i).is_some() {
                return Err(Error::DuplicateTerm(t.term_id.clone()));
            }
        }
        let mut parent_idx = Vec::with_capacity(terms.len());
        for t in &terms {
            let mut ps = Vec::with_capacity(t.parents.len());
            for p in &t.parents {
                let &pi = by_id.get(p).ok_or_else(|| Error::UnknownParent {
                    term: t.term_id.clone(),
                    parent: p.clone(),
                })?;
                ps.push(pi);
            }
            ps.sort_unstable();
            ps.dedup();
            parent_idx.push(ps);
        }

        let order = topological_order(&terms, &parent_idx)?;
        let mut roots_of: Vec<Vec<usize>> = vec![Vec::new(); terms.len()];
        for &t in &order {
            if parent_idx[t].is_empty() {
                roots_of[t] = vec![t];
            } else {
                let mut rs: Vec<usize> = parent_idx[t]
                    .iter()
                    .flat_map(|&p| roots_of[p].iter().copied())
                    .collect();
                rs.sort_unstable();
                rs.dedup();
                roots_of[t] = rs;
            }
        }

        let root_labels: BTreeSet<&str> = terms
            .iter()
            .zip(&parent_idx)
            .filter(|(_, ps)| ps.is_empty())
            .map(|(t, _)| t.label.as_str())
            .collect();
        let clinical_roots = match clinical_roots {
            Some(set) => {
                if let Some(missing) = set.iter().find(|r| !root_labels.contains(r.as_str())) {
                    return Err(Error::UnknownClinicalRoot(missing.clone()));
                }
                set
            }
            None => DEFAULT_CLINICAL_ROOTS
                .iter()
                .filter(|r| {
                    let present = root_labels.contains(*r);
                    if !present {
                        log::debug!("default clinical root {r:?} absent from vocabulary");
                    }
                    present
                })
                .map(|r| r.to_string())
                .collect(),
        };

        let clinical = roots_of
            .iter()
            .map(|rs| {
                rs.iter()
                    .any(|&r| clinical_roots.contains(&terms[r].label))
            })
            .collect();

        let mut phrases: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, t) in terms.iter().enumerate() {
            for s in std::iter::once(&t.label).chain(&t.synonyms) {
                let key = normalize_phrase(s);
                if key.is_empty() {
                    continue;
                }
                let ids = phrases.entry(key).or_default();
                if !ids.contains(&i) {
                    ids.push(i);
                }
            }
        }
        let longest_phrase = phrases.keys().map(|k| k.chars().count()).max().unwrap_or(0);

        Ok(Vocabulary {
            terms,
            clinical_roots,
            by_id,
            roots_of,
            clinical,
            phrases,
            longest_phrase,
        })
    }

    /// Replaces the clinical root set, validating it against root labels.
    pub fn with_clinical_roots(self, roots: BTreeSet<String>) -> Result<Self> {
        Vocabulary::new(self.terms, Some(roots))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: VocabularyFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedVocabulary(e.to_string()))?;
        Vocabulary::new(
            file.terms,
            file.clinical_roots.map(|v| v.into_iter().collect()),
        )
    }

    pub fn to_json(&self) -> String {
        let file = VocabularyFile {
            terms: self.terms.clone(),
            clinical_roots: Some(self.clinical_roots.iter().cloned().collect()),
        };
        serde_json::to_string_pretty(&file).expect("vocabulary serializes")
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn clinical_roots(&self) -> &BTreeSet<String> {
        &self.clinical_roots
    }

    pub fn index_of(&self, term_id: &str) -> Option<usize> {
        self.by_id.get(term_id).copied()
    }

    pub fn term(&self, index: usize) -> &Term {
        &self.terms[index]
    }

    pub fn is_clinical(&self, index: usize) -> bool {
        self.clinical[index]
    }

    /// Root terms reachable from `index` by parent links.
    pub fn roots_of(&self, index: usize) -> &[usize] {
        &self.roots_of[index]
    }

    /// Term indices whose label or synonym normalizes to `phrase`.
    pub fn lookup(&self, phrase: &str) -> Option<&[usize]> {
        self.phrases.get(phrase).map(Vec::as_slice)
    }

    pub(crate) fn longest_phrase_chars(&self) -> usize {
        self.longest_phrase
    }
}

/// Parents-before-children order, or the first cycle found.
fn topological_order(terms: &[Term], parents: &[Vec<usize>]) -> Result<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let n = terms.len();
    let mut mark = vec![Mark::New; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if mark[start] != Mark::New {
            continue;
        }
        // (node, next parent position)
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        mark[start] = Mark::Open;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&p) = parents[node].get(*next) {
                *next += 1;
                match mark[p] {
                    Mark::New => {
                        mark[p] = Mark::Open;
                        stack.push((p, 0));
                    }
                    Mark::Open => {
                        let pos = stack.iter().position(|&(v, _)| v == p).unwrap_or(0);
                        let mut cycle: Vec<String> = stack[pos..]
                            .iter()
                            .map(|&(v, _)| terms[v].term_id.clone())
                            .collect();
                        cycle.push(terms[p].term_id.clone());
                        return Err(Error::VocabularyCycle { cycle });
                    }
                    Mark::Done => {}
                }
            } else {
                mark[node] = Mark::Done;
                order.push(node);
                stack.pop();
            }
        }
    }
    Ok(order)
}

pub fn load_vocabulary(path: impl AsRef<Path>) -> Result<Vocabulary> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Vocabulary::from_json(&text)
}
