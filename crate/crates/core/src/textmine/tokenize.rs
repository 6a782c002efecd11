use std::collections::{BTreeMap, BTreeSet};

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

use super::stopwords::Stopwords;
use crate::corpus::DocumentRecord;

/// Presence set of normalized words in one abstract.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedDocument {
    pub doc_id: String,
    pub tokens: BTreeSet<String>,
    /// Normalized word → its most frequent surface form in this document.
    pub display_forms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerOptions {
    /// Snowball English stemming (experimental; off by default).
    pub stem: bool,
}

/// Tokenizes a document's abstract with default options.
pub fn tokenize(doc: &DocumentRecord, stopwords: &Stopwords) -> TokenizedDocument {
    tokenize_with(doc, stopwords, TokenizerOptions::default())
}

/// Splits the abstract into maximal runs of letters and digits, lowercases,
/// and drops stopwords and one-character tokens.
pub fn tokenize_with(
    doc: &DocumentRecord,
    stopwords: &Stopwords,
    options: TokenizerOptions,
) -> TokenizedDocument {
    let stemmer = options.stem.then(|| Stemmer::create(Algorithm::English));
    let mut surfaces: BTreeMap<String, BTreeMap<&str, usize>> = BTreeMap::new();
    for run in doc
        .abstract_text
        .split(|c: char| !c.is_alphanumeric())
        .filter(|r| !r.is_empty())
    {
        let lower = run.to_lowercase();
        if lower.chars().count() < 2 || stopwords.contains(&lower) {
            continue;
        }
        let key = match &stemmer {
            Some(s) => s.stem(&lower).into_owned(),
            None => lower,
        };
        *surfaces.entry(key).or_default().entry(run).or_default() += 1;
    }
    let display_forms = surfaces
        .iter()
        .map(|(k, forms)| (k.clone(), most_frequent(forms).to_string()))
        .collect();
    TokenizedDocument {
        doc_id: doc.id.clone(),
        tokens: surfaces.into_keys().collect(),
        display_forms,
    }
}

/// Highest count wins; ties go to the lexicographically smallest form.
pub(crate) fn most_frequent<K: AsRef<str> + Ord>(forms: &BTreeMap<K, usize>) -> &str {
    let mut best: Option<(&K, usize)> = None;
    for (f, &c) in forms {
        if best.is_none_or(|(_, bc)| c > bc) {
            best = Some((f, c));
        }
    }
    best.map_or("", |(f, _)| f.as_ref())
}
