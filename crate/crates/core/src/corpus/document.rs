use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentKind {
    Paper,
    PatentFamily,
}

impl DocumentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DocumentKind::Paper => "paper",
            DocumentKind::PatentFamily => "patent_family",
        }
    }
}

impl fmt::Display for DocumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DocumentKind {
    type Err = Error;

    /// Accepts the file spelling and the short CLI spelling (`patent`).
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(DocumentKind::Paper),
            "patent" | "patent_family" => Ok(DocumentKind::PatentFamily),
            other => Err(Error::InvalidParameter(format!(
                "unknown corpus kind {other:?} (expected paper or patent)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Author {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
}

/// One paper or patent family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub id: String,
    pub kind: DocumentKind,
    pub title: String,
    #[serde(default, rename = "abstract")]
    pub abstract_text: String,
    pub year: i32,
    #[serde(default)]
    pub authors: Vec<Author>,
    #[serde(default)]
    pub assignees: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub venue: Option<String>,
    pub times_cited_global: u64,
    /// Cited document ids; may point outside the corpus.
    #[serde(default)]
    pub references: Vec<String>,
}

const KNOWN_FIELDS: &[&str] = &[
    "id",
    "kind",
    "title",
    "abstract",
    "year",
    "authors",
    "assignees",
    "venue",
    "times_cited_global",
    "references",
];

/// A homogeneous, validated set of documents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    kind: DocumentKind,
    documents: Vec<DocumentRecord>,
    provenance: String,
    index: HashMap<String, usize>,
}

impl Corpus {
    /// Validates `documents` against the corpus invariants. Line numbers in
    /// errors are 1-based positions in `documents`.
    pub fn new(
        kind: DocumentKind,
        documents: Vec<DocumentRecord>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(documents.len());
        for (i, doc) in documents.iter().enumerate() {
            check_record(doc, kind, i + 1)?;
            if index.insert(doc.id.clone(), i).is_some() {
                return Err(Error::DuplicateId {
                    id: doc.id.clone(),
                    line: i + 1,
                });
            }
        }
        Ok(Corpus {
            kind,
            documents,
            provenance: provenance.into(),
            index,
        })
    }

    pub fn kind(&self) -> DocumentKind {
        self.kind
    }

    pub fn documents(&self) -> &[DocumentRecord] {
        &self.documents
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&DocumentRecord> {
        self.index.get(id).map(|&i| &self.documents[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Serializes the corpus as JSON-Lines, one record per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for doc in &self.documents {
            // DocumentRecord holds only strings, integers and lists.
            out.push_str(&serde_json::to_string(doc).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(self.to_jsonl().as_bytes())
            .map_err(|e| Error::io(path, e))
    }
}

fn check_record(doc: &DocumentRecord, kind: DocumentKind, line: usize) -> Result<()> {
    if doc.id.is_empty() {
        return Err(Error::EmptyId { line });
    }
    if doc.kind != kind {
        return Err(Error::KindMismatch {
            id: doc.id.clone(),
            line,
            expected: kind.to_string(),
            found: doc.kind.to_string(),
        });
    }
    if doc.references.contains(&doc.id) {
        return Err(Error::SelfReference {
            id: doc.id.clone(),
            line,
        });
    }
    Ok(())
}

/// Parses JSON-Lines corpus text. Blank lines are skipped but still counted
/// for line numbers.
pub fn parse_corpus(text: &str, kind: DocumentKind, provenance: &str) -> Result<Corpus> {
    let mut documents = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(raw).map_err(|e| Error::MalformedRecord {
                line,
                message: e.to_string(),
            })?;
        let Some(object) = value.as_object() else {
            return Err(Error::MalformedRecord {
                line,
                message: "expected a JSON object".into(),
            });
        };
        for key in object.keys() {
            if !KNOWN_FIELDS.contains(&key.as_str()) {
                log::warn!("line {line}: ignoring unknown field {key:?}");
            }
        }
        let doc: DocumentRecord =
            serde_json::from_value(value).map_err(|e| Error::MalformedRecord {
                line,
                message: e.to_string(),
            })?;
        check_record(&doc, kind, line)?;
        if let Some(first) = seen.insert(doc.id.clone(), line) {
            log::debug!("id {:?} first seen on line {first}", doc.id);
            return Err(Error::DuplicateId { id: doc.id, line });
        }
        documents.push(doc);
    }
    Corpus::new(kind, documents, provenance)
}

/// Loads and validates a JSON-Lines corpus file.
pub fn load_corpus(path: impl AsRef<Path>, kind: DocumentKind) -> Result<Corpus> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_corpus(&text, kind, &format!("jsonl:{name}"))
}
