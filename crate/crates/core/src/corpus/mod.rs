//! Document corpora and controlled vocabularies: data model, ingest and
//! validation.

mod document;
mod vocabulary;

pub use document::{load_corpus, parse_corpus, Author, Corpus, DocumentKind, DocumentRecord};
pub use vocabulary::{
    load_vocabulary, normalize_phrase, Term, TermKind, Vocabulary, DEFAULT_CLINICAL_ROOTS,
};
