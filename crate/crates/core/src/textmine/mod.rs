//! Abstract tokenization, cluster × word contingency tables, Jaccard
//! distinctiveness and correspondence analysis.
//!
//! Table cells count documents, not token occurrences, so the Jaccard
//! ranking and the correspondence analysis read the same table.

mod ca;
mod contingency;
mod stopwords;
mod tokenize;

pub use ca::{correspondence_analysis, CaResult};
pub use contingency::{
    build_contingency, distinctive_words, ContingencyTable, DistinctiveWord, DEFAULT_MIN_DOC_FREQ,
};
pub use stopwords::{Stopwords, ENGLISH_STOPWORDS_VERSION};
pub use tokenize::{tokenize, tokenize_with, TokenizedDocument, TokenizerOptions};
