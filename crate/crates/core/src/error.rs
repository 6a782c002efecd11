use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Io,
    VerifyMismatch,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: malformed record: {message}")]
    MalformedRecord { line: usize, message: String },

    #[error("line {line}: empty document id")]
    EmptyId { line: usize },

    #[error("line {line}: duplicate document id {id:?}")]
    DuplicateId { id: String, line: usize },

    #[error("line {line}: document {id:?} references itself")]
    SelfReference { id: String, line: usize },

    #[error("line {line}: document {id:?} has kind {found}, corpus kind is {expected}")]
    KindMismatch {
        id: String,
        line: usize,
        expected: String,
        found: String,
    },

    #[error("malformed vocabulary: {0}")]
    MalformedVocabulary(String),

    #[error("duplicate term id {0:?}")]
    DuplicateTerm(String),

    #[error("term {term:?} lists unknown parent {parent:?}")]
    UnknownParent { term: String, parent: String },

    #[error("cycle in parent links: {}", cycle.join(" -> "))]
    VocabularyCycle { cycle: Vec<String> },

    #[error("clinical root {0:?} is not the label of any root term")]
    UnknownClinicalRoot(String),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("fraction {0} outside (0, 1]")]
    InvalidFraction(f64),

    #[error("unknown node id {0:?}")]
    UnknownNode(String),

    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),

    #[error("self-loop on node {0:?}")]
    SelfLoop(String),

    #[error("assignment does not cover node {0:?}")]
    UncoveredNode(String),

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("graph has {nodes} nodes, exhaustive search allows at most {max}")]
    GraphTooLarge { nodes: usize, max: usize },

    #[error("cluster has no members")]
    EmptyCluster,

    #[error("unknown cluster {0}")]
    UnknownCluster(usize),

    #[error("contingency table needs at least 2 rows and 2 columns, got {rows}x{cols}")]
    TableTooSmall { rows: usize, cols: usize },

    #[error("degenerate contingency table: {axis} {label:?} has zero mass")]
    DegenerateTable { axis: &'static str, label: String },

    #[error("operation needs a {expected} corpus, got {found}")]
    WrongCorpusKind { expected: String, found: String },

    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("graphml: {0}")]
    GraphMl(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("output directory is locked by another run: {}", .0.display())]
    Locked(PathBuf),

    #[error("verification failed: {}", mismatches.join("; "))]
    VerifyMismatch { mismatches: Vec<String> },

    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io { .. } | Error::Locked(_) => ErrorClass::Io,
            Error::VerifyMismatch { .. } => ErrorClass::VerifyMismatch,
            Error::Stage { source, .. } => source.class(),
            _ => ErrorClass::Validation,
        }
    }
}

/// Attaches a pipeline stage name to an error.
pub(crate) trait StageContext<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageContext<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| Error::Stage {
            stage,
            source: Box::new(e),
        })
    }
}
