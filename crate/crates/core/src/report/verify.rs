//! Recomputes a finished run from its persisted intermediates and the
//! original inputs, and compares every output file.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use super::graphml::{parse_graphml, AnnotatedNetwork};
use super::pipeline::{
    annotate_network, derive_outputs, load_inputs, node_styles, tokenize_network, Intermediates, RunConfig,
    RunReport, ANNOTATIONS_FILE, NETWORK_FILE, RATES_FILE, REPORT_FILE, SELECTION_FILE, TOKENS_FILE,
};
use super::tables;
use crate::cluster::{greedy_modularity_clustering, modularity};
use crate::error::{Error, Result};
use crate::netbuild::{build_citation_network, select_top_cited};

/// What a successful verification checked.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub files_compared: usize,
    pub checks: Vec<String>,
}

fn read(dir: &Path, name: &str) -> Result<String> {
    let path = dir.join(name);
    fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
}

/// Rebuilds the run configuration recorded in a report.
pub fn config_from_report(report: &RunReport, out: &Path) -> RunConfig {
    let inputs = &report.inputs;
    RunConfig {
        corpus: PathBuf::from(&inputs.corpus_path),
        kind: inputs.kind,
        vocab: inputs.vocab_path.as_ref().map(PathBuf::from),
        stopwords: inputs.stopwords_path.as_ref().map(PathBuf::from),
        clinical_roots: inputs.vocab_path.as_ref().map(|_| inputs.clinical_roots.clone()),
        out: out.to_path_buf(),
        params: report.parameters.clone(),
    }
}

/// Reads the intermediate files of a run directory.
pub fn read_intermediates(dir: &Path) -> Result<Intermediates> {
    let selected = tables::parse_selection(&read(dir, SELECTION_FILE)?)?;
    let network = parse_graphml(&read(dir, NETWORK_FILE)?)?;
    let (annotations, term_labels) =
        tables::parse_annotations(&read(dir, ANNOTATIONS_FILE)?, &read(dir, RATES_FILE)?)?;
    let tokens = tables::parse_tokens(&read(dir, TOKENS_FILE)?)?;
    Ok(Intermediates {
        selected,
        // Filled from the report by the caller; the CSV holds ids only.
        selection: placeholder_selection(),
        network,
        annotations,
        term_labels,
        tokens,
    })
}

fn placeholder_selection() -> crate::netbuild::SelectionReport {
    crate::netbuild::SelectionReport {
        fraction_requested: 0.0,
        n_total: 0,
        n_selected: 0,
        citations_selected: 0,
        citations_total: 0,
        share: 0.0,
    }
}

fn check_network(stored: &AnnotatedNetwork, fresh: &crate::netbuild::CitationGraph, problems: &mut Vec<String>) {
    if stored.graph.id_sets() != fresh.id_sets() {
        problems.push(format!(
            "{NETWORK_FILE}: node/edge set differs from the network rebuilt from the corpus"
        ));
    }
}

/// Verifies the run stored in `dir`. Relative input paths recorded in the
/// report are resolved against the current directory.
pub fn verify_run(dir: &Path) -> Result<VerifySummary> {
    let report_text = read(dir, REPORT_FILE)?;
    let stored: RunReport = serde_json::from_str(&report_text)
        .map_err(|e| Error::Csv(format!("{REPORT_FILE}: {e}")))?;
    let config = config_from_report(&stored, dir);
    let params = &config.params;
    let mut problems = Vec::new();
    let mut checks = Vec::new();

    let inputs = load_inputs(&config)?;
    for (what, old, new) in [
        ("corpus", Some(&stored.inputs.corpus_sha256), Some(&inputs.summary.corpus_sha256)),
        ("vocabulary", stored.inputs.vocab_sha256.as_ref(), inputs.summary.vocab_sha256.as_ref()),
        ("stopwords", stored.inputs.stopwords_sha256.as_ref(), inputs.summary.stopwords_sha256.as_ref()),
    ] {
        if old != new {
            problems.push(format!("{what} digest changed: recorded {old:?}, now {new:?}"));
        }
    }
    checks.push("input digests".to_string());

    let mut inter = read_intermediates(dir)?;
    let corpus = &inputs.corpus;

    let (selected, selection) = select_top_cited(corpus, params.fraction)?;
    if selected != inter.selected {
        problems.push(format!("{SELECTION_FILE}: differs from a fresh top-cited selection"));
    }
    inter.selection = selection;
    checks.push("selection".to_string());

    let fresh = build_citation_network(corpus, &inter.selected)?;
    check_network(&inter.network, &fresh, &mut problems);
    let labels = inter.network.cluster_labels();
    let q = modularity(&inter.network.graph, &labels)?;
    if q != stored.clustering.modularity {
        problems.push(format!(
            "modularity of stored partition is {q}, report says {}",
            stored.clustering.modularity
        ));
    }
    let greedy = greedy_modularity_clustering(&inter.network.graph)?;
    if greedy.labels() != labels.as_slice() {
        problems.push(format!("{NETWORK_FILE}: cluster labels differ from a fresh greedy clustering"));
    }
    checks.push("network and clustering".to_string());

    if let Some(vocab) = &inputs.vocab {
        let fresh = annotate_network(corpus, &inter.network.graph, vocab)?;
        if fresh != inter.annotations {
            problems.push(format!("{ANNOTATIONS_FILE}/{RATES_FILE}: differ from fresh annotation"));
        }
        checks.push("annotations".to_string());
    } else if !inter.annotations.is_empty() {
        problems.push(format!("{ANNOTATIONS_FILE}: present although the run had no vocabulary"));
    }
    let rates: HashMap<String, f64> = inter
        .annotations
        .iter()
        .map(|a| (a.doc_id.clone(), a.clinical_rate))
        .collect();
    for (id, node) in inter.network.graph.nodes().iter().zip(&inter.network.nodes) {
        if rates.get(id).copied().unwrap_or(0.0) != node.clinical_rate {
            problems.push(format!("{NETWORK_FILE}: clinical_rate of {id:?} disagrees with {RATES_FILE}"));
            break;
        }
    }

    let tokens = tokenize_network(corpus, &inter.network.graph, &inputs.stopwords, params.stem)?;
    if tokens != inter.tokens {
        problems.push(format!("{TOKENS_FILE}: differs from fresh tokenization"));
    }
    checks.push("tokens".to_string());

    let styles = node_styles(&inter.network.graph, corpus, &rates, params)?;
    if inter.network.nodes.iter().map(|n| &n.style).ne(styles.iter()) {
        problems.push(format!("{NETWORK_FILE}: layout, colors or sizes differ from recomputation"));
    }
    checks.push("layout and styles".to_string());

    let (mut report, files) = derive_outputs(&inter, corpus, params, &inputs.summary)?;
    report.generated_at_unix = stored.generated_at_unix;
    let mut compared = 0;
    let expected: BTreeMap<&str, &str> = files.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    for (name, content) in &expected {
        compared += 1;
        match fs::read_to_string(dir.join(name)) {
            Ok(on_disk) if on_disk == *content => {}
            Ok(_) => problems.push(format!("{name}: content differs from recomputation")),
            Err(_) => problems.push(format!("{name}: missing")),
        }
    }
    for name in &stored.files {
        if !expected.contains_key(name.as_str()) && !report.files.contains(name) {
            problems.push(format!("{name}: listed in the report but not produced"));
        }
    }
    compared += 1;
    if report.to_json() != report_text {
        problems.push(format!("{REPORT_FILE}: differs from recomputation"));
    }
    checks.push("derived files".to_string());

    if problems.is_empty() {
        Ok(VerifySummary {
            files_compared: compared,
            checks,
        })
    } else {
        Err(Error::VerifyMismatch { mismatches: problems })
    }
}
