//! End-to-end run: inputs → intermediates → derived tables and the run
//! report.
//!
//! The persisted intermediates (selection, annotated network, annotations,
//! tokens) carry everything the derived outputs need, so `derive_outputs`
//! can be replayed from disk by the verifier.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::{self, File, OpenOptions};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::graphml::{to_dot, to_graphml, cluster_graph_dot, AnnotatedNetwork};
use super::layout::{spring_positions, DEFAULT_LAYOUT_ITERATIONS};
use super::style::{rate_color, ColorDirection, NodeStyle, SizeBy, HIGH_COLOR, LOW_COLOR};
use super::svg::ca_plot_svg;
use super::tables;
use crate::annotate::{annotate_documents, mean_clinical_rate, term_table_with_labels, ClusterTermTable, DocumentAnnotation, TermRow};
use crate::cluster::{aggregate_clusters, greedy_modularity_clustering, ClusterGraph, Partition};
use crate::corpus::{parse_corpus, Corpus, DocumentKind, Vocabulary};
use crate::dense::{find_dense_regions, leading_assignees, vertex_weights_with, DenseParams, Neighborhood};
use crate::error::{Error, Result, StageContext};
use crate::netbuild::{build_citation_network, country_counts, in_degree, select_top_cited, CitationGraph, SelectionReport};
use crate::textmine::{
    build_contingency, correspondence_analysis, distinctive_words, tokenize_with, ContingencyTable, DistinctiveWord,
    Stopwords, TokenizedDocument, TokenizerOptions, DEFAULT_MIN_DOC_FREQ,
};

pub const TOOL_NAME: &str = "frontmap";
pub const REPORT_FILE: &str = "report.json";
pub const LOCK_FILE: &str = ".frontmap.lock";

pub const SELECTION_FILE: &str = "selection.csv";
pub const NETWORK_FILE: &str = "network.graphml";
pub const ANNOTATIONS_FILE: &str = "annotations.csv";
pub const RATES_FILE: &str = "rates.csv";
pub const TOKENS_FILE: &str = "tokens.csv";

/// Number of term-table rows and in-degree leaders copied into the report.
const REPORT_TOP_TERMS: usize = 10;
const REPORT_TOP_LEADERS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunParameters {
    pub fraction: f64,
    pub edge_threshold: usize,
    pub top_words: usize,
    pub vwp: f64,
    pub haircut: bool,
    pub seed: u64,
    pub min_doc_freq: usize,
    pub term_cutoff: usize,
    pub ca_dims: usize,
    pub stem: bool,
    pub size_by: SizeBy,
    pub color_direction: ColorDirection,
    pub neighborhood: Neighborhood,
    pub layout_iterations: usize,
    pub ca_svg: bool,
}

impl Default for RunParameters {
    fn default() -> Self {
        RunParameters {
            fraction: 0.2,
            edge_threshold: 30,
            top_words: 10,
            vwp: 0.2,
            haircut: true,
            seed: 42,
            min_doc_freq: DEFAULT_MIN_DOC_FREQ,
            term_cutoff: 2,
            ca_dims: 2,
            stem: false,
            size_by: SizeBy::InDegree,
            color_direction: ColorDirection::BlueLowRedHigh,
            neighborhood: Neighborhood::Closed,
            layout_iterations: DEFAULT_LAYOUT_ITERATIONS,
            ca_svg: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub corpus: PathBuf,
    pub kind: DocumentKind,
    pub vocab: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    /// Replaces the vocabulary's clinical root labels when set.
    pub clinical_roots: Option<Vec<String>>,
    pub out: PathBuf,
    pub params: RunParameters,
}

impl RunConfig {
    pub fn new(corpus: impl Into<PathBuf>, kind: DocumentKind, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            corpus: corpus.into(),
            kind,
            vocab: None,
            stopwords: None,
            clinical_roots: None,
            out: out.into(),
            params: RunParameters::default(),
        }
    }
}

/// Where the inputs came from and what they hashed to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub kind: DocumentKind,
    pub corpus_path: String,
    pub corpus_sha256: String,
    pub corpus_documents: usize,
    pub vocab_path: Option<String>,
    pub vocab_sha256: Option<String>,
    pub clinical_roots: Vec<String>,
    pub stopwords_path: Option<String>,
    pub stopwords_sha256: Option<String>,
    pub stopwords_source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub selected: usize,
    pub nodes: usize,
    pub edges: usize,
    pub isolates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringSummary {
    pub method: String,
    pub symmetrized: bool,
    pub modularity: f64,
    pub clusters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leader {
    pub doc_id: String,
    pub title: String,
    pub in_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub index: usize,
    pub size: usize,
    pub intra_citations: usize,
    /// Absent when the run had no vocabulary.
    pub mean_clinical_rate: Option<f64>,
    /// Most-cited members, counting citations from the whole network.
    pub leaders: Vec<Leader>,
    pub top_terms: Vec<TermRow>,
    pub distinctive_words: Vec<DistinctiveWord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedCount {
    pub name: String,
    pub count: usize,
}

fn named_counts(pairs: Vec<(String, usize)>) -> Vec<NamedCount> {
    pairs
        .into_iter()
        .map(|(name, count)| NamedCount { name, count })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaSummary {
    /// Clusters kept as rows; clusters without any retained word are dropped.
    pub rows: Vec<String>,
    pub dropped_rows: Vec<String>,
    pub columns: usize,
    pub grand_total: usize,
    pub total_inertia: f64,
    pub singular_values: Vec<f64>,
    pub explained: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceSection {
    pub cells: String,
    pub min_doc_freq: usize,
    pub words: usize,
    /// `None` when the table was too small or degenerate; see `skipped`.
    pub result: Option<CaSummary>,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSummary {
    pub rank: usize,
    pub members: Vec<String>,
    pub seed: String,
    pub score: f64,
    pub density: f64,
    pub assignees: Vec<NamedCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseSummary {
    pub neighborhood: Neighborhood,
    pub vwp: f64,
    pub haircut: bool,
    pub isolates: usize,
    pub regions: Vec<RegionSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Legend {
    pub low_color: String,
    pub high_color: String,
    pub color_direction: ColorDirection,
    pub color_scale_max_rate: f64,
    pub size_by: SizeBy,
    pub layout: String,
    pub layout_iterations: usize,
    pub layout_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub generated_at_unix: u64,
    pub parameters: RunParameters,
    pub inputs: InputSummary,
    pub selection: SelectionReport,
    pub network: NetworkSummary,
    pub clustering: ClusteringSummary,
    pub clusters: Vec<ClusterSummary>,
    pub cluster_graph: ClusterGraph,
    pub countries: Vec<NamedCount>,
    pub correspondence: CorrespondenceSection,
    pub dense: Option<DenseSummary>,
    pub legend: Legend,
    /// Files written next to this report, sorted.
    pub files: Vec<String>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The cluster with the highest mean clinical rate, if rates exist.
    pub fn most_clinical_cluster(&self) -> Option<&ClusterSummary> {
        self.clusters
            .iter()
            .filter(|c| c.mean_clinical_rate.is_some())
            .max_by(|a, b| a.mean_clinical_rate.unwrap().total_cmp(&b.mean_clinical_rate.unwrap()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

fn utf8(bytes: Vec<u8>, path: &Path) -> Result<String> {
    String::from_utf8(bytes).map_err(|e| {
        Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::InvalidData, e.utf8_error()),
        )
    })
}

/// Loaded and validated inputs of a run.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub corpus: Corpus,
    pub vocab: Option<Vocabulary>,
    pub stopwords: Stopwords,
    pub summary: InputSummary,
}

pub fn load_inputs(config: &RunConfig) -> Result<Inputs> {
    let corpus_bytes = read_bytes(&config.corpus)?;
    let corpus_sha256 = sha256_hex(&corpus_bytes);
    let name = config
        .corpus
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let corpus = parse_corpus(&utf8(corpus_bytes, &config.corpus)?, config.kind, &format!("jsonl:{name}"))
        .stage("ingest")?;

    let (vocab, vocab_sha256) = match &config.vocab {
        None => (None, None),
        Some(path) => {
            let bytes = read_bytes(path)?;
            let sha = sha256_hex(&bytes);
            let mut v = Vocabulary::from_json(&utf8(bytes, path)?).stage("ingest")?;
            if let Some(roots) = &config.clinical_roots {
                v = v
                    .with_clinical_roots(roots.iter().cloned().collect())
                    .stage("ingest")?;
            }
            (Some(v), Some(sha))
        }
    };
    let (stopwords, stopwords_sha256) = match &config.stopwords {
        None => (Stopwords::english(), None),
        Some(path) => {
            let bytes = read_bytes(path)?;
            let sha = sha256_hex(&bytes);
            (Stopwords::parse(&utf8(bytes, path)?, format!("file:{}", path.display())), Some(sha))
        }
    };
    let summary = InputSummary {
        kind: config.kind,
        corpus_path: config.corpus.display().to_string(),
        corpus_sha256,
        corpus_documents: corpus.len(),
        vocab_path: config.vocab.as_ref().map(|p| p.display().to_string()),
        vocab_sha256,
        clinical_roots: vocab
            .as_ref()
            .map(|v| v.clinical_roots().iter().cloned().collect())
            .unwrap_or_default(),
        stopwords_path: config.stopwords.as_ref().map(|p| p.display().to_string()),
        stopwords_sha256,
        stopwords_source: stopwords.source().to_string(),
    };
    Ok(Inputs {
        corpus,
        vocab,
        stopwords,
        summary,
    })
}

/// Everything persisted between the analysis stages.
#[derive(Debug, Clone, PartialEq)]
pub struct Intermediates {
    pub selected: Vec<String>,
    pub selection: SelectionReport,
    pub network: AnnotatedNetwork,
    /// Sorted by document id; empty when no vocabulary was given.
    pub annotations: Vec<DocumentAnnotation>,
    pub term_labels: BTreeMap<String, String>,
    /// Sorted by document id.
    pub tokens: Vec<TokenizedDocument>,
}

/// Annotates the graph's documents. Results are sorted by id.
pub fn annotate_network(corpus: &Corpus, graph: &CitationGraph, vocab: &Vocabulary) -> Result<Vec<DocumentAnnotation>> {
    let docs = graph
        .nodes()
        .iter()
        .map(|id| corpus.get(id).ok_or_else(|| Error::UnknownNode(id.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(annotate_documents(&docs, vocab))
}

/// Tokenizes the graph's documents. Results are sorted by id.
pub fn tokenize_network(
    corpus: &Corpus,
    graph: &CitationGraph,
    stopwords: &Stopwords,
    stem: bool,
) -> Result<Vec<TokenizedDocument>> {
    let docs = graph
        .nodes()
        .iter()
        .map(|id| corpus.get(id).ok_or_else(|| Error::UnknownNode(id.clone())))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<TokenizedDocument> = docs
        .par_iter()
        .map(|d| tokenize_with(d, stopwords, TokenizerOptions { stem }))
        .collect();
    out.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    Ok(out)
}

/// Node styles: seeded layout, rate color scaled to the observed maximum,
/// and size by the configured measure.
pub fn node_styles(
    graph: &CitationGraph,
    corpus: &Corpus,
    rates: &HashMap<String, f64>,
    params: &RunParameters,
) -> Result<Vec<NodeStyle>> {
    let positions = spring_positions(graph, params.seed, params.layout_iterations);
    let max_rate = max_rate(graph, rates);
    let indeg = in_degree(graph, None)?;
    graph
        .nodes()
        .iter()
        .zip(positions)
        .map(|(id, (x, y))| {
            let size = match params.size_by {
                SizeBy::InDegree => indeg[id] as f64,
                SizeBy::GlobalCitations => corpus
                    .get(id)
                    .ok_or_else(|| Error::UnknownNode(id.clone()))?
                    .times_cited_global as f64,
            };
            let rate = rates.get(id).copied().unwrap_or(0.0);
            Ok(NodeStyle {
                id: id.clone(),
                color: rate_color(rate, max_rate, params.color_direction),
                x,
                y,
                size,
            })
        })
        .collect()
}

fn max_rate(graph: &CitationGraph, rates: &HashMap<String, f64>) -> f64 {
    graph
        .nodes()
        .iter()
        .filter_map(|id| rates.get(id))
        .fold(0.0, |a: f64, &b| a.max(b))
}

fn rate_map(annotations: &[DocumentAnnotation]) -> HashMap<String, f64> {
    annotations
        .iter()
        .map(|a| (a.doc_id.clone(), a.clinical_rate))
        .collect()
}

fn term_labels(vocab: &Vocabulary, annotations: &[DocumentAnnotation]) -> BTreeMap<String, String> {
    let used: BTreeSet<&String> = annotations.iter().flat_map(|a| &a.terms).collect();
    used.into_iter()
        .map(|t| {
            let label = vocab
                .index_of(t)
                .map(|i| vocab.term(i).label.clone())
                .unwrap_or_else(|| t.clone());
            (t.clone(), label)
        })
        .collect()
}

pub fn compute_intermediates(inputs: &Inputs, params: &RunParameters) -> Result<Intermediates> {
    let corpus = &inputs.corpus;
    let (selected, selection) = select_top_cited(corpus, params.fraction).stage("select")?;
    log::info!(
        "selected {} of {} documents ({:.4} of citations)",
        selection.n_selected,
        selection.n_total,
        selection.share
    );
    let graph = build_citation_network(corpus, &selected).stage("network")?;
    let partition = greedy_modularity_clustering(&graph).stage("cluster")?;
    log::info!(
        "{} nodes, {} edges, {} clusters, Q = {:.4}",
        graph.node_count(),
        graph.edge_count(),
        partition.cluster_count(),
        partition.q()
    );
    let (annotations, labels) = match &inputs.vocab {
        Some(v) => {
            let a = annotate_network(corpus, &graph, v).stage("annotate")?;
            let labels = term_labels(v, &a);
            (a, labels)
        }
        None => (Vec::new(), BTreeMap::new()),
    };
    let tokens = tokenize_network(corpus, &graph, &inputs.stopwords, params.stem).stage("mine")?;
    let rates = rate_map(&annotations);
    let styles = node_styles(&graph, corpus, &rates, params).stage("report")?;
    let network = AnnotatedNetwork::assemble(graph, corpus, &partition, &rates, &styles).stage("report")?;
    Ok(Intermediates {
        selected,
        selection,
        network,
        annotations,
        term_labels: labels,
        tokens,
    })
}

/// The intermediate files keyed by file name.
pub fn intermediate_files(inter: &Intermediates, corpus: &Corpus) -> BTreeMap<String, String> {
    let mut files = BTreeMap::new();
    files.insert(
        SELECTION_FILE.to_string(),
        tables::selection_csv(&inter.selected, |id| {
            corpus.get(id).map_or(0, |d| d.times_cited_global)
        }),
    );
    files.insert(NETWORK_FILE.to_string(), to_graphml(&inter.network));
    files.insert(
        ANNOTATIONS_FILE.to_string(),
        tables::annotations_csv(&inter.annotations, &inter.term_labels),
    );
    files.insert(RATES_FILE.to_string(), tables::rates_csv(&inter.annotations));
    files.insert(TOKENS_FILE.to_string(), tables::tokens_csv(&inter.tokens));
    files
}

fn clusters_csv(summaries: &[ClusterSummary]) -> String {
    tables::render(
        &["cluster", "size", "intra_citations", "mean_clinical_rate", "leader", "leader_in_degree"],
        summaries.iter().map(|c| {
            let leader = c.leaders.first();
            vec![
                c.index.to_string(),
                c.size.to_string(),
                c.intra_citations.to_string(),
                c.mean_clinical_rate.map(|r| r.to_string()).unwrap_or_default(),
                leader.map(|l| l.doc_id.clone()).unwrap_or_default(),
                leader.map(|l| l.in_degree.to_string()).unwrap_or_default(),
            ]
        }),
    )
}

fn correspondence(
    table: &ContingencyTable,
    params: &RunParameters,
    files: &mut BTreeMap<String, String>,
) -> CorrespondenceSection {
    let mut section = CorrespondenceSection {
        cells: "document_presence".into(),
        min_doc_freq: params.min_doc_freq,
        words: table.cols(),
        result: None,
        skipped: None,
    };
    let keep: Vec<usize> = (0..table.rows()).filter(|&r| table.row_total(r) > 0).collect();
    let dropped: Vec<String> = (0..table.rows())
        .filter(|r| !keep.contains(r))
        .map(|r| table.row_labels()[r].clone())
        .collect();
    let attempt = table
        .select_rows(&keep)
        .and_then(|t| correspondence_analysis(&t, params.ca_dims).map(|ca| (t, ca)));
    match attempt {
        Ok((t, ca)) => {
            files.insert("ca_coordinates.csv".into(), tables::ca_coordinates_csv(&t, &ca));
            if params.ca_svg {
                files.insert("ca_plot.svg".into(), ca_plot_svg(&t, &ca));
            }
            section.result = Some(CaSummary {
                rows: t.row_labels().to_vec(),
                dropped_rows: dropped,
                columns: t.cols(),
                grand_total: t.grand_total(),
                total_inertia: ca.total_inertia,
                singular_values: ca.singular_values,
                explained: ca.explained,
            });
        }
        Err(e) => {
            log::warn!("correspondence analysis skipped: {e}");
            section.skipped = Some(e.to_string());
        }
    }
    section
}

fn dense_section(
    corpus: &Corpus,
    graph: &CitationGraph,
    params: &RunParameters,
    files: &mut BTreeMap<String, String>,
) -> Result<DenseSummary> {
    let weighting = vertex_weights_with(graph, params.neighborhood);
    let regions = find_dense_regions(
        graph,
        &weighting,
        DenseParams {
            vwp: params.vwp,
            haircut: params.haircut,
        },
    )?;
    files.insert(
        "regions.csv".into(),
        tables::regions_csv(&regions, |id| weighting.get(id).unwrap_or(0.0)),
    );
    let mut summaries = Vec::with_capacity(regions.len());
    for (i, r) in regions.iter().enumerate() {
        let assignees = leading_assignees(corpus, r)?;
        if i == 0 {
            files.insert("assignees.csv".into(), tables::counts_csv("assignee", &assignees));
        }
        summaries.push(RegionSummary {
            rank: i + 1,
            members: r.members.clone(),
            seed: r.seed.clone(),
            score: r.score,
            density: r.density,
            assignees: named_counts(assignees),
        });
    }
    Ok(DenseSummary {
        neighborhood: params.neighborhood,
        vwp: params.vwp,
        haircut: params.haircut,
        isolates: graph.isolate_count(),
        regions: summaries,
    })
}

/// Derives every table and the report from the intermediates. The report's
/// timestamp is left at 0.
pub fn derive_outputs(
    inter: &Intermediates,
    corpus: &Corpus,
    params: &RunParameters,
    inputs: &InputSummary,
) -> Result<(RunReport, BTreeMap<String, String>)> {
    let graph = &inter.network.graph;
    let partition = Partition::from_labels(graph, &inter.network.cluster_labels()).stage("cluster")?;
    let mut files = BTreeMap::new();

    files.insert("partition.csv".to_string(), tables::partition_csv(graph.nodes(), partition.labels()));
    let full = aggregate_clusters(graph, &partition, 0).stage("cluster")?;
    let shown = aggregate_clusters(graph, &partition, params.edge_threshold).stage("cluster")?;
    files.insert("cluster_edges.csv".into(), tables::cluster_edges_csv(&shown));
    files.insert("cluster_graph.dot".into(), cluster_graph_dot(&shown));
    files.insert("network.dot".into(), to_dot(&inter.network));

    let by_id: HashMap<&str, &DocumentAnnotation> =
        inter.annotations.iter().map(|a| (a.doc_id.as_str(), a)).collect();
    let have_rates = !inter.annotations.is_empty();
    let indeg = in_degree(graph, None).stage("report")?;
    let table = build_contingency(&inter.tokens, &partition, params.min_doc_freq).stage("mine")?;

    let mut term_tables: Vec<ClusterTermTable> = Vec::new();
    let mut word_lists: Vec<(usize, Vec<DistinctiveWord>)> = Vec::new();
    let mut summaries = Vec::new();
    for c in 0..partition.cluster_count() {
        let members = partition.member_ids(c);
        let annotations: Vec<&DocumentAnnotation> =
            members.iter().filter_map(|id| by_id.get(id.as_str()).copied()).collect();
        let mean = if have_rates {
            if annotations.len() != members.len() {
                return Err(Error::Inconsistent(format!("cluster {c} has unannotated members"))).stage("annotate");
            }
            Some(mean_clinical_rate(annotations.iter().copied()).stage("annotate")?)
        } else {
            None
        };
        let terms = term_table_with_labels(c, annotations.iter().copied(), params.term_cutoff, |t| {
            inter.term_labels.get(t).cloned().unwrap_or_else(|| t.to_string())
        });
        let words = distinctive_words(&table, c, params.top_words).stage("mine")?;

        let mut leaders: Vec<Leader> = members
            .iter()
            .map(|id| Leader {
                doc_id: id.clone(),
                title: corpus.get(id).map(|d| d.title.clone()).unwrap_or_default(),
                in_degree: indeg[id],
            })
            .collect();
        leaders.sort_by(|a, b| b.in_degree.cmp(&a.in_degree).then_with(|| a.doc_id.cmp(&b.doc_id)));
        leaders.truncate(REPORT_TOP_LEADERS);

        summaries.push(ClusterSummary {
            index: c,
            size: partition.sizes()[c],
            intra_citations: full.clusters[c].intra_citations,
            mean_clinical_rate: mean,
            leaders,
            top_terms: terms.rows.iter().take(REPORT_TOP_TERMS).cloned().collect(),
            distinctive_words: words.clone(),
        });
        term_tables.push(terms);
        word_lists.push((c, words));
    }
    files.insert("clusters.csv".into(), clusters_csv(&summaries));
    if have_rates {
        files.insert("term_tables.csv".into(), tables::term_tables_csv(&term_tables));
    }
    files.insert("distinctive_words.csv".into(), tables::distinctive_words_csv(&word_lists));

    let correspondence = correspondence(&table, params, &mut files);

    let mut countries: Vec<(String, usize)> = country_counts(corpus, graph.nodes())
        .stage("report")?
        .into_iter()
        .collect();
    countries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    files.insert("countries.csv".into(), tables::counts_csv("country", &countries));

    let dense = match corpus.kind() {
        DocumentKind::PatentFamily => Some(dense_section(corpus, graph, params, &mut files).stage("dense")?),
        DocumentKind::Paper => None,
    };

    let rates: HashMap<String, f64> = rate_map(&inter.annotations);
    let mut file_names: Vec<String> = files.keys().cloned().collect();
    file_names.extend(intermediate_names(inter));
    file_names.push(REPORT_FILE.to_string());
    file_names.sort();

    let report = RunReport {
        tool: TOOL_NAME.into(),
        version: crate::VERSION.into(),
        generated_at_unix: 0,
        parameters: params.clone(),
        inputs: inputs.clone(),
        selection: inter.selection.clone(),
        network: NetworkSummary {
            selected: inter.selected.len(),
            nodes: graph.node_count(),
            edges: graph.edge_count(),
            isolates: graph.isolate_count(),
        },
        clustering: ClusteringSummary {
            method: "greedy_modularity".into(),
            symmetrized: true,
            modularity: partition.q(),
            clusters: partition.cluster_count(),
        },
        clusters: summaries,
        cluster_graph: shown,
        countries: named_counts(countries),
        correspondence,
        dense,
        legend: Legend {
            low_color: LOW_COLOR.into(),
            high_color: HIGH_COLOR.into(),
            color_direction: params.color_direction,
            color_scale_max_rate: max_rate(graph, &rates),
            size_by: params.size_by,
            layout: "fruchterman_reingold".into(),
            layout_iterations: params.layout_iterations,
            layout_seed: params.seed,
        },
        files: file_names,
    };
    Ok((report, files))
}

fn intermediate_names(_inter: &Intermediates) -> Vec<String> {
    [SELECTION_FILE, NETWORK_FILE, ANNOTATIONS_FILE, RATES_FILE, TOKENS_FILE]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// Exclusive ownership of an output directory, released on drop.
#[derive(Debug)]
pub struct OutputLock {
    path: PathBuf,
    _file: File,
}

impl OutputLock {
    pub fn acquire(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(LOCK_FILE);
        let file = OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
            .map_err(|e| match e.kind() {
                std::io::ErrorKind::AlreadyExists => Error::Locked(path.clone()),
                _ => Error::io(&path, e),
            })?;
        Ok(OutputLock { path, _file: file })
    }
}

impl Drop for OutputLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

pub(crate) fn write_files(dir: &Path, files: &BTreeMap<String, String>) -> Result<()> {
    for (name, content) in files {
        let path = dir.join(name);
        fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Runs every stage and writes all outputs into `config.out`.
pub fn run_pipeline(config: &RunConfig) -> Result<RunReport> {
    let _lock = OutputLock::acquire(&config.out)?;
    let inputs = load_inputs(config)?;
    let inter = compute_intermediates(&inputs, &config.params)?;
    write_files(&config.out, &intermediate_files(&inter, &inputs.corpus))?;
    let (mut report, files) = derive_outputs(&inter, &inputs.corpus, &config.params, &inputs.summary)?;
    write_files(&config.out, &files)?;
    report.generated_at_unix = now_unix();
    let path = config.out.join(REPORT_FILE);
    fs::write(&path, report.to_json()).map_err(|e| Error::io(&path, e))?;
    Ok(report)
}
