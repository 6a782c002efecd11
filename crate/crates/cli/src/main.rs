use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use frontmap::cluster::greedy_modularity_clustering;
use frontmap::dense::{find_dense_regions, leading_assignees, vertex_weights_with, DenseParams, Neighborhood};
use frontmap::netbuild::{build_citation_network, select_top_cited};
use frontmap::report::pipeline::{annotate_network, compute_intermediates, tokenize_network, Inputs};
use frontmap::report::{
    load_inputs, run_pipeline, to_dot, to_graphml, tables, verify_run, ColorDirection, OutputLock, RunConfig,
    RunParameters, SizeBy,
};
use frontmap::textmine::{build_contingency, correspondence_analysis, distinctive_words};
use frontmap::{DocumentKind, Error, ErrorClass, Result};

#[derive(Parser)]
#[command(name = "frontmap", version, about = "Map research fronts in citation corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus (and vocabulary) and print a summary.
    Ingest(Common),
    /// Select the most-cited documents.
    Select(Common),
    /// Build the citation network among the selected documents.
    Network(Common),
    /// Cluster the network by greedy modularity.
    Cluster(Common),
    /// Annotate network documents against the vocabulary.
    Annotate(Common),
    /// Tokenize abstracts, rank distinctive words, run correspondence analysis.
    Mine(Common),
    /// Find dense regions in a patent-family network.
    Dense(Common),
    /// Run the whole pipeline and write every output and the run report.
    Report(Common),
    /// Recompute a finished run from its intermediates and compare outputs.
    Verify(VerifyArgs),
    /// Write the annotated network as GraphML and DOT.
    Export(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Paper,
    Patent,
}

#[derive(Clone, Copy, ValueEnum)]
enum SizeArg {
    InDegree,
    GlobalCitations,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorArg {
    BlueLow,
    RedLow,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum, default_value = "paper")]
    kind: KindArg,
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long, default_value_t = 0.2)]
    fraction: f64,
    #[arg(long, default_value_t = 30)]
    edge_threshold: usize,
    #[arg(long, default_value_t = 10)]
    top_words: usize,
    #[arg(long, default_value_t = 0.2)]
    vwp: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output directory; subcommands other than `report` and `export` only
    /// print a summary when it is omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Comma-separated root labels whose descendants count as clinical.
    #[arg(long, value_delimiter = ',')]
    clinical_roots: Option<Vec<String>>,
    #[arg(long, default_value_t = 2)]
    min_doc_freq: usize,
    #[arg(long, default_value_t = 2)]
    term_cutoff: usize,
    #[arg(long, default_value_t = 2)]
    ca_dims: usize,
    /// Apply Snowball stemming before counting words.
    #[arg(long)]
    stem: bool,
    #[arg(long, value_enum, default_value = "in-degree")]
    size_by: SizeArg,
    #[arg(long, value_enum, default_value = "blue-low")]
    color: ColorArg,
    /// Weight dense-region vertices by their open neighborhood.
    #[arg(long)]
    open_neighborhood: bool,
    #[arg(long)]
    no_haircut: bool,
    /// Also write an SVG scatter of the correspondence analysis.
    #[arg(long)]
    ca_svg: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Directory of a finished run.
    #[arg(long)]
    out: PathBuf,
}

impl Common {
    fn config(&self) -> RunConfig {
        let kind = match self.kind {
            KindArg::Paper => DocumentKind::Paper,
            KindArg::Patent => DocumentKind::PatentFamily,
        };
        RunConfig {
            corpus: self.corpus.clone(),
            kind,
            vocab: self.vocab.clone(),
            stopwords: self.stopwords.clone(),
            clinical_roots: self.clinical_roots.clone(),
            out: self.out.clone().unwrap_or_else(|| PathBuf::from("frontmap-out")),
            params: RunParameters {
                fraction: self.fraction,
                edge_threshold: self.edge_threshold,
                top_words: self.top_words,
                vwp: self.vwp,
                haircut: !self.no_haircut,
                seed: self.seed,
                min_doc_freq: self.min_doc_freq,
                term_cutoff: self.term_cutoff,
                ca_dims: self.ca_dims,
                stem: self.stem,
                size_by: match self.size_by {
                    SizeArg::InDegree => SizeBy::InDegree,
                    SizeArg::GlobalCitations => SizeBy::GlobalCitations,
                },
                color_direction: match self.color {
                    ColorArg::BlueLow => ColorDirection::BlueLowRedHigh,
                    ColorArg::RedLow => ColorDirection::RedLowBlueHigh,
                },
                neighborhood: if self.open_neighborhood {
                    Neighborhood::Open
                } else {
                    Neighborhood::Closed
                },
                layout_iterations: frontmap::report::DEFAULT_LAYOUT_ITERATIONS,
                ca_svg: self.ca_svg,
            },
        }
    }
}

/// Writes `files` into `dir` while holding its lock.
fn write_outputs(dir: Option<&Path>, files: BTreeMap<String, String>) -> Result<()> {
    let Some(dir) = dir else { return Ok(()) };
    let _lock = OutputLock::acquire(dir)?;
    for (name, content) in files {
        let path = dir.join(name);
        fs::write(&path, content).map_err(|e| Error::Io { path, source: e })?;
    }
    Ok(())
}

/// Writes a JSON summary to stdout. A closed pipe is not an error: the
/// files, if any, are written regardless.
fn print(value: serde_json::Value) {
    let text = serde_json::to_string_pretty(&value).expect("json value");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn selection_and_graph(inputs: &Inputs, params: &RunParameters) -> Result<(Vec<String>, frontmap::SelectionReport, frontmap::CitationGraph)> {
    let (ids, report) = select_top_cited(&inputs.corpus, params.fraction)?;
    let graph = build_citation_network(&inputs.corpus, &ids)?;
    Ok((ids, report, graph))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(c) => {
            let inputs = load_inputs(&c.config())?;
            print(json!({ "inputs": inputs.summary, "vocabulary_terms": inputs.vocab.as_ref().map(|v| v.len()) }));
            write_outputs(
                c.out.as_deref(),
                BTreeMap::from([("corpus.jsonl".to_string(), inputs.corpus.to_jsonl())]),
            )
        }
        Command::Select(c) => {
            let config = c.config();
            let inputs = load_inputs(&config)?;
            let (ids, report) = select_top_cited(&inputs.corpus, config.params.fraction)?;
            print(json!({ "selection": report, "selected": ids }));
            let csv = tables::selection_csv(&ids, |id| inputs.corpus.get(id).map_or(0, |d| d.times_cited_global));
            write_outputs(c.out.as_deref(), BTreeMap::from([("selection.csv".to_string(), csv)]))
        }
        Command::Network(c) => {
            let config = c.config();
            let inputs = load_inputs(&config)?;
            let (ids, _, graph) = selection_and_graph(&inputs, &config.params)?;
            print(json!({
                "selected": ids.len(),
                "nodes": graph.node_count(),
                "edges": graph.edge_count(),
                "isolates": graph.isolate_count(),
            }));
            let csv = tables::edges_csv(&graph);
            write_outputs(c.out.as_deref(), BTreeMap::from([("edges.csv".to_string(), csv)]))
        }
        Command::Cluster(c) => {
            let config = c.config();
            let inputs = load_inputs(&config)?;
            let (_, _, graph) = selection_and_graph(&inputs, &config.params)?;
            let p = greedy_modularity_clustering(&graph)?;
            print(json!({ "modularity": p.q(), "clusters": p.cluster_count(), "sizes": p.sizes() }));
            write_outputs(
                c.out.as_deref(),
                BTreeMap::from([("partition.csv".to_string(), tables::partition_csv(p.nodes(), p.labels()))]),
            )
        }
        Command::Annotate(c) => {
            let config = c.config();
            let inputs = load_inputs(&config)?;
            let vocab = inputs
                .vocab
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("annotate needs --vocab".into()))?;
            let (_, _, graph) = selection_and_graph(&inputs, &config.params)?;
            let annotations = annotate_network(&inputs.corpus, &graph, vocab)?;
            let rates: BTreeMap<&str, f64> =
                annotations.iter().map(|a| (a.doc_id.as_str(), a.clinical_rate)).collect();
            print(json!({ "documents": annotations.len(), "clinical_rates": rates }));
            let labels = annotations
                .iter()
                .flat_map(|a| &a.terms)
                .map(|t| {
                    let label = vocab.index_of(t).map(|i| vocab.term(i).label.clone()).unwrap_or_default();
                    (t.clone(), label)
                })
                .collect();
            write_outputs(
                c.out.as_deref(),
                BTreeMap::from([
                    ("annotations.csv".to_string(), tables::annotations_csv(&annotations, &labels)),
                    ("rates.csv".to_string(), tables::rates_csv(&annotations)),
                ]),
            )
        }
        Command::Mine(c) => {
            let config = c.config();
            let params = &config.params;
            let inputs = load_inputs(&config)?;
            let (_, _, graph) = selection_and_graph(&inputs, params)?;
            let p = greedy_modularity_clustering(&graph)?;
            let tokens = tokenize_network(&inputs.corpus, &graph, &inputs.stopwords, params.stem)?;
            let table = build_contingency(&tokens, &p, params.min_doc_freq)?;
            let mut lists = Vec::new();
            for k in 0..p.cluster_count() {
                lists.push((k, distinctive_words(&table, k, params.top_words)?));
            }
            let mut files = BTreeMap::from([
                ("tokens.csv".to_string(), tables::tokens_csv(&tokens)),
                ("distinctive_words.csv".to_string(), tables::distinctive_words_csv(&lists)),
            ]);
            let keep: Vec<usize> = (0..table.rows()).filter(|&r| table.row_total(r) > 0).collect();
            let ca = table
                .select_rows(&keep)
                .and_then(|t| correspondence_analysis(&t, params.ca_dims).map(|ca| (t, ca)));
            let ca_json = match ca {
                Ok((t, ca)) => {
                    files.insert("ca_coordinates.csv".into(), tables::ca_coordinates_csv(&t, &ca));
                    json!({ "total_inertia": ca.total_inertia, "singular_values": ca.singular_values })
                }
                Err(e) => json!({ "skipped": e.to_string() }),
            };
            let words: Vec<_> = lists
                .iter()
                .map(|(k, w)| json!({ "cluster": k, "words": w.iter().map(|w| &w.display).collect::<Vec<_>>() }))
                .collect();
            print(json!({ "words": table.cols(), "distinctive": words, "correspondence": ca_json }));
            write_outputs(c.out.as_deref(), files)
        }
        Command::Dense(c) => {
            let config = c.config();
            let params = &config.params;
            let inputs = load_inputs(&config)?;
            let (_, _, graph) = selection_and_graph(&inputs, params)?;
            let weighting = vertex_weights_with(&graph, params.neighborhood);
            let regions = find_dense_regions(
                &graph,
                &weighting,
                DenseParams {
                    vwp: params.vwp,
                    haircut: params.haircut,
                },
            )?;
            let mut summary = Vec::new();
            for r in &regions {
                let assignees = leading_assignees(&inputs.corpus, r)?;
                summary.push(json!({ "region": r, "assignees": assignees }));
            }
            print(json!({ "isolates": graph.isolate_count(), "regions": summary }));
            let csv = tables::regions_csv(&regions, |id| weighting.get(id).unwrap_or(0.0));
            write_outputs(c.out.as_deref(), BTreeMap::from([("regions.csv".to_string(), csv)]))
        }
        Command::Report(c) => {
            let report = run_pipeline(&c.config())?;
            let best = report.most_clinical_cluster().map(|c| (c.index, c.mean_clinical_rate));
            print(json!({
                "out": c.config().out,
                "selected": report.network.selected,
                "edges": report.network.edges,
                "clusters": report.clustering.clusters,
                "modularity": report.clustering.modularity,
                "most_clinical_cluster": best,
            }));
            Ok(())
        }
        Command::Verify(v) => {
            let summary = verify_run(&v.out)?;
            print(json!({ "verified": true, "files_compared": summary.files_compared, "checks": summary.checks }));
            Ok(())
        }
        Command::Export(c) => {
            let config = c.config();
            let inputs = load_inputs(&config)?;
            let inter = compute_intermediates(&inputs, &config.params)?;
            let rates: HashMap<&str, f64> =
                inter.annotations.iter().map(|a| (a.doc_id.as_str(), a.clinical_rate)).collect();
            print(json!({
                "nodes": inter.network.graph.node_count(),
                "edges": inter.network.graph.edge_count(),
                "annotated": rates.len(),
            }));
            write_outputs(
                Some(&config.out),
                BTreeMap::from([
                    ("network.graphml".to_string(), to_graphml(&inter.network)),
                    ("network.dot".to_string(), to_dot(&inter.network)),
                ]),
            )
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Validation => 2,
        ErrorClass::Io => 3,
        ErrorClass::VerifyMismatch => 4,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::VerifyMismatch { mismatches } = &e {
                for m in mismatches {
                    eprintln!("  {m}");
                }
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
