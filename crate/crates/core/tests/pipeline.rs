use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use frontmap::corpus::{Corpus, DocumentKind, DocumentRecord};
use frontmap::report::{run_pipeline, to_graphml, verify_run, AnnotatedNetwork, NodeAttributes, NodeStyle, RunConfig};
use frontmap::synth::{papers_60, patents_102, vocab_mesh_like};
use frontmap::{CitationGraph, Error, ErrorClass};
use quick_xml::events::Event;
use quick_xml::Reader;

struct Workspace {
    _dir: tempfile::TempDir,
    root: PathBuf,
    corpus: PathBuf,
    vocab: PathBuf,
}

fn workspace() -> Workspace {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_path_buf();
    let corpus = root.join("papers.jsonl");
    let vocab = root.join("vocab.json");
    papers_60().save(&corpus).unwrap();
    fs::write(&vocab, vocab_mesh_like().to_json()).unwrap();
    Workspace { _dir: dir, root, corpus, vocab }
}

fn paper_config(ws: &Workspace, out: &str) -> RunConfig {
    let mut config = RunConfig::new(&ws.corpus, DocumentKind::Paper, ws.root.join(out));
    config.vocab = Some(ws.vocab.clone());
    config
}

fn mismatches(err: Error) -> Vec<String> {
    match err {
        Error::VerifyMismatch { mismatches } => mismatches,
        other => panic!("expected a verification mismatch, got {other}"),
    }
}

#[test]
fn verify_accepts_untouched_run() {
    let ws = workspace();
    let config = paper_config(&ws, "run");
    let report = run_pipeline(&config).unwrap();
    let summary = verify_run(&config.out).unwrap();
    // Five intermediates are checked by recomputation, everything else byte for byte.
    assert_eq!(summary.files_compared, report.files.len() - 5);
}

#[test]
fn verify_flags_edited_derived_file() {
    let ws = workspace();
    let config = paper_config(&ws, "run");
    run_pipeline(&config).unwrap();
    let path = config.out.join("partition.csv");
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("extra,0\n");
    fs::write(&path, text).unwrap();
    let found = mismatches(verify_run(&config.out).unwrap_err());
    assert!(found.iter().any(|m| m.starts_with("partition.csv")), "{found:?}");
}

#[test]
fn verify_flags_changed_corpus() {
    let ws = workspace();
    let config = paper_config(&ws, "run");
    run_pipeline(&config).unwrap();
    let mut text = fs::read_to_string(&ws.corpus).unwrap();
    text.push('\n');
    fs::write(&ws.corpus, text).unwrap();
    let found = mismatches(verify_run(&config.out).unwrap_err());
    assert!(found.iter().any(|m| m.starts_with("corpus digest changed")), "{found:?}");
}

#[test]
fn verify_flags_edited_cluster_labels() {
    let ws = workspace();
    let config = paper_config(&ws, "run");
    run_pipeline(&config).unwrap();
    let path = config.out.join("network.graphml");
    let text = fs::read_to_string(&path).unwrap();
    let edited = text.replacen("<data key=\"cluster\">0</data>", "<data key=\"cluster\">1</data>", 1);
    assert_ne!(edited, text);
    fs::write(&path, edited).unwrap();
    let found = mismatches(verify_run(&config.out).unwrap_err());
    assert!(found.iter().any(|m| m.contains("greedy clustering")), "{found:?}");
}

#[test]
fn held_lock_blocks_a_second_run() {
    let ws = workspace();
    let config = paper_config(&ws, "run");
    fs::create_dir_all(&config.out).unwrap();
    fs::write(config.out.join(".frontmap.lock"), "").unwrap();
    let err = run_pipeline(&config).unwrap_err();
    assert!(matches!(err, Error::Locked(_)), "{err}");
    assert_eq!(err.class(), ErrorClass::Io);
    assert!(!config.out.join("report.json").exists());
}

#[test]
fn lock_is_released_after_a_run() {
    let ws = workspace();
    let config = paper_config(&ws, "run");
    run_pipeline(&config).unwrap();
    assert!(!config.out.join(".frontmap.lock").exists());
    run_pipeline(&config).unwrap();
}

#[test]
fn failures_name_their_stage() {
    let ws = workspace();
    let bad = ws.root.join("bad.jsonl");
    fs::write(&bad, "{\"id\": \"x\"\n").unwrap();
    let err = run_pipeline(&RunConfig::new(&bad, DocumentKind::Paper, ws.root.join("a"))).unwrap_err();
    assert!(err.to_string().starts_with("stage ingest:"), "{err}");
    assert_eq!(err.class(), ErrorClass::Validation);

    let mut config = paper_config(&ws, "b");
    config.params.fraction = 0.0;
    let err = run_pipeline(&config).unwrap_err();
    assert!(err.to_string().contains("select"), "{err}");

    let err = run_pipeline(&RunConfig::new(ws.root.join("missing.jsonl"), DocumentKind::Paper, ws.root.join("c")))
        .unwrap_err();
    assert_eq!(err.class(), ErrorClass::Io);
}

#[test]
fn patent_corpus_rejected_as_papers() {
    let ws = workspace();
    let patents = ws.root.join("patents.jsonl");
    patents_102().save(&patents).unwrap();
    let err = run_pipeline(&RunConfig::new(&patents, DocumentKind::Paper, ws.root.join("p"))).unwrap_err();
    assert_eq!(err.class(), ErrorClass::Validation);
}

fn three_node_network() -> AnnotatedNetwork {
    let doc = |id: &str| DocumentRecord {
        id: id.to_string(),
        kind: DocumentKind::Paper,
        title: format!("Paper {id}"),
        abstract_text: String::new(),
        year: 2001,
        authors: vec![],
        assignees: vec![],
        venue: None,
        times_cited_global: 1,
        references: vec![],
    };
    let corpus = Corpus::new(DocumentKind::Paper, vec![doc("a"), doc("b"), doc("c")], "t").unwrap();
    let graph = CitationGraph::new(DocumentKind::Paper, vec!["a".into(), "b".into(), "c".into()], [("b", "a"), ("c", "a")])
        .unwrap();
    let nodes = ["a", "b", "c"]
        .iter()
        .enumerate()
        .map(|(i, id)| NodeAttributes {
            label: corpus.get(id).unwrap().title.clone(),
            year: 2001,
            cluster: usize::from(i == 2),
            clinical_rate: 0.25 * i as f64,
            style: NodeStyle {
                id: id.to_string(),
                color: "#0000FF".into(),
                x: i as f64,
                y: -(i as f64),
                size: 2.0,
            },
        })
        .collect();
    AnnotatedNetwork { graph, nodes }
}

#[derive(Default)]
struct GraphmlShape {
    keys: HashMap<String, (String, String)>,
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
    data_keys: BTreeSet<String>,
    edgedefault: Option<String>,
}

fn shape(text: &str) -> GraphmlShape {
    let mut reader = Reader::from_str(text);
    let mut out = GraphmlShape::default();
    let attr = |e: &quick_xml::events::BytesStart, name: &str| {
        e.attributes()
            .flatten()
            .find(|a| a.key.as_ref() == name)
            .map(|a| a.normalized_value(quick_xml::XmlVersion::Implicit1_0).unwrap().into_owned())
    };
    loop {
        match reader.read_event().unwrap() {
            Event::Start(e) | Event::Empty(e) => match e.name().as_ref() {
                "key" => {
                    out.keys.insert(
                        attr(&e, "id").unwrap(),
                        (attr(&e, "for").unwrap(), attr(&e, "attr.type").unwrap()),
                    );
                }
                "graph" => out.edgedefault = attr(&e, "edgedefault"),
                "node" => out.nodes.push(attr(&e, "id").unwrap()),
                "edge" => out.edges.push((attr(&e, "source").unwrap(), attr(&e, "target").unwrap())),
                "data" => {
                    out.data_keys.insert(attr(&e, "key").unwrap());
                }
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
    }
    out
}

#[test]
fn graphml_has_expected_structure() {
    let net = three_node_network();
    let text = to_graphml(&net);
    assert!(text.starts_with("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\""));
    let s = shape(&text);
    assert_eq!(s.edgedefault.as_deref(), Some("directed"));
    assert_eq!(s.nodes, ["a", "b", "c"]);
    assert_eq!(s.edges, [("b".to_string(), "a".to_string()), ("c".to_string(), "a".to_string())]);
    for key in &s.data_keys {
        assert!(s.keys.contains_key(key), "data key {key} is not declared");
    }
    let expect = [
        ("label", "node", "string"),
        ("year", "node", "int"),
        ("cluster", "node", "int"),
        ("clinical_rate", "node", "double"),
        ("color", "node", "string"),
        ("x", "node", "double"),
        ("y", "node", "double"),
        ("size", "node", "double"),
        ("weight", "edge", "int"),
    ];
    for (id, scope, ty) in expect {
        assert_eq!(s.keys.get(id), Some(&(scope.to_string(), ty.to_string())), "key {id}");
    }
}

#[test]
fn graphml_counts_match_pipeline_network() {
    let ws = workspace();
    let config = paper_config(&ws, "run");
    let report = run_pipeline(&config).unwrap();
    let text = fs::read_to_string(config.out.join("network.graphml")).unwrap();
    let s = shape(&text);
    assert_eq!(s.nodes.len(), report.network.nodes);
    assert_eq!(s.edges.len(), report.network.edges);
    let ids: BTreeSet<&str> = s.nodes.iter().map(String::as_str).collect();
    assert!(s.edges.iter().all(|(a, b)| ids.contains(a.as_str()) && ids.contains(b.as_str())));
}

fn listed(dir: &Path) -> BTreeSet<String> {
    fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect()
}

#[test]
fn report_lists_every_written_file() {
    let ws = workspace();
    let config = paper_config(&ws, "run");
    let report = run_pipeline(&config).unwrap();
    let on_disk = listed(&config.out);
    let in_report: BTreeSet<String> = report.files.iter().cloned().collect();
    assert_eq!(on_disk, in_report);
}
