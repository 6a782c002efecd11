//! GraphML and DOT writers for annotated citation networks, and a GraphML
//! reader for the files this crate writes.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use quick_xml::escape::{escape, unescape};
use quick_xml::events::{BytesStart, Event};
use quick_xml::{Reader, XmlVersion};

use super::style::NodeStyle;
use crate::cluster::{ClusterGraph, Partition};
use crate::corpus::{Corpus, DocumentKind};
use crate::error::{Error, Result};
use crate::netbuild::CitationGraph;

pub const GRAPHML_NS: &str = "http://graphml.graphdrawing.org/xmlns";

#[derive(Debug, Clone, PartialEq)]
pub struct NodeAttributes {
    pub label: String,
    pub year: i32,
    pub cluster: usize,
    pub clinical_rate: f64,
    pub style: NodeStyle,
}

/// A citation graph with per-node display and analysis attributes,
/// aligned with the graph's node order.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedNetwork {
    pub graph: CitationGraph,
    pub nodes: Vec<NodeAttributes>,
}

impl AnnotatedNetwork {
    /// Joins the pieces, checking they all describe the same node set.
    pub fn assemble(
        graph: CitationGraph,
        corpus: &Corpus,
        partition: &Partition,
        rates: &HashMap<String, f64>,
        styles: &[NodeStyle],
    ) -> Result<Self> {
        if !partition.covers(&graph) {
            return Err(Error::Inconsistent("partition node set differs from graph".into()));
        }
        if styles.len() != graph.node_count() {
            return Err(Error::Inconsistent(format!(
                "{} styles for {} nodes",
                styles.len(),
                graph.node_count()
            )));
        }
        let mut nodes = Vec::with_capacity(graph.node_count());
        for (i, id) in graph.nodes().iter().enumerate() {
            let doc = corpus.get(id).ok_or_else(|| Error::UnknownNode(id.clone()))?;
            if styles[i].id != *id {
                return Err(Error::Inconsistent(format!("style for {:?} at node {id:?}", styles[i].id)));
            }
            nodes.push(NodeAttributes {
                label: doc.title.clone(),
                year: doc.year,
                cluster: partition.labels()[i],
                clinical_rate: rates.get(id).copied().unwrap_or(0.0),
                style: styles[i].clone(),
            });
        }
        Ok(AnnotatedNetwork { graph, nodes })
    }

    pub fn cluster_labels(&self) -> Vec<usize> {
        self.nodes.iter().map(|n| n.cluster).collect()
    }
}

const NODE_KEYS: [(&str, &str); 8] = [
    ("label", "string"),
    ("year", "int"),
    ("cluster", "int"),
    ("clinical_rate", "double"),
    ("color", "string"),
    ("x", "double"),
    ("y", "double"),
    ("size", "double"),
];

pub fn to_graphml(net: &AnnotatedNetwork) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<graphml xmlns=\"{GRAPHML_NS}\" xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"{GRAPHML_NS} {GRAPHML_NS}/1.0/graphml.xsd\">"
    );
    s.push_str("  <key id=\"kind\" for=\"graph\" attr.name=\"kind\" attr.type=\"string\"/>\n");
    for (name, ty) in NODE_KEYS {
        let _ = writeln!(s, "  <key id=\"{name}\" for=\"node\" attr.name=\"{name}\" attr.type=\"{ty}\"/>");
    }
    s.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n");
    s.push_str("  <graph id=\"G\" edgedefault=\"directed\">\n");
    let _ = writeln!(s, "    <data key=\"kind\">{}</data>", net.graph.kind());
    for (id, a) in net.graph.nodes().iter().zip(&net.nodes) {
        let _ = writeln!(s, "    <node id=\"{}\">", escape(id.as_str()));
        let values = [
            escape(a.label.as_str()).into_owned(),
            a.year.to_string(),
            a.cluster.to_string(),
            a.clinical_rate.to_string(),
            a.style.color.clone(),
            a.style.x.to_string(),
            a.style.y.to_string(),
            a.style.size.to_string(),
        ];
        for ((key, _), v) in NODE_KEYS.iter().zip(values) {
            let _ = writeln!(s, "      <data key=\"{key}\">{v}</data>");
        }
        s.push_str("    </node>\n");
    }
    for (i, (src, dst)) in net.graph.edge_ids().enumerate() {
        let _ = writeln!(
            s,
            "    <edge id=\"e{i}\" source=\"{}\" target=\"{}\"><data key=\"weight\">1</data></edge>",
            escape(src),
            escape(dst)
        );
    }
    s.push_str("  </graph>\n</graphml>\n");
    s
}

pub fn write_graphml(net: &AnnotatedNetwork, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_graphml(net)).map_err(|e| Error::io(path, e))
}

/// Writes `graph` with its partition, rates and styles as GraphML.
pub fn export_graphml(
    graph: &CitationGraph,
    corpus: &Corpus,
    partition: &Partition,
    rates: &HashMap<String, f64>,
    styles: &[NodeStyle],
    path: impl AsRef<Path>,
) -> Result<()> {
    let net = AnnotatedNetwork::assemble(graph.clone(), corpus, partition, rates, styles)?;
    write_graphml(&net, path)
}

fn attr(e: &BytesStart<'_>, name: &str) -> Result<Option<String>> {
    for a in e.attributes() {
        let a = a.map_err(|err| Error::GraphMl(err.to_string()))?;
        if a.key.as_ref() == name {
            let v = a
                .normalized_value(XmlVersion::Implicit1_0)
                .map_err(|err| Error::GraphMl(err.to_string()))?;
            return Ok(Some(v.into_owned()));
        }
    }
    Ok(None)
}

fn required(e: &BytesStart<'_>, name: &str) -> Result<String> {
    attr(e, name)?.ok_or_else(|| {
        Error::GraphMl(format!(
            "<{}> lacks attribute {name:?}",
            e.name().as_ref()
        ))
    })
}

#[derive(Default)]
struct PendingNode {
    id: String,
    data: HashMap<String, String>,
}

/// Parses GraphML written by [`to_graphml`]. Data keys are resolved through
/// their `attr.name`, so key ids may differ.
pub fn parse_graphml(text: &str) -> Result<AnnotatedNetwork> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(false);

    let mut key_names: HashMap<String, String> = HashMap::new();
    let mut kind: Option<DocumentKind> = None;
    let mut nodes: Vec<PendingNode> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut current: Option<PendingNode> = None;
    let mut data_key: Option<String> = None;
    let mut text_buf = String::new();

    loop {
        let event = reader
            .read_event()
            .map_err(|e| Error::GraphMl(format!("at byte {}: {e}", reader.buffer_position())))?;
        match event {
            Event::Start(e) | Event::Empty(e) if e.name().as_ref() == "key" => {
                let id = required(&e, "id")?;
                let name = attr(&e, "attr.name")?.unwrap_or_else(|| id.clone());
                key_names.insert(id, name);
            }
            Event::Start(e) if e.name().as_ref() == "node" => {
                current = Some(PendingNode {
                    id: required(&e, "id")?,
                    ..Default::default()
                });
            }
            Event::Empty(e) if e.name().as_ref() == "node" => {
                nodes.push(PendingNode {
                    id: required(&e, "id")?,
                    ..Default::default()
                });
            }
            Event::End(e) if e.name().as_ref() == "node" => {
                if let Some(n) = current.take() {
                    nodes.push(n);
                }
            }
            Event::Start(e) | Event::Empty(e) if e.name().as_ref() == "edge" => {
                edges.push((required(&e, "source")?, required(&e, "target")?));
            }
            Event::Start(e) if e.name().as_ref() == "data" => {
                data_key = Some(required(&e, "key")?);
                text_buf.clear();
            }
            Event::Text(t) => {
                if data_key.is_some() {
                    text_buf.push_str(&t.xml10_content());
                }
            }
            Event::GeneralRef(r) => {
                if data_key.is_some() {
                    text_buf.push('&');
                    text_buf.push_str(&r.xml10_content());
                    text_buf.push(';');
                }
            }
            Event::CData(c) => {
                if data_key.is_some() {
                    text_buf.push_str(&escape(c.into_inner().as_ref()));
                }
            }
            Event::End(e) if e.name().as_ref() == "data" => {
                let key = data_key.take().unwrap_or_default();
                let value = unescape(&text_buf)
                    .map_err(|err| Error::GraphMl(err.to_string()))?
                    .into_owned();
                let name = key_names.get(&key).cloned().unwrap_or(key);
                match current.as_mut() {
                    Some(node) => {
                        node.data.insert(name, value);
                    }
                    None if name == "kind" => kind = Some(value.parse()?),
                    None => {}
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }

    let kind = kind.ok_or_else(|| Error::GraphMl("graph lacks a kind".into()))?;
    let ids: Vec<String> = nodes.iter().map(|n| n.id.clone()).collect();
    let graph = CitationGraph::new(kind, ids, edges)?;
    let attrs = nodes
        .into_iter()
        .map(node_attributes)
        .collect::<Result<Vec<_>>>()?;
    Ok(AnnotatedNetwork { graph, nodes: attrs })
}

fn node_attributes(n: PendingNode) -> Result<NodeAttributes> {
    let get = |k: &str| {
        n.data
            .get(k)
            .cloned()
            .ok_or_else(|| Error::GraphMl(format!("node {:?} lacks {k:?}", n.id)))
    };
    fn num<T: std::str::FromStr>(id: &str, key: &str, v: String) -> Result<T> {
        v.trim()
            .parse()
            .map_err(|_| Error::GraphMl(format!("node {id:?}: bad {key} value {v:?}")))
    }
    Ok(NodeAttributes {
        label: get("label")?,
        year: num(&n.id, "year", get("year")?)?,
        cluster: num(&n.id, "cluster", get("cluster")?)?,
        clinical_rate: num(&n.id, "clinical_rate", get("clinical_rate")?)?,
        style: NodeStyle {
            id: n.id.clone(),
            color: get("color")?,
            x: num(&n.id, "x", get("x")?)?,
            y: num(&n.id, "y", get("y")?)?,
            size: num(&n.id, "size", get("size")?)?,
        },
    })
}

pub fn read_graphml(path: impl AsRef<Path>) -> Result<AnnotatedNetwork> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_graphml(&text)
}

fn dot_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' | '\r' => out.push(' '),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// DOT rendering of the network with fixed positions (`neato -n`).
pub fn to_dot(net: &AnnotatedNetwork) -> String {
    let mut s = String::from("digraph citations {\n  node [shape=circle, style=filled, fontsize=8];\n");
    for (id, a) in net.graph.nodes().iter().zip(&net.nodes) {
        let _ = writeln!(
            s,
            "  {} [label={}, fillcolor={}, cluster={}, clinical_rate={}, pos=\"{:.4},{:.4}!\", width={}];",
            dot_string(id),
            dot_string(&a.label),
            dot_string(&a.style.color),
            a.cluster,
            a.clinical_rate,
            a.style.x * 10.0,
            a.style.y * 10.0,
            0.1 + 0.02 * a.style.size
        );
    }
    for (src, dst) in net.graph.edge_ids() {
        let _ = writeln!(s, "  {} -> {};", dot_string(src), dot_string(dst));
    }
    s.push_str("}\n");
    s
}

/// DOT rendering of the aggregated cluster graph.
pub fn cluster_graph_dot(cg: &ClusterGraph) -> String {
    let mut s = String::from("digraph clusters {\n  node [shape=ellipse];\n");
    let _ = writeln!(s, "  // edges with fewer than {} citations hidden", cg.threshold_applied);
    for c in &cg.clusters {
        let _ = writeln!(
            s,
            "  c{} [label=\"cluster {}\\n{} docs, {} internal\"];",
            c.index, c.index, c.size, c.intra_citations
        );
    }
    for e in &cg.edges {
        let _ = writeln!(
            s,
            "  c{} -> c{} [label=\"{}\", penwidth={:.2}];",
            e.from,
            e.to,
            e.weight,
            1.0 + (e.weight as f64).ln()
        );
    }
    s.push_str("}\n");
    s
}
