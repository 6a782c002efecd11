use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use frontmap::cluster::greedy_modularity_clustering;
use frontmap::dense::{find_dense_regions, vertex_weights, DenseParams};
use frontmap::report::{layout_spring, run_pipeline, RunConfig};
use frontmap::synth::{papers_60, planted_clique_16, planted_partition, synthetic_papers, PLANTED_GROUP_SIZES, PLANTED_P_IN, PLANTED_P_OUT};
use frontmap::textmine::correspondence_analysis;
use frontmap::DocumentKind;
use frontmap_bench::{contingency, corpus_and_network};

fn clustering(c: &mut Criterion) {
    let (graph, _) = planted_partition(&PLANTED_GROUP_SIZES, PLANTED_P_IN, PLANTED_P_OUT, 1);
    c.bench_function("greedy_planted_150", |b| {
        b.iter(|| greedy_modularity_clustering(&graph).unwrap())
    });
}

fn layout(c: &mut Criterion) {
    let (_, graph) = corpus_and_network(1000, 3);
    c.bench_function("layout_top200", |b| b.iter(|| layout_spring(&graph, 42)));
}

fn text(c: &mut Criterion) {
    let (corpus, graph) = corpus_and_network(1000, 3);
    let partition = greedy_modularity_clustering(&graph).unwrap();
    let table = contingency(&corpus, &partition);
    c.bench_function("contingency_top200", |b| b.iter(|| contingency(&corpus, &partition)));
    c.bench_function("ca_top200", |b| b.iter(|| correspondence_analysis(&table, 2).unwrap()));
}

fn dense(c: &mut Criterion) {
    let (graph, _) = planted_clique_16(5);
    c.bench_function("dense_regions_16", |b| {
        b.iter(|| find_dense_regions(&graph, &vertex_weights(&graph), DenseParams::default()).unwrap())
    });
}

fn end_to_end(c: &mut Criterion) {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("papers_60.jsonl");
    papers_60().save(&small).unwrap();
    let large = dir.path().join("papers_1000.jsonl");
    synthetic_papers(1000, 0.05, 0.002, 7).save(&large).unwrap();
    for (name, path) in [("pipeline_60", small), ("pipeline_1000", large)] {
        c.bench_function(name, |b| {
            b.iter_batched(
                || tempfile::tempdir().unwrap(),
                |out| run_pipeline(&RunConfig::new(&path, DocumentKind::Paper, out.path())).unwrap(),
                BatchSize::PerIteration,
            )
        });
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = clustering, layout, text, dense, end_to_end
}
criterion_main!(benches);
