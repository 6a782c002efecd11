//! Seeded force-directed layout (Fruchterman–Reingold with weak gravity).

use std::collections::BTreeMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::netbuild::CitationGraph;

pub const DEFAULT_LAYOUT_ITERATIONS: usize = 300;

const INITIAL_TEMPERATURE: f64 = 0.1;
const GRAVITY: f64 = 0.05;
const MIN_DISTANCE: f64 = 1e-9;

/// Positions aligned with the graph's node order, normalized into the unit
/// square with the aspect ratio kept.
pub fn spring_positions(graph: &CitationGraph, seed: u64, iterations: usize) -> Vec<(f64, f64)> {
    let n = graph.node_count();
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<(f64, f64)> = (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect();
    let edges = graph.undirected_edges();
    let k = (1.0 / n as f64).sqrt();

    for step in 0..iterations {
        let temperature = INITIAL_TEMPERATURE * (1.0 - step as f64 / iterations as f64);
        let mut disp = vec![(0.0f64, 0.0f64); n];
        for i in 0..n {
            for j in i + 1..n {
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let d = (dx * dx + dy * dy).sqrt().max(MIN_DISTANCE);
                let f = k * k / d;
                let (fx, fy) = (dx / d * f, dy / d * f);
                disp[i].0 += fx;
                disp[i].1 += fy;
                disp[j].0 -= fx;
                disp[j].1 -= fy;
            }
        }
        for &(a, b) in &edges {
            let (dx, dy) = (pos[a].0 - pos[b].0, pos[a].1 - pos[b].1);
            let d = (dx * dx + dy * dy).sqrt().max(MIN_DISTANCE);
            let f = d * d / k;
            let (fx, fy) = (dx / d * f, dy / d * f);
            disp[a].0 -= fx;
            disp[a].1 -= fy;
            disp[b].0 += fx;
            disp[b].1 += fy;
        }
        for (p, d) in pos.iter_mut().zip(&mut disp) {
            d.0 -= GRAVITY * (p.0 - 0.5);
            d.1 -= GRAVITY * (p.1 - 0.5);
            let len = (d.0 * d.0 + d.1 * d.1).sqrt();
            if len > 0.0 {
                let step = len.min(temperature);
                p.0 += d.0 / len * step;
                p.1 += d.1 / len * step;
            }
        }
    }
    normalize(&mut pos);
    pos
}

fn normalize(pos: &mut [(f64, f64)]) {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pos.iter() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0);
    if span <= 0.0 || !span.is_finite() {
        pos.iter_mut().for_each(|p| *p = (0.5, 0.5));
        return;
    }
    let (ox, oy) = ((1.0 - (x1 - x0) / span) / 2.0, (1.0 - (y1 - y0) / span) / 2.0);
    for p in pos.iter_mut() {
        *p = ((p.0 - x0) / span + ox, (p.1 - y0) / span + oy);
    }
}

/// Node id → position after [`DEFAULT_LAYOUT_ITERATIONS`] iterations.
pub fn layout_spring(graph: &CitationGraph, seed: u64) -> BTreeMap<String, (f64, f64)> {
    graph
        .nodes()
        .iter()
        .cloned()
        .zip(spring_positions(graph, seed, DEFAULT_LAYOUT_ITERATIONS))
        .collect()
}
