use std::fmt::Write as _;

use quick_xml::escape::escape;

use crate::textmine::{CaResult, ContingencyTable};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 48.0;

/// Scatter of the first two correspondence-analysis dimensions: clusters as
/// red points, words as grey labels.
pub fn ca_plot_svg(table: &ContingencyTable, ca: &CaResult) -> String {
    let coord = |v: &[f64], d: usize| v.get(d).copied().unwrap_or(0.0);
    let points: Vec<(f64, f64)> = ca
        .row_coords
        .iter()
        .chain(&ca.col_coords)
        .map(|v| (coord(v, 0), coord(v, 1)))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &(x, y) in &points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let inner = SIZE - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) / span * inner;
    let py = |y: f64| SIZE - MARGIN - (y - y0) / span * inner;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let _ = writeln!(s, "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "  <line x1=\"{:.2}\" y1=\"{MARGIN}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#ccc\"/>",
        px(0.0),
        px(0.0),
        SIZE - MARGIN
    );
    let _ = writeln!(
        s,
        "  <line x1=\"{MARGIN}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#ccc\"/>",
        py(0.0),
        SIZE - MARGIN,
        py(0.0)
    );
    for (c, v) in ca.col_coords.iter().enumerate() {
        let _ = writeln!(
            s,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"9\" fill=\"#666\">{}</text>",
            px(coord(v, 0)),
            py(coord(v, 1)),
            escape(table.display_forms()[c].as_str())
        );
    }
    for (r, v) in ca.row_coords.iter().enumerate() {
        let (x, y) = (px(coord(v, 0)), py(coord(v, 1)));
        let _ = writeln!(s, "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"#d62728\"/>");
        let _ = writeln!(
            s,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" font-weight=\"bold\">cluster {}</text>",
            x + 7.0,
            y - 4.0,
            escape(table.row_labels()[r].as_str())
        );
    }
    let explained = |d: usize| ca.explained.get(d).copied().unwrap_or(0.0) * 100.0;
    let _ = writeln!(
        s,
        "  <text x=\"{MARGIN}\" y=\"{:.2}\" font-size=\"11\">dim 1 ({:.1}%) / dim 2 ({:.1}%)</text>",
        SIZE - 12.0,
        explained(0),
        explained(1)
    );
    s.push_str("</svg>\n");
    s
}
