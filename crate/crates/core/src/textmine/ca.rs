use faer::Mat;
use serde::{Deserialize, Serialize};

use super::contingency::ContingencyTable;
use crate::error::{Error, Result};

/// Coordinates below this magnitude are treated as zero when fixing axis
/// signs.
const SIGN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaResult {
    /// Retained singular values, descending.
    pub singular_values: Vec<f64>,
    /// Principal coordinates, one vector per row, `dims` entries each.
    pub row_coords: Vec<Vec<f64>>,
    pub col_coords: Vec<Vec<f64>>,
    pub row_masses: Vec<f64>,
    pub col_masses: Vec<f64>,
    /// Each row's share of the total inertia (sum of its squared residuals).
    pub row_inertia: Vec<f64>,
    pub col_inertia: Vec<f64>,
    pub total_inertia: f64,
    /// Fraction of total inertia per retained dimension.
    pub explained: Vec<f64>,
}

impl CaResult {
    pub fn dims(&self) -> usize {
        self.singular_values.len()
    }
}

/// Correspondence analysis by singular value decomposition of the
/// standardized residuals `S_ij = (p_ij - r_i c_j) / sqrt(r_i c_j)`.
///
/// At most `min(rows, cols) - 1` dimensions are retained. Each axis is
/// oriented so that its first non-zero row coordinate is positive.
pub fn correspondence_analysis(table: &ContingencyTable, dims: usize) -> Result<CaResult> {
    let (nr, nc) = (table.rows(), table.cols());
    if nr < 2 || nc < 2 {
        return Err(Error::TableTooSmall { rows: nr, cols: nc });
    }
    if dims == 0 {
        return Err(Error::InvalidParameter("correspondence analysis needs dims >= 1".into()));
    }
    let grand = table.grand_total();
    if grand == 0 {
        return Err(Error::TableTooSmall { rows: nr, cols: nc });
    }
    let grand = grand as f64;
    if let Some(r) = (0..nr).find(|&r| table.row_total(r) == 0) {
        return Err(Error::DegenerateTable {
            axis: "row",
            label: table.row_labels()[r].clone(),
        });
    }
    if let Some(c) = (0..nc).find(|&c| table.column_total(c) == 0) {
        return Err(Error::DegenerateTable {
            axis: "column",
            label: table.columns()[c].clone(),
        });
    }

    let row_masses: Vec<f64> = (0..nr).map(|r| table.row_total(r) as f64 / grand).collect();
    let col_masses: Vec<f64> = (0..nc).map(|c| table.column_total(c) as f64 / grand).collect();
    let residuals = Mat::from_fn(nr, nc, |i, j| {
        let p = table.get(i, j) as f64 / grand;
        let e = row_masses[i] * col_masses[j];
        (p - e) / e.sqrt()
    });
    let row_inertia: Vec<f64> = (0..nr)
        .map(|i| (0..nc).map(|j| residuals[(i, j)].powi(2)).sum())
        .collect();
    let col_inertia = (0..nc)
        .map(|j| (0..nr).map(|i| residuals[(i, j)].powi(2)).sum())
        .collect();
    let total_inertia = row_inertia.iter().sum::<f64>();

    let svd = residuals.thin_svd().map_err(|e| Error::Numerical(format!("svd: {e:?}")))?;
    let u = svd.U();
    let v = svd.V();
    let values: Vec<f64> = (0..nr.min(nc)).map(|k| svd.S()[k]).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let keep = dims.min(nr.min(nc) - 1);

    let mut singular_values = Vec::with_capacity(keep);
    let mut row_coords = vec![Vec::with_capacity(keep); nr];
    let mut col_coords = vec![Vec::with_capacity(keep); nc];
    for &k in order.iter().take(keep) {
        let sigma = values[k].max(0.0);
        let rows: Vec<f64> = (0..nr)
            .map(|i| u[(i, k)] * sigma / row_masses[i].sqrt())
            .collect();
        let sign = rows
            .iter()
            .find(|x| x.abs() > SIGN_EPS)
            .map_or(1.0, |x| x.signum());
        for (i, x) in rows.into_iter().enumerate() {
            row_coords[i].push(sign * x);
        }
        for (j, coords) in col_coords.iter_mut().enumerate() {
            coords.push(sign * v[(j, k)] * sigma / col_masses[j].sqrt());
        }
        singular_values.push(sigma);
    }
    let explained = singular_values
        .iter()
        .map(|s| if total_inertia > 0.0 { s * s / total_inertia } else { 0.0 })
        .collect();

    Ok(CaResult {
        singular_values,
        row_coords,
        col_coords,
        row_masses,
        col_masses,
        row_inertia,
        col_inertia,
        total_inertia,
        explained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(counts: Vec<Vec<usize>>) -> ContingencyTable {
        let rows = counts.len();
        let cols = counts[0].len();
        let sizes = counts.iter().map(|r| r.iter().copied().max().unwrap_or(0)).collect();
        ContingencyTable::new(
            (0..rows).map(|r| format!("r{r}")).collect(),
            sizes,
            (0..cols).map(|c| format!("c{c}")).collect(),
            counts,
        )
        .unwrap()
    }

    #[test]
    fn independent_table_collapses_to_origin() {
        // counts_ij = a_i * b_j
        let a = [1usize, 2, 3];
        let b = [2usize, 1, 4, 3];
        let t = table(a.iter().map(|x| b.iter().map(|y| x * y).collect()).collect());
        let ca = correspondence_analysis(&t, 5).unwrap();
        assert!(ca.total_inertia < 1e-20);
        assert!(ca.singular_values.iter().all(|s| *s < 1e-10));
        assert!(ca.row_coords.iter().flatten().all(|x| x.abs() < 1e-9));
        assert_eq!(ca.dims(), 2);
    }

    #[test]
    fn zero_row_named() {
        let t = ContingencyTable::new(
            vec!["a".into(), "b".into(), "empty".into()],
            vec![5, 5, 5],
            vec!["x".into(), "y".into()],
            vec![vec![1, 2], vec![3, 1], vec![0, 0]],
        )
        .unwrap();
        assert!(matches!(
            correspondence_analysis(&t, 2),
            Err(Error::DegenerateTable { axis: "row", label }) if label == "empty"
        ));
    }

    #[test]
    fn too_small() {
        let t = table(vec![vec![1, 2, 3]]);
        assert!(matches!(correspondence_analysis(&t, 2), Err(Error::TableTooSmall { .. })));
    }

    #[test]
    fn two_by_two_has_one_dimension() {
        let t = table(vec![vec![10, 2], vec![3, 9]]);
        let ca = correspondence_analysis(&t, 4).unwrap();
        assert_eq!(ca.dims(), 1);
        assert!((ca.explained[0] - 1.0).abs() < 1e-12);
        assert!(ca.row_coords[0][0] > 0.0);
    }
}
