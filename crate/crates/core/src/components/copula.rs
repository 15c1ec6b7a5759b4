//! Copula transform and the Randomized Dependence Coefficient.

use crate::error::{ensure, Result};
use crate::kernel::{median_bandwidth, sample_fourier, DEFAULT_MEDIAN_PAIRS};
use crate::linalg::{check_finite, Matrix};
use crate::rng::derive_seed;

use super::rcca::rcca_fit;

/// Replaces every column by its ranks divided by `n + 1`; tied values share
/// their average rank.
pub fn copula_transform(x: &Matrix) -> Matrix {
    let n = x.nrows();
    let mut out = Matrix::zeros(n, x.ncols());
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for (j, col) in x.column_iter().enumerate() {
        order.clear();
        order.extend(0..n);
        order.sort_by(|&a, &b| col[a].total_cmp(&col[b]));
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && col[order[end]] == col[order[start]] {
                end += 1;
            }
            // Ranks start..end (0-based) average to (start + end + 1) / 2 in 1-based terms.
            let rank = (start + end + 1) as f64 / 2.0;
            for &i in &order[start..end] {
                out[(i, j)] = rank / (n + 1) as f64;
            }
            start = end;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdcResult {
    pub value: f64,
    pub m_used: usize,
    pub gamma_used: f64,
}

/// Largest canonical correlation of RCCA on the copula-transformed inputs,
/// with median-heuristic Fourier maps of `m` features on each side.
pub fn rdc(x: &Matrix, y: &Matrix, m: usize, gamma: f64, seed: u64) -> Result<RdcResult> {
    ensure!(
        x.nrows() == y.nrows(),
        Pairing,
        "RDC inputs have {} and {} rows",
        x.nrows(),
        y.nrows()
    );
    ensure!(
        x.nrows() >= 5,
        Statistical,
        "RDC needs at least 5 rows, got {}",
        x.nrows()
    );
    ensure!(m >= 1, Argument, "m must be at least 1");
    ensure!(
        gamma > 0.0 && gamma.is_finite(),
        Argument,
        "gamma must be positive"
    );
    check_finite(x, "RDC input")?;
    check_finite(y, "RDC input")?;
    let cx = copula_transform(x);
    let cy = copula_transform(y);
    let bx = median_bandwidth(&cx, DEFAULT_MEDIAN_PAIRS, derive_seed(seed, 0))?;
    let by = median_bandwidth(&cy, DEFAULT_MEDIAN_PAIRS, derive_seed(seed, 1))?;
    let map_x = sample_fourier(cx.ncols(), m, bx.spec, derive_seed(seed, 2))?;
    let map_y = sample_fourier(cy.ncols(), m, by.spec, derive_seed(seed, 3))?;
    let model = rcca_fit(&cx, &cy, &map_x, &map_y, gamma, gamma, 1)?;
    Ok(RdcResult {
        value: model.correlations()[0].clamp(0.0, 1.0),
        m_used: m,
        gamma_used: gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn rank_formula() {
        let x = Matrix::from_row_slice(3, 1, &[10.0, 20.0, 30.0]);
        let c = copula_transform(&x);
        assert_eq!(c.as_slice(), &[0.25, 0.5, 0.75]);
    }

    #[test]
    fn constant_column_is_half() {
        let c = copula_transform(&Matrix::from_element(5, 1, 3.0));
        assert!(c.iter().all(|&v| v == 0.5));
    }

    #[test]
    fn monotone_transform_leaves_ranks() {
        let x = Matrix::from_row_slice(5, 1, &[0.3, -1.0, 2.5, 0.0, 1.1]);
        let y = x.map(|v| v.powi(3) + 2.0 * v);
        assert_eq!(copula_transform(&x), copula_transform(&y));
    }

    #[test]
    fn ties_are_averaged() {
        let x = Matrix::from_row_slice(4, 1, &[1.0, 2.0, 2.0, 3.0]);
        let c = copula_transform(&x);
        assert_eq!(c.as_slice(), &[0.2, 0.5, 0.5, 0.8]);
    }

    #[test]
    fn too_few_rows() {
        let x = Matrix::zeros(4, 1);
        assert!(matches!(
            rdc(&x, &x, 10, 1e-3, 0),
            Err(Error::Statistical(_))
        ));
    }
}
