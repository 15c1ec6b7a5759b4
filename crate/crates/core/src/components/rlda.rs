//! Randomized LDA as RCCA against one-hot class indicators.

use crate::error::{ensure, Result};
use crate::kernel::FeatureMap;
use crate::linalg::Matrix;

use super::rcca::{rcca_fit, RccaModel};

/// One-hot `n × c` indicator matrix for labels in `0..c`.
pub fn indicator_matrix(labels: &[usize], classes: usize) -> Matrix {
    Matrix::from_fn(labels.len(), classes, |i, j| {
        if labels[i] == j {
            1.0
        } else {
            0.0
        }
    })
}

/// Fits RCCA between `featurize(map, X)` and the class indicators. The
/// discriminant projection is the model's X-side canonical variables
/// ([`RccaModel::transform_x`]).
pub fn rlda_fit(
    x: &Matrix,
    labels: &[usize],
    map: &FeatureMap,
    gamma: f64,
    r: usize,
) -> Result<RccaModel> {
    ensure!(
        labels.len() == x.nrows(),
        Pairing,
        "{} labels for {} rows",
        labels.len(),
        x.nrows()
    );
    let classes = labels.iter().max().map_or(0, |&m| m + 1);
    let mut present = vec![false; classes];
    for &l in labels {
        present[l] = true;
    }
    ensure!(classes >= 2, Degenerate, "LDA needs at least two classes");
    if let Some(missing) = present.iter().position(|p| !p) {
        return Err(crate::error::Error::Argument(format!(
            "labels must cover 0..{classes}; class {missing} is absent"
        )));
    }
    ensure!(
        r >= 1 && r <= map.output_dim().min(classes),
        Argument,
        "r = {r} exceeds min(features, classes) = {}",
        map.output_dim().min(classes)
    );
    let t = indicator_matrix(labels, classes);
    rcca_fit(x, &t, map, &FeatureMap::identity(classes), gamma, gamma, r)
}
