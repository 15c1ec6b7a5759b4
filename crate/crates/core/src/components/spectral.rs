//! Spectral clustering on an approximate Gram matrix `K̂ = Z Zᵀ`.

use crate::error::{ensure, Result};
use crate::kernel::FeatureMap;
use crate::linalg::{kmeans, sym_eig, symmetrize, Matrix};

const KMEANS_ITERS: usize = 300;

/// Normalized spectral embedding: top-`k` eigenvectors of
/// `D^{-1/2} K̂ D^{-1/2}` with unit-norm rows.
///
/// When the feature count `m` is below `n` the eigenvectors come from the
/// `m × m` matrix `Z̃ᵀZ̃` with `Z̃ = D^{-1/2}Z`, so the `n × n` affinity is
/// never formed.
pub fn spectral_embedding(x: &Matrix, k: usize, map: &FeatureMap) -> Result<Matrix> {
    let n = x.nrows();
    ensure!(k >= 1 && k <= n, Argument, "k = {k} must lie in 1..={n}");
    let z = map.featurize(x)?;
    let m = z.ncols();
    let totals = z.row_sum_tr();
    let degrees = &z * totals;
    let max_degree = degrees.amax();
    if let Some(i) = degrees
        .iter()
        .position(|&d| d <= 1e-12 * max_degree.max(1e-300))
    {
        return Err(crate::error::Error::Numeric(format!(
            "row {i} has non-positive degree {} in the approximate affinity",
            degrees[i]
        )));
    }
    let mut zt = z;
    for (i, mut row) in zt.row_iter_mut().enumerate() {
        row /= degrees[i].sqrt();
    }
    let mut embedding = if m < n {
        let mut small = zt.tr_mul(&zt);
        symmetrize(&mut small);
        let kk = k.min(m);
        let eig = sym_eig(&small, kk)?;
        let mut emb = Matrix::zeros(n, k);
        for c in 0..kk {
            let mu = eig.values[c];
            if mu > 0.0 {
                let col = &zt * eig.vectors.column(c) / mu.sqrt();
                emb.column_mut(c).copy_from(&col);
            }
        }
        emb
    } else {
        let mut affinity = &zt * zt.transpose();
        symmetrize(&mut affinity);
        sym_eig(&affinity, k)?.vectors
    };
    for mut row in embedding.row_iter_mut() {
        let norm = row.norm();
        if norm > 0.0 {
            row /= norm;
        }
    }
    Ok(embedding)
}

/// Clusters rows of `x` into `k` groups via the normalized spectral
/// embedding and seeded k-means. Labels are arbitrary up to permutation.
pub fn spectral_cluster(x: &Matrix, k: usize, map: &FeatureMap, seed: u64) -> Result<Vec<usize>> {
    ensure!(k >= 2, Argument, "spectral clustering needs k ≥ 2, got {k}");
    let embedding = spectral_embedding(x, k, map)?;
    Ok(kmeans(&embedding, k, seed, KMEANS_ITERS)?.labels)
}
