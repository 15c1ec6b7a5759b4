//! Dense linear-algebra primitives: symmetric eigendecomposition, regularized
//! inverse square roots, spectral-norm estimation and k-means.
//!
//! Matrices are `nalgebra::DMatrix<f64>` with samples in rows.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{ensure, Error, Result};
use crate::rng;

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Top eigenpairs of a symmetric matrix, values in descending order and one
/// orthonormal column of `vectors` per value.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Tuning for [`sym_eig_with`].
#[derive(Debug, Clone, Copy)]
pub struct EigConfig {
    /// Largest dimension handled by the full dense decomposition. Bigger
    /// inputs go through block subspace iteration first.
    pub max_dense_dim: usize,
    /// Residual target `‖Av − λv‖ ≤ tol·‖A‖` for the iterative path.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for EigConfig {
    fn default() -> Self {
        EigConfig {
            max_dense_dim: 2048,
            tol: 1e-10,
            max_iters: 500,
        }
    }
}

pub(crate) fn check_finite(a: &Matrix, what: &str) -> Result<()> {
    ensure!(
        a.iter().all(|v| v.is_finite()),
        Numeric,
        "{what} contains non-finite entries"
    );
    Ok(())
}

pub(crate) fn check_nonempty(a: &Matrix, what: &str) -> Result<()> {
    ensure!(
        a.nrows() >= 1 && a.ncols() >= 1,
        Dimension,
        "{what} must have at least one row and one column (got {}x{})",
        a.nrows(),
        a.ncols()
    );
    Ok(())
}

fn check_symmetric(a: &Matrix, what: &str) -> Result<()> {
    ensure!(
        a.is_square(),
        Dimension,
        "{what} must be square (got {}x{})",
        a.nrows(),
        a.ncols()
    );
    check_finite(a, what)?;
    let scale = a.amax().max(1.0);
    let n = a.nrows();
    for j in 0..n {
        for i in (j + 1)..n {
            if (a[(i, j)] - a[(j, i)]).abs() > 1e-10 * scale {
                return Err(Error::Dimension(format!(
                    "{what} is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Top-`r` eigenpairs of a symmetric matrix, ordered by algebraic value.
pub fn sym_eig(a: &Matrix, r: usize) -> Result<EigenResult> {
    sym_eig_with(a, r, &EigConfig::default())
}

pub fn sym_eig_with(a: &Matrix, r: usize, config: &EigConfig) -> Result<EigenResult> {
    check_symmetric(a, "eigen input")?;
    let n = a.nrows();
    ensure!(
        r >= 1 && r <= n,
        Argument,
        "requested {r} eigenpairs of a {n}x{n} matrix"
    );
    if n > config.max_dense_dim && r + 10 < n / 4 {
        if let Some(res) = subspace_eig(a, r, config) {
            return Ok(res);
        }
        log::debug!("subspace iteration did not converge; using dense decomposition");
    }
    Ok(dense_eig(a, r))
}

fn dense_eig(a: &Matrix, r: usize) -> EigenResult {
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    // Stable sort keeps the solver's order among exact ties.
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    order.truncate(r);
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_fn(a.nrows(), r, |row, c| eig.eigenvectors[(row, order[c])]);
    EigenResult { values, vectors }
}

/// Gershgorin bound on the spectral radius of a symmetric matrix.
fn gershgorin(a: &Matrix) -> f64 {
    a.row_iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn orthonormalize(q: Matrix) -> Matrix {
    q.qr().q()
}

/// Block subspace iteration with Rayleigh-Ritz on `A + gI`, which is PSD so
/// that dominant means algebraically largest. Returns `None` when the
/// residual target is not reached.
fn subspace_eig(a: &Matrix, r: usize, config: &EigConfig) -> Option<EigenResult> {
    let n = a.nrows();
    let block = (r + 10).min(n);
    let shift = gershgorin(a);
    if shift == 0.0 {
        return None;
    }
    let mut g = rng::seeded(0x5EED);
    let start = Matrix::from_fn(n, block, |_, _| g.sample::<f64, _>(StandardNormal));
    let mut q = orthonormalize(start);
    for _ in 0..config.max_iters {
        let y = a * &q + &q * shift;
        q = orthonormalize(y);
        let aq = a * &q;
        let h = q.transpose() * &aq;
        let h = (&h + h.transpose()) * 0.5;
        let small = dense_eig(&h, block);
        let ritz = &q * &small.vectors;
        let a_ritz = &aq * &small.vectors;
        let converged = (0..r).all(|c| {
            let resid = a_ritz.column(c) - ritz.column(c) * small.values[c];
            resid.norm() <= config.tol * shift
        });
        if converged {
            return Some(EigenResult {
                values: small.values[..r].to_vec(),
                vectors: ritz.columns(0, r).into_owned(),
            });
        }
        q = ritz;
    }
    None
}

/// `V diag(max(λ, floor))^{-1/2} Vᵀ` from the full eigendecomposition.
/// Eigenvalues below `floor` are floored rather than rejected.
pub fn spd_inverse_sqrt(a: &Matrix, floor: f64) -> Result<Matrix> {
    ensure!(
        floor > 0.0 && floor.is_finite(),
        Argument,
        "eigenvalue floor must be positive, got {floor}"
    );
    check_symmetric(a, "inverse square root input")?;
    let eig = SymmetricEigen::new(a.clone());
    let scales = eig.eigenvalues.map(|l| l.max(floor).powf(-0.5));
    let scaled = Matrix::from_fn(a.nrows(), a.ncols(), |i, j| {
        eig.eigenvectors[(i, j)] * scales[j]
    });
    let out = scaled * eig.eigenvectors.transpose();
    Ok((&out + out.transpose()) * 0.5)
}

/// Largest singular value by power iteration on `AᵀA`.
///
/// Stops once the extrapolated remaining change of the estimate (a
/// geometric tail fitted to the last two increments) drops below
/// `tol` relative.
pub fn operator_norm(a: &Matrix, tol: f64) -> f64 {
    const MAX_ITERS: usize = 50_000;
    if a.nrows() == 0 || a.ncols() == 0 || a.iter().all(|&v| v == 0.0) {
        return 0.0;
    }
    let mut g = rng::seeded(0x0_9E4A);
    let mut v = Vector::from_fn(a.ncols(), |_, _| 1.0 + 0.5 * g.random::<f64>());
    v /= v.norm();
    let mut sigma = 0.0_f64;
    let mut prev_delta = f64::INFINITY;
    for _ in 0..MAX_ITERS {
        let w = a * &v;
        let next = w.norm();
        let u = a.tr_mul(&w);
        let u_norm = u.norm();
        if u_norm == 0.0 {
            return next;
        }
        v = u / u_norm;
        let delta = (next - sigma).abs();
        sigma = next;
        if delta == 0.0 {
            break;
        }
        if prev_delta.is_finite() {
            let q = delta / prev_delta;
            if q < 1.0 {
                let tail = delta * q / (1.0 - q);
                if delta <= tol * sigma && tail <= tol * sigma {
                    break;
                }
            }
        }
        prev_delta = delta;
    }
    // One more application with the final vector.
    (a * &v).norm().max(sigma)
}

/// Column means as a vector.
pub fn column_means(a: &Matrix) -> Vector {
    let n = a.nrows() as f64;
    Vector::from_iterator(a.ncols(), a.column_iter().map(|c| c.sum() / n))
}

/// Subtracts `means` from every row.
pub fn center_with(a: &Matrix, means: &Vector) -> Matrix {
    let mut out = a.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        col.add_scalar_mut(-means[j]);
    }
    out
}

/// Symmetrizes in place to remove rounding asymmetry from `XᵀX`-style
/// products.
pub(crate) fn symmetrize(a: &mut Matrix) {
    let n = a.nrows();
    for j in 0..n {
        for i in (j + 1)..n {
            let m = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = m;
            a[(j, i)] = m;
        }
    }
}

/// Extends the orthonormal columns of `basis` to `total` orthonormal columns
/// by Gram-Schmidt over `candidates` (tried in column order) followed by the
/// canonical basis vectors.
pub(crate) fn complete_orthonormal(
    basis: &Matrix,
    candidates: Option<&Matrix>,
    total: usize,
) -> Matrix {
    let dim = basis.nrows();
    let mut cols: Vec<Vector> = basis.column_iter().map(|c| c.into_owned()).collect();
    let extra = candidates.map(|c| c.ncols()).unwrap_or(0);
    let mut next = 0;
    while cols.len() < total && next < extra + dim {
        let mut v = if next < extra {
            candidates.unwrap().column(next).into_owned()
        } else {
            let mut e = Vector::zeros(dim);
            e[next - extra] = 1.0;
            e
        };
        next += 1;
        let start = v.norm();
        if start == 0.0 {
            continue;
        }
        // Two passes of modified Gram-Schmidt.
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dot(&v);
                v.axpy(-proj, c, 1.0);
            }
        }
        let norm = v.norm();
        if norm > 1e-8 * start {
            cols.push(v / norm);
        }
    }
    Matrix::from_columns(&cols)
}

/// Re-orthonormalizes nearly orthonormal columns in place (modified
/// Gram-Schmidt, left to right).
pub(crate) fn reorthonormalize(a: &mut Matrix) {
    for j in 0..a.ncols() {
        for i in 0..j {
            let proj = a.column(i).dot(&a.column(j));
            let ci = a.column(i).into_owned();
            a.column_mut(j).axpy(-proj, &ci, 1.0);
        }
        let norm = a.column(j).norm();
        if norm > 0.0 {
            a.column_mut(j).unscale_mut(norm);
        }
    }
}

/// Result of [`kmeans`]; `objective_history` holds the within-cluster sum of
/// squares after every assignment step.
#[derive(Debug, Clone)]
pub struct KMeans {
    pub labels: Vec<usize>,
    pub centroids: Matrix,
    pub objective_history: Vec<f64>,
}

fn sq_dist_row(a: &Matrix, i: usize, c: &Matrix, j: usize) -> f64 {
    a.row(i)
        .iter()
        .zip(c.row(j).iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum()
}

/// Lloyd's algorithm from a k-means++ seeding.
pub fn kmeans(points: &Matrix, k: usize, seed: u64, max_iters: usize) -> Result<KMeans> {
    check_nonempty(points, "k-means input")?;
    check_finite(points, "k-means input")?;
    let n = points.nrows();
    ensure!(k >= 1, Argument, "k must be at least 1");
    ensure!(k <= n, Argument, "k = {k} exceeds the number of points {n}");
    ensure!(max_iters >= 1, Argument, "max_iters must be at least 1");

    let mut g = rng::seeded(seed);
    let dim = points.ncols();
    let mut centroids = Matrix::zeros(k, dim);
    let first = g.random_range(0..n);
    centroids.row_mut(0).copy_from(&points.row(first));
    let mut nearest: Vec<f64> = (0..n)
        .map(|i| sq_dist_row(points, i, &centroids, 0))
        .collect();
    for c in 1..k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let target = g.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = n - 1;
            for (i, d) in nearest.iter().enumerate() {
                acc += d;
                if acc > target && *d > 0.0 {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            g.random_range(0..n)
        };
        centroids.row_mut(c).copy_from(&points.row(pick));
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(sq_dist_row(points, i, &centroids, c));
        }
    }

    let mut labels = vec![usize::MAX; n];
    let mut history = Vec::new();
    for _ in 0..max_iters {
        let mut changed = false;
        let mut objective = 0.0;
        for (i, label) in labels.iter_mut().enumerate() {
            let (best, dist) = (0..k)
                .map(|c| (c, sq_dist_row(points, i, &centroids, c)))
                .fold(
                    (0, f64::INFINITY),
                    |acc, cur| if cur.1 < acc.1 { cur } else { acc },
                );
            objective += dist;
            if *label != best {
                *label = best;
                changed = true;
            }
        }
        history.push(objective);
        if !changed {
            break;
        }
        let mut sums = Matrix::zeros(k, dim);
        let mut counts = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            let mut row = sums.row_mut(l);
            row += points.row(i);
            counts[l] += 1;
        }
        for (c, &count) in counts.iter().enumerate() {
            // Empty clusters keep their previous centroid.
            if count > 0 {
                let mean = sums.row(c) / count as f64;
                centroids.row_mut(c).copy_from(&mean);
            }
        }
    }
    Ok(KMeans {
        labels,
        centroids,
        objective_history: history,
    })
}
