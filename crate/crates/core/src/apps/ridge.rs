//! Ridge regression on random features.

use nalgebra::Cholesky;

use crate::error::{ensure, Error, Result};
use crate::kernel::FeatureMap;
use crate::linalg::{center_with, check_finite, column_means, symmetrize, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct RidgeModel {
    map: FeatureMap,
    weights: Matrix,
    intercepts: Vec<f64>,
    lambda: f64,
}

impl RidgeModel {
    pub fn from_parts(
        map: FeatureMap,
        weights: Matrix,
        intercepts: Vec<f64>,
        lambda: f64,
    ) -> Result<Self> {
        ensure!(
            weights.nrows() == map.output_dim() && weights.ncols() == intercepts.len(),
            Dimension,
            "ridge weights {}×{} do not fit {} features and {} outputs",
            weights.nrows(),
            weights.ncols(),
            map.output_dim(),
            intercepts.len()
        );
        ensure!(
            lambda > 0.0 && lambda.is_finite(),
            Argument,
            "ridge λ must be positive"
        );
        check_finite(&weights, "ridge weights")?;
        Ok(RidgeModel {
            map,
            weights,
            intercepts,
            lambda,
        })
    }

    pub fn map(&self) -> &FeatureMap {
        &self.map
    }

    /// `m × D` coefficient matrix `α`.
    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    pub fn intercepts(&self) -> &[f64] {
        &self.intercepts
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn outputs(&self) -> usize {
        self.intercepts.len()
    }

    /// `z(X)·α + intercepts`.
    pub fn predict(&self, x: &Matrix) -> Result<Matrix> {
        let mut out = self.map.featurize(x)? * &self.weights;
        for mut row in out.row_iter_mut() {
            for (v, b) in row.iter_mut().zip(&self.intercepts) {
                *v += b;
            }
        }
        Ok(out)
    }
}

fn cholesky_solve(mut a: Matrix, b: &Matrix) -> Result<Matrix> {
    symmetrize(&mut a);
    let chol = Cholesky::new(a)
        .ok_or_else(|| Error::Numeric("ridge system is not positive definite".into()))?;
    Ok(chol.solve(b))
}

/// Minimizes `‖T_c − Z_c α‖² + λ‖α‖²` on centered features and targets.
///
/// Solves the `m × m` normal equations when `m ≤ n` and the `n × n` dual
/// system `α = Z_cᵀ(Z_c Z_cᵀ + λI)⁻¹ T_c` otherwise. All outputs share one
/// factorization.
pub fn ridge_fit(
    inputs: &Matrix,
    targets: &Matrix,
    map: &FeatureMap,
    lambda: f64,
) -> Result<RidgeModel> {
    let n = inputs.nrows();
    ensure!(
        targets.nrows() == n,
        Pairing,
        "inputs have {n} rows but targets have {}",
        targets.nrows()
    );
    ensure!(n >= 1, Argument, "ridge regression needs at least one row");
    ensure!(targets.ncols() >= 1, Argument, "targets have no columns");
    ensure!(
        lambda > 0.0 && lambda.is_finite(),
        Argument,
        "ridge λ must be positive, got {lambda}"
    );
    check_finite(targets, "ridge targets")?;
    let z = map.featurize(inputs)?;
    let z_means = column_means(&z);
    let zc = center_with(&z, &z_means);
    let t_means = column_means(targets);
    let tc = center_with(targets, &t_means);
    let m = zc.ncols();
    let weights = if m <= n {
        let normal = zc.tr_mul(&zc) + Matrix::identity(m, m) * lambda;
        cholesky_solve(normal, &zc.tr_mul(&tc))?
    } else {
        let gram = &zc * zc.transpose() + Matrix::identity(n, n) * lambda;
        zc.tr_mul(&cholesky_solve(gram, &tc)?)
    };
    check_finite(&weights, "ridge weights")?;
    let intercepts = (0..targets.ncols())
        .map(|j| t_means[j] - z_means.dot(&weights.column(j)))
        .collect();
    Ok(RidgeModel {
        map: map.clone(),
        weights,
        intercepts,
        lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{sample_fourier, KernelSpec};
    use crate::rng;
    use rand::Rng as _;
    use rand_distr::StandardNormal;

    fn normal_matrix(n: usize, d: usize, seed: u64) -> Matrix {
        let mut g = rng::seeded(seed);
        Matrix::from_fn(n, d, |_, _| g.sample::<f64, _>(StandardNormal))
    }

    #[test]
    fn constant_target_goes_to_intercept() {
        let x = normal_matrix(30, 2, 1);
        let t = Matrix::from_element(30, 1, 4.5);
        let map = sample_fourier(2, 10, KernelSpec::new(0.5).unwrap(), 3).unwrap();
        let model = ridge_fit(&x, &t, &map, 1e-3).unwrap();
        assert!(model.weights().amax() < 1e-12);
        assert!((model.intercepts()[0] - 4.5).abs() < 1e-12);
    }

    #[test]
    fn matches_least_squares_oracle() {
        // Oracle: solve [X 1]ᵀ[X 1] β = [X 1]ᵀ t directly.
        let x = normal_matrix(50, 3, 2);
        let beta = [1.5, -2.0, 0.25];
        let noise = normal_matrix(50, 1, 3);
        let t = Matrix::from_fn(50, 1, |i, _| {
            0.7 + (0..3).map(|j| beta[j] * x[(i, j)]).sum::<f64>() + 0.1 * noise[(i, 0)]
        });
        let design = Matrix::from_fn(50, 4, |i, j| if j < 3 { x[(i, j)] } else { 1.0 });
        let lu = (design.tr_mul(&design)).lu();
        let ols = lu.solve(&design.tr_mul(&t)).unwrap();
        let model = ridge_fit(&x, &t, &FeatureMap::identity(3), 1e-12).unwrap();
        for j in 0..3 {
            assert!((model.weights()[(j, 0)] - ols[(j, 0)]).abs() < 1e-6);
        }
        assert!((model.intercepts()[0] - ols[(3, 0)]).abs() < 1e-6);
    }

    #[test]
    fn recovers_planted_weights() {
        let x = normal_matrix(80, 2, 4);
        let map = sample_fourier(2, 12, KernelSpec::new(0.3).unwrap(), 5).unwrap();
        let alpha = normal_matrix(12, 2, 6);
        let t = map.featurize(&x).unwrap() * &alpha;
        let model = ridge_fit(&x, &t, &map, 1e-10).unwrap();
        assert!((model.weights() - &alpha).amax() < 1e-4);
    }

    #[test]
    fn dual_route_matches_primal() {
        let x = normal_matrix(12, 2, 7);
        let t = normal_matrix(12, 2, 8);
        let map = sample_fourier(2, 30, KernelSpec::new(0.5).unwrap(), 9).unwrap();
        let model = ridge_fit(&x, &t, &map, 0.1).unwrap();
        // Primal normal equations on the same data.
        let z = map.featurize(&x).unwrap();
        let zc = center_with(&z, &column_means(&z));
        let tc = center_with(&t, &column_means(&t));
        let primal = cholesky_solve(
            zc.tr_mul(&zc) + Matrix::identity(30, 30) * 0.1,
            &zc.tr_mul(&tc),
        )
        .unwrap();
        assert!((model.weights() - primal).amax() < 1e-8);
    }

    #[test]
    fn rejects_mismatched_rows() {
        let x = normal_matrix(5, 2, 1);
        let t = normal_matrix(4, 1, 1);
        assert!(matches!(
            ridge_fit(&x, &t, &FeatureMap::identity(2), 1.0),
            Err(Error::Pairing(_))
        ));
        assert!(matches!(
            ridge_fit(&x, &normal_matrix(5, 1, 2), &FeatureMap::identity(2), 0.0),
            Err(Error::Argument(_))
        ));
    }
}
