//! Randomized PCA: ordinary PCA on the output of a frozen feature map.

use crate::error::{ensure, Result};
use crate::kernel::FeatureMap;
use crate::linalg::{
    center_with, check_finite, column_means, complete_orthonormal, reorthonormalize, sym_eig,
    symmetrize, Matrix, Vector,
};

/// Fitted RPCA model.
#[derive(Debug, Clone, PartialEq)]
pub struct RpcaModel {
    map: FeatureMap,
    feature_means: Vector,
    loadings: Matrix,
    eigenvalues: Vec<f64>,
}

impl RpcaModel {
    pub fn from_parts(
        map: FeatureMap,
        feature_means: Vector,
        loadings: Matrix,
        eigenvalues: Vec<f64>,
    ) -> Result<Self> {
        let m = map.output_dim();
        ensure!(
            feature_means.len() == m && loadings.nrows() == m,
            Dimension,
            "RPCA parts disagree with feature dimension {m}"
        );
        ensure!(
            loadings.ncols() == eigenvalues.len() && !eigenvalues.is_empty(),
            Dimension,
            "{} loadings for {} eigenvalues",
            loadings.ncols(),
            eigenvalues.len()
        );
        check_finite(&loadings, "RPCA loadings")?;
        Ok(RpcaModel {
            map,
            feature_means,
            loadings,
            eigenvalues,
        })
    }

    pub fn map(&self) -> &FeatureMap {
        &self.map
    }

    pub fn feature_means(&self) -> &Vector {
        &self.feature_means
    }

    /// `m × r` matrix of principal directions in feature space.
    pub fn loadings(&self) -> &Matrix {
        &self.loadings
    }

    /// Feature-covariance eigenvalues (divisor `n − 1`), descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn components(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Scores `(z(X) − means)·F`.
    pub fn transform(&self, x: &Matrix) -> Result<Matrix> {
        let z = self.map.featurize(x)?;
        Ok(center_with(&z, &self.feature_means) * &self.loadings)
    }
}

/// Fits the top `r` principal components of `featurize(map, X)`.
///
/// Works on the `m × m` covariance when `m ≤ n` and on the `n × n` Gram of
/// the centered features otherwise; both give the same eigenvalues.
pub fn rpca_fit(x: &Matrix, map: &FeatureMap, r: usize) -> Result<RpcaModel> {
    let n = x.nrows();
    ensure!(n >= 2, Argument, "RPCA needs at least 2 rows, got {n}");
    let m = map.output_dim();
    ensure!(
        r >= 1 && r <= m,
        Argument,
        "cannot extract {r} components from {m} features"
    );
    let z = map.featurize(x)?;
    let means = column_means(&z);
    let zc = center_with(&z, &means);
    let denom = (n - 1) as f64;

    let (loadings, eigenvalues) = if m <= n {
        let mut cov = zc.tr_mul(&zc) / denom;
        symmetrize(&mut cov);
        let eig = sym_eig(&cov, r)?;
        let values = eig.values.iter().map(|v| v.max(0.0)).collect();
        (eig.vectors, values)
    } else {
        let mut gram = &zc * zc.transpose();
        symmetrize(&mut gram);
        let k = r.min(n);
        let eig = sym_eig(&gram, k)?;
        let top = eig.values[0].max(0.0);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        for (c, &mu) in eig.values.iter().enumerate() {
            if mu <= 1e-10 * top || mu <= 0.0 {
                break;
            }
            cols.push(zc.tr_mul(&eig.vectors.column(c)) / mu.sqrt());
            values.push(mu / denom);
        }
        let mut basis = if cols.is_empty() {
            Matrix::zeros(m, 0)
        } else {
            Matrix::from_columns(&cols)
        };
        reorthonormalize(&mut basis);
        // Remaining directions carry zero variance.
        let basis = complete_orthonormal(&basis, None, r);
        values.resize(r, 0.0);
        (basis, values)
    };
    Ok(RpcaModel {
        map: map.clone(),
        feature_means: means,
        loadings,
        eigenvalues,
    })
}

pub fn rpca_transform(model: &RpcaModel, x: &Matrix) -> Result<Matrix> {
    model.transform(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::kernel::{sample_fourier, KernelSpec};
    use crate::rng;
    use rand::Rng as _;
    use rand_distr::StandardNormal;

    fn normal_matrix(n: usize, d: usize, seed: u64) -> Matrix {
        let mut g = rng::seeded(seed);
        Matrix::from_fn(n, d, |_, _| g.sample::<f64, _>(StandardNormal))
    }

    #[test]
    fn rank_one_line() {
        let x = Matrix::from_fn(10, 2, |i, _| i as f64);
        let model = rpca_fit(&x, &FeatureMap::identity(2), 2).unwrap();
        let f = model.loadings().column(0);
        let s = 0.5f64.sqrt();
        assert!((f[0].abs() - s).abs() < 1e-10 && (f[1].abs() - s).abs() < 1e-10);
        assert!(f[0] * f[1] > 0.0);
        assert!(model.eigenvalues()[1].abs() < 1e-12);
    }

    #[test]
    fn scores_are_uncorrelated() {
        let x =
            normal_matrix(80, 4, 3) * Matrix::from_fn(4, 4, |i, j| (i + 2 * j) as f64 * 0.3 + 0.1);
        let model = rpca_fit(&x, &FeatureMap::identity(4), 4).unwrap();
        let s = model.transform(&x).unwrap();
        let sc = center_with(&s, &column_means(&s));
        let cov = sc.tr_mul(&sc) / 79.0;
        let trace = cov.trace();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(cov[(i, j)].abs() <= 1e-8 * trace);
                }
            }
            assert!((cov[(i, i)] - model.eigenvalues()[i]).abs() <= 1e-8 * trace);
        }
    }

    #[test]
    fn single_row_transform_matches_training_score() {
        let x = normal_matrix(30, 3, 8);
        let map = sample_fourier(3, 20, KernelSpec::new(0.3).unwrap(), 2).unwrap();
        let model = rpca_fit(&x, &map, 3).unwrap();
        let all = model.transform(&x).unwrap();
        let one = model.transform(&x.rows(7, 1).into_owned()).unwrap();
        assert_eq!(one.row(0), all.row(7));
    }

    #[test]
    fn wide_features_use_gram_path() {
        let x = normal_matrix(15, 2, 1);
        let map = sample_fourier(2, 40, KernelSpec::new(0.5).unwrap(), 5).unwrap();
        let model = rpca_fit(&x, &map, 20).unwrap();
        let f = model.loadings();
        let gram = f.tr_mul(f);
        assert!((gram - Matrix::identity(20, 20)).amax() < 1e-8);
        // Centered rank is at most n − 1.
        assert!(model.eigenvalues()[14..].iter().all(|&v| v == 0.0));
        for w in model.eigenvalues().windows(2) {
            assert!(w[0] >= w[1]);
        }
        // Same spectrum as the covariance route.
        let z = map.featurize(&x).unwrap();
        let zc = center_with(&z, &column_means(&z));
        let mut cov = zc.tr_mul(&zc) / 14.0;
        symmetrize(&mut cov);
        let direct = sym_eig(&cov, 5).unwrap();
        for i in 0..5 {
            assert!((direct.values[i] - model.eigenvalues()[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let x = normal_matrix(5, 2, 1);
        assert!(matches!(
            rpca_fit(&x, &FeatureMap::identity(2), 3),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            rpca_fit(&x.rows(0, 1).into_owned(), &FeatureMap::identity(2), 1),
            Err(Error::Argument(_))
        ));
        let model = rpca_fit(&x, &FeatureMap::identity(2), 1).unwrap();
        assert!(matches!(
            model.transform(&Matrix::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
    }
}
