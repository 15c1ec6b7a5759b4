//! Semi-privileged features: canonical variables of `X` learned against
//! privileged columns that exist only at training time.
//!
//! Every privileged column `x*_i` is paired with the labels as a two-column
//! view `[x*_i, y]`. RCCA between `X` and that view yields `per_attr`
//! canonical directions on the `X` side; the concatenated `X`-side variables
//! are the new features and need nothing but `X` at test time.

use rayon::prelude::*;

use crate::components::rcca::{solve_views, WhitenedView};
use crate::error::{ensure, Result};
use crate::kernel::{median_bandwidth, sample_fourier, FeatureMap, DEFAULT_MEDIAN_PAIRS};
use crate::linalg::{center_with, check_finite, Matrix, Vector};
use crate::rng::derive_seed;

/// Outcome of one privileged column.
#[derive(Debug, Clone, PartialEq)]
pub enum AttributeStatus {
    Fitted {
        /// `m × per_attr` X-side canonical directions.
        basis: Matrix,
        correlations: Vec<f64>,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LupiAttribute {
    /// Column index in the privileged matrix.
    pub column: usize,
    pub status: AttributeStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LupiModel {
    map_x: FeatureMap,
    means_x: Vector,
    per_attr: usize,
    gamma: f64,
    attributes: Vec<LupiAttribute>,
}

impl LupiModel {
    pub fn from_parts(
        map_x: FeatureMap,
        means_x: Vector,
        per_attr: usize,
        gamma: f64,
        attributes: Vec<LupiAttribute>,
    ) -> Result<Self> {
        let m = map_x.output_dim();
        ensure!(
            means_x.len() == m,
            Dimension,
            "{} feature means for {m} features",
            means_x.len()
        );
        ensure!(per_attr >= 1, Argument, "per_attr must be at least 1");
        for a in &attributes {
            if let AttributeStatus::Fitted {
                basis,
                correlations,
            } = &a.status
            {
                ensure!(
                    basis.nrows() == m
                        && basis.ncols() == per_attr
                        && correlations.len() == per_attr,
                    Dimension,
                    "attribute {} has a {}×{} basis, expected {m}×{per_attr}",
                    a.column,
                    basis.nrows(),
                    basis.ncols()
                );
                check_finite(basis, "LUPI basis")?;
            }
        }
        Ok(LupiModel {
            map_x,
            means_x,
            per_attr,
            gamma,
            attributes,
        })
    }

    pub fn map_x(&self) -> &FeatureMap {
        &self.map_x
    }
    pub fn means_x(&self) -> &Vector {
        &self.means_x
    }
    pub fn per_attr(&self) -> usize {
        self.per_attr
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn attributes(&self) -> &[LupiAttribute] {
        &self.attributes
    }

    pub fn fitted_count(&self) -> usize {
        self.attributes
            .iter()
            .filter(|a| matches!(a.status, AttributeStatus::Fitted { .. }))
            .count()
    }

    /// Output columns: `per_attr` per fitted attribute.
    pub fn width(&self) -> usize {
        self.per_attr * self.fitted_count()
    }

    /// Semi-privileged features of new rows, computed from `X` alone.
    pub fn transform(&self, x: &Matrix) -> Result<Matrix> {
        let zc = center_with(&self.map_x.featurize(x)?, &self.means_x);
        let mut out = Matrix::zeros(x.nrows(), self.width());
        let mut col = 0;
        for a in &self.attributes {
            if let AttributeStatus::Fitted { basis, .. } = &a.status {
                out.columns_mut(col, self.per_attr)
                    .copy_from(&(&zc * basis));
                col += self.per_attr;
            }
        }
        Ok(out)
    }
}

/// Fits one RCCA per privileged column and returns the model together with
/// the `n × (per_attr · fitted)` training features.
///
/// The `X` side uses one Fourier map (median bandwidth) shared by all
/// attributes; each privileged view `[x*_i, y]` gets its own Fourier map with
/// `m` features. Constant privileged columns are skipped with a warning.
#[allow(clippy::too_many_arguments)]
pub fn lupi_features(
    x: &Matrix,
    x_star: &Matrix,
    y: &[f64],
    m: usize,
    gamma: f64,
    per_attr: usize,
    seed: u64,
) -> Result<(LupiModel, Matrix)> {
    let n = x.nrows();
    ensure!(
        x_star.nrows() == n && y.len() == n,
        Pairing,
        "X has {n} rows, privileged input {} and labels {}",
        x_star.nrows(),
        y.len()
    );
    ensure!(n >= 2, Argument, "LUPI needs at least 2 rows");
    ensure!(
        per_attr >= 1 && per_attr <= m,
        Argument,
        "per_attr = {per_attr} must lie in 1..={m}"
    );
    ensure!(
        gamma > 0.0 && gamma.is_finite(),
        Argument,
        "γ must be positive, got {gamma}"
    );
    check_finite(x_star, "privileged input")?;
    ensure!(
        y.iter().all(|v| v.is_finite()),
        Argument,
        "labels must be finite"
    );

    let spec_x = median_bandwidth(x, DEFAULT_MEDIAN_PAIRS, derive_seed(seed, 0))?.spec;
    let map_x = sample_fourier(x.ncols(), m, spec_x, derive_seed(seed, 1))?;
    let wx = WhitenedView::new(&map_x.featurize(x)?, gamma)?;

    let attributes = (0..x_star.ncols())
        .into_par_iter()
        .map(|i| -> Result<LupiAttribute> {
            let column = x_star.column(i);
            if column.iter().all(|&v| v == column[0]) {
                return Ok(LupiAttribute {
                    column: i,
                    status: AttributeStatus::Skipped {
                        reason: "constant privileged column".into(),
                    },
                });
            }
            let view = Matrix::from_fn(n, 2, |r, c| if c == 0 { column[r] } else { y[r] });
            let stream = 2 + 2 * i as u64;
            let spec =
                median_bandwidth(&view, DEFAULT_MEDIAN_PAIRS, derive_seed(seed, stream))?.spec;
            let map = sample_fourier(2, m, spec, derive_seed(seed, stream + 1))?;
            let wy = WhitenedView::new(&map.featurize(&view)?, gamma)?;
            let (basis, _, correlations) = solve_views(&wx, &wy, per_attr)?;
            Ok(LupiAttribute {
                column: i,
                status: AttributeStatus::Fitted {
                    basis,
                    correlations,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for a in &attributes {
        if let AttributeStatus::Skipped { reason } = &a.status {
            log::warn!("privileged column {} skipped: {reason}", a.column);
        }
    }
    let model = LupiModel {
        map_x,
        means_x: wx.means.clone(),
        per_attr,
        gamma,
        attributes,
    };
    let features = model.transform(x)?;
    Ok((model, features))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::rng;
    use rand::Rng as _;
    use rand_distr::StandardNormal;

    fn normal_matrix(n: usize, d: usize, seed: u64) -> Matrix {
        let mut g = rng::seeded(seed);
        Matrix::from_fn(n, d, |_, _| g.sample::<f64, _>(StandardNormal))
    }

    #[test]
    fn planted_privileged_copy_is_recovered() {
        let x = normal_matrix(150, 3, 1);
        let noise = normal_matrix(150, 1, 2);
        let x_star = Matrix::from_fn(
            150,
            2,
            |i, j| if j == 0 { x[(i, 1)] } else { noise[(i, 0)] },
        );
        let mut g = rng::seeded(3);
        let y: Vec<f64> = (0..150).map(|_| g.random_range(0..3) as f64).collect();
        let (model, feats) = lupi_features(&x, &x_star, &y, 60, 1e-3, 3, 4).unwrap();
        match &model.attributes()[0].status {
            AttributeStatus::Fitted { correlations, .. } => {
                assert!(correlations[0] >= 0.9, "{correlations:?}")
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(feats.shape(), (150, 6));
    }

    #[test]
    fn constant_column_is_skipped() {
        let x = normal_matrix(40, 2, 5);
        let mut x_star = normal_matrix(40, 3, 6);
        x_star.column_mut(1).fill(2.0);
        let y: Vec<f64> = (0..40).map(|i| (i % 2) as f64).collect();
        let (model, feats) = lupi_features(&x, &x_star, &y, 20, 1e-3, 4, 0).unwrap();
        assert!(matches!(
            model.attributes()[1].status,
            AttributeStatus::Skipped { .. }
        ));
        assert_eq!(model.fitted_count(), 2);
        assert_eq!(feats.ncols(), 8);
    }

    #[test]
    fn transform_needs_only_x() {
        let x = normal_matrix(50, 2, 7);
        let x_star = normal_matrix(50, 2, 8);
        let y: Vec<f64> = (0..50).map(|i| (i % 3) as f64).collect();
        let (model, feats) = lupi_features(&x, &x_star, &y, 25, 1e-2, 2, 9).unwrap();
        assert_eq!(model.transform(&x).unwrap(), feats);
        let fresh = normal_matrix(5, 2, 10);
        assert_eq!(model.transform(&fresh).unwrap().shape(), (5, 4));
    }

    #[test]
    fn rejects_mismatched_rows() {
        let x = normal_matrix(10, 2, 1);
        let x_star = normal_matrix(9, 1, 1);
        let y = vec![0.0; 10];
        assert!(matches!(
            lupi_features(&x, &x_star, &y, 5, 1e-3, 2, 0),
            Err(Error::Pairing(_))
        ));
    }
}
