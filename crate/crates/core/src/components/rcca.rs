//! Randomized CCA: regularized linear CCA between two feature maps.
//!
//! With centered feature matrices `Z_x`, `Z_y` and covariances `C` (divisor
//! `n − 1`) the canonical correlations are the singular values of
//! `(C_xx + γ_x I)^{-1/2} C_xy (C_yy + γ_y I)^{-1/2}`. Each side is first
//! reduced to its own singular basis `Z = U S Vᵀ`, so the SVD only ever runs
//! on a `rank(Z_x) × rank(Z_y)` core and the cost stays `O(m²n)` when the
//! feature count is below the sample count (and `O(n²m)` otherwise).

use nalgebra::SVD;

use crate::error::{ensure, Error, Result};
use crate::kernel::FeatureMap;
use crate::linalg::{
    center_with, check_finite, column_means, complete_orthonormal, reorthonormalize, sym_eig,
    symmetrize, Matrix, Vector,
};
use crate::stats::pearson;

/// Fitted RCCA model. Canonical variables are `(z_x(X) − means_x)·F` and
/// `(z_y(Y) − means_y)·G`.
#[derive(Debug, Clone, PartialEq)]
pub struct RccaModel {
    map_x: FeatureMap,
    map_y: FeatureMap,
    means_x: Vector,
    means_y: Vector,
    basis_x: Matrix,
    basis_y: Matrix,
    correlations: Vec<f64>,
    gamma_x: f64,
    gamma_y: f64,
}

impl RccaModel {
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        map_x: FeatureMap,
        map_y: FeatureMap,
        means_x: Vector,
        means_y: Vector,
        basis_x: Matrix,
        basis_y: Matrix,
        correlations: Vec<f64>,
        gamma_x: f64,
        gamma_y: f64,
    ) -> Result<Self> {
        let r = correlations.len();
        ensure!(
            means_x.len() == map_x.output_dim()
                && basis_x.nrows() == map_x.output_dim()
                && means_y.len() == map_y.output_dim()
                && basis_y.nrows() == map_y.output_dim(),
            Dimension,
            "RCCA parts disagree with their feature maps"
        );
        ensure!(
            basis_x.ncols() == r && basis_y.ncols() == r && r >= 1,
            Dimension,
            "RCCA bases must have one column per correlation"
        );
        ensure!(
            gamma_x > 0.0 && gamma_y > 0.0,
            Argument,
            "regularizers must be positive"
        );
        check_finite(&basis_x, "RCCA basis")?;
        check_finite(&basis_y, "RCCA basis")?;
        Ok(RccaModel {
            map_x,
            map_y,
            means_x,
            means_y,
            basis_x,
            basis_y,
            correlations,
            gamma_x,
            gamma_y,
        })
    }

    pub fn map_x(&self) -> &FeatureMap {
        &self.map_x
    }
    pub fn map_y(&self) -> &FeatureMap {
        &self.map_y
    }
    pub fn means_x(&self) -> &Vector {
        &self.means_x
    }
    pub fn means_y(&self) -> &Vector {
        &self.means_y
    }
    /// `F`, one column per canonical pair.
    pub fn basis_x(&self) -> &Matrix {
        &self.basis_x
    }
    /// `G`, one column per canonical pair.
    pub fn basis_y(&self) -> &Matrix {
        &self.basis_y
    }
    /// Training canonical correlations, descending in `[0, 1]`.
    pub fn correlations(&self) -> &[f64] {
        &self.correlations
    }
    pub fn gamma_x(&self) -> f64 {
        self.gamma_x
    }
    pub fn gamma_y(&self) -> f64 {
        self.gamma_y
    }
    pub fn components(&self) -> usize {
        self.correlations.len()
    }

    pub fn transform_x(&self, x: &Matrix) -> Result<Matrix> {
        let z = self.map_x.featurize(x)?;
        Ok(center_with(&z, &self.means_x) * &self.basis_x)
    }

    pub fn transform_y(&self, y: &Matrix) -> Result<Matrix> {
        let z = self.map_y.featurize(y)?;
        Ok(center_with(&z, &self.means_y) * &self.basis_y)
    }

    /// Canonical variables `(U, V)` of both views.
    pub fn transform(&self, x: &Matrix, y: &Matrix) -> Result<(Matrix, Matrix)> {
        Ok((self.transform_x(x)?, self.transform_y(y)?))
    }
}

/// One centered view reduced to its singular basis.
#[derive(Debug, Clone)]
pub(crate) struct WhitenedView {
    pub means: Vector,
    /// Left singular vectors of the centered features (`n × k`).
    u: Matrix,
    /// Right singular vectors (`m × k`).
    v: Matrix,
    /// Covariance eigenvalues `s²/(n − 1)` along `v`.
    lambdas: Vec<f64>,
    gamma: f64,
}

impl WhitenedView {
    pub fn new(z: &Matrix, gamma: f64) -> Result<Self> {
        let n = z.nrows();
        let m = z.ncols();
        let means = column_means(z);
        let zc = center_with(z, &means);
        let denom = (n - 1) as f64;
        let mut u_cols = Vec::new();
        let mut v_cols = Vec::new();
        let mut lambdas = Vec::new();
        if m <= n {
            let mut gram = zc.tr_mul(&zc);
            symmetrize(&mut gram);
            let eig = sym_eig(&gram, m)?;
            let top = eig.values[0].max(0.0);
            for (c, &mu) in eig.values.iter().enumerate() {
                if mu <= 1e-10 * top || mu <= 0.0 {
                    break;
                }
                let v = eig.vectors.column(c).into_owned();
                u_cols.push(&zc * &v / mu.sqrt());
                v_cols.push(v);
                lambdas.push(mu / denom);
            }
        } else {
            let mut gram = &zc * zc.transpose();
            symmetrize(&mut gram);
            let eig = sym_eig(&gram, n)?;
            let top = eig.values[0].max(0.0);
            for (c, &mu) in eig.values.iter().enumerate() {
                if mu <= 1e-10 * top || mu <= 0.0 {
                    break;
                }
                let u = eig.vectors.column(c).into_owned();
                v_cols.push(zc.tr_mul(&u) / mu.sqrt());
                u_cols.push(u);
                lambdas.push(mu / denom);
            }
        }
        let stack = |cols: &[Vector], rows: usize| {
            if cols.is_empty() {
                Matrix::zeros(rows, 0)
            } else {
                Matrix::from_columns(cols)
            }
        };
        let mut u = stack(&u_cols, n);
        let mut v = stack(&v_cols, m);
        // The factor derived by multiplication loses orthogonality along
        // small singular values.
        if m <= n {
            reorthonormalize(&mut u);
        } else {
            reorthonormalize(&mut v);
        }
        Ok(WhitenedView {
            means,
            u,
            v,
            lambdas,
            gamma,
        })
    }

    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    /// `U · diag(√(λ/(λ+γ)))`, the whitened canonical coordinates.
    fn whitened_scores(&self) -> Matrix {
        let mut out = self.u.clone();
        for (j, mut col) in out.column_iter_mut().enumerate() {
            let l = self.lambdas[j];
            col *= (l / (l + self.gamma)).sqrt();
        }
        out
    }

    /// Maps unit vectors `e` of the whitened space back to feature
    /// coefficients `(C + γI)^{-1/2} e`.
    fn unwhiten(&self, e: &Matrix) -> Matrix {
        let coords = self.v.tr_mul(e);
        let mut inside = coords.clone();
        for (i, mut row) in inside.row_iter_mut().enumerate() {
            row *= (self.lambdas[i] + self.gamma).powf(-0.5);
        }
        let outside = e - &self.v * &coords;
        &self.v * inside + outside / self.gamma.sqrt()
    }
}

/// Canonical bases and correlations from two reduced views.
pub(crate) fn solve_views(
    wx: &WhitenedView,
    wy: &WhitenedView,
    r: usize,
) -> Result<(Matrix, Matrix, Vec<f64>)> {
    let kx = wx.rank();
    let ky = wy.rank();
    let q = kx.min(ky);
    let mut dirs_x: Vec<Vector> = Vec::new();
    let mut dirs_y: Vec<Vector> = Vec::new();
    let mut rho = Vec::new();
    if q > 0 {
        let core = wx.whitened_scores().tr_mul(&wy.whitened_scores());
        check_finite(&core, "canonical core")?;
        let svd = SVD::new(core, true, true);
        let p = svd.u.ok_or_else(|| Error::Numeric("SVD failed".into()))?;
        let qt = svd.v_t.ok_or_else(|| Error::Numeric("SVD failed".into()))?;
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        for &i in order.iter().take(r) {
            rho.push(svd.singular_values[i].clamp(0.0, 1.0));
            dirs_x.push(&wx.v * p.column(i));
            dirs_y.push(&wy.v * qt.row(i).transpose());
        }
    }
    let mx = wx.v.nrows();
    let my = wy.v.nrows();
    let complete = |dirs: &[Vector], view: &WhitenedView, dim: usize| -> Matrix {
        let used = if dirs.is_empty() {
            Matrix::zeros(dim, 0)
        } else {
            Matrix::from_columns(dirs)
        };
        complete_orthonormal(&used, Some(&view.v), r)
    };
    let ex = complete(&dirs_x, wx, mx);
    let ey = complete(&dirs_y, wy, my);
    ensure!(
        ex.ncols() == r && ey.ncols() == r,
        Argument,
        "cannot extract {r} canonical pairs from {mx} and {my} features"
    );
    rho.resize(r, 0.0);
    Ok((wx.unwhiten(&ex), wy.unwhiten(&ey), rho))
}

/// Fits `r` canonical pairs between `featurize(map_x, X)` and
/// `featurize(map_y, Y)`.
pub fn rcca_fit(
    x: &Matrix,
    y: &Matrix,
    map_x: &FeatureMap,
    map_y: &FeatureMap,
    gamma_x: f64,
    gamma_y: f64,
    r: usize,
) -> Result<RccaModel> {
    ensure!(
        x.nrows() == y.nrows(),
        Pairing,
        "views have {} and {} rows",
        x.nrows(),
        y.nrows()
    );
    ensure!(
        x.nrows() >= 2,
        Argument,
        "RCCA needs at least 2 paired rows"
    );
    ensure!(
        gamma_x > 0.0 && gamma_y > 0.0 && gamma_x.is_finite() && gamma_y.is_finite(),
        Argument,
        "regularizers must be positive (got {gamma_x}, {gamma_y})"
    );
    let (mx, my) = (map_x.output_dim(), map_y.output_dim());
    ensure!(
        r >= 1 && r <= mx.min(my),
        Argument,
        "cannot extract {r} canonical pairs from {mx} and {my} features"
    );
    let wx = WhitenedView::new(&map_x.featurize(x)?, gamma_x)?;
    let wy = WhitenedView::new(&map_y.featurize(y)?, gamma_y)?;
    let (basis_x, basis_y, correlations) = solve_views(&wx, &wy, r)?;
    Ok(RccaModel {
        map_x: map_x.clone(),
        map_y: map_y.clone(),
        means_x: wx.means,
        means_y: wy.means,
        basis_x,
        basis_y,
        correlations,
        gamma_x,
        gamma_y,
    })
}

pub fn rcca_transform(model: &RccaModel, x: &Matrix, y: &Matrix) -> Result<(Matrix, Matrix)> {
    model.transform(x, y)
}

/// Sum over the first `top` canonical pairs of the held-out Pearson
/// correlation between `U_j` and `V_j`. Terms keep their sign.
pub fn test_correlation_sum(
    model: &RccaModel,
    x_test: &Matrix,
    y_test: &Matrix,
    top: usize,
) -> Result<f64> {
    ensure!(
        x_test.nrows() == y_test.nrows(),
        Pairing,
        "test views have {} and {} rows",
        x_test.nrows(),
        y_test.nrows()
    );
    ensure!(
        x_test.nrows() >= 3,
        Statistical,
        "test correlations need at least 3 rows, got {}",
        x_test.nrows()
    );
    ensure!(
        top >= 1 && top <= model.components(),
        Argument,
        "top = {top} exceeds the {} fitted pairs",
        model.components()
    );
    let (u, v) = model.transform(x_test, y_test)?;
    Ok((0..top)
        .map(|j| {
            let a: Vec<f64> = u.column(j).iter().copied().collect();
            let b: Vec<f64> = v.column(j).iter().copied().collect();
            pearson(&a, &b)
        })
        .sum())
}
