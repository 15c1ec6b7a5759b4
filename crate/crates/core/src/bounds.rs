//! Error-bound laboratory.
//!
//! Compares randomized kernel approximations against exact kernel oracles:
//! the operator-norm error `‖K̂ − K‖` for component analysis and
//! `‖R̂⁻¹L̂ − R⁻¹L‖` for canonical correlation, where
//!
//! ```text
//! R⁻¹ = diag((K_x + γ_x I)⁻¹, (K_y + γ_y I)⁻¹),   L = [[0, K_y], [K_x, 0]]
//! ```
//!
//! and the hatted versions use `K̂ = Z Zᵀ`. Exact oracles materialize `n × n`
//! (or `2n × 2n`) matrices, so they refuse inputs above a size cap.

use std::io::Write;

use nalgebra::{Cholesky, SVD};
use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{ensure, Error, Result};
use crate::kernel::{
    gram_exact, median_bandwidth, sample_fourier_with, sample_nystrom, FeatureMap, KernelSpec,
    ScaleConvention, DEFAULT_MEDIAN_PAIRS,
};
use crate::linalg::{operator_norm, sym_eig, symmetrize, EigenResult, Matrix};
use crate::rng;
use crate::stats::log_log_slope;

pub const DEFAULT_ORACLE_CAP: usize = 2000;
pub const ORACLE_CAP_ENV: &str = "RNCA_ORACLE_CAP";

/// Relative tolerance for the power iterations behind every error norm.
const NORM_TOL: f64 = 1e-9;

/// Oracle cap from `RNCA_ORACLE_CAP`, or the default when unset.
pub fn oracle_cap_from_env() -> Result<usize> {
    match std::env::var(ORACLE_CAP_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            Error::Argument(format!(
                "{ORACLE_CAP_ENV} must be a positive integer, got `{v}`"
            ))
        }),
        Err(_) => Ok(DEFAULT_ORACLE_CAP),
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    ensure!(
        n <= cap,
        Capacity,
        "exact oracle refused: n = {n} exceeds the oracle cap {cap} (raise {ORACLE_CAP_ENV})"
    );
    Ok(())
}

fn centered_gram(x: &Matrix, spec: KernelSpec) -> Result<Matrix> {
    let k = gram_exact(x, spec)?;
    let n = k.nrows() as f64;
    let row_means: Vec<f64> = k.row_iter().map(|r| r.sum() / n).collect();
    let grand = row_means.iter().sum::<f64>() / n;
    let mut c = Matrix::from_fn(k.nrows(), k.ncols(), |i, j| {
        k[(i, j)] - row_means[i] - row_means[j] + grand
    });
    symmetrize(&mut c);
    Ok(c)
}

/// Exact kernel PCA: top-`r` eigenpairs of `HKH`, `H = I − 11ᵀ/n`.
pub fn kpca_exact(x: &Matrix, spec: KernelSpec, r: usize, cap: usize) -> Result<EigenResult> {
    check_cap(x.nrows(), cap)?;
    sym_eig(&centered_gram(x, spec)?, r)
}

/// `S = K^{1/2}(K + γI)^{-1/2}` for the centered Gram scaled by `1/(n − 1)`.
fn kernel_shrinker(x: &Matrix, spec: KernelSpec, gamma: f64) -> Result<Matrix> {
    let n = x.nrows();
    let kc = centered_gram(x, spec)? / (n - 1) as f64;
    let eig = sym_eig(&kc, n)?;
    let mut scaled = eig.vectors.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        let l = eig.values[j].max(0.0);
        col *= (l / (l + gamma)).sqrt();
    }
    Ok(scaled * eig.vectors.transpose())
}

/// Exact kernel CCA correlations.
///
/// The eigenvalues of `R⁻¹L` come in pairs `±ρ`; the non-negative ones are
/// the singular values of `S_x S_y` with `S = K^{1/2}(K + γI)^{-1/2}`. The
/// Gram matrices are centered and scaled by `1/(n − 1)` so that the result
/// is the `m → ∞` limit of [`crate::components::rcca_fit`] at the same `γ`.
#[allow(clippy::too_many_arguments)]
pub fn kcca_exact(
    x: &Matrix,
    y: &Matrix,
    spec_x: KernelSpec,
    spec_y: KernelSpec,
    gamma_x: f64,
    gamma_y: f64,
    r: usize,
    cap: usize,
) -> Result<Vec<f64>> {
    ensure!(
        x.nrows() == y.nrows(),
        Pairing,
        "views have {} and {} rows",
        x.nrows(),
        y.nrows()
    );
    let n = x.nrows();
    check_cap(n, cap)?;
    ensure!(n >= 2, Argument, "KCCA needs at least 2 rows");
    ensure!(
        gamma_x > 0.0 && gamma_y > 0.0,
        Argument,
        "regularizers must be positive"
    );
    ensure!(
        r >= 1 && r <= n,
        Argument,
        "cannot extract {r} correlations from {n} rows"
    );
    let sx = kernel_shrinker(x, spec_x, gamma_x)?;
    let sy = kernel_shrinker(y, spec_y, gamma_y)?;
    let svd = SVD::new(sx * sy, false, false);
    let mut rho: Vec<f64> = svd
        .singular_values
        .iter()
        .map(|v| v.clamp(0.0, 1.0))
        .collect();
    rho.sort_by(|a, b| b.total_cmp(a));
    rho.truncate(r);
    Ok(rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Pca,
    Cca,
}

impl BoundKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pca" => Ok(BoundKind::Pca),
            "cca" => Ok(BoundKind::Cca),
            other => Err(Error::Argument(format!("unknown bound kind `{other}`"))),
        }
    }
}

/// `Paper` evaluates the printed expressions. `Corrected` doubles the
/// constants that depend on the feature-norm bound, which is `2n` rather
/// than `n` under the unbiased scale convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundVariant {
    #[default]
    Paper,
    Corrected,
}

impl BoundVariant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(BoundVariant::Paper),
            "corrected" => Ok(BoundVariant::Corrected),
            other => Err(Error::Argument(format!("unknown bound variant `{other}`"))),
        }
    }
}

/// Closed-form expected-error bound (natural logarithms).
///
/// * pca: `√(3n² ln n / m) + 2n ln n / m`
/// * cca: `(1/γ)(√(3n² ln 2n / m) + 2n ln 2n / m)`
///
/// The corrected variant uses `6n²` and `4n` instead of `3n²` and `2n`.
pub fn bound_value(
    kind: BoundKind,
    n: usize,
    m: usize,
    gamma: f64,
    variant: BoundVariant,
) -> Result<f64> {
    ensure!(n >= 2, Argument, "bound needs n ≥ 2, got {n}");
    ensure!(m >= 1, Argument, "bound needs m ≥ 1, got {m}");
    let (root_c, lin_c) = match variant {
        BoundVariant::Paper => (3.0, 2.0),
        BoundVariant::Corrected => (6.0, 4.0),
    };
    let nf = n as f64;
    let mf = m as f64;
    let core =
        |log_term: f64| (root_c * nf * nf * log_term / mf).sqrt() + lin_c * nf * log_term / mf;
    match kind {
        BoundKind::Pca => Ok(core(nf.ln())),
        BoundKind::Cca => {
            ensure!(
                gamma > 0.0 && gamma.is_finite(),
                Argument,
                "cca bound needs γ > 0, got {gamma}"
            );
            Ok(core((2.0 * nf).ln()) / gamma)
        }
    }
}

/// How the random features of each trial are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureSampler {
    Fourier(ScaleConvention),
    /// Landmarks drawn from the data rows, inverse square root floored at
    /// `floor`.
    Nystrom {
        floor: f64,
    },
}

impl Default for FeatureSampler {
    fn default() -> Self {
        FeatureSampler::Fourier(ScaleConvention::Unbiased)
    }
}

impl FeatureSampler {
    fn sample(&self, x: &Matrix, m: usize, spec: KernelSpec, seed: u64) -> Result<FeatureMap> {
        match *self {
            FeatureSampler::Fourier(conv) => sample_fourier_with(x.ncols(), m, spec, conv, seed),
            FeatureSampler::Nystrom { floor } => sample_nystrom(x, m, spec, seed, floor),
        }
    }
}

/// Inputs of one Monte-Carlo error measurement.
#[derive(Debug, Clone)]
pub struct ErrorExperiment<'a> {
    pub kind: BoundKind,
    pub x: &'a Matrix,
    /// Required for [`BoundKind::Cca`].
    pub y: Option<&'a Matrix>,
    pub spec_x: KernelSpec,
    pub spec_y: KernelSpec,
    pub m: usize,
    /// Regularizer used on both views (cca only).
    pub gamma: f64,
    pub trials: usize,
    pub seed: u64,
    pub sampler: FeatureSampler,
    pub oracle_cap: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorStats {
    pub mean: f64,
    /// Sample standard deviation across trials (0 for a single trial).
    pub stddev: f64,
    pub per_trial: Vec<f64>,
}

impl ErrorStats {
    fn from_trials(per_trial: Vec<f64>) -> Self {
        let n = per_trial.len() as f64;
        let mean = per_trial.iter().sum::<f64>() / n;
        let stddev = if per_trial.len() > 1 {
            (per_trial
                .iter()
                .map(|v| (v - mean) * (v - mean))
                .sum::<f64>()
                / (n - 1.0))
                .sqrt()
        } else {
            0.0
        };
        ErrorStats {
            mean,
            stddev,
            per_trial,
        }
    }
}

fn approx_gram(map: &FeatureMap, x: &Matrix) -> Result<Matrix> {
    let z = map.featurize(x)?;
    let mut k = &z * z.transpose();
    symmetrize(&mut k);
    Ok(k)
}

/// `(K + γI)⁻¹ B` through a Cholesky solve.
fn regularized_solve(k: &Matrix, gamma: f64, b: &Matrix) -> Result<Matrix> {
    let n = k.nrows();
    let shifted = k + Matrix::identity(n, n) * gamma;
    let chol = Cholesky::new(shifted)
        .ok_or_else(|| Error::Numeric("regularized Gram matrix is not positive definite".into()))?;
    Ok(chol.solve(b))
}

/// `R⁻¹L` as a dense `2n × 2n` matrix.
fn block_system(kx: &Matrix, ky: &Matrix, gamma: f64) -> Result<Matrix> {
    let n = kx.nrows();
    let upper = regularized_solve(kx, gamma, ky)?;
    let lower = regularized_solve(ky, gamma, kx)?;
    let mut out = Matrix::zeros(2 * n, 2 * n);
    out.view_mut((0, n), (n, n)).copy_from(&upper);
    out.view_mut((n, 0), (n, n)).copy_from(&lower);
    Ok(out)
}

/// Per-trial seed: `seed + trial`, so every trial is reproducible on its own.
fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

/// Mean and spread over `trials` fresh feature draws of the operator-norm
/// error between the randomized and exact kernel quantities.
///
/// Trials run in parallel but their results are reduced in trial order, so
/// the output does not depend on the number of worker threads.
pub fn empirical_error(exp: &ErrorExperiment<'_>) -> Result<ErrorStats> {
    let n = exp.x.nrows();
    check_cap(n, exp.oracle_cap)?;
    ensure!(exp.trials >= 1, Argument, "trials must be at least 1");
    ensure!(exp.m >= 1, Argument, "m must be at least 1");
    match exp.kind {
        BoundKind::Pca => {
            let k = gram_exact(exp.x, exp.spec_x)?;
            let per_trial = (0..exp.trials)
                .into_par_iter()
                .map(|t| -> Result<f64> {
                    let map =
                        exp.sampler
                            .sample(exp.x, exp.m, exp.spec_x, trial_seed(exp.seed, t))?;
                    let diff = approx_gram(&map, exp.x)? - &k;
                    Ok(operator_norm(&diff, NORM_TOL))
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(ErrorStats::from_trials(per_trial))
        }
        BoundKind::Cca => {
            let y = exp
                .y
                .ok_or_else(|| Error::Argument("cca error needs a second view".into()))?;
            ensure!(
                y.nrows() == n,
                Pairing,
                "views have {n} and {} rows",
                y.nrows()
            );
            ensure!(exp.gamma > 0.0, Argument, "γ must be positive");
            let exact = block_system(
                &gram_exact(exp.x, exp.spec_x)?,
                &gram_exact(y, exp.spec_y)?,
                exp.gamma,
            )?;
            let per_trial = (0..exp.trials)
                .into_par_iter()
                .map(|t| -> Result<f64> {
                    let s = trial_seed(exp.seed, t);
                    let mx =
                        exp.sampler
                            .sample(exp.x, exp.m, exp.spec_x, rng::derive_seed(s, 0))?;
                    let my = exp
                        .sampler
                        .sample(y, exp.m, exp.spec_y, rng::derive_seed(s, 1))?;
                    let approx =
                        block_system(&approx_gram(&mx, exp.x)?, &approx_gram(&my, y)?, exp.gamma)?;
                    Ok(operator_norm(&(approx - &exact), NORM_TOL))
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(ErrorStats::from_trials(per_trial))
        }
    }
}

/// `‖mean_t K̂_t − K‖` over the same trials as [`empirical_error`] (pca).
pub fn pooled_gram_error(exp: &ErrorExperiment<'_>) -> Result<f64> {
    check_cap(exp.x.nrows(), exp.oracle_cap)?;
    ensure!(exp.trials >= 1, Argument, "trials must be at least 1");
    let k = gram_exact(exp.x, exp.spec_x)?;
    let mut sum = Matrix::zeros(k.nrows(), k.ncols());
    for t in 0..exp.trials {
        let map = exp
            .sampler
            .sample(exp.x, exp.m, exp.spec_x, trial_seed(exp.seed, t))?;
        sum += approx_gram(&map, exp.x)?;
    }
    Ok(operator_norm(&(sum / exp.trials as f64 - k), NORM_TOL))
}

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    N,
    M,
    Gamma,
}

impl SweepParam {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(SweepParam::N),
            "m" => Ok(SweepParam::M),
            "gamma" => Ok(SweepParam::Gamma),
            other => Err(Error::Argument(format!(
                "unknown sweep parameter `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub kind: BoundKind,
    pub varying: SweepParam,
    pub grid: Vec<f64>,
    pub base_n: usize,
    pub base_m: usize,
    pub base_gamma: f64,
    /// Columns of each synthetic view.
    pub dims: usize,
    pub trials: usize,
    pub seed: u64,
    pub convention: ScaleConvention,
    pub bound_variant: BoundVariant,
    pub oracle_cap: usize,
}

impl SweepConfig {
    /// Defaults at `n = m = 1000`, `γ = 10⁻³`, 10 columns per view, 25 trials.
    pub fn new(kind: BoundKind, varying: SweepParam, grid: Vec<f64>) -> Self {
        SweepConfig {
            kind,
            varying,
            grid,
            base_n: 1000,
            base_m: 1000,
            base_gamma: 1e-3,
            dims: 10,
            trials: 25,
            seed: 0,
            convention: ScaleConvention::Unbiased,
            bound_variant: BoundVariant::Paper,
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        ensure!(!self.grid.is_empty(), Argument, "sweep grid is empty");
        ensure!(
            self.grid.windows(2).all(|w| w[0] < w[1]),
            Argument,
            "sweep grid must be strictly increasing"
        );
        ensure!(self.trials >= 1, Argument, "trials must be at least 1");
        ensure!(self.dims >= 1, Argument, "dims must be at least 1");
        for &v in &self.grid {
            match self.varying {
                SweepParam::N | SweepParam::M => ensure!(
                    v >= 1.0 && v.fract() == 0.0,
                    Argument,
                    "grid value {v} is not a positive integer"
                ),
                SweepParam::Gamma => ensure!(
                    v > 0.0 && v.is_finite(),
                    Argument,
                    "γ = {v} must be positive"
                ),
            }
        }
        Ok(())
    }

    fn point(&self, value: f64) -> (usize, usize, f64) {
        match self.varying {
            SweepParam::N => (value as usize, self.base_m, self.base_gamma),
            SweepParam::M => (self.base_n, value as usize, self.base_gamma),
            SweepParam::Gamma => (self.base_n, self.base_m, value),
        }
    }
}

/// One sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub param_value: f64,
    pub empirical_mean_error: f64,
    pub empirical_stddev: f64,
    pub bound_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
    /// Least-squares slope of `ln(mean error)` against `ln(param)`.
    pub log_log_slope: f64,
}

fn normal_data(n: usize, d: usize, seed: u64) -> Matrix {
    let mut g = rng::seeded(seed);
    let mut out = Matrix::zeros(n, d);
    for i in 0..n {
        for j in 0..d {
            out[(i, j)] = g.sample::<f64, _>(StandardNormal);
        }
    }
    out
}

/// Runs the error experiment at every grid value on fresh standard-normal
/// data and pairs it with the closed-form bound.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.grid.len());
    for (g, &value) in config.grid.iter().enumerate() {
        let (n, m, gamma) = config.point(value);
        check_cap(n, config.oracle_cap)?;
        let point_seed = rng::derive_seed(config.seed, g as u64);
        let x = normal_data(n, config.dims, rng::derive_seed(point_seed, 0));
        let y = normal_data(n, config.dims, rng::derive_seed(point_seed, 1));
        let spec_x =
            median_bandwidth(&x, DEFAULT_MEDIAN_PAIRS, rng::derive_seed(point_seed, 2))?.spec;
        let spec_y =
            median_bandwidth(&y, DEFAULT_MEDIAN_PAIRS, rng::derive_seed(point_seed, 3))?.spec;
        let stats = empirical_error(&ErrorExperiment {
            kind: config.kind,
            x: &x,
            y: Some(&y),
            spec_x,
            spec_y,
            m,
            gamma,
            trials: config.trials,
            seed: rng::derive_seed(point_seed, 4),
            sampler: FeatureSampler::Fourier(config.convention),
            oracle_cap: config.oracle_cap,
        })?;
        let bound = bound_value(config.kind, n, m, gamma, config.bound_variant)?;
        log::info!(
            "sweep point {value}: error {:.6e}, bound {:.6e}",
            stats.mean,
            bound
        );
        records.push(SweepRecord {
            param_value: value,
            empirical_mean_error: stats.mean,
            empirical_stddev: stats.stddev,
            bound_value: bound,
        });
    }
    let xs: Vec<f64> = records.iter().map(|r| r.param_value).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.empirical_mean_error).collect();
    let slope = if records.len() >= 2 && ys.iter().all(|&v| v > 0.0) {
        log_log_slope(&xs, &ys)
    } else {
        f64::NAN
    };
    Ok(SweepReport {
        records,
        log_log_slope: slope,
    })
}

pub const SWEEP_HEADER: &str = "param,mean_error,stddev,bound";

/// Writes records as `param,mean_error,stddev,bound` with 17 significant
/// digits per value.
pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            r.param_value, r.empirical_mean_error, r.empirical_stddev, r.bound_value
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: f64) -> KernelSpec {
        KernelSpec::new(s).unwrap()
    }

    #[test]
    fn bound_spot_values() {
        // √(3·10⁶·ln 1000/1000) + 2·1000·ln 1000/1000 = 143.956 + 13.816
        let pca = bound_value(BoundKind::Pca, 1000, 1000, 0.0, BoundVariant::Paper).unwrap();
        assert!((pca - 157.77).abs() < 0.01, "{pca}");
        // (√(3·10⁶·ln 2000/1000) + 2·ln 2000)/10⁻³ = (151.005 + 15.202)·10³
        let cca = bound_value(BoundKind::Cca, 1000, 1000, 1e-3, BoundVariant::Paper).unwrap();
        assert!((cca - 1.662e5).abs() < 0.001e5, "{cca}");
    }

    #[test]
    fn bound_monotonicity() {
        for variant in [BoundVariant::Paper, BoundVariant::Corrected] {
            for kind in [BoundKind::Pca, BoundKind::Cca] {
                let b = |n, m, g| bound_value(kind, n, m, g, variant).unwrap();
                for m in [10, 100, 1000] {
                    assert!(b(500, m * 2, 1e-2) < b(500, m, 1e-2));
                }
                for n in [10, 100, 1000] {
                    assert!(b(n + 1, 100, 1e-2) > b(n, 100, 1e-2));
                }
                if kind == BoundKind::Cca {
                    assert!(b(100, 100, 1e-1) < b(100, 100, 1e-2));
                }
            }
        }
        let paper = bound_value(BoundKind::Pca, 100, 50, 0.0, BoundVariant::Paper).unwrap();
        let corr = bound_value(BoundKind::Pca, 100, 50, 0.0, BoundVariant::Corrected).unwrap();
        assert!(corr > paper);
    }

    #[test]
    fn root_term_halves_at_four_times_m() {
        let n = 1000usize;
        let root = |m: usize| (3.0 * (n * n) as f64 * (n as f64).ln() / m as f64).sqrt();
        let full = |m| bound_value(BoundKind::Pca, n, m, 0.0, BoundVariant::Paper).unwrap();
        let m = 1_000_000;
        assert!(((full(4 * m) / full(m)) - 0.5).abs() < 0.01);
        assert!((root(4 * m) / root(m) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bound_argument_errors() {
        assert!(bound_value(BoundKind::Pca, 1, 10, 0.0, BoundVariant::Paper).is_err());
        assert!(bound_value(BoundKind::Pca, 10, 0, 0.0, BoundVariant::Paper).is_err());
        assert!(bound_value(BoundKind::Cca, 10, 10, 0.0, BoundVariant::Paper).is_err());
    }

    #[test]
    fn kpca_identical_points() {
        let x = Matrix::from_element(5, 2, 0.7);
        let res = kpca_exact(&x, spec(1.0), 5, DEFAULT_ORACLE_CAP).unwrap();
        assert!(res.values.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn kpca_two_points() {
        let x = Matrix::from_row_slice(2, 1, &[0.0, 1.0]);
        let res = kpca_exact(&x, spec(0.5), 2, DEFAULT_ORACLE_CAP).unwrap();
        assert!(res.values[0] > 0.1);
        assert!(res.values[1].abs() < 1e-12);
    }

    #[test]
    fn kpca_trace_identity() {
        let x = normal_data(40, 3, 5);
        let hkh = centered_gram(&x, spec(0.2)).unwrap();
        let res = kpca_exact(&x, spec(0.2), 40, DEFAULT_ORACLE_CAP).unwrap();
        let sum: f64 = res.values.iter().sum();
        assert!((sum - hkh.trace()).abs() < 1e-8);
    }

    #[test]
    fn oracle_cap_is_enforced() {
        let x = normal_data(30, 2, 1);
        let err = kpca_exact(&x, spec(0.5), 2, 20).unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
        assert!(err.to_string().contains("20"));
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn kcca_self_and_infinite_regularization() {
        let x = normal_data(60, 1, 3);
        let gamma = 1e-4;
        let rho = kcca_exact(
            &x,
            &x,
            spec(0.5),
            spec(0.5),
            gamma,
            gamma,
            3,
            DEFAULT_ORACLE_CAP,
        )
        .unwrap();
        assert!(rho[0] >= 1.0 - 10.0 * gamma, "{rho:?}");
        let y = normal_data(60, 2, 4);
        let rho = kcca_exact(
            &x,
            &y,
            spec(0.5),
            spec(0.5),
            1e9,
            1e9,
            3,
            DEFAULT_ORACLE_CAP,
        )
        .unwrap();
        assert!(rho.iter().all(|&r| r < 1e-8));
    }

    #[test]
    fn kcca_swap_invariance() {
        let x = normal_data(50, 2, 8);
        let y = normal_data(50, 3, 9);
        let a = kcca_exact(
            &x,
            &y,
            spec(0.3),
            spec(0.2),
            1e-2,
            5e-2,
            4,
            DEFAULT_ORACLE_CAP,
        )
        .unwrap();
        let b = kcca_exact(
            &y,
            &x,
            spec(0.2),
            spec(0.3),
            5e-2,
            1e-2,
            4,
            DEFAULT_ORACLE_CAP,
        )
        .unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).abs() < 1e-10);
        }
    }

    #[test]
    fn full_nystrom_error_vanishes() {
        let x = normal_data(60, 3, 2);
        let s = median_bandwidth(&x, usize::MAX, 0).unwrap().spec;
        let stats = empirical_error(&ErrorExperiment {
            kind: BoundKind::Pca,
            x: &x,
            y: None,
            spec_x: s,
            spec_y: s,
            m: 60,
            gamma: 1e-3,
            trials: 3,
            seed: 4,
            sampler: FeatureSampler::Nystrom { floor: 1e-12 },
            oracle_cap: DEFAULT_ORACLE_CAP,
        })
        .unwrap();
        assert!(stats.mean <= 1e-6, "{}", stats.mean);
    }

    #[test]
    fn cca_requires_second_view() {
        let x = normal_data(10, 2, 2);
        let s = spec(0.5);
        let exp = ErrorExperiment {
            kind: BoundKind::Cca,
            x: &x,
            y: None,
            spec_x: s,
            spec_y: s,
            m: 8,
            gamma: 1e-2,
            trials: 1,
            seed: 0,
            sampler: FeatureSampler::default(),
            oracle_cap: DEFAULT_ORACLE_CAP,
        };
        assert!(matches!(empirical_error(&exp), Err(Error::Argument(_))));
    }

    #[test]
    fn sweep_csv_format() {
        let recs = [SweepRecord {
            param_value: 32.0,
            empirical_mean_error: 0.1,
            empirical_stddev: 0.0,
            bound_value: 273.25,
        }];
        let mut buf = Vec::new();
        write_sweep_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(SWEEP_HEADER));
        let row: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(row, vec![32.0, 0.1, 0.0, 273.25]);
    }

    #[test]
    fn sweep_config_validation() {
        let mut cfg = SweepConfig::new(BoundKind::Pca, SweepParam::M, vec![64.0, 32.0]);
        assert!(run_sweep(&cfg).is_err());
        cfg.grid = vec![];
        assert!(run_sweep(&cfg).is_err());
        cfg.grid = vec![1.5];
        assert!(run_sweep(&cfg).is_err());
    }
}
