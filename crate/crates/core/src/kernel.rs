//! Gaussian kernel machinery: bandwidth selection, random Fourier and
//! Nyström feature maps, exact Gram matrices.
//!
//! A feature map is sampled once and then frozen. Featurizing rows with a
//! frozen map is a pure function, so the same map applied to training and
//! test data produces features in the same space.

use std::f64::consts::PI;

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{ensure, Error, Result};
use crate::linalg::{check_finite, check_nonempty, spd_inverse_sqrt, Matrix};
use crate::rng;

/// Gaussian kernel `k(x, y) = exp(-s‖x − y‖²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    s: f64,
}

impl KernelSpec {
    pub fn new(s: f64) -> Result<Self> {
        ensure!(
            s.is_finite() && s > 0.0,
            Argument,
            "kernel width s must be finite and positive, got {s}"
        );
        Ok(KernelSpec { s })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        (-self.s * d2).exp()
    }
}

/// How random Fourier features are scaled.
///
/// `Unbiased` uses `√(2/m)·cos(wᵀx + b)`, whose inner products are unbiased
/// for the kernel. `PaperLiteral` uses `√(1/m)·cos(wᵀx + b)`, which converges
/// to half the kernel plus bias terms and exists only for fidelity
/// experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleConvention {
    #[default]
    Unbiased,
    PaperLiteral,
}

impl ScaleConvention {
    pub fn name(self) -> &'static str {
        match self {
            ScaleConvention::Unbiased => "unbiased",
            ScaleConvention::PaperLiteral => "paper_literal",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "unbiased" => Ok(ScaleConvention::Unbiased),
            "paper_literal" | "paper-literal" => Ok(ScaleConvention::PaperLiteral),
            other => Err(Error::Argument(format!(
                "unknown scale convention `{other}`"
            ))),
        }
    }

    fn numerator(self) -> f64 {
        match self {
            ScaleConvention::Unbiased => 2.0,
            ScaleConvention::PaperLiteral => 1.0,
        }
    }
}

/// Pair budget for the median heuristic used by the fitting front ends.
pub const DEFAULT_MEDIAN_PAIRS: usize = 10_000;

/// Outcome of the median heuristic.
#[derive(Debug, Clone, Copy)]
pub struct MedianBandwidth {
    pub spec: KernelSpec,
    pub median: f64,
    /// Set when every sampled distance was zero; `spec` then falls back to
    /// `s = 1`.
    pub degenerate: bool,
}

/// Median heuristic: `s = 1 / (2·median²)` over pairwise Euclidean distances.
///
/// All `n(n−1)/2` pairs are used when they fit in `max_pairs`; otherwise
/// `max_pairs` distinct pairs are drawn without replacement.
pub fn median_bandwidth(x: &Matrix, max_pairs: usize, seed: u64) -> Result<MedianBandwidth> {
    check_nonempty(x, "bandwidth input")?;
    check_finite(x, "bandwidth input")?;
    let n = x.nrows();
    ensure!(
        n >= 2,
        Argument,
        "median heuristic needs at least 2 rows, got {n}"
    );
    ensure!(max_pairs >= 1, Argument, "max_pairs must be at least 1");
    let total = n * (n - 1) / 2;
    let dist = |i: usize, j: usize| -> f64 {
        x.row(i)
            .iter()
            .zip(x.row(j).iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };
    let mut dists: Vec<f64> = if total <= max_pairs {
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| dist(i, j))
            .collect()
    } else {
        let mut g = rng::seeded(seed);
        rand::seq::index::sample(&mut g, total, max_pairs)
            .into_iter()
            .map(|k| {
                let (i, j) = pair_from_index(k, n);
                dist(i, j)
            })
            .collect()
    };
    dists.sort_by(f64::total_cmp);
    let len = dists.len();
    let median = if len % 2 == 1 {
        dists[len / 2]
    } else {
        0.5 * (dists[len / 2 - 1] + dists[len / 2])
    };
    if median <= 0.0 {
        log::warn!("median pairwise distance is zero; falling back to s = 1");
        return Ok(MedianBandwidth {
            spec: KernelSpec { s: 1.0 },
            median,
            degenerate: true,
        });
    }
    Ok(MedianBandwidth {
        spec: KernelSpec::new(1.0 / (2.0 * median * median))?,
        median,
        degenerate: false,
    })
}

/// Maps a linear index in `0..n(n−1)/2` to the pair `(i, j)`, `i < j`, in
/// row-major upper-triangle order.
fn pair_from_index(k: usize, n: usize) -> (usize, usize) {
    let mut i = 0;
    let mut remaining = k;
    loop {
        let row_len = n - 1 - i;
        if remaining < row_len {
            return (i, i + 1 + remaining);
        }
        remaining -= row_len;
        i += 1;
    }
}

/// Random Fourier features `cos(Wx + b)` approximating a Gaussian kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierMap {
    weights: Matrix,
    offsets: Vec<f64>,
    spec: KernelSpec,
    convention: ScaleConvention,
}

impl FourierMap {
    /// Rebuilds a map from stored parts, e.g. after loading a model.
    pub fn from_parts(
        weights: Matrix,
        offsets: Vec<f64>,
        spec: KernelSpec,
        convention: ScaleConvention,
    ) -> Result<Self> {
        check_nonempty(&weights, "Fourier weights")?;
        check_finite(&weights, "Fourier weights")?;
        ensure!(
            offsets.len() == weights.nrows(),
            Dimension,
            "{} offsets for {} Fourier weights",
            offsets.len(),
            weights.nrows()
        );
        ensure!(
            offsets.iter().all(|b| (0.0..2.0 * PI).contains(b)),
            Argument,
            "Fourier offsets must lie in [0, 2π)"
        );
        Ok(FourierMap {
            weights,
            offsets,
            spec,
            convention,
        })
    }

    /// `m × d` matrix whose rows are the sampled frequencies.
    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn spec(&self) -> KernelSpec {
        self.spec
    }

    pub fn convention(&self) -> ScaleConvention {
        self.convention
    }
}

/// Nyström features: kernel evaluations against landmarks, whitened by
/// `K_mm^{-1/2}` so that `Z Zᵀ = K_nm K_mm^{-1} K_mn`.
#[derive(Debug, Clone, PartialEq)]
pub struct NystromMap {
    landmarks: Matrix,
    whitener: Matrix,
    spec: KernelSpec,
}

impl NystromMap {
    pub fn from_parts(landmarks: Matrix, whitener: Matrix, spec: KernelSpec) -> Result<Self> {
        check_nonempty(&landmarks, "Nyström landmarks")?;
        check_finite(&landmarks, "Nyström landmarks")?;
        check_finite(&whitener, "Nyström whitener")?;
        let m = landmarks.nrows();
        ensure!(
            whitener.nrows() == m && whitener.ncols() == m,
            Dimension,
            "whitener must be {m}x{m}, got {}x{}",
            whitener.nrows(),
            whitener.ncols()
        );
        Ok(NystromMap {
            landmarks,
            whitener,
            spec,
        })
    }

    pub fn landmarks(&self) -> &Matrix {
        &self.landmarks
    }

    pub fn whitener(&self) -> &Matrix {
        &self.whitener
    }

    pub fn spec(&self) -> KernelSpec {
        self.spec
    }
}

/// A frozen nonlinear (or identity) feature map.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureMap {
    Fourier(FourierMap),
    Nystrom(NystromMap),
    /// Passes the input through unchanged; turns RPCA/RCCA into plain
    /// PCA/CCA.
    Identity {
        dim: usize,
    },
}

impl FeatureMap {
    pub fn identity(dim: usize) -> Self {
        FeatureMap::Identity { dim }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            FeatureMap::Fourier(f) => f.weights.ncols(),
            FeatureMap::Nystrom(n) => n.landmarks.ncols(),
            FeatureMap::Identity { dim } => *dim,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            FeatureMap::Fourier(f) => f.weights.nrows(),
            FeatureMap::Nystrom(n) => n.landmarks.nrows(),
            FeatureMap::Identity { dim } => *dim,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            FeatureMap::Fourier(_) => "fourier",
            FeatureMap::Nystrom(_) => "nystrom",
            FeatureMap::Identity { .. } => "identity",
        }
    }

    pub fn spec(&self) -> Option<KernelSpec> {
        match self {
            FeatureMap::Fourier(f) => Some(f.spec),
            FeatureMap::Nystrom(n) => Some(n.spec),
            FeatureMap::Identity { .. } => None,
        }
    }

    /// Maps every row of `x` into feature space (`n × output_dim`).
    pub fn featurize(&self, x: &Matrix) -> Result<Matrix> {
        featurize(self, x)
    }
}

/// Samples `m` Fourier features for `d`-dimensional inputs with the unbiased
/// scale convention.
pub fn sample_fourier(d: usize, m: usize, spec: KernelSpec, seed: u64) -> Result<FeatureMap> {
    sample_fourier_with(d, m, spec, ScaleConvention::Unbiased, seed)
}

/// Samples `W` with i.i.d. `N(0, 2s)` entries and `b` uniform on `[0, 2π)`.
pub fn sample_fourier_with(
    d: usize,
    m: usize,
    spec: KernelSpec,
    convention: ScaleConvention,
    seed: u64,
) -> Result<FeatureMap> {
    ensure!(
        d >= 1 && m >= 1,
        Argument,
        "Fourier map needs d, m ≥ 1 (got d={d}, m={m})"
    );
    let mut g = rng::seeded(seed);
    let sd = (2.0 * spec.s).sqrt();
    let mut weights = Matrix::zeros(m, d);
    // Row-major fill so the draw order is independent of storage layout.
    for i in 0..m {
        for j in 0..d {
            weights[(i, j)] = sd * g.sample::<f64, _>(StandardNormal);
        }
    }
    let offsets = (0..m)
        .map(|_| {
            let b = g.random::<f64>() * 2.0 * PI;
            if b >= 2.0 * PI {
                0.0
            } else {
                b
            }
        })
        .collect();
    Ok(FeatureMap::Fourier(FourierMap {
        weights,
        offsets,
        spec,
        convention,
    }))
}

/// Samples `m` landmark rows of `x` without replacement and whitens with the
/// floored inverse square root of their Gram matrix.
pub fn sample_nystrom(
    x: &Matrix,
    m: usize,
    spec: KernelSpec,
    seed: u64,
    floor: f64,
) -> Result<FeatureMap> {
    check_nonempty(x, "Nyström input")?;
    check_finite(x, "Nyström input")?;
    let n = x.nrows();
    ensure!(m >= 1, Argument, "Nyström map needs m ≥ 1");
    ensure!(
        m <= n,
        Argument,
        "cannot sample {m} landmarks from {n} rows"
    );
    let mut g = rng::seeded(seed);
    let picks = rand::seq::index::sample(&mut g, n, m).into_vec();
    let landmarks = x.select_rows(picks.iter());
    let gram = gram_exact(&landmarks, spec)?;
    let whitener = spd_inverse_sqrt(&gram, floor)?;
    Ok(FeatureMap::Nystrom(NystromMap {
        landmarks,
        whitener,
        spec,
    }))
}

pub fn featurize(map: &FeatureMap, x: &Matrix) -> Result<Matrix> {
    check_finite(x, "feature input")?;
    ensure!(
        x.ncols() == map.input_dim(),
        Dimension,
        "feature map expects {} columns, got {}",
        map.input_dim(),
        x.ncols()
    );
    match map {
        FeatureMap::Fourier(f) => {
            let m = f.weights.nrows();
            let scale = (f.convention.numerator() / m as f64).sqrt();
            let mut proj = x * f.weights.transpose();
            for (j, mut col) in proj.column_iter_mut().enumerate() {
                let b = f.offsets[j];
                col.apply(|v| *v = scale * (*v + b).cos());
            }
            Ok(proj)
        }
        FeatureMap::Nystrom(ny) => {
            let cross = gram_cross(x, &ny.landmarks, ny.spec);
            Ok(cross * &ny.whitener)
        }
        FeatureMap::Identity { .. } => Ok(x.clone()),
    }
}

fn sq_norms(x: &Matrix) -> Vec<f64> {
    x.row_iter().map(|r| r.norm_squared()).collect()
}

/// `K_ij = k(x_i, y_j)` for all row pairs.
pub fn gram_cross(x: &Matrix, y: &Matrix, spec: KernelSpec) -> Matrix {
    let nx = sq_norms(x);
    let ny = sq_norms(y);
    let mut k = x * y.transpose();
    for j in 0..k.ncols() {
        for i in 0..k.nrows() {
            let d2 = (nx[i] + ny[j] - 2.0 * k[(i, j)]).max(0.0);
            k[(i, j)] = (-spec.s * d2).exp();
        }
    }
    k
}

/// Exact `n × n` Gram matrix; symmetric with unit diagonal.
pub fn gram_exact(x: &Matrix, spec: KernelSpec) -> Result<Matrix> {
    check_nonempty(x, "Gram input")?;
    check_finite(x, "Gram input")?;
    let mut k = gram_cross(x, x, spec);
    let n = k.nrows();
    for j in 0..n {
        k[(j, j)] = 1.0;
        for i in (j + 1)..n {
            let v = 0.5 * (k[(i, j)] + k[(j, i)]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    Ok(k)
}
