//! Synthetic data shared by the integration tests.
#![allow(dead_code)]

use rand::Rng as _;
use rand_distr::StandardNormal;
use rnca::rng;
use rnca::Matrix;

pub fn normal(n: usize, d: usize, seed: u64) -> Matrix {
    let mut g = rng::seeded(seed);
    let mut out = Matrix::zeros(n, d);
    for i in 0..n {
        for j in 0..d {
            out[(i, j)] = g.sample::<f64, _>(StandardNormal);
        }
    }
    out
}

/// `per` points around each center with isotropic spread `sigma`.
pub fn blobs(centers: &[&[f64]], per: usize, sigma: f64, seed: u64) -> (Matrix, Vec<usize>) {
    let d = centers[0].len();
    let noise = normal(per * centers.len(), d, seed);
    let mut labels = Vec::new();
    let x = Matrix::from_fn(per * centers.len(), d, |i, j| {
        centers[i / per][j] + sigma * noise[(i, j)]
    });
    for c in 0..centers.len() {
        labels.extend(std::iter::repeat_n(c, per));
    }
    (x, labels)
}

/// Two concentric rings with `n/2` points each at uniformly random angles.
pub fn rings(n: usize, radii: (f64, f64), radial_noise: f64, seed: u64) -> (Matrix, Vec<usize>) {
    let mut g = rng::seeded(seed);
    let mut x = Matrix::zeros(n, 2);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let ring = usize::from(i >= n / 2);
        let r = if ring == 0 { radii.0 } else { radii.1 };
        let r = r + radial_noise * g.sample::<f64, _>(StandardNormal);
        let t: f64 = g.random_range(0.0..std::f64::consts::TAU);
        x[(i, 0)] = r * t.cos();
        x[(i, 1)] = r * t.sin();
        labels.push(ring);
    }
    (x, labels)
}

/// Points `tanh(A t)` with `t ~ N(0, I_latent)` and a fixed mixing matrix
/// drawn from `mixing_seed`, plus small isotropic noise.
pub fn manifold(
    n: usize,
    latent: usize,
    dims: usize,
    noise: f64,
    mixing_seed: u64,
    seed: u64,
) -> Matrix {
    let a = normal(dims, latent, mixing_seed) / (latent as f64).sqrt();
    let t = normal(n, latent, seed);
    let eps = normal(n, dims, seed ^ 0x5eed);
    let mut x = t * a.transpose();
    x.apply(|v| *v = v.tanh());
    x + eps * noise
}

pub fn column(a: &Matrix, j: usize) -> Vec<f64> {
    a.column(j).iter().copied().collect()
}
