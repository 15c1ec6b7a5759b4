//! Spectral clustering of two concentric rings through a Nystrom map.

use std::f64::consts::TAU;

use rand::Rng as _;
use rnca::components::spectral_cluster;
use rnca::kernel::{sample_nystrom, KernelSpec};
use rnca::stats::adjusted_rand_index;
use rnca::{rng, Matrix};

fn main() -> rnca::Result<()> {
    let mut g = rng::seeded(4);
    let n = 400;
    let truth: Vec<usize> = (0..n).map(|i| usize::from(i >= n / 2)).collect();
    let mut x = Matrix::zeros(n, 2);
    for i in 0..n {
        let r = if truth[i] == 0 { 1.0 } else { 5.0 };
        let t: f64 = g.random_range(0.0..TAU);
        x[(i, 0)] = r * t.cos();
        x[(i, 1)] = r * t.sin();
    }
    // Bandwidth on the scale of the ring thickness, not the ring gap.
    let map = sample_nystrom(&x, 100, KernelSpec::new(0.5)?, 1, 1e-10)?;
    let labels = spectral_cluster(&x, 2, &map, 0)?;
    println!("ARI = {:.3}", adjusted_rand_index(&labels, &truth));
    Ok(())
}
