//! Kernel ridge regression through random features.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rnca::apps::ridge_fit;
use rnca::kernel::{median_bandwidth, sample_fourier};
use rnca::{rng, Matrix};

fn main() -> rnca::Result<()> {
    let mut g = rng::seeded(12);
    let n = 400;
    let x = Matrix::from_fn(n, 1, |_, _| g.random_range(-3.0..3.0));
    let t = Matrix::from_fn(n, 1, |i, _| {
        x[(i, 0)].sin() + 0.1 * g.sample::<f64, _>(StandardNormal)
    });
    let map = sample_fourier(1, 200, median_bandwidth(&x, usize::MAX, 0)?.spec, 1)?;
    let grid = Matrix::from_fn(7, 1, |i, _| -3.0 + i as f64);
    for lambda in [1.0, 1e-2, 1e-4] {
        let model = ridge_fit(&x, &t, &map, lambda)?;
        let pred = model.predict(&grid)?;
        let worst = (0..7)
            .map(|i| (pred[(i, 0)] - grid[(i, 0)].sin()).abs())
            .fold(0.0, f64::max);
        println!("lambda = {lambda:e}  max |f - sin| on grid = {worst:.4}");
    }
    Ok(())
}
