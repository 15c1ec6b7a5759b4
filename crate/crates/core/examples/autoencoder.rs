//! Randomized autoencoder: RPCA encoder, random-feature ridge decoder.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rnca::apps::{autoencoder_fit, mean_squared_error};
use rnca::{rng, Matrix};

fn curve(n: usize, seed: u64) -> Matrix {
    let mut g = rng::seeded(seed);
    let mut x = Matrix::zeros(n, 3);
    for i in 0..n {
        let t: f64 = g.random_range(0.0..6.0);
        x[(i, 0)] = t.cos();
        x[(i, 1)] = t.sin();
        x[(i, 2)] = 0.3 * t + 0.02 * g.sample::<f64, _>(StandardNormal);
    }
    x
}

fn main() -> rnca::Result<()> {
    let (train, test) = (curve(500, 1), curve(200, 2));
    for d in [1, 2, 4, 8] {
        let model = autoencoder_fit(&train, 400, d, 1e-3, 0)?;
        let mse = mean_squared_error(&model.reconstruct(&test)?, &test);
        println!("d = {d}  held-out MSE = {mse:.5}");
    }
    Ok(())
}
