//! Nonlinear CCA: y depends on x through a square, which linear CCA misses.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rnca::bounds::{kcca_exact, DEFAULT_ORACLE_CAP};
use rnca::components::rcca_fit;
use rnca::kernel::{median_bandwidth, sample_fourier, FeatureMap};
use rnca::{rng, Matrix};

fn main() -> rnca::Result<()> {
    let mut g = rng::seeded(11);
    let n = 400;
    let x = Matrix::from_fn(n, 1, |_, _| g.sample(StandardNormal));
    let y = Matrix::from_fn(n, 1, |i, _| {
        x[(i, 0)].powi(2) + 0.1 * g.sample::<f64, _>(StandardNormal)
    });

    let id = FeatureMap::identity(1);
    let linear = rcca_fit(&x, &y, &id, &id, 1e-6, 1e-6, 1)?;
    println!("linear CCA     rho = {:.4}", linear.correlations()[0]);

    let sx = median_bandwidth(&x, usize::MAX, 0)?.spec;
    let sy = median_bandwidth(&y, usize::MAX, 0)?.spec;
    for m in [10, 100, 1000] {
        let fit = rcca_fit(
            &x,
            &y,
            &sample_fourier(1, m, sx, 1)?,
            &sample_fourier(1, m, sy, 2)?,
            1e-3,
            1e-3,
            1,
        )?;
        println!("RCCA m = {m:>4}  rho = {:.4}", fit.correlations()[0]);
    }
    let exact = kcca_exact(&x, &y, sx, sy, 1e-3, 1e-3, 1, DEFAULT_ORACLE_CAP)?;
    println!("exact KCCA     rho = {:.4}", exact[0]);
    Ok(())
}
