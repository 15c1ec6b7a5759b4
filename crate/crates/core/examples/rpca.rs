//! Randomized kernel PCA compared against the exact kernel eigenvalues.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rnca::bounds::{kpca_exact, DEFAULT_ORACLE_CAP};
use rnca::components::rpca_fit;
use rnca::kernel::{median_bandwidth, sample_fourier};
use rnca::{rng, Matrix};

fn main() -> rnca::Result<()> {
    let mut g = rng::seeded(5);
    let n = 300;
    let x = Matrix::from_fn(n, 3, |_, j| {
        g.sample::<f64, _>(StandardNormal) * (j + 1) as f64
    });
    let spec = median_bandwidth(&x, usize::MAX, 0)?.spec;
    let exact = kpca_exact(&x, spec, 4, DEFAULT_ORACLE_CAP)?;
    let model = rpca_fit(&x, &sample_fourier(3, 2000, spec, 1)?, 4)?;
    for j in 0..4 {
        println!(
            "component {}: randomized {:.5}  exact {:.5}",
            j + 1,
            model.eigenvalues()[j],
            exact.values[j] / (n - 1) as f64
        );
    }
    let scores = model.transform(&x.rows(0, 3).into_owned())?;
    println!("first scores:\n{scores:.4}");
    Ok(())
}
