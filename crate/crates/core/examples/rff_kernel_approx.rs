//! Random Fourier features approximate the Gaussian Gram matrix; the
//! operator-norm error shrinks roughly like 1/sqrt(m).

use rand::Rng as _;
use rand_distr::StandardNormal;
use rnca::kernel::{gram_exact, median_bandwidth, sample_fourier};
use rnca::linalg::operator_norm;
use rnca::{rng, Matrix};

fn main() -> rnca::Result<()> {
    let mut g = rng::seeded(0);
    let x = Matrix::from_fn(200, 5, |_, _| g.sample(StandardNormal));
    let spec = median_bandwidth(&x, usize::MAX, 0)?.spec;
    let k = gram_exact(&x, spec)?;
    println!(
        "s = {:.4}, ||K|| = {:.2}",
        spec.s(),
        operator_norm(&k, 1e-9)
    );
    for m in [16, 64, 256, 1024, 4096] {
        let z = sample_fourier(5, m, spec, 1)?.featurize(&x)?;
        let err = operator_norm(&(&z * z.transpose() - &k), 1e-9);
        println!("m = {m:>5}  ||K_hat - K|| = {err:.3}");
    }
    Ok(())
}
