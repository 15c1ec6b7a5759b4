//! Nystrom features from sampled landmarks versus random Fourier features at
//! the same width.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rnca::kernel::{gram_exact, median_bandwidth, sample_fourier, sample_nystrom};
use rnca::linalg::operator_norm;
use rnca::{rng, Matrix};

fn main() -> rnca::Result<()> {
    let mut g = rng::seeded(3);
    let x = Matrix::from_fn(300, 4, |_, _| g.sample(StandardNormal));
    let spec = median_bandwidth(&x, usize::MAX, 0)?.spec;
    let k = gram_exact(&x, spec)?;
    for m in [10, 50, 150, 300] {
        let zn = sample_nystrom(&x, m, spec, 7, 1e-10)?.featurize(&x)?;
        let zf = sample_fourier(4, m, spec, 7)?.featurize(&x)?;
        let en = operator_norm(&(&zn * zn.transpose() - &k), 1e-9);
        let ef = operator_norm(&(&zf * zf.transpose() - &k), 1e-9);
        println!("m = {m:>3}  nystrom {en:.4}  fourier {ef:.4}");
    }
    Ok(())
}
