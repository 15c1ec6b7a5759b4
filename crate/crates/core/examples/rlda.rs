//! Randomized LDA on three blobs; prints class centroids in the canonical
//! space.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rnca::components::rlda_fit;
use rnca::kernel::{median_bandwidth, sample_fourier};
use rnca::{rng, Matrix};

fn main() -> rnca::Result<()> {
    let mut g = rng::seeded(8);
    let centers = [[0.0, 0.0], [6.0, 0.0], [3.0, 5.0]];
    let labels: Vec<usize> = (0..150).map(|i| i / 50).collect();
    let x = Matrix::from_fn(150, 2, |i, j| {
        centers[i / 50][j] + g.sample::<f64, _>(StandardNormal)
    });
    let spec = median_bandwidth(&x, usize::MAX, 0)?.spec;
    let model = rlda_fit(&x, &labels, &sample_fourier(2, 300, spec, 1)?, 1e-3, 2)?;
    println!("canonical correlations {:.4?}", model.correlations());
    let u = model.transform_x(&x)?;
    for c in 0..3 {
        let rows = u.rows(c * 50, 50);
        println!(
            "class {c}: centroid ({:+.3}, {:+.3})",
            rows.column(0).mean(),
            rows.column(1).mean()
        );
    }
    Ok(())
}
