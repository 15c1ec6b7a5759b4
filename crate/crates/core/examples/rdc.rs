//! Randomized Dependence Coefficient on a few classic relationships.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rnca::components::rdc;
use rnca::{rng, Matrix};

fn main() -> rnca::Result<()> {
    let mut g = rng::seeded(2);
    let n = 1000;
    let x = Matrix::from_fn(n, 1, |_, _| g.random_range(-1.0..1.0));
    let noise = Matrix::from_fn(n, 1, |_, _| 0.1 * g.sample::<f64, _>(StandardNormal));
    let independent = Matrix::from_fn(n, 1, |_, _| g.sample(StandardNormal));
    let cases: [(&str, Matrix); 4] = [
        ("linear", x.map(|v| 2.0 * v) + &noise),
        ("parabola", x.map(|v| v * v) + &noise),
        ("sine", x.map(|v| (6.0 * v).sin()) + &noise),
        ("independent", independent),
    ];
    for (name, y) in &cases {
        println!("{name:<12} rdc = {:.3}", rdc(&x, y, 200, 1e-3, 0)?.value);
    }
    Ok(())
}
