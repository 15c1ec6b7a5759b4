//! Privileged columns exist only at training time; their canonical
//! directions become features computable from X alone.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rnca::apps::{lupi_features, AttributeStatus};
use rnca::{rng, Matrix};

fn main() -> rnca::Result<()> {
    let mut g = rng::seeded(6);
    let n = 300;
    let x = Matrix::from_fn(n, 3, |_, _| g.sample(StandardNormal));
    let star = Matrix::from_fn(n, 2, |i, j| {
        let signal = if j == 0 {
            x[(i, 0)] * x[(i, 1)]
        } else {
            x[(i, 2)].sin()
        };
        signal + 0.1 * g.sample::<f64, _>(StandardNormal)
    });
    let y: Vec<f64> = (0..n)
        .map(|i| if star[(i, 0)] > 0.0 { 1.0 } else { -1.0 })
        .collect();
    let (model, features) = lupi_features(&x, &star, &y, 300, 1e-6, 3, 0)?;
    for a in model.attributes() {
        match &a.status {
            AttributeStatus::Fitted { correlations, .. } => {
                println!(
                    "privileged column {}: correlations {correlations:.3?}",
                    a.column
                )
            }
            AttributeStatus::Skipped { reason } => {
                println!("privileged column {}: skipped ({reason})", a.column)
            }
        }
    }
    println!(
        "training features {}x{}",
        features.nrows(),
        features.ncols()
    );
    let fresh = Matrix::from_fn(4, 3, |_, _| g.sample(StandardNormal));
    println!("test-time features:\n{:.3}", model.transform(&fresh)?);
    Ok(())
}
