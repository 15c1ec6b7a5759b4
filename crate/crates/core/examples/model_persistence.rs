//! Save a fitted model to the text container and load it back.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rnca::components::rpca_fit;
use rnca::io::{load_model, save_model, Model};
use rnca::kernel::{sample_fourier, KernelSpec};
use rnca::{rng, Matrix};

fn main() -> rnca::Result<()> {
    let mut g = rng::seeded(9);
    let x = Matrix::from_fn(50, 2, |_, _| g.sample(StandardNormal));
    let model = Model::Rpca(rpca_fit(
        &x,
        &sample_fourier(2, 20, KernelSpec::new(0.5)?, 1)?,
        2,
    )?);
    let path = std::env::temp_dir().join("rnca-example.model");
    save_model(&model, &path)?;
    let text = std::fs::read_to_string(&path)?;
    println!("{}", text.lines().take(8).collect::<Vec<_>>().join("\n"));
    println!("...");
    let loaded = load_model(&path)?;
    println!("round trip exact: {}", loaded == model);
    std::fs::remove_file(&path)?;
    Ok(())
}
