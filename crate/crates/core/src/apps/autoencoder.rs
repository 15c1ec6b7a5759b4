//! Randomized autoencoder: RPCA encoder, random-feature ridge decoder.

use crate::components::{rpca_fit, RpcaModel};
use crate::error::{ensure, Result};
use crate::kernel::{median_bandwidth, sample_fourier, DEFAULT_MEDIAN_PAIRS};
use crate::linalg::Matrix;
use crate::rng::derive_seed;

use super::ridge::{ridge_fit, RidgeModel};

#[derive(Debug, Clone, PartialEq)]
pub struct AutoencoderModel {
    pub encoder: RpcaModel,
    /// Maps latent codes back to the observed columns.
    pub decoder: RidgeModel,
}

impl AutoencoderModel {
    pub fn from_parts(encoder: RpcaModel, decoder: RidgeModel) -> Result<Self> {
        ensure!(
            decoder.map().input_dim() == encoder.components(),
            Dimension,
            "decoder expects {} latent columns, encoder produces {}",
            decoder.map().input_dim(),
            encoder.components()
        );
        Ok(AutoencoderModel { encoder, decoder })
    }

    pub fn latent_dim(&self) -> usize {
        self.encoder.components()
    }

    pub fn encode(&self, x: &Matrix) -> Result<Matrix> {
        self.encoder.transform(x)
    }

    pub fn reconstruct(&self, x: &Matrix) -> Result<Matrix> {
        self.decoder.predict(&self.encode(x)?)
    }
}

/// Fits the top `d` RPCA components of `m` Fourier features of `X`, then
/// regresses `X` on a second `m`-feature Fourier map of the codes. Both maps
/// take their bandwidth from the median heuristic.
pub fn autoencoder_fit(
    x: &Matrix,
    m: usize,
    d: usize,
    lambda: f64,
    seed: u64,
) -> Result<AutoencoderModel> {
    ensure!(
        x.nrows() >= 2,
        Argument,
        "autoencoder needs at least 2 rows"
    );
    ensure!(
        d >= 1 && d <= m,
        Argument,
        "latent dimension d = {d} must lie in 1..={m}"
    );
    let enc_spec = median_bandwidth(x, DEFAULT_MEDIAN_PAIRS, derive_seed(seed, 0))?.spec;
    let enc_map = sample_fourier(x.ncols(), m, enc_spec, derive_seed(seed, 1))?;
    let encoder = rpca_fit(x, &enc_map, d)?;
    let codes = encoder.transform(x)?;
    let dec_spec = median_bandwidth(&codes, DEFAULT_MEDIAN_PAIRS, derive_seed(seed, 2))?.spec;
    let dec_map = sample_fourier(d, m, dec_spec, derive_seed(seed, 3))?;
    let decoder = ridge_fit(&codes, x, &dec_map, lambda)?;
    Ok(AutoencoderModel { encoder, decoder })
}

pub fn autoencoder_reconstruct(model: &AutoencoderModel, x: &Matrix) -> Result<Matrix> {
    model.reconstruct(x)
}

/// Mean squared entry of `a − b`.
pub fn mean_squared_error(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).norm_squared() / (a.nrows() * a.ncols()) as f64
}
