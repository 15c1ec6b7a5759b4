//! Downstream constructions on top of the component estimators.

pub mod autoencoder;
pub mod lupi;
pub mod ridge;

pub use autoencoder::{
    autoencoder_fit, autoencoder_reconstruct, mean_squared_error, AutoencoderModel,
};
pub use lupi::{lupi_features, AttributeStatus, LupiAttribute, LupiModel};
pub use ridge::{ridge_fit, RidgeModel};
