//! Randomized component-analysis estimators built on frozen feature maps.

pub mod copula;
pub mod rcca;
pub mod rlda;
pub mod rpca;
pub mod spectral;

pub use copula::{copula_transform, rdc, RdcResult};
pub use rcca::{rcca_fit, rcca_transform, test_correlation_sum, RccaModel};
pub use rlda::rlda_fit;
pub use rpca::{rpca_fit, rpca_transform, RpcaModel};
pub use spectral::spectral_cluster;
