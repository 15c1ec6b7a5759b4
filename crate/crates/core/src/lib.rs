//! Randomized nonlinear component analysis.
//!
//! Kernel methods approximated with random Fourier or Nyström features,
//! followed by ordinary linear component analysis on the features.

pub mod apps;
pub mod bounds;
pub mod cli;
pub mod components;
pub mod error;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
