//! Data and model input/output.

pub mod container;
pub mod csv;
pub mod idx;

pub use container::{load_model, save_model, Container, Model};
pub use csv::{read_csv, read_labels, read_matrix, write_csv, write_matrix, Table};
pub use idx::{read_idx, IdxData};
