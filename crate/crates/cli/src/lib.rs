//! File formats, run manifests and experiment drivers for the `ftrpca`
//! command-line tool.

pub mod commands;
pub mod error;
pub mod filter_spec;
pub mod image_io;
pub mod manifest;
pub mod tensor_file;

pub use error::{CliError, Result};
