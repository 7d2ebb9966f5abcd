//! The `.ft3d` tensor container.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "FT3D"
//! 4       1     version (1)
//! 5       12    I1, I2, I3 as u32 little-endian
//! 17      8*N   f64 little-endian payload, i1 fastest, then i2, then i3
//! ```

use std::fs;
use std::path::Path;

use ftrpca_core::Tensor3;

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 4] = b"FT3D";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 17;

pub fn encode(t: &Tensor3) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * t.len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    for d in t.dims() {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    for v in t.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<Tensor3> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(CliError::BadMagic(bytes[..bytes.len().min(4)].to_vec()));
    }
    if bytes.len() < HEADER_LEN {
        return Err(CliError::TruncatedPayload {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    if bytes[4] != VERSION {
        return Err(CliError::BadVersion(bytes[4]));
    }
    let dim = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
    let dims = [dim(5), dim(9), dim(13)];
    let count = dims[0] * dims[1] * dims[2];
    let expected = HEADER_LEN + 8 * count;
    if bytes.len() < expected {
        return Err(CliError::TruncatedPayload {
            expected,
            found: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(CliError::TrailingData {
            extra: bytes.len() - expected,
        });
    }
    let data = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Tensor3::from_vec(dims, data)?)
}

pub fn save_tensor(t: &Tensor3, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode(t)).map_err(|e| CliError::io(path, e))
}

pub fn load_tensor(path: impl AsRef<Path>) -> Result<Tensor3> {
    let path = path.as_ref();
    decode(&fs::read(path).map_err(|e| CliError::io(path, e))?)
}
