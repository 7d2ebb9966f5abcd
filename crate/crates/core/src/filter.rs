//! Filter vectors for the supported tasks, and band nuclear-norm profiles.

use alloc::vec;
use alloc::vec::Vec;

use crate::norms::band_nuclear_norms;
pub use crate::norms::FilterVector;
use crate::tensor::band_count;
use crate::{Error, Result, Tensor3};

/// Weights tuned for the 21-slice phantom: low bands shrink less than high
/// bands.
pub const SYNTHETIC_RAMP: [f64; 11] = [0.3, 0.5, 0.6, 0.75, 0.9, 1.0, 1.05, 1.05, 1.1, 1.1, 1.1];

/// Nuclear norm of every frequency band of a tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct BandNormProfile {
    pub norms: Vec<f64>,
    pub dims: [usize; 3],
}

pub fn band_norm_profile(x: &Tensor3) -> Result<BandNormProfile> {
    Ok(BandNormProfile {
        norms: band_nuclear_norms(x)?,
        dims: x.dims(),
    })
}

/// All ones: the plain tensor nuclear norm.
pub fn uniform_filter(bands: usize) -> FilterVector {
    FilterVector::new(vec![1.0; bands]).expect("ones are valid")
}

pub fn synthetic_ramp_filter() -> FilterVector {
    FilterVector::new(SYNTHETIC_RAMP.to_vec()).expect("constant is valid")
}

/// Two-band filter for color images, `[alpha1, 1]`.
///
/// `alpha1 = 0.25 + noise_ratio`, clamped to `[0.3, 0.6]`: this passes
/// through `0.35` at 10% and `0.45` at 20% corruption.
pub fn denoise_filter(noise_ratio: f64) -> Result<FilterVector> {
    if !(0.0..=1.0).contains(&noise_ratio) {
        return Err(Error::RatioOutOfRange(noise_ratio));
    }
    let alpha1 = (0.25 + noise_ratio).clamp(0.3, 0.6);
    FilterVector::new(vec![alpha1, 1.0])
}

/// Zero-frequency filter `[0, inf, ..., inf]`.
pub fn background_filter(bands: usize) -> FilterVector {
    let mut coeffs = vec![f64::INFINITY; bands];
    if let Some(first) = coeffs.first_mut() {
        *first = 0.0;
    }
    FilterVector::new(coeffs).expect("0 and inf are valid")
}

/// Filter of the right length for `i3` slices from a named strategy.
pub fn uniform_for(i3: usize) -> Result<FilterVector> {
    Ok(uniform_filter(band_count(i3)?))
}

pub fn background_for(i3: usize) -> Result<FilterVector> {
    Ok(background_filter(band_count(i3)?))
}

/// `alpha1` for a two-band filter with `alpha2 = 1`, from how much
/// corruption moved each band's nuclear norm.
pub fn estimate_two_band_alpha(clean: &BandNormProfile, corrupted: &BandNormProfile) -> Result<f64> {
    for p in [clean, corrupted] {
        if p.norms.len() != 2 {
            return Err(Error::LengthMismatch {
                expected: 2,
                found: p.norms.len(),
            });
        }
    }
    let low = corrupted.norms[0] - clean.norms[0];
    let high = corrupted.norms[1] - clean.norms[1];
    if !(high > 0.0) {
        return Err(Error::DegenerateDeviation(high));
    }
    Ok(low / high)
}
