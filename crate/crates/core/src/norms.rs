//! Tensor norms and thresholding operators.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{self, CMatrix};
use crate::par::map_indices;
use crate::tensor::{band_count, fft_mode3, ifft_mode3, BandIndex};
use crate::tsvd::spectral_slice;
use crate::{Error, Result, Tensor3};

pub use crate::linalg::{nuclear_norm as matrix_nuclear_norm, svt};

/// Per-band filtering coefficients, zero-frequency band first.
///
/// `0` keeps a band untouched, `+inf` discards it, and a finite positive
/// value scales the singular value threshold applied to it.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterVector(Vec<f64>);

impl FilterVector {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = coeffs.iter().find(|a| a.is_nan() || **a < 0.0) {
            return Err(Error::InvalidFilter(bad));
        }
        Ok(FilterVector(coeffs))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of bands that need an SVD: `0 < alpha < inf`.
    pub fn svd_count(&self) -> usize {
        self.0.iter().filter(|a| **a > 0.0 && a.is_finite()).count()
    }

    /// `[0, inf, ..., inf]`: keep only the temporal mean.
    pub fn is_zero_frequency(&self) -> bool {
        matches!(self.0.split_first(), Some((&first, rest))
            if first == 0.0 && rest.iter().all(|a| *a == f64::INFINITY))
    }

    pub fn check_for(&self, i3: usize) -> Result<()> {
        let expected = band_count(i3)?;
        if self.0.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

pub fn l1_norm(x: &Tensor3) -> f64 {
    x.as_slice().iter().map(|v| v.abs()).sum()
}

pub fn fro_norm(x: &Tensor3) -> f64 {
    libm::sqrt(x.as_slice().iter().map(|v| v * v).sum())
}

/// Nuclear norm of every Fourier slice in the lower half of the spectrum.
fn half_slice_norms(x: &Tensor3, include: impl Fn(usize) -> bool + Sync + Send) -> Result<Vec<f64>> {
    let fx = fft_mode3(x);
    map_indices(band_count(x.dims()[2])?, |k| {
        if include(k) {
            linalg::nuclear_norm(&spectral_slice(&fx, k))
        } else {
            Ok(0.0)
        }
    })
    .into_iter()
    .collect()
}

/// Nuclear norm of each band (one or two slices), zero-frequency first.
pub fn band_nuclear_norms(x: &Tensor3) -> Result<Vec<f64>> {
    band_norms_where(x, |_| true)
}

const ZERO_BAND_TOL: f64 = 1e-12;

fn band_norms_where(x: &Tensor3, include: impl Fn(usize) -> bool + Sync + Send) -> Result<Vec<f64>> {
    let i3 = x.dims()[2];
    let slice_norms = half_slice_norms(x, include)?;
    BandIndex::all(i3)?
        .iter()
        .zip(slice_norms)
        .map(|(b, n)| Ok(if b.hi().is_some() { 2.0 * n } else { n }))
        .collect()
}

/// Tensor nuclear norm: mean nuclear norm over all Fourier slices.
pub fn tnn(x: &Tensor3) -> Result<f64> {
    let i3 = x.dims()[2];
    let total: f64 = band_nuclear_norms(x)?.iter().sum();
    Ok(total / i3 as f64)
}

/// Frequency-filtered tensor nuclear norm `(1/I) sum_j alpha_j ||{X}_j||_*`.
///
/// An infinite coefficient on a zero band contributes zero. A band counts as
/// zero when its norm is round-off relative to `I3 ||X||_F`.
pub fn ftnn(x: &Tensor3, alpha: &FilterVector) -> Result<f64> {
    let i3 = x.dims()[2];
    alpha.check_for(i3)?;
    let coeffs = alpha.coeffs();
    let norms = band_norms_where(x, |k| coeffs[k] > 0.0)?;
    let zero_tol = ZERO_BAND_TOL * fro_norm(x) * i3 as f64;
    let mut total = 0.0;
    for (&a, n) in coeffs.iter().zip(norms) {
        if a == 0.0 || n <= zero_tol {
            continue;
        }
        total += a * n;
    }
    Ok(total / alpha.len() as f64)
}

/// Entrywise `sgn(x) max(|x| - tau, 0)`.
pub fn soft_threshold(x: &Tensor3, tau: f64) -> Result<Tensor3> {
    if !(tau >= 0.0) {
        return Err(Error::NegativeThreshold(tau));
    }
    Ok(shrink_entries(x, tau))
}

pub(crate) fn shrink_entries(x: &Tensor3, tau: f64) -> Tensor3 {
    x.map(|v| {
        if v > tau {
            v - tau
        } else if v < -tau {
            v + tau
        } else {
            0.0
        }
    })
}

/// Result of [`ftsvt_with_stats`].
#[derive(Debug, Clone)]
pub struct FtsvtOutput {
    pub tensor: Tensor3,
    /// Number of slice SVDs performed.
    pub svd_calls: usize,
}

/// Frequency-filtered tensor singular value thresholding.
pub fn ftsvt(y: &Tensor3, alpha: &FilterVector, tau: f64) -> Result<Tensor3> {
    Ok(ftsvt_with_stats(y, alpha, tau)?.tensor)
}

/// [`ftsvt`] that also reports how many slice SVDs it ran.
///
/// For each slice in the lower half of the spectrum: `alpha = 0` copies the
/// slice, `alpha = inf` zeroes it, otherwise its singular values shrink by
/// `alpha * tau`. The upper half is filled by conjugation.
pub fn ftsvt_with_stats(y: &Tensor3, alpha: &FilterVector, tau: f64) -> Result<FtsvtOutput> {
    if !(tau >= 0.0) {
        return Err(Error::NegativeThreshold(tau));
    }
    let [i1, i2, i3] = y.dims();
    alpha.check_for(i3)?;
    let mut spec = fft_mode3(y);
    let coeffs = alpha.coeffs();
    let shrunk = map_indices(coeffs.len(), |k| {
        let a = coeffs[k];
        if a == 0.0 {
            Ok(None)
        } else if a == f64::INFINITY {
            Ok(Some(CMatrix::zeros(i1, i2)))
        } else {
            linalg::shrink(&spectral_slice(&spec, k), a * tau).map(Some)
        }
    });
    let mut svd_calls = 0;
    for (k, r) in shrunk.into_iter().enumerate() {
        if let Some(m) = r? {
            if coeffs[k].is_finite() {
                svd_calls += 1;
            }
            spec.frontal_mut(k).copy_from_slice(m.as_slice());
        }
    }
    if i3 % 2 == 0 && i3 > 1 {
        // The Nyquist slice must stay real for a real result.
        for z in spec.frontal_mut(i3 / 2) {
            *z = Complex64::new(z.re, 0.0);
        }
    }
    spec.mirror_upper_half();
    Ok(FtsvtOutput {
        tensor: ifft_mode3(&spec)?,
        svd_calls,
    })
}
