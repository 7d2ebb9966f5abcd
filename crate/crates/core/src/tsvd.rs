//! t-product and t-SVD.
//!
//! Both work slice by slice in the mode-3 Fourier domain. Only the first
//! `band_count(I3)` slices are computed; the rest are filled by conjugation,
//! which keeps the spatial-domain results real.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{self, CMatrix};
use crate::par::map_indices;
use crate::tensor::{band_count, fft_mode3, ifft_mode3, SpectralTensor};
use crate::{Error, Result, Tensor3};

pub(crate) fn spectral_slice(s: &SpectralTensor, k: usize) -> CMatrix {
    let [i1, i2, _] = s.dims();
    CMatrix::from_vec(i1, i2, s.frontal(k).to_vec()).expect("slice shape")
}

/// Assembles a real tensor from its lower-half Fourier slices.
pub(crate) fn from_half_spectrum(rows: usize, cols: usize, i3: usize, half: Vec<CMatrix>) -> Result<Tensor3> {
    let mut spec = SpectralTensor::zeros([rows, cols, i3])?;
    for (k, m) in half.into_iter().enumerate() {
        spec.frontal_mut(k).copy_from_slice(m.as_slice());
    }
    spec.mirror_upper_half();
    ifft_mode3(&spec)
}

/// t-product `a * b` of an `I1 x I2 x I3` and an `I2 x I4 x I3` tensor.
pub fn tproduct(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    let [i1, i2, i3] = a.dims();
    let [j1, i4, j3] = b.dims();
    if i2 != j1 || i3 != j3 {
        return Err(Error::DimensionMismatch(format!(
            "t-product of {:?} and {:?}",
            a.dims(),
            b.dims()
        )));
    }
    let (fa, fb) = (fft_mode3(a), fft_mode3(b));
    let half = map_indices(band_count(i3)?, |k| {
        spectral_slice(&fa, k).matmul(&spectral_slice(&fb, k))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    from_half_spectrum(i1, i4, i3, half)
}

/// Factors of `A = U * S * V^H`.
#[derive(Debug, Clone, PartialEq)]
pub struct TsvdFactors {
    /// `I1 x I1 x I3`
    pub u: Tensor3,
    /// `I1 x I2 x I3`, f-diagonal.
    pub s: Tensor3,
    /// `I2 x I2 x I3`
    pub v: Tensor3,
}

impl TsvdFactors {
    pub fn reconstruct(&self) -> Result<Tensor3> {
        reconstruct(self)
    }
}

/// Full t-SVD of `a`.
pub fn tsvd(a: &Tensor3) -> Result<TsvdFactors> {
    let [i1, i2, i3] = a.dims();
    let fa = fft_mode3(a);
    let parts = map_indices(band_count(i3)?, |k| {
        let d = linalg::svd(&spectral_slice(&fa, k), true)?;
        let mut s = CMatrix::zeros(i1, i2);
        for (r, &sv) in d.s.iter().enumerate() {
            s.set(r, r, Complex64::new(sv, 0.0));
        }
        Ok((d.u, s, d.v))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut us = Vec::with_capacity(parts.len());
    let mut ss = Vec::with_capacity(parts.len());
    let mut vs = Vec::with_capacity(parts.len());
    for (u, s, v) in parts {
        us.push(u);
        ss.push(s);
        vs.push(v);
    }
    Ok(TsvdFactors {
        u: from_half_spectrum(i1, i1, i3, us)?,
        s: from_half_spectrum(i1, i2, i3, ss)?,
        v: from_half_spectrum(i2, i2, i3, vs)?,
    })
}

/// `U * S * V^H`.
pub fn reconstruct(f: &TsvdFactors) -> Result<Tensor3> {
    tproduct(&tproduct(&f.u, &f.s)?, &f.v.transpose())
}
