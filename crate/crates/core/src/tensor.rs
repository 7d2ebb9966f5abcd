//! Order-3 tensors, their mode-3 spectra and frequency bands.
//!
//! Storage is `i1` fastest, then `i2`, then `i3`, so every frontal slice is a
//! contiguous column-major `I1 x I2` block. All indices are zero-based; band
//! `0` is the zero-frequency band.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Sub};

use num_complex::Complex64;

use crate::fft::Dft;
use crate::{Error, Result};

/// Tolerance on the imaginary residue of an inverse transform, relative to
/// the Frobenius norm of the result.
pub const IMAG_RESIDUE_TOL: f64 = 1e-8;

/// Real order-3 tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dims: [usize; 3],
    data: Vec<f64>,
}

fn check_dims(dims: [usize; 3]) -> Result<usize> {
    if dims.iter().any(|&d| d == 0) {
        return Err(Error::InvalidDims(format!("{dims:?} has a zero extent")));
    }
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::InvalidDims(format!("{dims:?} overflows")))
}

impl Tensor3 {
    pub fn zeros(dims: [usize; 3]) -> Result<Self> {
        let len = check_dims(dims)?;
        Ok(Tensor3 {
            dims,
            data: vec![0.0; len],
        })
    }

    /// Wraps `data` laid out with `i1` fastest. Rejects non-finite entries.
    pub fn from_vec(dims: [usize; 3], data: Vec<f64>) -> Result<Self> {
        let len = check_dims(dims)?;
        if data.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "{dims:?} needs {len} values, got {}",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("entry {bad}")));
        }
        Ok(Tensor3 { dims, data })
    }

    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let len = check_dims(dims)?;
        let mut data = Vec::with_capacity(len);
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    data.push(f(i, j, k));
                }
            }
        }
        Tensor3::from_vec(dims, data)
    }

    /// Builds a tensor from equally sized column-major frontal slices.
    pub fn from_slices(rows: usize, cols: usize, slices: &[Vec<f64>]) -> Result<Self> {
        let dims = [rows, cols, slices.len()];
        let mut data = Vec::with_capacity(rows * cols * slices.len());
        for s in slices {
            data.extend_from_slice(s);
        }
        Tensor3::from_vec(dims, data)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.dims[0] && j < self.dims[1] && k < self.dims[2]);
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.index(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let idx = self.index(i, j, k);
        self.data[idx] = value;
    }

    fn slice_len(&self) -> usize {
        self.dims[0] * self.dims[1]
    }

    /// Frontal slice `k`, column-major.
    pub fn frontal(&self, k: usize) -> &[f64] {
        let n = self.slice_len();
        &self.data[k * n..(k + 1) * n]
    }

    pub fn frontal_mut(&mut self, k: usize) -> &mut [f64] {
        let n = self.slice_len();
        &mut self.data[k * n..(k + 1) * n]
    }

    /// Mode-3 fiber at `(i, j)`.
    pub fn tube(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dims[2]).map(|k| self.get(i, j, k)).collect()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor3 {
        Tensor3 {
            dims: self.dims,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Elementwise combination; panics on shape mismatch.
    pub fn zip_map(&self, other: &Tensor3, f: impl Fn(f64, f64) -> f64) -> Tensor3 {
        assert_eq!(self.dims, other.dims, "tensor shapes differ");
        Tensor3 {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Tensor3 {
        self.map(|v| v * c)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Mean along mode 3, repeated on every frontal slice.
    pub fn mode3_mean_broadcast(&self) -> Tensor3 {
        let n = self.slice_len();
        let i3 = self.dims[2];
        let mut mean = vec![0.0; n];
        for k in 0..i3 {
            for (m, v) in mean.iter_mut().zip(self.frontal(k)) {
                *m += v;
            }
        }
        let inv = 1.0 / i3 as f64;
        for m in mean.iter_mut() {
            *m *= inv;
        }
        let mut data = Vec::with_capacity(self.data.len());
        for _ in 0..i3 {
            data.extend_from_slice(&mean);
        }
        Tensor3 {
            dims: self.dims,
            data,
        }
    }

    /// Tensor transpose: each frontal slice transposed, slices `1..I3`
    /// reversed. Equivalent to conjugate-transposing every Fourier slice.
    pub fn transpose(&self) -> Tensor3 {
        let [i1, i2, i3] = self.dims;
        let mut out = Tensor3 {
            dims: [i2, i1, i3],
            data: vec![0.0; self.data.len()],
        };
        for k in 0..i3 {
            let src = if k == 0 { 0 } else { i3 - k };
            for j in 0..i2 {
                for i in 0..i1 {
                    out.set(j, i, k, self.get(i, j, src));
                }
            }
        }
        out
    }

    /// Identity tensor: first frontal slice is the `n x n` identity.
    pub fn identity(n: usize, i3: usize) -> Result<Tensor3> {
        let mut t = Tensor3::zeros([n, n, i3])?;
        for i in 0..n {
            t.set(i, i, 0, 1.0);
        }
        Ok(t)
    }
}

impl Add for &Tensor3 {
    type Output = Tensor3;
    fn add(self, rhs: &Tensor3) -> Tensor3 {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &Tensor3 {
    type Output = Tensor3;
    fn sub(self, rhs: &Tensor3) -> Tensor3 {
        self.zip_map(rhs, |a, b| a - b)
    }
}

/// Number of frequency bands of a real tensor with `i3` frontal slices.
pub fn band_count(i3: usize) -> Result<usize> {
    if i3 == 0 {
        return Err(Error::InvalidDims("I3 must be at least 1".into()));
    }
    Ok(i3 / 2 + 1)
}

/// A frequency band: one self-conjugate slice or a conjugate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandIndex {
    band: usize,
    lo: usize,
    hi: Option<usize>,
}

impl BandIndex {
    pub fn new(band: usize, i3: usize) -> Result<Self> {
        let count = band_count(i3)?;
        if band >= count {
            return Err(Error::BandOutOfRange { band, count });
        }
        let mirror = (i3 - band) % i3;
        let hi = (mirror != band).then_some(mirror);
        Ok(BandIndex { band, lo: band, hi })
    }

    /// All bands of a tensor with `i3` slices, in order.
    pub fn all(i3: usize) -> Result<Vec<BandIndex>> {
        (0..band_count(i3)?).map(|b| BandIndex::new(b, i3)).collect()
    }

    pub fn band(&self) -> usize {
        self.band
    }

    /// The slice in the lower half of the spectrum.
    pub fn lo(&self) -> usize {
        self.lo
    }

    /// The conjugate partner slice, absent for self-conjugate bands.
    pub fn hi(&self) -> Option<usize> {
        self.hi
    }

    pub fn slices(&self) -> impl Iterator<Item = usize> {
        core::iter::once(self.lo).chain(self.hi)
    }
}

/// Complex mode-3 spectrum of an order-3 tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTensor {
    dims: [usize; 3],
    data: Vec<Complex64>,
    origin_real: bool,
}

impl SpectralTensor {
    pub fn zeros(dims: [usize; 3]) -> Result<Self> {
        let len = check_dims(dims)?;
        Ok(SpectralTensor {
            dims,
            data: vec![Complex64::new(0.0, 0.0); len],
            origin_real: true,
        })
    }

    /// Wraps arbitrary spectral data; `origin_real` is `false` so no
    /// symmetry is assumed.
    pub fn from_vec(dims: [usize; 3], data: Vec<Complex64>) -> Result<Self> {
        let len = check_dims(dims)?;
        if data.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "{dims:?} needs {len} values, got {}",
                data.len()
            )));
        }
        Ok(SpectralTensor {
            dims,
            data,
            origin_real: false,
        })
    }

    pub(crate) fn from_parts(dims: [usize; 3], data: Vec<Complex64>, origin_real: bool) -> Self {
        debug_assert_eq!(data.len(), dims.iter().product::<usize>());
        SpectralTensor {
            dims,
            data,
            origin_real,
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn origin_real(&self) -> bool {
        self.origin_real
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn frontal(&self, k: usize) -> &[Complex64] {
        let n = self.dims[0] * self.dims[1];
        &self.data[k * n..(k + 1) * n]
    }

    pub fn frontal_mut(&mut self, k: usize) -> &mut [Complex64] {
        let n = self.dims[0] * self.dims[1];
        &mut self.data[k * n..(k + 1) * n]
    }

    pub fn fro_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest deviation from conjugate symmetry: the imaginary part of
    /// slice 0 and `slice[i] - conj(slice[I3 - i])` for `i >= 1`.
    pub fn symmetry_defect(&self) -> f64 {
        let i3 = self.dims[2];
        let mut worst = self.frontal(0).iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        for i in 1..i3 {
            let a = self.frontal(i);
            let b = self.frontal(i3 - i);
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y.conj()).norm());
            }
        }
        worst
    }

    /// Copies the conjugates of slices `1..I` onto their partners so the
    /// spectrum is exactly conjugate-symmetric.
    pub(crate) fn mirror_upper_half(&mut self) {
        let i3 = self.dims[2];
        let n = self.dims[0] * self.dims[1];
        let bands = i3 / 2 + 1;
        for i in bands..i3 {
            let src = i3 - i;
            let (head, tail) = self.data.split_at_mut(i * n);
            let from = &head[src * n..(src + 1) * n];
            for (dst, z) in tail[..n].iter_mut().zip(from) {
                *dst = z.conj();
            }
        }
    }

    /// Zeroes every slice outside `band`.
    pub fn isolate_band(&self, band: BandIndex) -> SpectralTensor {
        let mut out = SpectralTensor::from_parts(
            self.dims,
            vec![Complex64::new(0.0, 0.0); self.data.len()],
            self.origin_real,
        );
        for s in band.slices() {
            out.frontal_mut(s).copy_from_slice(self.frontal(s));
        }
        out
    }
}

/// Runs `plan` over every tube; `write` receives the transformed tube index
/// and values.
fn transform_tubes(
    dims: [usize; 3],
    plan: &Dft,
    read: impl Fn(usize, &mut [Complex64]),
    mut write: impl FnMut(usize, &[Complex64]),
    inverse: bool,
) {
    let tubes = dims[0] * dims[1];
    let mut buf = vec![Complex64::new(0.0, 0.0); dims[2]];
    let mut scratch = Vec::new();
    for t in 0..tubes {
        read(t, &mut buf);
        if inverse {
            plan.inverse(&mut buf, &mut scratch);
        } else {
            plan.forward(&mut buf, &mut scratch);
        }
        write(t, &buf);
    }
}

/// Unnormalized forward DFT along mode 3.
pub fn fft_mode3(x: &Tensor3) -> SpectralTensor {
    let dims = x.dims;
    let n = dims[0] * dims[1];
    let i3 = dims[2];
    let bands = i3 / 2 + 1;
    let plan = Dft::new(i3);
    let mut data = vec![Complex64::new(0.0, 0.0); x.len()];
    transform_tubes(
        dims,
        &plan,
        |t, buf| {
            for (k, b) in buf.iter_mut().enumerate() {
                *b = Complex64::new(x.data[t + k * n], 0.0);
            }
        },
        |t, buf| {
            for (k, b) in buf.iter().enumerate().take(bands) {
                data[t + k * n] = *b;
            }
        },
        false,
    );
    let mut out = SpectralTensor::from_parts(dims, data, true);
    // The zero bin (and the Nyquist bin for even I3) of a real tube is real.
    for z in out.frontal_mut(0) {
        z.im = 0.0;
    }
    if i3 % 2 == 0 && i3 > 1 {
        for z in out.frontal_mut(i3 / 2) {
            z.im = 0.0;
        }
    }
    out.mirror_upper_half();
    out
}

/// Inverse DFT along mode 3 with `1/I3` scaling. Fails when the discarded
/// imaginary part exceeds [`IMAG_RESIDUE_TOL`] times the result's norm.
pub fn ifft_mode3(xb: &SpectralTensor) -> Result<Tensor3> {
    let dims = xb.dims;
    let n = dims[0] * dims[1];
    let i3 = dims[2];
    let plan = Dft::new(i3);
    let scale = 1.0 / i3 as f64;
    let mut data = vec![0.0; xb.data.len()];
    let mut imag_sq = 0.0;
    let mut total_sq = 0.0;
    transform_tubes(
        dims,
        &plan,
        |t, buf| {
            for (k, b) in buf.iter_mut().enumerate() {
                *b = xb.data[t + k * n];
            }
        },
        |t, buf| {
            for (k, b) in buf.iter().enumerate() {
                let z = b * scale;
                data[t + k * n] = z.re;
                imag_sq += z.im * z.im;
                total_sq += z.norm_sqr();
            }
        },
        true,
    );
    let residue = libm::sqrt(imag_sq);
    let bound = IMAG_RESIDUE_TOL * libm::sqrt(total_sq);
    if residue > bound {
        return Err(Error::NonRealResult { residue, bound });
    }
    Tensor3::from_vec(dims, data)
}

/// The real tensor carried by a single frequency band.
pub fn band_component(x: &Tensor3, band: usize) -> Result<Tensor3> {
    let band = BandIndex::new(band, x.dims[2])?;
    ifft_mode3(&fft_mode3(x).isolate_band(band))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tube(values: &[f64]) -> Tensor3 {
        Tensor3::from_vec([1, 1, values.len()], values.to_vec()).unwrap()
    }

    #[test]
    fn forward_of_alternating_tube() {
        let s = fft_mode3(&tube(&[4.0, 6.0, 4.0, 6.0]));
        let expected = [20.0, 0.0, -4.0, 0.0];
        for (z, e) in s.as_slice().iter().zip(expected) {
            assert!((z - Complex64::new(e, 0.0)).norm() < 1e-12);
        }
        assert!(s.origin_real());
    }

    #[test]
    fn constant_tube_concentrates_in_bin_zero() {
        let s = fft_mode3(&tube(&[2.5; 7]));
        assert!((s.as_slice()[0].re - 17.5).abs() < 1e-12);
        assert!(s.as_slice()[1..].iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn length_one_is_identity() {
        let x = Tensor3::from_vec([2, 2, 1], vec![1.0, -2.0, 3.5, 0.0]).unwrap();
        let s = fft_mode3(&x);
        for (z, v) in s.as_slice().iter().zip(x.as_slice()) {
            assert_eq!(z.re, *v);
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn inverse_of_known_spectrum() {
        let data = [20.0, 0.0, -4.0, 0.0].map(|v| Complex64::new(v, 0.0)).to_vec();
        let s = SpectralTensor::from_vec([1, 1, 4], data).unwrap();
        let x = ifft_mode3(&s).unwrap();
        for (a, b) in x.as_slice().iter().zip([4.0, 6.0, 4.0, 6.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_of_zero_spectrum_is_zero() {
        let s = SpectralTensor::zeros([3, 2, 5]).unwrap();
        let x = ifft_mode3(&s).unwrap();
        assert!(x.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn broken_symmetry_is_rejected() {
        let mut data = vec![Complex64::new(0.0, 0.0); 4];
        data[1] = Complex64::new(1.0, 0.0);
        let s = SpectralTensor::from_vec([1, 1, 4], data).unwrap();
        assert!(matches!(ifft_mode3(&s), Err(Error::NonRealResult { .. })));
    }

    #[test]
    fn band_counts() {
        assert_eq!(band_count(4).unwrap(), 3);
        assert_eq!(band_count(90).unwrap(), 46);
        assert_eq!(band_count(21).unwrap(), 11);
        assert_eq!(band_count(1).unwrap(), 1);
        assert!(band_count(0).is_err());
    }

    #[test]
    fn band_slices_partition_the_spectrum() {
        for i3 in 1..12 {
            let mut seen = vec![0; i3];
            for b in BandIndex::all(i3).unwrap() {
                for s in b.slices() {
                    seen[s] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1), "i3 = {i3}");
        }
        let mid = BandIndex::new(2, 4).unwrap();
        assert_eq!((mid.lo(), mid.hi()), (2, None));
        let pair = BandIndex::new(1, 4).unwrap();
        assert_eq!((pair.lo(), pair.hi()), (1, Some(3)));
    }

    #[test]
    fn worked_band_components() {
        let x = tube(&[4.0, 6.0, 4.0, 6.0]);
        let zero = band_component(&x, 0).unwrap();
        let nyquist = band_component(&x, 2).unwrap();
        for (a, b) in zero.as_slice().iter().zip([5.0; 4]) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in nyquist.as_slice().iter().zip([-1.0, 1.0, -1.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(
            band_component(&x, 3),
            Err(Error::BandOutOfRange { band: 3, count: 3 })
        ));
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(Tensor3::zeros([0, 2, 2]).is_err());
        assert!(Tensor3::from_vec([1, 1, 2], vec![1.0]).is_err());
        assert!(matches!(
            Tensor3::from_vec([1, 1, 2], vec![1.0, f64::NAN]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn transpose_twice_is_identity() {
        let x = Tensor3::from_fn([2, 3, 4], |i, j, k| (i + 10 * j + 100 * k) as f64).unwrap();
        let t = x.transpose();
        assert_eq!(t.dims(), [3, 2, 4]);
        assert_eq!(t.get(1, 0, 1), x.get(0, 1, 3));
        assert_eq!(t.transpose(), x);
    }
}
