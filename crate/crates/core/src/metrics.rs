//! Recovery-quality metrics.
//!
//! `psnr` and `rse` compare whole tensors. The background-modeling metrics
//! (AGE, pEPs, pCEPs, MS-SSIM) compare gray-level images; color inputs go
//! through BT.601 luminance first.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result, Tensor3};

/// Default gray-level difference above which a pixel counts as an error.
pub const DEFAULT_ERROR_THRESHOLD: f64 = 20.0;

const LUMA: [f64; 3] = [0.299, 0.587, 0.114];

/// Row-major gray-level image.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height || width == 0 || height == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} image with {} pixels",
                data.len()
            )));
        }
        Ok(GrayImage { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        GrayImage { width, height, data }
    }

    /// Gray image from a `height x width x 1` tensor, or the luminance of a
    /// `height x width x 3` RGB tensor.
    pub fn from_tensor(t: &Tensor3) -> Result<Self> {
        let [h, w, ch] = t.dims();
        match ch {
            1 => Ok(GrayImage::from_fn(w, h, |r, c| t.get(r, c, 0))),
            3 => Ok(GrayImage::from_fn(w, h, |r, c| {
                (0..3).map(|k| LUMA[k] * t.get(r, c, k)).sum()
            })),
            _ => Err(Error::DimensionMismatch(format!(
                "expected 1 or 3 channels, got {ch}"
            ))),
        }
    }

    /// Frontal slice `k` of a tensor as an image.
    pub fn from_frontal(t: &Tensor3, k: usize) -> Self {
        let [h, w, _] = t.dims();
        GrayImage::from_fn(w, h, |r, c| t.get(r, c, k))
    }

    pub fn to_tensor(&self) -> Tensor3 {
        Tensor3::from_fn([self.height, self.width, 1], |r, c, _| self.get(r, c))
            .expect("finite image")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }
}

fn same_shape(a: &GrayImage, b: &GrayImage) -> Result<()> {
    if (a.width, a.height) != (b.width, b.height) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.width, a.height, b.width, b.height
        )));
    }
    Ok(())
}

fn same_dims(a: &Tensor3, b: &Tensor3) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.dims(), b.dims())));
    }
    Ok(())
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `10 log10(N ||ref||_inf^2 / ||test - ref||_F^2)`; `+inf` for identical inputs.
pub fn psnr(reference: &Tensor3, test: &Tensor3) -> Result<f64> {
    same_dims(reference, test)?;
    let peak = reference.max_abs();
    if peak == 0.0 {
        return Err(Error::ZeroReference);
    }
    let err = sq_dist(reference.as_slice(), test.as_slice());
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * libm::log10(reference.len() as f64 * peak * peak / err))
}

/// `||test - ref||_F / ||ref||_F`.
pub fn rse(reference: &Tensor3, test: &Tensor3) -> Result<f64> {
    same_dims(reference, test)?;
    let denom = sq_dist(reference.as_slice(), &vec![0.0; reference.len()]);
    if denom == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(libm::sqrt(sq_dist(reference.as_slice(), test.as_slice()) / denom))
}

/// Average gray-level absolute difference.
pub fn age(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    same_shape(reference, test)?;
    let total: f64 = reference.data.iter().zip(&test.data).map(|(a, b)| (a - b).abs()).sum();
    Ok(total / reference.data.len() as f64)
}

fn error_mask(reference: &GrayImage, test: &GrayImage, threshold: f64) -> Vec<bool> {
    reference
        .data
        .iter()
        .zip(&test.data)
        .map(|(a, b)| (a - b).abs() > threshold)
        .collect()
}

/// Fraction of pixels whose absolute difference exceeds `threshold`.
pub fn peps(reference: &GrayImage, test: &GrayImage, threshold: f64) -> Result<f64> {
    same_shape(reference, test)?;
    let mask = error_mask(reference, test, threshold);
    Ok(mask.iter().filter(|&&e| e).count() as f64 / mask.len() as f64)
}

/// Fraction of error pixels whose in-bounds 4-neighbours are all error
/// pixels too.
pub fn pceps(reference: &GrayImage, test: &GrayImage, threshold: f64) -> Result<f64> {
    same_shape(reference, test)?;
    let (w, h) = (reference.width, reference.height);
    let mask = error_mask(reference, test, threshold);
    let at = |r: usize, c: usize| mask[r * w + c];
    let mut count = 0usize;
    for r in 0..h {
        for c in 0..w {
            if !at(r, c) {
                continue;
            }
            let clustered = (r == 0 || at(r - 1, c))
                && (r + 1 == h || at(r + 1, c))
                && (c == 0 || at(r, c - 1))
                && (c + 1 == w || at(r, c + 1));
            if clustered {
                count += 1;
            }
        }
    }
    Ok(count as f64 / mask.len() as f64)
}

const MSSSIM_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];
const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;
const DYNAMIC_RANGE: f64 = 255.0;

fn gaussian_kernel() -> [f64; SSIM_WINDOW] {
    let mut k = [0.0; SSIM_WINDOW];
    let half = (SSIM_WINDOW / 2) as f64;
    for (i, v) in k.iter_mut().enumerate() {
        let d = i as f64 - half;
        *v = libm::exp(-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA));
    }
    let sum: f64 = k.iter().sum();
    k.map(|v| v / sum)
}

/// Separable "valid" filtering with the SSIM window.
fn filter_valid(img: &[f64], w: usize, h: usize, k: &[f64; SSIM_WINDOW]) -> (Vec<f64>, usize, usize) {
    let ow = w + 1 - SSIM_WINDOW;
    let oh = h + 1 - SSIM_WINDOW;
    let mut rows = vec![0.0; h * ow];
    for r in 0..h {
        for c in 0..ow {
            rows[r * ow + c] = (0..SSIM_WINDOW).map(|t| k[t] * img[r * w + c + t]).sum();
        }
    }
    let mut out = vec![0.0; oh * ow];
    for r in 0..oh {
        for c in 0..ow {
            out[r * ow + c] = (0..SSIM_WINDOW).map(|t| k[t] * rows[(r + t) * ow + c]).sum();
        }
    }
    (out, ow, oh)
}

/// Mean SSIM and mean contrast-structure term at one scale.
fn ssim_terms(a: &GrayImage, b: &GrayImage) -> (f64, f64) {
    let k = gaussian_kernel();
    let (w, h) = (a.width, a.height);
    let prod = |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(p, q)| p * q).collect() };
    let (mu1, _, _) = filter_valid(&a.data, w, h, &k);
    let (mu2, _, _) = filter_valid(&b.data, w, h, &k);
    let (s11, _, _) = filter_valid(&prod(&a.data, &a.data), w, h, &k);
    let (s22, _, _) = filter_valid(&prod(&b.data, &b.data), w, h, &k);
    let (s12, _, _) = filter_valid(&prod(&a.data, &b.data), w, h, &k);
    let c1 = (SSIM_K1 * DYNAMIC_RANGE) * (SSIM_K1 * DYNAMIC_RANGE);
    let c2 = (SSIM_K2 * DYNAMIC_RANGE) * (SSIM_K2 * DYNAMIC_RANGE);
    let n = mu1.len() as f64;
    let (mut ssim, mut cs) = (0.0, 0.0);
    for i in 0..mu1.len() {
        let (m1, m2) = (mu1[i], mu2[i]);
        let v1 = s11[i] - m1 * m1;
        let v2 = s22[i] - m2 * m2;
        let v12 = s12[i] - m1 * m2;
        let l = (2.0 * m1 * m2 + c1) / (m1 * m1 + m2 * m2 + c1);
        let c = (2.0 * v12 + c2) / (v1 + v2 + c2);
        ssim += l * c;
        cs += c;
    }
    (ssim / n, cs / n)
}

/// 2x2 box average followed by decimation, reflecting at odd edges.
fn downsample(img: &GrayImage) -> GrayImage {
    let (w, h) = (img.width, img.height);
    let clamp = |i: usize, n: usize| if i >= n { n - 1 } else { i };
    GrayImage::from_fn(w.div_ceil(2), h.div_ceil(2), |r, c| {
        let (r0, c0) = (2 * r, 2 * c);
        let (r1, c1) = (clamp(r0 + 1, h), clamp(c0 + 1, w));
        0.25 * (img.get(r0, c0) + img.get(r0, c1) + img.get(r1, c0) + img.get(r1, c1))
    })
}

/// Number of MS-SSIM scales usable for an image: at most 5, and every
/// scale must still fit the 11x11 window.
pub fn msssim_scales(width: usize, height: usize) -> usize {
    let mut d = width.min(height);
    let mut scales = 0;
    while scales < MSSSIM_WEIGHTS.len() && d >= SSIM_WINDOW {
        scales += 1;
        d = d.div_ceil(2);
    }
    scales
}

fn signed_pow(v: f64, e: f64) -> f64 {
    if v < 0.0 {
        -libm::pow(-v, e)
    } else {
        libm::pow(v, e)
    }
}

/// Multi-scale SSIM.
///
/// Images with a side under 176 pixels use fewer scales (see
/// [`msssim_scales`]) with the leading weights renormalized to sum to one.
/// Negative per-scale terms keep their sign under the exponent, so the
/// result stays in `[-1, 1]`.
pub fn msssim(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    same_shape(reference, test)?;
    let scales = msssim_scales(reference.width, reference.height);
    if scales == 0 {
        return Err(Error::ImageTooSmall {
            width: reference.width,
            height: reference.height,
            window: SSIM_WINDOW,
        });
    }
    let weights = &MSSSIM_WEIGHTS[..scales];
    let wsum: f64 = weights.iter().sum();
    let mut a = reference.clone();
    let mut b = test.clone();
    let mut result = 1.0;
    for (s, &w) in weights.iter().enumerate() {
        let (ssim, cs) = ssim_terms(&a, &b);
        let w = w / wsum;
        if s + 1 == scales {
            result *= signed_pow(ssim, w);
        } else {
            result *= signed_pow(cs, w);
            a = downsample(&a);
            b = downsample(&b);
        }
    }
    Ok(result)
}

/// All recovery metrics for one reference/test image pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub psnr: f64,
    pub rse: f64,
    pub age: f64,
    pub peps: f64,
    pub pceps: f64,
    pub msssim: f64,
}

impl MetricsReport {
    pub fn compute(reference: &GrayImage, test: &GrayImage, threshold: f64) -> Result<Self> {
        let (rt, tt) = (reference.to_tensor(), test.to_tensor());
        Ok(MetricsReport {
            psnr: psnr(&rt, &tt)?,
            rse: rse(&rt, &tt)?,
            age: age(reference, test)?,
            peps: peps(reference, test, threshold)?,
            pceps: pceps(reference, test, threshold)?,
            msssim: msssim(reference, test)?,
        })
    }
}
