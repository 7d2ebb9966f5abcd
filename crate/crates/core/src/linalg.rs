//! Dense complex matrices and the SVD-based operators on them.
//!
//! Decompositions are delegated to `faer`. Matrices whose entries are all
//! real take the real SVD path, so their singular vectors stay real.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use faer::Mat;
use num_complex::Complex64;

use crate::{Error, Result};

/// Column-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Wraps column-major data.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(if i == j { values[i] } else { 0.0 }, 0.0)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i + j * self.rows]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i + j * self.rows] = v;
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: f64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let col = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for k in 0..self.cols {
                let b = rhs.get(k, j);
                if b == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let a = &self.data[k * self.rows..(k + 1) * self.rows];
                for (c, x) in col.iter_mut().zip(a) {
                    *c += x * b;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn fro_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Singular value decomposition `M = U diag(s) V^H`; `s` is non-increasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

fn real_to_faer(m: &CMatrix) -> Mat<f64> {
    Mat::from_fn(m.rows, m.cols, |i, j| m.get(i, j).re)
}

fn complex_to_faer(m: &CMatrix) -> Mat<Complex64> {
    Mat::from_fn(m.rows, m.cols, |i, j| m.get(i, j))
}

/// SVD of `m`. `full` returns square `U` and `V`; otherwise the thin form.
pub fn svd(m: &CMatrix, full: bool) -> Result<Svd> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix passed to SVD".into()));
    }
    if m.rows == 0 || m.cols == 0 {
        return Ok(Svd {
            u: CMatrix::zeros(m.rows, if full { m.rows } else { 0 }),
            s: Vec::new(),
            v: CMatrix::zeros(m.cols, if full { m.cols } else { 0 }),
        });
    }
    if m.is_real() {
        let a = real_to_faer(m);
        let d = if full { a.svd() } else { a.thin_svd() }.map_err(|_| Error::SvdFailure)?;
        let (u, v) = (d.U(), d.V());
        let s = d.S().column_vector();
        Ok(Svd {
            u: CMatrix::from_fn(u.nrows(), u.ncols(), |i, j| Complex64::new(u[(i, j)], 0.0)),
            s: (0..s.nrows()).map(|i| s[i]).collect(),
            v: CMatrix::from_fn(v.nrows(), v.ncols(), |i, j| Complex64::new(v[(i, j)], 0.0)),
        })
    } else {
        let a = complex_to_faer(m);
        let d = if full { a.svd() } else { a.thin_svd() }.map_err(|_| Error::SvdFailure)?;
        let (u, v) = (d.U(), d.V());
        let s = d.S().column_vector();
        Ok(Svd {
            u: CMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
            s: (0..s.nrows()).map(|i| s[i].re).collect(),
            v: CMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]),
        })
    }
}

pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix passed to SVD".into()));
    }
    if m.rows == 0 || m.cols == 0 {
        return Ok(Vec::new());
    }
    if m.is_real() {
        real_to_faer(m).singular_values().map_err(|_| Error::SvdFailure)
    } else {
        complex_to_faer(m)
            .singular_values()
            .map_err(|_| Error::SvdFailure)
    }
}

/// Sum of singular values.
pub fn nuclear_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Singular value thresholding: `U (S - tau)_+ V^H`.
pub fn svt(m: &CMatrix, tau: f64) -> Result<CMatrix> {
    if !(tau >= 0.0) {
        return Err(Error::NegativeThreshold(tau));
    }
    shrink(m, tau)
}

/// SVT without the threshold check. Slices whose largest singular value is
/// at or below `tau` come back as zero without a reconstruction.
pub(crate) fn shrink(m: &CMatrix, tau: f64) -> Result<CMatrix> {
    let d = svd(m, false)?;
    let keep = d.s.iter().take_while(|&&s| s > tau).count();
    let mut out = CMatrix::zeros(m.rows, m.cols);
    if keep == 0 {
        return Ok(out);
    }
    if m.is_real() {
        let u = Mat::from_fn(m.rows, keep, |i, j| d.u.get(i, j).re * (d.s[j] - tau));
        let v = Mat::from_fn(m.cols, keep, |i, j| d.v.get(i, j).re);
        let r = &u * v.transpose();
        for j in 0..m.cols {
            for i in 0..m.rows {
                out.set(i, j, Complex64::new(r[(i, j)], 0.0));
            }
        }
    } else {
        let u = Mat::from_fn(m.rows, keep, |i, j| d.u.get(i, j) * (d.s[j] - tau));
        let v = Mat::from_fn(m.cols, keep, |i, j| d.v.get(i, j));
        let r = &u * v.adjoint();
        for j in 0..m.cols {
            for i in 0..m.rows {
                out.set(i, j, r[(i, j)]);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |i, j| {
            c(libm::sin((3 * i + 7 * j) as f64), libm::cos((i * j) as f64 + 0.3))
        })
    }

    #[test]
    fn nuclear_norm_basics() {
        assert!((nuclear_norm(&CMatrix::identity(5)).unwrap() - 5.0).abs() < 1e-12);
        assert!((nuclear_norm(&CMatrix::diag(&[3.0, 4.0])).unwrap() - 7.0).abs() < 1e-12);
        // c u v^H with unit u, v and |c| = 2.5
        let u = [c(0.6, 0.0), c(0.0, 0.8)];
        let v = [c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)];
        let k = c(1.5, -2.0);
        let m = CMatrix::from_fn(2, 3, |i, j| k * u[i] * v[j].conj());
        assert!((nuclear_norm(&m).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn svt_on_diagonal() {
        let out = svt(&CMatrix::diag(&[3.0, 1.0]), 2.0).unwrap();
        let expected = CMatrix::diag(&[1.0, 0.0]);
        assert!(out.sub(&expected).fro_norm() < 1e-12);
    }

    #[test]
    fn svt_zero_threshold_is_identity() {
        let m = sample(6, 4);
        assert!(svt(&m, 0.0).unwrap().sub(&m).fro_norm() < 1e-10);
    }

    #[test]
    fn svt_rejects_negative_threshold() {
        assert_eq!(
            svt(&CMatrix::identity(2), -1.0),
            Err(Error::NegativeThreshold(-1.0))
        );
    }

    #[test]
    fn svd_reconstructs_and_sorts() {
        for (r, cl) in [(5, 3), (3, 5), (4, 4)] {
            let m = sample(r, cl);
            for full in [false, true] {
                let d = svd(&m, full).unwrap();
                assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
                let k = d.s.len();
                let us = CMatrix::from_fn(r, k, |i, j| d.u.get(i, j) * d.s[j]);
                let vk = CMatrix::from_fn(cl, k, |i, j| d.v.get(i, j));
                let back = us.matmul(&vk.adjoint()).unwrap();
                assert!(back.sub(&m).fro_norm() < 1e-12);
            }
        }
    }

    #[test]
    fn real_input_keeps_real_factors() {
        let m = CMatrix::from_fn(4, 3, |i, j| c((i * 3 + j) as f64 - 2.0, 0.0));
        let d = svd(&m, true).unwrap();
        assert!(d.u.is_real() && d.v.is_real());
        assert_eq!(d.u.rows(), 4);
        assert_eq!(d.u.cols(), 4);
    }
}
