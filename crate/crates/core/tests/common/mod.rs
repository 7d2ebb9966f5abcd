#![allow(dead_code)]

use ftrpca_core::{Complex64, Tensor3};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_tensor(dims: [usize; 3], rng: &mut ChaCha8Rng) -> Tensor3 {
    Tensor3::from_fn(dims, |_, _, _| rng.random_range(-1.0..1.0)).unwrap()
}

/// Mode-3 DFT by the defining sum, one `I1 x I2` matrix per frequency.
pub fn naive_dft(x: &Tensor3) -> Vec<DMatrix<Complex64>> {
    let [i1, i2, n] = x.dims();
    (0..n)
        .map(|k| {
            DMatrix::from_fn(i1, i2, |i, j| {
                (0..n)
                    .map(|t| {
                        let angle = -2.0 * std::f64::consts::PI * (k * t) as f64 / n as f64;
                        Complex64::from_polar(x.get(i, j, t), angle)
                    })
                    .sum()
            })
        })
        .collect()
}

/// Inverse of [`naive_dft`], keeping the real part.
pub fn naive_idft(slices: &[DMatrix<Complex64>]) -> Tensor3 {
    let n = slices.len();
    let (i1, i2) = slices[0].shape();
    Tensor3::from_fn([i1, i2, n], |i, j, t| {
        let s: Complex64 = (0..n)
            .map(|k| {
                let angle = 2.0 * std::f64::consts::PI * (k * t) as f64 / n as f64;
                slices[k][(i, j)] * Complex64::from_polar(1.0, angle)
            })
            .sum();
        s.re / n as f64
    })
    .unwrap()
}

pub fn nalgebra_svt(m: &DMatrix<Complex64>, tau: f64) -> DMatrix<Complex64> {
    let svd = m.clone().svd(true, true);
    let u = svd.u.unwrap();
    let v_t = svd.v_t.unwrap();
    let s = DMatrix::from_diagonal(&svd.singular_values.map(|s| Complex64::new((s - tau).max(0.0), 0.0)));
    u * s * v_t
}

pub fn nuclear(m: &DMatrix<Complex64>) -> f64 {
    m.clone().svd(false, false).singular_values.sum()
}

pub fn rel_err(a: &Tensor3, b: &Tensor3) -> f64 {
    let diff: f64 = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).powi(2)).sum();
    let base: f64 = b.as_slice().iter().map(|y| y * y).sum();
    (diff / base.max(f64::MIN_POSITIVE)).sqrt()
}

pub fn max_diff(a: &Tensor3, b: &Tensor3) -> f64 {
    assert_eq!(a.dims(), b.dims());
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Approximately low-rank color image on the 0..255 scale, `n x n x 3`:
/// a 1/f sinusoidal texture shared by all channels with small per-channel
/// gains, plus a few flat colored discs.
pub fn lowrank_color_image(n: usize, seed: u64) -> Tensor3 {
    let mut g = rng(seed);
    let chroma = 0.2;
    let modes: Vec<(f64, f64, f64, f64, [f64; 3])> = (0..60)
        .map(|_| {
            let (fx, fy) = (g.random_range(-12.0..12.0), g.random_range(-12.0..12.0));
            let f = f64::hypot(fx, fy).max(1.0);
            let gains = [0; 3].map(|_| 1.0 + chroma * g.random_range(-1.0..1.0));
            (60.0 / f, fx, fy, g.random_range(0.0..std::f64::consts::TAU), gains)
        })
        .collect();
    let discs: Vec<(f64, f64, f64, [f64; 3])> = (0..4)
        .map(|_| {
            let level = g.random_range(-60.0..60.0);
            let (cx, cy, r) = (g.random_range(0.2..0.8), g.random_range(0.2..0.8), g.random_range(0.08..0.2));
            (cx, cy, r, [0; 3].map(|_| level + g.random_range(-20.0..20.0)))
        })
        .collect();
    Tensor3::from_fn([n, n, 3], |i, j, k| {
        let (x, y) = (i as f64 / n as f64, j as f64 / n as f64);
        let mut v = 120.0;
        for &(a, fx, fy, phase, gains) in &modes {
            v += a * gains[k] * (std::f64::consts::TAU * (fx * x + fy * y) + phase).sin();
        }
        for &(cx, cy, r, color) in &discs {
            if (x - cx).powi(2) + (y - cy).powi(2) < r * r {
                v += color[k];
            }
        }
        v.clamp(0.0, 255.0)
    })
    .unwrap()
}
