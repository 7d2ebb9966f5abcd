//! One-dimensional DFT plans used for the mode-3 transforms.
//!
//! Convention: forward `X[k] = sum_j x[j] exp(-2 pi i jk / n)` with no
//! scaling. [`Dft::inverse`] applies the conjugate kernel without the `1/n`
//! factor; callers scale.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

/// Lengths up to this size that are not powers of two use the direct sum.
const DIRECT_MAX: usize = 64;

pub(crate) struct Dft {
    n: usize,
    kind: Kind,
}

enum Kind {
    Identity,
    Direct {
        twiddles: Vec<Complex64>,
    },
    Radix2 {
        twiddles: Vec<Complex64>,
        bitrev: Vec<usize>,
    },
    Bluestein {
        chirp: Vec<Complex64>,
        kernel: Vec<Complex64>,
        inner: Box<Dft>,
    },
}

fn unit(angle: f64) -> Complex64 {
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

/// `exp(-2 pi i m / n)` for `m in 0..n`.
fn twiddle_table(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|m| unit(-2.0 * PI * (m as f64) / (n as f64)))
        .collect()
}

impl Dft {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n >= 1, "DFT length must be positive");
        let kind = if n == 1 {
            Kind::Identity
        } else if n.is_power_of_two() {
            let bits = n.trailing_zeros();
            let bitrev = (0..n)
                .map(|i| i.reverse_bits() >> (usize::BITS - bits))
                .collect();
            let mut twiddles = twiddle_table(n);
            twiddles.truncate(n / 2);
            Kind::Radix2 { twiddles, bitrev }
        } else if n <= DIRECT_MAX {
            Kind::Direct {
                twiddles: twiddle_table(n),
            }
        } else {
            let m = (2 * n - 1).next_power_of_two();
            // k^2 reduced mod 2n keeps the chirp angle small.
            let chirp: Vec<Complex64> = (0..n)
                .map(|k| {
                    let q = ((k as u128 * k as u128) % (2 * n as u128)) as f64;
                    unit(-PI * q / n as f64)
                })
                .collect();
            let inner = Box::new(Dft::new(m));
            let mut kernel = vec![Complex64::new(0.0, 0.0); m];
            kernel[0] = chirp[0].conj();
            for k in 1..n {
                kernel[k] = chirp[k].conj();
                kernel[m - k] = chirp[k].conj();
            }
            inner.forward(&mut kernel, &mut Vec::new());
            Kind::Bluestein {
                chirp,
                kernel,
                inner,
            }
        };
        Dft { n, kind }
    }

    pub(crate) fn len(&self) -> usize {
        self.n
    }

    pub(crate) fn forward(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        debug_assert_eq!(buf.len(), self.n);
        match &self.kind {
            Kind::Identity => {}
            Kind::Direct { twiddles } => {
                scratch.clear();
                scratch.extend_from_slice(buf);
                let n = self.n;
                for (k, out) in buf.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    let mut idx = 0;
                    for x in scratch.iter() {
                        acc += x * twiddles[idx];
                        idx += k;
                        if idx >= n {
                            idx -= n;
                        }
                    }
                    *out = acc;
                }
            }
            Kind::Radix2 { twiddles, bitrev } => {
                for (i, &j) in bitrev.iter().enumerate() {
                    if i < j {
                        buf.swap(i, j);
                    }
                }
                let n = self.n;
                let mut len = 2;
                while len <= n {
                    let half = len / 2;
                    let stride = n / len;
                    for start in (0..n).step_by(len) {
                        for k in 0..half {
                            let w = twiddles[k * stride];
                            let a = buf[start + k];
                            let b = buf[start + k + half] * w;
                            buf[start + k] = a + b;
                            buf[start + k + half] = a - b;
                        }
                    }
                    len <<= 1;
                }
            }
            Kind::Bluestein {
                chirp,
                kernel,
                inner,
            } => {
                let m = inner.len();
                scratch.clear();
                scratch.resize(m, Complex64::new(0.0, 0.0));
                for (k, x) in buf.iter().enumerate() {
                    scratch[k] = x * chirp[k];
                }
                let mut work = Vec::new();
                inner.forward(scratch, &mut work);
                for (a, b) in scratch.iter_mut().zip(kernel.iter()) {
                    *a *= b;
                }
                inner.inverse(scratch, &mut work);
                let scale = 1.0 / m as f64;
                for (k, out) in buf.iter_mut().enumerate() {
                    *out = scratch[k] * chirp[k] * scale;
                }
            }
        }
    }

    /// Inverse kernel without the `1/n` normalization.
    pub(crate) fn inverse(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        for x in buf.iter_mut() {
            *x = x.conj();
        }
        self.forward(buf, scratch);
        for x in buf.iter_mut() {
            *x = x.conj();
        }
    }
}
