//! Frequency-filtered robust tensor principal component analysis.
//!
//! The crate splits an order-3 tensor `X` into a low-rank part `L` and a
//! sparse part `E` by minimizing a band-weighted tensor nuclear norm of `L`
//! plus an `l1` penalty on `E`. The nuclear norm lives in the Fourier domain
//! of the third mode: every pair of conjugate frontal slices forms a
//! frequency band, and each band carries its own filtering coefficient.
//!
//! Layout:
//!
//! * [`tensor`] - the real [`Tensor3`] container, its mode-3 spectrum and
//!   frequency-band bookkeeping.
//! * [`tsvd`] - t-product and t-SVD.
//! * [`norms`] - tensor norms, soft thresholding, SVT and the filtered
//!   tensor SVT ([`norms::ftsvt`]).
//! * [`solver`] - the ADMM loop ([`solver::rtpca`]).
//! * [`filter`] - filter vectors for the supported tasks and band profiling.
//! * [`synth`] - phantom, corruption, low-rank and video generators.
//! * [`metrics`] - PSNR, RSE, AGE, pEPs, pCEPs and MS-SSIM.
//!
//! The crate is `no_std` with `alloc` when built without the default `std`
//! feature. The `parallel` feature spreads per-slice work over rayon; each
//! slice's output depends only on that slice, so results do not change with
//! the thread count.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
mod fft;
mod par;

pub mod filter;
pub mod linalg;
pub mod metrics;
pub mod norms;
pub mod solver;
pub mod synth;
pub mod tensor;
pub mod tsvd;

pub use error::{Error, Result};
pub use filter::BandNormProfile;
pub use norms::FilterVector;
pub use linalg::CMatrix;
pub use metrics::{GrayImage, MetricsReport};
pub use num_complex::Complex64;
pub use solver::{SolverConfig, SolverResult};
pub use tensor::{band_count, BandIndex, SpectralTensor, Tensor3};
pub use tsvd::TsvdFactors;
