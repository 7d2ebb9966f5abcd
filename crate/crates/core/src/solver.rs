//! ADMM for `min ||L||_FTNN + lambda ||E||_1  s.t.  X = L + E`.
//!
//! Each iteration:
//!
//! ```text
//! L <- FTSVT_{alpha / mu}(X - E + Y / mu)
//! E <- soft_{lambda / mu}(X - L + Y / mu)
//! Y <- Y + mu (X - L - E)
//! mu <- min(rho mu, mu_max)
//! ```
//!
//! and stops once `||L_new - L||_F / max(||L||_F, 1) <= eps`, except while
//! L is still stuck at zero with X - L - E not yet small. The filter
//! `[0, inf, ..., inf]` makes the L-step a mode-3 mean, so that case runs
//! without any FFT or SVD.

use alloc::format;
use alloc::vec::Vec;

use crate::norms::{fro_norm, ftsvt_with_stats, shrink_entries, FilterVector};
use crate::{Error, Result, Tensor3};

/// `1 / sqrt(max(I1, I2) I3)`.
pub fn default_lambda(i1: usize, i2: usize, i3: usize) -> f64 {
    1.0 / libm::sqrt((i1.max(i2) * i3) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub lambda: f64,
    pub mu0: f64,
    pub rho: f64,
    pub mu_max: f64,
    pub eps: f64,
    pub max_iter: usize,
    pub alpha: FilterVector,
}

impl SolverConfig {
    pub const DEFAULT_MU0: f64 = 1e-3;
    pub const DEFAULT_RHO: f64 = 1.1;
    pub const DEFAULT_MU_MAX: f64 = 1e10;
    pub const DEFAULT_EPS: f64 = 1e-7;
    pub const DEFAULT_MAX_ITER: usize = 500;

    /// Default parameters for a tensor of shape `dims`, with the default
    /// lambda for that shape.
    pub fn new(dims: [usize; 3], alpha: FilterVector) -> Self {
        SolverConfig {
            lambda: default_lambda(dims[0], dims[1], dims[2]),
            mu0: Self::DEFAULT_MU0,
            rho: Self::DEFAULT_RHO,
            mu_max: Self::DEFAULT_MU_MAX,
            eps: Self::DEFAULT_EPS,
            max_iter: Self::DEFAULT_MAX_ITER,
            alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::ConfigInvalid(format!("{what} = {v}")));
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad("lambda", self.lambda);
        }
        if !(self.mu0 > 0.0 && self.mu0.is_finite()) {
            return bad("mu0", self.mu0);
        }
        if !(self.rho >= 1.0 && self.rho.is_finite()) {
            return bad("rho", self.rho);
        }
        if !(self.mu_max >= self.mu0) {
            return bad("mu_max", self.mu_max);
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad("eps", self.eps);
        }
        if self.max_iter == 0 {
            return Err(Error::ConfigInvalid("max_iter = 0".into()));
        }
        Ok(())
    }
}

/// Per-iteration report passed to the progress callback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    /// 1-based iteration number.
    pub iteration: usize,
    /// Relative change of L.
    pub residual: f64,
    /// `||X - L - E||_F / ||X||_F` after the iteration.
    pub feasibility: f64,
    /// Penalty used in this iteration.
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub low_rank: Tensor3,
    pub sparse: Tensor3,
    pub iterations: usize,
    /// Relative change of L, one entry per iteration.
    pub residual_history: Vec<f64>,
    /// Feasibility residual, one entry per iteration.
    pub feasibility_history: Vec<f64>,
    pub svd_calls: usize,
    pub converged: bool,
}

impl SolverResult {
    pub fn final_feasibility(&self) -> f64 {
        self.feasibility_history.last().copied().unwrap_or(0.0)
    }
}

pub fn rtpca(x: &Tensor3, cfg: &SolverConfig) -> Result<SolverResult> {
    rtpca_with_progress(x, cfg, |_| {})
}

pub fn rtpca_with_progress(
    x: &Tensor3,
    cfg: &SolverConfig,
    mut progress: impl FnMut(&Progress),
) -> Result<SolverResult> {
    cfg.validate()?;
    cfg.alpha.check_for(x.dims()[2])?;
    let fast_path = cfg.alpha.is_zero_frequency();

    let dims = x.dims();
    let mut low = Tensor3::zeros(dims)?;
    let mut sparse = Tensor3::zeros(dims)?;
    let mut dual = Tensor3::zeros(dims)?;
    let mut work = Tensor3::zeros(dims)?;
    let x_norm = fro_norm(x).max(f64::MIN_POSITIVE);

    let mut mu = cfg.mu0;
    let mut residual_history = Vec::new();
    let mut feasibility_history = Vec::new();
    let mut svd_calls = 0;
    let mut converged = false;

    for iteration in 1..=cfg.max_iter {
        let inv_mu = 1.0 / mu;

        for (((w, &xv), &ev), &yv) in work
            .as_mut_slice()
            .iter_mut()
            .zip(x.as_slice())
            .zip(sparse.as_slice())
            .zip(dual.as_slice())
        {
            *w = xv - ev + yv * inv_mu;
        }
        let next_low = if fast_path {
            work.mode3_mean_broadcast()
        } else {
            let out = ftsvt_with_stats(&work, &cfg.alpha, inv_mu)?;
            svd_calls += out.svd_calls;
            out.tensor
        };

        for (((w, &xv), &lv), &yv) in work
            .as_mut_slice()
            .iter_mut()
            .zip(x.as_slice())
            .zip(next_low.as_slice())
            .zip(dual.as_slice())
        {
            *w = xv - lv + yv * inv_mu;
        }
        sparse = shrink_entries(&work, cfg.lambda * inv_mu);

        let mut feas_sq = 0.0;
        for (((y, &xv), &lv), &ev) in dual
            .as_mut_slice()
            .iter_mut()
            .zip(x.as_slice())
            .zip(next_low.as_slice())
            .zip(sparse.as_slice())
        {
            let r = xv - lv - ev;
            feas_sq += r * r;
            *y += mu * r;
        }

        let at_origin = low.max_abs() == 0.0 && next_low.max_abs() == 0.0;
        let change = fro_norm(&(&next_low - &low)) / fro_norm(&low).max(1.0);
        let feasibility = libm::sqrt(feas_sq) / x_norm;
        if !change.is_finite() || !next_low.is_finite() || !sparse.is_finite() || !dual.is_finite() {
            return Err(Error::NonFinite(format!("iterate {iteration} diverged")));
        }
        low = next_low;
        residual_history.push(change);
        feasibility_history.push(feasibility);
        progress(&Progress {
            iteration,
            residual: change,
            feasibility,
            mu,
        });
        mu = (cfg.rho * mu).min(cfg.mu_max);
        // While the threshold still exceeds every singular value, L sits at
        // zero and its change says nothing about convergence.
        let stalled = at_origin && feasibility > cfg.eps;
        if change <= cfg.eps && !stalled {
            converged = true;
            break;
        }
    }

    Ok(SolverResult {
        low_rank: low,
        sparse,
        iterations: residual_history.len(),
        residual_history,
        feasibility_history,
        svd_calls,
        converged,
    })
}
