//! Seeded data generators.
//!
//! Every generator draws from ChaCha8 seeded with the caller's `u64`. Each
//! independent quantity (positions, values, factor entries, signs, path)
//! reads its own ChaCha stream of that seed, so changing how many values one
//! quantity consumes never shifts another.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tsvd::tproduct;
use crate::{Error, Result, Tensor3};

/// Stream ids used with [`stream`].
mod streams {
    pub const POSITIONS: u64 = 1;
    pub const VALUES: u64 = 2;
    pub const FACTOR_P: u64 = 3;
    pub const FACTOR_Q: u64 = 4;
    pub const SIGNS: u64 = 5;
    pub const PATH: u64 = 6;
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// One ellipsoid: intensity, semi-axes, center, Euler angles in degrees.
struct Ellipsoid {
    intensity: f64,
    axes: [f64; 3],
    center: [f64; 3],
    euler: [f64; 3],
}

const fn e(intensity: f64, axes: [f64; 3], center: [f64; 3], euler: [f64; 3]) -> Ellipsoid {
    Ellipsoid {
        intensity,
        axes,
        center,
        euler,
    }
}

/// Modified Shepp-Logan head in three dimensions (high-contrast variant).
const MODIFIED_SHEPP_LOGAN: [Ellipsoid; 10] = [
    e(1.0, [0.6900, 0.920, 0.810], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]),
    e(-0.8, [0.6624, 0.874, 0.780], [0.0, -0.0184, 0.0], [0.0, 0.0, 0.0]),
    e(-0.2, [0.1100, 0.310, 0.220], [0.22, 0.0, 0.0], [-18.0, 0.0, 10.0]),
    e(-0.2, [0.1600, 0.410, 0.280], [-0.22, 0.0, 0.0], [18.0, 0.0, 10.0]),
    e(0.1, [0.2100, 0.250, 0.410], [0.0, 0.35, -0.15], [0.0, 0.0, 0.0]),
    e(0.1, [0.0460, 0.046, 0.050], [0.0, 0.1, 0.25], [0.0, 0.0, 0.0]),
    e(0.1, [0.0460, 0.046, 0.050], [0.0, -0.1, 0.25], [0.0, 0.0, 0.0]),
    e(0.1, [0.0460, 0.023, 0.050], [-0.08, -0.605, 0.0], [0.0, 0.0, 0.0]),
    e(0.1, [0.0230, 0.023, 0.020], [0.0, -0.606, 0.0], [0.0, 0.0, 0.0]),
    e(0.1, [0.0230, 0.046, 0.020], [0.06, -0.605, 0.0], [0.0, 0.0, 0.0]),
];

impl Ellipsoid {
    /// Rotation applied to sample coordinates before the axis test.
    fn rotation(&self) -> [[f64; 3]; 3] {
        let [phi, theta, psi] = self.euler.map(|d| d * PI / 180.0);
        let (cphi, sphi) = (libm::cos(phi), libm::sin(phi));
        let (ctheta, stheta) = (libm::cos(theta), libm::sin(theta));
        let (cpsi, spsi) = (libm::cos(psi), libm::sin(psi));
        [
            [
                cpsi * cphi - ctheta * sphi * spsi,
                cpsi * sphi + ctheta * cphi * spsi,
                spsi * stheta,
            ],
            [
                -spsi * cphi - ctheta * sphi * cpsi,
                -spsi * sphi + ctheta * cphi * cpsi,
                cpsi * stheta,
            ],
            [stheta * sphi, -stheta * cphi, ctheta],
        ]
    }
}

/// Normalized grid coordinate of voxel `i` on an `n`-point axis, in `[-1, 1]`.
fn grid(i: usize, n: usize) -> f64 {
    let half = (n as f64 - 1.0) / 2.0;
    (i as f64 - half) / half
}

/// Raw (unscaled) phantom intensity at normalized coordinates.
pub fn phantom_value(x: f64, y: f64, z: f64) -> f64 {
    phantom_value_with(&rotations(), x, y, z)
}

fn rotations() -> Vec<[[f64; 3]; 3]> {
    MODIFIED_SHEPP_LOGAN.iter().map(Ellipsoid::rotation).collect()
}

fn phantom_value_with(rot: &[[[f64; 3]; 3]], x: f64, y: f64, z: f64) -> f64 {
    let mut v = 0.0;
    for (ell, r) in MODIFIED_SHEPP_LOGAN.iter().zip(rot) {
        let p = [
            r[0][0] * x + r[0][1] * y + r[0][2] * z,
            r[1][0] * x + r[1][1] * y + r[1][2] * z,
            r[2][0] * x + r[2][1] * y + r[2][2] * z,
        ];
        let mut q = 0.0;
        for a in 0..3 {
            let d = p[a] - ell.center[a];
            q += d * d / (ell.axes[a] * ell.axes[a]);
        }
        if q <= 1.0 {
            v += ell.intensity;
        }
    }
    v
}

/// Renders the axial slices `z_indices` of the `n^3` phantom volume,
/// unscaled. Rows run from `y = 1` at the top down to `y = -1`, columns
/// follow `x`, as the head is usually displayed.
pub fn phantom_slices(n: usize, z_indices: &[usize]) -> Result<Tensor3> {
    if n < 2 || z_indices.is_empty() || z_indices.iter().any(|&z| z >= n) {
        return Err(Error::InvalidDims(format!(
            "phantom slices {z_indices:?} of an {n}^3 volume"
        )));
    }
    let rot = rotations();
    let zs: Vec<f64> = z_indices.iter().map(|&k| grid(k, n)).collect();
    Tensor3::from_fn([n, n, zs.len()], |r, c, k| {
        phantom_value_with(&rot, grid(c, n), -grid(r, n), zs[k])
    })
}

/// Axial slice indices used by [`phantom3d`]: `i3` consecutive slices
/// centered on the middle of the volume.
pub fn phantom_slice_indices(n: usize, i3: usize) -> Vec<usize> {
    let first = n.saturating_sub(i3) / 2;
    (first..first + i3).collect()
}

/// `n x n x i3` slab of the 3D modified Shepp-Logan phantom, linearly
/// rescaled to `[0, 255]`.
pub fn phantom3d(n: usize, i3: usize) -> Result<Tensor3> {
    if n < 8 || i3 == 0 || i3 > n {
        return Err(Error::InvalidDims(format!(
            "phantom needs n >= 8 and 1 <= i3 <= n, got n = {n}, i3 = {i3}"
        )));
    }
    let raw = phantom_slices(n, &phantom_slice_indices(n, i3))?;
    Ok(rescale_to_255(&raw))
}

fn rescale_to_255(t: &Tensor3) -> Tensor3 {
    let (lo, hi) = t
        .as_slice()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi > lo {
        t.map(|v| (v - lo) / (hi - lo) * 255.0)
    } else {
        t.map(|_| 0.0)
    }
}

/// Salt-style corruption: a fraction of entries replaced by uniform values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub ratio: f64,
    pub low: f64,
    pub high: f64,
    pub seed: u64,
}

impl NoiseSpec {
    /// Replacement values in `[0, 255]`.
    pub fn new(ratio: f64, seed: u64) -> Self {
        NoiseSpec {
            ratio,
            low: 0.0,
            high: 255.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.ratio) {
            return Err(Error::RatioOutOfRange(self.ratio));
        }
        if !(self.low <= self.high) || !self.low.is_finite() || !self.high.is_finite() {
            return Err(Error::InvalidDims(format!(
                "noise range [{}, {}]",
                self.low, self.high
            )));
        }
        Ok(())
    }

    /// Number of entries replaced in a tensor of `len` entries.
    pub fn count(&self, len: usize) -> usize {
        libm::floor(self.ratio * len as f64) as usize
    }
}

/// Replaces `floor(ratio * len)` distinct entries by uniform values.
pub fn add_sparse_noise(x: &Tensor3, spec: &NoiseSpec) -> Result<Tensor3> {
    Ok(add_sparse_noise_recorded(x, spec)?.0)
}

/// [`add_sparse_noise`] that also returns the replaced linear indices,
/// sorted ascending.
pub fn add_sparse_noise_recorded(x: &Tensor3, spec: &NoiseSpec) -> Result<(Tensor3, Vec<usize>)> {
    spec.validate()?;
    let len = x.len();
    let amount = spec.count(len);
    let mut positions = index::sample(&mut stream(spec.seed, streams::POSITIONS), len, amount).into_vec();
    positions.sort_unstable();
    let mut values = stream(spec.seed, streams::VALUES);
    let mut out = x.clone();
    let data = out.as_mut_slice();
    for &p in &positions {
        data[p] = values.random_range(spec.low..=spec.high);
    }
    Ok((out, positions))
}

/// Ground truth and observation for a low-rank-plus-sparse recovery test.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankSparse {
    pub low_rank: Tensor3,
    pub sparse: Tensor3,
    pub observed: Tensor3,
}

/// `L0 = P * Q` with Gaussian factors of tubal rank `rank`, each entry
/// scaled by `1 / sqrt(rank * I3)`; `E0` has `floor(sparsity * len)` entries
/// of `+-magnitude`.
pub fn random_lowrank_sparse(
    dims: [usize; 3],
    rank: usize,
    sparsity: f64,
    magnitude: f64,
    seed: u64,
) -> Result<LowRankSparse> {
    let [i1, i2, i3] = dims;
    let max = i1.min(i2);
    if rank == 0 || rank > max {
        return Err(Error::InvalidRank { rank, max });
    }
    if !(0.0..=1.0).contains(&sparsity) {
        return Err(Error::RatioOutOfRange(sparsity));
    }
    let scale = 1.0 / libm::sqrt((rank * i3) as f64);
    let mut gp = stream(seed, streams::FACTOR_P);
    let p = Tensor3::from_fn([i1, rank, i3], |_, _, _| scale * gp.sample::<f64, _>(StandardNormal))?;
    let mut gq = stream(seed, streams::FACTOR_Q);
    let q = Tensor3::from_fn([rank, i2, i3], |_, _, _| scale * gq.sample::<f64, _>(StandardNormal))?;
    let low_rank = tproduct(&p, &q)?;

    let mut sparse = Tensor3::zeros(dims)?;
    let len = sparse.len();
    let amount = libm::floor(sparsity * len as f64) as usize;
    let mut positions = index::sample(&mut stream(seed, streams::POSITIONS), len, amount).into_vec();
    positions.sort_unstable();
    let mut signs = stream(seed, streams::SIGNS);
    let data = sparse.as_mut_slice();
    for &pos in &positions {
        data[pos] = if signs.random_bool(0.5) { magnitude } else { -magnitude };
    }
    let observed = &low_rank + &sparse;
    Ok(LowRankSparse {
        low_rank,
        sparse,
        observed,
    })
}

/// A static background with one bright square moving diagonally.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticVideo {
    /// `height x width x frames`
    pub video: Tensor3,
    /// `height x width x 1`
    pub background: Tensor3,
    /// Side length of the square in pixels.
    pub side: usize,
    /// Top-left `(row, col)` of the square in each frame.
    pub path: Vec<(usize, usize)>,
}

impl SyntheticVideo {
    /// Whether pixel `(row, col)` is covered by the square in any frame.
    pub fn on_path(&self, row: usize, col: usize) -> bool {
        self.path
            .iter()
            .any(|&(r, c)| (r..r + self.side).contains(&row) && (c..c + self.side).contains(&col))
    }

    pub fn covered(&self, frame: usize, row: usize, col: usize) -> bool {
        let (r, c) = self.path[frame];
        (r..r + self.side).contains(&row) && (c..c + self.side).contains(&col)
    }
}

/// Intensity offset of the moving square.
pub const OBJECT_OFFSET: f64 = 100.0;

fn background_pixel(row: usize, col: usize, height: usize, width: usize) -> f64 {
    let u = col as f64 / (width.max(2) - 1) as f64;
    let v = row as f64 / (height.max(2) - 1) as f64;
    40.0 + 90.0 * u + 50.0 * v + 20.0 * libm::sin(PI * u) * libm::sin(PI * v)
}

/// Surveillance-style clip: smooth gradient background, square of side
/// `width / 8` brightened by [`OBJECT_OFFSET`], moving one pixel per frame
/// along a seeded diagonal.
pub fn synth_video(width: usize, height: usize, frames: usize, seed: u64) -> Result<SyntheticVideo> {
    let side = (width / 8).max(1);
    if width == 0 || height == 0 || frames == 0 || side + frames - 1 > width.min(height) {
        return Err(Error::InvalidDims(format!(
            "square of side {side} moving {frames} frames does not fit {width}x{height}"
        )));
    }
    let mut rng = stream(seed, streams::PATH);
    let travel = frames - 1;
    let mut start_and_step = |extent: usize| {
        let forward = rng.random_bool(0.5);
        let free = extent - side - travel;
        let offset = rng.random_range(0..=free);
        if forward {
            (offset as isize, 1isize)
        } else {
            ((offset + travel) as isize, -1isize)
        }
    };
    let (r0, dr) = start_and_step(height);
    let (c0, dc) = start_and_step(width);
    let path: Vec<(usize, usize)> = (0..frames as isize)
        .map(|k| ((r0 + dr * k) as usize, (c0 + dc * k) as usize))
        .collect();

    let background = Tensor3::from_fn([height, width, 1], |r, c, _| background_pixel(r, c, height, width))?;
    let clip = SyntheticVideo {
        video: Tensor3::zeros([height, width, frames])?,
        background,
        side,
        path,
    };
    let video = Tensor3::from_fn([height, width, frames], |r, c, k| {
        let b = clip.background.get(r, c, 0);
        if clip.covered(k, r, c) {
            (b + OBJECT_OFFSET).min(255.0)
        } else {
            b
        }
    })?;
    Ok(SyntheticVideo { video, ..clip })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_is_inside_the_skull() {
        // Inside the outer shell and the brain ellipsoid: 1.0 - 0.8.
        assert!((phantom_value(0.0, 0.0, 0.0) - 0.2).abs() < 1e-12);
        assert_eq!(phantom_value(0.99, 0.99, 0.99), 0.0);
    }

    #[test]
    fn phantom_range_and_validation() {
        let p = phantom3d(32, 5).unwrap();
        assert_eq!(p.dims(), [32, 32, 5]);
        assert!(p.as_slice().iter().all(|v| (0.0..=255.0).contains(v)));
        assert!(phantom3d(4, 2).is_err());
        assert!(phantom3d(16, 17).is_err());
    }

    #[test]
    fn noise_extremes() {
        let x = phantom3d(16, 4).unwrap();
        assert_eq!(add_sparse_noise(&x, &NoiseSpec::new(0.0, 3)).unwrap(), x);
        let spec = NoiseSpec {
            ratio: 1.0,
            low: 10.0,
            high: 20.0,
            seed: 9,
        };
        let all = add_sparse_noise(&x, &spec).unwrap();
        assert!(all.as_slice().iter().all(|v| (10.0..=20.0).contains(v)));
        assert!(add_sparse_noise(&x, &NoiseSpec::new(1.2, 0)).is_err());
    }

    #[test]
    fn noise_is_deterministic_per_seed() {
        let x = Tensor3::zeros([10, 10, 3]).unwrap();
        let a = add_sparse_noise_recorded(&x, &NoiseSpec::new(0.3, 5)).unwrap();
        let b = add_sparse_noise_recorded(&x, &NoiseSpec::new(0.3, 5)).unwrap();
        let c = add_sparse_noise_recorded(&x, &NoiseSpec::new(0.3, 6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.1, c.1);
        assert_eq!(a.1.len(), 90);
    }

    #[test]
    fn lowrank_sparse_basics() {
        let a = random_lowrank_sparse([8, 6, 4], 2, 0.0, 1.0, 1).unwrap();
        assert_eq!(a.sparse.max_abs(), 0.0);
        assert_eq!(a.observed, a.low_rank);
        assert_eq!(random_lowrank_sparse([8, 6, 4], 2, 0.1, 1.0, 1).unwrap(), random_lowrank_sparse([8, 6, 4], 2, 0.1, 1.0, 1).unwrap());
        assert!(matches!(
            random_lowrank_sparse([8, 6, 4], 7, 0.1, 1.0, 1),
            Err(Error::InvalidRank { rank: 7, max: 6 })
        ));
    }

    #[test]
    fn video_frames_differ_only_on_the_square() {
        let v = synth_video(64, 48, 10, 3).unwrap();
        assert_eq!(v.side, 8);
        for k in 0..10 {
            for r in 0..48 {
                for c in 0..64 {
                    let differs = v.video.get(r, c, k) != v.background.get(r, c, 0);
                    assert_eq!(differs, v.covered(k, r, c));
                }
            }
        }
        assert!(synth_video(16, 16, 20, 0).is_err());
    }
}
