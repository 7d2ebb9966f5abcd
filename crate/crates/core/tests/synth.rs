mod common;

use std::collections::HashSet;

use ftrpca_core::linalg::singular_values;
use ftrpca_core::synth::*;
use ftrpca_core::tensor::fft_mode3;
use ftrpca_core::linalg::CMatrix;
use ftrpca_core::Tensor3;

fn golden_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn middle_slice_matches_golden_render() {
    let n = 32;
    let slab = phantom_slices(n, &[n / 2]).unwrap();
    let golden = golden_rows(include_str!("golden/phantom32_mid.txt"));
    assert_eq!(golden.len(), n);
    for (r, row) in golden.iter().enumerate() {
        assert_eq!(row.len(), n);
        for (c, &v) in row.iter().enumerate() {
            assert!((slab.get(r, c, 0) - v).abs() < 1e-9, "({r}, {c})");
        }
    }
}

#[test]
fn phantom_range_and_similar_slices() {
    let x = phantom3d(200, 21).unwrap();
    assert_eq!(x.dims(), [200, 200, 21]);
    let (lo, hi) = x.as_slice().iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    assert_eq!((lo, hi), (0.0, 255.0));
    let norm = |s: &[f64]| s.iter().map(|v| v * v).sum::<f64>().sqrt();
    for k in 1..19 {
        let diff: Vec<f64> = x.frontal(k + 1).iter().zip(x.frontal(k)).map(|(a, b)| a - b).collect();
        assert!(norm(&diff) / norm(x.frontal(k)) < 0.5, "slice {k}");
    }
    assert!(phantom_value(0.0, 0.0, 0.0) > 0.0);
    assert_eq!(phantom_slice_indices(200, 21), (89..110).collect::<Vec<_>>());
    assert_eq!(phantom_slice_indices(8, 8), (0..8).collect::<Vec<_>>());
    assert!(matches!(phantom3d(4, 2), Err(ftrpca_core::Error::InvalidDims(_))));
    assert!(phantom3d(16, 17).is_err());
}

#[test]
fn noise_count_and_determinism() {
    let x = Tensor3::zeros([200, 200, 80]).unwrap();
    let spec = NoiseSpec::new(0.3, 9);
    let (noisy, positions) = add_sparse_noise_recorded(&x, &spec).unwrap();
    assert_eq!(positions.len(), 960_000);
    assert_eq!(positions.iter().collect::<HashSet<_>>().len(), 960_000);
    let untouched: HashSet<usize> = positions.iter().copied().collect();
    for (i, &v) in noisy.as_slice().iter().enumerate() {
        if !untouched.contains(&i) {
            assert_eq!(v, 0.0);
        } else {
            assert!((0.0..=255.0).contains(&v));
        }
    }
    let again = add_sparse_noise(&x, &spec).unwrap();
    assert_eq!(again, noisy);
}

#[test]
fn noise_extremes() {
    let x = Tensor3::from_fn([4, 4, 3], |i, j, k| (i + j + k) as f64).unwrap();
    assert_eq!(add_sparse_noise(&x, &NoiseSpec::new(0.0, 1)).unwrap(), x);
    let full = add_sparse_noise(&x, &NoiseSpec { ratio: 1.0, low: 10.0, high: 20.0, seed: 1 }).unwrap();
    assert!(full.as_slice().iter().all(|v| (10.0..=20.0).contains(v)));
    assert!(add_sparse_noise(&x, &NoiseSpec::new(1.5, 1)).is_err());
}

#[test]
fn lowrank_sparse_has_requested_tubal_rank() {
    let p = random_lowrank_sparse([12, 10, 5], 3, 0.1, 2.0, 4).unwrap();
    let xb = fft_mode3(&p.low_rank);
    for k in 0..5 {
        let m = CMatrix::from_vec(12, 10, xb.frontal(k).to_vec()).unwrap();
        let s = singular_values(&m).unwrap();
        let rank = s.iter().filter(|&&v| v > 1e-6 * s[0]).count();
        assert_eq!(rank, 3, "slice {k}");
    }
    assert_eq!(p.sparse.as_slice().iter().filter(|v| **v != 0.0).count(), 60);
    assert!(p.sparse.as_slice().iter().all(|v| [0.0, 2.0, -2.0].contains(v)));
    assert_eq!(&p.low_rank + &p.sparse, p.observed);
    assert_eq!(random_lowrank_sparse([12, 10, 5], 3, 0.1, 2.0, 4).unwrap(), p);
    let clean = random_lowrank_sparse([6, 6, 2], 2, 0.0, 1.0, 0).unwrap();
    assert_eq!(clean.observed, clean.low_rank);
    assert!(matches!(
        random_lowrank_sparse([4, 3, 2], 4, 0.1, 1.0, 0),
        Err(ftrpca_core::Error::InvalidRank { rank: 4, max: 3 })
    ));
}

#[test]
fn synthetic_video_structure() {
    let clip = synth_video(64, 48, 20, 7).unwrap();
    let [h, w, f] = clip.video.dims();
    assert_eq!((h, w, f), (48, 64, 20));
    assert_eq!(clip.side, 8);
    for k in 0..f {
        for r in 0..h {
            for c in 0..w {
                let differs = clip.video.get(r, c, k) != clip.background.get(r, c, 0);
                assert_eq!(differs, clip.covered(k, r, c), "({r}, {c}, {k})");
            }
        }
    }
    for k in 1..f {
        let (r0, c0) = clip.path[k - 1];
        let (r1, c1) = clip.path[k];
        assert_eq!((r1 as isize - r0 as isize).abs(), 1);
        assert_eq!((c1 as isize - c0 as isize).abs(), 1);
    }
    let mean = clip.video.mode3_mean_broadcast();
    for r in 0..h {
        for c in 0..w {
            if !clip.on_path(r, c) {
                assert!((mean.get(r, c, 0) - clip.background.get(r, c, 0)).abs() < 1e-9);
                assert!(clip.video.tube(r, c).iter().all(|&v| v == clip.background.get(r, c, 0)));
            }
        }
    }
    assert_eq!(synth_video(64, 48, 20, 7).unwrap(), clip);
    assert!(synth_video(16, 16, 20, 0).is_err());
}
