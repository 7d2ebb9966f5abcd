mod common;

use common::*;
use ftrpca_core::tsvd::{tproduct, tsvd};
use ftrpca_core::Tensor3;
use nalgebra::DMatrix;

#[test]
fn tproduct_matches_circular_convolution() {
    let mut g = rng(3);
    let a = random_tensor([3, 2, 5], &mut g);
    let b = random_tensor([2, 4, 5], &mut g);
    let c = tproduct(&a, &b).unwrap();
    let expected = Tensor3::from_fn([3, 4, 5], |i, j, k| {
        (0..5)
            .map(|t| (0..2).map(|m| a.get(i, m, t) * b.get(m, j, (k + 5 - t) % 5)).sum::<f64>())
            .sum()
    })
    .unwrap();
    assert!(max_diff(&c, &expected) < 1e-12);
    assert!(tproduct(&a, &a).is_err());
}

#[test]
fn tsvd_of_wide_and_tall_tensors() {
    let mut g = rng(4);
    for dims in [[5, 9, 4], [9, 5, 3], [1, 1, 6]] {
        let x = random_tensor(dims, &mut g);
        let f = tsvd(&x).unwrap();
        assert!(rel_err(&f.reconstruct().unwrap(), &x) < 1e-10, "{dims:?}");
        // S is f-diagonal.
        let [r, c, n] = f.s.dims();
        for k in 0..n {
            for i in 0..r {
                for j in 0..c {
                    if i != j {
                        assert!(f.s.get(i, j, k).abs() < 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn single_slice_tsvd_is_matrix_svd() {
    let x = random_tensor([7, 4, 1], &mut rng(5));
    let f = tsvd(&x).unwrap();
    let m = DMatrix::from_fn(7, 4, |i, j| x.get(i, j, 0));
    let expected = m.svd(false, false).singular_values;
    for (i, s) in expected.iter().enumerate() {
        assert!((f.s.get(i, i, 0) - s).abs() < 1e-12);
    }
}
