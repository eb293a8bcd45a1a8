use adversary_core::linalg::{orthonormal_range, thin_svd};
use nalgebra::DMatrix;

fn load(path: &str) -> DMatrix<f64> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
}

// A 46×17 rank-15 generator matrix from a simulation run, on which a
// bidiagonal SVD once reconstructed with error ~1e-3.
#[test]
fn svd_reconstructs_rank_deficient_generator() {
    let m = load(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/svd_regression.json"));
    let svd = thin_svd(&m);
    let rebuilt = &svd.u * DMatrix::from_diagonal(&svd.singular_values) * svd.v.transpose();
    assert!((rebuilt - &m).amax() < 1e-13);
    let q = orthonormal_range(&m, 1e-12);
    assert_eq!(q.ncols(), 15);
    let residual = &m - &q * q.tr_mul(&m);
    assert!(residual.amax() < 1e-13);
}

#[test]
fn svd_of_random_tall_and_wide() {
    for (r, c) in [(7, 3), (3, 7), (5, 5)] {
        let m = DMatrix::from_fn(r, c, |i, j| ((i * 31 + j * 17) % 11) as f64 - 5.0);
        let svd = thin_svd(&m);
        let k = r.min(c);
        assert_eq!(svd.u.shape(), (r, k));
        assert_eq!(svd.v.shape(), (c, k));
        let rebuilt = &svd.u * DMatrix::from_diagonal(&svd.singular_values) * svd.v.transpose();
        assert!((rebuilt - &m).amax() < 1e-12);
        assert!(svd.singular_values.as_slice().windows(2).all(|w| w[0] >= w[1]));
    }
}
