#![allow(dead_code)]

use adversary_core::advdual::DecidingVectorSet;
use adversary_core::boolfn::BooleanFunction;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `v_{0,1} = v_{1,1} = (1)`.
pub fn identity_exact() -> DecidingVectorSet<f64> {
    DecidingVectorSet::from_fn(BooleanFunction::identity(), 1, |_, _| DVector::from_element(1, 1.0)).unwrap()
}

/// Optimal one-dimensional set for OR on two bits: with `a = 2^{-1/4}`,
/// `v_{00,j} = a`, a single-1 input carries `1/a` at its 1-bit, and
/// `v_{11,j} = 1/(2a)`.
pub fn or2_exact() -> DecidingVectorSet<f64> {
    let f = BooleanFunction::or(2).unwrap();
    let a = 2f64.powf(-0.25);
    let g = f.clone();
    DecidingVectorSet::from_fn(f, 1, move |x, j| {
        let bits = g.input(x);
        let v = match bits.hamming(&"00".parse().unwrap()) {
            0 => a,
            1 if bits.bit(j) => 1.0 / a,
            1 => 0.0,
            _ => 1.0 / (2.0 * a),
        };
        DVector::from_element(1, v)
    })
    .unwrap()
}

/// Random orthogonal `d×d` matrix from the QR of a Gaussian matrix.
pub fn random_orthogonal(d: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
    g.qr().q()
}

/// Random (not deciding) set of dimension `m` for `f`.
pub fn random_set(f: &BooleanFunction, m: usize, seed: u64) -> DecidingVectorSet<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DecidingVectorSet::from_fn(f.clone(), m, |_, _| {
        DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0))
    })
    .unwrap()
}

/// A deciding set for OR on two bits whose 1-input vectors span `R^2` at
/// both indices, so its maximum rank is 2.
pub fn or2_rank_two() -> DecidingVectorSet<f64> {
    let f = BooleanFunction::or(2).unwrap();
    // Domain order is 00, 01, 10, 11.
    let table = [
        [[1.0, 0.0], [1.0, 0.0]],
        [[0.0, 1.0], [1.0, 2.0]],
        [[1.0, 1.0], [0.0, 0.0]],
        [[0.5, -1.0], [0.5, 3.0]],
    ];
    DecidingVectorSet::from_fn(f, 2, |x, j| DVector::from_row_slice(&table[x][j])).unwrap()
}

/// Pad `vs` with zeros to dimension `d` and rotate every vector by one
/// random orthogonal matrix.
pub fn rotate_into(vs: &DecidingVectorSet<f64>, d: usize, seed: u64) -> DecidingVectorSet<f64> {
    let q = random_orthogonal(d, seed);
    DecidingVectorSet::from_fn(vs.function().clone(), d, |x, j| {
        let mut padded = DVector::zeros(d);
        padded.rows_mut(0, vs.dim()).copy_from(&vs.vector(x, j));
        &q * padded
    })
    .unwrap()
}
