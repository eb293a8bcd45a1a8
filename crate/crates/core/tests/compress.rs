mod common;

use adversary_core::advdual::*;
use adversary_core::boolfn::BooleanFunction;
use adversary_core::compress::*;
use adversary_core::error::Error;
use common::*;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

#[test]
fn realify_real_input_has_zero_imaginary_half() {
    let f = BooleanFunction::or(2).unwrap();
    let real = or2_exact();
    let cs = ComplexVectorSet::from_fn(f, 1, |x, j| real.vector(x, j).map(|v| c(v, 0.0))).unwrap();
    let r = realify(&cs).unwrap();
    assert_eq!(r.dim(), 2);
    for j in 0..2 {
        assert!(r.block(j).column(1).iter().all(|&v| v == 0.0));
    }
    for (x, y) in r.function().mixed_pairs() {
        assert_eq!(r.pair_sum(x, y), real.pair_sum(x, y));
    }
}

#[test]
fn realify_takes_real_parts_of_inner_products() {
    let f = BooleanFunction::identity();
    let cs = ComplexVectorSet::from_fn(f, 2, |x, _| {
        if x == 0 {
            DVector::from_vec(vec![c(0.0, 1.0), c(0.3, -0.2)])
        } else {
            DVector::from_vec(vec![c(0.0, 1.0), c(-1.5, 0.7)])
        }
    })
    .unwrap();
    let r = realify(&cs).unwrap();
    // ⟨(i, .3−.2i)|(i, −1.5+.7i)⟩ = 1 + (.3+.2i)(−1.5+.7i) = 1 − .45 − .14 + i(...)
    let expected = 1.0 + 0.3 * -1.5 - 0.2 * 0.7;
    assert!((r.pair_sum(0, 1) - expected).abs() < 1e-15);
    assert!((cs.pair_sum(0, 1).re - expected).abs() < 1e-15);
    for x in 0..2 {
        let cn: f64 = cs.blocks[0].row(x).iter().map(|z| z.norm_sqr()).sum();
        assert!((r.norm_sq(x) - cn).abs() < 1e-15);
    }
}

#[test]
fn realify_single_imaginary_unit() {
    let f = BooleanFunction::identity();
    let cs = ComplexVectorSet::from_fn(f, 1, |_, _| DVector::from_element(1, c(0.0, 1.0))).unwrap();
    let r = realify(&cs).unwrap();
    assert_eq!(r.vector(0, 0).as_slice(), &[0.0, 1.0]);
    assert_eq!(r.pair_sum(0, 1), 1.0);
    assert!(verify_deciding(&r, 0.0).within_tol);
}

#[test]
fn exact_compress_identity_is_unchanged_up_to_sign() {
    let out = exact_compress(&identity_exact()).unwrap();
    assert_eq!(out.dim(), 1);
    for x in 0..2 {
        assert!((out.vector(x, 0)[0].abs() - 1.0).abs() < 1e-15);
    }
    assert_eq!(verify_deciding(&out, 1e-15).max_deviation, 0.0);
}

#[test]
fn hand_built_rank_two_set() {
    let vs = or2_rank_two();
    assert_eq!(verify_deciding(&vs, 0.0).max_deviation, 0.0);
    assert_eq!(size_and_max_rank(&vs).1, 2);
}

#[test]
fn rotated_rank_two_set_compresses_to_two() {
    for seed in 0..10 {
        let base = or2_rank_two();
        let big = rotate_into(&base, 50, seed);
        let (a_in, _) = size_and_max_rank(&big);
        let out = exact_compress(&big).unwrap();
        assert_eq!(out.dim(), 2);
        assert!(verify_deciding(&out, 1e-9).within_tol);
        let (a_out, k) = size_and_max_rank(&out);
        assert!((a_out - a_in).abs() <= 1e-9);
        assert_eq!(k, 2);
    }
}

#[test]
fn zero_input_components_outside_the_span_are_dropped() {
    let base = or2_exact();
    let f = base.function().clone();
    let lifted = DecidingVectorSet::from_fn(f.clone(), 2, |x, j| {
        let v = base.vector(x, j)[0];
        DVector::from_vec(vec![v, if f.value(x) { 0.0 } else { 5.0 }])
    })
    .unwrap();
    let out = exact_compress(&lifted).unwrap();
    assert_eq!(out.dim(), 1);
    assert!(verify_deciding(&out, 1e-12).within_tol);
    assert!(size_and_max_rank(&out).0 <= size_and_max_rank(&lifted).0);
}

#[test]
fn identical_one_input_vectors_give_rank_one() {
    let f = BooleanFunction::or(3).unwrap();
    let g = f.clone();
    let vs = DecidingVectorSet::from_fn(f, 20, |x, _| {
        if g.value(x) { DVector::from_fn(20, |l, _| l as f64) } else { DVector::from_element(20, 1.0) }
    })
    .unwrap();
    assert_eq!(exact_compress(&vs).unwrap().dim(), 1);
}

#[test]
fn exact_compress_is_idempotent_on_constraints() {
    let f = BooleanFunction::random(4, 10, 5).unwrap();
    let vs = random_set(&f, 12, 2);
    let once = exact_compress(&vs).unwrap();
    let twice = exact_compress(&once).unwrap();
    for (x, y) in f.mixed_pairs() {
        assert!((once.pair_sum(x, y) - twice.pair_sum(x, y)).abs() < 1e-10);
        assert!((once.pair_sum(x, y) - vs.pair_sum(x, y)).abs() < 1e-10);
    }
}

#[test]
fn jl_dimension_matches_formula() {
    assert_eq!(jl_dimension(10, 0.5), 78);
    assert_eq!(jl_dimension(3, 2.0), 4);
}

fn unit_vectors(k: usize, d: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k)
        .map(|_| {
            let v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
            v.normalize()
        })
        .collect()
}

#[test]
fn zero_family_always_verifies() {
    let p = sample_jl_matrix(5, 0.1, &[DVector::<f64>::zeros(5)], 1, 0).unwrap();
    assert!(p.verified);
    assert_eq!(p.attempt, 0);
}

#[test]
fn unit_vector_family_verifies_and_preserves_products() {
    let family = unit_vectors(10, 100, 4);
    let p = sample_jl_matrix(100, 0.5, &family, 100, 17).unwrap();
    assert_eq!(p.n_rows, 78);
    assert_eq!(p.kind, JlMapKind::Dense);
    assert_eq!(p.output_dim(), 78);
    assert!(p.verified);
    assert!(p.attempt < 5, "needed {} attempts", p.attempt + 1);
    for u in &family {
        let su = p.apply(u);
        assert!((su.norm_squared() - 1.0).abs() <= 0.5);
        for v in &family {
            let sv = p.apply(v);
            assert!((su.dot(&sv) - u.dot(v)).abs() <= 2.0 * 0.5 * 2.0);
        }
    }
}

#[test]
fn large_epsilon_compresses_for_real() {
    let family = unit_vectors(3, 100, 1);
    let p = sample_jl_matrix(100, 2.0, &family, 10, 0).unwrap();
    assert!(p.n_rows < 100);
    assert_eq!(p.output_dim(), p.n_rows as usize);
}

#[test]
fn jl_sampling_is_reproducible() {
    let family = unit_vectors(4, 6, 2);
    let a = sample_jl_matrix(6, 0.3, &family, 20, 9).unwrap();
    let b = sample_jl_matrix(6, 0.3, &family, 20, 9).unwrap();
    assert_eq!(a.matrix, b.matrix);
    assert_eq!(a.matrix, sample_jl_attempt::<f64>(6, a.n_rows, 9, a.attempt));
}

#[test]
fn jl_rejects_bad_input() {
    assert!(matches!(sample_jl_matrix::<f64>(3, 0.1, &[], 5, 0), Err(Error::EmptyFamily(_))));
    assert!(sample_jl_matrix(3, 0.0, &[DVector::<f64>::zeros(3)], 5, 0).is_err());
}

#[test]
fn exhausted_attempts_return_unverified_best() {
    // N = 14 for 30 vectors: single attempts fail often.
    let family = unit_vectors(30, 40, 3);
    let mut failures = 0;
    for seed in 0..40 {
        let p = sample_jl_matrix(40, 1.5, &family, 1, seed).unwrap();
        assert_eq!(p.attempts, 1);
        assert_eq!(p.verified, p.worst_ratio <= 1.0);
        failures += !p.verified as usize;
    }
    assert!(failures > 0);
    let p = sample_jl_matrix(40, 0.2, &family, 2, 0).unwrap();
    assert!(p.attempts <= 2);
}

#[test]
fn factored_map_has_wishart_second_moment() {
    // E[FᵀF] = I for the factored map, like SᵀS for Gaussian S.
    let (d, n, reps) = (3, 5u64, 4000);
    let mut acc = DMatrix::<f64>::zeros(d, d);
    for seed in 0..reps {
        let f = sample_jl_attempt::<f64>(d, n, seed, 0);
        assert_eq!(f.shape(), (d, d));
        acc += f.transpose() * f;
    }
    acc /= reps as f64;
    assert!((acc - DMatrix::<f64>::identity(d, d)).amax() < 0.08);
}

#[test]
fn factored_map_concentrates_for_large_n() {
    let f = sample_jl_attempt::<f64>(4, 100_000_000, 3, 0);
    let g = f.transpose() * &f;
    assert!((g - DMatrix::<f64>::identity(4, 4)).amax() < 1e-3);
}

fn assert_lemmas(vs: &DecidingVectorSet<f64>, seed: u64) {
    let w = build_witnesses(vs, 100.0).unwrap();
    let kappa = certify(&w).unwrap().kappa;
    let cw = jl_compress(&w, kappa, seed).unwrap();
    assert!(cw.projection.verified);
    let r = check_jl_lemmas(&cw);
    assert!(r.all_hold, "{r:?}");
    assert!(r.ortho_coefficients.is_some());
    let expected = jl_epsilon(100.0, w.size, kappa);
    assert_eq!(cw.params.epsilon, expected);
    assert!((cw.params.theta - 1.0 / (40.0 * w.size)).abs() < 1e-15);
}

#[test]
fn jl_lemmas_hold_on_exact_sets() {
    for seed in 0..3 {
        assert_lemmas(&identity_exact(), seed);
        assert_lemmas(&or2_exact(), seed);
    }
}

#[test]
fn zeta_is_orthonormal_and_alpha_reproduces_it() {
    let w = build_witnesses(&or2_exact(), 100.0).unwrap();
    let kappa = certify(&w).unwrap().kappa;
    let cw = jl_compress(&w, kappa, 0).unwrap();
    // ζ_j = Σ_x α_{j,x} ψ_x, and the components assemble ζ_j again.
    for j in 0..kappa {
        let mut zeta = DVector::zeros(w.space.dim());
        for (k, psi) in w.psi.iter().enumerate() {
            zeta += psi * cw.alpha[(j, k)];
        }
        assert!((zeta.norm() - 1.0).abs() < 1e-12);
        let mut rebuilt = DVector::zeros(w.space.dim());
        rebuilt[0] = (0..w.ones.len()).map(|k| cw.alpha[(j, k)] / w.nu[k].sqrt()).sum();
        for i in 0..2 {
            for b in [false, true] {
                for l in 0..w.space.m {
                    rebuilt[w.space.coord(i, l, b)] = cw.component(j, i, b)[l] / (100.0 * w.size).sqrt();
                }
            }
        }
        assert!((rebuilt - zeta).amax() < 1e-12);
    }
}

#[test]
fn jl_rejects_wrong_kappa() {
    let w = build_witnesses(&identity_exact(), 100.0).unwrap();
    assert!(matches!(jl_compress(&w, 2, 0), Err(Error::KappaOutOfRange { .. })));
}

#[test]
fn compressed_json_has_parameters() {
    let w = build_witnesses(&identity_exact(), 100.0).unwrap();
    let cw = jl_compress(&w, 1, 0).unwrap();
    let v = serde_json::to_value(&cw).unwrap();
    assert_eq!(v["params"]["kappa"], 1);
    assert_eq!(v["projection"]["verified"], true);
    assert_eq!(v["psi"][0]["x"], "1");
}

#[test]
fn near_ortho_keeps_orthonormal_input() {
    let e: Vec<DVector<f64>> = (0..3).map(|k| DVector::from_fn(3, |r, _| (r == k) as u8 as f64)).collect();
    let nb = near_ortho_basis(&e, 0.01).unwrap();
    assert_eq!(nb.coefficients, DMatrix::identity(3, 3));
    assert_eq!(nb.vectors, e);
}

#[test]
fn near_ortho_two_vectors_closed_form() {
    let eps = 0.05f64;
    let u = DVector::from_vec(vec![1.0, 0.0]);
    let v = DVector::from_vec(vec![eps, (1.0 - eps * eps).sqrt()]);
    let nb = near_ortho_basis(&[u, v], eps).unwrap();
    let s = (1.0 - eps * eps).sqrt();
    assert!((nb.coefficients[(1, 0)] + eps / s).abs() < 1e-15);
    assert!((nb.coefficients[(1, 1)] - 1.0 / s).abs() < 1e-15);
    assert!(nb.coefficients[(1, 0)].abs() <= 3.0 * eps);
}

#[test]
fn near_ortho_precondition() {
    let e: Vec<DVector<f64>> = (0..4).map(|k| DVector::from_fn(4, |r, _| (r == k) as u8 as f64)).collect();
    assert!(matches!(near_ortho_basis(&e, 0.0625), Err(Error::Precondition(_))));
    let bad = vec![DVector::from_vec(vec![1.0, 0.0]), DVector::from_vec(vec![0.5, 1.0])];
    assert!(matches!(near_ortho_basis(&bad, 0.1), Err(Error::Precondition(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn near_ortho_bounds(seed in 0u64..10_000, r in 1usize..6, scale in 0.0f64..1.0) {
        let eps = 0.2 / r as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = r + 2;
        // Perturb the standard basis; perturbation ‖p‖ ≤ η keeps Gram deviations ≤ 2η + η².
        let eta = scale * eps / 3.0 / (d as f64).sqrt();
        let zeta: Vec<DVector<f64>> = (0..r)
            .map(|k| DVector::from_fn(d, |row, _| (row == k) as u8 as f64 + rng.random_range(-eta..eta)))
            .collect();
        let nb = near_ortho_basis(&zeta, eps).unwrap();
        for (a, u) in nb.vectors.iter().enumerate() {
            for (b, v) in nb.vectors.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                prop_assert!((u.dot(v) - target).abs() < 1e-12);
            }
            let mut rebuilt = DVector::zeros(d);
            for (i, z) in zeta.iter().enumerate() {
                rebuilt += z * nb.coefficients[(a, i)];
            }
            prop_assert!((rebuilt - u).amax() < 1e-12);
        }
        prop_assert!((&nb.coefficients - DMatrix::<f64>::identity(r, r)).amax() <= 3.0 * eps);
    }

    #[test]
    fn verified_projection_preserves_norms(seed in 0u64..1000, k in 1usize..8) {
        let family = unit_vectors(k, 12, seed);
        let eps = 0.4;
        let p = sample_jl_matrix(12, eps, &family, 100, seed).unwrap();
        prop_assume!(p.verified);
        for u in &family {
            let ratio = p.apply(u).norm_squared() / u.norm_squared();
            prop_assert!(ratio >= 1.0 - eps - 1e-12 && ratio <= 1.0 + eps + 1e-12);
        }
    }
}
