//! Acceptance criteria, one line each. Run with
//! `cargo test -p adversary-core --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use adversary_core::advdual::*;
use adversary_core::boolfn::BooleanFunction;
use adversary_core::compress::*;
use adversary_core::experiment::{median, run_all, ExperimentConfig, InstanceRun};
use adversary_core::sdp::{solve, AdmmConfig, StandardFormSdp};
use adversary_core::simulate::*;
use common::*;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn sdp_optimum(f: &BooleanFunction, iters: usize, target: f64, tol: f64, budget_s: f64) -> Outcome {
    let start = Instant::now();
    let p: StandardFormSdp<f64> = build_sdp(f).unwrap();
    let sol = solve(&p, &AdmmConfig::with_iters(iters)).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let err = (sol.objective_value - target).abs();
    outcome(
        err <= tol && secs < budget_s,
        format!("objective {:.9} (|err| {err:.1e} <= {tol:.0e}), {iters} iterations in {secs:.3}s (< {budget_s}s)", sol.objective_value),
    )
}

fn criterion_1() -> Outcome {
    sdp_optimum(&BooleanFunction::identity(), 1000, 1.0, 1e-3, 1.0)
}

fn criterion_2() -> Outcome {
    sdp_optimum(&BooleanFunction::or(2).unwrap(), 5000, 2f64.sqrt(), 0.02, 10.0)
}

fn criterion_3(runs: &[InstanceRun], secs: f64) -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for n in [5, 15, 25] {
        let at = |t: usize| {
            let mut eps: Vec<f64> = runs
                .iter()
                .flat_map(|r| &r.checkpoints)
                .filter(|c| c.n == n && c.iterations == t)
                .map(|c| c.epsilon())
                .collect();
            median(&mut eps)
        };
        let (early, late) = (at(300), at(3000));
        let ratio = early / late;
        pass &= ratio >= 10.0;
        parts.push(format!("n={n}: {early:.2e} -> {late:.2e} ({ratio:.0}x)"));
    }
    outcome(pass, format!("median eps T=300 -> T=3000, need >= 10x; {}; corpus {secs:.0}s", parts.join(", ")))
}

fn criterion_4(runs: &[InstanceRun]) -> Outcome {
    let finals: Vec<_> = runs.iter().map(|r| r.checkpoints.last().unwrap()).collect();
    let at_kappa = finals.iter().filter(|c| c.certificate.pass_at_kappa).count();
    let any = finals.iter().filter(|c| c.certificate.pass).count();
    let total = finals.len();
    outcome(
        at_kappa * 5 >= total * 4,
        format!("eps <= threshold at kappa*=kappa on {at_kappa}/{total} (need >= 80%); best kappa* passes {any}/{total}"),
    )
}

fn criterion_5(runs: &[InstanceRun]) -> Outcome {
    let mut checked = 0;
    let mut violations = Vec::new();
    for r in runs {
        let cert = &r.checkpoints.last().unwrap().certificate;
        let Some(k) = cert.kappa_star else { continue };
        checked += 1;
        let w = &r.witnesses;
        let params = SimParams::default_for(ReflectionKind::Svd { kappa_star: k }, 100.0, w.size);
        let report = simulate_function(&WitnessSource::Svd(w, k), params).unwrap();
        let bad = report
            .rows
            .iter()
            .filter(|row| if row.label { row.lower < 2.0 / 3.0 } else { row.upper > 1.0 / 3.0 })
            .count();
        if bad > 0 {
            let c = r.checkpoints.last().unwrap();
            violations.push(format!("n={} seed={} ({bad} inputs)", c.n, c.seed));
        }
    }
    outcome(
        violations.is_empty() && checked > 0,
        format!("svd-reflection simulations on {checked} certified instances, violations: {}", if violations.is_empty() { "none".into() } else { violations.join("; ") }),
    )
}

fn criterion_6() -> Outcome {
    let mut worst_dev = 0.0f64;
    let mut worst_size = 0.0f64;
    let mut dims_ok = true;
    for seed in 0..20 {
        let big = rotate_into(&or2_rank_two(), 50, seed);
        let out = exact_compress(&big).unwrap();
        dims_ok &= out.dim() == 2;
        worst_dev = worst_dev.max(verify_deciding(&out, 1e-9).max_deviation);
        worst_size = worst_size.max((size_and_max_rank(&out).0 - size_and_max_rank(&big).0).abs());
    }
    outcome(
        dims_ok && worst_dev <= 1e-9 && worst_size <= 1e-9,
        format!("20 rotations into dimension 50: output dimension 2: {dims_ok}, max deviation {worst_dev:.1e}, max size change {worst_size:.1e}"),
    )
}

fn criterion_7() -> Outcome {
    let mut violations = Vec::new();
    let mut runs = 0;
    for (name, vs) in [("identity", identity_exact()), ("OR_2", or2_exact())] {
        let w = build_witnesses(&vs, 100.0).unwrap();
        let kappa = certify(&w).unwrap().kappa;
        for seed in 0..20 {
            runs += 1;
            let cw = jl_compress(&w, kappa, seed).unwrap();
            let report = check_jl_lemmas(&cw);
            let params = SimParams { theta: cw.params.theta, delta: cw.params.delta, c: cw.params.c };
            let sim = simulate_function(&WitnessSource::Jl(&cw), params).unwrap();
            if !(cw.projection.verified && report.all_hold && sim.success) {
                violations.push(format!("{name} seed {seed}"));
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!("{runs} JL runs: projection verified, four lemma bounds, simulation success; violations: {}", if violations.is_empty() { "none".into() } else { violations.join(", ") }),
    )
}

fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<C> {
    DMatrix::from_fn(d, d, |_, _| C::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal)))
        .qr()
        .q()
}

fn random_unit(d: usize, rng: &mut ChaCha8Rng) -> DVector<C> {
    DVector::from_fn(d, |_, _| C::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal)))
        .normalize()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let trials = 200;
    let mut preserve = 0;
    let mut gap = 0;
    let mut svd = 0;
    let mut ortho = 0;
    for _ in 0..trials {
        let d = rng.random_range(2..8);
        let h = random_unitary(d, &mut rng);
        let scale = rng.random_range(0.0..1.0f64).powi(3) * std::f64::consts::PI;
        let diag = DMatrix::from_diagonal(&DVector::from_fn(d, |_, _| C::from_polar(1.0, rng.random_range(-scale..=scale))));
        let u = &h * diag * h.adjoint();
        let v = random_unit(d, &mut rng);
        preserve += !check_preserve_lemma(&u, &v, rng.random_range(0.01..=1.0)).unwrap().holds as usize;
    }
    for _ in 0..trials {
        let d = rng.random_range(2..8);
        let k = rng.random_range(1..d);
        let q = random_unitary(d, &mut rng);
        let pi = q.columns(0, k) * q.columns(0, k).adjoint();
        let r = random_unitary(d, &mut rng);
        let w = random_unit(d, &mut rng) * C::new(rng.random_range(0.1..3.0), 0.0);
        gap += !check_robust_gap_lemma(&pi, &r, &w, rng.random_range(0.01..2.0)).unwrap().holds as usize;
    }
    for t in 0..trials {
        let n = rng.random_range(2..5);
        let size = rng.random_range(3..(1usize << n).min(10) + 1);
        let f = BooleanFunction::random(n, size, t as u64).unwrap();
        let vs = random_set(&f, rng.random_range(1..4), t as u64);
        let w = build_witnesses(&vs, 100.0).unwrap();
        let kappa = certify_with_epsilon(&w, 0.0).kappa;
        let k = rng.random_range(1..=kappa);
        svd += !check_svd_lemmas(&w, k).unwrap().holds as usize;
    }
    for _ in 0..trials {
        let r = rng.random_range(1..7);
        let eps = rng.random_range(0.001..0.24) / r as f64;
        let d = r + rng.random_range(0..4);
        let eta = 0.3 * eps / (d as f64);
        let zeta: Vec<DVector<f64>> = (0..r)
            .map(|k| DVector::from_fn(d, |row, _| (row == k) as u8 as f64 + rng.random_range(-eta..eta)))
            .collect();
        let ok = match near_ortho_basis(&zeta, eps) {
            Ok(nb) => (&nb.coefficients - DMatrix::<f64>::identity(r, r)).amax() <= 3.0 * eps,
            Err(_) => false,
        };
        ortho += !ok as usize;
    }
    outcome(
        preserve + gap + svd + ortho == 0,
        format!("{trials} trials each, violations: preserve {preserve}, robust gap {gap}, svd {svd}, near-ortho {ortho}"),
    )
}

fn criterion_9(runs: &[InstanceRun]) -> Outcome {
    let all: Vec<_> = runs.iter().flat_map(|r| &r.checkpoints).collect();
    let bad = all.iter().filter(|c| !c.rank_sandwich_holds()).count();
    outcome(bad == 0, format!("kappa' <= kappa <= 2n kappa' on {}/{} extracted sets", all.len() - bad, all.len()))
}

fn criterion_10() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..6);
        let size = rng.random_range(2..=(1usize << n).min(12));
        let f = BooleanFunction::random(n, size, seed).unwrap();
        let vs = random_set(&f, rng.random_range(1..5), seed);
        let w = build_witnesses(&vs, 100.0).unwrap();
        for (a, &x) in w.ones.iter().enumerate() {
            for (b, &y) in w.zeros.iter().enumerate() {
                let lhs = w.psi[a].dot(&w.phi[b]) * (w.nu[a] * w.mu[b]).sqrt();
                worst = worst.max((lhs - (1.0 - vs.pair_sum(x, y))).abs());
            }
        }
    }
    outcome(worst <= 1e-10, format!("100 random sets, max |<psi|phi> sqrt(nu mu) - (1 - sum)| = {worst:.1e} (<= 1e-10)"))
}

fn main() -> ExitCode {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut report = |id: usize, name: &'static str, o: Outcome| {
        println!("criterion {id:>2} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };
    report(1, "SDP optimum, identity", criterion_1());
    report(2, "SDP optimum, OR_2", criterion_2());

    let cfg = ExperimentConfig { iters: vec![300, 3000], ..ExperimentConfig::default() };
    let start = Instant::now();
    let runs = run_all(&cfg).expect("corpus runs");
    let secs = start.elapsed().as_secs_f64();
    report(3, "error decreases with iterations", criterion_3(&runs, secs));
    report(4, "error below certificate threshold", criterion_4(&runs));
    report(5, "certificate soundness", criterion_5(&runs));
    report(6, "exact compression", criterion_6());
    report(7, "JL compression suite", criterion_7());
    report(8, "lemma property suites", criterion_8());
    report(9, "rank sandwich", criterion_9(&runs));
    report(10, "witness inner-product identity", criterion_10());

    let failed = results.iter().filter(|r| !r.2.pass).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
