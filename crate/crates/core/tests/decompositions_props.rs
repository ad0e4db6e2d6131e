use hankelkit_core::decompositions::{
    moments_from_function, riemann_rank_one, vandermonde_decompose, GeneratingFunction, MomentSpec,
};
use hankelkit_core::hankel_matrix::{build_matrix, is_psd_matrix, is_strong_hankel};
use hankelkit_core::{GeneratingVector, HankelTensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn vandermonde_round_trip_with_default_nodes() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = rng.random_range(1..=4);
        let n = rng.random_range(1..=3);
        let v: Vec<f64> = (0..=(n - 1) * m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let gen = GeneratingVector::new(m, n, v).unwrap();
        let d = vandermonde_decompose(&gen, None).unwrap();
        worst = worst.max(d.max_reconstruction_error(&gen));
    }
    assert!(worst <= 1e-8, "worst reconstruction error {worst}");
}

#[test]
fn odd_order_rank_one_rewriting_reconstructs_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(67);
    for (m, n) in [(3, 2), (3, 3), (1, 3), (5, 2)] {
        let v: Vec<f64> = (0..=(n - 1) * m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let gen = GeneratingVector::new(m, n, v).unwrap();
        let d = vandermonde_decompose(&gen, None).unwrap();
        let t = HankelTensor::new(gen);
        for _ in 0..20 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let want = t.eval(&x).unwrap();
            assert!((d.rank_one_eval(&x).unwrap() - want).abs() <= 1e-8, "m = {m}, n = {n}");
            assert!((d.eval(&x) - want).abs() <= 1e-8);
        }
    }
}

#[test]
fn step_function_moments_are_strong() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for _ in 0..20 {
        let a = rng.random_range(-2.0..1.0);
        let b = a + rng.random_range(0.1..2.0);
        let height = rng.random_range(0.0..3.0);
        let spec = MomentSpec::builtin(GeneratingFunction::Step { a, b, height }).unwrap();
        let m = 2 * rng.random_range(1..=2);
        let gen = moments_from_function(&spec, m, 3).unwrap();
        let mat = build_matrix(&gen, None).unwrap();
        let scale = mat.matrix().abs().row_sum().max();
        let verdict = is_psd_matrix(mat.matrix()).unwrap();
        assert!(verdict.min_eigenvalue >= -1e-10 * scale.max(f64::MIN_POSITIVE));
        assert!(is_strong_hankel(&HankelTensor::new(gen)).strong);
    }
}

#[test]
fn riemann_error_is_nonincreasing_in_resolution() {
    let h = GeneratingFunction::Uniform01;
    let gen = moments_from_function(&MomentSpec::builtin(h.clone()).unwrap(), 4, 2).unwrap();
    let t = HankelTensor::new(gen);
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    let points: Vec<[f64; 2]> = (0..10).map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
    let mut last = f64::INFINITY;
    for k in [256, 512, 1024, 2048] {
        let approx = riemann_rank_one(&h, 4, 2, k, 1.0).unwrap();
        let err = points
            .iter()
            .map(|x| (approx.eval(x).unwrap() - t.eval(x).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(err <= last, "k = {k}: {err} > {last}");
        last = err;
    }
}
