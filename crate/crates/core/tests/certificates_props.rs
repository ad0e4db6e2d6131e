use hankelkit_core::certificates::{
    binary_psd_oracle, build_sextic_decomposition, build_truncated_bound_decomposition, refute_psd,
    truncated_bound_tensor, verify_decomposition, RefuteOptions,
};
use hankelkit_core::classes::constants::sextic_threshold;
use hankelkit_core::classes::{build_truncated, truncated_sos_bound, TruncatedSpec};
use hankelkit_core::{HankelTensor, SparseForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spot_check(t: &HankelTensor, rng: &mut ChaCha8Rng, count: usize) {
    let scale = t.generating_vector().scale();
    for _ in 0..count {
        let x: Vec<f64> = (0..t.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v = t.eval(&x).unwrap();
        assert!(v >= -1e-9 * scale, "f({x:?}) = {v}");
    }
}

#[test]
fn sextic_sweep_verifies_and_is_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..100 {
        let v6 = rng.random_range(0.0..3.0);
        let ratio = 10f64.powf(rng.random_range(-2.0..2.0));
        let root = sextic_threshold() * v6 * (1.0 + rng.random_range(0.0..1.0)) + rng.random_range(0.0..1.0);
        let (v0, v12) = (root * ratio.sqrt(), root / ratio.sqrt());
        let d = build_sextic_decomposition(v0, v6, v12).unwrap();
        let t = build_truncated(&TruncatedSpec::new(6, 3, v0, v6, v12)).unwrap();
        let check = verify_decomposition(&t, &d).unwrap();
        assert!(check.passed, "({v0}, {v6}, {v12}): {check:?}");
        spot_check(&t, &mut rng, 100);
    }
}

#[test]
fn constructive_bound_sweep_verifies() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for case in 0..50 {
        let m = [6, 8, 10][case % 3];
        let b = truncated_sos_bound(m).unwrap();
        let vmid = rng.random_range(0.0..2.0);
        let v0 = b.bound * vmid * (1.0 + rng.random_range(0.0..0.5));
        let d = build_truncated_bound_decomposition(m, v0, vmid).unwrap();
        let t = truncated_bound_tensor(m, v0, vmid).unwrap();
        let check = verify_decomposition(&t, &d).unwrap();
        assert!(check.passed, "m = {m}, v0 = {v0}, vmid = {vmid}: {check:?}");
        spot_check(&t, &mut rng, 100);
    }
}

/// Minimum of `Σ_i c_i x1^i x2^(d-i)` over `samples` unit directions.
fn sampled_min(coeffs: &[f64], samples: usize) -> f64 {
    let d = coeffs.len() - 1;
    (0..samples)
        .map(|k| {
            let th = std::f64::consts::PI * k as f64 / samples as f64;
            let (c, s) = (th.cos(), th.sin());
            // Horner in x1 with x2 powers accumulated from the top.
            let mut acc = 0.0;
            let mut sp = 1.0;
            for i in (0..=d).rev() {
                acc = acc * c + coeffs[i] * sp;
                sp *= s;
            }
            acc
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn binary_oracle_agrees_with_dense_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    let mut disagreements = 0;
    for case in 0..500 {
        let d = 2 * rng.random_range(1..=5);
        let mut coeffs: Vec<f64> = (0..=d).map(|_| rng.random_range(-1.0..1.0)).collect();
        if case % 2 == 0 {
            // Push about half of the forms toward PSD.
            coeffs[0] = coeffs[0].abs() + 1.0;
            coeffs[d] = coeffs[d].abs() + 1.0;
        }
        let form = SparseForm::from_terms(2, d as u32, coeffs.iter().enumerate().map(|(i, &c)| (vec![i as u32, (d - i) as u32], c)))
            .unwrap();
        let verdict = binary_psd_oracle(&form).unwrap();
        let sampled = sampled_min(&coeffs, 100_000);
        assert!(verdict.min_value <= sampled + 1e-12, "case {case}");
        if verdict.is_psd != (sampled >= -1e-10) {
            disagreements += 1;
            assert!(sampled.abs() <= 1e-6, "case {case}: oracle {}, sampled {sampled}", verdict.min_value);
        }
    }
    assert!(disagreements <= 5);
}

#[test]
fn refutation_is_deterministic_and_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for _ in 0..5 {
        let v: Vec<f64> = (0..=8).map(|_| rng.random_range(-1.0..1.0)).collect();
        let t = HankelTensor::from_values(4, 3, v).unwrap();
        let opts = RefuteOptions { seed: rng.random(), starts: 8, iterations: 100 };
        let a = refute_psd(&t, &opts).unwrap();
        let b = refute_psd(&t, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(t.eval(&a.point).unwrap(), a.value);
        if a.found {
            assert!(a.value < 0.0);
        }
    }
}

#[test]
fn refutation_finds_below_threshold_sextic() {
    let c = sextic_threshold() * 0.99;
    let t = build_truncated(&TruncatedSpec::new(6, 3, c, 1.0, c)).unwrap();
    let r = refute_psd(&t, &RefuteOptions::default()).unwrap();
    assert!(r.found);
}
