//! Fixtures shared by the criterion benchmarks in `benches/`.

use hankelkit_core::{GeneratingVector, HankelTensor, SparseForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `v_k = 1 / (k + 1)`.
pub fn hilbert(m: usize, n: usize) -> HankelTensor {
    let v = (0..=(n - 1) * m).map(|k| 1.0 / (k as f64 + 1.0)).collect();
    HankelTensor::from_values(m, n, v).expect("valid shape")
}

pub fn random_tensor(seed: u64, m: usize, n: usize) -> HankelTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = (0..=(n - 1) * m).map(|_| rng.random_range(-1.0..1.0)).collect();
    HankelTensor::from_values(m, n, v).expect("valid shape")
}

pub fn random_point(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Dense binary form of the given even degree with random coefficients.
pub fn random_binary_form(seed: u64, degree: u32) -> SparseForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(Vec<u32>, f64)> =
        (0..=degree).map(|i| (vec![i, degree - i], rng.random_range(-1.0..1.0))).collect();
    SparseForm::from_terms(2, degree, terms).expect("valid binary form")
}

pub fn generating_vector(t: &HankelTensor) -> GeneratingVector {
    t.generating_vector().clone()
}
