//! Seeded multi-start search for a point where the form is negative.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::classes::structured_probes;
use crate::error::{domain, Result};
use crate::symtensor::HankelTensor;

/// A point counts as a refutation only below `-NEGATIVE_TOL * scale`.
const NEGATIVE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefuteOptions {
    pub seed: u64,
    pub starts: usize,
    pub iterations: usize,
}

impl Default for RefuteOptions {
    fn default() -> Self {
        Self { seed: 42, starts: 64, iterations: 500 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefutationResult {
    pub found: bool,
    /// Best unit-norm point seen.
    pub point: Vec<f64>,
    /// `f(point)`, recomputed with [`HankelTensor::eval`].
    pub value: f64,
    /// Structured probes evaluated plus random starts run.
    pub candidates: usize,
}

fn normalize(x: &mut [f64]) -> bool {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return false;
    }
    for v in x.iter_mut() {
        *v /= norm;
    }
    true
}

/// Projected gradient descent on the unit sphere with Armijo backtracking.
fn descend(t: &HankelTensor, mut x: Vec<f64>, iterations: usize) -> (Vec<f64>, f64) {
    let (mut fx, mut g) = t.value_and_gradient(&x).expect("dimension fixed by caller");
    let mut step = 1.0;
    for _ in 0..iterations {
        // Tangential component of the gradient.
        let radial: f64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
        let tangent: Vec<f64> = g.iter().zip(&x).map(|(a, b)| a - radial * b).collect();
        let tnorm2: f64 = tangent.iter().map(|v| v * v).sum();
        if tnorm2.sqrt() <= 1e-14 * (1.0 + fx.abs()) {
            break;
        }
        let mut accepted = false;
        step *= 2.0;
        for _ in 0..60 {
            let mut y: Vec<f64> = x.iter().zip(&tangent).map(|(a, b)| a - step * b).collect();
            if !normalize(&mut y) {
                step *= 0.5;
                continue;
            }
            let (fy, _) = t.value_and_gradient(&y).expect("dimension fixed by caller");
            if fy <= fx - 1e-4 * step * tnorm2 {
                x = y;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        (fx, g) = t.value_and_gradient(&x).expect("dimension fixed by caller");
    }
    (x, fx)
}

/// Looks for `x` with `f(x) < 0`. Structured probes are tried first, then
/// `starts` random points each polished by descent; start `i` draws from its
/// own ChaCha stream so results do not depend on scheduling. A failed search
/// is not evidence of PSD.
pub fn refute_psd(t: &HankelTensor, opts: &RefuteOptions) -> Result<RefutationResult> {
    if t.order() % 2 == 1 {
        return domain(format!("PSD refutation needs even order, got {}", t.order()));
    }
    let n = t.dim();
    let scale = t.generating_vector().scale().max(f64::MIN_POSITIVE);

    let mut candidates: Vec<(f64, Vec<f64>)> = Vec::new();
    for mut p in structured_probes(t) {
        if normalize(&mut p) {
            let (x, _) = descend(t, p, opts.iterations);
            let v = t.eval(&x)?;
            candidates.push((v, x));
        }
    }
    for start in 0..opts.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(start as u64);
        let mut x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        if !normalize(&mut x) {
            x = vec![0.0; n];
            x[0] = 1.0;
        }
        let (x, _) = descend(t, x, opts.iterations);
        let v = t.eval(&x)?;
        candidates.push((v, x));
    }

    let total = candidates.len();
    // Ties resolve to the earliest candidate.
    let (value, point) = candidates
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.0.total_cmp(&b.0).then(i.cmp(j)))
        .map(|(_, c)| c)
        .unwrap_or_else(|| {
            let mut e = vec![0.0; n];
            e[0] = 1.0;
            (t.eval(&e).unwrap_or(0.0), e)
        });
    Ok(RefutationResult { found: value < -NEGATIVE_TOL * scale, point, value, candidates: total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_negative_point_of_indefinite_quadratic() {
        // x1² + 4 x1 x2 + x2² has value -1 at (1, -1)/√2.
        let t = HankelTensor::from_values(2, 2, vec![1.0, 2.0, 1.0]).unwrap();
        let r = refute_psd(&t, &RefuteOptions::default()).unwrap();
        assert!(r.found);
        assert!((r.value + 1.0).abs() < 1e-9);
        assert_eq!(t.eval(&r.point).unwrap(), r.value);
    }

    #[test]
    fn never_claims_for_psd_tensor() {
        let t = HankelTensor::from_values(4, 2, vec![1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let r = refute_psd(&t, &RefuteOptions::default()).unwrap();
        assert!(!r.found);
        assert!(r.value > 0.0);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let t = HankelTensor::from_values(4, 3, vec![1.0, -0.3, 0.2, 0.5, -1.0, 0.1, 0.7, 0.0, 0.4]).unwrap();
        let opts = RefuteOptions { seed: 7, starts: 16, iterations: 200 };
        let a = refute_psd(&t, &opts).unwrap();
        let b = refute_psd(&t, &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn odd_order_is_rejected() {
        let t = HankelTensor::from_values(3, 2, vec![1.0; 4]).unwrap();
        assert!(refute_psd(&t, &RefuteOptions::default()).is_err());
    }
}
