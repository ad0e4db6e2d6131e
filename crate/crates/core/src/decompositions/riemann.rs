//! Rank-one approximation of a moment tensor by a Riemann sum: with
//! `τ_j = j/k - l`, the form `Σ_j ⟨u_j, x⟩^m` with
//! `u_j = (h(τ_j)/k)^(1/m) (1, τ_j, …, τ_j^(n-1))` tends to
//! `∫ h(t) (Σ_i x_i t^(i-1))^m dt` as `k` and `l` grow.

use serde::{Deserialize, Serialize};

use super::moments::GeneratingFunction;
use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankOneApprox {
    pub k: usize,
    pub l: f64,
    pub m: usize,
    pub vectors: Vec<Vec<f64>>,
}

impl RankOneApprox {
    /// `Σ_j ⟨u_j, x⟩^m`, summed in index order.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if let Some(u) = self.vectors.first() {
            if u.len() != x.len() {
                return domain(format!("point has {} coordinates, vectors have {}", x.len(), u.len()));
            }
        }
        Ok(self
            .vectors
            .iter()
            .map(|u| u.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().powi(self.m as i32))
            .sum())
    }
}

/// Builds `u_j` for `j = 0..=floor(2kl)`.
pub fn riemann_rank_one(h: &GeneratingFunction, m: usize, n: usize, k: usize, l: f64) -> Result<RankOneApprox> {
    if k == 0 || !(l > 0.0) || !l.is_finite() {
        return domain(format!("need k >= 1 and l > 0, got k = {k}, l = {l}"));
    }
    if m == 0 || n == 0 {
        return domain("order and dimension must be positive");
    }
    let kf = k as f64;
    let count = (2.0 * kf * l).floor() as usize;
    let vectors = (0..=count)
        .map(|j| {
            let tau = j as f64 / kf - l;
            let hv = h.eval(tau);
            let c = (hv.max(0.0) / kf).powf(1.0 / m as f64);
            let mut u = Vec::with_capacity(n);
            let mut p = c;
            for _ in 0..n {
                u.push(p);
                p *= tau;
            }
            u
        })
        .collect();
    Ok(RankOneApprox { k, l, m, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompositions::{moments_from_function, MomentSpec};
    use crate::symtensor::HankelTensor;

    fn error_at(k: usize, x: &[f64]) -> f64 {
        let h = GeneratingFunction::Uniform01;
        let exact = HankelTensor::new(moments_from_function(&MomentSpec::builtin(h.clone()).unwrap(), 4, 2).unwrap())
            .eval(x)
            .unwrap();
        let approx = riemann_rank_one(&h, 4, 2, k, 1.0).unwrap().eval(x).unwrap();
        (approx - exact).abs()
    }

    #[test]
    fn uniform_quartic_converges_first_order() {
        let x = [1.0, 1.0];
        let errs: Vec<f64> = [256, 512, 1024, 2048].iter().map(|&k| error_at(k, &x)).collect();
        assert!(errs[3] <= 5e-3, "{errs:?}");
        for w in errs.windows(2) {
            assert!(w[1] < w[0]);
            let ratio = w[1] / w[0];
            assert!((0.3..=0.7).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn zero_function_gives_zero_vectors() {
        let h = GeneratingFunction::Step { a: 0.0, b: 1.0, height: 0.0 };
        let r = riemann_rank_one(&h, 4, 3, 16, 1.0).unwrap();
        assert!(r.vectors.iter().flatten().all(|&c| c == 0.0));
        assert_eq!(r.eval(&[0.3, -1.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_resolution() {
        assert!(riemann_rank_one(&GeneratingFunction::Uniform01, 4, 2, 0, 1.0).is_err());
        assert!(riemann_rank_one(&GeneratingFunction::Uniform01, 4, 2, 8, 0.0).is_err());
    }

    #[test]
    fn vector_count_and_shape() {
        let r = riemann_rank_one(&GeneratingFunction::Uniform01, 3, 2, 4, 1.5).unwrap();
        assert_eq!(r.vectors.len(), 13);
        // τ_8 = 0.5 sits inside [0, 1]: u_8 = (1/4)^(1/3) (1, 0.5).
        let c = 0.25f64.cbrt();
        assert!((r.vectors[8][0] - c).abs() < 1e-15 && (r.vectors[8][1] - 0.5 * c).abs() < 1e-15);
    }
}
