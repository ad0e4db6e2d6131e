//! PSD decision for binary forms via critical points of both dehomogenizations.

use serde::{Deserialize, Serialize};

use super::sturm::{real_roots_in, UnivariatePoly};
use crate::error::{domain, Result};
use crate::symtensor::SparseForm;

/// Relative tolerance on the minimum over the unit circle.
pub const BINARY_PSD_TOL: f64 = 1e-12;

const ROOT_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryPsdVerdict {
    pub is_psd: bool,
    /// Minimum of `f` over the unit circle.
    pub min_value: f64,
    /// Unit vector attaining `min_value`.
    pub argmin: [f64; 2],
}

/// Numerator of the derivative of `q(s) / (1 + s²)^(d/2)`:
/// `(1 + s²) q'(s) - d s q(s)`.
fn circle_critical(q: &UnivariatePoly, d: usize) -> UnivariatePoly {
    let dq = q.derivative();
    let mut c = vec![0.0; d + 2];
    for (i, &a) in dq.coeffs.iter().enumerate() {
        c[i] += a;
        c[i + 2] += a;
    }
    for (i, &a) in q.coeffs.iter().enumerate() {
        c[i + 1] -= d as f64 * a;
    }
    UnivariatePoly::new(c)
}

/// Decides whether a binary form is PSD. Every direction has `|x1| <= |x2|` or
/// `|x2| <= |x1|`, so it suffices to minimize `f(s, 1)` and `f(1, s)` over
/// `s ∈ [-1, 1]` after normalizing to the unit circle. Candidates are the
/// real critical points, found by Sturm isolation, and the endpoints.
pub fn binary_psd_oracle(f: &SparseForm) -> Result<BinaryPsdVerdict> {
    if f.n_vars() != 2 {
        return domain(format!("binary oracle needs two variables, got {}", f.n_vars()));
    }
    let d = f.degree() as usize;
    if d % 2 == 1 {
        if f.is_empty() {
            return Ok(BinaryPsdVerdict { is_psd: true, min_value: 0.0, argmin: [1.0, 0.0] });
        }
        return domain(format!(
            "a nonzero binary form of odd degree {d} is never PSD (f(-x) = -f(x))"
        ));
    }
    let scale = f.max_abs_coeff();
    if scale == 0.0 {
        return Ok(BinaryPsdVerdict { is_psd: true, min_value: 0.0, argmin: [1.0, 0.0] });
    }

    // first[i] multiplies x1^i x2^(d-i): f(s, 1). second is f(1, s).
    let mut first = vec![0.0; d + 1];
    for (e, c) in f.terms() {
        first[e[0] as usize] = c;
    }
    let second: Vec<f64> = first.iter().rev().copied().collect();

    let mut best = (f64::INFINITY, [1.0, 0.0]);
    for (coeffs, swap) in [(first, false), (second, true)] {
        let p = UnivariatePoly::new(coeffs);
        let mut candidates = real_roots_in(&circle_critical(&p, d), -1.0, 1.0, ROOT_WIDTH);
        candidates.extend([-1.0, 1.0, 0.0]);
        for s in candidates {
            let norm = (1.0 + s * s).sqrt();
            let value = p.eval(s) / norm.powi(d as i32);
            if value < best.0 {
                let (a, b) = (s / norm, 1.0 / norm);
                best = (value, if swap { [b, a] } else { [a, b] });
            }
        }
    }
    Ok(BinaryPsdVerdict { is_psd: best.0 >= -BINARY_PSD_TOL * scale, min_value: best.0, argmin: best.1 })
}
