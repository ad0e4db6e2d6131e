//! Upper bound on the ratio `v0 / v_m` above which an even-order, three-dimensional
//! truncated tensor with `v0 = v_2m` is SOS by an explicit construction.
//!
//! For `p = 1..m/2` let `C_p = C(m, p) C(m - p, m - 2p)`. Each mixed monomial
//! `C_p x2^(m-2p) x1^(2p)` is dominated, by the weighted AGM inequality, by
//! `((m-2p)/m) δ_p x2^m + (2p/m) Δ_p x1^m` whenever
//! `Δ_p^(2p/m) δ_p^((m-2p)/m) = C_p`. If `Σ ((m-2p)/m) δ_p < 1` the leftover
//! `x2^m` weight is positive and `v0 >= Σ (p/m) Δ_p v_m` suffices.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::symtensor::binomial_f64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSosBound {
    pub m: usize,
    /// `delta[p - 1] = δ_p`.
    pub delta: Vec<f64>,
    /// `big_delta[p - 1] = Δ_p`.
    pub big_delta: Vec<f64>,
    /// `Σ_p (p/m) Δ_p`.
    pub bound: f64,
}

impl TruncatedSosBound {
    /// `C(m, p) C(m - p, m - 2p)`.
    pub fn mixed_coefficient(&self, p: usize) -> f64 {
        let m = self.m as u64;
        let p = p as u64;
        binomial_f64(m, p) * binomial_f64(m - p, m - 2 * p)
    }

    /// `Σ_p ((m - 2p)/m) δ_p`, required to be below one.
    pub fn delta_weight(&self) -> f64 {
        let m = self.m as f64;
        self.delta
            .iter()
            .enumerate()
            .map(|(i, d)| (m - 2.0 * (i + 1) as f64) / m * d)
            .sum()
    }

    /// Relative defect of `Δ_p^(2p/m) δ_p^((m-2p)/m) = C_p`.
    pub fn identity_defect(&self, p: usize) -> f64 {
        let m = self.m as f64;
        let pf = p as f64;
        let lhs = self.big_delta[p - 1].powf(2.0 * pf / m) * self.delta[p - 1].powf((m - 2.0 * pf) / m);
        let c = self.mixed_coefficient(p);
        (lhs - c).abs() / c
    }
}

/// Bound data with `δ_p = m / (2 (m - 2p)(k - 1))` for `p < k = m/2` and `δ_k = 1`,
/// which puts the `δ` weight at exactly one half.
pub fn truncated_sos_bound(m: usize) -> Result<TruncatedSosBound> {
    if m < 6 || m % 2 == 1 {
        return domain(format!("the constructive bound needs an even order m >= 6, got {m}"));
    }
    let k = m / 2;
    let mf = m as f64;
    let mut delta = Vec::with_capacity(k);
    let mut big_delta = Vec::with_capacity(k);
    for p in 1..=k {
        let d = if p < k { mf / (2.0 * (mf - 2.0 * p as f64) * (k as f64 - 1.0)) } else { 1.0 };
        let c = binomial_f64(m as u64, p as u64) * binomial_f64((m - p) as u64, (m - 2 * p) as u64);
        let exponent = (mf - 2.0 * p as f64) / mf;
        let big = (c / d.powf(exponent)).powf(mf / (2.0 * p as f64));
        delta.push(d);
        big_delta.push(big);
    }
    let bound = big_delta.iter().enumerate().map(|(i, d)| (i + 1) as f64 / mf * d).sum();
    Ok(TruncatedSosBound { m, delta, big_delta, bound })
}
