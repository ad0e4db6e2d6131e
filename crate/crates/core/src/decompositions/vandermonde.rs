//! `v_k = Σ_i α_i γ_i^k`: every Hankel tensor is `Σ_i α_i u_i^{⊗m}` with
//! Vandermonde vectors `u_i = (1, γ_i, …, γ_i^(n-1))`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::classes::real_root;
use crate::error::{domain, HankelError, Result};
use crate::symtensor::GeneratingVector;

/// Largest accepted relative residual of the Vandermonde solve.
pub const MAX_RELATIVE_RESIDUAL: f64 = 1e-6;
const DISTINCT_NODE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VandermondeTerm {
    pub alpha: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VandermondeDecomposition {
    pub m: usize,
    pub n: usize,
    pub terms: Vec<VandermondeTerm>,
    /// `max_k |Σ α_i γ_i^k - v_k| / max(1, max |v_k|)` after the solve.
    pub relative_residual: f64,
    /// For odd `m`: vectors `α_i^(1/m) u_i` with `A = Σ w_i^{⊗m}`.
    pub rank_one_vectors: Option<Vec<Vec<f64>>>,
}

impl VandermondeDecomposition {
    /// `v_k = Σ α_i γ_i^k` for `k = 0..=(n-1)m`.
    pub fn reconstruct(&self) -> Vec<f64> {
        let top = (self.n - 1) * self.m;
        (0..=top)
            .map(|k| self.terms.iter().map(|t| t.alpha * t.gamma.powi(k as i32)).sum())
            .collect()
    }

    pub fn max_reconstruction_error(&self, gen: &GeneratingVector) -> f64 {
        self.reconstruct().iter().zip(gen.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn vandermonde_vector(&self, gamma: f64) -> Vec<f64> {
        (0..self.n).map(|i| gamma.powi(i as i32)).collect()
    }

    /// `Σ α_i ⟨u_i, x⟩^m`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.alpha * dot(&self.vandermonde_vector(t.gamma), x).powi(self.m as i32))
            .sum()
    }

    /// `Σ ⟨w_i, x⟩^m` over the odd-order rewriting.
    pub fn rank_one_eval(&self, x: &[f64]) -> Option<f64> {
        let ws = self.rank_one_vectors.as_ref()?;
        Some(ws.iter().map(|w| dot(w, x).powi(self.m as i32)).sum())
    }

    /// All weights nonnegative: for even `m` the tensor is then PSD.
    pub fn is_complete(&self) -> bool {
        self.terms.iter().all(|t| t.alpha >= 0.0)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Chebyshev points of the first kind, scaled by `max(1, max_k |v_k|^(1/k))`.
pub fn default_nodes(gen: &GeneratingVector) -> Vec<f64> {
    let r = gen.top_index() + 1;
    let scale = gen
        .values()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| v.abs().powf(1.0 / k as f64))
        .fold(1.0, f64::max);
    (0..r)
        .map(|i| scale * (std::f64::consts::PI * (2 * i + 1) as f64 / (2 * r) as f64).cos())
        .collect()
}

/// Solves the `r × r` Vandermonde system for the weights, with one step of
/// iterative refinement, and checks the residual.
pub fn vandermonde_decompose(gen: &GeneratingVector, nodes: Option<&[f64]>) -> Result<VandermondeDecomposition> {
    let r = gen.top_index() + 1;
    let nodes = match nodes {
        Some(ns) => ns.to_vec(),
        None => default_nodes(gen),
    };
    if nodes.len() != r {
        return domain(format!("need {r} nodes for (n-1)m + 1 = {r} moments, got {}", nodes.len()));
    }
    if nodes.iter().any(|g| !g.is_finite()) {
        return domain("nodes must be finite");
    }
    let node_scale = nodes.iter().fold(1.0f64, |a, g| a.max(g.abs()));
    for i in 0..r {
        for j in (i + 1)..r {
            if (nodes[i] - nodes[j]).abs() <= DISTINCT_NODE_TOL * node_scale {
                return domain(format!("nodes {i} and {j} coincide ({} vs {})", nodes[i], nodes[j]));
            }
        }
    }
    let vmat = DMatrix::from_fn(r, r, |k, i| nodes[i].powi(k as i32));
    let rhs = DVector::from_column_slice(gen.values());
    let lu = vmat.clone().lu();
    let singular = || HankelError::Conditioning("Vandermonde matrix is numerically singular; try other nodes".into());
    let mut alpha = lu.solve(&rhs).ok_or_else(singular)?;
    let correction = lu.solve(&(&rhs - &vmat * &alpha)).ok_or_else(singular)?;
    alpha += correction;

    let scale = gen.scale().max(1.0);
    let relative_residual = (&vmat * &alpha - &rhs).amax() / scale;
    if !(relative_residual <= MAX_RELATIVE_RESIDUAL) {
        return Err(HankelError::Conditioning(format!(
            "Vandermonde solve left relative residual {relative_residual:e}; try other nodes"
        )));
    }
    let terms: Vec<VandermondeTerm> =
        nodes.iter().zip(alpha.iter()).map(|(&gamma, &alpha)| VandermondeTerm { alpha, gamma }).collect();
    let (m, n) = (gen.order(), gen.dim());
    let rank_one_vectors = (m % 2 == 1).then(|| {
        terms
            .iter()
            .map(|t| {
                let c = real_root(t.alpha, m as i32);
                (0..n).map(|i| c * t.gamma.powi(i as i32)).collect()
            })
            .collect()
    });
    Ok(VandermondeDecomposition { m, n, terms, relative_residual, rank_one_vectors })
}
