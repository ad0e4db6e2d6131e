//! The Hankel matrix associated with a generating vector, matrix PSD tests and
//! strong-Hankel classification.
//!
//! For `N = (n - 1) m` the associated matrix is `s × s` with `s = ⌈(N + 2) / 2⌉`
//! and `a_ij = v_{i+j-2}`. When `N` is odd the bottom-right corner needs
//! `v_{N+1}`, which the tensor does not determine; it is a free parameter.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::symtensor::{GeneratingVector, HankelTensor};

/// Relative PSD tolerance: `λ_min >= -PSD_TOL · max(1, ‖A‖_∞)`.
pub const PSD_TOL: f64 = 1e-9;
/// Symmetry tolerance for `is_psd_matrix` inputs.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Relative eigenvalue cutoff used for pseudo-inverses.
pub const PINV_RCOND: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct AssociatedHankelMatrix {
    matrix: DMatrix<f64>,
    free_corner: Option<f64>,
}

impl AssociatedHankelMatrix {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn free_corner(&self) -> Option<f64> {
        self.free_corner
    }

    /// `g(y) = yᵀ A y`.
    pub fn quadratic_form(&self, y: &[f64]) -> Result<f64> {
        quadratic_form(&self.matrix, y)
    }
}

pub fn matrix_size(gen: &GeneratingVector) -> usize {
    (gen.top_index() + 2).div_ceil(2)
}

/// Builds the associated Hankel matrix. `free_corner` must be supplied exactly
/// when `(n - 1) m` is odd.
pub fn build_matrix(gen: &GeneratingVector, free_corner: Option<f64>) -> Result<AssociatedHankelMatrix> {
    let top = gen.top_index();
    let odd = top % 2 == 1;
    match (odd, free_corner) {
        (false, Some(_)) => {
            return domain(format!("(n-1)m = {top} is even; the associated matrix has no free corner"))
        }
        (true, None) => return domain(format!("(n-1)m = {top} is odd; a free corner value is required")),
        _ => {}
    }
    if let Some(c) = free_corner {
        if !c.is_finite() {
            return domain("free corner must be finite");
        }
    }
    let s = matrix_size(gen);
    let v = gen.values();
    let matrix = DMatrix::from_fn(s, s, |i, j| {
        let k = i + j;
        if k <= top {
            v[k]
        } else {
            free_corner.expect("corner checked above")
        }
    });
    Ok(AssociatedHankelMatrix { matrix, free_corner })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdMatrixVerdict {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    /// Vector with negative quadratic form value, present iff `!is_psd`.
    pub witness: Option<Vec<f64>>,
    pub witness_value: Option<f64>,
}

pub fn is_psd_matrix(a: &DMatrix<f64>) -> Result<PsdMatrixVerdict> {
    is_psd_matrix_with_tol(a, PSD_TOL)
}

pub fn is_psd_matrix_with_tol(a: &DMatrix<f64>, tol: f64) -> Result<PsdMatrixVerdict> {
    if !a.is_square() {
        return domain(format!("matrix is {}x{}, not square", a.nrows(), a.ncols()));
    }
    let scale = inf_norm(a).max(1.0);
    let asym = (a - a.transpose()).abs().max();
    if asym > SYMMETRY_TOL * scale {
        return domain(format!("matrix is not symmetric (max asymmetry {asym:e})"));
    }
    if a.nrows() == 0 {
        return Ok(PsdMatrixVerdict { is_psd: true, min_eigenvalue: 0.0, witness: None, witness_value: None });
    }
    let sym = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let (imin, &lmin) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty spectrum");
    if lmin >= -tol * scale {
        return Ok(PsdMatrixVerdict { is_psd: true, min_eigenvalue: lmin, witness: None, witness_value: None });
    }
    let y: Vec<f64> = eig.eigenvectors.column(imin).iter().copied().collect();
    let value = quadratic_form(a, &y)?;
    Ok(PsdMatrixVerdict { is_psd: false, min_eigenvalue: lmin, witness: Some(y), witness_value: Some(value) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongHankelVerdict {
    pub strong: bool,
    /// Verdict on the matrix actually tested (with the chosen corner, if any).
    pub matrix: PsdMatrixVerdict,
    /// Corner value used when `(n - 1) m` is odd.
    pub free_corner: Option<f64>,
}

/// Decides whether some associated Hankel matrix is PSD.
///
/// Odd `(n - 1) m`: with `B` the leading `(s-1)` block and `c` the off-corner
/// part of the last column, a PSD completion exists iff `B ⪰ 0` and `c ∈ range(B)`;
/// the corner is then chosen as `cᵀ B⁺ c + 1`.
pub fn is_strong_hankel(t: &HankelTensor) -> StrongHankelVerdict {
    let gen = t.generating_vector();
    if gen.top_index() % 2 == 0 {
        let a = build_matrix(gen, None).expect("even case needs no corner");
        let matrix = is_psd_matrix(a.matrix()).expect("Hankel matrices are symmetric");
        return StrongHankelVerdict { strong: matrix.is_psd, matrix, free_corner: None };
    }

    let s = matrix_size(gen);
    let probe = build_matrix(gen, Some(0.0)).expect("odd case with corner");
    let full = probe.matrix();
    let b = full.view((0, 0), (s - 1, s - 1)).into_owned();
    let c: DVector<f64> = full.view((0, s - 1), (s - 1, 1)).column(0).into_owned();
    let scale = inf_norm(full).max(1.0);

    let b_verdict = is_psd_matrix(&b).expect("leading block is symmetric");
    if !b_verdict.is_psd {
        // Padding with a zero last coordinate keeps the witness valid for every corner.
        let mut y = b_verdict.witness.clone().expect("non-PSD verdict carries a witness");
        y.push(0.0);
        let corner = c.dot(&c) + 1.0;
        let witness_value = Some(b_verdict.witness_value.expect("witness value"));
        return StrongHankelVerdict {
            strong: false,
            matrix: PsdMatrixVerdict {
                is_psd: false,
                min_eigenvalue: b_verdict.min_eigenvalue,
                witness: Some(y),
                witness_value,
            },
            free_corner: Some(corner),
        };
    }

    let pinv = pseudo_inverse(&b);
    let bc = &pinv * &c;
    let residual = &c - &b * &bc;
    let in_range = residual.norm() <= 1e-8 * scale * (1.0 + c.norm());
    let corner = c.dot(&bc) + 1.0;
    let a = build_matrix(gen, Some(corner)).expect("odd case with corner");

    if in_range {
        let mut matrix = is_psd_matrix(a.matrix()).expect("symmetric");
        // The completion is PSD in exact arithmetic; keep the verdict consistent
        // with the range test even if rounding nudges λ_min past the band.
        if !matrix.is_psd {
            matrix.is_psd = true;
            matrix.witness = None;
            matrix.witness_value = None;
        }
        return StrongHankelVerdict { strong: true, matrix, free_corner: Some(corner) };
    }

    // c has a component r in null(B): y = (α r, -1) gives α² rᵀBr - 2α‖r‖² + θ < 0.
    let r2 = residual.dot(&residual);
    let alpha = corner / r2;
    let mut y: Vec<f64> = residual.iter().map(|ri| alpha * ri).collect();
    y.push(-1.0);
    let value = quadratic_form(a.matrix(), &y).expect("dimensions match");
    let min_eigenvalue = SymmetricEigen::new(a.matrix().clone()).eigenvalues.min();
    StrongHankelVerdict {
        strong: false,
        matrix: PsdMatrixVerdict { is_psd: false, min_eigenvalue, witness: Some(y), witness_value: Some(value) },
        free_corner: Some(corner),
    }
}

fn pseudo_inverse(b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = b.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let eig = SymmetricEigen::new((b + b.transpose()) * 0.5);
    let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    let cutoff = PINV_RCOND * lmax;
    let mut out = DMatrix::zeros(n, n);
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l.abs() > cutoff && l != 0.0 {
            let q = eig.eigenvectors.column(k);
            out += (q * q.transpose()) / l;
        }
    }
    out
}

pub fn quadratic_form(a: &DMatrix<f64>, y: &[f64]) -> Result<f64> {
    if y.len() != a.nrows() {
        return domain(format!("vector has length {}, matrix has size {}", y.len(), a.nrows()));
    }
    let y = DVector::from_column_slice(y);
    Ok(y.dot(&(a * &y)))
}

pub(crate) fn inf_norm(a: &DMatrix<f64>) -> f64 {
    a.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}
