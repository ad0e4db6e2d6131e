//! Structured nonnegativity certificates and PSD refutation.
//!
//! A [`StructuredDecomposition`] writes a form as a nonnegative combination of
//! squares plus residual pieces whose nonnegativity is certified separately:
//! diagonal-minus-tail pieces by a weighted AGM inequality, binary pieces by
//! the exact binary-form oracle, and purely diagonal pieces by the signs of
//! their coefficients. Verification recomputes every certificate from the
//! pieces themselves and compares the sum with the tensor's expansion
//! coefficient by coefficient.

mod binary;
mod builders;
mod refute;
mod sturm;

pub use binary::{binary_psd_oracle, BinaryPsdVerdict, BINARY_PSD_TOL};
pub use builders::{
    build_quasi_decomposition, build_sextic_decomposition, build_strong_hankel_squares,
    build_truncated_bound_decomposition, truncated_bound_tensor,
};
pub use refute::{refute_psd, RefutationResult, RefuteOptions};
pub use sturm::{real_roots_in, UnivariatePoly};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::symtensor::{HankelTensor, SparseForm};

/// Relative tolerance for coefficientwise comparison and certificate slack.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSquare {
    pub weight: f64,
    pub base: SparseForm,
}

/// Weighted AGM check for `Σ_j d_j x_j^m - c x^α`: with `w_j = α_j / m`, the
/// diagonal dominates the mixed term when `Π_j (d_j / w_j)^(w_j) >= |c|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgmCertificate {
    pub geometric_bound: f64,
    pub mixed_coefficient: f64,
    /// `geometric_bound - |mixed_coefficient|`.
    pub slack: f64,
    pub holds: bool,
}

impl AgmCertificate {
    /// Analyzes a diagonal-minus-tail form with a single mixed monomial.
    pub fn for_form(form: &SparseForm, tol: f64) -> Result<Self> {
        let m = form.degree();
        if m == 0 || m % 2 == 1 {
            return domain(format!("diagonal-minus-tail forms need even positive degree, got {m}"));
        }
        let mut diag = vec![0.0; form.n_vars()];
        let mut mixed: Option<(Vec<u32>, f64)> = None;
        for (e, c) in form.terms() {
            match e.iter().position(|&p| p == m) {
                Some(j) => diag[j] = c,
                None => {
                    if mixed.is_some() {
                        return domain("diagonal-minus-tail form has more than one mixed term");
                    }
                    mixed = Some((e.to_vec(), c));
                }
            }
        }
        let scale = form.max_abs_coeff().max(1.0);
        let Some((alpha, c)) = mixed else {
            let worst = diag.iter().fold(f64::INFINITY, |a, &d| a.min(d));
            let worst = if worst.is_finite() { worst } else { 0.0 };
            return Ok(Self {
                geometric_bound: 0.0,
                mixed_coefficient: 0.0,
                slack: worst,
                holds: worst >= -tol * scale,
            });
        };
        // A positive coefficient on an all-even monomial is itself nonnegative.
        let all_even = alpha.iter().all(|&a| a % 2 == 0);
        let mut bound = 1.0;
        let mut diag_ok = true;
        for (j, &d) in diag.iter().enumerate() {
            let w = alpha[j] as f64 / m as f64;
            if d < -tol * scale {
                diag_ok = false;
            }
            if w > 0.0 {
                bound *= (d.max(0.0) / w).powf(w);
            }
        }
        let slack = if all_even && c > 0.0 { bound } else { bound - c.abs() };
        Ok(Self { geometric_bound: bound, mixed_coefficient: c, slack, holds: diag_ok && slack >= -tol * scale })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResidualKind {
    /// Only pure powers `x_j^m` with nonnegative coefficients.
    Diagonal,
    DiagonalMinusTail { certificate: AgmCertificate },
    /// A form in two of the variables, PSD by the binary oracle.
    BinaryPsd { vars: [usize; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualPiece {
    pub label: String,
    pub form: SparseForm,
    pub kind: ResidualKind,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StructuredDecomposition {
    pub squares: Vec<WeightedSquare>,
    pub residuals: Vec<ResidualPiece>,
}

impl StructuredDecomposition {
    /// `Σ w_i g_i² + Σ residuals` as an explicit form.
    pub fn assemble(&self, n_vars: usize, degree: u32) -> Result<SparseForm> {
        let mut total = SparseForm::zero(n_vars, degree);
        for sq in &self.squares {
            total = total.add(&sq.base.square().scale(sq.weight))?;
        }
        for r in &self.residuals {
            total = total.add(&r.form)?;
        }
        Ok(total)
    }

    /// Smallest AGM slack over diagonal-minus-tail pieces, if any.
    pub fn min_agm_slack(&self) -> Option<f64> {
        self.residuals
            .iter()
            .filter_map(|r| match &r.kind {
                ResidualKind::DiagonalMinusTail { certificate } => Some(certificate.slack),
                _ => None,
            })
            .reduce(f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceCheck {
    pub label: String,
    pub holds: bool,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub passed: bool,
    pub max_discrepancy: f64,
    pub pieces: Vec<PieceCheck>,
}

pub fn verify_decomposition(t: &HankelTensor, d: &StructuredDecomposition) -> Result<DecompositionCheck> {
    verify_decomposition_with_tol(t, d, VERIFY_TOL)
}

/// Expands every square, adds the residuals and compares with the tensor's
/// form; re-derives each residual certificate from the residual form itself.
pub fn verify_decomposition_with_tol(
    t: &HankelTensor,
    d: &StructuredDecomposition,
    tol: f64,
) -> Result<DecompositionCheck> {
    let m = t.order();
    if m % 2 == 1 {
        return domain(format!("sum-of-squares certificates need even order, got {m}"));
    }
    let n = t.dim();
    let target = t.expand()?;
    let scale = target.max_abs_coeff().max(1.0);
    let mut pieces = Vec::new();
    let mut passed = true;

    for (i, sq) in d.squares.iter().enumerate() {
        if sq.base.n_vars() != n || 2 * sq.base.degree() as usize != m {
            return domain(format!(
                "square {i} has {} variables and degree {}, expected {n} and {}",
                sq.base.n_vars(),
                sq.base.degree(),
                m / 2
            ));
        }
        let ok = sq.weight >= 0.0;
        passed &= ok;
        pieces.push(PieceCheck { label: format!("square {i}"), holds: ok, slack: sq.weight });
    }

    for r in &d.residuals {
        if r.form.n_vars() != n || r.form.degree() as usize != m {
            return domain(format!("residual '{}' has the wrong shape", r.label));
        }
        let check = match &r.kind {
            ResidualKind::Diagonal => {
                let mut worst = f64::INFINITY;
                let mut diagonal = true;
                for (e, c) in r.form.terms() {
                    if e.iter().any(|&p| p as usize == m) {
                        worst = worst.min(c);
                    } else {
                        diagonal = false;
                    }
                }
                let worst = if worst.is_finite() { worst } else { 0.0 };
                PieceCheck { label: r.label.clone(), holds: diagonal && worst >= -tol * scale, slack: worst }
            }
            ResidualKind::DiagonalMinusTail { .. } => {
                let cert = AgmCertificate::for_form(&r.form, tol)?;
                PieceCheck { label: r.label.clone(), holds: cert.holds, slack: cert.slack }
            }
            ResidualKind::BinaryPsd { vars } => {
                let restricted = r.form.restrict(vars);
                let confined = restricted.len() == r.form.len();
                let verdict = binary_psd_oracle(&restricted)?;
                PieceCheck {
                    label: r.label.clone(),
                    holds: confined && verdict.is_psd,
                    slack: verdict.min_value,
                }
            }
        };
        passed &= check.holds;
        pieces.push(check);
    }

    let assembled = d.assemble(n, m as u32)?;
    let max_discrepancy = assembled.max_discrepancy(&target)?;
    passed &= max_discrepancy <= tol * scale;
    Ok(DecompositionCheck { passed, max_discrepancy, pieces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompositions::noncd_family;

    fn binary(terms: &[((u32, u32), f64)]) -> SparseForm {
        let deg = terms[0].0 .0 + terms[0].0 .1;
        SparseForm::from_terms(2, deg, terms.iter().map(|&((a, b), c)| (vec![a, b], c))).unwrap()
    }

    #[test]
    fn noncd_k3_squares_verify_exactly() {
        let fam = noncd_family(3).unwrap();
        let d = StructuredDecomposition {
            squares: vec![
                WeightedSquare { weight: 1.0, base: binary(&[((3, 0), 1.0), ((1, 2), -1.0)]) },
                WeightedSquare { weight: 1.0, base: binary(&[((2, 1), 1.0), ((0, 3), -1.0)]) },
            ],
            residuals: vec![],
        };
        let check = verify_decomposition(&fam.tensor(), &d).unwrap();
        assert!(check.passed);
        assert!(check.max_discrepancy < 1e-15);
    }

    #[test]
    fn zero_tensor_and_empty_decomposition() {
        let t = HankelTensor::from_values(4, 3, vec![0.0; 9]).unwrap();
        let check = verify_decomposition(&t, &StructuredDecomposition::default()).unwrap();
        assert!(check.passed);
        assert_eq!(check.max_discrepancy, 0.0);
    }

    #[test]
    fn odd_order_is_rejected() {
        let t = HankelTensor::from_values(3, 2, vec![0.0; 4]).unwrap();
        assert!(verify_decomposition(&t, &StructuredDecomposition::default()).is_err());
    }

    #[test]
    fn wrong_decomposition_fails() {
        let t = HankelTensor::from_values(2, 2, vec![1.0, 0.0, 1.0]).unwrap();
        let d = StructuredDecomposition {
            squares: vec![WeightedSquare { weight: 1.0, base: binary(&[((1, 0), 1.0), ((0, 1), 1.0)]) }],
            residuals: vec![],
        };
        let check = verify_decomposition(&t, &d).unwrap();
        assert!(!check.passed);
        assert_eq!(check.max_discrepancy, 2.0);

        let d = StructuredDecomposition {
            squares: vec![WeightedSquare { weight: -1.0, base: binary(&[((1, 0), 1.0)]) }],
            residuals: vec![],
        };
        assert!(!verify_decomposition(&t, &d).unwrap().passed);
    }

    #[test]
    fn agm_certificate_on_motzkin_like_form() {
        // x^6 + y^6 + z^6 - 3 x²y²z² is PSD with zero AGM slack.
        let f = SparseForm::from_terms(
            3,
            6,
            vec![(vec![6, 0, 0], 1.0), (vec![0, 6, 0], 1.0), (vec![0, 0, 6], 1.0), (vec![2, 2, 2], -3.0)],
        )
        .unwrap();
        let c = AgmCertificate::for_form(&f, 1e-12).unwrap();
        assert!(c.holds);
        assert!(c.slack.abs() < 1e-12);

        let g = f.add(&SparseForm::from_terms(3, 6, vec![(vec![2, 2, 2], -0.01)]).unwrap()).unwrap();
        assert!(!AgmCertificate::for_form(&g, 1e-12).unwrap().holds);
    }

    #[test]
    fn agm_rejects_two_mixed_terms() {
        let f = binary(&[((4, 0), 1.0), ((3, 1), 1.0), ((2, 2), -1.0)]);
        assert!(AgmCertificate::for_form(&f, 1e-12).is_err());
    }
}
