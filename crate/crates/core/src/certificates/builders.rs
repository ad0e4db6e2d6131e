//! Explicit decompositions for the truncated and quasi-truncated classes, and
//! eigen-squares for strong Hankel tensors.

use nalgebra::SymmetricEigen;

use super::{AgmCertificate, ResidualKind, ResidualPiece, StructuredDecomposition, WeightedSquare, VERIFY_TOL};
use crate::classes::constants::{middle_diagonal, mixed_coefficient, sextic_threshold, BOUNDARY_BAND};
use crate::classes::{quasi_sos_conditions, truncated_sos_bound, QuasiSextic};
use crate::error::{domain, Result};
use crate::hankel_matrix::{build_matrix, is_strong_hankel};
use crate::symtensor::{for_each_exponent, HankelTensor, MultinomialTable, SparseForm};

fn form(n: usize, degree: u32, terms: &[(&[u32], f64)]) -> SparseForm {
    SparseForm::from_terms(n, degree, terms.iter().map(|(e, c)| (e.to_vec(), *c)))
        .expect("builder terms have consistent shape")
}

fn dmt_piece(label: impl Into<String>, f: SparseForm) -> Result<ResidualPiece> {
    let certificate = AgmCertificate::for_form(&f, VERIFY_TOL)?;
    Ok(ResidualPiece { label: label.into(), form: f, kind: ResidualKind::DiagonalMinusTail { certificate } })
}

/// The pair of squares shared by the truncated and quasi-truncated sextics:
/// `10 v6 ((v0/v12)^(1/4) x1³ + (v12/v0)^(1/4) x3³)²` and
/// `v6 (√((10-√70)/2) x2³ + √(150+15√70) x1x2x3)²`.
fn sextic_squares(v0: f64, v6: f64, v12: f64) -> Vec<WeightedSquare> {
    let r = (v0 / v12).powf(0.25);
    let sqrt70 = 70f64.sqrt();
    vec![
        WeightedSquare { weight: 10.0 * v6, base: form(3, 3, &[(&[3, 0, 0], r), (&[0, 0, 3], 1.0 / r)]) },
        WeightedSquare {
            weight: v6,
            base: form(
                3,
                3,
                &[(&[0, 3, 0], ((10.0 - sqrt70) / 2.0).sqrt()), (&[1, 1, 1], (150.0 + 15.0 * sqrt70).sqrt())],
            ),
        },
    ]
}

/// SOS decomposition of the sixth-order truncated tensor `(v0, v6, v12)` at or
/// above the threshold: two squares and one diagonal-minus-tail residual.
pub fn build_sextic_decomposition(v0: f64, v6: f64, v12: f64) -> Result<StructuredDecomposition> {
    if v0 < 0.0 || v6 < 0.0 || v12 < 0.0 {
        return domain(format!("anchors must be nonnegative (v0 = {v0}, v6 = {v6}, v12 = {v12})"));
    }
    if v6 == 0.0 {
        let diag = form(3, 6, &[(&[6, 0, 0], v0), (&[0, 0, 6], v12)]);
        return Ok(StructuredDecomposition {
            squares: vec![],
            residuals: vec![ResidualPiece { label: "diagonal".into(), form: diag, kind: ResidualKind::Diagonal }],
        });
    }
    let slack = (v0 * v12).sqrt() - sextic_threshold() * v6;
    if v0 == 0.0 || v12 == 0.0 || slack < -BOUNDARY_BAND * v6.max(1.0) {
        return domain(format!(
            "sqrt(v0*v12) = {} is below (560+70*sqrt(70))*v6 = {}",
            (v0 * v12).sqrt(),
            sextic_threshold() * v6
        ));
    }
    let d1 = v0 - 10.0 * v6 * (v0 / v12).sqrt();
    let d2 = middle_diagonal() * v6;
    let d3 = v12 - 10.0 * v6 * (v12 / v0).sqrt();
    let residual = form(
        3,
        6,
        &[(&[6, 0, 0], d1), (&[0, 6, 0], d2), (&[0, 0, 6], d3), (&[2, 2, 2], -mixed_coefficient() * v6)],
    );
    Ok(StructuredDecomposition {
        squares: sextic_squares(v0, v6, v12),
        residuals: vec![dmt_piece("diagonal minus x1²x2²x3²", residual)?],
    })
}

/// Three-dimensional truncated tensor of even order `m` with equal end
/// entries `v0 = v_2m` and middle entry `vmid`.
pub fn truncated_bound_tensor(m: usize, v0: f64, vmid: f64) -> Result<HankelTensor> {
    crate::classes::build_truncated(&crate::classes::TruncatedSpec::new(m, 3, v0, vmid, v0))
}

/// SOS decomposition for `v0 = v_2m >= bound * vmid`. The form is
/// `v0 (x1^m + x3^m) + vmid Σ_p C_p x2^(m-2p) x1^p x3^p`, rewritten as squares
/// `(vmid/2) C_p x2^(m-2p) (x1^p + x3^p)²`, one AGM residual per `p < m/2` and
/// side, and a diagonal remainder.
pub fn build_truncated_bound_decomposition(m: usize, v0: f64, vmid: f64) -> Result<StructuredDecomposition> {
    let b = truncated_sos_bound(m)?;
    if vmid < 0.0 {
        return domain(format!("the middle entry must be nonnegative, got {vmid}"));
    }
    if v0 < b.bound * vmid * (1.0 - 1e-12) {
        return domain(format!("v0 = {v0} is below bound * vmid = {}", b.bound * vmid));
    }
    let k = m / 2;
    let deg = m as u32;
    let mut squares = Vec::new();
    let mut residuals = Vec::new();
    let half = vmid / 2.0;
    let mut diag_x1 = v0;
    if vmid > 0.0 {
        for p in 1..=k {
            let cp = b.mixed_coefficient(p);
            let e2 = (k - p) as u32;
            let pu = p as u32;
            squares.push(WeightedSquare {
                weight: half * cp,
                base: form(3, k as u32, &[(&[pu, e2, 0], 1.0), (&[0, e2, pu], 1.0)]),
            });
            // The square contributes -(vmid/2) C_p x2^(m-2p) (x1^2p + x3^2p).
            if p == k {
                diag_x1 -= half * cp;
                continue;
            }
            let w2 = (m - 2 * p) as f64 / m as f64 * b.delta[p - 1];
            let w1 = 2.0 * p as f64 / m as f64 * b.big_delta[p - 1];
            let rest = (m - 2 * p) as u32;
            let two_p = 2 * pu;
            diag_x1 -= half * w1;
            residuals.push(dmt_piece(
                format!("p = {p}, x1 side"),
                form(3, deg, &[(&[0, deg, 0], half * w2), (&[deg, 0, 0], half * w1), (&[two_p, rest, 0], -half * cp)]),
            )?);
            residuals.push(dmt_piece(
                format!("p = {p}, x3 side"),
                form(3, deg, &[(&[0, deg, 0], half * w2), (&[0, 0, deg], half * w1), (&[0, rest, two_p], -half * cp)]),
            )?);
        }
    }
    // Each side spends half of its x2^m budget on the AGM pieces.
    let x2_left = if vmid > 0.0 { vmid * (1.0 - b.delta_weight()) } else { 0.0 };
    residuals.push(ResidualPiece {
        label: "diagonal remainder".into(),
        form: form(3, deg, &[(&[deg, 0, 0], diag_x1), (&[0, deg, 0], x2_left), (&[0, 0, deg], diag_x1)]),
        kind: ResidualKind::Diagonal,
    });
    Ok(StructuredDecomposition { squares, residuals })
}

/// Five-part decomposition of a sixth-order quasi-truncated tensor at the
/// sufficient-condition parameters `(t1, t2)`: two squares, two binary pieces
/// on the boundary of the binary sextic criterion, and an AGM residual.
pub fn build_quasi_decomposition(q: &QuasiSextic, t1: f64, t2: f64) -> Result<StructuredDecomposition> {
    let QuasiSextic { v0, v1, v6, v11, v12 } = *q;
    if !(v0 > 0.0 && v6 > 0.0 && v12 > 0.0 && t1 > 0.0 && t2 > 0.0) {
        return domain("the five-part decomposition needs v0, v6, v12, t1, t2 > 0");
    }
    let slacks = quasi_sos_conditions(q, t1, t2);
    if let Some(i) = slacks.iter().position(|&c| c < 0.0) {
        return domain(format!("sufficient condition {} fails at t1 = {t1}, t2 = {t2}", i + 1));
    }
    let mut residuals = Vec::new();
    let tail1 = v1.abs() * (5.0 / (t1 * v0)).powi(5);
    let tail11 = v11.abs() * (5.0 / (t2 * v12)).powi(5);
    if v1 != 0.0 {
        let a = v1.abs() * t1 * v0;
        residuals.push(ResidualPiece {
            label: "x1, x2 binary piece".into(),
            form: form(3, 6, &[(&[6, 0, 0], a), (&[5, 1, 0], 6.0 * v1), (&[0, 6, 0], tail1)]),
            kind: ResidualKind::BinaryPsd { vars: [0, 1] },
        });
    }
    if v11 != 0.0 {
        let a = v11.abs() * t2 * v12;
        residuals.push(ResidualPiece {
            label: "x3, x2 binary piece".into(),
            form: form(3, 6, &[(&[0, 0, 6], a), (&[0, 1, 5], 6.0 * v11), (&[0, 6, 0], tail11)]),
            kind: ResidualKind::BinaryPsd { vars: [2, 1] },
        });
    }
    let d1 = v0 - 10.0 * v6 * (v0 / v12).sqrt() - v1.abs() * t1 * v0;
    let d2 = middle_diagonal() * v6 - tail1 - tail11;
    let d3 = v12 - 10.0 * v6 * (v12 / v0).sqrt() - v11.abs() * t2 * v12;
    residuals.push(dmt_piece(
        "diagonal minus x1²x2²x3²",
        form(3, 6, &[(&[6, 0, 0], d1), (&[0, 6, 0], d2), (&[0, 0, 6], d3), (&[2, 2, 2], -mixed_coefficient() * v6)]),
    )?);
    Ok(StructuredDecomposition { squares: sextic_squares(v0, v6, v12), residuals })
}

/// For a strong Hankel tensor of even order, `f(x) = c(x)ᵀ A c(x)` where
/// `c_j(x)` is the coefficient of `t^j` in `(Σ x_i t^(i-1))^(m/2)` and `A` is
/// the PSD associated matrix; its eigen-decomposition gives the squares.
pub fn build_strong_hankel_squares(t: &HankelTensor) -> Result<StructuredDecomposition> {
    let m = t.order();
    if m % 2 == 1 {
        return domain(format!("squares need even order, got {m}"));
    }
    let verdict = is_strong_hankel(t);
    if !verdict.strong {
        return domain("the tensor is not strong Hankel");
    }
    let a = build_matrix(t.generating_vector(), verdict.free_corner)?;
    let n = t.dim();
    let half = (m / 2) as u32;
    let table = MultinomialTable::new(m)?;
    // coefficient_forms[j] = c_j(x).
    let mut coefficient_forms = vec![SparseForm::zero(n, half); a.size()];
    for_each_exponent(n, half, |e| {
        let j: usize = e.iter().enumerate().map(|(i, &p)| i * p as usize).sum();
        let c = table.multinomial_f64(e);
        let mut single = SparseForm::zero(n, half);
        single.add_term(e.to_vec(), c).expect("exponent matches shape");
        coefficient_forms[j] = coefficient_forms[j].add(&single).expect("same shape");
    });
    let eig = SymmetricEigen::new(a.matrix().clone());
    let mut squares = Vec::new();
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        let q = eig.eigenvectors.column(idx);
        let mut base = SparseForm::zero(n, half);
        for (j, cj) in coefficient_forms.iter().enumerate() {
            if q[j] != 0.0 {
                base = base.add(&cj.scale(q[j]))?;
            }
        }
        if !base.is_empty() {
            squares.push(WeightedSquare { weight: lambda, base });
        }
    }
    Ok(StructuredDecomposition { squares, residuals: vec![] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::verify_decomposition;
    use crate::classes::build_truncated;
    use crate::classes::TruncatedSpec;

    fn sextic(v0: f64, v6: f64, v12: f64) -> HankelTensor {
        build_truncated(&TruncatedSpec::new(6, 3, v0, v6, v12)).unwrap()
    }

    #[test]
    fn sextic_decomposition_at_and_above_threshold() {
        for (v0, v6, v12) in [(1200.0, 1.0, 1200.0), (sextic_threshold(), 1.0, sextic_threshold()), (4.0e6, 1.0, 1.0)] {
            let d = build_sextic_decomposition(v0, v6, v12).unwrap();
            let check = verify_decomposition(&sextic(v0, v6, v12), &d).unwrap();
            assert!(check.passed, "{v0} {v6} {v12}: {check:?}");
        }
    }

    #[test]
    fn sextic_decomposition_rejects_below_threshold() {
        assert!(build_sextic_decomposition(1000.0, 1.0, 1000.0).is_err());
        assert!(build_sextic_decomposition(0.0, 1.0, 1000.0).is_err());
    }

    #[test]
    fn sextic_decomposition_without_middle() {
        let d = build_sextic_decomposition(2.0, 0.0, 0.0).unwrap();
        assert!(verify_decomposition(&sextic(2.0, 0.0, 0.0), &d).unwrap().passed);
    }

    #[test]
    fn truncated_bound_decomposition_at_the_bound() {
        for m in [6, 8, 10] {
            let b = truncated_sos_bound(m).unwrap();
            let t = truncated_bound_tensor(m, b.bound, 1.0).unwrap();
            let d = build_truncated_bound_decomposition(m, b.bound, 1.0).unwrap();
            let check = verify_decomposition(&t, &d).unwrap();
            assert!(check.passed, "m = {m}: {check:?}");
        }
        let b = truncated_sos_bound(6).unwrap();
        assert!(build_truncated_bound_decomposition(6, 0.99 * b.bound, 1.0).is_err());
    }

    #[test]
    fn strong_squares_verify() {
        // Generating vector of moments of a positive measure: v_k = Σ w t^k.
        let nodes = [(-0.5, 1.0), (0.3, 2.0), (0.9, 0.5)];
        let v: Vec<f64> = (0..=8).map(|k| nodes.iter().map(|(t, w): &(f64, f64)| w * t.powi(k)).sum()).collect();
        let t = HankelTensor::from_values(4, 3, v).unwrap();
        let d = build_strong_hankel_squares(&t).unwrap();
        assert!(verify_decomposition(&t, &d).unwrap().passed);
    }
}
