use serde::{Deserialize, Serialize};

use super::constants::{self, BOUNDARY_BAND};
use super::{ClassificationVerdict, CriterionRecord, Tri, Witness};
use crate::error::{domain, HankelError, Result};
use crate::hankel_matrix::{build_matrix, is_strong_hankel};
use crate::symtensor::{GeneratingVector, HankelTensor};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSpec {
    pub m: usize,
    pub n: usize,
    pub v0: f64,
    /// Entry at index `(n - 1) m / 2`.
    pub vmid: f64,
    /// Entry at index `(n - 1) m`.
    pub vend: f64,
}

impl TruncatedSpec {
    pub fn new(m: usize, n: usize, v0: f64, vmid: f64, vend: f64) -> Self {
        Self { m, n, v0, vmid, vend }
    }

    pub fn top_index(&self) -> usize {
        (self.n - 1) * self.m
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return domain("order must be positive");
        }
        if self.n < 3 || self.n % 2 == 0 {
            return domain(format!("truncated tensors need odd dimension n >= 3, got {}", self.n));
        }
        Ok(())
    }
}

pub fn build_truncated(spec: &TruncatedSpec) -> Result<HankelTensor> {
    spec.validate()?;
    let top = spec.top_index();
    let gen = GeneratingVector::sparse(spec.m, spec.n, &[(0, spec.v0), (top / 2, spec.vmid), (top, spec.vend)])?;
    Ok(HankelTensor::new(gen))
}

/// `e_i - e_j` with `i + j = N/2 + 2`, avoiding the rows that touch `v0`, `v_{N/2}`
/// on the diagonal and `v_N`; its quadratic form value is `-2 v_{N/2}`.
/// Returned 0-based; `None` when `N < 6` (no such pair exists).
pub(crate) fn middle_pair(top: usize) -> Option<(usize, usize)> {
    if top < 6 || top % 2 == 1 {
        return None;
    }
    // 1-based i = 2, j = N/2.
    Some((1, top / 2 - 1))
}

pub(crate) fn middle_pair_witness(t: &HankelTensor) -> Option<Witness> {
    let top = t.generating_vector().top_index();
    let (i, j) = middle_pair(top)?;
    let a = build_matrix(t.generating_vector(), None).ok()?;
    let mut y = vec![0.0; a.size()];
    y[i] = 1.0;
    y[j] = -1.0;
    let value = a.quadratic_form(&y).ok()?;
    Some(Witness::matrix_vector(format!("e{} - e{}", i + 1, j + 1), y, value))
}

/// Strong-Hankel verdict for a truncated tensor with nonnegative anchors:
/// strong iff the middle entry vanishes.
pub fn truncated_strong_dichotomy(spec: &TruncatedSpec) -> Result<ClassificationVerdict> {
    let t = build_truncated(spec)?;
    if spec.v0 < 0.0 || spec.vmid < 0.0 || spec.vend < 0.0 {
        return Err(HankelError::Precondition(format!(
            "anchors must satisfy the necessary condition v_(i-1)m >= 0 (v0 = {}, vmid = {}, vend = {})",
            spec.v0, spec.vmid, spec.vend
        )));
    }
    let mut verdict = ClassificationVerdict::unknown();
    if spec.vmid == 0.0 {
        verdict.strong = Tri::Yes;
        verdict.criteria.push(CriterionRecord::new("middle entry vanishes", 0.0, 0.0));
        if spec.m % 2 == 0 {
            // f = v0 x1^m + vend xn^m with m even.
            verdict.psd = Tri::Yes;
            verdict.sos = Tri::Yes;
        }
        return Ok(verdict);
    }
    verdict.criteria.push(CriterionRecord::new("middle entry vanishes", -spec.vmid, 0.0));
    match middle_pair_witness(&t) {
        Some(w) => {
            verdict.strong = Tri::No;
            verdict.witnesses.push(w);
        }
        None => {
            // (n - 1) m < 6: the matrix is small enough to carry no such pair.
            let strong = is_strong_hankel(&t);
            verdict.strong = Tri::from_bool(strong.strong);
            if let (Some(y), Some(val)) = (strong.matrix.witness, strong.matrix.witness_value) {
                verdict.witnesses.push(Witness::matrix_vector("min eigenvector", y, val));
            }
            verdict.notes.push(format!(
                "(n-1)m = {} < 6: decided by the matrix eigenvalue test",
                spec.top_index()
            ));
        }
    }
    Ok(verdict)
}

/// Witness for `v6 > 0` when `v0 v12 = 0`: along `x2 = 0` the form is
/// `v0 x1^6 + 20 v6 x1³x3³ + v12 x3^6`, negative at `(-s, 0, 1)` or `(1, 0, -s)`.
pub(crate) fn cross_cube_witness(v0: f64, v6: f64, v12: f64) -> Option<Vec<f64>> {
    if v6 <= 0.0 {
        return None;
    }
    if v0 > 0.0 && v12 > 0.0 {
        // 2 v0 v12 - 20 v6 √(v0 v12) < 0 when √(v0 v12) < 10 v6.
        if (v0 * v12).sqrt() < 10.0 * v6 {
            return Some(vec![v12.powf(1.0 / 6.0), 0.0, -v0.powf(1.0 / 6.0)]);
        }
        return None;
    }
    if v12 <= 0.0 && v0 > 0.0 {
        let s = (v0 / (10.0 * v6)).cbrt();
        return Some(vec![1.0, 0.0, -s]);
    }
    let s = if v12 > 0.0 { (v12 / (10.0 * v6)).cbrt() } else { 1.0 };
    Some(vec![-s, 0.0, 1.0])
}

/// Sixth-order, three-dimensional truncated classification.
pub fn sextic_truncated_classify(v0: f64, v6: f64, v12: f64) -> ClassificationVerdict {
    sextic_truncated_classify_with_band(v0, v6, v12, BOUNDARY_BAND)
}

/// PSD ⇔ SOS ⇔ (anchors nonnegative and `√(v0 v12) >= (560 + 70√70) v6`);
/// PD ⇔ all anchors positive and the inequality strict. `band` is the relative
/// tolerance on the threshold inequality.
pub fn sextic_truncated_classify_with_band(v0: f64, v6: f64, v12: f64, band: f64) -> ClassificationVerdict {
    let spec = TruncatedSpec::new(6, 3, v0, v6, v12);
    let t = build_truncated(&spec).expect("m = 6, n = 3 is a valid truncated shape");
    let mut verdict = ClassificationVerdict::unknown();

    let anchors_ok = v0 >= 0.0 && v6 >= 0.0 && v12 >= 0.0;
    verdict.criteria.push(CriterionRecord::new("v0, v6, v12 >= 0", v0.min(v6).min(v12), 0.0));
    if !anchors_ok {
        verdict.psd = Tri::No;
        verdict.sos = Tri::No;
        verdict.pd = Tri::No;
        for (i, v) in [(0usize, v0), (1, v6), (2, v12)] {
            if v < 0.0 {
                let mut e = vec![0.0; 3];
                e[i] = 1.0;
                verdict.witnesses.push(Witness::form_point(&t, format!("e{}", i + 1), e));
                break;
            }
        }
        let strong = is_strong_hankel(&t);
        verdict.strong = Tri::from_bool(strong.strong);
        if let (Some(y), Some(val)) = (strong.matrix.witness, strong.matrix.witness_value) {
            verdict.witnesses.push(Witness::matrix_vector("min eigenvector", y, val));
        }
        return verdict;
    }

    let threshold = constants::sextic_threshold();
    let lhs = (v0 * v12).sqrt();
    let slack = lhs - threshold * v6;
    let tol = band * v6.max(1.0);
    verdict.criteria.push(CriterionRecord::new("sqrt(v0*v12) >= (560+70*sqrt(70))*v6", slack, tol));
    verdict.boundary = v6 > 0.0 && slack.abs() <= tol;

    let psd = slack >= -tol;
    verdict.psd = Tri::from_bool(psd);
    verdict.sos = verdict.psd;
    verdict.pd = Tri::from_bool(v0 > 0.0 && v6 > 0.0 && v12 > 0.0 && slack > tol);

    if !psd {
        let point = if v0 > 0.0 && v12 > 0.0 {
            let tt = constants::witness_t();
            vec![v12.powf(1.0 / 6.0), tt.sqrt() * (v0 * v12).powf(1.0 / 12.0), -v0.powf(1.0 / 6.0)]
        } else {
            cross_cube_witness(v0, v6, v12).expect("v6 > 0 whenever the threshold fails")
        };
        verdict.witnesses.push(Witness::form_point(&t, "threshold witness", point));
    } else if verdict.pd == Tri::No {
        // A nonzero point where f vanishes or nearly so.
        if v6 == 0.0 {
            verdict.witnesses.push(Witness::form_point(&t, "e2", vec![0.0, 1.0, 0.0]));
        } else if v0 == 0.0 || v12 == 0.0 {
            let i = if v0 == 0.0 { 0 } else { 2 };
            let mut e = vec![0.0; 3];
            e[i] = 1.0;
            verdict.witnesses.push(Witness::form_point(&t, format!("e{}", i + 1), e));
        }
    }

    if v6 == 0.0 {
        verdict.strong = Tri::Yes;
    } else {
        verdict.strong = Tri::No;
        verdict
            .witnesses
            .push(middle_pair_witness(&t).expect("N = 12 admits the middle pair witness"));
    }
    verdict
}
