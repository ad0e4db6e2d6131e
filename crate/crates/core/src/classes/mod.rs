//! Truncated and quasi-truncated Hankel tensors: constructors and closed-form
//! PSD / SOS / strong-Hankel criteria.
//!
//! A truncated tensor (odd `n`) has a generating vector that vanishes except at
//! `0`, `N/2` and `N` with `N = (n - 1) m`; a quasi-truncated one may also be
//! nonzero at `1` and `N - 1`.

mod bound;
mod quasi;
mod truncated;

pub use bound::{truncated_sos_bound, TruncatedSosBound};
pub use quasi::{
    binary_sextic_check, binary_sextic_witness, build_quasi_truncated, quasi_midzero_dichotomy,
    quasi_sextic_necessary, quasi_sextic_sufficient, quasi_sos_conditions, BinarySexticCheck,
    ConditionCheck, QuasiNecessaryReport, QuasiSextic, QuasiSosCertificate, QuasiTruncatedSpec,
    SEARCH_EXPONENT_RANGE, SEARCH_EXPONENT_STEP,
};
pub use truncated::{
    build_truncated, sextic_truncated_classify, sextic_truncated_classify_with_band,
    truncated_strong_dichotomy, TruncatedSpec,
};

use serde::{Deserialize, Serialize};

use crate::symtensor::HankelTensor;

/// Closed-form constants of the sixth-order, three-dimensional criteria.
pub mod constants {
    /// √70.
    pub fn sqrt70() -> f64 {
        70f64.sqrt()
    }

    /// `560 + 70√70`: the PSD threshold on `√(v0 v12) / v6`.
    pub fn sextic_threshold() -> f64 {
        560.0 + 70.0 * sqrt70()
    }

    /// `10 + √70`: the witness parameter maximizing `(-t³ + 30t² - 90t + 20) / 2`.
    pub fn witness_t() -> f64 {
        10.0 + sqrt70()
    }

    /// `60 + 15√70`: the mixed coefficient left on `x1² x2² x3²`.
    pub fn mixed_coefficient() -> f64 {
        60.0 + 15.0 * sqrt70()
    }

    /// `(√70 - 8) / 2`: the diagonal weight left on `x2⁶`.
    pub fn middle_diagonal() -> f64 {
        (sqrt70() - 8.0) / 2.0
    }

    /// Relative band around the sixth-order threshold inside which verdicts
    /// are flagged as boundary cases.
    pub const BOUNDARY_BAND: f64 = 1e-9;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

/// What a witness refutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// A point `x` with `f(x) < 0` (refutes PSD and PD).
    FormPoint,
    /// A point `x ≠ 0` with `f(x) <= 0` (refutes PD only).
    FormZero,
    /// A vector `y` with `yᵀ A y < 0` for the associated Hankel matrix (refutes strong).
    MatrixVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub label: String,
    pub point: Vec<f64>,
    pub value: f64,
}

impl Witness {
    /// A form witness, evaluated on the tensor itself.
    pub fn form_point(t: &HankelTensor, label: impl Into<String>, point: Vec<f64>) -> Self {
        let value = t.eval(&point).expect("witness dimension matches tensor");
        let kind = if value < 0.0 { WitnessKind::FormPoint } else { WitnessKind::FormZero };
        Self { kind, label: label.into(), point, value }
    }

    pub fn matrix_vector(label: impl Into<String>, y: Vec<f64>, value: f64) -> Self {
        Self { kind: WitnessKind::MatrixVector, label: label.into(), point: y, value }
    }
}

/// A named inequality and how far it holds (positive) or fails (negative).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionRecord {
    pub name: String,
    pub holds: bool,
    pub slack: f64,
}

impl CriterionRecord {
    pub fn new(name: impl Into<String>, slack: f64, tol: f64) -> Self {
        Self { name: name.into(), holds: slack >= -tol, slack }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub psd: Tri,
    pub sos: Tri,
    pub strong: Tri,
    pub pd: Tri,
    /// Set when a deciding inequality sits inside its tolerance band.
    pub boundary: bool,
    pub witnesses: Vec<Witness>,
    pub criteria: Vec<CriterionRecord>,
    pub notes: Vec<String>,
}

impl ClassificationVerdict {
    pub fn unknown() -> Self {
        Self {
            psd: Tri::Unknown,
            sos: Tri::Unknown,
            strong: Tri::Unknown,
            pd: Tri::Unknown,
            boundary: false,
            witnesses: Vec::new(),
            criteria: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Checks the verdict invariants: SOS implies PSD, PSD failure implies PD
    /// failure, and every refutation carries a matching witness.
    pub fn is_consistent(&self) -> bool {
        if self.sos == Tri::Yes && self.psd != Tri::Yes {
            return false;
        }
        if self.psd == Tri::No && self.pd == Tri::Yes {
            return false;
        }
        let has = |kind: WitnessKind| self.witnesses.iter().any(|w| w.kind == kind && w.value < 0.0);
        if self.psd == Tri::No && !has(WitnessKind::FormPoint) {
            return false;
        }
        if self.strong == Tri::No && !has(WitnessKind::MatrixVector) {
            return false;
        }
        true
    }
}

/// Sign-preserving real root `x^(1/k)`.
pub(crate) fn real_root(x: f64, k: i32) -> f64 {
    x.signum() * x.abs().powf(1.0 / k as f64)
}

/// Points worth probing before any random search: coordinate axes, pairwise
/// sums and differences, and the closed-form witnesses of the sextic criteria.
pub fn structured_probes(t: &HankelTensor) -> Vec<Vec<f64>> {
    let n = t.dim();
    let mut probes = Vec::new();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        probes.push(e);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for s in [1.0, -1.0] {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e[j] = s;
                probes.push(e);
            }
        }
    }
    if t.order() == 6 && n == 3 {
        let (v0, v12) = (t.v(0), t.v(12));
        if v0 > 0.0 && v12 > 0.0 {
            let tt = constants::witness_t();
            probes.push(vec![v12.powf(1.0 / 6.0), tt.sqrt() * (v0 * v12).powf(1.0 / 12.0), -v0.powf(1.0 / 6.0)]);
        }
        if let Some(p) = truncated::cross_cube_witness(v0, t.v(6), v12) {
            probes.push(p);
        }
        for (a, b, c, flip) in [(v0, t.v(1), t.v(6), false), (v12, t.v(11), t.v(6), true)] {
            if let Some([x, y]) = binary_sextic_witness(a, b, c) {
                probes.push(if flip { vec![0.0, y, x] } else { vec![x, y, 0.0] });
            }
        }
    }
    probes
}
