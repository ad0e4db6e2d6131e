use serde::{Deserialize, Serialize};

use super::constants;
use super::truncated::{cross_cube_witness, middle_pair_witness};
use super::{real_root, ClassificationVerdict, CriterionRecord, Tri, Witness};
use crate::certificates::{build_quasi_decomposition, StructuredDecomposition};
use crate::error::{domain, HankelError, Result};
use crate::hankel_matrix::is_strong_hankel;
use crate::symtensor::{GeneratingVector, HankelTensor};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiTruncatedSpec {
    pub m: usize,
    pub n: usize,
    pub v0: f64,
    pub v1: f64,
    pub vmid: f64,
    /// Entry at index `(n - 1) m - 1`.
    pub vend1: f64,
    pub vend: f64,
}

pub fn build_quasi_truncated(spec: &QuasiTruncatedSpec) -> Result<HankelTensor> {
    if spec.m < 2 {
        return domain(format!("quasi-truncated tensors need m >= 2, got {}", spec.m));
    }
    if spec.n < 3 || spec.n % 2 == 0 {
        return domain(format!("quasi-truncated tensors need odd dimension n >= 3, got {}", spec.n));
    }
    let top = (spec.n - 1) * spec.m;
    let gen = GeneratingVector::sparse(
        spec.m,
        spec.n,
        &[(0, spec.v0), (1, spec.v1), (top / 2, spec.vmid), (top - 1, spec.vend1), (top, spec.vend)],
    )?;
    Ok(HankelTensor::new(gen))
}

/// Even `m`, vanishing middle entry: PSD iff `v1 = v_{N-1} = 0`, and then also
/// strong and SOS.
pub fn quasi_midzero_dichotomy(spec: &QuasiTruncatedSpec) -> Result<ClassificationVerdict> {
    let t = build_quasi_truncated(spec)?;
    if spec.m % 2 == 1 {
        return domain(format!("the zero-middle dichotomy is stated for even m only, got m = {}", spec.m));
    }
    if spec.v0 < 0.0 || spec.vmid < 0.0 || spec.vend < 0.0 {
        return Err(HankelError::Precondition(format!(
            "anchors must satisfy v_(i-1)m >= 0 (v0 = {}, vmid = {}, vend = {})",
            spec.v0, spec.vmid, spec.vend
        )));
    }
    let mut verdict = ClassificationVerdict::unknown();
    if spec.vmid != 0.0 {
        verdict.notes.push("middle entry is nonzero; the zero-middle dichotomy does not apply".into());
        if let Some(w) = middle_pair_witness(&t) {
            verdict.strong = Tri::No;
            verdict.witnesses.push(w);
        }
        return Ok(verdict);
    }

    let n = spec.n;
    let witness = if spec.v1 != 0.0 {
        let mut x = vec![0.0; n];
        x[0] = 1.0;
        if spec.v0 == 0.0 {
            x[1] = -spec.v1; // f = -m v1²
            Some(("(1, -v1, 0, ...)", x))
        } else {
            x[1] = -spec.v0 / spec.v1; // f = (1 - m) v0
            Some(("(1, -v0/v1, 0, ...)", x))
        }
    } else if spec.vend1 != 0.0 {
        let mut x = vec![0.0; n];
        x[n - 1] = 1.0;
        if spec.vend == 0.0 {
            x[n - 2] = -spec.vend1;
            Some(("(..., 0, -v_(N-1), 1)", x))
        } else {
            x[n - 2] = -spec.vend / spec.vend1;
            Some(("(..., 0, -v_N/v_(N-1), 1)", x))
        }
    } else {
        None
    };

    let slack = -(spec.v1.abs().max(spec.vend1.abs()));
    verdict.criteria.push(CriterionRecord::new("v1 = v_(N-1) = 0", slack, 0.0));
    match witness {
        None => {
            verdict.psd = Tri::Yes;
            verdict.sos = Tri::Yes;
            verdict.strong = Tri::Yes;
        }
        Some((label, x)) => {
            verdict.psd = Tri::No;
            verdict.sos = Tri::No;
            verdict.pd = Tri::No;
            let w = Witness::form_point(&t, label, x);
            verdict.witnesses.push(w);
            // Even order strong tensors are PSD, so this one is not strong.
            verdict.strong = Tri::No;
            let strong = is_strong_hankel(&t);
            if let (Some(y), Some(val)) = (strong.matrix.witness, strong.matrix.witness_value) {
                verdict.witnesses.push(Witness::matrix_vector("min eigenvector", y, val));
            }
        }
    }
    Ok(verdict)
}

/// The binary sextic `a x^6 + 6 b x^5 y + c y^6`: PSD iff `a, c >= 0` and
/// `|b| <= (a/5)^(5/6) c^(1/6)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinarySexticCheck {
    pub holds: bool,
    /// `(a/5)^(5/6) c^(1/6)`, or NaN when an end coefficient is negative.
    pub bound: f64,
    /// `bound - |b|`.
    pub slack: f64,
    /// Point `(x, y)` with negative value when the check fails.
    pub witness: Option<[f64; 2]>,
}

pub fn binary_sextic_check(a: f64, b: f64, c: f64) -> BinarySexticCheck {
    if a < 0.0 || c < 0.0 {
        return BinarySexticCheck {
            holds: false,
            bound: f64::NAN,
            slack: a.min(c),
            witness: binary_sextic_witness(a, b, c),
        };
    }
    let bound = (a / 5.0).powf(5.0 / 6.0) * c.powf(1.0 / 6.0);
    let slack = bound - b.abs();
    let holds = slack >= 0.0;
    BinarySexticCheck { holds, bound, slack, witness: if holds { None } else { binary_sextic_witness(a, b, c) } }
}

/// Negative point of `a x^6 + 6 b x^5 y + c y^6` when one exists by the
/// case analysis on which end coefficients vanish.
pub fn binary_sextic_witness(a: f64, b: f64, c: f64) -> Option<[f64; 2]> {
    if a < 0.0 {
        return Some([1.0, 0.0]);
    }
    if c < 0.0 {
        return Some([0.0, 1.0]);
    }
    if b == 0.0 {
        return None;
    }
    let point = match (a == 0.0, c == 0.0) {
        // 6 b x^5 y at (1, -b): -6 b².
        (true, true) => [1.0, -b],
        // c y^6 + 6 b x^5 y at (c^(1/5), -b^(1/5)): -5 c |b|^(6/5).
        (true, false) => [c.powf(0.2), -real_root(b, 5)],
        // a x^6 + 6 b x^5 y at (1, -a/b): -5 a.
        (false, true) => [1.0, -a / b],
        (false, false) => {
            let bound = (a / 5.0).powf(5.0 / 6.0) * c.powf(1.0 / 6.0);
            if b.abs() <= bound {
                return None;
            }
            [(5.0 * c).powf(1.0 / 6.0), -b.signum() * a.powf(1.0 / 6.0)]
        }
    };
    Some(point)
}

/// Generating data of a sixth-order, three-dimensional quasi-truncated tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiSextic {
    pub v0: f64,
    pub v1: f64,
    pub v6: f64,
    pub v11: f64,
    pub v12: f64,
}

impl QuasiSextic {
    pub fn new(v0: f64, v1: f64, v6: f64, v11: f64, v12: f64) -> Self {
        Self { v0, v1, v6, v11, v12 }
    }

    pub fn tensor(&self) -> HankelTensor {
        build_quasi_truncated(&QuasiTruncatedSpec {
            m: 6,
            n: 3,
            v0: self.v0,
            v1: self.v1,
            vmid: self.v6,
            vend1: self.v11,
            vend: self.v12,
        })
        .expect("m = 6, n = 3 is a valid quasi-truncated shape")
    }

    /// Image under reversing the variables: `(v0, v1) ↔ (v12, v11)`.
    pub fn reversed(&self) -> Self {
        Self { v0: self.v12, v1: self.v11, v6: self.v6, v11: self.v1, v12: self.v0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: String,
    pub holds: bool,
    pub slack: f64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiNecessaryReport {
    pub checks: Vec<ConditionCheck>,
    /// Whether the odd terms cancel at the threshold witness, enabling the
    /// sixth-order threshold as an extra necessary condition.
    pub odd_terms_balanced: bool,
}

impl QuasiNecessaryReport {
    pub fn violations(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Necessary conditions for a sixth-order quasi-truncated tensor to be PSD.
/// Every violation carries a point where the form is negative.
pub fn quasi_sextic_necessary(q: &QuasiSextic) -> QuasiNecessaryReport {
    let t = q.tensor();
    let QuasiSextic { v0, v1, v6, v11, v12 } = *q;
    let mut checks = Vec::new();

    let anchor_slack = v0.min(v6).min(v12);
    let anchor_witness = [(0usize, v0), (1, v6), (2, v12)].iter().find(|(_, v)| *v < 0.0).map(|&(i, _)| {
        let mut e = vec![0.0; 3];
        e[i] = 1.0;
        Witness::form_point(&t, format!("e{}", i + 1), e)
    });
    checks.push(ConditionCheck {
        condition: "v0, v6, v12 >= 0".into(),
        holds: anchor_slack >= 0.0,
        slack: anchor_slack,
        witness: anchor_witness,
    });

    // x3 = 0 leaves v0 x1^6 + 6 v1 x1^5 x2 + v6 x2^6.
    let left = binary_sextic_check(v0, v1, v6);
    checks.push(ConditionCheck {
        condition: "|v1| <= (v0/5)^(5/6) v6^(1/6)".into(),
        holds: left.holds,
        slack: left.slack,
        witness: left.witness.map(|[x, y]| Witness::form_point(&t, "x3 = 0 witness", vec![x, y, 0.0])),
    });

    // x1 = 0 leaves v12 x3^6 + 6 v11 x3^5 x2 + v6 x2^6.
    let right = binary_sextic_check(v12, v11, v6);
    checks.push(ConditionCheck {
        condition: "|v11| <= (v12/5)^(5/6) v6^(1/6)".into(),
        holds: right.holds,
        slack: right.slack,
        witness: right.witness.map(|[x, y]| Witness::form_point(&t, "x1 = 0 witness", vec![0.0, y, x])),
    });

    // x2 = 0 leaves v0 x1^6 + 20 v6 x1³x3³ + v12 x3^6.
    if anchor_slack >= 0.0 {
        let slack = (v0 * v12).sqrt() - 10.0 * v6;
        checks.push(ConditionCheck {
            condition: "sqrt(v0*v12) >= 10*v6".into(),
            holds: slack >= 0.0,
            slack,
            witness: if slack < 0.0 {
                cross_cube_witness(v0, v6, v12).map(|p| Witness::form_point(&t, "x2 = 0 witness", p))
            } else {
                None
            },
        });
    }

    let lhs = v1 * v12.max(0.0).powf(5.0 / 6.0);
    let rhs = v11 * v0.max(0.0).powf(5.0 / 6.0);
    let odd_terms_balanced = (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()) || (lhs == 0.0 && rhs == 0.0);
    if odd_terms_balanced && anchor_slack >= 0.0 {
        let slack = (v0 * v12).sqrt() - constants::sextic_threshold() * v6;
        let witness = if slack < 0.0 {
            let point = if v0 > 0.0 && v12 > 0.0 {
                let tt = constants::witness_t();
                vec![v12.powf(1.0 / 6.0), tt.sqrt() * (v0 * v12).powf(1.0 / 12.0), -v0.powf(1.0 / 6.0)]
            } else {
                cross_cube_witness(v0, v6, v12).expect("v6 > 0 when the threshold fails")
            };
            Some(Witness::form_point(&t, "threshold witness", point))
        } else {
            None
        };
        checks.push(ConditionCheck {
            condition: "sqrt(v0*v12) >= (560+70*sqrt(70))*v6".into(),
            holds: slack >= 0.0,
            slack,
            witness,
        });
    }

    QuasiNecessaryReport { checks, odd_terms_balanced }
}

/// Grid exponents `j` in `t = 10^j` for the sufficient-condition search.
pub const SEARCH_EXPONENT_RANGE: (f64, f64) = (-6.0, 6.0);
pub const SEARCH_EXPONENT_STEP: f64 = 0.25;
const REFINE_STEPS: usize = 40;

/// Slacks of the four inequalities at `(t1, t2)`; all nonnegative means the
/// five-part decomposition exists.
pub fn quasi_sos_conditions(q: &QuasiSextic, t1: f64, t2: f64) -> [f64; 4] {
    let QuasiSextic { v0, v1, v6, v11, v12 } = *q;
    let root = (v0 * v12).sqrt();
    let c1 = 1.0 / t1 - 10.0 * v6 / (t1 * root) - v1.abs();
    let c2 = 1.0 / t2 - 10.0 * v6 / (t2 * root) - v11.abs();
    let tail = v1.abs() * (5.0 / (t1 * v0)).powi(5) + v11.abs() * (5.0 / (t2 * v12)).powi(5);
    let c3 = constants::middle_diagonal() * v6 - tail;
    let d1 = v0 - 10.0 * v6 * (v0 / v12).sqrt() - v1.abs() * t1 * v0;
    let d3 = v12 - 10.0 * v6 * (v12 / v0).sqrt() - v11.abs() * t2 * v12;
    let c4 = d1 * d3 * c3 - (v6 * constants::mixed_coefficient()).powi(3) / 27.0;
    [c1, c2, c3, c4]
}

fn normalized_score(q: &QuasiSextic, t1: f64, t2: f64) -> f64 {
    let [c1, c2, c3, c4] = quasi_sos_conditions(q, t1, t2);
    let s3 = (constants::middle_diagonal() * q.v6).max(f64::MIN_POSITIVE);
    let s4 = ((q.v6 * constants::mixed_coefficient()).powi(3) / 27.0).max(f64::MIN_POSITIVE);
    (c1 * t1).min(c2 * t2).min(c3 / s3).min(c4 / s4)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiSosCertificate {
    pub t1: f64,
    pub t2: f64,
    pub slacks: [f64; 4],
    pub decomposition: StructuredDecomposition,
}

/// Searches `t1, t2 > 0` satisfying the four sufficient inequalities on a
/// logarithmic grid, takes the lexicographically smallest feasible cell, then
/// refines each coordinate by bisection toward larger margin. `None` means
/// inconclusive, not "not SOS".
pub fn quasi_sextic_sufficient(q: &QuasiSextic) -> Result<Option<QuasiSosCertificate>> {
    if !(q.v0 > 0.0 && q.v6 > 0.0 && q.v12 > 0.0) {
        return domain(format!(
            "the sufficient condition needs v0, v6, v12 > 0 (got {}, {}, {})",
            q.v0, q.v6, q.v12
        ));
    }
    let feasible = |t1: f64, t2: f64| quasi_sos_conditions(q, t1, t2).iter().all(|&c| c >= 0.0);

    let (lo, hi) = SEARCH_EXPONENT_RANGE;
    let steps = ((hi - lo) / SEARCH_EXPONENT_STEP).round() as i32;
    let grid: Vec<f64> = (0..=steps).map(|j| 10f64.powf(lo + j as f64 * SEARCH_EXPONENT_STEP)).collect();
    let mut found = None;
    'outer: for &t1 in &grid {
        for &t2 in &grid {
            if feasible(t1, t2) {
                found = Some((t1, t2));
                break 'outer;
            }
        }
    }
    let Some((mut t1, mut t2)) = found else {
        return Ok(None);
    };

    let ratio = 10f64.powf(SEARCH_EXPONENT_STEP);
    let refine = |fixed_other: f64, current: f64, first: bool| -> f64 {
        let score = |t: f64| if first { normalized_score(q, t, fixed_other) } else { normalized_score(q, fixed_other, t) };
        let (mut a, mut b) = ((current / ratio).ln(), (current * ratio).ln());
        for _ in 0..REFINE_STEPS {
            let mid = 0.5 * (a + b);
            let h = 1e-6 * (b - a).max(1e-12);
            if score((mid + h).exp()) > score((mid - h).exp()) {
                a = mid;
            } else {
                b = mid;
            }
        }
        let cand = (0.5 * (a + b)).exp();
        let ok = if first { feasible(cand, fixed_other) } else { feasible(fixed_other, cand) };
        if ok && score(cand) >= score(current) {
            cand
        } else {
            current
        }
    };
    t1 = refine(t2, t1, true);
    t2 = refine(t1, t2, false);

    let slacks = quasi_sos_conditions(q, t1, t2);
    let decomposition = build_quasi_decomposition(q, t1, t2)?;
    Ok(Some(QuasiSosCertificate { t1, t2, slacks, decomposition }))
}
