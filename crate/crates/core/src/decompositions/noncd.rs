//! The binary family `m = 2k`, `v_0 = v_m = 1`, `v_2l = v_(m-2l) = -1/C(m, 2l)`
//! for `l = 1..k-1`, whose form is `x1^m - Σ_l x1^(m-2l) x2^(2l) + x2^m`.
//! Everything here is computed in exact rational arithmetic.

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::symtensor::{GeneratingVector, HankelTensor};

type Q = Ratio<i128>;

pub const NONCD_MAX_K: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct NonCdFamily {
    pub k: usize,
    pub m: usize,
    /// Exact generating vector.
    pub exact: Vec<Q>,
    pub gen: GeneratingVector,
}

impl NonCdFamily {
    pub fn tensor(&self) -> HankelTensor {
        HankelTensor::new(self.gen.clone())
    }

    /// Exact coefficients of `x1^(m-j) x2^j`, `j = 0..=m`.
    pub fn form_coefficients(&self) -> Vec<Q> {
        (0..=self.m).map(|j| Q::from_integer(binomial(self.m, j)) * self.exact[j]).collect()
    }
}

fn binomial(n: usize, k: usize) -> i128 {
    let mut b: i128 = 1;
    for i in 0..k.min(n - k) {
        b = b * (n - i) as i128 / (i + 1) as i128;
    }
    b
}

/// Binary form of degree `d` as dense coefficients of `x1^(d-j) x2^j`.
fn square(p: &[i128]) -> Vec<i128> {
    let mut out = vec![0; 2 * p.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in p.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn sum_of_squares(bases: &[Vec<i128>], len: usize) -> Vec<i128> {
    let mut total = vec![0; len];
    for b in bases {
        for (t, s) in total.iter_mut().zip(square(b)) {
            *t += s;
        }
    }
    total
}

fn to_f64(q: Q) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdObstruction {
    /// Coefficient of `x1^(m-2) x2²`, exactly.
    pub coefficient: String,
    pub coefficient_value: f64,
    /// The coefficient is negative, which no completely decomposable
    /// representation allows.
    pub holds: bool,
    pub statement: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonCdAnalysis {
    pub k: usize,
    pub m: usize,
    /// Whether `Σ_{j=0}^{k-2} (x1^(k-j) x2^j - x1^(k-j-2) x2^(j+2))²` equals the
    /// form coefficient by coefficient.
    pub identity_holds: bool,
    /// Largest coefficient gap of that identity (exact integers, as f64).
    pub identity_max_gap: f64,
    /// For `k = 2`: whether `(x1² - x2²)² + (x1 x2)²` reproduces the form.
    pub augmented_certificate_holds: Option<bool>,
    /// `f(1, 1) = 3 - k`.
    pub value_at_ones: f64,
    /// Set when the family is claimed SOS but `f(1, 1) < 0`.
    pub sos_claim_mismatch: bool,
    pub obstruction: CdObstruction,
}

pub fn noncd_family(k: usize) -> Result<NonCdFamily> {
    if k < 2 {
        return domain(format!("the family needs k >= 2, got {k}"));
    }
    if k > NONCD_MAX_K {
        return domain(format!("k = {k} exceeds the exact-arithmetic limit {NONCD_MAX_K}"));
    }
    let m = 2 * k;
    let mut exact = vec![Q::zero(); m + 1];
    exact[0] = Q::one();
    exact[m] = Q::one();
    for l in 1..k {
        let v = -Q::new(1, binomial(m, 2 * l));
        exact[2 * l] = v;
        exact[m - 2 * l] = v;
    }
    let gen = GeneratingVector::new(m, 2, exact.iter().map(|&q| to_f64(q)).collect())?;
    Ok(NonCdFamily { k, m, exact, gen })
}

/// The `x1^(m-2) x2²` coefficient `C(m, 2) v_2`, which is `-1`. A completely
/// decomposable `Σ_p (a_p x1 + b_p x2)^m` has this coefficient
/// `C(m, 2) Σ_p a_p^(m-2) b_p² >= 0` since `m - 2` is even.
pub fn cd_obstruction(fam: &NonCdFamily) -> CdObstruction {
    let c = Q::from_integer(binomial(fam.m, 2)) * fam.exact[2];
    let holds = c.is_negative();
    CdObstruction {
        coefficient: c.to_string(),
        coefficient_value: to_f64(c),
        holds,
        statement: if holds {
            format!(
                "coefficient of x1^{}x2^2 is {c}; any completely decomposable sum gives C({},2) Σ a^{} b² >= 0",
                fam.m - 2,
                fam.m,
                fam.m - 2
            )
        } else {
            format!("coefficient of x1^{}x2^2 is {c}, so this argument gives no obstruction", fam.m - 2)
        },
    }
}

pub fn analyze_noncd(fam: &NonCdFamily) -> NonCdAnalysis {
    let (k, m) = (fam.k, fam.m);
    let coeffs = fam.form_coefficients();
    // Bases of degree k as dense coefficient vectors over x1^(k-i) x2^i.
    let bases: Vec<Vec<i128>> = (0..=k.saturating_sub(2))
        .map(|j| {
            let mut b = vec![0; k + 1];
            b[j] += 1;
            b[j + 2] -= 1;
            b
        })
        .collect();
    let gap = |sos: &[i128]| -> Q {
        sos.iter()
            .zip(&coeffs)
            .map(|(&s, &c)| (Q::from_integer(s) - c).abs())
            .fold(Q::zero(), |a, b| if b > a { b } else { a })
    };
    let sos = sum_of_squares(&bases, m + 1);
    let identity_gap = gap(&sos);
    let augmented_certificate_holds = (k == 2).then(|| {
        // (x1² - x2²)² + (x1 x2)².
        let aug = sum_of_squares(&[vec![1, 0, -1], vec![0, 1, 0]], m + 1);
        gap(&aug).is_zero()
    });
    let value_at_ones = coeffs.iter().fold(Q::zero(), |a, &c| a + c);
    NonCdAnalysis {
        k,
        m,
        identity_holds: identity_gap.is_zero(),
        identity_max_gap: to_f64(identity_gap),
        augmented_certificate_holds,
        value_at_ones: to_f64(value_at_ones),
        sos_claim_mismatch: value_at_ones.is_negative(),
        obstruction: cd_obstruction(fam),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k3_identity_is_exact() {
        let a = analyze_noncd(&noncd_family(3).unwrap());
        assert!(a.identity_holds);
        assert_eq!(a.identity_max_gap, 0.0);
        assert_eq!(a.value_at_ones, 0.0);
        assert!(!a.sos_claim_mismatch);
        assert_eq!(a.augmented_certificate_holds, None);
    }

    #[test]
    fn k2_needs_the_extra_square() {
        let a = analyze_noncd(&noncd_family(2).unwrap());
        assert!(!a.identity_holds);
        // The single square gives -2 x1²x2² against -1.
        assert_eq!(a.identity_max_gap, 1.0);
        assert_eq!(a.augmented_certificate_holds, Some(true));
        assert_eq!(a.value_at_ones, 1.0);
    }

    #[test]
    fn k4_is_not_psd() {
        let fam = noncd_family(4).unwrap();
        let a = analyze_noncd(&fam);
        assert_eq!(a.value_at_ones, -1.0);
        assert!(a.sos_claim_mismatch);
        assert!(!a.identity_holds);
        assert_eq!(fam.tensor().eval(&[1.0, 1.0]).unwrap(), -1.0);
    }

    #[test]
    fn obstruction_is_exactly_minus_one() {
        for k in 2..=10 {
            let o = cd_obstruction(&noncd_family(k).unwrap());
            assert_eq!(o.coefficient, "-1", "k = {k}");
            assert!(o.holds);
        }
    }

    #[test]
    fn expanded_form_matches_family_shape() {
        for k in 2..=6 {
            let fam = noncd_family(k).unwrap();
            let f = fam.tensor().expand().unwrap();
            let m = fam.m as u32;
            assert_eq!(f.coeff(&[m, 0]), 1.0);
            assert_eq!(f.coeff(&[0, m]), 1.0);
            for l in 1..k as u32 {
                assert!((f.coeff(&[m - 2 * l, 2 * l]) + 1.0).abs() < 1e-12);
            }
            assert_eq!(f.len(), k + 1);
        }
    }

    #[test]
    fn rejects_small_k() {
        assert!(noncd_family(1).is_err());
    }
}
