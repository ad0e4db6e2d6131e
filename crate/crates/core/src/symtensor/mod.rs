//! Hankel tensors defined by a generating vector, and their homogeneous forms.
//!
//! A Hankel tensor of order `m` and dimension `n` has entries
//! `a[i_1..i_m] = v[i_1 + ... + i_m - m]` (1-based indices), so the whole tensor
//! is carried by the `(n - 1) m + 1` numbers of its generating vector. Its form
//! `f(x) = Σ a[i_1..i_m] x_{i_1} ... x_{i_m}` groups into
//! `Σ_e multinomial(e) · v[Σ_i (i - 1) e_i] · x^e` over exponent tuples `e`.

mod form;
mod multinomial;

pub use form::SparseForm;
pub use multinomial::{binomial_f64, MultinomialTable};

use serde::{Deserialize, Serialize};

use crate::error::{domain, HankelError, Result};

/// Default cap on the number of degree-`m` monomials expanded in memory.
pub const DEFAULT_MONOMIAL_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratingVector {
    m: usize,
    n: usize,
    v: Vec<f64>,
}

impl GeneratingVector {
    pub fn new(m: usize, n: usize, v: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return domain(format!("order and dimension must be positive (m = {m}, n = {n})"));
        }
        let expected = (n - 1) * m + 1;
        if v.len() != expected {
            return domain(format!(
                "generating vector for m = {m}, n = {n} must have length {expected}, got {}",
                v.len()
            ));
        }
        if let Some(bad) = v.iter().position(|x| !x.is_finite()) {
            return domain(format!("generating vector entry v{bad} is not finite"));
        }
        Ok(Self { m, n, v })
    }

    /// Vector with only the listed `(index, value)` entries nonzero.
    pub fn sparse(m: usize, n: usize, entries: &[(usize, f64)]) -> Result<Self> {
        let len = (n.max(1) - 1) * m + 1;
        let mut v = vec![0.0; len];
        for &(k, val) in entries {
            if k >= len {
                return domain(format!("index {k} outside generating vector of length {len}"));
            }
            v[k] = val;
        }
        Self::new(m, n, v)
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    /// `(n - 1) m`, the largest index.
    pub fn top_index(&self) -> usize {
        (self.n - 1) * self.m
    }

    pub fn scale(&self) -> f64 {
        self.v.iter().fold(0.0, |a, x| a.max(x.abs()))
    }
}

/// Outcome of the necessary condition `v[(i-1) m] >= 0` for every `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NecessaryCheck {
    Pass,
    /// First offending 1-based index `i` and the negative diagonal entry.
    Fail { index: usize, value: f64 },
}

impl NecessaryCheck {
    pub fn passed(&self) -> bool {
        matches!(self, NecessaryCheck::Pass)
    }
}

/// Which evaluation route `eval` took.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalStrategy {
    GroupedExpansion,
    IndexLoop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HankelTensor {
    gen: GeneratingVector,
}

impl HankelTensor {
    pub fn new(gen: GeneratingVector) -> Self {
        Self { gen }
    }

    pub fn from_values(m: usize, n: usize, v: Vec<f64>) -> Result<Self> {
        GeneratingVector::new(m, n, v).map(Self::new)
    }

    pub fn generating_vector(&self) -> &GeneratingVector {
        &self.gen
    }

    pub fn order(&self) -> usize {
        self.gen.m
    }

    pub fn dim(&self) -> usize {
        self.gen.n
    }

    pub fn v(&self, k: usize) -> f64 {
        self.gen.v[k]
    }

    /// Entry at 1-based `indices`.
    pub fn entry(&self, indices: &[usize]) -> Result<f64> {
        if indices.len() != self.gen.m {
            return domain(format!("expected {} indices, got {}", self.gen.m, indices.len()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > self.gen.n) {
            return domain(format!("index {bad} outside 1..={}", self.gen.n));
        }
        let sum: usize = indices.iter().sum();
        Ok(self.gen.v[sum - self.gen.m])
    }

    /// Number of degree-`m` monomials in `n` variables, saturating.
    pub fn monomial_count(&self) -> usize {
        let (m, n) = (self.gen.m as u128, self.gen.n as u128);
        // C(m + n - 1, n - 1)
        let k = (n - 1).min(m);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (m + n - 1 - i) / (i + 1);
            if acc > usize::MAX as u128 {
                return usize::MAX;
            }
        }
        acc as usize
    }

    /// `f(x)` with the default monomial cap.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.eval_with_strategy(x, DEFAULT_MONOMIAL_CAP).map(|(v, _)| v)
    }

    /// `f(x)` via the grouped multinomial expansion when the monomial count is
    /// within `cap`, otherwise via the `m`-fold index loop.
    pub fn eval_with_strategy(&self, x: &[f64], cap: usize) -> Result<(f64, EvalStrategy)> {
        self.check_point(x)?;
        if self.monomial_count() <= cap {
            Ok((self.eval_grouped(x), EvalStrategy::GroupedExpansion))
        } else {
            Ok((self.eval_index_loop(x)?, EvalStrategy::IndexLoop))
        }
    }

    fn eval_grouped(&self, x: &[f64]) -> f64 {
        let m = self.gen.m;
        let table = MultinomialTable::new(m.min(MultinomialTable::MAX_SUPPORTED_ORDER))
            .expect("order within table bound");
        let mut total = 0.0;
        for_each_exponent(self.gen.n, m as u32, |e| {
            let k: usize = e.iter().enumerate().map(|(i, &ei)| i * ei as usize).sum();
            let vk = self.gen.v[k];
            if vk != 0.0 {
                total += table.multinomial_f64(e) * vk * form::monomial_value(e, x);
            }
        });
        total
    }

    /// Plain sum over all `n^m` index tuples.
    pub fn eval_index_loop(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let (m, n) = (self.gen.m, self.gen.n);
        let mut idx = vec![0usize; m];
        let mut total = 0.0;
        loop {
            let sum: usize = idx.iter().sum();
            let vk = self.gen.v[sum];
            if vk != 0.0 {
                total += vk * idx.iter().map(|&i| x[i]).product::<f64>();
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == m {
                    return Ok(total);
                }
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Value and analytic gradient through the identity
    /// `f(x) = Σ_k v_k [t^k] p(t)^m` with `p(t) = Σ_i x_i t^(i-1)`.
    pub fn value_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check_point(x)?;
        let m = self.gen.m;
        let pm1 = poly_power(x, m - 1);
        let pm = poly_mul(&pm1, x);
        let value = pm.iter().zip(&self.gen.v).map(|(c, v)| c * v).sum();
        let grad = (0..self.gen.n)
            .map(|i| {
                let s: f64 = pm1.iter().enumerate().map(|(j, c)| c * self.gen.v[j + i]).sum();
                m as f64 * s
            })
            .collect();
        Ok((value, grad))
    }

    pub fn expand(&self) -> Result<SparseForm> {
        self.expand_with_cap(DEFAULT_MONOMIAL_CAP)
    }

    /// Coefficient of `x^e` is `multinomial(e) · v[Σ (i - 1) e_i]`.
    pub fn expand_with_cap(&self, cap: usize) -> Result<SparseForm> {
        let count = self.monomial_count();
        if count > cap {
            return Err(HankelError::Resource(format!(
                "{count} monomials of degree {} in {} variables exceed the cap of {cap}",
                self.gen.m, self.gen.n
            )));
        }
        let m = self.gen.m;
        let table = MultinomialTable::new(m.min(MultinomialTable::MAX_SUPPORTED_ORDER))
            .map_err(|e| HankelError::Resource(e.to_string()))?;
        let mut form = SparseForm::zero(self.gen.n, m as u32);
        let mut err = None;
        for_each_exponent(self.gen.n, m as u32, |e| {
            let k: usize = e.iter().enumerate().map(|(i, &ei)| i * ei as usize).sum();
            let vk = self.gen.v[k];
            if vk != 0.0 {
                if let Err(e) = form.add_term(e.to_vec(), table.multinomial_f64(e) * vk) {
                    err = Some(e);
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(form),
        }
    }

    /// Necessary PSD condition: every `v[(i - 1) m]` is nonnegative.
    pub fn check_necessary_psd(&self) -> NecessaryCheck {
        for i in 1..=self.gen.n {
            let value = self.gen.v[(i - 1) * self.gen.m];
            if value < 0.0 {
                return NecessaryCheck::Fail { index: i, value };
            }
        }
        NecessaryCheck::Pass
    }

    pub fn is_zero(&self) -> bool {
        self.gen.v.iter().all(|&x| x == 0.0)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.gen.n {
            return domain(format!("point has dimension {}, tensor has dimension {}", x.len(), self.gen.n));
        }
        Ok(())
    }
}

/// Visits every exponent tuple of length `n` summing to `degree`, in
/// lexicographic order.
pub fn for_each_exponent(n: usize, degree: u32, mut visit: impl FnMut(&[u32])) {
    let mut e = vec![0u32; n];
    fn rec(pos: usize, left: u32, e: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        let n = e.len();
        if pos == n - 1 {
            e[pos] = left;
            visit(e);
            return;
        }
        for t in 0..=left {
            e[pos] = t;
            rec(pos + 1, left - t, e, visit);
        }
        e[pos] = 0;
    }
    rec(0, degree, &mut e, &mut visit);
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_power(p: &[f64], e: usize) -> Vec<f64> {
    let mut acc = vec![1.0];
    for _ in 0..e {
        acc = poly_mul(&acc, p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hilbert(m: usize, n: usize) -> HankelTensor {
        let len = (n - 1) * m + 1;
        HankelTensor::from_values(m, n, (0..len).map(|k| 1.0 / (k as f64 + 1.0)).collect()).unwrap()
    }

    fn sextic_truncated(v0: f64, v6: f64, v12: f64) -> HankelTensor {
        HankelTensor::new(GeneratingVector::sparse(6, 3, &[(0, v0), (6, v6), (12, v12)]).unwrap())
    }

    #[test]
    fn generating_vector_length_is_checked() {
        assert!(GeneratingVector::new(6, 3, vec![0.0; 12]).is_err());
        assert!(GeneratingVector::new(0, 3, vec![0.0]).is_err());
        assert!(GeneratingVector::new(2, 2, vec![1.0, f64::NAN, 0.0]).is_err());
        assert!(GeneratingVector::new(6, 3, vec![0.0; 13]).is_ok());
    }

    #[test]
    fn entry_examples() {
        let h = hilbert(2, 2);
        assert_eq!(h.entry(&[1, 2]).unwrap(), 0.5);
        assert_eq!(h.entry(&[1, 1]).unwrap(), 1.0);
        let t = HankelTensor::new(
            GeneratingVector::sparse(6, 3, &[(0, 1.0), (6, 2.0), (12, 3.0)]).unwrap(),
        );
        assert_eq!(t.entry(&[2, 2, 2, 2, 2, 2]).unwrap(), 2.0);
        assert!(t.entry(&[2, 2, 2, 2, 2, 4]).is_err());
        assert!(t.entry(&[0, 2, 2, 2, 2, 2]).is_err());
        assert!(t.entry(&[2, 2]).is_err());
    }

    #[test]
    fn eval_examples() {
        let t = sextic_truncated(1.0, 1.0, 1.0);
        assert_eq!(t.eval(&[1.0, 1.0, 1.0]).unwrap(), 143.0);
        assert_eq!(t.eval_index_loop(&[1.0, 1.0, 1.0]).unwrap(), 143.0);
        let h = hilbert(2, 2);
        assert!((h.eval(&[1.0, 1.0]).unwrap() - 7.0 / 3.0).abs() < 1e-15);
        assert_eq!(h.eval(&[1.0, 0.0]).unwrap(), 1.0);
        assert!(h.eval(&[1.0]).is_err());
    }

    #[test]
    fn expand_sextic_middle_term() {
        let f = sextic_truncated(0.0, 1.0, 0.0).expand().unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.coeff(&[0, 6, 0]), 1.0);
        assert_eq!(f.coeff(&[1, 4, 1]), 30.0);
        assert_eq!(f.coeff(&[2, 2, 2]), 90.0);
        assert_eq!(f.coeff(&[3, 0, 3]), 20.0);
    }

    #[test]
    fn expand_quartic_binary() {
        let t = HankelTensor::from_values(4, 2, vec![1.0, 0.0, -1.0 / 6.0, 0.0, 1.0]).unwrap();
        let f = t.expand().unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.coeff(&[4, 0]), 1.0);
        assert!((f.coeff(&[2, 2]) + 1.0).abs() < 1e-15);
        assert_eq!(f.coeff(&[0, 4]), 1.0);
    }

    #[test]
    fn zero_vector_expands_to_empty_form() {
        let t = HankelTensor::from_values(4, 3, vec![0.0; 9]).unwrap();
        assert!(t.expand().unwrap().is_empty());
        assert!(t.is_zero());
    }

    #[test]
    fn expansion_cap_is_a_resource_error() {
        let t = hilbert(6, 3);
        assert!(matches!(t.expand_with_cap(10), Err(HankelError::Resource(_))));
        let (_, strategy) = t.eval_with_strategy(&[1.0, 2.0, 3.0], 10).unwrap();
        assert_eq!(strategy, EvalStrategy::IndexLoop);
        let (_, strategy) = t.eval_with_strategy(&[1.0, 2.0, 3.0], 1000).unwrap();
        assert_eq!(strategy, EvalStrategy::GroupedExpansion);
    }

    #[test]
    fn necessary_condition_reports_first_offender() {
        assert!(sextic_truncated(1.0, 1.0, 1.0).check_necessary_psd().passed());
        assert_eq!(
            sextic_truncated(-1.0, 1.0, 1.0).check_necessary_psd(),
            NecessaryCheck::Fail { index: 1, value: -1.0 }
        );
        assert_eq!(
            sextic_truncated(1.0, -5.0, 1.0).check_necessary_psd(),
            NecessaryCheck::Fail { index: 2, value: -5.0 }
        );
    }

    #[test]
    fn monomial_count_matches_enumeration() {
        for (m, n) in [(1, 1), (4, 2), (6, 3), (5, 4)] {
            let t = HankelTensor::from_values(m, n, vec![1.0; (n - 1) * m + 1]).unwrap();
            let mut count = 0;
            for_each_exponent(n, m as u32, |_| count += 1);
            assert_eq!(t.monomial_count(), count);
        }
    }
}
