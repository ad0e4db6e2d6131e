//! Sparse homogeneous polynomials keyed by dense exponent tuples.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A homogeneous form in `n_vars` variables. Exponent tuples are stored densely
/// (length `n_vars`) in lexicographic order; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseForm {
    n_vars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl SparseForm {
    pub fn zero(n_vars: usize, degree: u32) -> Self {
        Self { n_vars, degree, terms: BTreeMap::new() }
    }

    /// Builds a form from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(n_vars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut form = Self::zero(n_vars, degree);
        for (exps, c) in terms {
            form.add_term(exps, c)?;
        }
        Ok(form)
    }

    /// `coeff · x_var^degree`.
    pub fn monomial_power(n_vars: usize, var: usize, degree: u32, coeff: f64) -> Self {
        let mut exps = vec![0; n_vars];
        exps[var] = degree;
        let mut form = Self::zero(n_vars, degree);
        form.add_term(exps, coeff).expect("valid exponent tuple");
        form
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> f64 {
        self.terms.get(exps).copied().unwrap_or(0.0)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: f64) -> Result<()> {
        if exps.len() != self.n_vars {
            return domain(format!(
                "exponent tuple {exps:?} has length {}, expected {}",
                exps.len(),
                self.n_vars
            ));
        }
        let deg: u32 = exps.iter().sum();
        if deg != self.degree {
            return domain(format!("exponent tuple {exps:?} has degree {deg}, expected {}", self.degree));
        }
        if c == 0.0 {
            return Ok(());
        }
        let entry = self.terms.entry(exps).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.retain(|_, v| *v != 0.0);
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_vars {
            return domain(format!("point has dimension {}, form has {} variables", x.len(), self.n_vars));
        }
        Ok(self.terms.iter().map(|(e, &c)| c * monomial_value(e, x)).sum())
    }

    /// Analytic gradient at `x`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_vars {
            return domain(format!("point has dimension {}, form has {} variables", x.len(), self.n_vars));
        }
        let mut g = vec![0.0; self.n_vars];
        for (e, &c) in &self.terms {
            for (i, gi) in g.iter_mut().enumerate() {
                if e[i] == 0 {
                    continue;
                }
                let mut term = c * e[i] as f64;
                for (j, (&ej, &xj)) in e.iter().zip(x).enumerate() {
                    let p = if j == i { ej - 1 } else { ej };
                    term *= xj.powi(p as i32);
                }
                *gi += term;
            }
        }
        Ok(g)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero(self.n_vars, self.degree);
        if s == 0.0 {
            return out;
        }
        for (e, &c) in &self.terms {
            let v = c * s;
            if v != 0.0 {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n_vars != other.n_vars {
            return domain(format!("variable counts differ: {} vs {}", self.n_vars, other.n_vars));
        }
        let mut out = Self::zero(self.n_vars, self.degree + other.degree);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *out.terms.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        out.terms.retain(|_, v| *v != 0.0);
        Ok(out)
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("a form is compatible with itself")
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    /// Largest coefficientwise absolute difference over the union of supports.
    pub fn max_discrepancy(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let mut worst: f64 = 0.0;
        for (e, &c) in &self.terms {
            worst = worst.max((c - other.coeff(e)).abs());
        }
        for (e, &c) in &other.terms {
            if !self.terms.contains_key(e) {
                worst = worst.max(c.abs());
            }
        }
        Ok(worst)
    }

    /// Restriction to a subset of variables (others set to zero), re-indexed
    /// in the order given.
    pub fn restrict(&self, vars: &[usize]) -> Self {
        let mut out = Self::zero(vars.len(), self.degree);
        for (e, &c) in &self.terms {
            let kept: u32 = vars.iter().map(|&v| e[v]).sum();
            if kept != self.degree {
                continue;
            }
            let sub: Vec<u32> = vars.iter().map(|&v| e[v]).collect();
            out.add_term(sub, c).expect("restricted tuple keeps the degree");
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars || self.degree != other.degree {
            return domain(format!(
                "incompatible forms: ({} vars, degree {}) vs ({} vars, degree {})",
                self.n_vars, self.degree, other.n_vars, other.degree
            ));
        }
        Ok(())
    }
}

pub(crate) fn monomial_value(e: &[u32], x: &[f64]) -> f64 {
    e.iter().zip(x).map(|(&p, &xi)| xi.powi(p as i32)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary(terms: &[((u32, u32), f64)]) -> SparseForm {
        let deg = terms[0].0 .0 + terms[0].0 .1;
        SparseForm::from_terms(2, deg, terms.iter().map(|&((a, b), c)| (vec![a, b], c))).unwrap()
    }

    #[test]
    fn canonical_form_drops_cancelled_terms() {
        let mut f = binary(&[((2, 0), 1.0), ((1, 1), 2.0)]);
        f.add_term(vec![1, 1], -2.0).unwrap();
        assert_eq!(f.len(), 1);
        assert!(f.terms().all(|(_, c)| c != 0.0));
    }

    #[test]
    fn rejects_wrong_degree_and_length() {
        let mut f = SparseForm::zero(2, 3);
        assert!(f.add_term(vec![1, 1], 1.0).is_err());
        assert!(f.add_term(vec![1, 1, 1], 1.0).is_err());
        assert!(f.eval(&[1.0]).is_err());
    }

    #[test]
    fn square_expands_symbolically() {
        // (x1^3 - x1 x2^2)^2 = x1^6 - 2 x1^4 x2^2 + x1^2 x2^4
        let g = binary(&[((3, 0), 1.0), ((1, 2), -1.0)]);
        let sq = g.square();
        let expected = binary(&[((6, 0), 1.0), ((4, 2), -2.0), ((2, 4), 1.0)]);
        assert_eq!(sq, expected);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let f = SparseForm::from_terms(
            3,
            4,
            vec![(vec![4, 0, 0], 1.5), (vec![1, 2, 1], -3.0), (vec![0, 1, 3], 2.0)],
        )
        .unwrap();
        let x = [0.3, -1.2, 0.7];
        let g = f.gradient(&x).unwrap();
        let h = 1e-6;
        for i in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let fd = (f.eval(&xp).unwrap() - f.eval(&xm).unwrap()) / (2.0 * h);
            assert!((fd - g[i]).abs() <= 1e-6 * (1.0 + fd.abs()), "component {i}: {fd} vs {}", g[i]);
        }
    }

    #[test]
    fn restrict_keeps_only_terms_in_subspace() {
        let f = SparseForm::from_terms(
            3,
            2,
            vec![(vec![2, 0, 0], 1.0), (vec![1, 1, 0], 2.0), (vec![0, 1, 1], 5.0)],
        )
        .unwrap();
        let r = f.restrict(&[0, 1]);
        assert_eq!(r.n_vars(), 2);
        assert_eq!(r.coeff(&[2, 0]), 1.0);
        assert_eq!(r.coeff(&[1, 1]), 2.0);
        assert_eq!(r.len(), 2);
    }
}
