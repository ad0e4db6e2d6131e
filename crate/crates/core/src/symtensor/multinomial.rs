//! Exact integer binomial and multinomial coefficients.

use crate::error::{HankelError, Result};

/// Cache of binomial coefficients `C(a, b)` for `a <= max_order`, from which
/// multinomials `m! / (t_1! ... t_k!)` are assembled as products of binomials.
#[derive(Debug, Clone)]
pub struct MultinomialTable {
    max_order: usize,
    // Row-major Pascal triangle, row a has a + 1 entries.
    rows: Vec<Vec<u128>>,
}

impl MultinomialTable {
    /// Largest order for which every binomial fits in a `u128`.
    pub const MAX_SUPPORTED_ORDER: usize = 127;

    pub fn new(max_order: usize) -> Result<Self> {
        if max_order > Self::MAX_SUPPORTED_ORDER {
            return Err(HankelError::Resource(format!(
                "multinomial table order {max_order} exceeds {}",
                Self::MAX_SUPPORTED_ORDER
            )));
        }
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(max_order + 1);
        for a in 0..=max_order {
            let mut row = vec![1u128; a + 1];
            for b in 1..a {
                row[b] = rows[a - 1][b - 1] + rows[a - 1][b];
            }
            rows.push(row);
        }
        Ok(Self { max_order, rows })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// `C(a, b)`; zero when `b > a`.
    pub fn binomial(&self, a: usize, b: usize) -> u128 {
        assert!(a <= self.max_order, "binomial row {a} beyond table order {}", self.max_order);
        if b > a {
            0
        } else {
            self.rows[a][b]
        }
    }

    /// Exact multinomial `(Σ parts)! / Π parts_i!`, or `None` on `u128` overflow.
    pub fn multinomial(&self, parts: &[u32]) -> Option<u128> {
        let total: usize = parts.iter().map(|&p| p as usize).sum();
        assert!(total <= self.max_order, "multinomial order {total} beyond table order {}", self.max_order);
        let mut remaining = total;
        let mut acc: u128 = 1;
        for &p in parts {
            acc = acc.checked_mul(self.binomial(remaining, p as usize))?;
            remaining -= p as usize;
        }
        Some(acc)
    }

    /// Multinomial as a double. Exact whenever the integer is below 2^53.
    pub fn multinomial_f64(&self, parts: &[u32]) -> f64 {
        match self.multinomial(parts) {
            Some(c) => c as f64,
            None => {
                // Fall back to a product of doubles; only reachable for very large orders.
                let mut remaining = parts.iter().map(|&p| p as usize).sum::<usize>();
                let mut acc = 1.0;
                for &p in parts {
                    acc *= self.binomial(remaining, p as usize) as f64;
                    remaining -= p as usize;
                }
                acc
            }
        }
    }
}

/// Binomial coefficient as a double, computed multiplicatively. Exact for the
/// small arguments used throughout the crate.
pub fn binomial_f64(a: u64, b: u64) -> f64 {
    if b > a {
        return 0.0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: multinomial(t) = Σ_j multinomial(t - e_j) over t_j > 0.
    fn pascal_multinomial(parts: &mut Vec<u32>) -> u128 {
        if parts.iter().all(|&p| p == 0) {
            return 1;
        }
        let mut acc = 0;
        for j in 0..parts.len() {
            if parts[j] > 0 {
                parts[j] -= 1;
                acc += pascal_multinomial(parts);
                parts[j] += 1;
            }
        }
        acc
    }

    fn compositions(total: u32, k: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == k - 1 {
            let used: u32 = prefix.iter().sum();
            let mut c = prefix.clone();
            c.push(total - used);
            out.push(c);
            return;
        }
        let used: u32 = prefix.iter().sum();
        for t in 0..=(total - used) {
            prefix.push(t);
            compositions(total, k, prefix, out);
            prefix.pop();
        }
    }

    #[test]
    fn matches_pascal_recursion_up_to_order_12() {
        let table = MultinomialTable::new(12).unwrap();
        for m in 0..=12u32 {
            for k in 1..=3usize {
                let mut all = Vec::new();
                compositions(m, k, &mut Vec::new(), &mut all);
                for mut parts in all {
                    let expected = pascal_multinomial(&mut parts);
                    assert_eq!(table.multinomial(&parts), Some(expected), "parts {parts:?}");
                }
            }
        }
    }

    #[test]
    fn sextic_truncated_weights() {
        let table = MultinomialTable::new(6).unwrap();
        assert_eq!(table.multinomial(&[1, 4, 1]), Some(30));
        assert_eq!(table.multinomial(&[2, 2, 2]), Some(90));
        assert_eq!(table.multinomial(&[3, 0, 3]), Some(20));
        assert_eq!(binomial_f64(6, 3), 20.0);
        assert_eq!(binomial_f64(10, 2), 45.0);
    }

    #[test]
    fn order_cap_is_enforced() {
        assert!(MultinomialTable::new(200).is_err());
    }
}
