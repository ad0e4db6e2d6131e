//! Univariate polynomials in ascending coefficient order, with real-root
//! isolation by Sturm sequences.

#[derive(Debug, Clone, PartialEq)]
pub struct UnivariatePoly {
    /// `coeffs[i]` multiplies `s^i`.
    pub coeffs: Vec<f64>,
}

impl UnivariatePoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.trim(0.0);
        p
    }

    /// Drops leading coefficients with magnitude at most `rel` times the largest.
    fn trim(&mut self, rel: f64) {
        let scale = self.coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        while let Some(&last) = self.coeffs.last() {
            if last.abs() <= rel * scale || last == 0.0 {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| i as f64 * c).collect())
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()))
    }

    fn normalized(mut self) -> Self {
        let s = self.max_abs();
        if s > 0.0 {
            for c in &mut self.coeffs {
                *c /= s;
            }
        }
        self
    }

    /// Remainder of `self` divided by `d`.
    fn rem(&self, d: &Self) -> Self {
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let lead = d.coeffs[dd];
        while r.len() > dd {
            let k = r.len() - 1;
            let q = r[k] / lead;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[k - dd + j] -= q * dc;
            }
            r.pop();
        }
        Self { coeffs: r }
    }
}

/// Sturm chain of `p`; remainders below `1e-12` of the chain scale count as zero.
fn sturm_chain(p: &UnivariatePoly) -> Vec<UnivariatePoly> {
    let mut chain = vec![p.clone().normalized()];
    let d = p.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d.normalized());
    loop {
        let k = chain.len();
        let mut r = chain[k - 2].rem(&chain[k - 1]);
        r.trim(1e-12);
        if r.is_zero() {
            break;
        }
        for c in &mut r.coeffs {
            *c = -*c;
        }
        chain.push(r.normalized());
    }
    chain
}

fn sign_changes(chain: &[UnivariatePoly], s: f64) -> usize {
    let mut changes = 0;
    let mut last = 0.0f64;
    for p in chain {
        let v = p.eval(s);
        if v != 0.0 {
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                changes += 1;
            }
            last = v;
        }
    }
    changes
}

/// Approximate distinct real roots of `p` in `[a, b]`, each located to width
/// `tol`. Roots are isolated by Sturm counts and refined by bisection.
pub fn real_roots_in(p: &UnivariatePoly, a: f64, b: f64, tol: f64) -> Vec<f64> {
    if p.degree().map_or(true, |d| d == 0) {
        return Vec::new();
    }
    let chain = sturm_chain(p);
    let count = |x: f64, y: f64| sign_changes(&chain, x).saturating_sub(sign_changes(&chain, y));
    // Sign counts are meaningless at a root of p (every chain member may
    // vanish there), so exact roots are recorded and stepped over.
    let step = tol / 4.0;
    let mut roots = Vec::new();
    // Widened slightly so roots sitting on an endpoint are strictly inside.
    let (lo, hi) = (a, b);
    let pad = 1e-9 * (b - a);
    let (mut a, mut b) = (a - pad, b + pad);
    if p.eval(a) == 0.0 {
        roots.push(a);
        a += step;
    }
    if p.eval(b) == 0.0 {
        roots.push(b);
        b -= step;
    }
    let mut stack = if a < b { vec![(a, b, count(a, b))] } else { vec![] };
    while let Some((x, y, k)) = stack.pop() {
        if k == 0 {
            continue;
        }
        if y - x <= tol {
            roots.push(0.5 * (x + y));
            continue;
        }
        let mid = 0.5 * (x + y);
        let (left_end, right_start) = if p.eval(mid) == 0.0 {
            roots.push(mid);
            (mid - step, mid + step)
        } else {
            (mid, mid)
        };
        if x < left_end {
            stack.push((x, left_end, count(x, left_end)));
        }
        if right_start < y {
            stack.push((right_start, y, count(right_start, y)));
        }
    }
    for r in roots.iter_mut() {
        *r = r.clamp(lo, hi);
    }
    roots.sort_by(|x, y| x.total_cmp(y));
    roots.dedup_by(|x, y| (*x - *y).abs() <= tol);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(roots: &[f64]) -> UnivariatePoly {
        let mut c = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= r * a;
            }
            c = next;
        }
        UnivariatePoly::new(c)
    }

    #[test]
    fn finds_simple_roots() {
        let p = from_roots(&[-0.7, 0.1, 0.5]);
        let r = real_roots_in(&p, -1.0, 1.0, 1e-12);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([-0.7, 0.1, 0.5]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn finds_multiple_roots_once() {
        // s^4 (s + 0.25): the quadruple root at zero has no sign change.
        let p = UnivariatePoly::new(vec![0.0, 0.0, 0.0, 0.0, 0.25, 1.0]);
        let r = real_roots_in(&p, -1.0, 1.0, 1e-12);
        assert!(r.iter().any(|x| x.abs() < 1e-9));
        assert!(r.iter().any(|x| (x + 0.25).abs() < 1e-9));
    }

    #[test]
    fn root_at_the_first_split_point() {
        // 3 s^4 (s² + 6 s - 5): splitting [-1, 1] lands on the quadruple root.
        let p = UnivariatePoly::new(vec![0.0, 0.0, 0.0, 0.0, -15.0, 18.0, 3.0]);
        let r = real_roots_in(&p, -1.0, 1.0, 1e-12);
        assert_eq!(r.len(), 2, "{r:?}");
        assert!(r[0].abs() < 1e-12);
        assert!((r[1] - (14f64.sqrt() - 3.0)).abs() < 1e-10);
    }

    #[test]
    fn roots_at_the_endpoints() {
        let p = from_roots(&[-1.0, 0.3, 1.0]);
        let r = real_roots_in(&p, -1.0, 1.0, 1e-12);
        assert_eq!(r.len(), 3, "{r:?}");
    }

    #[test]
    fn no_roots_for_positive_polynomial() {
        let p = UnivariatePoly::new(vec![1.0, 0.0, 1.0]);
        assert!(real_roots_in(&p, -1.0, 1.0, 1e-12).is_empty());
    }

    #[test]
    fn derivative_and_eval() {
        let p = UnivariatePoly::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(p.eval(2.0), 17.0);
        assert_eq!(p.derivative().coeffs, vec![2.0, 6.0]);
        assert_eq!(UnivariatePoly::new(vec![0.0, 0.0]).degree(), None);
    }
}
