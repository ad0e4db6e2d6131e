//! Strong Hankel tensors from moments `v_k = ∫ t^k h(t) dt` of a nonnegative
//! function, by Gauss-Legendre quadrature on a finite support.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};
use crate::symtensor::GeneratingVector;

pub const DEFAULT_QUADRATURE_NODES: usize = 256;
pub const MIN_QUADRATURE_NODES: usize = 64;

/// Generating function `h`. Named variants carry their natural support.
#[derive(Clone)]
pub enum GeneratingFunction {
    /// Indicator of `[0, 1]`.
    Uniform01,
    /// `e^(-t²)`, truncated to `[-8, 8]`.
    Gaussian,
    /// `height` on `[a, b]`, zero elsewhere.
    Step { a: f64, b: f64, height: f64 },
    Custom { name: String, h: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

impl fmt::Debug for GeneratingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl GeneratingFunction {
    /// Parses `uniform01`, `gaussian` or `step:a,b,height`.
    pub fn parse(spec: &str) -> Result<Self> {
        match spec.trim() {
            "uniform01" => Ok(Self::Uniform01),
            "gaussian" => Ok(Self::Gaussian),
            s if s.starts_with("step:") => {
                let parts: Vec<&str> = s["step:".len()..].split(',').collect();
                let nums: Vec<f64> = parts.iter().filter_map(|p| p.trim().parse().ok()).collect();
                if parts.len() != 3 || nums.len() != 3 {
                    return domain(format!("step function must be 'step:a,b,height', got '{s}'"));
                }
                let (a, b, height) = (nums[0], nums[1], nums[2]);
                if !(a < b) || !a.is_finite() || !b.is_finite() || !height.is_finite() {
                    return domain(format!("step function needs finite a < b, got '{s}'"));
                }
                Ok(Self::Step { a, b, height })
            }
            other => domain(format!("unknown generating function '{other}' (uniform01, gaussian, step:a,b,height)")),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Uniform01 => "uniform01".into(),
            Self::Gaussian => "gaussian".into(),
            Self::Step { a, b, height } => format!("step:{a},{b},{height}"),
            Self::Custom { name, .. } => name.clone(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Uniform01 => {
                if (0.0..=1.0).contains(&t) {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Gaussian => (-t * t).exp(),
            Self::Step { a, b, height } => {
                if t >= *a && t <= *b {
                    *height
                } else {
                    0.0
                }
            }
            Self::Custom { h, .. } => h(t),
        }
    }

    pub fn natural_support(&self) -> Option<(f64, f64)> {
        match self {
            Self::Uniform01 => Some((0.0, 1.0)),
            Self::Gaussian => Some((-8.0, 8.0)),
            Self::Step { a, b, .. } => Some((*a, *b)),
            Self::Custom { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MomentSpec {
    pub h: GeneratingFunction,
    /// Finite integration interval; infinite supports must be truncated here.
    pub support: (f64, f64),
    pub nodes: usize,
}

impl MomentSpec {
    /// Named function on its natural support with the default node count.
    pub fn builtin(h: GeneratingFunction) -> Result<Self> {
        let Some(support) = h.natural_support() else {
            return domain("custom generating functions need an explicit support");
        };
        Ok(Self { h, support, nodes: DEFAULT_QUADRATURE_NODES })
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let nf = count as f64;
    for i in 0..count.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=count {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_count(x), p0 = P_(count-1)(x).
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[count - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[count - 1 - i] = w;
    }
    (nodes, weights)
}

/// `v_k = ∫ t^k h(t) dt` over the support for `k = 0..=(n-1)m`.
pub fn moments_from_function(spec: &MomentSpec, m: usize, n: usize) -> Result<GeneratingVector> {
    let (a, b) = spec.support;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return domain(format!("support must be a finite interval a < b, got [{a}, {b}]"));
    }
    if spec.nodes < MIN_QUADRATURE_NODES {
        return domain(format!("need at least {MIN_QUADRATURE_NODES} quadrature nodes, got {}", spec.nodes));
    }
    if m == 0 || n == 0 {
        return domain("order and dimension must be positive");
    }
    let top = (n - 1) * m;
    let (xs, ws) = gauss_legendre(spec.nodes);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut v = vec![0.0; top + 1];
    for (x, w) in xs.iter().zip(&ws) {
        let t = mid + half * x;
        let h = spec.h.eval(t);
        if !(h >= 0.0) {
            return domain(format!("h({t}) = {h} is negative or undefined at a quadrature node"));
        }
        let mut tk = w * half * h;
        for vk in v.iter_mut() {
            *vk += tk;
            tk *= t;
        }
    }
    GeneratingVector::new(m, n, v)
}
