//! Named tensor families and their construction from command-line or file
//! parameters.

use clap::Args;
use hankelkit_core::classes::{build_quasi_truncated, build_truncated, QuasiTruncatedSpec, TruncatedSpec};
use hankelkit_core::decompositions::{
    analyze_noncd, moments_from_function, noncd_family, vandermonde_decompose, GeneratingFunction, MomentSpec,
    NonCdAnalysis,
};
use hankelkit_core::GeneratingVector;
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

pub const FAMILY_NAMES: [&str; 5] = ["truncated", "quasi-truncated", "noncd", "moment", "vandermonde"];

/// Loose parameter bag shared by `family NAME --<param>` and the
/// `{"family": ..., "params": {...}}` input document. Which fields are
/// required depends on the family.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    /// Tensor order.
    #[arg(long)]
    pub m: Option<usize>,
    /// Tensor dimension.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v1: Option<f64>,
    /// Entry at the middle index (n-1)m/2.
    #[arg(long, allow_negative_numbers = true)]
    pub vmid: Option<f64>,
    /// Entry at index (n-1)m - 1.
    #[arg(long, allow_negative_numbers = true)]
    pub vend1: Option<f64>,
    /// Entry at the last index (n-1)m.
    #[arg(long, allow_negative_numbers = true)]
    pub vend: Option<f64>,
    /// Parameter of the non-decomposable family.
    #[arg(long)]
    pub k: Option<usize>,
    /// Generating function: uniform01, gaussian or step:a,b,height.
    #[arg(long)]
    pub h: Option<String>,
    /// Integration interval for the moment family, as `a,b`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub support: Option<Vec<f64>>,
    /// Gauss-Legendre node count for the moment family.
    #[arg(long)]
    pub quadrature_nodes: Option<usize>,
    /// Vandermonde nodes, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nodes: Option<Vec<f64>>,
    /// Vandermonde weights, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub weights: Option<Vec<f64>>,
}

/// A fully resolved family instance, echoed in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum FamilySpec {
    Truncated { m: usize, n: usize, v0: f64, vmid: f64, vend: f64 },
    QuasiTruncated { m: usize, n: usize, v0: f64, v1: f64, vmid: f64, vend1: f64, vend: f64 },
    Noncd { k: usize },
    Moment { h: String, m: usize, n: usize, support: [f64; 2], quadrature_nodes: usize },
    Vandermonde { m: usize, n: usize, nodes: Vec<f64>, weights: Vec<f64> },
}

/// Family-specific findings carried alongside the generic analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyRecord {
    Noncd { analysis: NonCdAnalysis },
    Moment { generating_function: String, values: Vec<f64> },
    Vandermonde {
        /// Largest error of re-decomposing the vector on default nodes.
        round_trip_error: Option<f64>,
        round_trip_note: Option<String>,
        all_weights_nonnegative: bool,
    },
}

fn need<T: Clone>(name: &str, field: &str, value: &Option<T>) -> CliResult<T> {
    value.clone().ok_or_else(|| CliError::Input(format!("family {name} needs --{field}")))
}

fn input_err(e: hankelkit_core::HankelError) -> CliError {
    CliError::Input(e.to_string())
}

impl FamilySpec {
    pub fn resolve(name: &str, p: &FamilyParams) -> CliResult<Self> {
        Ok(match name {
            "truncated" => FamilySpec::Truncated {
                m: need(name, "m", &p.m)?,
                n: p.n.unwrap_or(3),
                v0: need(name, "v0", &p.v0)?,
                vmid: need(name, "vmid", &p.vmid)?,
                vend: need(name, "vend", &p.vend)?,
            },
            "quasi-truncated" => FamilySpec::QuasiTruncated {
                m: need(name, "m", &p.m)?,
                n: p.n.unwrap_or(3),
                v0: need(name, "v0", &p.v0)?,
                v1: need(name, "v1", &p.v1)?,
                vmid: need(name, "vmid", &p.vmid)?,
                vend1: need(name, "vend1", &p.vend1)?,
                vend: need(name, "vend", &p.vend)?,
            },
            "noncd" => FamilySpec::Noncd { k: need(name, "k", &p.k)? },
            "moment" => {
                let h_name = need(name, "h", &p.h)?;
                let h = GeneratingFunction::parse(&h_name).map_err(input_err)?;
                let base = MomentSpec::builtin(h).map_err(input_err)?;
                let support = match &p.support {
                    Some(s) if s.len() == 2 => [s[0], s[1]],
                    Some(s) => return Err(CliError::Input(format!("--support needs two values, got {}", s.len()))),
                    None => [base.support.0, base.support.1],
                };
                FamilySpec::Moment {
                    h: h_name,
                    m: need(name, "m", &p.m)?,
                    n: need(name, "n", &p.n)?,
                    support,
                    quadrature_nodes: p.quadrature_nodes.unwrap_or(base.nodes),
                }
            }
            "vandermonde" => FamilySpec::Vandermonde {
                m: need(name, "m", &p.m)?,
                n: need(name, "n", &p.n)?,
                nodes: need(name, "nodes", &p.nodes)?,
                weights: need(name, "weights", &p.weights)?,
            },
            other => {
                return Err(CliError::Input(format!(
                    "unknown family {other:?}; expected one of {}",
                    FAMILY_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Truncated { .. } => "truncated",
            FamilySpec::QuasiTruncated { .. } => "quasi-truncated",
            FamilySpec::Noncd { .. } => "noncd",
            FamilySpec::Moment { .. } => "moment",
            FamilySpec::Vandermonde { .. } => "vandermonde",
        }
    }

    /// Builds the generating vector and any family-specific record.
    pub fn build(&self) -> CliResult<(GeneratingVector, Option<FamilyRecord>)> {
        match self {
            &FamilySpec::Truncated { m, n, v0, vmid, vend } => {
                let t = build_truncated(&TruncatedSpec::new(m, n, v0, vmid, vend)).map_err(input_err)?;
                Ok((t.generating_vector().clone(), None))
            }
            &FamilySpec::QuasiTruncated { m, n, v0, v1, vmid, vend1, vend } => {
                let spec = QuasiTruncatedSpec { m, n, v0, v1, vmid, vend1, vend };
                let t = build_quasi_truncated(&spec).map_err(input_err)?;
                Ok((t.generating_vector().clone(), None))
            }
            &FamilySpec::Noncd { k } => {
                let fam = noncd_family(k).map_err(input_err)?;
                let analysis = analyze_noncd(&fam);
                Ok((fam.gen.clone(), Some(FamilyRecord::Noncd { analysis })))
            }
            FamilySpec::Moment { h, m, n, support, quadrature_nodes } => {
                let func = GeneratingFunction::parse(h).map_err(input_err)?;
                let spec = MomentSpec { h: func.clone(), support: (support[0], support[1]), nodes: *quadrature_nodes };
                let gen = moments_from_function(&spec, *m, *n).map_err(input_err)?;
                let record = FamilyRecord::Moment { generating_function: func.name(), values: gen.values().to_vec() };
                Ok((gen, Some(record)))
            }
            FamilySpec::Vandermonde { m, n, nodes, weights } => {
                if nodes.len() != weights.len() || nodes.is_empty() {
                    return Err(CliError::Input(format!(
                        "vandermonde needs equally many nodes and weights (got {} and {})",
                        nodes.len(),
                        weights.len()
                    )));
                }
                if *n == 0 {
                    return Err(CliError::Input("dimension must be positive".into()));
                }
                let top = (n - 1) * m;
                let v: Vec<f64> = (0..=top)
                    .map(|k| nodes.iter().zip(weights).map(|(g, a)| a * g.powi(k as i32)).sum())
                    .collect();
                let gen = GeneratingVector::new(*m, *n, v).map_err(input_err)?;
                let (round_trip_error, round_trip_note) = match vandermonde_decompose(&gen, None) {
                    Ok(d) => (Some(d.max_reconstruction_error(&gen)), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                let record = FamilyRecord::Vandermonde {
                    round_trip_error,
                    round_trip_note,
                    all_weights_nonnegative: weights.iter().all(|&a| a >= 0.0),
                };
                Ok((gen, Some(record)))
            }
        }
    }
}
