//! The analysis report and its serialized form.

use std::collections::BTreeMap;

use hankelkit_core::symtensor::NecessaryCheck;
use hankelkit_core::{RefutationResult, Tri, Witness};
use serde::{Deserialize, Serialize};

use crate::family::{FamilyRecord, FamilySpec};

pub const SCHEMA: &str = "hankelkit/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub m: usize,
    pub n: usize,
    pub v: Vec<f64>,
    pub family: Option<FamilySpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub psd: Tri,
    pub sos: Tri,
    pub strong: Tri,
    pub pd: Tri,
    /// Some deciding inequality sits inside its tolerance band.
    pub boundary: bool,
}

/// One inequality that was evaluated, with the stage that evaluated it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiredCriterion {
    pub source: String,
    pub name: String,
    pub holds: bool,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub name: String,
    pub squares: usize,
    pub residuals: usize,
    pub min_agm_slack: Option<f64>,
    pub max_discrepancy: f64,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: String,
    pub tool_version: String,
    pub seed: u64,
    pub input: InputEcho,
    pub detected_family: Option<String>,
    pub verdicts: Verdicts,
    pub necessary: NecessaryCheck,
    pub criteria: Vec<FiredCriterion>,
    pub witnesses: Vec<Witness>,
    pub certificates: Vec<CertificateSummary>,
    pub refutation: Option<RefutationResult>,
    pub family_record: Option<FamilyRecord>,
    pub notes: Vec<String>,
    /// Wall-clock milliseconds per stage; the only nondeterministic field.
    pub timings_ms: BTreeMap<String, f64>,
}

fn tri(t: Tri) -> &'static str {
    match t {
        Tri::Yes => "yes",
        Tri::No => "no",
        Tri::Unknown => "unknown",
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report fields are serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// One-line summary printed by `--quiet`.
    pub fn verdict_line(&self) -> String {
        let v = &self.verdicts;
        let mut line = format!("psd={} sos={} strong={} pd={}", tri(v.psd), tri(v.sos), tri(v.strong), tri(v.pd));
        if v.boundary {
            line.push_str(" boundary");
        }
        line
    }

    /// The report with timings cleared, for determinism comparisons.
    pub fn without_timings(&self) -> Self {
        Self { timings_ms: BTreeMap::new(), ..self.clone() }
    }
}
