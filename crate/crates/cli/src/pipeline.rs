//! The analysis pipeline behind `analyze` and `family`: runs every applicable
//! test, merges their verdicts and refuses to emit contradictory ones.

use std::collections::BTreeMap;
use std::time::Instant;

use hankelkit_core::certificates::{
    build_sextic_decomposition, build_strong_hankel_squares, build_truncated_bound_decomposition, WeightedSquare,
};
use hankelkit_core::classes::{
    quasi_midzero_dichotomy, quasi_sextic_necessary, quasi_sextic_sufficient, sextic_truncated_classify,
    structured_probes, truncated_sos_bound, truncated_strong_dichotomy, QuasiSextic, QuasiTruncatedSpec,
    TruncatedSpec,
};
use hankelkit_core::{
    binary_psd_oracle, is_strong_hankel, refute_psd, verify_decomposition, ClassificationVerdict, GeneratingVector,
    HankelTensor, RefuteOptions, SparseForm, StructuredDecomposition, Tri, Witness, WitnessKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::family::{FamilyRecord, FamilySpec};
use crate::report::{AnalysisReport, CertificateSummary, FiredCriterion, InputEcho, Verdicts, SCHEMA, TOOL_VERSION};
use crate::{CliError, CliResult};

/// Relative band for deciding positive definiteness from a sampled minimum.
const PD_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzeOptions {
    pub refute: bool,
    pub starts: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Test hook: perturb every certificate before verifying it.
    pub corrupt_certificates: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        let r = RefuteOptions::default();
        Self { refute: false, starts: r.starts, iterations: r.iterations, seed: r.seed, corrupt_certificates: false }
    }
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Psd,
    Sos,
    Strong,
    Pd,
}

struct Collector<'a> {
    t: &'a HankelTensor,
    verdicts: Verdicts,
    criteria: Vec<FiredCriterion>,
    witnesses: Vec<Witness>,
    certificates: Vec<CertificateSummary>,
    notes: Vec<String>,
    corrupt: bool,
}

fn tri_name(t: Tri) -> &'static str {
    match t {
        Tri::Yes => "yes",
        Tri::No => "no",
        Tri::Unknown => "unknown",
    }
}

impl<'a> Collector<'a> {
    fn new(t: &'a HankelTensor, corrupt: bool) -> Self {
        let verdicts =
            Verdicts { psd: Tri::Unknown, sos: Tri::Unknown, strong: Tri::Unknown, pd: Tri::Unknown, boundary: false };
        Self {
            t,
            verdicts,
            criteria: vec![],
            witnesses: vec![],
            certificates: vec![],
            notes: vec![],
            corrupt,
        }
    }

    fn slot(&mut self, s: Slot) -> &mut Tri {
        match s {
            Slot::Psd => &mut self.verdicts.psd,
            Slot::Sos => &mut self.verdicts.sos,
            Slot::Strong => &mut self.verdicts.strong,
            Slot::Pd => &mut self.verdicts.pd,
        }
    }

    /// Records a verdict; a contradiction is an error unless a boundary case
    /// has been flagged, in which case the earlier verdict stands.
    fn settle(&mut self, s: Slot, value: Tri, source: &str) -> CliResult<()> {
        if value == Tri::Unknown {
            return Ok(());
        }
        let boundary = self.verdicts.boundary;
        let cur = *self.slot(s);
        if cur == Tri::Unknown {
            *self.slot(s) = value;
        } else if cur != value {
            let msg = format!("{source} says {s:?} = {} but an earlier stage said {}", tri_name(value), tri_name(cur));
            if !boundary {
                return Err(CliError::Inconsistent(msg));
            }
            self.notes.push(format!("boundary case: {msg}"));
        }
        Ok(())
    }

    fn criterion(&mut self, source: &str, name: impl Into<String>, holds: bool, slack: f64) {
        self.criteria.push(FiredCriterion { source: source.into(), name: name.into(), holds, slack });
    }

    fn absorb(&mut self, source: &str, v: ClassificationVerdict) -> CliResult<()> {
        self.verdicts.boundary |= v.boundary;
        for c in v.criteria {
            self.criterion(source, c.name, c.holds, c.slack);
        }
        self.witnesses.extend(v.witnesses);
        self.notes.extend(v.notes.into_iter().map(|n| format!("{source}: {n}")));
        self.settle(Slot::Psd, v.psd, source)?;
        self.settle(Slot::Sos, v.sos, source)?;
        self.settle(Slot::Strong, v.strong, source)?;
        self.settle(Slot::Pd, v.pd, source)
    }

    fn form_witness(&mut self, label: &str, point: Vec<f64>) -> Witness {
        let w = Witness::form_point(self.t, label, point);
        self.witnesses.push(w.clone());
        w
    }

    /// Verifies a decomposition against the tensor and records it; a failed
    /// verification is an internal inconsistency.
    fn certify(&mut self, name: &str, mut d: StructuredDecomposition) -> CliResult<()> {
        if self.corrupt {
            match d.squares.first_mut() {
                Some(sq) => sq.weight = sq.weight * 1.5 + 1.0,
                None => d.squares.push(WeightedSquare {
                    weight: 1.0,
                    base: SparseForm::monomial_power(self.t.dim(), 0, (self.t.order() / 2) as u32, 1.0),
                }),
            }
        }
        let check = verify_decomposition(self.t, &d)
            .map_err(|e| CliError::Inconsistent(format!("certificate {name} could not be checked: {e}")))?;
        self.certificates.push(CertificateSummary {
            name: name.into(),
            squares: d.squares.len(),
            residuals: d.residuals.len(),
            min_agm_slack: d.min_agm_slack(),
            max_discrepancy: check.max_discrepancy,
            verified: check.passed,
        });
        if !check.passed {
            return Err(CliError::Inconsistent(format!(
                "certificate {name} failed verification (max coefficient discrepancy {:e})",
                check.max_discrepancy
            )));
        }
        self.settle(Slot::Sos, Tri::Yes, name)
    }
}

fn internal(stage: &str) -> impl Fn(hankelkit_core::HankelError) -> CliError + '_ {
    move |e| CliError::Inconsistent(format!("{stage}: {e}"))
}

/// Sparsity pattern of the generating vector, if it matches a family with
/// dedicated criteria.
pub fn detect_family(gen: &GeneratingVector) -> Option<&'static str> {
    let (m, n, top) = (gen.order(), gen.dim(), gen.top_index());
    if n < 3 || n % 2 == 0 || gen.values().iter().all(|&x| x == 0.0) {
        return None;
    }
    let support: Vec<usize> = gen.values().iter().enumerate().filter(|(_, &x)| x != 0.0).map(|(k, _)| k).collect();
    let mid = top / 2;
    if support.iter().all(|&k| k == 0 || k == mid || k == top) {
        return Some("truncated");
    }
    if m >= 2 && support.iter().all(|&k| k == 0 || k == 1 || k == mid || k == top - 1 || k == top) {
        return Some("quasi-truncated");
    }
    None
}

fn odd_order_witness(t: &HankelTensor, seed: u64) -> Vec<f64> {
    let flip = |x: Vec<f64>| {
        let v = t.eval(&x).expect("probe dimension matches");
        if v > 0.0 {
            x.into_iter().map(|c| -c).collect()
        } else {
            x
        }
    };
    for p in structured_probes(t) {
        if t.eval(&p).expect("probe dimension matches") != 0.0 {
            return flip(p);
        }
    }
    // A nonzero form vanishes only on a null set, so random points suffice.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let x: Vec<f64> = (0..t.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        if t.eval(&x).expect("dimension matches") != 0.0 {
            return flip(x);
        }
    }
}

fn analyze_even(c: &mut Collector, t: &HankelTensor, strong: bool) -> CliResult<()> {
    let gen = t.generating_vector();
    let (m, n) = (t.order(), t.dim());
    let diag: Vec<f64> = (0..n).map(|i| gen.values()[i * m]).collect();
    if let Some(i) = diag.iter().position(|&d| d < 0.0) {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        c.form_witness(&format!("e{}", i + 1), e);
        c.settle(Slot::Psd, Tri::No, "necessary condition")?;
    } else if let Some(i) = diag.iter().position(|&d| d == 0.0) {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        c.form_witness(&format!("e{}", i + 1), e);
        c.settle(Slot::Pd, Tri::No, "vanishing diagonal entry")?;
    }

    if strong {
        c.settle(Slot::Psd, Tri::Yes, "strong Hankel")?;
        let d = build_strong_hankel_squares(t).map_err(internal("strong Hankel squares"))?;
        c.certify("strong Hankel squares", d)?;
    }

    if n == 1 {
        c.settle(Slot::Pd, Tri::from_bool(diag[0] > 0.0), "single variable")?;
    }

    if n == 2 {
        // Nonnegative binary forms are sums of squares, so the oracle settles both.
        let form = t.expand().map_err(internal("expansion"))?;
        let b = binary_psd_oracle(&form).map_err(internal("binary oracle"))?;
        let scale = gen.scale();
        c.criterion("binary oracle", "min over the unit circle", b.is_psd, b.min_value);
        if b.is_psd {
            c.settle(Slot::Psd, Tri::Yes, "binary oracle")?;
            c.settle(Slot::Sos, Tri::Yes, "binary oracle")?;
            if b.min_value > PD_BAND * scale {
                c.settle(Slot::Pd, Tri::Yes, "binary oracle")?;
            } else if t.eval(&b.argmin).map_err(internal("binary oracle"))? <= 0.0 {
                c.form_witness("binary oracle minimizer", b.argmin.to_vec());
                c.settle(Slot::Pd, Tri::No, "binary oracle")?;
            } else {
                c.notes.push("binary minimum is inside the definiteness band".into());
            }
        } else {
            let w = c.form_witness("binary oracle minimizer", b.argmin.to_vec());
            if w.value < 0.0 {
                c.settle(Slot::Psd, Tri::No, "binary oracle")?;
            } else {
                c.notes.push("binary oracle reported a negative minimum the direct evaluation does not reproduce".into());
            }
        }
    }
    Ok(())
}

fn analyze_truncated(c: &mut Collector, gen: &GeneratingVector) -> CliResult<()> {
    let (m, n, top) = (gen.order(), gen.dim(), gen.top_index());
    let v = gen.values();
    let (v0, vmid, vend) = (v[0], v[top / 2], v[top]);
    let spec = TruncatedSpec::new(m, n, v0, vmid, vend);
    if v0 >= 0.0 && vmid >= 0.0 && vend >= 0.0 {
        let d = truncated_strong_dichotomy(&spec).map_err(internal("truncated dichotomy"))?;
        c.absorb("truncated dichotomy", d)?;
    }
    if m == 6 && n == 3 {
        let verdict = sextic_truncated_classify(v0, vmid, vend);
        let psd = verdict.psd;
        c.absorb("sextic threshold", verdict)?;
        if psd == Tri::Yes && vmid > 0.0 {
            let d = build_sextic_decomposition(v0, vmid, vend).map_err(internal("sextic decomposition"))?;
            c.certify("sextic threshold decomposition", d)?;
        }
    }
    if m >= 6 && m % 2 == 0 && n == 3 && v0 == vend && vmid > 0.0 {
        let bound = truncated_sos_bound(m).map_err(internal("constructive bound"))?;
        let slack = v0 - bound.bound * vmid;
        let holds = slack >= -1e-12 * bound.bound * vmid;
        c.criterion("constructive bound", format!("v0 >= {:.6} * vmid", bound.bound), holds, slack);
        if holds {
            let d = build_truncated_bound_decomposition(m, v0, vmid).map_err(internal("constructive bound"))?;
            c.certify("constructive bound decomposition", d)?;
        }
    }
    Ok(())
}

fn analyze_quasi(c: &mut Collector, gen: &GeneratingVector) -> CliResult<()> {
    let (m, n, top) = (gen.order(), gen.dim(), gen.top_index());
    let v = gen.values();
    let spec = QuasiTruncatedSpec { m, n, v0: v[0], v1: v[1], vmid: v[top / 2], vend1: v[top - 1], vend: v[top] };
    if m % 2 == 0 && spec.vmid == 0.0 && spec.v0 >= 0.0 && spec.vend >= 0.0 {
        let d = quasi_midzero_dichotomy(&spec).map_err(internal("zero-middle dichotomy"))?;
        c.absorb("zero-middle dichotomy", d)?;
    }
    if m == 6 && n == 3 {
        let q = QuasiSextic::new(spec.v0, spec.v1, spec.vmid, spec.vend1, spec.vend);
        let report = quasi_sextic_necessary(&q);
        for check in report.checks {
            c.criterion("quasi necessary", check.condition.clone(), check.holds, check.slack);
            if check.holds {
                continue;
            }
            match check.witness {
                Some(w) if w.kind == WitnessKind::FormPoint && w.value < 0.0 => {
                    let w = c.form_witness(&w.label, w.point);
                    if w.value < 0.0 {
                        c.settle(Slot::Psd, Tri::No, "quasi necessary")?;
                    }
                }
                _ => c.notes.push(format!("necessary condition {:?} fails without a witness", check.condition)),
            }
        }
        if spec.v0 > 0.0 && spec.vmid > 0.0 && spec.vend > 0.0 {
            match quasi_sextic_sufficient(&q).map_err(internal("quasi sufficient search"))? {
                Some(cert) => {
                    let names = ["t1 inequality", "t2 inequality", "middle diagonal", "cubic determinant"];
                    for (name, &s) in names.iter().zip(&cert.slacks) {
                        c.criterion("quasi sufficient", *name, s >= 0.0, s);
                    }
                    c.notes.push(format!("sufficient search found t1 = {:e}, t2 = {:e}", cert.t1, cert.t2));
                    c.certify("quasi-truncated decomposition", cert.decomposition)?;
                }
                None => c.notes.push("sufficient-condition search was inconclusive".into()),
            }
        }
    }
    Ok(())
}

fn finish(c: &mut Collector) -> CliResult<()> {
    if c.verdicts.sos == Tri::Yes || c.verdicts.pd == Tri::Yes {
        c.settle(Slot::Psd, Tri::Yes, "implied by sos/pd")?;
    }
    if c.verdicts.psd == Tri::No {
        c.settle(Slot::Sos, Tri::No, "implied by psd")?;
        c.settle(Slot::Pd, Tri::No, "implied by psd")?;
    }
    let t = c.t;
    let reproducible = |w: &Witness| match w.kind {
        WitnessKind::MatrixVector => true,
        _ => t.eval(&w.point).is_ok_and(|v| v == w.value),
    };
    let has = |kinds: &[WitnessKind], strict: bool| {
        c.witnesses
            .iter()
            .any(|w| kinds.contains(&w.kind) && (if strict { w.value < 0.0 } else { w.value <= 0.0 }) && reproducible(w))
    };
    let missing = [
        (c.verdicts.psd, "psd", has(&[WitnessKind::FormPoint], true)),
        (c.verdicts.strong, "strong", has(&[WitnessKind::MatrixVector], true)),
        (c.verdicts.pd, "pd", has(&[WitnessKind::FormPoint, WitnessKind::FormZero], false)),
    ];
    for (verdict, name, ok) in missing {
        if verdict == Tri::No && !ok {
            return Err(CliError::Inconsistent(format!("{name} = no without a reproducible witness")));
        }
    }
    Ok(())
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn analyze(
    gen: GeneratingVector,
    family: Option<FamilySpec>,
    family_record: Option<FamilyRecord>,
    opts: &AnalyzeOptions,
) -> CliResult<AnalysisReport> {
    let total = Instant::now();
    let mut timings = BTreeMap::new();
    let t = HankelTensor::new(gen.clone());
    let (m, n) = (t.order(), t.dim());
    let mut c = Collector::new(&t, opts.corrupt_certificates);
    let necessary = t.check_necessary_psd();

    let start = Instant::now();
    let strong = is_strong_hankel(&t);
    c.criterion("strong Hankel", "min eigenvalue of the associated matrix", strong.strong, strong.matrix.min_eigenvalue);
    if !strong.strong {
        if let (Some(y), Some(value)) = (strong.matrix.witness.clone(), strong.matrix.witness_value) {
            c.witnesses.push(Witness::matrix_vector("associated matrix eigenvector", y, value));
        }
    }
    c.settle(Slot::Strong, Tri::from_bool(strong.strong), "strong Hankel")?;
    timings.insert("strong".to_string(), elapsed_ms(start));

    let start = Instant::now();
    let detected = detect_family(&gen);
    if t.is_zero() {
        c.settle(Slot::Psd, Tri::Yes, "zero tensor")?;
        c.settle(Slot::Sos, Tri::Yes, "zero tensor")?;
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        c.form_witness("e1", e);
        c.settle(Slot::Pd, Tri::No, "zero tensor")?;
    } else if m % 2 == 1 {
        // f(-x) = -f(x), so any point where f is nonzero refutes one sign.
        let x = odd_order_witness(&t, opts.seed);
        c.form_witness("odd order sign flip", x);
        c.settle(Slot::Psd, Tri::No, "odd order")?;
    } else {
        analyze_even(&mut c, &t, strong.strong)?;
    }
    match detected {
        Some("truncated") => analyze_truncated(&mut c, &gen)?,
        Some("quasi-truncated") => analyze_quasi(&mut c, &gen)?,
        _ => {}
    }
    timings.insert("classify".to_string(), elapsed_ms(start));

    let mut refutation = None;
    if opts.refute && m % 2 == 0 && !t.is_zero() {
        let start = Instant::now();
        let ro = RefuteOptions { seed: opts.seed, starts: opts.starts, iterations: opts.iterations };
        let r = refute_psd(&t, &ro).map_err(internal("refuter"))?;
        if r.found {
            c.form_witness("refuter minimum", r.point.clone());
            c.settle(Slot::Psd, Tri::No, "refuter")?;
        }
        refutation = Some(r);
        timings.insert("refute".to_string(), elapsed_ms(start));
    }

    finish(&mut c)?;
    timings.insert("total".to_string(), elapsed_ms(total));

    Ok(AnalysisReport {
        schema: SCHEMA.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        seed: opts.seed,
        input: InputEcho { m, n, v: gen.values().to_vec(), family },
        detected_family: detected.map(str::to_string),
        verdicts: c.verdicts,
        necessary,
        criteria: c.criteria,
        witnesses: c.witnesses,
        certificates: c.certificates,
        refutation,
        family_record,
        notes: c.notes,
        timings_ms: timings,
    })
}

/// Builds a family instance and analyzes it.
pub fn analyze_family(spec: FamilySpec, opts: &AnalyzeOptions) -> CliResult<AnalysisReport> {
    let (gen, record) = spec.build()?;
    analyze(gen, Some(spec), record, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(m: usize, n: usize, v: Vec<f64>) -> AnalysisReport {
        analyze(GeneratingVector::new(m, n, v).unwrap(), None, None, &AnalyzeOptions::default()).unwrap()
    }

    #[test]
    fn detects_sparsity_patterns() {
        let g = |m, n, v: Vec<f64>| GeneratingVector::new(m, n, v).unwrap();
        let mut v = vec![0.0; 13];
        v[0] = 1.0;
        v[6] = 1.0;
        v[12] = 1.0;
        assert_eq!(detect_family(&g(6, 3, v.clone())), Some("truncated"));
        v[11] = 0.5;
        assert_eq!(detect_family(&g(6, 3, v.clone())), Some("quasi-truncated"));
        v[4] = 0.5;
        assert_eq!(detect_family(&g(6, 3, v)), None);
        assert_eq!(detect_family(&g(2, 2, vec![1.0, 0.0, 1.0])), None);
    }

    #[test]
    fn truncated_unit_sextic_fails_both_ways() {
        let mut v = vec![0.0; 13];
        v[0] = 1.0;
        v[6] = 1.0;
        v[12] = 1.0;
        let r = run(6, 3, v);
        assert_eq!(r.verdicts.psd, Tri::No);
        assert_eq!(r.verdicts.strong, Tri::No);
        assert!(r.witnesses.iter().any(|w| w.kind == WitnessKind::FormPoint && w.value < 0.0));
        assert!(r.witnesses.iter().any(|w| w.kind == WitnessKind::MatrixVector && w.value < 0.0));
    }

    #[test]
    fn zero_vector_is_psd_and_strong() {
        let r = run(4, 3, vec![0.0; 9]);
        assert_eq!((r.verdicts.psd, r.verdicts.strong, r.verdicts.pd), (Tri::Yes, Tri::Yes, Tri::No));
    }

    #[test]
    fn hilbert_vector_is_strong_and_psd() {
        let r = run(4, 3, (0..9).map(|k| 1.0 / (k as f64 + 1.0)).collect());
        assert_eq!((r.verdicts.psd, r.verdicts.sos, r.verdicts.strong), (Tri::Yes, Tri::Yes, Tri::Yes));
        assert!(r.certificates.iter().all(|c| c.verified));
    }

    #[test]
    fn odd_order_is_never_psd_unless_zero() {
        let r = run(3, 2, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(r.verdicts.psd, Tri::No);
        let w = r.witnesses.iter().find(|w| w.kind == WitnessKind::FormPoint).unwrap();
        assert!(w.value < 0.0);
        assert_eq!(run(3, 2, vec![0.0; 4]).verdicts.psd, Tri::Yes);
    }

    #[test]
    fn binary_forms_are_decided() {
        // x^4 - 2 x² y² + y^4 = (x² - y²)² via v = (1, 0, -1/3, 0, 1).
        let r = run(4, 2, vec![1.0, 0.0, -1.0 / 3.0, 0.0, 1.0]);
        assert_eq!((r.verdicts.psd, r.verdicts.sos, r.verdicts.pd), (Tri::Yes, Tri::Yes, Tri::No));
        let r = run(4, 2, vec![1.0, 0.0, -1.0, 0.0, 1.0]);
        assert_eq!(r.verdicts.psd, Tri::No);
    }

    #[test]
    fn corrupted_certificate_is_an_inconsistency() {
        let gen = GeneratingVector::new(4, 3, (0..9).map(|k| 1.0 / (k as f64 + 1.0)).collect()).unwrap();
        let opts = AnalyzeOptions { corrupt_certificates: true, ..Default::default() };
        assert!(matches!(analyze(gen, None, None, &opts), Err(CliError::Inconsistent(_))));
    }
}
