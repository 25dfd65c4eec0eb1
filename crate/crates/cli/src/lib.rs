//! Job files in, reports out. The binary in `main.rs` is a thin clap layer
//! over [`run`].

use std::fmt::Write as _;
use std::sync::Arc;

use crdiam_core::cioper::{audit, audit_with_lifts, eisenbud_operators, AuditReport};
use crdiam_core::complexes::{Window, WindowVerdict};
use crdiam_core::critical::{analyze, diameter_of, module_diameter, verify_suite, AnalysisOptions, DegreeReport, LawCheck};
use crdiam_core::ffield::Field;
use crdiam_core::polyring::{default_var_names, parse_polynomial, QuotientRing};
use crdiam_core::resolve::{complete_resolution, estimate_complexity, ComplexityEstimate, ModulePresentation};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read input: {0}")]
    Input(String),
    #[error("malformed job: {0}")]
    Job(String),
    #[error(transparent)]
    Core(#[from] crdiam_core::Error),
}

impl CliError {
    /// 2 parse, 3 ring rejected, 4 window, 5 internal.
    pub fn exit_code(&self) -> i32 {
        use crdiam_core::Error as E;
        match self {
            CliError::Input(_) | CliError::Job(_) => 2,
            CliError::Core(e) => match e {
                E::Parse(_) | E::DimensionMismatch(_) | E::ZeroForm => 2,
                E::InvalidField { .. } | E::NotArtinian(_) | E::NotRegularSequence(_) | E::NonHomogeneous(_) => 3,
                E::TooNarrow { .. } | E::OutOfWindow { .. } => 4,
                _ => 5,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub p: u32,
    /// Extension degree the realizer search starts from.
    #[serde(default = "one")]
    pub e: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSection {
    pub vars: Vec<String>,
    pub f: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    /// Relation matrix, one row per generator; `[[]]` is the free module `R`.
    pub presentation: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Resolve,
    Cioperators,
    Crdeg,
    Cocrdeg,
    Diameter,
    Verify,
    Show,
}

impl Task {
    pub const ALL: [Task; 7] = [Task::Resolve, Task::Cioperators, Task::Crdeg, Task::Cocrdeg, Task::Diameter, Task::Verify, Task::Show];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    #[serde(default = "two")]
    pub max_period: usize,
    /// Include the lifted matrices in the operator audit.
    #[serde(default)]
    pub audit: bool,
    #[serde(default = "yes")]
    pub escalate: bool,
}

fn two() -> usize {
    2
}

fn yes() -> bool {
    true
}

impl Default for JobOptions {
    fn default() -> Self {
        Self { max_period: 2, audit: false, escalate: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub field: FieldSection,
    pub ring: RingSection,
    pub module: ModuleSection,
    pub window: Window,
    /// Empty means every task.
    #[serde(default)]
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub options: JobOptions,
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Job(e.to_string()))
    }

    fn tasks(&self) -> Vec<Task> {
        let mut t = if self.tasks.is_empty() { Task::ALL.to_vec() } else { self.tasks.clone() };
        t.sort();
        t.dedup();
        t
    }

    fn analysis_options(&self) -> AnalysisOptions {
        AnalysisOptions { ext_degree: self.field.e, max_period: self.options.max_period, escalate: self.options.escalate }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// SHA-256 of the normalized ring description.
    pub ring_hash: String,
    pub window: Window,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolveSection {
    /// `(degree, rank)` of the minimal complete resolution.
    pub betti: Vec<(i64, usize)>,
    pub comparison_degree: i64,
    pub complexity: ComplexityEstimate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorSection {
    pub codim: usize,
    /// Degrees on which the operators are defined, empty for the zero complex.
    pub degrees: Option<(i64, i64)>,
    pub audit_passed: bool,
    pub audit: AuditReport,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolve: Option<ResolveSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cioperators: Option<OperatorSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crdeg: Option<DegreeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocrdeg: Option<DegreeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter: Option<DegreeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<Vec<LawCheck>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub show: Option<String>,
}

/// Pretty JSON with a trailing newline.
pub fn serialize(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports always serialize");
    s.push('\n');
    s
}

pub fn deserialize(text: &str) -> Result<Report, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Job(e.to_string()))
}

/// Builds the ring, checking that the variable names are ones the
/// polynomial grammar understands, in order.
pub fn build_ring(spec: &JobSpec) -> Result<Arc<QuotientRing>, CliError> {
    let n = spec.ring.vars.len();
    let short = default_var_names(n);
    for (i, v) in spec.ring.vars.iter().enumerate() {
        if *v != short[i] && *v != format!("x{}", i + 1) {
            return Err(CliError::Job(format!("variable {} must be named {} or x{}", i + 1, short[i], i + 1)));
        }
    }
    let field = Field::prime(spec.field.p)?;
    if spec.field.e == 0 {
        return Err(crdiam_core::Error::InvalidField { p: spec.field.p, e: 0 }.into());
    }
    let gens = spec.ring.f.iter().map(|g| parse_polynomial(g, n, &field)).collect::<Result<Vec<_>, _>>()?;
    Ok(Arc::new(QuotientRing::new(field, n, gens)?))
}

fn build_module(spec: &JobSpec, ring: &Arc<QuotientRing>) -> Result<ModulePresentation, CliError> {
    let rows = &spec.module.presentation;
    if rows.is_empty() {
        return Err(CliError::Job("presentation needs at least one row".into()));
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(CliError::Job("presentation is not rectangular".into()));
    }
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
    Ok(ModulePresentation::from_strings(ring.clone(), &rows)?)
}

pub fn ring_hash(ring: &QuotientRing) -> String {
    let gens: Vec<String> = ring.gens().iter().map(|g| ring.render(g)).collect();
    let text = format!("p={};vars={};f={}", ring.field().p(), ring.var_names().join(","), gens.join(","));
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs the requested tasks in dependency order.
pub fn run(spec: &JobSpec) -> Result<Report, CliError> {
    let w = spec.window;
    if w.lo > w.hi {
        return Err(crdiam_core::Error::TooNarrow { lo: w.lo, hi: w.hi, reason: "empty window".into() }.into());
    }
    let ring = build_ring(spec)?;
    let module = build_module(spec, &ring)?;
    let opts = spec.analysis_options();
    let tasks = spec.tasks();
    let mut report = Report {
        provenance: Some(Provenance { ring_hash: ring_hash(&ring), window: w, tool_version: env!("CARGO_PKG_VERSION").into() }),
        ..Report::default()
    };
    let bundle = complete_resolution(&module, w)?;
    for &task in &tasks {
        match task {
            Task::Resolve => {
                report.resolve = Some(ResolveSection { betti: bundle.betti(), comparison_degree: bundle.comparison_degree, complexity: estimate_complexity(&bundle) });
            }
            Task::Show => report.show = Some(bundle.complex.pretty()),
            Task::Cioperators => {
                let fam = eisenbud_operators(Arc::new(bundle.complex.clone()))?;
                let a = if spec.options.audit { audit_with_lifts(&fam)? } else { audit(&fam)? };
                let degrees = (!fam.is_empty()).then(|| (*fam.degrees().start(), *fam.degrees().end()));
                report.cioperators = Some(OperatorSection { codim: fam.codim(), degrees, audit_passed: a.passed(), audit: a });
            }
            _ => {}
        }
    }
    let needs_analysis = tasks.iter().any(|t| matches!(t, Task::Crdeg | Task::Cocrdeg | Task::Diameter));
    if needs_analysis {
        let a = analyze(&bundle.complex, w, &opts)?;
        if tasks.contains(&Task::Crdeg) {
            report.crdeg = Some(a.crdeg.clone());
        }
        if tasks.contains(&Task::Cocrdeg) {
            report.cocrdeg = Some(a.cocrdeg.clone());
        }
        if tasks.contains(&Task::Diameter) {
            report.diameter = Some(if bundle.complex.is_zero() { module_diameter(&module, w, &opts)? } else { diameter_of(&a) });
        }
    }
    if tasks.contains(&Task::Verify) {
        report.verify = Some(verify_suite(&bundle, &opts));
    }
    Ok(report)
}

fn verdict_line(v: &WindowVerdict) -> String {
    format!("{} ({:?} on {})", v.value, v.status, v.window)
}

fn degree_block(out: &mut String, name: &str, r: &DegreeReport) {
    let _ = writeln!(out, "{name}: {}", verdict_line(&r.verdict));
    let _ = writeln!(out, "  method {:?}, extension degree {}", r.method, r.extension);
    if let Some(f) = &r.realizer {
        let _ = writeln!(out, "  realized by {f}");
    }
    if let Some(p) = r.period {
        let _ = writeln!(out, "  periodic with period {p}");
    }
    if r.method != crdiam_core::critical::Method::BothAgree {
        if let (Some(m), Some(c)) = (&r.matrix_value, &r.cohomological_value) {
            let _ = writeln!(out, "  matrix route {}, cohomological route {}", verdict_line(m), verdict_line(c));
        }
    }
}

/// Human-readable rendering.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    if let Some(p) = &r.provenance {
        let _ = writeln!(out, "window {}  ring {}  crdiam {}", p.window, &p.ring_hash[..12], p.tool_version);
    }
    if let Some(res) = &r.resolve {
        let ranks: Vec<String> = res.betti.iter().map(|(n, b)| format!("{n}:{b}")).collect();
        let _ = writeln!(out, "ranks: {}", ranks.join(" "));
        let _ = writeln!(out, "agrees with the minimal resolution from degree {}", res.comparison_degree);
        let _ = writeln!(out, "complexity {}{}", res.complexity.value, if res.complexity.ambiguous { " (ambiguous)" } else { "" });
    }
    if let Some(op) = &r.cioperators {
        let span = op.degrees.map_or("none".to_string(), |(a, b)| format!("[{a}, {b}]"));
        let _ = writeln!(out, "operators: {} on degrees {}, audit {}", op.codim, span, if op.audit_passed { "passed" } else { "FAILED" });
        for d in &op.audit.degrees {
            for (j, lift) in d.lifts.iter().enumerate() {
                let _ = writeln!(out, "  lift t{}({})", j + 1, d.degree);
                for row in lift {
                    let _ = writeln!(out, "    [{}]", row.join(", "));
                }
            }
        }
    }
    if let Some(d) = &r.crdeg {
        degree_block(&mut out, "crdeg", d);
    }
    if let Some(d) = &r.cocrdeg {
        degree_block(&mut out, "cocrdeg", d);
    }
    if let Some(d) = &r.diameter {
        degree_block(&mut out, "diameter", d);
    }
    if let Some(v) = &r.verify {
        for l in v {
            let _ = writeln!(out, "{} {}: {}", if l.passed { "ok  " } else { "FAIL" }, l.law, l.detail);
        }
    }
    if let Some(s) = &r.show {
        out.push_str(s);
    }
    out
}
