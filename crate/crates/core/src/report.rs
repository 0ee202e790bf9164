//! Run configuration, the versioned JSON report and its text rendering.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cycles::LagrangianCycle;
use crate::error::{Error, Result};
use crate::nearby::catalog::{self, CatalogEntry};
use crate::nearby::{analyze, Analysis, CrossCheckReport, FamilySpec, Mode, DEFAULT_RADIUS_SCALE};
use crate::poly::{parse_poly, parse_rational, RationalLinearForm};
use crate::quotient::{degree_cap_from_env, SolveTolerances};

pub const SCHEMA: &str = "charcycle/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub residual: f64,
    pub clustering: f64,
    pub hessian: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        let t = SolveTolerances::default();
        ToleranceConfig {
            residual: t.residual,
            clustering: t.clustering,
            hessian: t.hessian,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub poly: String,
    pub vars: Vec<String>,
    pub mode: Mode,
    pub seed: u64,
    pub trials: usize,
    /// Parameter values as written, `None` for the default schedule.
    pub schedule: Option<Vec<String>>,
    /// Integer coefficients of `phi` or `l`, `None` for the default.
    pub test_form: Option<Vec<i64>>,
    pub radius_scale: f64,
    pub tolerances: ToleranceConfig,
    pub degree_cap: u32,
}

impl RunConfig {
    pub fn new(poly: impl Into<String>, vars: Vec<String>, mode: Mode) -> Self {
        RunConfig {
            poly: poly.into(),
            vars,
            mode,
            seed: 0,
            trials: crate::invariants::DEFAULT_SECTION_TRIALS,
            schedule: None,
            test_form: None,
            radius_scale: DEFAULT_RADIUS_SCALE,
            tolerances: ToleranceConfig::default(),
            degree_cap: degree_cap_from_env(),
        }
    }

    pub fn family_spec(&self) -> Result<FamilySpec> {
        let f = parse_poly(&self.poly, &self.vars)?;
        let mut spec = FamilySpec::new(f, self.mode).with_seed(self.seed);
        if let Some(s) = &self.schedule {
            spec.schedule = Some(s.iter().map(|a| parse_rational(a)).collect::<Result<_>>()?);
        }
        if let Some(c) = &self.test_form {
            spec.test_form = Some(RationalLinearForm::from_integers(c));
        }
        spec.trials = self.trials;
        spec.radius_scale = self.radius_scale;
        spec.degree_cap = self.degree_cap;
        spec.tolerances.residual = self.tolerances.residual;
        spec.tolerances.clustering = self.tolerances.clustering;
        spec.tolerances.hessian = self.tolerances.hessian;
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be positive".into()));
        }
        let t = &self.tolerances;
        if ![t.residual, t.clustering, t.hessian]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0)
        {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Disagreement,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Disagreement => 2,
            Status::Error => 1,
        }
    }

    fn worst(self, other: Status) -> Status {
        match (self, other) {
            (Status::Error, _) | (_, Status::Error) => Status::Error,
            (Status::Disagreement, _) | (_, Status::Disagreement) => Status::Disagreement,
            _ => Status::Pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub code: String,
    pub message: String,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        ErrorReport {
            code: e.code().into(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub name: String,
    pub poly: String,
    pub mode: Mode,
    pub status: Status,
    pub expected: String,
    pub computed: Option<String>,
    pub matches_expected: bool,
    pub failed_checks: Vec<String>,
    pub error: Option<ErrorReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    pub seed: u64,
    pub config: Option<RunConfig>,
    pub result: Option<CrossCheckReport>,
    pub error: Option<ErrorReport>,
    pub entries: Vec<SuiteEntry>,
    /// Wall-clock data; the only field that varies between identical runs.
    pub timing: Timing,
}

impl Report {
    fn new(command: &str, seed: u64) -> Self {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            status: Status::Pass,
            exit_code: 0,
            seed,
            config: None,
            result: None,
            error: None,
            entries: Vec::new(),
            timing: Timing::default(),
        }
    }

    fn set_status(&mut self, status: Status) {
        self.status = status;
        self.exit_code = status.exit_code();
    }

    pub fn exit_code(&self) -> i32 {
        self.exit_code
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The JSON with timing zeroed; identical for identical config and seed.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.timing = Timing::default();
        r.to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(format!("not a report: {e}")))
    }

    pub fn render_text(&self) -> String {
        render_text(&serde_json::to_value(self).expect("report serializes"))
    }
}

/// Analyze one polynomial. Errors become report content.
pub fn run(config: &RunConfig) -> Report {
    let start = Instant::now();
    let mut report = Report::new("analyze", config.seed);
    report.config = Some(config.clone());
    match config.family_spec().and_then(|spec| analyze(&spec)) {
        Ok(Analysis { report: result, .. }) => {
            report.set_status(if result.passed {
                Status::Pass
            } else {
                Status::Disagreement
            });
            report.result = Some(result);
        }
        Err(e) => {
            report.error = Some(ErrorReport::from(&e));
            report.set_status(Status::Error);
        }
    }
    report.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    report
}

fn run_entry(entry: &CatalogEntry, seed: u64) -> SuiteEntry {
    let mut out = SuiteEntry {
        name: entry.name.clone(),
        poly: entry.poly.clone(),
        mode: entry.mode,
        status: Status::Error,
        expected: entry
            .expected
            .iter()
            .map(|(s, m)| format!("{s}: {m}"))
            .collect::<Vec<_>>()
            .join(", "),
        computed: None,
        matches_expected: false,
        failed_checks: Vec::new(),
        error: None,
    };
    let analysis = entry
        .polynomial()
        .and_then(|f| analyze(&FamilySpec::new(f, entry.mode).with_seed(seed)));
    match analysis {
        Ok(a) => {
            let want = LagrangianCycle::from_pairs(
                a.cycle.poset(),
                entry.expected.iter().map(|(s, m)| (s.as_str(), *m)),
            );
            if let Ok(want) = want {
                out.matches_expected = want == a.cycle;
                out.expected = want.to_string();
            }
            out.computed = Some(a.cycle.to_string());
            out.failed_checks = a
                .report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.clone())
                .collect();
            out.status = if a.report.passed && out.matches_expected {
                Status::Pass
            } else {
                Status::Disagreement
            };
        }
        Err(e) => out.error = Some(ErrorReport::from(&e)),
    }
    out
}

/// Run every catalog entry.
pub fn catalog_suite(seed: u64) -> Report {
    catalog_suite_with(&catalog::entries(), seed)
}

/// Run the given entries concurrently; results are ordered by name.
pub fn catalog_suite_with(entries: &[CatalogEntry], seed: u64) -> Report {
    let start = Instant::now();
    let mut report = Report::new("suite", seed);
    let mut results: Vec<SuiteEntry> = entries.par_iter().map(|e| run_entry(e, seed)).collect();
    results.sort_by(|a, b| a.name.cmp(&b.name));
    let status = results.iter().fold(Status::Pass, |s, e| s.worst(e.status));
    report.entries = results;
    report.set_status(status);
    report.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    report
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> &'a Value {
    v.get(key).unwrap_or(&Value::Null)
}

fn list(v: &Value) -> &[Value] {
    v.as_array().map(Vec::as_slice).unwrap_or(&[])
}

/// Human-readable view of a serialized report.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {}: {}",
        scalar(field(v, "schema")),
        scalar(field(v, "command")),
        scalar(field(v, "status"))
    );
    let config = field(v, "config");
    if !config.is_null() {
        let vars: Vec<String> = list(field(config, "vars")).iter().map(scalar).collect();
        let _ = writeln!(
            out,
            "f = {}  vars = {}  mode = {}  seed = {}",
            scalar(field(config, "poly")),
            vars.join(","),
            scalar(field(config, "mode")),
            scalar(field(config, "seed"))
        );
    }
    let err = field(v, "error");
    if !err.is_null() {
        let _ = writeln!(
            out,
            "error [{}]: {}",
            scalar(field(err, "code")),
            scalar(field(err, "message"))
        );
    }
    let res = field(v, "result");
    if !res.is_null() {
        let _ = writeln!(out, "cycle: {}", scalar(field(res, "cycle_text")));
        let schedule: Vec<String> = list(field(res, "schedule")).iter().map(scalar).collect();
        let _ = writeln!(out, "schedule: {}", schedule.join(", "));
        if let Some(inv) = field(res, "invariants").as_object() {
            let mut parts = Vec::new();
            for (k, val) in inv {
                match val {
                    Value::Null => {}
                    Value::Array(a) if a.is_empty() => {}
                    Value::Object(o) if o.is_empty() => {}
                    Value::Array(_) => parts.push(format!("{k} = [{} trials]", list(val).len())),
                    Value::Object(o) => {
                        let kv: Vec<String> = o
                            .iter()
                            .map(|(a, b)| format!("{a}: {}", scalar(b)))
                            .collect();
                        parts.push(format!("{k} = {{{}}}", kv.join(", ")));
                    }
                    other => parts.push(format!("{k} = {}", scalar(other))),
                }
            }
            let _ = writeln!(out, "invariants: {}", parts.join("; "));
        }
        for r in list(field(res, "routes")) {
            let _ = writeln!(
                out,
                "  route {:<18} {}",
                scalar(field(r, "route")),
                scalar(field(r, "rendered"))
            );
        }
        for c in list(field(res, "checks")) {
            let mark = if field(c, "passed").as_bool() == Some(true) {
                "pass"
            } else {
                "FAIL"
            };
            let _ = writeln!(
                out,
                "  {mark} {:<24} {}",
                scalar(field(c, "name")),
                scalar(field(c, "detail"))
            );
        }
        for w in list(field(res, "warnings")) {
            let _ = writeln!(out, "  warning: {}", scalar(w));
        }
    }
    for e in list(field(v, "entries")) {
        let shown = match field(e, "error") {
            Value::Null => scalar(field(e, "computed")),
            err => format!("error [{}]", scalar(field(err, "code"))),
        };
        let _ = writeln!(
            out,
            "  {:<13} {:<30} {}",
            scalar(field(e, "status")),
            scalar(field(e, "name")),
            shown
        );
    }
    if let Some(ms) = field(field(v, "timing"), "elapsed_ms").as_f64() {
        let _ = writeln!(out, "elapsed: {ms:.1} ms");
    }
    out
}
