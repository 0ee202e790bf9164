use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::counting::{
    far_limit_points, lagrange_system, morsification_count, morsification_system,
    real_signed_morse_count, restricted_critical_count, CountResult, CountWindow, FarLimit,
    Orientation, SignedMorseCount,
};
use crate::cycles::{
    cc_from_chi, constancy_check, limit_of_family, ConstancyReport, CycleEntry, FamilyOfCycles,
    LagrangianCycle, StratificationPoset, Stratum, DEFAULT_STABILITY_WINDOW,
};
use crate::error::{Error, Result};
use crate::invariants::{
    isolated_euler_table, isolated_poset, normal_crossings, sign, stalk_euler_nearby,
    stalk_euler_restriction, IsolatedSingularityProfile, SectionTrial, SheafKind,
    DEFAULT_SECTION_TRIALS, ORIGIN, Z_REG,
};
use crate::poly::{
    random_linear_form, rational_to_f64, LinearImage, Polynomial, Rational, RationalLinearForm,
};
use crate::quotient::{degree_cap_from_env, local_quotient_dimension, SolveTolerances};

pub const DEFAULT_RADIUS_SCALE: f64 = 10.0;
pub const DEFAULT_SCHEDULE_LENGTH: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "real-nearby")]
    RealNearby,
    #[serde(rename = "nearby")]
    Nearby,
    #[serde(rename = "vanishing")]
    Vanishing,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::RealNearby => "real-nearby",
            Mode::Nearby => "nearby",
            Mode::Vanishing => "vanishing",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real-nearby" => Ok(Mode::RealNearby),
            "nearby" | "complex-nearby" => Ok(Mode::Nearby),
            "vanishing" => Ok(Mode::Vanishing),
            other => Err(Error::InvalidConfig(format!("unknown mode `{other}`"))),
        }
    }
}

/// Everything needed to run one pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub f: Polynomial,
    pub mode: Mode,
    /// Decreasing positive parameters; `None` picks the default schedule.
    pub schedule: Option<Vec<Rational>>,
    /// `phi` (nearby modes) or `l` (vanishing); `None` picks the default form.
    pub test_form: Option<RationalLinearForm>,
    /// Scale factor of the counting windows, see [`FamilySpec::radius`].
    pub radius_scale: f64,
    pub seed: u64,
    pub trials: usize,
    pub stability_window: usize,
    pub tolerances: SolveTolerances,
    /// Truncation cap for local Milnor numbers.
    pub degree_cap: u32,
}

impl FamilySpec {
    pub fn new(f: Polynomial, mode: Mode) -> Self {
        FamilySpec {
            f,
            mode,
            schedule: None,
            test_form: None,
            radius_scale: DEFAULT_RADIUS_SCALE,
            seed: 0,
            trials: DEFAULT_SECTION_TRIALS,
            stability_window: DEFAULT_STABILITY_WINDOW,
            tolerances: SolveTolerances::default(),
            degree_cap: degree_cap_from_env(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_schedule(mut self, schedule: Vec<Rational>) -> Self {
        self.schedule = Some(schedule);
        self
    }

    pub fn with_test_form(mut self, form: RationalLinearForm) -> Self {
        self.test_form = Some(form);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(s) = &self.schedule {
            if s.iter().any(|a| *a <= Rational::zero()) || s.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::InvalidConfig(
                    "schedule must be strictly decreasing and positive".into(),
                ));
            }
            if s.len() < self.stability_window.max(2) {
                return Err(Error::InvalidConfig(format!(
                    "schedule has {} samples, stability window needs {}",
                    s.len(),
                    self.stability_window
                )));
            }
        }
        if !(self.radius_scale.is_finite() && self.radius_scale > 0.0) {
            return Err(Error::InvalidConfig("radius scale must be positive".into()));
        }
        if self.stability_window == 0 {
            return Err(Error::InvalidConfig(
                "stability window must be positive".into(),
            ));
        }
        if let Some(form) = &self.test_form {
            if form.dimension() != self.f.nvars() {
                return Err(Error::DimensionMismatch {
                    expected: self.f.nvars(),
                    found: form.dimension(),
                });
            }
        }
        Ok(())
    }

    fn degree(&self) -> u32 {
        self.f.degree().max(1)
    }

    /// The given schedule, or `10^{-1..-4}` pushed down so that the samples
    /// are small against the distance `rho` to the nearest far limit point.
    pub fn resolve_schedule(&self, rho: Option<f64>) -> Vec<Rational> {
        if let Some(s) = &self.schedule {
            return s.clone();
        }
        let shift = match rho {
            Some(r) if r < 2.0 => (-(self.degree() as f64) * (r / 2.0).log10())
                .ceil()
                .max(0.0) as u32,
            _ => 0,
        };
        (1..=DEFAULT_SCHEDULE_LENGTH)
            .map(|k| Rational::new(BigInt::one(), BigInt::from(10).pow(k + shift)))
            .collect()
    }

    /// Window radius for points of the fiber `f = a`.
    pub fn radius(&self, a: &Rational) -> f64 {
        self.radius_scale * rational_to_f64(a).powf(1.0 / self.degree() as f64)
    }

    /// Window radius for critical points of `f + a l`. They solve
    /// `grad f = -a l`, so they sit at distance about `(a |l|)^{1/(d-1)}`.
    pub fn morsification_radius(&self, a: &Rational, l: &RationalLinearForm) -> f64 {
        let size = l
            .coefficients
            .iter()
            .map(|c| rational_to_f64(c).powi(2))
            .sum::<f64>()
            .sqrt();
        let d = self.degree().max(2) as f64;
        self.radius_scale * (rational_to_f64(a) * size).powf(1.0 / (d - 1.0))
    }

    fn sample_seed(&self, k: usize) -> u64 {
        self.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(k as u64 + 1)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InvariantsBlock {
    pub milnor: Option<usize>,
    pub section_milnor: Option<usize>,
    pub section_trials: Vec<SectionTrial>,
    /// Lagrange critical points near the origin (nearby route).
    pub lagrange_count: Option<i64>,
    /// Morsification critical points near the origin (vanishing route).
    pub morsification_count: Option<i64>,
    /// Signed real Morse counts by orientation of the test covector.
    pub signed_counts: BTreeMap<String, i64>,
    /// Stalk type when a single Morse point contributes.
    pub microlocal_types: BTreeMap<String, String>,
    /// Morsification counts of transversal slices of singular strata.
    pub transversal_counts: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub family: String,
    pub a: String,
    pub radius: f64,
    pub value: i64,
    pub total: usize,
    pub indices: Option<Vec<u32>>,
    pub worst_residual: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteResult {
    pub route: String,
    pub cycle: Vec<CycleEntry>,
    pub rendered: String,
}

impl RouteResult {
    fn ok(route: &str, c: &LagrangianCycle) -> Self {
        RouteResult {
            route: route.into(),
            cycle: c.entries(),
            rendered: c.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub mode: Mode,
    pub passed: bool,
    pub test_form: Vec<String>,
    pub schedule: Vec<String>,
    pub radii: Vec<f64>,
    /// Nonzero solutions of the limiting system, if it is zero-dimensional.
    pub far_points: Option<usize>,
    pub far_distance: Option<f64>,
    pub invariants: InvariantsBlock,
    pub strata: Vec<Stratum>,
    pub cycle: Vec<CycleEntry>,
    pub cycle_text: String,
    pub routes: Vec<RouteResult>,
    pub samples: Vec<SampleRecord>,
    pub constancy: BTreeMap<String, ConstancyReport>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl CrossCheckReport {
    fn new(spec: &FamilySpec, form: &RationalLinearForm) -> Self {
        CrossCheckReport {
            mode: spec.mode,
            passed: false,
            test_form: form.coefficients.iter().map(|c| c.to_string()).collect(),
            schedule: Vec::new(),
            radii: Vec::new(),
            far_points: None,
            far_distance: None,
            invariants: InvariantsBlock::default(),
            strata: Vec::new(),
            cycle: Vec::new(),
            cycle_text: String::new(),
            routes: Vec::new(),
            samples: Vec::new(),
            constancy: BTreeMap::new(),
            checks: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn set_cycle(&mut self, c: &LagrangianCycle) {
        self.strata = c.poset().strata().to_vec();
        self.cycle = c.entries();
        self.cycle_text = c.to_string();
    }

    fn finish(&mut self) {
        self.passed = self.checks.iter().all(|c| c.passed);
        self.warnings.sort();
        self.warnings.dedup();
    }
}

/// A computed cycle with the report that certifies it.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub cycle: LagrangianCycle,
    pub report: CrossCheckReport,
}

/// Limit geometry of one counting problem: far points and the resolved schedule.
struct Geometry {
    far: Option<Vec<Vec<Complex64>>>,
    /// Active schedule followed by the reserve decades.
    schedule: Vec<Rational>,
    radii: Vec<f64>,
    active: usize,
}

/// Extra decades the default schedule may slide into when its head has not
/// settled yet.
const SCHEDULE_RESERVE: usize = 3;

/// Random default forms tried before giving up on separating the far points.
const FORM_DRAWS: u64 = 5;
const FORM_SEED_STRIDE: u64 = 0x5851_F42D_4C95_7F2D;
/// Closer far points push the schedule to parameters where double precision
/// can no longer resolve the points near the origin.
const MIN_FAR_DISTANCE: f64 = 1e-3;

/// Far points of the limiting system, with an exact check that none of them
/// got merged into the origin by the numeric clustering.
fn separated_far_limit(
    spec: &FamilySpec,
    system_at_zero: &[Polynomial],
) -> Result<(Option<FarLimit>, std::result::Result<bool, String>)> {
    let far = far_limit_points(system_at_zero, spec.seed, &spec.tolerances)?;
    let Some(limit) = &far else {
        return Ok((
            far,
            Err("limiting system is not zero-dimensional; counting by radius only".into()),
        ));
    };
    let verdict = match local_quotient_dimension(system_at_zero, spec.degree_cap) {
        Ok(local) => Ok(limit.separated(local)),
        Err(Error::Undecided { degree_cap }) => {
            Err(format!("far-point separation not certified (local multiplicity undecided at degree {degree_cap})"))
        }
        Err(e) => return Err(e),
    };
    Ok((far, verdict))
}

/// Chooses the form and the limit geometry. A random default form is redrawn
/// while its far points fail the separation certificate; a form given by the
/// caller is kept and the failure reported.
fn geometry(
    spec: &FamilySpec,
    form: RationalLinearForm,
    redraw: bool,
    system_at_zero: impl Fn(&RationalLinearForm) -> Result<Vec<Polynomial>>,
    radius: impl Fn(&Rational, &RationalLinearForm) -> f64,
    report: &mut CrossCheckReport,
) -> Result<(RationalLinearForm, Geometry)> {
    let draws = if redraw { FORM_DRAWS } else { 1 };
    let mut chosen = None;
    for k in 0..draws {
        let form = if k == 0 {
            form.clone()
        } else {
            random_linear_form(
                spec.f.nvars(),
                spec.seed.wrapping_add(k.wrapping_mul(FORM_SEED_STRIDE)),
            )
        };
        let (far, verdict) = separated_far_limit(spec, &system_at_zero(&form)?)?;
        // a generic form gives a zero-dimensional limiting system
        let reason = match (&far, &verdict) {
            (None, _) => Some("limiting system is not zero-dimensional"),
            (_, Ok(false)) => Some("a far limit point is not separated from the origin"),
            (Some(l), _) if l.nearest().is_some_and(|r| r < MIN_FAR_DISTANCE) => {
                Some("a far limit point lies too close to the origin")
            }
            _ => None,
        };
        if let Some(reason) = reason.filter(|_| k + 1 < draws) {
            report
                .warnings
                .push(format!("form {} rejected: {reason}", form_text(&form)));
            continue;
        }
        match verdict {
            Ok(ok) => report.checks.push(Check::new(
                "far-separation",
                ok,
                if ok {
                    "far limit points certified away from the origin"
                } else {
                    "a far limit point is not separated from the origin"
                },
            )),
            Err(w) => report.warnings.push(w),
        }
        chosen = Some((form, far));
        break;
    }
    let (form, far) = chosen.expect("at least one draw");
    report.test_form = form.coefficients.iter().map(|c| c.to_string()).collect();
    let rho = far.as_ref().and_then(FarLimit::nearest);
    report.far_points = far.as_ref().map(|l| l.points.len());
    report.far_distance = rho;
    let mut schedule = spec.resolve_schedule(rho);
    let active = schedule.len();
    report.schedule = schedule.iter().map(|a| a.to_string()).collect();
    if spec.schedule.is_none() {
        let tenth = Rational::new(BigInt::one(), BigInt::from(10));
        for _ in 0..SCHEDULE_RESERVE {
            let next = schedule.last().expect("nonempty schedule") * &tenth;
            schedule.push(next);
        }
    }
    let radii: Vec<f64> = schedule.iter().map(|a| radius(a, &form)).collect();
    report.radii = radii[..active].to_vec();
    Ok((
        form,
        Geometry {
            far: far.map(|l| l.points),
            schedule,
            radii,
            active,
        },
    ))
}

fn form_text(form: &RationalLinearForm) -> String {
    let c: Vec<String> = form.coefficients.iter().map(|c| c.to_string()).collect();
    format!("({})", c.join(", "))
}

impl Geometry {
    fn window(&self, k: usize) -> CountWindow {
        CountWindow {
            radius: self.radii[k],
            far_points: self.far.clone().unwrap_or_default(),
        }
    }
}

fn record(family: &str, a: &Rational, radius: f64, res: &CountResult) -> SampleRecord {
    SampleRecord {
        family: family.into(),
        a: a.to_string(),
        radius,
        value: res.count as i64,
        total: res.total,
        indices: None,
        worst_residual: res.solutions.worst_residual(),
        warnings: res.warnings.clone(),
    }
}

/// Constancy check and stabilized value of an integer family.
fn stabilize(
    name: &str,
    samples: Vec<(Rational, i64)>,
    spec: &FamilySpec,
    report: &mut CrossCheckReport,
) -> Result<i64> {
    let fam = FamilyOfCycles::new(samples)?;
    let constancy = constancy_check(&fam);
    report.checks.push(Check::new(
        &format!("constancy[{name}]"),
        constancy.constant,
        if constancy.constant {
            format!("constant value {}", constancy.reference)
        } else {
            format!("deviating samples: {}", constancy.deviating.join(", "))
        },
    ));
    report.constancy.insert(name.to_string(), constancy);
    limit_of_family(&fam, spec.stability_window)
}

/// Evaluates a family on the active schedule. While the values disagree and
/// reserve decades remain, the head sample is dropped and the window slides
/// one decade deeper. Returns the offset of the window and its results.
fn sample_family<T: Send>(
    name: &str,
    geo: &Geometry,
    eval: impl Fn(usize) -> Result<T> + Sync,
    value: impl Fn(&T) -> i64,
    report: &mut CrossCheckReport,
) -> Result<(usize, Vec<T>)> {
    let first: Vec<Result<T>> = (0..geo.active).into_par_iter().map(&eval).collect();
    let mut results = first.into_iter().collect::<Result<Vec<T>>>()?;
    let mut start = 0;
    while start + geo.active < geo.schedule.len()
        && results[start..]
            .windows(2)
            .any(|w| value(&w[0]) != value(&w[1]))
    {
        results.push(eval(start + geo.active)?);
        start += 1;
    }
    if start > 0 {
        let dropped: Vec<String> = (0..start)
            .map(|k| format!("a={}: {}", geo.schedule[k], value(&results[k])))
            .collect();
        report.warnings.push(format!(
            "{name}: schedule moved {start} decade(s) deeper, dropped {}",
            dropped.join(", ")
        ));
    }
    results.drain(..start);
    Ok((start, results))
}

fn counted_family<F>(
    name: &str,
    spec: &FamilySpec,
    geo: &Geometry,
    count: F,
    report: &mut CrossCheckReport,
) -> Result<i64>
where
    F: Fn(&Rational, &CountWindow, u64) -> Result<CountResult> + Sync,
{
    let (start, results) = sample_family(
        name,
        geo,
        |k| count(&geo.schedule[k], &geo.window(k), spec.sample_seed(k)),
        |r| r.count as i64,
        report,
    )?;
    let mut samples = Vec::new();
    for (k, res) in (start..).zip(results) {
        let a = &geo.schedule[k];
        report
            .warnings
            .extend(res.warnings.iter().map(|w| format!("{name} at a={a}: {w}")));
        report.samples.push(record(name, a, geo.radii[k], &res));
        samples.push((a.clone(), res.count as i64));
    }
    stabilize(name, samples, spec, report)
}

fn require_singular_point(f: &Polynomial) -> Result<()> {
    if !f.constant_term().is_zero() {
        return Err(Error::NotOnHypersurface);
    }
    if f.gradient().iter().any(|g| !g.constant_term().is_zero()) {
        return Err(Error::SmoothPoint);
    }
    Ok(())
}

fn require_mode(spec: &FamilySpec, mode: Mode) -> Result<()> {
    if spec.mode != mode {
        return Err(Error::InvalidConfig(format!(
            "pipeline for mode {mode} called with mode {}",
            spec.mode
        )));
    }
    spec.validate()
}

fn single_point_type(indices: &[u32]) -> Option<String> {
    match indices {
        [0] => Some("C_{0}".into()),
        [k] => Some(format!("C_{{0}}[-{k}]")),
        _ => None,
    }
}

/// Real nearby cycles: signed Morse counts of `+phi` and `-phi` on the real
/// fibers `f = a`, stabilized as `a -> 0`.
pub fn cc_real_nearby(spec: &FamilySpec) -> Result<Analysis> {
    require_mode(spec, Mode::RealNearby)?;
    let f = &spec.f;
    require_singular_point(f)?;
    let n = f.nvars();
    let phi = spec
        .test_form
        .clone()
        .unwrap_or_else(|| RationalLinearForm::coordinate(n, 0));
    let mut report = CrossCheckReport::new(spec, &phi);
    let (phi, geo) = geometry(
        spec,
        phi,
        false,
        |c| lagrange_system(f, c, &Rational::zero()),
        |a, _| spec.radius(a),
        &mut report,
    )?;

    let mut limits = Vec::new();
    for o in [Orientation::Plus, Orientation::Minus] {
        let name = format!("signed-morse[{}dphi]", o.label());
        let (start, results) = sample_family(
            &name,
            &geo,
            |k| {
                real_signed_morse_count(
                    f,
                    &phi,
                    &geo.schedule[k],
                    &geo.window(k),
                    o,
                    spec.sample_seed(k),
                    &spec.tolerances,
                )
            },
            |r: &SignedMorseCount| r.signed_count,
            &mut report,
        )?;
        let mut samples = Vec::new();
        let mut last_indices = Vec::new();
        for (k, res) in (start..).zip(results) {
            let a = &geo.schedule[k];
            report.samples.push(SampleRecord {
                family: name.clone(),
                a: a.to_string(),
                radius: geo.radii[k],
                value: res.signed_count,
                total: res.indices.len(),
                indices: Some(res.indices.clone()),
                worst_residual: 0.0,
                warnings: Vec::new(),
            });
            samples.push((a.clone(), res.signed_count));
            last_indices = res.indices;
        }
        let value = stabilize(&name, samples, spec, &mut report)?;
        let key = format!("{}dphi", o.label());
        report.invariants.signed_counts.insert(key.clone(), value);
        if let Some(t) = single_point_type(&last_indices) {
            report.invariants.microlocal_types.insert(key, t);
        }
        limits.push(value);
    }

    let (plus, minus) = (limits[0], limits[1]);
    let (poset, pairs): (Arc<StratificationPoset>, Vec<(&str, i64)>) = if plus == minus {
        let p = StratificationPoset::new(vec![Stratum::new(ORIGIN, 0, n as u32)], &[])?;
        (Arc::new(p), vec![(ORIGIN, plus)])
    } else {
        let labels = ["0(+dphi)", "0(-dphi)"];
        let p = StratificationPoset::new(
            labels
                .iter()
                .map(|l| Stratum::new(*l, 0, n as u32))
                .collect(),
            &[],
        )?;
        (Arc::new(p), vec![(labels[0], plus), (labels[1], minus)])
    };
    let cycle = LagrangianCycle::from_pairs(&poset, pairs)?;
    report
        .routes
        .push(RouteResult::ok("signed-morse-limit", &cycle));
    report.set_cycle(&cycle);
    report.finish();
    Ok(Analysis { cycle, report })
}

fn default_form(spec: &FamilySpec) -> RationalLinearForm {
    spec.test_form
        .clone()
        .unwrap_or_else(|| random_linear_form(spec.f.nvars(), spec.seed))
}

fn profile_block(profile: &IsolatedSingularityProfile, report: &mut CrossCheckReport) {
    report.invariants.milnor = Some(profile.mu);
    report.invariants.section_milnor = Some(profile.mu_section);
    report.invariants.section_trials = profile.section.trials.clone();
    if let Some(w) = &profile.section.warning {
        report.warnings.push(w.clone());
    }
    report.checks.push(Check::new(
        "section-bound",
        true,
        format!(
            "m_(Z cap H) = {} {} m_Z = {} (recorded)",
            profile.mu_section,
            if profile.section_bounded() { "<=" } else { ">" },
            profile.mu
        ),
    ));
}

/// Complex nearby cycles of an isolated singularity: the Lagrange-point
/// limit against the index theorem applied to the Milnor fiber data.
pub fn cc_complex_nearby(spec: &FamilySpec) -> Result<Analysis> {
    require_mode(spec, Mode::Nearby)?;
    let f = &spec.f;
    if catalog::is_normal_crossings(f) {
        return Err(Error::Unsupported(
            "complex nearby cycles of non-isolated singularities".into(),
        ));
    }
    let profile =
        IsolatedSingularityProfile::compute_with_cap(f, spec.trials, spec.seed, spec.degree_cap)?;
    let phi = default_form(spec);
    let mut report = CrossCheckReport::new(spec, &phi);
    profile_block(&profile, &mut report);
    let redraw = spec.test_form.is_none();
    let (phi, geo) = geometry(
        spec,
        phi,
        redraw,
        |c| lagrange_system(f, c, &Rational::zero()),
        |a, _| spec.radius(a),
        &mut report,
    )?;

    let poset = isolated_poset(profile.n);
    let s = profile.sign();
    let route_a = counted_family(
        "lagrange",
        spec,
        &geo,
        |a, w, seed| restricted_critical_count(f, &phi, a, w, seed, &spec.tolerances),
        &mut report,
    )
    .and_then(|n_limit| {
        report.invariants.lagrange_count = Some(n_limit);
        LagrangianCycle::from_pairs(&poset, [(Z_REG, s), (ORIGIN, n_limit)])
    });
    let eu = isolated_euler_table(&poset, &profile);
    let route_b = cc_from_chi(&stalk_euler_nearby(&poset, &profile).chi, &eu);
    let route_a = route_a?;
    let route_b = route_b?;

    report.routes.push(RouteResult::ok("limit", &route_a));
    report.routes.push(RouteResult::ok("index", &route_b));
    report.checks.push(Check::new(
        "routes-agree",
        route_a == route_b,
        format!("limit {route_a} vs index {route_b}"),
    ));
    let n_limit = route_a.multiplicity(ORIGIN);
    let expected = (profile.mu + profile.mu_section) as i64;
    report.checks.push(Check::new(
        "le-identity",
        n_limit == expected,
        format!(
            "N = {n_limit}, m_Z + m_(Z cap H) = {} + {}",
            profile.mu, profile.mu_section
        ),
    ));
    report.set_cycle(&route_a);
    report.finish();
    Ok(Analysis {
        cycle: route_a,
        report,
    })
}

/// Vanishing cycles: Morsification count against the distinguished triangle.
pub fn cc_vanishing(spec: &FamilySpec) -> Result<Analysis> {
    require_mode(spec, Mode::Vanishing)?;
    if catalog::is_normal_crossings(&spec.f) {
        return cc_vanishing_normal_crossings(spec);
    }
    let f = &spec.f;
    let profile =
        IsolatedSingularityProfile::compute_with_cap(f, spec.trials, spec.seed, spec.degree_cap)?;
    let l = default_form(spec);
    let mut report = CrossCheckReport::new(spec, &l);
    profile_block(&profile, &mut report);
    // grad f does not depend on l, so a redraw cannot help here
    let (l, geo) = geometry(
        spec,
        l,
        false,
        |c| morsification_system(f, c, &Rational::zero()),
        |a, c| spec.morsification_radius(a, c),
        &mut report,
    )?;

    let poset = isolated_poset(profile.n);
    let m = counted_family(
        "morsification",
        spec,
        &geo,
        |a, w, seed| morsification_count(f, &l, a, w, seed, &spec.tolerances),
        &mut report,
    )?;
    report.invariants.morsification_count = Some(m);
    let route_a = LagrangianCycle::from_pairs(&poset, [(ORIGIN, m)])?;
    report
        .routes
        .push(RouteResult::ok("morsification", &route_a));

    let mut nearby_spec = spec.clone();
    nearby_spec.mode = Mode::Nearby;
    let nearby = cc_complex_nearby(&nearby_spec)?;
    report.invariants.lagrange_count = nearby.report.invariants.lagrange_count;
    report.samples.extend(nearby.report.samples.iter().cloned());
    report
        .warnings
        .extend(nearby.report.warnings.iter().cloned());
    for c in &nearby.report.checks {
        report.checks.push(Check::new(
            &format!("nearby:{}", c.name),
            c.passed,
            c.detail.clone(),
        ));
    }
    for (k, v) in &nearby.report.constancy {
        report.constancy.insert(k.clone(), v.clone());
    }
    let eu = isolated_euler_table(&poset, &profile);
    let restriction = cc_from_chi(&stalk_euler_restriction(&poset, &profile).chi, &eu)?;
    // the nearby cycle lives on an equal but separately built poset
    let nearby_cycle =
        LagrangianCycle::from_pairs(&poset, nearby.cycle.support().collect::<Vec<_>>())?;
    let route_b = nearby_cycle.sub(&restriction)?;
    report.routes.push(RouteResult::ok("triangle", &route_b));
    report.checks.push(Check::new(
        "routes-agree",
        route_a == route_b,
        format!("morsification {route_a} vs triangle {route_b}"),
    ));
    report.checks.push(Check::new(
        "milnor-count",
        m == profile.mu as i64,
        format!("Morsification count {m}, m_Z = {}", profile.mu),
    ));
    let expected_restriction = LagrangianCycle::from_pairs(
        &poset,
        [
            (Z_REG, sign(profile.n as i64 - 1)),
            (ORIGIN, profile.mu_section as i64),
        ],
    )?;
    report.checks.push(Check::new(
        "triangle",
        nearby_cycle.sub(&route_a)? == restriction && restriction == expected_restriction,
        format!("nearby - vanishing = {restriction}"),
    ));
    report.set_cycle(&route_a);
    report.finish();
    Ok(Analysis {
        cycle: route_a,
        report,
    })
}

/// `f` restricted to the affine slice `x_i = 1`, in the remaining variables.
fn slice_at_one(f: &Polynomial, i: usize) -> Result<Polynomial> {
    let n = f.nvars();
    let vars: Vec<String> = f
        .variables()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, v)| v.clone())
        .collect();
    let map: Vec<LinearImage> = (0..n)
        .map(|j| {
            if j == i {
                LinearImage {
                    constant: Rational::one(),
                    coefficients: vec![Rational::zero(); n - 1],
                }
            } else {
                LinearImage::variable(n - 1, if j < i { j } else { j - 1 })
            }
        })
        .collect();
    f.substitute_linear(&map, &vars)
}

fn cc_vanishing_normal_crossings(spec: &FamilySpec) -> Result<Analysis> {
    use normal_crossings as nc;
    let f = &spec.f;
    let l = default_form(spec);
    let mut report = CrossCheckReport::new(spec, &l);
    let schedule = spec.resolve_schedule(None);
    report.schedule = schedule.iter().map(|a| a.to_string()).collect();
    report.radii = vec![f64::MAX; schedule.len()];
    report
        .warnings
        .push("non-isolated catalog entry: critical points counted globally".into());
    let geo = Geometry {
        far: None,
        radii: report.radii.clone(),
        active: schedule.len(),
        schedule,
    };
    let global = CountWindow::global();

    let poset = nc::poset();
    let m0 = counted_family(
        "morsification[0]",
        spec,
        &geo,
        |a, _, seed| morsification_count(f, &l, a, &global, seed, &spec.tolerances),
        &mut report,
    )?;
    report.invariants.morsification_count = Some(m0);
    let mut pairs = vec![(ORIGIN.to_string(), m0)];
    for (i, line) in nc::LINES.iter().enumerate() {
        // L_i is the x_i-axis; {x_i = 1} is a transversal slice
        let g = slice_at_one(f, i)?;
        let li: Vec<Rational> = l
            .coefficients
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, c)| c.clone())
            .collect();
        let li = RationalLinearForm::new(li, l.seed);
        let name = format!("morsification[{line}]");
        let mi = counted_family(
            &name,
            spec,
            &geo,
            |a, _, seed| morsification_count(&g, &li, a, &global, seed, &spec.tolerances),
            &mut report,
        )?;
        report
            .invariants
            .transversal_counts
            .insert(line.to_string(), mi);
        let dim = poset.stratum(line).map(|s| s.dimension).unwrap_or(1) as i64;
        pairs.push((line.to_string(), sign(dim) * mi));
    }
    let route_a = LagrangianCycle::from_pairs(&poset, pairs.iter().map(|(s, m)| (s.as_str(), *m)))?;

    let eu = nc::euler_table(&poset);
    let nearby = cc_from_chi(&nc::stalk_euler(&poset, SheafKind::Nearby).chi, &eu)?;
    let restriction = cc_from_chi(&nc::stalk_euler(&poset, SheafKind::Restriction).chi, &eu)?;
    let route_b = nearby.sub(&restriction)?;
    let direct = cc_from_chi(&nc::stalk_euler(&poset, SheafKind::Vanishing).chi, &eu)?;

    report
        .routes
        .push(RouteResult::ok("morsification", &route_a));
    report.routes.push(RouteResult::ok("triangle", &route_b));
    report.routes.push(RouteResult::ok("index", &direct));
    report.checks.push(Check::new(
        "routes-agree",
        route_a == route_b,
        format!("morsification {route_a} vs triangle {route_b}"),
    ));
    report.checks.push(Check::new(
        "triangle",
        route_b == direct,
        format!("index route {direct}"),
    ));
    report.set_cycle(&route_a);
    report.finish();
    Ok(Analysis {
        cycle: route_a,
        report,
    })
}

/// Dispatch on the mode of the spec.
pub fn analyze(spec: &FamilySpec) -> Result<Analysis> {
    match spec.mode {
        Mode::RealNearby => cc_real_nearby(spec),
        Mode::Nearby => cc_complex_nearby(spec),
        Mode::Vanishing => cc_vanishing(spec),
    }
}

/// Registered inputs, including the non-isolated ones the pipelines accept.
pub mod catalog {
    use super::*;
    use crate::poly::{parse_poly, var_names};

    /// `c * x_1 x_2 x_3`.
    pub fn is_normal_crossings(f: &Polynomial) -> bool {
        f.nvars() == 3
            && f.num_terms() == 1
            && f.terms()
                .all(|(m, _)| m.exponents().iter().all(|&e| e == 1))
    }

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    pub struct CatalogEntry {
        pub name: String,
        pub poly: String,
        pub vars: Vec<String>,
        pub mode: Mode,
        /// Expected cycle as `(stratum, multiplicity)` pairs.
        pub expected: Vec<(String, i64)>,
    }

    impl CatalogEntry {
        pub fn polynomial(&self) -> Result<Polynomial> {
            parse_poly(&self.poly, &self.vars)
        }
    }

    fn entry(
        name: &str,
        poly: &str,
        vars: &[&str],
        mode: Mode,
        expected: &[(&str, i64)],
    ) -> CatalogEntry {
        CatalogEntry {
            name: name.into(),
            poly: poly.into(),
            vars: var_names(vars),
            mode,
            expected: expected.iter().map(|(s, m)| (s.to_string(), *m)).collect(),
        }
    }

    fn squares(n: usize) -> (String, Vec<String>) {
        let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let text = vars
            .iter()
            .map(|v| format!("{v}^2"))
            .collect::<Vec<_>>()
            .join(" + ");
        (text, vars)
    }

    /// `(name, poly, vars, n, m_Z, m_{Z cap H})`.
    pub type IsolatedEntry = (String, String, Vec<&'static str>, usize, i64, i64);

    /// Isolated singularities of the catalog.
    pub fn isolated() -> Vec<IsolatedEntry> {
        let mut out = vec![
            (
                "A1-curve".to_string(),
                "x^2 + y^2".to_string(),
                vec!["x", "y"],
                2,
                1,
                1,
            ),
            (
                "cusp".to_string(),
                "x^3 - y^2".to_string(),
                vec!["x", "y"],
                2,
                2,
                1,
            ),
        ];
        for k in 2..=5 {
            out.push((
                format!("A{k}"),
                format!("x^{} + y^2", k + 1),
                vec!["x", "y"],
                2,
                k,
                1,
            ));
        }
        out.push((
            "A1-surface".into(),
            "x^2 + y^2 + z^2".into(),
            vec!["x", "y", "z"],
            3,
            1,
            1,
        ));
        out.push((
            "fermat-cubic".into(),
            "x^3 + y^3 + z^3".into(),
            vec!["x", "y", "z"],
            3,
            8,
            4,
        ));
        out
    }

    /// The full acceptance catalog.
    pub fn entries() -> Vec<CatalogEntry> {
        let mut out = Vec::new();
        for n in 2..=4 {
            let (text, vars) = squares(n);
            let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
            let m = 1 + sign(n as i64 - 1);
            let expected: Vec<(&str, i64)> = if m == 0 { vec![] } else { vec![(ORIGIN, m)] };
            out.push(entry(
                &format!("real-sphere-{n}"),
                &text,
                &vars,
                Mode::RealNearby,
                &expected,
            ));
        }
        out.push(entry(
            "real-cusp",
            "x^3 - y^2",
            &["x", "y"],
            Mode::RealNearby,
            &[("0(+dphi)", 1), ("0(-dphi)", -1)],
        ));
        for (name, poly, vars, n, mz, mh) in isolated() {
            let s = sign(n as i64 - 1);
            out.push(entry(
                &format!("nearby-{name}"),
                &poly,
                &vars,
                Mode::Nearby,
                &[(Z_REG, s), (ORIGIN, mz + mh)],
            ));
            out.push(entry(
                &format!("vanishing-{name}"),
                &poly,
                &vars,
                Mode::Vanishing,
                &[(ORIGIN, mz)],
            ));
        }
        out.push(entry(
            "vanishing-normal-crossings",
            "x*y*z",
            &["x", "y", "z"],
            Mode::Vanishing,
            &[("L1", -1), ("L2", -1), ("L3", -1), (ORIGIN, 2)],
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, var_names};

    fn spec(text: &str, vars: &[&str], mode: Mode) -> FamilySpec {
        FamilySpec::new(parse_poly(text, &var_names(vars)).unwrap(), mode)
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn mode_names() {
        for m in [Mode::RealNearby, Mode::Nearby, Mode::Vanishing] {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{m}\""));
        }
        assert!("sideways".parse::<Mode>().is_err());
    }

    #[test]
    fn default_schedule_and_rescaling() {
        let s = spec("x^3 - y^2", &["x", "y"], Mode::Nearby);
        assert_eq!(
            s.resolve_schedule(None),
            vec![r(1, 10), r(1, 100), r(1, 1000), r(1, 10000)]
        );
        assert_eq!(s.resolve_schedule(Some(5.0)), s.resolve_schedule(None));
        // rho / 2 = 0.1, degree 3: three extra decades
        assert_eq!(s.resolve_schedule(Some(0.2))[0], r(1, 10_000));
        let given = vec![r(1, 2), r(1, 3), r(1, 4)];
        assert_eq!(
            s.clone()
                .with_schedule(given.clone())
                .resolve_schedule(Some(0.01)),
            given
        );
    }

    #[test]
    fn spec_validation() {
        let s = spec("x^2 + y^2", &["x", "y"], Mode::Nearby);
        assert!(s
            .clone()
            .with_schedule(vec![r(1, 10), r(1, 5), r(1, 100)])
            .validate()
            .is_err());
        assert!(s
            .clone()
            .with_schedule(vec![r(1, 10), r(1, 100)])
            .validate()
            .is_err());
        assert!(s
            .clone()
            .with_test_form(RationalLinearForm::from_integers(&[1, 2, 3]))
            .validate()
            .is_err());
        let mut bad = s.clone();
        bad.radius_scale = 0.0;
        assert!(bad.validate().is_err());
        assert!(s.validate().is_ok());
    }

    #[test]
    fn fermat_cubic_nearby() {
        let a =
            cc_complex_nearby(&spec("x^3 + y^3 + z^3", &["x", "y", "z"], Mode::Nearby)).unwrap();
        assert!(a.report.passed, "{:#?}", a.report.checks);
        assert_eq!(a.cycle.multiplicity(Z_REG), 1);
        assert_eq!(a.cycle.multiplicity(ORIGIN), 12);
        assert_eq!(a.report.invariants.lagrange_count, Some(12));
    }

    #[test]
    fn conic_nearby_and_vanishing() {
        let a = cc_complex_nearby(&spec("x^2 + y^2", &["x", "y"], Mode::Nearby)).unwrap();
        assert!(a.report.passed);
        assert_eq!(
            (a.cycle.multiplicity(Z_REG), a.cycle.multiplicity(ORIGIN)),
            (-1, 2)
        );
        let v = cc_vanishing(&spec("x^2 + y^2", &["x", "y"], Mode::Vanishing)).unwrap();
        assert!(v.report.passed, "{:#?}", v.report.checks);
        assert_eq!(v.cycle.to_string(), "[T*_0]");
    }

    #[test]
    fn cusp_real_nearby() {
        let a = cc_real_nearby(&spec("x^3 - y^2", &["x", "y"], Mode::RealNearby)).unwrap();
        assert!(a.report.passed);
        assert_eq!(a.cycle.multiplicity("0(+dphi)"), 1);
        assert_eq!(a.cycle.multiplicity("0(-dphi)"), -1);
        assert_eq!(a.report.invariants.microlocal_types["+dphi"], "C_{0}");
        assert_eq!(a.report.invariants.microlocal_types["-dphi"], "C_{0}[-1]");
    }

    #[test]
    fn unseparated_form_is_redrawn() {
        // the first form for this seed has a far limit point within clustering distance of 0
        let s = spec("2*x^5 - y^4", &["x", "y"], Mode::Nearby).with_seed(247);
        let a = cc_complex_nearby(&s).unwrap();
        assert!(a.report.passed, "{:#?}", a.report.checks);
        assert_eq!(a.cycle.multiplicity(ORIGIN), 15);
        assert!(a.report.warnings.iter().any(|w| w.contains("rejected")));
        assert_ne!(a.report.test_form, vec!["-2", "-50"]);

        let pinned = s.with_test_form(RationalLinearForm::from_integers(&[-2, -50]));
        let b = cc_complex_nearby(&pinned).unwrap();
        assert!(!b.report.passed);
        assert!(b
            .report
            .checks
            .iter()
            .any(|c| c.name == "far-separation" && !c.passed));
    }

    #[test]
    fn unsettled_head_moves_the_schedule() {
        let a = cc_complex_nearby(&spec("x^6 - y^5", &["x", "y"], Mode::Nearby).with_seed(214))
            .unwrap();
        assert!(a.report.passed, "{:#?}", a.report.checks);
        assert_eq!(a.cycle.multiplicity(ORIGIN), 24);
        assert!(a.report.warnings.iter().any(|w| w.contains("deeper")));
        assert_eq!(a.report.samples[0].a, "1/1000");
    }

    #[test]
    fn normal_crossings_vanishing() {
        let a = cc_vanishing(&spec("x*y*z", &["x", "y", "z"], Mode::Vanishing)).unwrap();
        assert!(a.report.passed, "{:#?}", a.report.checks);
        assert_eq!(
            a.cycle.to_string(),
            "-[T*_L1] - [T*_L2] - [T*_L3] + 2[T*_0]"
        );
        assert!(matches!(
            cc_complex_nearby(&spec("x*y*z", &["x", "y", "z"], Mode::Nearby)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn contract_errors() {
        assert_eq!(
            cc_complex_nearby(&spec("x", &["x"], Mode::Nearby)).unwrap_err(),
            Error::SmoothPoint
        );
        assert_eq!(
            cc_vanishing(&spec("x^2 + 1", &["x"], Mode::Vanishing)).unwrap_err(),
            Error::NotOnHypersurface
        );
        assert!(matches!(
            cc_real_nearby(&spec("x^2 + y^2", &["x", "y"], Mode::Nearby)),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn catalog_shape() {
        let entries = catalog::entries();
        let names: std::collections::BTreeSet<&str> =
            entries.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names.len(), entries.len());
        assert!(entries.iter().all(|e| e.polynomial().is_ok()));
        assert!(catalog::is_normal_crossings(
            &entries.last().unwrap().polynomial().unwrap()
        ));
    }
}
