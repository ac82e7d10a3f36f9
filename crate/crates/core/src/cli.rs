//! Batch runner behind the `kappamu` binary.
//!
//! A run is described by a JSON [`RunConfig`]; command-line flags override
//! individual fields. Every command produces a [`ReportEnvelope`] and an exit
//! code: 0 when everything passes, 2 when some named check is flagged, 1 on
//! usage, configuration or I/O errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::biharmonic::{find_roots, leaf_report, BiharmonicityReport, RootRecord, Submanifold};
use crate::checks::{random_points, run_checks, CheckRecord, Tolerances};
use crate::error::{Error, Result};
use crate::foliation::{integrate_foliation, Branch, FoliationParams, FoliationRow};
use crate::jets::{Interval, LambdaFamily};
use crate::manifold::{GaugeFunction, GaugeFunctions, ModelSpace, SignChoice};
use crate::tensor::{audit_identities, AuditRecord, AuditStatus};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Oracle bitension norm above which a reported root is flagged.
pub const ROOT_ORACLE_TOL: f64 = 1e-7;

/// Fraction of the domain scanned by root searches when no interval is given.
pub const ROOT_SCAN_FRACTION: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Verify,
    Audit,
    CurveRoots,
    SurfaceRoots,
    Foliate,
    LeafReport,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Audit => "audit",
            Command::CurveRoots => "curve-roots",
            Command::SurfaceRoots => "surface-roots",
            Command::Foliate => "foliate",
            Command::LeafReport => "leaf-report",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        <Self as ValueEnum>::value_variants().iter().copied().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    Power { n: f64 },
    SqrtLinear { a: f64, b: f64 },
    Constant { value: f64 },
}

impl FamilySpec {
    pub fn build(&self) -> Result<LambdaFamily> {
        match *self {
            FamilySpec::Power { n } => LambdaFamily::power(n),
            FamilySpec::SqrtLinear { a, b } => LambdaFamily::sqrt_linear(a, b),
            FamilySpec::Constant { value } => LambdaFamily::constant(value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaugeSpec {
    Zero,
    Sin,
    Poly { coeffs: Vec<f64> },
}

impl GaugeSpec {
    fn build(&self) -> GaugeFunction {
        match self {
            GaugeSpec::Zero => GaugeFunction::Zero,
            GaugeSpec::Sin => GaugeFunction::Sin,
            GaugeSpec::Poly { coeffs } => GaugeFunction::Poly(coeffs.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoliationSpec {
    pub beta: f64,
    pub lambda0: f64,
    pub z0: f64,
    pub step: f64,
    pub span: f64,
    pub branch: Branch,
}

impl Default for FoliationSpec {
    fn default() -> Self {
        Self { beta: 0.0, lambda0: 1.0, z0: 0.0, step: 1e-3, span: 1.0, branch: Branch::Decreasing }
    }
}

/// A validated run description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub family: Option<FamilySpec>,
    pub sign: SignChoice,
    pub gauge_f: GaugeSpec,
    pub gauge_h: GaugeSpec,
    pub command: Option<Command>,
    pub points: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub interval: Option<(f64, f64)>,
    pub grid: usize,
    pub c: Option<f64>,
    pub which: Submanifold,
    pub foliation: FoliationSpec,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            family: None,
            sign: SignChoice::Plus,
            gauge_f: GaugeSpec::Zero,
            gauge_h: GaugeSpec::Zero,
            command: None,
            points: 100,
            seed: 42,
            tol: None,
            interval: None,
            grid: 10_000,
            c: None,
            which: Submanifold::Surface,
            foliation: FoliationSpec::default(),
            out: None,
            format: Format::Json,
        }
    }
}

/// Collects every problem in a config document instead of stopping at the first.
struct Reader {
    errors: Vec<String>,
}

impl Reader {
    fn object<'a>(&mut self, v: &'a Value, path: &str, allowed: &[&str]) -> Option<&'a Map<String, Value>> {
        let Some(obj) = v.as_object() else {
            self.errors.push(format!("{path}: expected an object"));
            return None;
        };
        for key in obj.keys() {
            if !allowed.contains(&key.as_str()) {
                let full = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                self.errors.push(format!("unknown key `{full}`"));
            }
        }
        Some(obj)
    }

    fn f64(&mut self, obj: &Map<String, Value>, path: &str, key: &str) -> Option<f64> {
        let v = obj.get(key)?;
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.errors.push(format!("`{}`: expected a finite number, got {v}", join(path, key)));
                None
            }
        }
    }

    fn required_f64(&mut self, obj: &Map<String, Value>, path: &str, key: &str) -> Option<f64> {
        if !obj.contains_key(key) {
            self.errors.push(format!("`{}`: missing", join(path, key)));
            return None;
        }
        self.f64(obj, path, key)
    }

    fn uint(&mut self, obj: &Map<String, Value>, key: &str) -> Option<u64> {
        let v = obj.get(key)?;
        let n = v.as_u64();
        if n.is_none() {
            self.errors.push(format!("`{key}`: expected a non-negative integer, got {v}"));
        }
        n
    }

    fn string<'a>(&mut self, obj: &'a Map<String, Value>, path: &str, key: &str) -> Option<&'a str> {
        let v = obj.get(key)?;
        let s = v.as_str();
        if s.is_none() {
            self.errors.push(format!("`{}`: expected a string, got {v}", join(path, key)));
        }
        s
    }

    fn choice<T>(&mut self, obj: &Map<String, Value>, path: &str, key: &str, parse: impl Fn(&str) -> Option<T>, options: &str) -> Option<T> {
        let s = self.string(obj, path, key)?;
        let out = parse(s);
        if out.is_none() {
            self.errors.push(format!("`{}`: expected one of {options}, got {s:?}", join(path, key)));
        }
        out
    }

    fn family(&mut self, v: &Value) -> Option<FamilySpec> {
        let kind = v.get("kind").and_then(Value::as_str);
        let (allowed, build): (&[&str], fn(&mut Self, &Map<String, Value>) -> Option<FamilySpec>) = match kind {
            Some("power") => (&["kind", "n"], |r, o| Some(FamilySpec::Power { n: r.required_f64(o, "family", "n")? })),
            Some("sqrt_linear") => (&["kind", "a", "b"], |r, o| {
                let a = r.required_f64(o, "family", "a");
                let b = r.required_f64(o, "family", "b");
                Some(FamilySpec::SqrtLinear { a: a?, b: b? })
            }),
            Some("constant") => (&["kind", "value"], |r, o| {
                Some(FamilySpec::Constant { value: r.required_f64(o, "family", "value")? })
            }),
            other => {
                self.errors.push(format!(
                    "`family.kind`: expected \"power\", \"sqrt_linear\" or \"constant\", got {}",
                    other.map_or_else(|| "nothing".to_string(), |k| format!("{k:?}"))
                ));
                return None;
            }
        };
        let obj = self.object(v, "family", allowed)?;
        build(self, obj)
    }

    fn gauge(&mut self, v: &Value, path: &str) -> Option<GaugeSpec> {
        if let Some(s) = v.as_str() {
            return match s {
                "zero" => Some(GaugeSpec::Zero),
                "sin" => Some(GaugeSpec::Sin),
                _ => {
                    self.errors.push(format!("`{path}`: expected \"zero\", \"sin\" or an object, got {s:?}"));
                    None
                }
            };
        }
        match v.get("kind").and_then(Value::as_str) {
            Some("zero") => self.object(v, path, &["kind"]).map(|_| GaugeSpec::Zero),
            Some("sin") => self.object(v, path, &["kind"]).map(|_| GaugeSpec::Sin),
            Some("poly") => {
                let obj = self.object(v, path, &["kind", "coeffs"])?;
                let coeffs = obj.get("coeffs").and_then(Value::as_array).and_then(|a| {
                    a.iter().map(|x| x.as_f64().filter(|x| x.is_finite())).collect::<Option<Vec<_>>>()
                });
                if coeffs.is_none() {
                    self.errors.push(format!("`{path}.coeffs`: expected an array of finite numbers"));
                }
                Some(GaugeSpec::Poly { coeffs: coeffs? })
            }
            _ => {
                self.errors.push(format!("`{path}.kind`: expected \"zero\", \"sin\" or \"poly\""));
                None
            }
        }
    }

    fn interval(&mut self, v: &Value) -> Option<(f64, f64)> {
        let parsed = match v {
            Value::String(s) => parse_interval(s).ok(),
            Value::Array(a) if a.len() == 2 => a[0].as_f64().zip(a[1].as_f64()),
            _ => None,
        };
        match parsed {
            Some((lo, hi)) if lo < hi => Some((lo, hi)),
            _ => {
                self.errors.push(format!("`interval`: expected \"lo:hi\" or [lo, hi] with lo < hi, got {v}"));
                None
            }
        }
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

pub fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::InvalidArgument(format!("interval must look like lo:hi, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo < hi) {
        return Err(bad());
    }
    Ok((lo, hi))
}

const TOP_KEYS: &[&str] = &[
    "family", "sign", "gauges", "command", "points", "seed", "tol", "interval", "grid", "c", "which", "foliation",
    "out", "format",
];

impl RunConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Config(vec![format!("invalid JSON: {e}")]))?;
        Self::from_value(&v)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_json_str(&text)
    }

    /// Validates a config document, reporting every offending key at once.
    pub fn from_value(v: &Value) -> Result<Self> {
        let mut r = Reader { errors: Vec::new() };
        let mut cfg = RunConfig::default();
        if let Some(obj) = r.object(v, "", TOP_KEYS) {
            if let Some(f) = obj.get("family") {
                cfg.family = r.family(f);
            }
            if let Some(s) = r.choice(obj, "", "sign", |s| match s {
                "plus" => Some(SignChoice::Plus),
                "minus" => Some(SignChoice::Minus),
                _ => None,
            }, "\"plus\", \"minus\"") {
                cfg.sign = s;
            }
            if let Some(g) = obj.get("gauges") {
                if let Some(gobj) = r.object(g, "gauges", &["f", "h"]) {
                    if let Some(f) = gobj.get("f") {
                        cfg.gauge_f = r.gauge(f, "gauges.f").unwrap_or(GaugeSpec::Zero);
                    }
                    if let Some(h) = gobj.get("h") {
                        cfg.gauge_h = r.gauge(h, "gauges.h").unwrap_or(GaugeSpec::Zero);
                    }
                }
            }
            cfg.command = r.choice(obj, "", "command", Command::parse, "verify, audit, curve-roots, surface-roots, foliate, leaf-report");
            if let Some(n) = r.uint(obj, "points") {
                cfg.points = n as usize;
            }
            if let Some(n) = r.uint(obj, "seed") {
                cfg.seed = n;
            }
            cfg.tol = r.f64(obj, "", "tol");
            if let Some(i) = obj.get("interval") {
                cfg.interval = r.interval(i);
            }
            if let Some(n) = r.uint(obj, "grid") {
                cfg.grid = n as usize;
            }
            cfg.c = r.f64(obj, "", "c");
            if let Some(w) = r.choice(obj, "", "which", parse_which, "\"curve\", \"surface\"") {
                cfg.which = w;
            }
            if let Some(f) = obj.get("foliation") {
                if let Some(fobj) = r.object(f, "foliation", &["beta", "lambda0", "z0", "step", "span", "branch"]) {
                    let d = &mut cfg.foliation;
                    for (key, slot) in [
                        ("beta", &mut d.beta),
                        ("lambda0", &mut d.lambda0),
                        ("z0", &mut d.z0),
                        ("step", &mut d.step),
                        ("span", &mut d.span),
                    ] {
                        if let Some(x) = r.f64(fobj, "foliation", key) {
                            *slot = x;
                        }
                    }
                    if let Some(b) = r.choice(fobj, "foliation", "branch", |s| s.parse().ok(), "\"increasing\", \"decreasing\"") {
                        d.branch = b;
                    }
                }
            }
            if let Some(p) = r.string(obj, "", "out") {
                cfg.out = Some(PathBuf::from(p));
            }
            if let Some(f) = r.choice(obj, "", "format", |s| Format::from_str(s, false).ok(), "\"json\", \"csv\"") {
                cfg.format = f;
            }
        }
        if r.errors.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(r.errors))
        }
    }

    pub fn model_space(&self) -> Result<ModelSpace> {
        let family = self
            .family
            .ok_or_else(|| Error::Config(vec!["`family`: missing (required by this command)".into()]))?
            .build()?;
        let gauges = GaugeFunctions { f: self.gauge_f.build(), h: self.gauge_h.build() };
        Ok(ModelSpace::new(family, self.sign).with_gauges(gauges))
    }

    pub fn foliation_params(&self) -> FoliationParams {
        let f = &self.foliation;
        FoliationParams {
            beta_const: f.beta,
            sign: self.sign,
            lambda0: f.lambda0,
            z0: f.z0,
            step: f.step,
            span: f.span,
            branch: f.branch,
        }
    }
}

fn parse_which(s: &str) -> Option<Submanifold> {
    match s {
        "curve" => Some(Submanifold::Curve),
        "surface" => Some(Submanifold::Surface),
        _ => None,
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "kappamu", version, about = "Curvature and biharmonicity checks on generalized (κ, μ) model spaces")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub command: Option<Command>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Scan range for root searches, as lo:hi.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of random points for verify and audit.
    #[arg(long)]
    pub points: Option<usize>,
    /// Leaf height for leaf-report.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// curve or surface, for leaf-report.
    #[arg(long)]
    pub which: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub lambda0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub span: Option<f64>,
    /// increasing or decreasing.
    #[arg(long)]
    pub branch: Option<String>,
}

impl Cli {
    /// Loads the config file (if any) and applies the flag overrides.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_path(p)?,
            None => RunConfig::default(),
        };
        let mut errors = Vec::new();
        if let Some(c) = self.command {
            cfg.command = Some(c);
        }
        if let Some(p) = &self.out {
            cfg.out = Some(p.clone());
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.tol {
            cfg.tol = Some(t);
        }
        if let Some(i) = &self.interval {
            match parse_interval(i) {
                Ok(i) => cfg.interval = Some(i),
                Err(e) => errors.push(format!("--interval: {e}")),
            }
        }
        if let Some(g) = self.grid {
            cfg.grid = g;
        }
        if let Some(n) = self.points {
            cfg.points = n;
        }
        if let Some(c) = self.c {
            cfg.c = Some(c);
        }
        if let Some(w) = &self.which {
            match parse_which(w) {
                Some(w) => cfg.which = w,
                None => errors.push(format!("--which: expected curve or surface, got {w:?}")),
            }
        }
        let f = &mut cfg.foliation;
        for (flag, slot) in [
            (self.beta, &mut f.beta),
            (self.lambda0, &mut f.lambda0),
            (self.z0, &mut f.z0),
            (self.step, &mut f.step),
            (self.span, &mut f.span),
        ] {
            if let Some(x) = flag {
                *slot = x;
            }
        }
        if let Some(b) = &self.branch {
            match b.parse() {
                Ok(b) => f.branch = b,
                Err(e) => errors.push(format!("--branch: {e}")),
            }
        }
        if errors.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(errors))
        }
    }
}

/// Rows of a report, one variant per command.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Rows {
    Checks(Vec<CheckRecord>),
    Audit(Vec<AuditRecord>),
    Roots(Vec<RootRecord>),
    Foliation(Vec<FoliationRow>),
    Leaf(Vec<BiharmonicityReport>),
}

impl Rows {
    pub fn len(&self) -> usize {
        match self {
            Rows::Checks(r) => r.len(),
            Rows::Audit(r) => r.len(),
            Rows::Roots(r) => r.len(),
            Rows::Foliation(r) => r.len(),
            Rows::Leaf(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub pass_count: usize,
    pub flag_count: usize,
    /// Name of every flagged identity or record.
    pub flags: Vec<String>,
    /// Extra scalar facts about the run (termination reason, drift, ...).
    pub notes: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEnvelope {
    pub tool_version: String,
    /// Seconds since the Unix epoch; the only field that varies between identical runs.
    pub timestamp: u64,
    pub config: RunConfig,
    pub command: Command,
    pub rows: Rows,
    pub summary: Summary,
}

impl ReportEnvelope {
    pub fn exit_code(&self) -> i32 {
        if self.summary.flag_count > 0 {
            2
        } else {
            0
        }
    }
}

struct Tally {
    pass: usize,
    flags: Vec<String>,
    notes: Map<String, Value>,
}

impl Tally {
    fn new() -> Self {
        Self { pass: 0, flags: Vec::new(), notes: Map::new() }
    }

    fn record(&mut self, name: impl Into<String>, ok: bool) {
        if ok {
            self.pass += 1;
        } else {
            self.flags.push(name.into());
        }
    }

    fn note(&mut self, key: &str, v: impl Into<Value>) {
        self.notes.insert(key.to_string(), v.into());
    }

    fn finish(self) -> Summary {
        Summary { pass_count: self.pass, flag_count: self.flags.len(), flags: self.flags, notes: self.notes }
    }
}

/// Runs `command` (or the config's command) and builds the report.
pub fn run(command: Option<Command>, config: &RunConfig) -> Result<ReportEnvelope> {
    let command = command
        .or(config.command)
        .ok_or_else(|| Error::Config(vec!["no command given (use --command or the `command` key)".into()]))?;
    let mut tally = Tally::new();
    let rows = match command {
        Command::Verify => {
            let space = config.model_space()?;
            let tol = config.tol.map_or_else(Tolerances::default, Tolerances::uniform);
            let report = run_checks(&space, &random_points(&space, config.points, config.seed), &tol)?;
            for r in &report.records {
                tally.record(&r.name, r.status == AuditStatus::Pass);
            }
            tally.note("min_sasakian_defect", report.min_sasakian_defect);
            Rows::Checks(report.records)
        }
        Command::Audit => {
            let space = config.model_space()?;
            let points = random_points(&space, config.points, config.seed);
            let report = audit_identities(&space, &points, config.tol.unwrap_or(1e-8))?;
            for r in &report.records {
                tally.record(&r.name, r.status == AuditStatus::Pass);
            }
            Rows::Audit(report.records)
        }
        Command::CurveRoots | Command::SurfaceRoots => {
            let space = config.model_space()?;
            let which = if command == Command::CurveRoots { Submanifold::Curve } else { Submanifold::Surface };
            let interval = match config.interval {
                Some((lo, hi)) => Interval::new(lo, hi)?,
                None => space.family.domain.interior(ROOT_SCAN_FRACTION),
            };
            let roots = find_roots(&space, which, interval, config.grid, config.tol.unwrap_or(1e-12))?;
            for r in &roots {
                tally.record(format!("root@{}", r.root), r.oracle_bitension_norm < ROOT_ORACLE_TOL);
            }
            tally.note("interval_lo", interval.lo);
            tally.note("interval_hi", interval.hi);
            Rows::Roots(roots)
        }
        Command::Foliate => {
            let params = config.foliation_params();
            let sol = integrate_foliation(&params)?;
            let tol = config.tol.unwrap_or(1e-8);
            tally.note("termination", sol.termination.to_string());
            tally.note("samples", sol.samples.len());
            if sol.is_empty() {
                tally.record("trajectory_nonempty", false);
            } else {
                let drift = sol.drift_per_unit_z();
                tally.note("drift_per_unit_z", drift);
                tally.record("first_integral_drift", drift < tol);
            }
            Rows::Foliation(sol.rows())
        }
        Command::LeafReport => {
            let space = config.model_space()?;
            let c = config
                .c
                .ok_or_else(|| Error::Config(vec!["`c`: missing (required by leaf-report)".into()]))?;
            let rep = leaf_report(&space, config.which, c, config.tol.unwrap_or(ROOT_ORACLE_TOL))?;
            tally.record("criterion_oracle_agreement", rep.consistent);
            Rows::Leaf(vec![rep])
        }
    };
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    Ok(ReportEnvelope {
        tool_version: TOOL_VERSION.to_string(),
        timestamp,
        config: config.clone(),
        command,
        rows,
        summary: tally.finish(),
    })
}

/// A number with 17 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

enum Cell {
    Num(f64),
    Text(String),
}

fn csv_table(header: &[&str], rows: Vec<Vec<Cell>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row
            .into_iter()
            .map(|c| match c {
                Cell::Num(x) => format_number(x),
                Cell::Text(s) => s,
            })
            .collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

fn status_text(s: AuditStatus) -> Cell {
    Cell::Text(if s == AuditStatus::Pass { "pass" } else { "flagged" }.into())
}

/// CSV rendering of the rows table, header line included.
pub fn to_csv(rows: &Rows) -> String {
    use Cell::{Num, Text};
    match rows {
        Rows::Checks(r) => csv_table(
            &["name", "residual", "tolerance", "status", "x", "y", "z"],
            r.iter()
                .map(|r| vec![Text(r.name.clone()), Num(r.residual), Num(r.tolerance), status_text(r.status), Num(r.x), Num(r.y), Num(r.z)])
                .collect(),
        ),
        Rows::Audit(r) => csv_table(
            &["name", "lhs", "rhs", "abs_residual", "tolerance", "status", "z"],
            r.iter()
                .map(|r| vec![Text(r.name.clone()), Num(r.lhs), Num(r.rhs), Num(r.abs_residual), Num(r.tolerance), status_text(r.status), Num(r.z)])
                .collect(),
        ),
        Rows::Roots(r) => csv_table(
            &["c", "criterion_residual", "lambda", "lambda_prime", "bitension_norm"],
            r.iter()
                .map(|r| vec![Num(r.root), Num(r.criterion_residual), Num(r.lambda), Num(r.lambda_prime), Num(r.oracle_bitension_norm)])
                .collect(),
        ),
        Rows::Foliation(r) => csv_table(
            &["z", "lambda", "lambda_prime", "rhs", "F_surf"],
            r.iter().map(|r| vec![Num(r.z), Num(r.lambda), Num(r.lambda_prime), Num(r.rhs), Num(r.f_surf)]).collect(),
        ),
        Rows::Leaf(r) => csv_table(
            &["which", "c", "criterion_value", "criterion_scaled", "lambda_prime", "bitension_norm", "curvature", "verdict", "consistent"],
            r.iter()
                .map(|r| {
                    let verdict = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
                    vec![
                        Text(r.which.name().into()),
                        Num(r.c),
                        Num(r.criterion_value),
                        Num(r.criterion_scaled),
                        Num(r.lambda_prime),
                        Num(r.bitension_norm),
                        Num(r.curvature),
                        Text(verdict),
                        Text(r.consistent.to_string()),
                    ]
                })
                .collect(),
        ),
    }
}

pub fn render(report: &ReportEnvelope, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        }
        Format::Csv => to_csv(&report.rows),
    })
}

/// Writes the report to `path`, or to standard output when `path` is `None`.
pub fn emit(report: &ReportEnvelope, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(report, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io { path: p.to_path_buf(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.resolve().and_then(|cfg| {
        let report = run(None, &cfg)?;
        emit(&report, cfg.format, cfg.out.as_deref())?;
        Ok(report.exit_code())
    }) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
