//! Run configuration, versioned reports and the five commands behind the
//! `polylike` binary. Every number in a report carries its provenance and
//! tolerance; reports are deterministic apart from [`Metadata`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::builder::{assemble_polylike, build_omega, OmegaDomain, PolyLikeMap, Variant};
use crate::dynamics::{Family, OrbitSegment, RealInterval};
use crate::error::{Error, Result};
use crate::geometry::{
    a_star, h_root_report, intersection_theta0, intersection_z, solve_c1, solve_d15, spiral_point, PoincareNeighborhood,
};
use crate::real_bounds::{k_bound, k_star, k_star_limit, measure_space_ratio};
use crate::return_maps::{closest_return_times, detect_renormalization, fibonacci_numbers, LevelData, LevelKind};
use crate::search::{ParameterQuery, SearchTarget};

pub const SCHEMA_VERSION: &str = "polylike-report/1";
/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "POLYLIKE_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "polylike-out";
/// Half-width of the SVG view box.
pub const SVG_HALF_WIDTH: f64 = 2.5;

/// Reference values of the `K*` table: `(ℓ, y, value, printed digits)`.
/// A reference printed with `d` decimals and trailing dots is a truncation;
/// see [`reference_matches`].
pub const K_STAR_REFERENCES: [(u32, f64, f64, u32); 7] = [
    (2, 0.625, 1.19371, 5),
    (4, 0.625, 0.951366, 6),
    (2, 2.0 / 3.0, 1.36237, 5),
    (4, 2.0 / 3.0, 1.0941, 4),
    (6, 2.0 / 3.0, 1.02502, 5),
    (8, 2.0 / 3.0, 0.993, 3),
    (2, 0.75, 1.8660, 4),
];
/// `lim K*_ℓ(3/4)`, printed with four decimals.
pub const K_STAR_LIMIT_REFERENCE: (f64, f64, u32) = (0.75, 1.2788, 4);
/// Further constants: `(label, value, reference)`, each computed by [`extra_constants`].
pub const EXTRA_REFERENCES: [(&str, f64); 3] =
    [("K_bound(4, 0.51, 0.75)", 0.991818), ("K*_4(0.8025)", 1.97063), ("K*_4(0.75)", 1.51983)];

pub fn extra_constants() -> Result<[f64; 3]> {
    Ok([k_bound(4, 0.51, 0.75)?, k_star(4, 0.8025)?, k_star(4, 0.75)?])
}

/// Tolerance of the table comparisons.
pub const TABLE_TOL: f64 = 1e-4;

/// `|value - reference| < tol`, or `value` truncated to the printed
/// `digits` equals the reference when fewer than four decimals are printed.
pub fn reference_matches(value: f64, reference: f64, digits: u32, tol: f64) -> bool {
    if (value - reference).abs() < tol {
        return true;
    }
    let scale = 10f64.powi(digits as i32);
    digits < 4 && ((value * scale).floor() - (reference * scale).round()).abs() < 0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Everything a run needs. Missing fields take their defaults; command-line
/// flags override values read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub degree: u32,
    pub c1: Option<f64>,
    /// `superstable:P`, `cascade:D` or `fibonacci:D`.
    pub param_query: Option<String>,
    pub variant: Option<Variant>,
    /// Angles to try; empty means the variant's defaults.
    pub theta: Vec<f64>,
    pub levels: usize,
    /// Base boundary angles of the constructions.
    pub samples: usize,
    /// Slack of the space-bound checks.
    pub tol: f64,
    pub out_dir: Option<PathBuf>,
    /// Emitted formats; empty means all that apply.
    pub format: Vec<Format>,
    pub degree_grid: Vec<u32>,
    pub y_grid: Vec<f64>,
    pub k_grid: Vec<f64>,
    /// Closest returns listed by `analyze`.
    pub return_depth: usize,
    /// Orbit budget of the return-map computations.
    pub budget: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            degree: 2,
            c1: None,
            param_query: None,
            variant: None,
            theta: Vec::new(),
            levels: 6,
            samples: crate::geometry::BOUNDARY_ANGLES,
            tol: 1e-6,
            out_dir: None,
            format: Vec::new(),
            degree_grid: vec![2, 4, 6, 8],
            y_grid: vec![0.625, 2.0 / 3.0, 0.75],
            k_grid: vec![1.5, 2.0, 2.2, 3.0],
            return_depth: 8,
            budget: 1 << 20,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.degree < 2 || !self.degree.is_multiple_of(2) {
            return bad(format!("degree {} must be even and >= 2", self.degree));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol {} must be positive", self.tol));
        }
        if let Some(t) = self.theta.iter().find(|t| !(**t > 0.0 && **t <= std::f64::consts::FRAC_PI_2)) {
            return bad(format!("theta {t} must lie in (0, π/2]"));
        }
        if self.samples < 16 {
            return bad(format!("samples {} must be at least 16", self.samples));
        }
        if self.levels == 0 || self.return_depth == 0 || self.budget == 0 {
            return bad("levels, return_depth and budget must be positive".into());
        }
        if let Some(y) = self.y_grid.iter().find(|y| !(**y > 0.0 && **y < 1.0)) {
            return bad(format!("y = {y} must lie in (0, 1)"));
        }
        if let Some(k) = self.k_grid.iter().find(|k| !(**k >= 1.0)) {
            return bad(format!("K = {k} must be at least 1"));
        }
        if let Some(l) = self.degree_grid.iter().find(|l| **l < 2 || **l % 2 != 0) {
            return bad(format!("grid degree {l} must be even and >= 2"));
        }
        if let Some(q) = &self.param_query {
            q.parse::<SearchTarget>()?;
        }
        Ok(())
    }

    /// `out_dir`, else the environment variable, else [`DEFAULT_OUT_DIR`].
    pub fn output_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }

    pub fn wants(&self, f: Format) -> bool {
        self.format.is_empty() || self.format.contains(&f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Closed-form expression evaluated in floating point.
    Formula,
    /// Computed from orbits or sampled curves.
    Measurement,
    /// Located by a scan or bisection.
    Search,
    /// Given in the configuration.
    Input,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub provenance: Provenance,
    pub tolerance: f64,
}

impl Quantity {
    pub fn formula(value: f64) -> Self {
        Quantity { value, provenance: Provenance::Formula, tolerance: 1e-12 }
    }

    pub fn measured(value: f64, tolerance: f64) -> Self {
        Quantity { value, provenance: Provenance::Measurement, tolerance }
    }

    pub fn searched(value: f64, tolerance: f64) -> Self {
        Quantity { value, provenance: Provenance::Search, tolerance }
    }
}

/// A pass/fail comparison against a reference value or bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub values: BTreeMap<String, Quantity>,
    pub notes: BTreeMap<String, String>,
    pub error: Option<String>,
}

impl Section {
    pub fn new(name: impl Into<String>) -> Self {
        Section { name: name.into(), ..Default::default() }
    }

    fn value(&mut self, key: &str, q: Quantity) -> &mut Self {
        self.values.insert(key.to_string(), q);
        self
    }

    fn note(&mut self, key: &str, text: impl Into<String>) -> &mut Self {
        self.notes.insert(key.to_string(), text.into());
        self
    }
}

/// Excluded from comparisons between runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub crate_version: String,
    pub unix_time: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub config: RunConfig,
    pub parameter: Option<Quantity>,
    pub sections: Vec<Section>,
    pub checks: Vec<Check>,
    pub metadata: Metadata,
}

impl Report {
    fn new(command: &str, config: &RunConfig) -> Self {
        Report {
            schema: SCHEMA_VERSION.into(),
            command: command.into(),
            config: config.clone(),
            parameter: None,
            sections: Vec::new(),
            checks: Vec::new(),
            metadata: Metadata {
                crate_version: env!("CARGO_PKG_VERSION").into(),
                unix_time: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            },
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// 0 when every check passed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            2
        }
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    /// JSON with the metadata field removed.
    pub fn deterministic_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self).map_err(|e| Error::Io(e.to_string()))?;
        if let Some(o) = v.as_object_mut() {
            o.remove("metadata");
        }
        serde_json::to_string_pretty(&v).map_err(|e| Error::Io(e.to_string()))
    }
}

/// A report with the tables and drawings that go with it.
#[derive(Debug, Clone)]
pub struct Outputs {
    pub report: Report,
    pub csv: Option<String>,
    /// `(file name, document)`.
    pub svgs: Vec<(String, String)>,
}

impl Outputs {
    fn new(report: Report) -> Self {
        Outputs { report, csv: None, svgs: Vec::new() }
    }

    /// Writes the requested formats into `dir`; returns the written paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let cfg = &self.report.config;
        let mut written = Vec::new();
        let mut put = |name: &str, body: &str| -> Result<()> {
            let p = dir.join(name);
            std::fs::write(&p, body)?;
            written.push(p);
            Ok(())
        };
        let cmd = &self.report.command;
        if cfg.wants(Format::Json) {
            put(&format!("{cmd}.json"), &self.report.to_json()?)?;
        }
        if cfg.wants(Format::Csv) {
            if let Some(csv) = &self.csv {
                put(&format!("{cmd}.csv"), csv)?;
            }
        }
        if cfg.wants(Format::Svg) {
            for (name, body) in &self.svgs {
                put(name, body)?;
            }
        }
        Ok(written)
    }
}

/// The parameter of the run: `c1` if given, else the resolved query.
pub fn resolve_parameter(cfg: &RunConfig) -> Result<Quantity> {
    if let Some(c) = cfg.c1 {
        return Ok(Quantity { value: c, provenance: Provenance::Input, tolerance: 0.0 });
    }
    let q = cfg.param_query.as_deref().ok_or_else(|| Error::Config("give --c1 or --param-query".into()))?;
    let target: SearchTarget = q.parse()?;
    let c = ParameterQuery { degree: cfg.degree, target, bracket: None }.resolve()?;
    let tol = match target {
        SearchTarget::Fibonacci { .. } => 1e-9,
        _ => 1e-12,
    };
    Ok(Quantity::searched(c, tol))
}

// ---------------------------------------------------------------- bounds

/// `K*_ℓ(y)` over the degree and `y` grids, `lim K*_ℓ(y)` over the `y`
/// grid and `A_*(K)` over the `K` grid. The CSV has one row per grid cell of
/// the first table and one per `K`.
pub fn cmd_bounds(cfg: &RunConfig) -> Result<Outputs> {
    cfg.validate()?;
    let mut report = Report::new("bounds", cfg);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["table", "degree", "y", "k", "value"]).map_err(io)?;
    let mut table = Section::new("k_star");
    for &l in &cfg.degree_grid {
        for &y in &cfg.y_grid {
            let v = k_star(l, y)?;
            table.value(&format!("l={l},y={y}"), Quantity::formula(v));
            w.write_record(["k_star", &l.to_string(), &y.to_string(), "", &v.to_string()]).map_err(io)?;
        }
    }
    let mut limits = Section::new("k_star_limit");
    for &y in &cfg.y_grid {
        limits.value(&format!("y={y}"), Quantity::formula(k_star_limit(y)?));
    }
    let mut astar = Section::new("a_star");
    for &k in &cfg.k_grid {
        let v = a_star(k)?;
        astar.value(&format!("K={k}"), Quantity::formula(v));
        w.write_record(["a_star", "", "", &k.to_string(), &v.to_string()]).map_err(io)?;
    }
    for (l, y, r, d) in K_STAR_REFERENCES {
        let v = k_star(l, y)?;
        report.check(
            format!("K*_{l}({y:.4})"),
            reference_matches(v, r, d, TABLE_TOL),
            format!("computed {v:.6}, reference {r}"),
        );
    }
    let (y, r, d) = K_STAR_LIMIT_REFERENCE;
    let v = k_star_limit(y)?;
    report.check("lim K*(0.75)", reference_matches(v, r, d, TABLE_TOL), format!("computed {v:.6}, reference {r}"));
    let mut extra = Section::new("constants");
    for ((label, r), v) in EXTRA_REFERENCES.iter().zip(extra_constants()?) {
        extra.value(label, Quantity::formula(v));
        report.check(*label, (v - r).abs() < TABLE_TOL, format!("computed {v:.6}, reference {r}"));
    }
    report.sections.extend([table, limits, astar, extra]);
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    let mut out = Outputs::new(report);
    out.csv = Some(String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))?);
    Ok(out)
}

// ---------------------------------------------------------------- analyze

/// Attracting cycle of the critical orbit, if any: `(period, |multiplier|)`.
fn attracting_cycle(fam: &Family) -> Option<(usize, f64)> {
    let mut x = 0.0;
    for _ in 0..20_000 {
        x = fam.apply(x);
    }
    (1..=1024).find_map(|p| {
        let y = fam.iterate(x, p);
        let m = fam.derivative_iterate(x, p).abs();
        ((y - x).abs() < 1e-9 && m < 1.0).then_some((p, m))
    })
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Levels of the run: renormalization intervals when there are any,
/// otherwise the central nest (shortened if the orbit budget runs out).
pub fn run_levels(fam: &Family, cfg: &RunConfig) -> (Vec<LevelData>, Option<String>) {
    let max_period = 1usize << cfg.levels.min(20);
    let renorms = detect_renormalization(fam, max_period);
    if !renorms.is_empty() {
        return (renorms.iter().take(cfg.levels).map(LevelData::from_renormalization).collect(), None);
    }
    let mut last = None;
    for n in (1..=cfg.levels).rev() {
        match LevelData::from_nest(fam, n, cfg.budget) {
            Ok(l) => {
                let note = last.map(|e: Error| format!("levels {}..{} unavailable: {e}", n + 1, cfg.levels));
                return (l, note);
            }
            Err(e) => last = Some(e),
        }
    }
    (Vec::new(), last.map(|e| e.to_string()))
}

fn kind_name(k: LevelKind) -> &'static str {
    match k {
        LevelKind::Renormalizable { half_period: true } => "renormalizable (also of half period)",
        LevelKind::Renormalizable { half_period: false } => "renormalizable",
        LevelKind::HighReturn => "high return",
        LevelKind::LowReturn => "low return",
    }
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<Outputs> {
    cfg.validate()?;
    let mut report = Report::new("analyze", cfg);
    let c = resolve_parameter(cfg)?;
    report.parameter = Some(c);
    let fam = Family::new(cfg.degree, c.value)?;
    let mut class = Section::new("classification");
    let orbit = OrbitSegment::of(&fam, 0.0, 10_000);
    if let Some(step) = orbit.escaped_at {
        class.note("kind", "escaping").value("escaped_at", Quantity::measured(step as f64, 0.0));
        report.sections.push(class);
        return Ok(Outputs::new(report));
    }
    let renorms = detect_renormalization(&fam, 1 << cfg.levels.min(20));
    let attractor = attracting_cycle(&fam);
    let returns = closest_return_times(&fam, crate::return_maps::RETURN_BUDGET, cfg.return_depth);
    let fibonacci = returns.len() == cfg.return_depth && returns == fibonacci_numbers(cfg.return_depth);
    let kind = if !renorms.is_empty() {
        "renormalizable"
    } else if attractor.is_some() {
        "attracting"
    } else {
        "non-renormalizable"
    };
    class.note("kind", kind);
    class.note("renormalization_periods", join(&renorms.iter().map(|r| r.period).collect::<Vec<_>>()));
    class.note("closest_returns", join(&returns));
    class.note("fibonacci", fibonacci.to_string());
    if let Some((p, m)) = attractor {
        class.value("attractor_period", Quantity::measured(p as f64, 0.0));
        class.value("attractor_multiplier", Quantity::measured(m, 1e-9));
    }
    report.sections.push(class);
    let (levels, note) = run_levels(&fam, cfg);
    if let Some(n) = note {
        let mut s = Section::new("levels");
        s.error = Some(n);
        report.sections.push(s);
    }
    for (i, level) in levels.iter().enumerate() {
        let mut s = Section::new(format!("level {}", i + 1));
        s.note("kind", kind_name(level.kind));
        s.value("period", Quantity::measured(level.period as f64, 0.0));
        s.value("v", Quantity::measured(level.v, 1e-12));
        s.value("u", Quantity::measured(level.u, 1e-12));
        match measure_space_ratio(&fam, level) {
            Ok(m) => {
                s.value("space_ratio", Quantity::measured(m.ratio, 1e-9));
                s.value("image_ratio", Quantity::measured(m.image_ratio, 1e-9));
                if let Some(b) = m.bound {
                    s.value("space_bound", Quantity::formula(b.value()));
                    report.check(
                        format!("space level {} (s = {})", i + 1, level.period),
                        m.ratio >= b.value() - cfg.tol,
                        format!("ratio {:.6} against bound {:.6}", m.ratio, b.value()),
                    );
                }
            }
            Err(e) => s.error = Some(e.to_string()),
        }
        report.sections.push(s);
    }
    Ok(Outputs::new(report))
}

// ---------------------------------------------------------------- construct

/// Default variant for a level: doubling or quadratic for `ℓ = 2`
/// renormalizable levels, general otherwise.
pub fn default_variant(degree: u32, level: &LevelData) -> Variant {
    match (degree, level.kind) {
        (2, LevelKind::Renormalizable { half_period: true }) => Variant::Doubling,
        (2, _) => Variant::Quadratic,
        _ => Variant::General,
    }
}

/// A successful construction: angle, range and map.
pub type Construction = (f64, OmegaDomain, PolyLikeMap);

/// Tries the angles in order and keeps the first successful construction,
/// with the error of every angle tried before it.
pub fn construct_level(
    fam: &Family,
    level: &LevelData,
    variant: Variant,
    thetas: &[f64],
    samples: usize,
) -> (Option<Construction>, Vec<(f64, String)>) {
    let mut failures = Vec::new();
    for &t in thetas {
        let attempt = build_omega(fam, level, variant, t)
            .and_then(|o| assemble_polylike(fam, level, &o, samples).map(|p| (o, p)));
        match attempt {
            Ok((o, p)) => return (Some((t, o, p)), failures),
            Err(e) => failures.push((t, e.to_string())),
        }
    }
    (None, failures)
}

pub fn cmd_construct(cfg: &RunConfig) -> Result<Outputs> {
    cfg.validate()?;
    let mut report = Report::new("construct", cfg);
    let c = resolve_parameter(cfg)?;
    report.parameter = Some(c);
    let fam = Family::new(cfg.degree, c.value)?;
    if let Some(step) = OrbitSegment::of(&fam, 0.0, 10_000).escaped_at {
        let mut s = Section::new("construct");
        s.error = Some(Error::Escaped { step }.to_string());
        report.sections.push(s);
        return Ok(Outputs::new(report));
    }
    let (levels, note) = run_levels(&fam, cfg);
    if let Some(n) = note {
        let mut s = Section::new("levels");
        s.error = Some(n);
        report.sections.push(s);
    }
    let mut out = Outputs::new(report);
    let plans: Vec<(Variant, Vec<f64>)> = levels
        .iter()
        .map(|level| {
            let variant = cfg.variant.unwrap_or_else(|| default_variant(cfg.degree, level));
            (variant, if cfg.theta.is_empty() { variant.default_thetas() } else { cfg.theta.clone() })
        })
        .collect();
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = levels
            .iter()
            .zip(&plans)
            .map(|(level, (variant, thetas))| {
                scope.spawn(|| construct_level(&fam, level, *variant, thetas, cfg.samples))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("construction thread panicked")).collect()
    });
    for (i, ((level, (variant, thetas)), (ok, failures))) in levels.iter().zip(plans).zip(results).enumerate() {
        let n = i + 1;
        let mut s = Section::new(format!("level {n}"));
        s.note("variant", variant.name());
        s.note("kind", kind_name(level.kind));
        s.value("period", Quantity::measured(level.period as f64, 0.0));
        s.value("v", Quantity::measured(level.v, 1e-12));
        for (t, e) in &failures {
            s.note(&format!("theta={t}"), e.clone());
        }
        match &ok {
            Some((t, omega, plm)) => {
                let step = crate::builder::ARC_STEP * level.v;
                s.value("theta", Quantity::formula(*t));
                let trace = omega.real_trace();
                s.value("omega_left", Quantity::formula(trace.lo));
                s.value("omega_right", Quantity::formula(trace.hi));
                s.value("central_right", Quantity::measured(plm.central.real_trace.hi, 1e-12 * level.v));
                s.value("min_margin", Quantity::measured(plm.containment.min_margin, step));
                s.value("modulus_lower_bound", Quantity::measured(plm.containment.modulus_lower_bound, step / level.v));
                s.value("fitin_ratio", Quantity::measured(plm.fitin_ratio, 1e-9));
                s.value("off_central_domains", Quantity::measured(plm.off_central.len() as f64, 0.0));
                s.value("samples", Quantity::measured(plm.containment.samples as f64, 0.0));
                out.svgs.push((format!("construct_level{n}.svg"), construct_svg(omega, plm, level.v)));
            }
            None => s.error = Some("no angle passed".into()),
        }
        out.report.check(
            format!("containment level {n} (s = {})", level.period),
            ok.is_some(),
            match &ok {
                Some((t, _, p)) => format!("contained at θ = {t}, margin {:.3e}", p.containment.min_margin),
                None => format!("failed at every θ in {thetas:?}"),
            },
        );
        out.report.sections.push(s);
    }
    Ok(out)
}

// ---------------------------------------------------------------- geometry

/// `K` and `θ` of the `Z(K,θ)` convergence table.
pub const Z_TABLE_K: [f64; 3] = [1.2, 1.5, 2.0];
pub const Z_TABLE_THETA: [f64; 3] = [1e-1, 1e-2, 1e-3];
/// Degree and angle of the spiral overlay.
pub const SPIRAL_DEGREE: u32 = 512;
pub const SPIRAL_THETA: f64 = 0.3;

pub fn cmd_geometry(cfg: &RunConfig) -> Result<Outputs> {
    cfg.validate()?;
    let mut report = Report::new("geometry", cfg);
    let mut z = Section::new("intersection_z");
    for k in Z_TABLE_K {
        for t in Z_TABLE_THETA {
            let p = intersection_z(k, t)?;
            z.value(&format!("K={k},theta={t},re"), Quantity::formula(p.re));
            z.value(&format!("K={k},theta={t},im"), Quantity::formula(p.im));
            z.value(&format!("K={k},theta={t},distance_to_K2"), Quantity::formula((p - k * k).norm()));
        }
        if let Some(t0) = intersection_theta0(k, 1e-3) {
            z.value(&format!("K={k},theta0"), Quantity::searched(t0, 1e-3));
        }
    }
    let z15 = intersection_z(1.5, 1e-3)?;
    report.check("|Z(1.5, 1e-3) - 2.25| < 1e-2", (z15 - 2.25).norm() < 1e-2, format!("Z = {z15}"));
    report.sections.push(z);

    let mut roots = Section::new("roots");
    let a22 = a_star(2.2)?;
    roots.value("a_star(2.2)", Quantity::formula(a22));
    report.check(
        "A*(2.2) = 1.04 ± 0.01 and < 1.1",
        (a22 - 1.04).abs() <= 0.01 && a22 < 1.1,
        format!("A*(2.2) = {a22:.6}"),
    );
    for &k in &cfg.k_grid {
        let a = a_star(k)?;
        let r = solve_c1(a, k);
        roots.note(&format!("c1 roots at A*({k})"), format!("{r:?}"));
        if k > 1.0 {
            let ok = r.len() == 2 && r.iter().all(|x| (x - (k - 1.0)).abs() <= 1e-6);
            report.check(format!("C1 double root at K - 1 for K = {k}"), ok, format!("roots {r:?}"));
        }
    }
    let d1 = solve_d15(1.07, 1.52, 4);
    let d2 = solve_d15(1.05835, 1.52, 4);
    roots.note("d15(1.07, 1.52, 4)", format!("{d1:?}"));
    roots.note("d15(1.05835, 1.52, 4)", format!("{d2:?}"));
    report.check("D15(1.07, 1.52, 4) has no root on [0, 1.04]", d1.iter().all(|&b| b > 1.04), format!("roots {d1:?}"));
    report.check(
        "D15(1.05835, 1.52, 4) has a root at 1.04 ± 1e-3",
        d2.iter().any(|b| (b - 1.04).abs() <= 1e-3),
        format!("roots {d2:?}"),
    );
    let h = h_root_report();
    roots.note("h roots", format!("{:?}", h.roots));
    roots.note("h'' roots", format!("{:?}", h.second_derivative_roots));
    roots.value("h(1)", Quantity::formula(h.value_at_one));
    report.check("h has no root >= 1", h.no_root_from_one, format!("roots {:?}", h.roots));
    let s2 = &h.second_derivative_roots;
    report.check(
        "h'' roots 0.2000905878, 1.201269956 ± 1e-6",
        s2.len() == 2 && (s2[0] - 0.2000905878).abs() <= 1e-6 && (s2[1] - 1.201269956).abs() <= 1e-6,
        format!("roots {s2:?}"),
    );
    report.sections.push(roots);

    let (spiral, power, dev) = spiral_overlay()?;
    let mut sp = Section::new("spiral");
    sp.value("degree", Quantity::formula(SPIRAL_DEGREE as f64));
    sp.value("theta", Quantity::formula(SPIRAL_THETA));
    sp.value("max_relative_deviation", Quantity::measured(dev, 1e-12));
    report.check("power image follows the spiral within 1e-2", dev < 1e-2, format!("max relative deviation {dev:.3e}"));
    report.sections.push(sp);
    let mut out = Outputs::new(report);
    out.svgs.push(("geometry_spiral.svg".into(), spiral_svg(&spiral, &power)));
    Ok(out)
}

/// `Γ(1, θ; 0.1, 2)` against `P_ℓ` of the boundary of `D((-1,1);θ)` at
/// argument `Λ/ℓ`; returns both curves and the largest relative deviation.
fn spiral_overlay() -> Result<(Vec<Complex64>, Vec<Complex64>, f64)> {
    let d = PoincareNeighborhood::new(RealInterval { lo: -1.0, hi: 1.0 }, SPIRAL_THETA)?;
    let l = SPIRAL_DEGREE as f64;
    let lams: Vec<f64> = (0..=200).map(|k| 0.1 + 1.9 * k as f64 / 200.0).collect();
    let spiral: Vec<Complex64> = lams.iter().map(|&t| spiral_point(1.0, SPIRAL_THETA, t)).collect();
    let power: Vec<Complex64> = lams.iter().map(|&t| d.radial_point(t / l).powf(l)).collect();
    let dev = spiral.iter().zip(&power).map(|(a, b)| (a - b).norm() / a.norm()).fold(0.0, f64::max);
    Ok((spiral, power, dev))
}

// ---------------------------------------------------------------- search

pub fn cmd_search(cfg: &RunConfig) -> Result<Outputs> {
    cfg.validate()?;
    let mut report = Report::new("search", cfg);
    let q = cfg.param_query.as_deref().ok_or_else(|| Error::Config("search needs --param-query".into()))?;
    let target: SearchTarget = q.parse()?;
    let c = resolve_parameter(&RunConfig { c1: None, ..cfg.clone() })?;
    report.parameter = Some(c);
    let fam = Family::new(cfg.degree, c.value)?;
    let mut s = Section::new("certificate");
    s.note("query", q);
    match target {
        SearchTarget::Superstable { period } => {
            let r = fam.critical_point_image(period).abs();
            s.value("residual", Quantity::measured(r, 1e-12));
            report.check(format!("|f^{period}(0)| < 1e-12"), r < 1e-12, format!("residual {r:e}"));
        }
        SearchTarget::CascadeLimit { depth } => {
            let periods: Vec<usize> = detect_renormalization(&fam, 1 << depth).iter().map(|r| r.period).collect();
            let want: Vec<usize> = (1..=depth).map(|k| 1 << k).collect();
            s.note("renormalization_periods", join(&periods));
            report.check("renormalization periods 2, 4, ..., 2^depth", periods == want, join(&periods));
        }
        SearchTarget::Fibonacci { depth } => {
            // re-checked with twice the iteration budget
            let fib = fibonacci_numbers(depth);
            let r = closest_return_times(&fam, 2 * (fib[depth - 1] + 1), depth);
            s.note("closest_returns", join(&r));
            report.check(format!("first {depth} closest returns are Fibonacci"), r == fib, join(&r));
        }
    }
    report.sections.push(s);
    Ok(Outputs::new(report))
}

// ---------------------------------------------------------------- svg

struct Svg {
    body: String,
    /// Plot coordinates are `z / scale`.
    scale: f64,
}

impl Svg {
    fn new(scale: f64) -> Self {
        let h = SVG_HALF_WIDTH;
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="600" height="600">"#,
            -h,
            -h,
            2.0 * h,
            2.0 * h
        );
        let _ = writeln!(body, r##"<line x1="{}" y1="0" x2="{h}" y2="0" stroke="#bbb" stroke-width="0.005"/>"##, -h);
        Svg { body, scale }
    }

    fn xy(&self, z: Complex64) -> (f64, f64) {
        (z.re / self.scale, -z.im / self.scale)
    }

    fn polyline(&mut self, pts: &[Complex64], closed: bool, color: &str, class: &str) {
        let stride = (pts.len() / 4000).max(1);
        let mut d = String::new();
        for z in pts.iter().step_by(stride) {
            let (x, y) = self.xy(*z);
            let _ = write!(d, "{x:.5},{y:.5} ");
        }
        let tag = if closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            self.body,
            r#"<{tag} class="{class}" points="{}" fill="none" stroke="{color}" stroke-width="0.01"/>"#,
            d.trim_end()
        );
    }

    fn segment(&mut self, iv: RealInterval, color: &str, class: &str) {
        let (x1, _) = self.xy(Complex64::new(iv.lo, 0.0));
        let (x2, _) = self.xy(Complex64::new(iv.hi, 0.0));
        let _ = writeln!(
            self.body,
            r#"<line class="{class}" data-lo="{}" data-hi="{}" x1="{x1:.6}" y1="0" x2="{x2:.6}" y2="0" stroke="{color}" stroke-width="0.03"/>"#,
            iv.lo, iv.hi
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn construct_svg(omega: &OmegaDomain, plm: &PolyLikeMap, v: f64) -> String {
    let mut svg = Svg::new(v);
    svg.polyline(&omega.boundary(1024).points, true, "#1f77b4", "omega");
    svg.polyline(&plm.central.curve.points, true, "#d62728", "central");
    for d in &plm.off_central {
        svg.polyline(&d.curve.points, true, "#2ca02c", "off-central");
        svg.segment(d.real_trace, "#2ca02c", "off-central-trace");
    }
    svg.segment(omega.real_trace(), "#1f77b4", "omega-trace");
    svg.segment(plm.central.real_trace, "#d62728", "central-trace");
    svg.finish()
}

fn spiral_svg(spiral: &[Complex64], power: &[Complex64]) -> String {
    let m = spiral.iter().chain(power).map(|z| z.norm()).fold(0.0, f64::max);
    let mut svg = Svg::new(m / (0.95 * SVG_HALF_WIDTH));
    svg.polyline(spiral, false, "#1f77b4", "spiral");
    svg.polyline(power, false, "#d62728", "power-image");
    svg.finish()
}
