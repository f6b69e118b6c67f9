//! Command-line front end. Exit codes: 0 success, 1 user error or golden
//! mismatch, 2 internal failure.

use std::ffi::OsString;
use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    fixed_points, mobius_diagnostics, rotation_number, CircleMap, DynamicsError, Factor, RotationEstimate,
};
use crate::experiments::{
    conjugacy_scan, epsilon_scaling_fit, incidence_defect, parallelogram_test, ExperimentError, PairFamily, ScanRow,
    ScanSettings, SCAN_COLUMNS,
};
use crate::geometry::{affine_curvature, intersect_line_oval, line_join, GeometryError, Oval, OvalSpec, Vec2};
use crate::output::{csv_opt_f64, csv_table, fmt_f64, to_json};
use crate::render::{render_duality, render_fixed_points, render_parallelograms};
use crate::symbolic::{verify_series, KSign, DEFAULT_CONDITION_ORDER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USER: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

const DEFAULT_ITERATIONS: usize = 1_000_000;
const DEFAULT_EPSILONS: [f64; 3] = [0.1, 0.05, 0.025];

#[derive(Debug)]
pub enum CliError {
    User(String),
    Internal(String),
    /// The run completed but its result did not match the reference.
    Mismatch(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::User(_) | CliError::Mismatch(_) => EXIT_USER,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::User(m) => write!(f, "error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
            CliError::Mismatch(m) => write!(f, "mismatch: {m}"),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::User(e.to_string())
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::NoConvergence(_) => CliError::Internal(e.to_string()),
            other => CliError::User(other.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Internal(_) => CliError::Internal(e.to_string()),
            ExperimentError::Dynamics(d) => d.into(),
            other => CliError::User(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    DirectionPairs,
    PointPairs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenderKind {
    Duality,
    Parallelograms,
    FixedPoints,
}

/// A curve spec given inline or as a path to a JSON file.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum CurveSource {
    Inline(OvalSpec),
    Path(PathBuf),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Largest gap between a rotation number and a convergent reported as
    /// resolved; defaults to the estimate's error bound.
    pub rational: Option<f64>,
}

/// Settings read from `--config`. Every field is optional; flags given on
/// the command line take precedence.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub command: Option<String>,
    pub curve: Option<CurveSource>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tolerances: Option<Tolerances>,
    pub k_sign: Option<i64>,
    pub order: Option<usize>,
    pub t: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub dirs: Option<[f64; 2]>,
    #[serde(rename = "P")]
    pub p: Option<[f64; 2]>,
    #[serde(rename = "Q")]
    pub q: Option<[f64; 2]>,
    #[serde(rename = "A")]
    pub a_point: Option<[f64; 2]>,
    pub selector: Option<f64>,
    pub iterations: Option<usize>,
    pub x0: Option<f64>,
    pub a: Option<f64>,
    pub eps: Option<Vec<f64>>,
    pub u: Option<[f64; 2]>,
    pub mode: Option<ScanMode>,
    pub n: Option<usize>,
    pub origin: Option<[f64; 2]>,
    pub direction: Option<[f64; 2]>,
    pub s_range: Option<[f64; 2]>,
    pub max_denominator: Option<u64>,
    pub grid: Option<usize>,
    pub manifest: Option<PathBuf>,
    pub kind: Option<RenderKind>,
    pub count: Option<usize>,
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if let Some(t) = self.tolerances.as_ref().and_then(|t| t.rational) {
            if !(t > 0.0) {
                return Err(CliError::User(format!("tolerances must be positive, got rational = {t}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "conic-rigidity", version, about = "Series certification and circle-map diagnostics for ovals")]
pub struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args, Default)]
pub struct CurveArg {
    /// Curve spec: a JSON file or inline JSON.
    #[arg(long)]
    pub curve: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the series expansion and compare it with the golden file.
    VerifySeries {
        #[arg(long, allow_negative_numbers = true)]
        k_sign: Option<i64>,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Affine curvature along a curve.
    Curvature {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        t: Option<Vec<f64>>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Rotation number of a composition of two pencil involutions.
    RotationNumber {
        #[command(flatten)]
        curve: CurveArg,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        x0: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fixed points of a composition of two pencil involutions.
    FixedPoints {
        #[command(flatten)]
        curve: CurveArg,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Multipliers, reciprocity and linearization obstruction of f_P o f_Q.
    Mobius {
        #[command(flatten)]
        curve: CurveArg,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Pole-polar incidence defect for a point A and a point B on its chord.
    Incidence {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long = "A", num_args = 2, allow_negative_numbers = true)]
        a_point: Option<Vec<f64>>,
        /// Position of B along the visible arc, in (-1, 1).
        #[arg(long, allow_negative_numbers = true)]
        selector: Option<f64>,
    },
    /// Fit of the eps^3 coefficient of f(f(a)) - a on an ode_germ curve.
    ScalingFit {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long, num_args = 3..)]
        eps: Option<Vec<f64>>,
    },
    /// Inscribed parallelograms of a centrally symmetric oval.
    Parallelogram {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, num_args = 2, allow_negative_numbers = true)]
        u: Option<Vec<f64>>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Sweep of pencil pairs, written as CSV with a JSON manifest.
    Scan {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, value_enum)]
        mode: Option<ScanMode>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, num_args = 2, allow_negative_numbers = true)]
        origin: Option<Vec<f64>>,
        #[arg(long, num_args = 2, allow_negative_numbers = true)]
        direction: Option<Vec<f64>>,
        #[arg(long, num_args = 2, allow_negative_numbers = true)]
        s_range: Option<Vec<f64>>,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        max_denominator: Option<u64>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        /// Manifest path; defaults to the output path with `.manifest.json`.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// SVG drawing of a construction.
    Render {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, value_enum)]
        kind: Option<RenderKind>,
        #[arg(long = "A", num_args = 2, allow_negative_numbers = true)]
        a_point: Option<Vec<f64>>,
        #[arg(long, allow_negative_numbers = true)]
        selector: Option<f64>,
        #[arg(long, num_args = 2, allow_negative_numbers = true)]
        u: Option<Vec<f64>>,
        #[arg(long)]
        count: Option<usize>,
        #[command(flatten)]
        pair: PairArgs,
    },
}

/// Two pencils: directions by angle, or points.
#[derive(Debug, Args, Default)]
pub struct PairArgs {
    /// Direction angles `A B`, in the order the involutions are applied:
    /// the map is `f_B o f_A`.
    #[arg(long, num_args = 2, allow_negative_numbers = true)]
    pub dirs: Option<Vec<f64>>,
    /// Outer pencil point of `f_P o f_Q`.
    #[arg(long = "P", num_args = 2, allow_negative_numbers = true)]
    pub p: Option<Vec<f64>>,
    /// Inner pencil point of `f_P o f_Q`.
    #[arg(long = "Q", num_args = 2, allow_negative_numbers = true)]
    pub q: Option<Vec<f64>>,
}

fn pair2(v: Option<Vec<f64>>, fallback: Option<[f64; 2]>) -> Option<[f64; 2]> {
    v.map(|v| [v[0], v[1]]).or(fallback)
}

fn vec2(v: [f64; 2]) -> Vec2 {
    Vec2::new(v[0], v[1])
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
/// Results go to `out` unless an output file is selected; diagnostics go
/// to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USER } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.code()
        }
    }
}

fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::User(format!("cannot read {}: {e}", path.display())))?;
    let cfg: RunConfig =
        serde_json::from_str(&text).map_err(|e| CliError::User(format!("invalid config {}: {e}", path.display())))?;
    cfg.validate()?;
    Ok(cfg)
}

fn parse_curve(text: &str) -> CliResult<OvalSpec> {
    serde_json::from_str(text).map_err(|e| CliError::User(format!("invalid curve spec: {e}")))
}

fn resolve_curve(flag: Option<String>, cfg: &RunConfig) -> CliResult<OvalSpec> {
    match (flag, &cfg.curve) {
        (Some(s), _) if s.trim_start().starts_with('{') => parse_curve(&s),
        (Some(s), _) => {
            let text = fs::read_to_string(&s).map_err(|e| CliError::User(format!("cannot read curve {s}: {e}")))?;
            parse_curve(&text)
        }
        (None, Some(CurveSource::Inline(spec))) => Ok(spec.clone()),
        (None, Some(CurveSource::Path(p))) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::User(format!("cannot read curve {}: {e}", p.display())))?;
            parse_curve(&text)
        }
        (None, None) => Err(CliError::User("missing --curve".into())),
    }
}

fn build_oval(spec: OvalSpec) -> CliResult<Arc<Oval>> {
    Ok(Arc::new(Oval::new(spec)?))
}

/// `(outer, inner)` of the composed map.
fn resolve_pair(pair: PairArgs, cfg: &RunConfig) -> CliResult<(Factor, Factor)> {
    let dirs = pair2(pair.dirs, if pair.p.is_some() || pair.q.is_some() { None } else { cfg.dirs });
    if let Some([first, second]) = dirs {
        return Ok((Factor::direction_angle(second), Factor::direction_angle(first)));
    }
    match (pair2(pair.p, cfg.p), pair2(pair.q, cfg.q)) {
        (Some(p), Some(q)) => Ok((Factor::Pencil { p: vec2(p) }, Factor::Pencil { p: vec2(q) })),
        _ => Err(CliError::User("give --dirs A B or both --P x y and --Q x y".into())),
    }
}

/// Where and how results are written.
struct Sink<'a> {
    out: &'a mut dyn Write,
    path: Option<PathBuf>,
    format: Format,
}

impl Sink<'_> {
    fn emit(&mut self, text: &str) -> CliResult<()> {
        match &self.path {
            Some(p) => fs::write(p, text).map_err(|e| CliError::User(format!("cannot write {}: {e}", p.display()))),
            None => self.out.write_all(text.as_bytes()).map_err(|e| CliError::Internal(e.to_string())),
        }
    }

    fn json<T: Serialize>(&mut self, value: &T) -> CliResult<()> {
        let text = to_json(value).map_err(|e| CliError::Internal(e.to_string()))?;
        self.emit(&text)
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    let command = match cli.command {
        Some(c) => c,
        None => {
            let name = cfg.command.clone().ok_or_else(|| CliError::User("no command given".into()))?;
            match Cli::try_parse_from(["conic-rigidity", name.as_str()]) {
                Ok(Cli { command: Some(c), .. }) => c,
                _ => return Err(CliError::User(format!("unknown command {name:?} in config"))),
            }
        }
    };
    let default_format = match &command {
        Command::VerifySeries { .. } | Command::RotationNumber { .. } | Command::Curvature { .. } => Format::Text,
        Command::Scan { .. } => Format::Csv,
        _ => Format::Json,
    };
    let mut sink = Sink {
        out,
        path: cli.output.or_else(|| cfg.output.clone()),
        format: cli.format.or(cfg.format).unwrap_or(default_format),
    };
    match command {
        Command::VerifySeries { k_sign, order } => cmd_verify_series(k_sign.or(cfg.k_sign), order.or(cfg.order), &mut sink),
        Command::Curvature { curve, t, samples } => {
            let oval = build_oval(resolve_curve(curve.curve, &cfg)?)?;
            cmd_curvature(&oval, t.or(cfg.t.clone()), samples.or(cfg.samples), &mut sink)
        }
        Command::RotationNumber { curve, pair, iterations, x0, seed } => {
            let oval = build_oval(resolve_curve(curve.curve, &cfg)?)?;
            let (outer, inner) = resolve_pair(pair, &cfg)?;
            let f = CircleMap::pair(&oval, outer, inner)?;
            let x0 = match (x0.or(cfg.x0), seed.or(cfg.seed)) {
                (Some(x), _) => x,
                (None, Some(s)) => ChaCha8Rng::seed_from_u64(s).gen_range(0.0..TAU),
                (None, None) => 0.0,
            };
            let tol = cfg.tolerances.as_ref().and_then(|t| t.rational);
            cmd_rotation_number(&f, x0, iterations.or(cfg.iterations).unwrap_or(DEFAULT_ITERATIONS), tol, &mut sink)
        }
        Command::FixedPoints { curve, pair } => {
            let oval = build_oval(resolve_curve(curve.curve, &cfg)?)?;
            let (outer, inner) = resolve_pair(pair, &cfg)?;
            cmd_fixed_points(&oval, outer, inner, &mut sink)
        }
        Command::Mobius { curve, pair, samples } => {
            let oval = build_oval(resolve_curve(curve.curve, &cfg)?)?;
            let (outer, inner) = resolve_pair(pair, &cfg)?;
            let f = CircleMap::pair(&oval, outer, inner)?;
            let diag = mobius_diagnostics(&f, samples.or(cfg.samples).unwrap_or(16))?;
            sink.json(&diag)
        }
        Command::Incidence { curve, a_point, selector } => {
            let oval = build_oval(resolve_curve(curve.curve, &cfg)?)?;
            let a = pair2(a_point, cfg.a_point).ok_or_else(|| CliError::User("missing --A x y".into()))?;
            let rec = incidence_defect(&oval, vec2(a), selector.or(cfg.selector).unwrap_or(0.5))?;
            sink.json(&rec)
        }
        Command::ScalingFit { curve, a, eps } => {
            let spec = resolve_curve(curve.curve, &cfg)?;
            let eps = eps.or(cfg.eps.clone()).unwrap_or(DEFAULT_EPSILONS.to_vec());
            let fit = epsilon_scaling_fit(&spec, a.or(cfg.a).unwrap_or(0.0), &eps)?;
            sink.json(&fit)
        }
        Command::Parallelogram { curve, u, samples } => {
            let oval = build_oval(resolve_curve(curve.curve, &cfg)?)?;
            let u = pair2(u, cfg.u).unwrap_or([1.0, 0.0]);
            let rep = parallelogram_test(&oval, vec2(u), samples.or(cfg.samples).unwrap_or(16))?;
            sink.json(&rep)
        }
        Command::Scan { curve, mode, n, origin, direction, s_range, iterations, max_denominator, grid, samples, manifest } => {
            let spec = resolve_curve(curve.curve, &cfg)?;
            let n = n.or(cfg.n).unwrap_or(16);
            let family = match mode.or(cfg.mode).unwrap_or(ScanMode::DirectionPairs) {
                ScanMode::DirectionPairs => PairFamily::DirectionPairs { n },
                ScanMode::PointPairs => {
                    let origin = pair2(origin, cfg.origin).unwrap_or([0.0, 0.0]);
                    let direction = pair2(direction, cfg.direction).unwrap_or([1.0, 0.0]);
                    let [s_min, s_max] = pair2(s_range, cfg.s_range)
                        .ok_or_else(|| CliError::User("point-pairs mode needs --s-range MIN MAX".into()))?;
                    PairFamily::PointPairs { origin: vec2(origin), direction: vec2(direction), n, s_min, s_max }
                }
            };
            let d = ScanSettings::default();
            let settings = ScanSettings {
                iterations: iterations.or(cfg.iterations).unwrap_or(d.iterations),
                max_denominator: max_denominator.or(cfg.max_denominator).unwrap_or(d.max_denominator),
                periodicity_grid: grid.or(cfg.grid).unwrap_or(d.periodicity_grid),
                obstruction_samples: samples.or(cfg.samples).unwrap_or(d.obstruction_samples),
            };
            cmd_scan(spec, family, settings, manifest.or(cfg.manifest.clone()), &mut sink)
        }
        Command::Render { curve, kind, a_point, selector, u, count, pair } => {
            let oval = build_oval(resolve_curve(curve.curve, &cfg)?)?;
            let svg = match kind.or(cfg.kind).unwrap_or(RenderKind::Duality) {
                RenderKind::Duality => {
                    let a = pair2(a_point, cfg.a_point).unwrap_or([2.0, 0.0]);
                    render_duality(&oval, vec2(a), selector.or(cfg.selector).unwrap_or(0.5))?
                }
                RenderKind::Parallelograms => {
                    let u = pair2(u, cfg.u).unwrap_or([1.0, 0.0]);
                    render_parallelograms(&oval, vec2(u), count.or(cfg.count).unwrap_or(5))?
                }
                RenderKind::FixedPoints => {
                    let p = pair2(pair.p, cfg.p).ok_or_else(|| CliError::User("fixed-points drawing needs --P".into()))?;
                    let q = pair2(pair.q, cfg.q).ok_or_else(|| CliError::User("fixed-points drawing needs --Q".into()))?;
                    render_fixed_points(&oval, vec2(p), vec2(q))?
                }
            };
            sink.emit(&svg)
        }
    }
}

fn cmd_verify_series(k_sign: Option<i64>, order: Option<usize>, sink: &mut Sink) -> CliResult<()> {
    let sign = match k_sign {
        None => KSign::Plus,
        Some(v) => KSign::from_i64(v).ok_or_else(|| CliError::User(format!("--k-sign must be +1 or -1, got {v}")))?,
    };
    let order = order.unwrap_or(DEFAULT_CONDITION_ORDER);
    if order < 4 {
        return Err(CliError::User(format!("--order must be at least 4, got {order}")));
    }
    let report = verify_series(sign, order).map_err(|e| CliError::Internal(e.to_string()))?;
    let passed = report.passed();
    match sink.format {
        Format::Json => {
            let mut cert = report.certificate_json();
            cert["passed"] = passed.into();
            sink.json(&cert)?
        }
        _ => {
            let mut text = report.canonical_text();
            text.push_str(&format!("# residual identically zero: {}\n", report.certified()));
            if let Some(g) = &report.golden {
                text.push_str(&format!("# golden {}: {}\n", g.source, if g.matches { "match" } else { "MISMATCH" }));
            }
            sink.emit(&text)?;
        }
    }
    if passed {
        Ok(())
    } else if !report.certified() {
        Err(CliError::Internal("residual certificate is not all-zero".into()))
    } else {
        let names = report.golden.as_ref().map(|g| g.mismatched.join(", ")).unwrap_or_default();
        Err(CliError::Mismatch(format!("k_sign {} differs from the golden file in: {names}", sign.label())))
    }
}

#[derive(Serialize)]
struct CurvatureSample {
    t: f64,
    k: f64,
}

fn cmd_curvature(oval: &Oval, ts: Option<Vec<f64>>, samples: Option<usize>, sink: &mut Sink) -> CliResult<()> {
    let ts = ts.unwrap_or_else(|| oval.sample_params(samples.unwrap_or(64).max(1)));
    let values = ts
        .iter()
        .map(|&t| Ok(CurvatureSample { t, k: affine_curvature(oval, t)? }))
        .collect::<CliResult<Vec<_>>>()?;
    match sink.format {
        Format::Text => {
            let text: String = values.iter().map(|s| format!("{} {}\n", fmt_f64(s.t), fmt_f64(s.k))).collect();
            sink.emit(&text)
        }
        _ => sink.json(&values),
    }
}

#[derive(Serialize)]
struct RotationOutput {
    x0: f64,
    #[serde(flatten)]
    estimate: RotationEstimate,
    resolved: Option<(u64, u64)>,
}

fn cmd_rotation_number(f: &CircleMap, x0: f64, n: usize, tol: Option<f64>, sink: &mut Sink) -> CliResult<()> {
    let estimate = rotation_number(f, x0, n)?;
    let resolved = estimate.resolved_rational(50, tol.unwrap_or(estimate.error_bound));
    match sink.format {
        Format::Text => {
            let digits = (-estimate.error_bound.log10()).ceil().clamp(0.0, 15.0) as usize + 1;
            let mut text = format!("{:.*} ± {:.1e}\n", digits, estimate.value, estimate.error_bound);
            if let Some((p, q)) = resolved {
                text.push_str(&format!("resolved {p}/{q}\n"));
            }
            sink.emit(&text)
        }
        _ => sink.json(&RotationOutput { x0, estimate, resolved }),
    }
}

#[derive(Serialize)]
struct FixedPointsOutput {
    count: usize,
    fixed_points: Vec<f64>,
    points: Vec<Vec2>,
    /// Parameters where the line through the two pencil points meets the
    /// curve, for pencil pairs.
    line_intersections: Option<Vec<f64>>,
}

fn cmd_fixed_points(oval: &Arc<Oval>, outer: Factor, inner: Factor, sink: &mut Sink) -> CliResult<()> {
    let f = CircleMap::pair(oval, outer, inner)?;
    let fixed = fixed_points(&f);
    let line_intersections = match (outer, inner) {
        (Factor::Pencil { p }, Factor::Pencil { p: q }) => Some(intersect_line_oval(oval, &line_join(p, q)?)),
        _ => None,
    };
    sink.json(&FixedPointsOutput {
        count: fixed.len(),
        points: fixed.iter().map(|&t| oval.point(t)).collect(),
        fixed_points: fixed,
        line_intersections,
    })
}

fn factor_label(f: &Factor) -> String {
    match f {
        Factor::Parallel { u } => format!("dir {} {}", fmt_f64(u.x), fmt_f64(u.y)),
        Factor::Pencil { p } => format!("pt {} {}", fmt_f64(p.x), fmt_f64(p.y)),
    }
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let lines: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.i.to_string(),
                r.j.to_string(),
                factor_label(&r.outer),
                factor_label(&r.inner),
                csv_opt_f64(r.rotation_number),
                csv_opt_f64(r.error_bound),
                r.convergent.map(|(p, q)| format!("{p}/{q}")).unwrap_or_default(),
                csv_opt_f64(r.periodicity_defect),
                r.fixed_point_count.map(|c| c.to_string()).unwrap_or_default(),
                csv_opt_f64(r.reciprocity_defect),
                csv_opt_f64(r.linearization_obstruction),
                r.status.clone(),
            ]
        })
        .collect();
    csv_table(&SCAN_COLUMNS, &lines)
}

#[derive(Serialize)]
struct ScanManifest<'a> {
    tool: &'static str,
    version: &'static str,
    curve: &'a OvalSpec,
    family: &'a PairFamily,
    settings: &'a ScanSettings,
    columns: &'a [&'static str],
    rows: usize,
    csv: Option<String>,
}

fn cmd_scan(spec: OvalSpec, family: PairFamily, settings: ScanSettings, manifest: Option<PathBuf>, sink: &mut Sink) -> CliResult<()> {
    let oval = build_oval(spec.clone())?;
    let rows = conjugacy_scan(&oval, &family, &settings)?;
    match sink.format {
        Format::Json => sink.json(&rows)?,
        _ => sink.emit(&scan_csv(&rows))?,
    }
    let manifest_path = manifest.or_else(|| sink.path.as_ref().map(|p| p.with_extension("manifest.json")));
    if let Some(path) = manifest_path {
        let m = ScanManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            curve: &spec,
            family: &family,
            settings: &settings,
            columns: &SCAN_COLUMNS,
            rows: rows.len(),
            csv: sink.path.as_ref().map(|p| p.display().to_string()),
        };
        let text = to_json(&m).map_err(|e| CliError::Internal(e.to_string()))?;
        fs::write(&path, text).map_err(|e| CliError::User(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("conic-rigidity").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    const CIRCLE: &str = r#"{"variant":"ellipse","A":1,"B":1}"#;

    #[test]
    fn verify_series_exit_codes() {
        let (code, out, _) = run_args(&["verify-series", "--k-sign", "-1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("b0 = -(3*a+1)/(a+3)\n"), "{out}");
        let (code, out, err) = run_args(&["verify-series", "--k-sign", "+1"]);
        assert_eq!(code, 1);
        assert!(out.starts_with("b0 = -(3*a+1)/(a+3)\n"));
        assert!(err.contains("b2"), "{err}");
        assert_eq!(run_args(&["verify-series", "--k-sign", "2"]).0, 1);
    }

    #[test]
    fn rotation_number_text() {
        let (code, out, _) = run_args(&["rotation-number", "--curve", CIRCLE, "--dirs", "0", "0.7853981634", "--iterations", "1000"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("0.25"), "{out}");
        assert!(out.contains("resolved 1/4"));
    }

    #[test]
    fn user_errors_exit_one() {
        assert_eq!(run_args(&["curvature", "--curve", r#"{"variant":"ellipse","A":-1,"B":1}"#]).0, 1);
        assert_eq!(run_args(&["curvature", "--curve", r#"{"variant":"blob"}"#]).0, 1);
        assert_eq!(run_args(&["mobius", "--curve", CIRCLE, "--P", "2", "0", "--Q", "0", "3"]).0, 1);
        assert_eq!(run_args(&["no-such-command"]).0, 1);
        assert_eq!(run_args(&[]).0, 1);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn config_file_and_flag_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        fs::write(
            &path,
            r#"{"command": "rotation-number", "curve": {"variant": "ellipse", "A": 1, "B": 1}, "dirs": [0, 0.7853981633974483], "iterations": 1000}"#,
        )
        .unwrap();
        let cfg = path.to_str().unwrap();
        let (code, out, err) = run_args(&["--config", cfg]);
        assert_eq!(code, 0, "{err}");
        assert!(out.starts_with("0.25"), "{out}");
        let (code, out, _) = run_args(&["--config", cfg, "rotation-number", "--dirs", "0.7853981633974483", "0"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("0.75"), "{out}");
        fs::write(&path, r#"{"command": "curvature", "bogus": 1}"#).unwrap();
        assert_eq!(run_args(&["--config", cfg]).0, 1);
        fs::write(&path, r#"{"command": "curvature", "tolerances": {"rational": -1}}"#).unwrap();
        assert_eq!(run_args(&["--config", cfg]).0, 1);
    }

    #[test]
    fn scan_writes_csv_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("scan.csv");
        let args = ["scan", "--curve", CIRCLE, "--n", "3", "--iterations", "200", "-o", csv.to_str().unwrap()];
        assert_eq!(run_args(&args).0, 0);
        let text = fs::read_to_string(&csv).unwrap();
        assert_eq!(text.lines().count(), 10);
        assert!(text.starts_with("i,j,outer,inner,rotation_number"));
        let manifest = fs::read_to_string(dir.path().join("scan.manifest.json")).unwrap();
        assert!(manifest.contains("\"rows\": 9"));
        assert_eq!(run_args(&args).0, 0);
        assert_eq!(fs::read_to_string(&csv).unwrap(), text);
    }
}
