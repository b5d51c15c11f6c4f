//! Command-line front end. Reads PQ-form, skeleton and ramification-data
//! files, runs one pipeline, and writes byte-stable JSON and SVG artifacts
//! into the output directory.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 unparsable arguments or input
//! (the message names the field), 3 numerical failure (the module error is
//! written into the command's report).

mod stable;
mod svg;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};

use crate::geometry::{kn_cells, order_census, parabolicity, tau_field, SurfacePoint, Window};
use crate::lifting::choose_generic_basevalue;
use crate::numerics::{Chart, PQForm, C64};
use crate::skeleton::{
    complex_from_json, complex_to_json, skeleton_build, truncate, validate_graph, JsonError, Order, RamPoint, Skeleton,
};
use crate::uniformize::{fit_pq_with, nonlinearity, pqform_from_json, ram_data, FitOptions, RamData};

pub use stable::to_stable_string;
pub use svg::{cells_svg, skeleton_svg};

/// Environment variable overriding the fit tolerance.
pub const TOL_ENV: &str = "LOGRS_TOL";

const DEFAULT_RADIUS: usize = 2;
const TAU_LEVELS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Ramification data, nonlinearity and parabolicity of a PQ-form.
    Analyze,
    /// Skeleton graph of a PQ-form by path lifting.
    Skeleton,
    /// Finite-order truncation of a skeleton.
    Truncate,
    /// Fit a PQ-form to ramification data from an initial guess.
    Fit,
    /// Nearest-ramification cells of a skeleton on a sample mesh.
    Render,
    /// Check a skeleton against the graph axioms.
    Validate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Skeleton => "skeleton",
            Command::Truncate => "truncate",
            Command::Fit => "fit",
            Command::Render => "render",
            Command::Validate => "validate",
        }
    }

    /// File that carries the report, or the error on failure.
    fn report_file(self) -> &'static str {
        match self {
            Command::Analyze => "report.json",
            Command::Skeleton => "skeleton.json",
            Command::Truncate => "truncated.json",
            Command::Fit => "fit.json",
            Command::Render => "cells.json",
            Command::Validate => "violations.json",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "logrs",
    version,
    about = "Skeletons, cells and PQ-form fits of log-Riemann surfaces"
)]
pub struct Session {
    pub command: Command,
    /// Skeleton radius (skeleton, analyze, render).
    #[arg(long)]
    pub radius: Option<usize>,
    /// Truncation depth.
    #[arg(long)]
    pub n: Option<usize>,
    /// Base value: `auto` or `re,im`.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    pub z0: String,
    /// Mesh step h (render, analyze).
    #[arg(long)]
    pub mesh: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Parse { field: String, reason: String },
    Numerical { kind: String, message: String },
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse { .. } => 2,
            CliError::Numerical { .. } => 3,
        }
    }

    fn parse(field: impl Into<String>, reason: impl Into<String>) -> CliError {
        CliError::Parse {
            field: field.into(),
            reason: reason.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CliError::Parse { field, reason } => json!({"kind": "Parse", "field": field, "message": reason}),
            CliError::Numerical { kind, message } => json!({"kind": kind, "message": message}),
            CliError::Io { path, message } => {
                json!({"kind": "Io", "path": path.display().to_string(), "message": message})
            }
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { field, reason } => write!(f, "invalid {field}: {reason}"),
            CliError::Numerical { kind, message } => write!(f, "{kind}: {message}"),
            CliError::Io { path, message } => write!(f, "{}: {message}", path.display()),
        }
    }
}

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        CliError::parse(e.field, e.reason)
    }
}

/// Numerical failure from any library module. The kind is the error
/// variant name.
fn numerical<E: fmt::Debug + fmt::Display>(e: E) -> CliError {
    let debug = format!("{e:?}");
    let kind = debug
        .split(|c: char| !c.is_alphanumeric() && c != '_')
        .next()
        .unwrap_or("Error")
        .to_string();
    CliError::Numerical {
        kind,
        message: e.to_string(),
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let session = match Session::try_parse_from(args) {
        Ok(s) => s,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&session) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("logrs {}: {e}", session.command.name());
            if !matches!(e, CliError::Io { .. }) {
                let report = json!({"command": session.command.name(), "seed": session.seed, "error": e.to_json()});
                let _ = write_text(&session.out, session.command.report_file(), &to_stable_string(&report));
            }
            e.exit_code()
        }
    }
}

/// Run one session, writing its artifacts.
pub fn execute(s: &Session) -> Result<(), CliError> {
    let fit_tol = tolerance_override()?;
    match s.command {
        Command::Analyze => analyze(s),
        Command::Skeleton => skeleton(s),
        Command::Truncate => truncate_cmd(s),
        Command::Fit => fit(s, fit_tol),
        Command::Render => render(s),
        Command::Validate => validate(s),
    }
}

fn tolerance_override() -> Result<Option<f64>, CliError> {
    match std::env::var(TOL_ENV) {
        Err(_) => Ok(None),
        Ok(t) => match t.trim().parse::<f64>() {
            Ok(x) if x > 0.0 && x.is_finite() => Ok(Some(x)),
            _ => Err(CliError::parse(
                TOL_ENV,
                format!("expected a positive number, got {t:?}"),
            )),
        },
    }
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| CliError::io(&path, e))
}

fn write_json(dir: &Path, name: &str, v: &Value) -> Result<(), CliError> {
    write_text(dir, name, &to_stable_string(v))
}

fn input(s: &Session, k: usize, what: &str) -> Result<Value, CliError> {
    let path = s
        .inputs
        .get(k)
        .ok_or_else(|| CliError::parse(format!("INPUT[{k}]"), format!("missing {what} file")))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse("$", format!("{}: {e}", path.display())))
}

fn read_pq(s: &Session, k: usize) -> Result<PQForm, CliError> {
    Ok(pqform_from_json(&input(s, k, "PQ-form")?)?)
}

fn read_skeleton(s: &Session, k: usize) -> Result<Skeleton, CliError> {
    Ok(Skeleton::from_json(&input(s, k, "skeleton")?)?)
}

fn require_inputs(s: &Session, n: usize) -> Result<(), CliError> {
    if s.inputs.len() > n {
        return Err(CliError::parse(
            format!("INPUT[{n}]"),
            format!("{} takes {n} input file(s)", s.command.name()),
        ));
    }
    Ok(())
}

fn parse_z0(text: &str) -> Result<Option<C64>, CliError> {
    if text == "auto" {
        return Ok(None);
    }
    let parts: Vec<&str> = text.split(',').collect();
    let num = |x: &str| x.trim().parse::<f64>().ok().filter(|v| v.is_finite());
    match parts.as_slice() {
        [re, im] => match (num(re), num(im)) {
            (Some(re), Some(im)) => Ok(Some(C64::new(re, im))),
            _ => Err(CliError::parse("--z0", format!("expected auto or re,im, got {text:?}"))),
        },
        _ => Err(CliError::parse("--z0", format!("expected auto or re,im, got {text:?}"))),
    }
}

fn resolve_z0(s: &Session, chart: &Chart) -> Result<C64, CliError> {
    match parse_z0(&s.z0)? {
        Some(z) => Ok(z),
        None => choose_generic_basevalue(&chart.singular_value_points(), s.seed).map_err(numerical),
    }
}

fn mesh_step(s: &Session, window: Window) -> Result<f64, CliError> {
    match s.mesh {
        None => Ok(0.02 * window.diameter()),
        Some(h) if h > 0.0 && h.is_finite() => Ok(h),
        Some(h) => Err(CliError::parse("--mesh", format!("expected a positive step, got {h}"))),
    }
}

/// Square window about `z0` that shows every foot with some margin.
fn feet_window(g: &Skeleton) -> Window {
    let reach = g.feet().iter().map(|f| (f - g.z0).norm()).fold(1.0, f64::max);
    Window::around(g.z0, 1.5 * reach)
}

fn options_json(s: &Session) -> Value {
    let mut m = Map::new();
    m.insert("z0".into(), json!(s.z0));
    if let Some(r) = s.radius {
        m.insert("radius".into(), json!(r));
    }
    if let Some(n) = s.n {
        m.insert("n".into(), json!(n));
    }
    if let Some(h) = s.mesh {
        m.insert("mesh".into(), json!(h));
    }
    Value::Object(m)
}

fn report(s: &Session, body: Map<String, Value>) -> Value {
    let mut m = body;
    m.insert("command".into(), json!(s.command.name()));
    m.insert("seed".into(), json!(s.seed));
    m.insert("options".into(), options_json(s));
    Value::Object(m)
}

/// Ramification points of a PQ-form from its ramification data, one per
/// zero of `Q` and one per asymptotic tract; this list is complete.
fn ram_points(rd: &RamData) -> Vec<RamPoint> {
    let point = |projection: C64, order: Order| RamPoint {
        projection,
        order,
        edge_cycle: Vec::new(),
        vertices: Vec::new(),
        lower_bounded: false,
    };
    rd.finite
        .iter()
        .map(|p| point(p.pos, Order::Finite(p.order)))
        .chain(rd.infinite.iter().map(|&z| point(z, Order::Infinite)))
        .collect()
}

fn analyze(s: &Session) -> Result<(), CliError> {
    require_inputs(s, 1)?;
    let f = read_pq(s, 0)?;
    let rd = ram_data(&f, None).map_err(numerical)?;
    let nl = nonlinearity(&f).map_err(numerical)?;
    let ram = ram_points(&rd);
    let mut body = Map::new();
    let para = if s.mesh.is_some() {
        let chart = Chart::new(f.clone()).map_err(numerical)?;
        let z0 = resolve_z0(s, &chart)?;
        let g = skeleton_build(&chart, z0, s.radius.unwrap_or(DEFAULT_RADIUS)).map_err(numerical)?;
        let window = feet_window(&g);
        let cells = kn_cells(&g, window, mesh_step(s, window)?).map_err(numerical)?;
        let tau = tau_field(&cells, &SurfacePoint { star: g.base, z: z0 }).map_err(numerical)?;
        body.insert("z0".into(), complex_to_json(z0));
        parabolicity(&ram, true, Some((&cells, &tau)), TAU_LEVELS).map_err(numerical)?
    } else {
        parabolicity(&ram, true, None, 0).map_err(numerical)?
    };
    let (finite, infinite) = order_census(&ram);
    let mut p = para.to_json();
    p["census"] = json!({"finite": finite, "infinite": infinite});
    let mut rdj = rd.to_json();
    rdj["d1"] = json!(rd.d1);
    rdj["d2"] = json!(rd.d2);
    body.insert("ram_data".into(), rdj);
    body.insert("nonlinearity".into(), nl.to_json());
    body.insert("parabolicity".into(), p);
    write_json(&s.out, "report.json", &report(s, body))
}

fn skeleton(s: &Session) -> Result<(), CliError> {
    require_inputs(s, 1)?;
    let f = read_pq(s, 0)?;
    let chart = Chart::new(f).map_err(numerical)?;
    let z0 = resolve_z0(s, &chart)?;
    let g = skeleton_build(&chart, z0, s.radius.unwrap_or(DEFAULT_RADIUS)).map_err(numerical)?;
    write_json(&s.out, "skeleton.json", &g.to_json())?;
    write_text(&s.out, "skeleton.svg", &skeleton_svg(&g))?;
    let mut body = Map::new();
    body.insert("z0".into(), complex_to_json(z0));
    body.insert("vertices".into(), json!(g.vertices.len()));
    body.insert("edges".into(), json!(g.edges.len()));
    write_json(&s.out, "run.json", &report(s, body))
}

fn truncate_cmd(s: &Session) -> Result<(), CliError> {
    require_inputs(s, 1)?;
    let n = s.n.ok_or_else(|| CliError::parse("--n", "truncate needs a depth"))?;
    let g = read_skeleton(s, 0)?;
    let t = truncate(&g, n).map_err(numerical)?;
    write_json(&s.out, "truncated.json", &t.to_json())?;
    let mut body = Map::new();
    body.insert("vertices".into(), json!(t.vertices.len()));
    body.insert("edges".into(), json!(t.edges.len()));
    write_json(&s.out, "run.json", &report(s, body))
}

/// `{"finite": ..., "infinite": ..., "normalization": {"value": z, "slope": z}}`;
/// the normalization defaults to `F(0)` and `F'(0)` of the initial form.
fn fit(s: &Session, tol: Option<f64>) -> Result<(), CliError> {
    require_inputs(s, 2)?;
    let target_json = input(s, 0, "ramification data")?;
    let target = RamData::from_json(&target_json)?;
    let init = read_pq(s, 1)?;
    let default_norm = || -> Result<(C64, C64), CliError> {
        let chart = Chart::new(init.clone()).map_err(numerical)?;
        Ok((
            chart.value(C64::new(0.0, 0.0)).map_err(numerical)?,
            chart.derivative(C64::new(0.0, 0.0)),
        ))
    };
    let normalization = match target_json.get("normalization") {
        None => default_norm()?,
        Some(Value::Object(m)) => {
            let get = |k: &str| {
                m.get(k)
                    .ok_or_else(|| CliError::parse(format!("normalization.{k}"), "missing"))
                    .and_then(|v| Ok(complex_from_json(v, &format!("normalization.{k}"))?))
            };
            (get("value")?, get("slope")?)
        }
        Some(_) => return Err(CliError::parse("normalization", "expected an object")),
    };
    let mut opts = FitOptions::default();
    if let Some(t) = tol {
        opts.tol = t;
    }
    let result = fit_pq_with(&target, &init, normalization, &opts).map_err(numerical)?;
    let mut body = match result.to_json() {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    body.insert("tol".into(), json!(opts.tol));
    write_json(&s.out, "fit.json", &report(s, body))
}

fn render(s: &Session) -> Result<(), CliError> {
    require_inputs(s, 1)?;
    let g = read_skeleton(s, 0)?;
    let window = feet_window(&g);
    let cells = kn_cells(&g, window, mesh_step(s, window)?).map_err(numerical)?;
    write_text(&s.out, "cells.svg", &cells_svg(&g, &cells))?;
    let mut body = match cells.to_json() {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    body.insert("skeleton".into(), g.to_json());
    write_json(&s.out, "cells.json", &report(s, body))
}

fn validate(s: &Session) -> Result<(), CliError> {
    require_inputs(s, 1)?;
    let g = read_skeleton(s, 0)?;
    let violations: Vec<Value> = validate_graph(&g)
        .iter()
        .map(|v| {
            json!({
                "axiom": v.axiom,
                "vertex": v.vertex,
                "edge": v.edge,
                "foot": v.foot.map(complex_to_json),
                "detail": v.detail,
            })
        })
        .collect();
    let mut body = Map::new();
    body.insert("count".into(), json!(violations.len()));
    body.insert("violations".into(), Value::Array(violations));
    write_json(&s.out, "violations.json", &report(s, body))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z0_parsing() {
        assert_eq!(parse_z0("auto").unwrap(), None);
        assert_eq!(parse_z0("0.5,-1").unwrap(), Some(C64::new(0.5, -1.0)));
        match parse_z0("1;2").unwrap_err() {
            CliError::Parse { field, .. } => assert_eq!(field, "--z0"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn error_kind_is_variant_name() {
        let e = numerical(crate::skeleton::SkeletonError::GenericityViolation {
            z0: C64::new(0.0, 0.0),
            clearance: 0.0,
        });
        match e {
            CliError::Numerical { kind, .. } => assert_eq!(kind, "GenericityViolation"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["logrs", "bogus", "x.json"]), 2);
        assert_eq!(run(["logrs", "analyze"]), 2);
    }
}
