//! Run configuration: defaults, then a JSON file, then command-line flags.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::Args;
use mfnorm::geometry::ModelGeometry;
use mfnorm::quadrature::QuadConfig;
use mfnorm::spaces::{fiber_grid, FiberGrading, SpaceConfig, XSpaceSpec, XiRule, XiWindow};
use mfnorm::verify::{default_slices, TestFunction};
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub geometry: Option<String>,
    pub lambda: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub xi: Option<XiSpec>,
    pub xi_rule: Option<String>,
    pub fiber_grid: Option<FiberSpec>,
    pub quad: Option<QuadSpec>,
    pub circle_samples: Option<usize>,
    pub function: Option<FunctionSpec>,
    pub y_slices: Option<Vec<f64>>,
    pub y0: Option<f64>,
    pub y1: Option<f64>,
    pub tolerance: Option<f64>,
    pub out: Option<OutSpec>,
}

/// Either `{min, max, step}` or `{n_min, n_max}`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XiSpec {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub step: Option<f64>,
    pub n_min: Option<i64>,
    pub n_max: Option<i64>,
}

impl XiSpec {
    fn window(&self) -> Result<XiWindow<f64>, CliError> {
        match *self {
            XiSpec { min: Some(min), max: Some(max), step: Some(step), n_min: None, n_max: None } => Ok(XiWindow::Grid { min, max, step }),
            XiSpec { min: None, max: None, step: None, n_min: Some(n_min), n_max: Some(n_max) } => Ok(XiWindow::Integer { n_min, n_max }),
            _ => Err(config_err("xi must be {min, max, step} or {n_min, n_max}")),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec {
    pub n: Option<usize>,
    pub grading: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSpec {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_depth: Option<usize>,
    pub divergence_cap: Option<f64>,
}

/// Either a bare catalog name or `{"name": ..., <params>}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Name(String),
    Table(BTreeMap<String, Value>),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutSpec {
    pub dir: Option<PathBuf>,
    pub format: Option<String>,
}

/// Flags shared by every command; each overrides the config file.
#[derive(Args, Clone, Debug, Default)]
pub struct Overrides {
    /// JSON configuration file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// elliptic | parabolic | hyperbolic
    #[arg(long, global = true)]
    pub geometry: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Fiber exponent
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Frequency exponent
    #[arg(long, global = true)]
    pub q: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub xi_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub xi_max: Option<f64>,
    #[arg(long, global = true)]
    pub xi_step: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub n_min: Option<i64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub n_max: Option<i64>,
    /// trapezoid | simpson
    #[arg(long, global = true)]
    pub xi_rule: Option<String>,
    /// Number of fiber nodes
    #[arg(long, global = true)]
    pub fiber_n: Option<usize>,
    /// uniform | geometric
    #[arg(long, global = true)]
    pub fiber_grading: Option<String>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub circle_samples: Option<usize>,
    /// Catalog entry (see `catalog`)
    #[arg(long, global = true)]
    pub function: Option<String>,
    /// Function parameter as name=value; repeatable
    #[arg(long = "param", global = true, value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Sample file for grid_csv
    #[arg(long, global = true)]
    pub path: Option<PathBuf>,
    /// Comma-separated slices for the factorization test
    #[arg(long, global = true, value_delimiter = ',')]
    pub y_slices: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub y0: Option<f64>,
    #[arg(long, global = true)]
    pub y1: Option<f64>,
    /// Tolerance for the selected check (each check has its own default)
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Directory for report files
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// json | csv
    #[arg(long, global = true)]
    pub format: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Fully resolved configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub space: SpaceConfig<f64>,
    pub function: TestFunction,
    /// Whether the frequency window came from the user rather than the catalog.
    pub window_given: bool,
    pub y_slices: Vec<f64>,
    pub y0: f64,
    pub y1: f64,
    pub tolerance: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn geometry(&self) -> ModelGeometry<f64> {
        self.space.x.geometry
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

fn parse_geometry(name: &str, lambda: f64) -> Result<ModelGeometry<f64>, CliError> {
    Ok(match name {
        "elliptic" => ModelGeometry::Elliptic,
        "parabolic" => ModelGeometry::parabolic(lambda)?,
        "hyperbolic" => ModelGeometry::hyperbolic(lambda)?,
        other => return Err(config_err(format!("unknown geometry {other:?}; expected elliptic, parabolic or hyperbolic"))),
    })
}

fn parse_rule(name: &str) -> Result<XiRule, CliError> {
    match name {
        "trapezoid" => Ok(XiRule::Trapezoid),
        "simpson" => Ok(XiRule::Simpson),
        other => Err(config_err(format!("unknown frequency rule {other:?}; expected trapezoid or simpson"))),
    }
}

fn parse_grading(name: &str) -> Result<FiberGrading, CliError> {
    match name {
        "uniform" => Ok(FiberGrading::Uniform),
        "geometric" => Ok(FiberGrading::Geometric),
        other => Err(config_err(format!("unknown fiber grading {other:?}; expected uniform or geometric"))),
    }
}

fn default_function(g: &ModelGeometry<f64>) -> &'static str {
    match g {
        ModelGeometry::Elliptic => "disc_geometric",
        ModelGeometry::Parabolic { .. } => "halfplane_kernel",
        ModelGeometry::Hyperbolic { .. } => "hyperbolic_exp",
    }
}

/// Default `y₁` so that `r₀ = e^{-2πy₁} = 0.4` on the disc.
fn default_y1(g: &ModelGeometry<f64>) -> f64 {
    match g {
        ModelGeometry::Elliptic => -(0.4f64).ln() / (2.0 * PI),
        _ => 0.2,
    }
}

struct FunctionChoice {
    name: String,
    params: BTreeMap<String, f64>,
    path: Option<PathBuf>,
}

fn function_from_file(spec: &FunctionSpec) -> Result<FunctionChoice, CliError> {
    match spec {
        FunctionSpec::Name(name) => Ok(FunctionChoice { name: name.clone(), params: BTreeMap::new(), path: None }),
        FunctionSpec::Table(table) => {
            let name = table
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| config_err("function table needs a string \"name\""))?
                .to_string();
            let mut params = BTreeMap::new();
            let mut path = None;
            for (key, value) in table {
                match (key.as_str(), value) {
                    ("name", _) => {}
                    ("path", Value::String(s)) => path = Some(PathBuf::from(s)),
                    (_, Value::Bool(b)) => {
                        params.insert(key.clone(), if *b { 1.0 } else { 0.0 });
                    }
                    (_, v) => {
                        let x = v.as_f64().ok_or_else(|| config_err(format!("function parameter {key} must be a number")))?;
                        params.insert(key.clone(), x);
                    }
                }
            }
            Ok(FunctionChoice { name, params, path })
        }
    }
}

fn parse_param(text: &str) -> Result<(String, f64), CliError> {
    let (key, value) = text.split_once('=').ok_or_else(|| config_err(format!("--param expects NAME=VALUE, got {text:?}")))?;
    let value = match value.trim() {
        "true" => 1.0,
        "false" => 0.0,
        v => v.parse::<f64>().map_err(|_| config_err(format!("--param {key}: {v:?} is not a number")))?,
    };
    Ok((key.trim().to_string(), value))
}

/// Merges defaults, the file and the flags, and validates the result.
pub fn resolve(flags: &Overrides) -> Result<RunConfig, CliError> {
    let file = match &flags.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };

    let lambda = flags.lambda.or(file.lambda).unwrap_or(0.0);
    let geometry_name = flags.geometry.clone().or(file.geometry.clone()).unwrap_or_else(|| "elliptic".into());
    let geometry = parse_geometry(&geometry_name, lambda)?;

    let p = flags.p.or(file.p).unwrap_or(2.0);
    let q = flags.q.or(file.q).unwrap_or(2.0);
    for (name, v) in [("p", p), ("q", q)] {
        if !(v >= 1.0) || !v.is_finite() {
            return Err(config_err(format!("{name} must lie in [1, inf), got {v}")));
        }
    }

    let mut choice = match &file.function {
        Some(spec) => function_from_file(spec)?,
        None => FunctionChoice { name: default_function(&geometry).into(), params: BTreeMap::new(), path: None },
    };
    if let Some(name) = &flags.function {
        if *name != choice.name {
            choice = FunctionChoice { name: name.clone(), params: BTreeMap::new(), path: None };
        }
    }
    for text in &flags.params {
        let (k, v) = parse_param(text)?;
        choice.params.insert(k, v);
    }
    if let Some(path) = &flags.path {
        choice.path = Some(path.clone());
    }
    let function = TestFunction::from_name(&choice.name, &choice.params, choice.path.as_deref())?;
    if !function.supports(&geometry) {
        return Err(config_err(format!("{} is not defined on the {} model", function.name, geometry.name())));
    }

    let (default_window, default_rule) = function.default_window(&geometry);
    let mut window = match &file.xi {
        Some(spec) => spec.window()?,
        None => default_window,
    };
    let mut window_given = file.xi.is_some();
    if flags.xi_min.is_some() || flags.xi_max.is_some() || flags.xi_step.is_some() {
        let (min0, max0, step0) = match window {
            XiWindow::Grid { min, max, step } => (min, max, step),
            XiWindow::Integer { .. } => return Err(config_err("the elliptic model has an integer dual; use --n-min/--n-max")),
        };
        window = XiWindow::Grid { min: flags.xi_min.unwrap_or(min0), max: flags.xi_max.unwrap_or(max0), step: flags.xi_step.unwrap_or(step0) };
        window_given = true;
    }
    if flags.n_min.is_some() || flags.n_max.is_some() {
        let (lo, hi) = match window {
            XiWindow::Integer { n_min, n_max } => (n_min, n_max),
            XiWindow::Grid { .. } => return Err(config_err("--n-min/--n-max apply to the elliptic model only; use --xi-min/--xi-max")),
        };
        window = XiWindow::Integer { n_min: flags.n_min.unwrap_or(lo), n_max: flags.n_max.unwrap_or(hi) };
        window_given = true;
    }
    let rule = match flags.xi_rule.as_ref().or(file.xi_rule.as_ref()) {
        Some(name) => parse_rule(name)?,
        None => default_rule,
    };

    let fiber = file.fiber_grid.clone().unwrap_or_default();
    let fiber_n = flags.fiber_n.or(fiber.n).unwrap_or(16);
    let grading = match flags.fiber_grading.as_ref().or(fiber.grading.as_ref()) {
        Some(name) => parse_grading(name)?,
        None => FiberGrading::Uniform,
    };

    let qspec = file.quad.clone().unwrap_or_default();
    let defaults = QuadConfig::default();
    let quad = QuadConfig {
        rel_tol: flags.rel_tol.or(qspec.rel_tol).unwrap_or(defaults.rel_tol),
        abs_tol: flags.abs_tol.or(qspec.abs_tol).unwrap_or(defaults.abs_tol),
        max_depth: qspec.max_depth.unwrap_or(defaults.max_depth),
        divergence_cap: qspec.divergence_cap.unwrap_or(defaults.divergence_cap),
    };

    let space = SpaceConfig {
        x: XSpaceSpec::new(p, geometry)?,
        q,
        xi_window: window,
        xi_rule: rule,
        fiber_grid: fiber_grid(&geometry, fiber_n, grading),
        quad,
        circle_samples: flags.circle_samples.or(file.circle_samples).unwrap_or(128),
    };
    space.validate()?;

    let y_slices = flags.y_slices.clone().or(file.y_slices.clone()).unwrap_or_else(|| default_slices(&geometry));
    let y0 = flags.y0.or(file.y0).unwrap_or(0.1);
    let y1 = flags.y1.or(file.y1).unwrap_or_else(|| default_y1(&geometry));
    if !(y0 >= 0.0) || !(y1 > y0) || !y1.is_finite() {
        return Err(config_err(format!("need 0 <= y0 < y1, got y0={y0}, y1={y1}")));
    }
    let tolerance = flags.tolerance.or(file.tolerance);
    if let Some(t) = tolerance {
        if !(t > 0.0) {
            return Err(config_err(format!("tolerance must be positive, got {t}")));
        }
    }

    let out = file.out.clone().unwrap_or_default();
    let format = match flags.format.as_ref().or(out.format.as_ref()).map(String::as_str) {
        None | Some("json") => Format::Json,
        Some("csv") => Format::Csv,
        Some(other) => return Err(config_err(format!("unknown output format {other:?}; expected json or csv"))),
    };

    Ok(RunConfig {
        space,
        function,
        window_given,
        y_slices,
        y0,
        y1,
        tolerance,
        out_dir: flags.out_dir.clone().or(out.dir),
        format,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_per_geometry() {
        let cfg = resolve(&Overrides::default()).unwrap();
        assert_eq!(cfg.function.name, "disc_geometric");
        assert!(matches!(cfg.space.xi_window, XiWindow::Integer { .. }));
        let flags = Overrides { geometry: Some("parabolic".into()), ..Default::default() };
        assert_eq!(resolve(&flags).unwrap().function.name, "halfplane_kernel");
    }

    #[test]
    fn flags_override_the_file() {
        let dir = std::env::temp_dir().join(format!("mfnorm-cli-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.json");
        std::fs::write(&path, r#"{"geometry":"parabolic","p":3,"xi":{"min":-1,"max":2,"step":0.1},"function":{"name":"halfplane_kernel","k":3}}"#).unwrap();
        let flags = Overrides { config: Some(path.clone()), p: Some(2.0), xi_max: Some(1.0), ..Default::default() };
        let cfg = resolve(&flags).unwrap();
        assert_eq!(cfg.space.x.p, 2.0);
        assert_eq!(cfg.space.xi_window, XiWindow::Grid { min: -1.0, max: 1.0, step: 0.1 });
        assert_eq!(cfg.function.params["k"], 3.0);
        assert!(cfg.window_given);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn rejects_bad_exponents_and_names() {
        for flags in [
            Overrides { q: Some(0.5), ..Default::default() },
            Overrides { p: Some(0.0), ..Default::default() },
            Overrides { geometry: Some("flat".into()), ..Default::default() },
            Overrides { function: Some("nope".into()), ..Default::default() },
            Overrides { params: vec!["a".into()], ..Default::default() },
            Overrides { xi_min: Some(0.0), ..Default::default() },
        ] {
            assert!(matches!(resolve(&flags), Err(CliError::Config(_)) | Err(CliError::Lib(_))), "{flags:?}");
        }
    }
}
