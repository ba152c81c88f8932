//! JSON run configuration and its conversion into core inputs.

use std::fmt;
use std::path::Path;

use pencil_core::exactcore::{parse_rat, Rat};
use pencil_core::pencil::{degenerate_from_jacobi, PencilData};
use pencil_core::perturb::{Measure, PerturbationParams};
use pencil_core::Error as CoreError;
use serde::Deserialize;

/// A configuration problem, reported with exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error in `{}`: {}", self.field, self.message)
    }
}

/// A rational written as `"num/den"`, a decimal string or a JSON integer.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RawRat {
    Text(String),
    Int(i64),
}

impl RawRat {
    fn parse(&self, field: &str) -> Result<Rat, ConfigError> {
        match self {
            RawRat::Int(n) => Ok(Rat::from_integer((*n).into())),
            RawRat::Text(s) => parse_rat(s)
                .ok_or_else(|| ConfigError::new(field, format!("`{s}` is not a rational number"))),
        }
    }
}

fn parse_list(raw: &[RawRat], field: &str) -> Result<Vec<Rat>, ConfigError> {
    raw.iter()
        .enumerate()
        .map(|(i, r)| r.parse(&format!("{field}[{i}]")))
        .collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitPencil {
    pub a: Vec<RawRat>,
    pub b: Vec<RawRat>,
    pub alpha_j5: Vec<RawRat>,
    pub beta_j5: Vec<RawRat>,
    pub gamma: Vec<RawRat>,
    pub alpha_const: RawRat,
    pub beta_const: RawRat,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegeneratePencil {
    pub a: Vec<RawRat>,
    pub b: Vec<RawRat>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobiSpec {
    pub a: RawRat,
    pub b: RawRat,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteSpec {
    pub nodes: Vec<RawRat>,
    pub weights: Vec<RawRat>,
}

/// `"jacobi:a,b"`, `{"jacobi": {"a", "b"}}` or `{"discrete": {"nodes", "weights"}}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MeasureSpec {
    Short(String),
    Jacobi { jacobi: JacobiSpec },
    Discrete { discrete: DiscreteSpec },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    pub c: RawRat,
    pub d: RawRat,
    pub measure: MeasureSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdPoint {
    pub n: usize,
    pub lambda: RawRat,
    pub y: RawRat,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeSpec {
    pub a: RawRat,
    pub b: RawRat,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Generate,
    Residuals,
    CdCheck,
    Spectrum,
    Moments,
    Detrep,
    Perturb,
    OdeCheck,
    BandCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Residuals => "residuals",
            Command::CdCheck => "cd-check",
            Command::Spectrum => "spectrum",
            Command::Moments => "moments",
            Command::Detrep => "detrep",
            Command::Perturb => "perturb",
            Command::OdeCheck => "ode-check",
            Command::BandCheck => "band-check",
        }
    }
}

/// The file as written; every field is optional here and checked per command.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub command: Option<Command>,
    pub pencil: Option<ExplicitPencil>,
    pub degenerate: Option<DegeneratePencil>,
    pub perturbation: Option<PerturbationSpec>,
    pub depth: Option<usize>,
    pub points: Option<Vec<CdPoint>>,
    pub ode: Option<OdeSpec>,
    pub order: Option<usize>,
    pub grid_degree: Option<usize>,
    pub format: Option<Format>,
    pub tol: Option<f64>,
    pub expect_banded: Option<bool>,
}

pub fn read_config(path: &Path) -> Result<RawConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new("--config", format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RawConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = match e.path().to_string() {
            p if p == "." || p == "?" => "<root>".to_string(),
            p => p,
        };
        ConfigError::new(field, e.inner().to_string())
    })
}

/// One of the three construction routes.
#[derive(Debug, Clone)]
pub enum Source {
    Pencil { route: &'static str, pencil: PencilData },
    Perturbation(Perturbation),
}

#[derive(Debug, Clone)]
pub struct Perturbation {
    pub params: PerturbationParams,
    pub measure: Measure,
}

/// Fully validated settings for a single run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub source: Option<Source>,
    pub depth: usize,
    pub points: Option<Vec<(usize, Rat, Rat)>>,
    pub ode: Option<(Rat, Rat, usize)>,
    pub order: usize,
    pub grid_degree: usize,
    pub format: Format,
    pub tol: Option<f64>,
    pub expect_banded: bool,
}

pub const DEFAULT_DEPTH: usize = 6;
pub const DEFAULT_ORDER: usize = 2;
pub const DEFAULT_GRID: usize = 8;

/// Command-line values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub format: Option<Format>,
    pub tol: Option<f64>,
    pub expect_banded: bool,
}

impl RunConfig {
    pub fn resolve(command: Command, raw: RawConfig, cli: Overrides) -> Result<Self, ConfigError> {
        if let Some(declared) = raw.command {
            if declared != command {
                return Err(ConfigError::new(
                    "command",
                    format!("config declares `{}` but `{}` was invoked", declared.name(), command.name()),
                ));
            }
        }
        let depth = positive(raw.depth, DEFAULT_DEPTH, "depth")?;
        let order = positive(raw.order, DEFAULT_ORDER, "order")?;
        let grid_degree = positive(raw.grid_degree, DEFAULT_GRID, "grid_degree")?;
        let tol = cli.tol.or(raw.tol);
        if let Some(t) = tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(ConfigError::new("tol", format!("{t} must be a positive finite number")));
            }
        }
        let source = resolve_source(&raw)?;
        let points = raw
            .points
            .as_ref()
            .map(|pts| {
                pts.iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let lam = p.lambda.parse(&format!("points[{i}].lambda"))?;
                        let y = p.y.parse(&format!("points[{i}].y"))?;
                        if lam == y {
                            return Err(ConfigError::new(format!("points[{i}]"), "lambda and y must differ"));
                        }
                        Ok((p.n, lam, y))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        let ode = raw
            .ode
            .as_ref()
            .map(|o| Ok::<_, ConfigError>((o.a.parse("ode.a")?, o.b.parse("ode.b")?, o.n)))
            .transpose()?;
        Ok(RunConfig {
            command,
            source,
            depth,
            points,
            ode,
            order,
            grid_degree,
            format: cli.format.or(raw.format).unwrap_or(Format::Json),
            tol,
            expect_banded: cli.expect_banded || raw.expect_banded.unwrap_or(false),
        })
    }
}

fn positive(v: Option<usize>, default: usize, field: &str) -> Result<usize, ConfigError> {
    match v {
        Some(0) => Err(ConfigError::new(field, "must be at least 1")),
        Some(n) => Ok(n),
        None => Ok(default),
    }
}

fn resolve_source(raw: &RawConfig) -> Result<Option<Source>, ConfigError> {
    let given: Vec<&str> = [
        raw.pencil.as_ref().map(|_| "pencil"),
        raw.degenerate.as_ref().map(|_| "degenerate"),
        raw.perturbation.as_ref().map(|_| "perturbation"),
    ]
    .into_iter()
    .flatten()
    .collect();
    if given.len() > 1 {
        return Err(ConfigError::new(
            given[1],
            format!("only one of `pencil`, `degenerate`, `perturbation` may be given (found {})", given.join(", ")),
        ));
    }
    if let Some(p) = &raw.pencil {
        let pencil = PencilData {
            a: parse_list(&p.a, "pencil.a")?,
            b: parse_list(&p.b, "pencil.b")?,
            alpha_j5: parse_list(&p.alpha_j5, "pencil.alpha_j5")?,
            beta_j5: parse_list(&p.beta_j5, "pencil.beta_j5")?,
            gamma: parse_list(&p.gamma, "pencil.gamma")?,
            alpha_const: p.alpha_const.parse("pencil.alpha_const")?,
            beta_const: p.beta_const.parse("pencil.beta_const")?,
        };
        return Ok(Some(Source::Pencil {
            route: "pencil",
            pencil,
        }));
    }
    if let Some(p) = &raw.degenerate {
        let a = parse_list(&p.a, "degenerate.a")?;
        let b = parse_list(&p.b, "degenerate.b")?;
        if a.is_empty() || b.is_empty() {
            return Err(ConfigError::new("degenerate", "`a` and `b` must be non-empty"));
        }
        let pencil = degenerate_from_jacobi(&a, &b).map_err(|e| core_config_error("degenerate", &e))?;
        return Ok(Some(Source::Pencil {
            route: "degenerate",
            pencil,
        }));
    }
    if let Some(p) = &raw.perturbation {
        let c = p.c.parse("perturbation.c")?;
        let d = p.d.parse("perturbation.d")?;
        let params = PerturbationParams::new(c, d)
            .map_err(|e| ConfigError::new("perturbation.c", e.to_string()))?;
        let measure = parse_measure(&p.measure)?;
        measure
            .validate()
            .map_err(|e| ConfigError::new("perturbation.measure", e.to_string()))?;
        return Ok(Some(Source::Perturbation(Perturbation { params, measure })));
    }
    Ok(None)
}

fn parse_measure(spec: &MeasureSpec) -> Result<Measure, ConfigError> {
    const FIELD: &str = "perturbation.measure";
    match spec {
        MeasureSpec::Short(s) => {
            let rest = s
                .strip_prefix("jacobi:")
                .ok_or_else(|| ConfigError::new(FIELD, format!("`{s}` is not of the form `jacobi:a,b`")))?;
            let (a, b) = rest
                .split_once(',')
                .ok_or_else(|| ConfigError::new(FIELD, format!("`{s}` is not of the form `jacobi:a,b`")))?;
            let a = parse_rat(a).ok_or_else(|| ConfigError::new(FIELD, format!("`{a}` is not a rational number")))?;
            let b = parse_rat(b).ok_or_else(|| ConfigError::new(FIELD, format!("`{b}` is not a rational number")))?;
            Ok(Measure::JacobiWeight { a, b })
        }
        MeasureSpec::Jacobi { jacobi } => Ok(Measure::JacobiWeight {
            a: jacobi.a.parse("perturbation.measure.jacobi.a")?,
            b: jacobi.b.parse("perturbation.measure.jacobi.b")?,
        }),
        MeasureSpec::Discrete { discrete } => Ok(Measure::Discrete {
            nodes: parse_list(&discrete.nodes, "perturbation.measure.discrete.nodes")?,
            weights: parse_list(&discrete.weights, "perturbation.measure.discrete.weights")?,
        }),
    }
}

/// Maps an input-shaped core error to the config field it points at, or
/// `None` when the error is a check outcome rather than bad input.
pub fn core_field(route: &str, e: &CoreError) -> Option<String> {
    match e {
        CoreError::NonpositiveA { index } => Some(format!("{route}.a[{index}]")),
        CoreError::NonpositiveGamma { index } => Some(format!("{route}.gamma[{index}]")),
        CoreError::NonpositiveAlphaConst => Some(format!("{route}.alpha_const")),
        CoreError::InsufficientPrefix { field, .. } => Some(format!("{route}.{field}")),
        CoreError::InvalidParams { .. } => Some("perturbation.c".into()),
        CoreError::InvalidMeasure(_) => Some("perturbation.measure".into()),
        CoreError::InsufficientList { .. }
        | CoreError::InsufficientBasis { .. }
        | CoreError::InsufficientTable { .. }
        | CoreError::InsufficientMoments { .. }
        | CoreError::IndexOutOfRange { .. }
        | CoreError::SizeCapExceeded { .. } => Some("depth".into()),
        _ => None,
    }
}

fn core_config_error(route: &str, e: &CoreError) -> ConfigError {
    ConfigError::new(core_field(route, e).unwrap_or_else(|| route.to_string()), e.to_string())
}
