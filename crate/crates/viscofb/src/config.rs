//! TOML run configurations and their expansion into validated cells.
//!
//! ```toml
//! seed = 7              # optional; enables the sampled operator audits
//!
//! [[cell]]
//! name = "compare"
//! algorithm = ["main", "two_map", "three_map"]   # list fields are swept
//! instance = "inclusion"
//! dim = [1, 2, 10]
//! mu = 0.3
//! tol = 1e-10
//! ```
//!
//! `algorithm`, `dim`, `gamma` and `mu` accept a scalar or a list; lists
//! expand into the cartesian product, in that nesting order.

use std::collections::BTreeSet;

use serde::Deserialize;
use viscofb_core::problems::{InclusionOptions, InstanceKind, InstanceSpec};
use viscofb_core::schedules::{default_schedule, validate, Schedule, Sequence, ViscosityParams};
use viscofb_core::setvalued::SelectionRule;
use viscofb_core::solvers::{Algorithm, HistoryStride, ProblemInstance, RunOptions, TwoMapLastLine, StopRule};
use viscofb_core::{ConvexSet, Point};

use crate::error::ConfigError;

/// Sample count of the operator audits when a seed is present.
pub const DEFAULT_AUDIT_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn values(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(vs) => vs.clone(),
        }
    }

    fn is_sweep(&self) -> bool {
        matches!(self, OneOrMany::Many(_))
    }
}

fn values_or<T: Clone>(field: &Option<OneOrMany<T>>, default: T) -> (Vec<T>, bool) {
    match field {
        Some(f) => (f.values(), f.is_sweep()),
        None => (vec![default], false),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawSet {
    Whole,
    Cube { lo: f64, hi: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    HalfSpace { normal: Vec<f64>, offset: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContraction {
    coef: f64,
    #[serde(default)]
    shift: Vec<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCell {
    name: Option<String>,
    algorithm: Option<OneOrMany<String>>,
    instance: Option<String>,
    dim: Option<OneOrMany<usize>>,
    scale: Option<f64>,
    set: Option<RawSet>,
    offset: Option<Vec<f64>>,
    contraction: Option<RawContraction>,
    gamma: Option<OneOrMany<f64>>,
    eta: Option<f64>,
    k: Option<f64>,
    lipschitz: Option<f64>,
    b: Option<f64>,
    beta_demi: Option<f64>,
    mu: Option<OneOrMany<f64>>,
    schedule: Option<String>,
    psi0: Option<Vec<f64>>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    selection: Option<String>,
    strict_fixed_points: Option<bool>,
    two_map_last_line: Option<String>,
    history_dense_until: Option<usize>,
    history_every: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    audit_samples: Option<usize>,
    #[serde(default, rename = "cell")]
    cells: Vec<RawCell>,
}

/// One fully specified run.
#[derive(Debug, Clone)]
pub struct Cell {
    /// Unique identifier; also the CSV file stem.
    pub id: String,
    /// Algorithm.
    pub algorithm: Algorithm,
    /// Instance identifier and numeric parameters.
    pub spec: InstanceSpec,
    /// Assembled instance.
    pub problem: ProblemInstance,
    /// Validated schedule.
    pub schedule: Schedule,
    /// Starting point.
    pub psi0: Point,
    /// Stopping rule.
    pub stop: StopRule,
    /// Run options.
    pub options: RunOptions,
    /// Whether summable step sizes were requested.
    pub strict_schedule: bool,
}

/// Validated cells plus the audit seed.
#[derive(Debug, Clone)]
pub struct RunPlan {
    /// Cells in execution order.
    pub cells: Vec<Cell>,
    /// Seed of the sampled operator audits; `None` disables them.
    pub seed: Option<u64>,
    /// Samples per sampled audit.
    pub audit_samples: usize,
}

fn point(cell: &str, field: &str, coords: &[f64], dim: usize) -> Result<Point, ConfigError> {
    let coords = match coords.len() {
        1 if dim > 1 => vec![coords[0]; dim],
        n if n == dim => coords.to_vec(),
        n => {
            return Err(ConfigError::invalid(
                cell,
                field,
                format!("expected {dim} coordinates (or 1 to broadcast), got {n}"),
            ))
        }
    };
    Point::new(coords).map_err(|e| ConfigError::invalid(cell, field, e.to_string()))
}

fn build_set(cell: &str, raw: &RawSet, dim: usize) -> Result<ConvexSet, ConfigError> {
    let set = match raw {
        RawSet::Whole => Ok(ConvexSet::WholeSpace),
        RawSet::Cube { lo, hi } => ConvexSet::cube(dim, *lo, *hi),
        RawSet::Box { lower, upper } => {
            ConvexSet::boxed(point(cell, "set.lower", lower, dim)?, point(cell, "set.upper", upper, dim)?)
        }
        RawSet::Ball { center, radius } => ConvexSet::ball(point(cell, "set.center", center, dim)?, *radius),
        RawSet::HalfSpace { normal, offset } => {
            ConvexSet::half_space(point(cell, "set.normal", normal, dim)?, *offset)
        }
    };
    set.map_err(|e| ConfigError::invalid(cell, "set", e.to_string()))
}

fn format_value(v: f64) -> String {
    format!("{v}")
}

fn parse_selection(cell: &str, s: &str) -> Result<SelectionRule, ConfigError> {
    match s {
        "metric" => Ok(SelectionRule::Metric),
        "first" => Ok(SelectionRule::FirstEnumerated),
        other => Err(ConfigError::unknown("selection", other, "metric, first").in_cell(cell)),
    }
}

fn parse_last_line(cell: &str, s: &str) -> Result<TwoMapLastLine, ConfigError> {
    match s {
        "pi" => Ok(TwoMapLastLine::Pi),
        "phi" => Ok(TwoMapLastLine::Phi),
        other => Err(ConfigError::unknown("two_map_last_line", other, "pi, phi").in_cell(cell)),
    }
}

struct SweepPoint {
    algorithm: String,
    dim: usize,
    gamma: Option<f64>,
    mu: Option<f64>,
}

fn expand(index: usize, raw: &RawCell) -> Result<Vec<(String, SweepPoint)>, ConfigError> {
    let base = raw.name.clone().unwrap_or_else(|| format!("cell{index}"));
    let kind = raw.instance.as_deref().unwrap_or("inclusion");
    let default_dim = if kind == InstanceKind::Oscillating.id() { 1 } else { 2 };
    let (algorithms, alg_sweep) = values_or(&raw.algorithm, String::from("main"));
    let (dims, dim_sweep) = values_or(&raw.dim, default_dim);
    let (gammas, gamma_sweep) = match &raw.gamma {
        Some(g) => (g.values().into_iter().map(Some).collect(), g.is_sweep()),
        None => (vec![None], false),
    };
    let (mus, mu_sweep) = match &raw.mu {
        Some(m) => (m.values().into_iter().map(Some).collect(), m.is_sweep()),
        None => (vec![None], false),
    };
    for (field, empty) in [
        ("algorithm", algorithms.is_empty()),
        ("dim", dims.is_empty()),
        ("gamma", gammas.is_empty()),
        ("mu", mus.is_empty()),
    ] {
        if empty {
            return Err(ConfigError::invalid(&base, field, String::from("empty sweep list")));
        }
    }

    let mut out = Vec::new();
    for algorithm in &algorithms {
        for &dim in &dims {
            for &gamma in &gammas {
                for &mu in &mus {
                    let mut id = base.clone();
                    if alg_sweep {
                        id.push('_');
                        id.push_str(algorithm);
                    }
                    if dim_sweep {
                        id.push_str(&format!("_d{dim}"));
                    }
                    if let (true, Some(g)) = (gamma_sweep, gamma) {
                        id.push_str(&format!("_g{}", format_value(g)));
                    }
                    if let (true, Some(m)) = (mu_sweep, mu) {
                        id.push_str(&format!("_mu{}", format_value(m)));
                    }
                    out.push((
                        id,
                        SweepPoint {
                            algorithm: algorithm.clone(),
                            dim,
                            gamma,
                            mu,
                        },
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn build_cell(id: String, raw: &RawCell, at: SweepPoint) -> Result<Cell, ConfigError> {
    let cell = id.as_str();
    let algorithm = Algorithm::from_id(&at.algorithm)
        .ok_or_else(|| ConfigError::unknown("algorithm", &at.algorithm, "main, two_map, three_map, forward_backward").in_cell(cell))?;
    let kind_id = raw.instance.as_deref().unwrap_or("inclusion");
    let kind = InstanceKind::from_id(kind_id)
        .ok_or_else(|| ConfigError::unknown("instance", kind_id, "inclusion, oscillating, trivial").in_cell(cell))?;
    let dim = at.dim;
    if dim == 0 {
        return Err(ConfigError::invalid(cell, "dim", String::from("dimension must be positive")));
    }
    if kind == InstanceKind::Oscillating && dim != 1 {
        return Err(ConfigError::invalid(cell, "dim", String::from("the oscillating instance is one-dimensional")));
    }

    let defaults = ViscosityParams::default();
    let params = ViscosityParams {
        gamma: at.gamma.unwrap_or(defaults.gamma),
        eta: raw.eta.unwrap_or(defaults.eta),
        k: raw.k.unwrap_or(defaults.k),
        lipschitz: raw.lipschitz.unwrap_or(defaults.lipschitz),
        b: raw.b.unwrap_or(defaults.b),
    };
    let contraction = match &raw.contraction {
        None => None,
        Some(c) => {
            let shift = if c.shift.is_empty() {
                Point::zeros(dim)
            } else {
                point(cell, "contraction.shift", &c.shift, dim)?
            };
            Some((c.coef, shift))
        }
    };
    let selection = parse_selection(cell, raw.selection.as_deref().unwrap_or("metric"))?;
    let mut options = InclusionOptions {
        params,
        contraction,
        selection,
        strict_fixed_points: raw.strict_fixed_points.unwrap_or(true),
        ..InclusionOptions::default()
    };
    if let Some(b) = raw.beta_demi {
        options.beta_demi = b;
    }
    let spec = InstanceSpec {
        kind,
        dim,
        set: raw.set.as_ref().map(|s| build_set(cell, s, dim)).transpose()?,
        offset: raw.offset.as_ref().map(|o| point(cell, "offset", o, dim)).transpose()?,
        scale: raw.scale.unwrap_or(0.5),
        options,
    };
    let problem = spec.build().map_err(|e| ConfigError::from_core(cell, e))?;

    let mut schedule = default_schedule(&problem.params, problem.beta_demi(), problem.alpha_ism())
        .map_err(|e| ConfigError::from_core(cell, e))?;
    let strict_schedule = match raw.schedule.as_deref().unwrap_or("default") {
        "default" => false,
        "strict" => true,
        other => return Err(ConfigError::unknown("schedule", other, "default, strict").in_cell(cell)),
    };
    if strict_schedule {
        schedule = schedule.summable_steps();
    }
    if let Some(mu) = at.mu {
        schedule.mu = Sequence::Constant(mu);
    }
    let max_iter = raw.max_iter.unwrap_or(1_000_000);
    let horizon = max_iter.clamp(100, 10_000);
    validate(&schedule, &problem.params, horizon)
        .into_result()
        .map_err(|e| ConfigError::from_core(cell, e))?;

    let tol = raw.tol.unwrap_or(1e-10);
    if tol.is_nan() || tol <= 0.0 {
        return Err(ConfigError::invalid(cell, "tol", format!("tolerance must be positive, got {tol}")));
    }
    let psi0 = point(cell, "psi0", raw.psi0.as_deref().unwrap_or(&[0.5]), dim)?;
    let stride = HistoryStride::default();
    let options = RunOptions {
        history: HistoryStride {
            dense_until: raw.history_dense_until.unwrap_or(stride.dense_until),
            every: raw.history_every.unwrap_or(stride.every).max(1),
        },
        last_line: parse_last_line(cell, raw.two_map_last_line.as_deref().unwrap_or("pi"))?,
        validation_horizon: horizon,
        ..RunOptions::default()
    };

    Ok(Cell {
        id,
        algorithm,
        spec,
        problem,
        schedule,
        psi0,
        stop: StopRule { tol, max_iter },
        options,
        strict_schedule,
    })
}

/// Parses and validates a TOML configuration. A document without `[[cell]]`
/// tables yields one cell with every default.
pub fn parse_config(text: &str) -> Result<RunPlan, ConfigError> {
    let mut raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    if raw.cells.is_empty() {
        raw.cells.push(RawCell::default());
    }
    let mut cells = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, rc) in raw.cells.iter().enumerate() {
        for (id, at) in expand(i, rc)? {
            if !seen.insert(id.clone()) {
                return Err(ConfigError::invalid(&id, "name", String::from("duplicate cell id")));
            }
            if !id.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
                return Err(ConfigError::invalid(&id, "name", String::from("ids may use only [A-Za-z0-9._-]")));
            }
            cells.push(build_cell(id, rc, at)?);
        }
    }
    Ok(RunPlan {
        cells,
        seed: raw.seed,
        audit_samples: raw.audit_samples.unwrap_or(DEFAULT_AUDIT_SAMPLES),
    })
}
