//! Built-in maps and problem instances with closed-form solution sets.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hilbert::{project, ConvexSet, Point};
use crate::monotone::{MaxMonotone, Moduli, SingleOp};
use crate::schedules::ViscosityParams;
use crate::setvalued::{MultiMap, OperatorClass, SelectionRule, SetImage};
use crate::solvers::ProblemInstance;

/// `x ↦ {x/2}` on the line, demicontractive with constant `beta`.
pub fn make_halving_line(beta: f64) -> MultiMap {
    halving(1, beta)
}

/// `(x, y) ↦ {(x/2, y/2)}`, demicontractive with constant `beta`.
pub fn make_halving_plane(beta: f64) -> MultiMap {
    halving(2, beta)
}

fn halving(dim: usize, beta: f64) -> MultiMap {
    MultiMap::scaling(dim, 0.5, OperatorClass::Demicontractive(beta))
}

/// `ψ ↦ {(2/3)ψ sin(1/ψ)}` with `T(0) = {0}`; demicontractive, not strictly
/// pseudocontractive.
pub fn make_oscillating(beta: f64) -> MultiMap {
    MultiMap::new("oscillating", 1, OperatorClass::Demicontractive(beta), |x| {
        let t = x.coords()[0];
        let y = if t == 0.0 { 0.0 } else { 2.0 / 3.0 * t * libm::sin(1.0 / t) };
        SetImage::Singleton(Point::scalar(y).unwrap_or_else(|_| Point::zeros(1)))
    })
    .with_fixed_points(vec![Point::zeros(1)])
}

/// Optional parts of [`make_inclusion_instance`].
#[derive(Debug, Clone)]
pub struct InclusionOptions {
    /// Viscosity and `Φ` constants. `Φ` is the identity, so `k ≤ 1 ≤ L`.
    pub params: ViscosityParams,
    /// Contraction `φ(x) = c·x + v`; `None` is the zero map.
    pub contraction: Option<(f64, Point)>,
    /// Declared demicontractive constant of `T1`, `T2`.
    pub beta_demi: f64,
    /// Element selection.
    pub selection: SelectionRule,
    /// Require `T_i q = {q}` at common points.
    pub strict_fixed_points: bool,
}

impl Default for InclusionOptions {
    fn default() -> Self {
        InclusionOptions {
            params: ViscosityParams::default(),
            contraction: None,
            beta_demi: 0.5,
            selection: SelectionRule::Metric,
            strict_fixed_points: true,
        }
    }
}

fn identity_phi(params: &ViscosityParams) -> Result<()> {
    if !(params.k <= 1.0 && params.lipschitz >= 1.0) {
        return Err(Error::Infeasible {
            condition: "k ≤ 1 ≤ L",
            detail: format!("Φ = I needs k ≤ 1 ≤ L, got k = {}, L = {}", params.k, params.lipschitz),
        });
    }
    params.check()
}

fn contraction_op(dim: usize, contraction: &Option<(f64, Point)>, b: f64) -> Result<SingleOp> {
    match contraction {
        None => Ok(SingleOp::zero(dim, 0.0)),
        Some((c, v)) => {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            if !(c.abs() <= b) {
                return Err(Error::Infeasible {
                    condition: "φ is b-Lipschitz",
                    detail: format!("|c| = {} exceeds b = {b}", c.abs()),
                });
            }
            Ok(SingleOp::affine(*c, v.clone()))
        }
    }
}

/// `Λx = x − a`, `Π = N_C`, `T1 = T2 = T3 = {scale·x}`, `K = C`.
///
/// The inclusion is solved exactly by `P_C(a)`. For `scale < 1` the maps fix
/// only `0`, so `P_C(a) = 0` is required and `Ω = {0}`; for `scale = 1` the
/// maps are the identity and `Ω = {P_C(a)}`.
pub fn make_inclusion_instance(
    d: usize,
    c: ConvexSet,
    a: Point,
    scale: f64,
    options: InclusionOptions,
) -> Result<ProblemInstance> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(Error::OutOfRange {
            name: "scale",
            value: scale,
            range: "(0, 1]",
        });
    }
    if a.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: a.dim(),
        });
    }
    let pa = project(&c, &a)?;
    let solution = if scale < 1.0 {
        if pa.norm() > 1e-12 {
            return Err(Error::InvalidInstance(format!(
                "P_C(a) = {:?} must be 0 when scale < 1",
                pa.coords()
            )));
        }
        Point::zeros(d)
    } else {
        pa
    };
    let params = options.params;
    identity_phi(&params)?;
    let scaled = |name: &str, class| {
        let map = if scale == 1.0 {
            MultiMap::new(name, d, class, |x| SetImage::Singleton(x.clone()))
        } else {
            let s = scale;
            MultiMap::new(name, d, class, move |x| SetImage::Singleton(x.map(|t| s * t)))
        };
        map.with_fixed_points(vec![solution.clone()])
    };
    let demi = OperatorClass::Demicontractive(options.beta_demi);
    Ok(ProblemInstance {
        name: format!("inclusion_d{d}"),
        dim: d,
        feasible: c.clone(),
        forward: SingleOp::shifted_identity(a),
        backward: MaxMonotone::NormalCone(c),
        t1: scaled("T1", demi),
        t2: scaled("T2", demi),
        t3: scaled("T3", OperatorClass::QuasiNonexpansive),
        contraction: contraction_op(d, &options.contraction, params.b)?,
        strong: SingleOp::identity(d),
        params,
        selection: options.selection,
        strict_fixed_points: options.strict_fixed_points,
        known_solution: Some(solution.clone()),
        known_common_points: vec![solution],
    })
}

/// The oscillating map as `T1` of a 1D instance on `K = [−1, 1]` with
/// `Λx = x`, `T2 = T3 = {scale·x}`; `Ω = {0}`.
pub fn make_oscillating_instance(scale: f64, options: InclusionOptions) -> Result<ProblemInstance> {
    let mut problem = make_inclusion_instance(1, ConvexSet::cube(1, -1.0, 1.0)?, Point::zeros(1), scale, options)?;
    problem.name = String::from("oscillating");
    problem.t1 = make_oscillating(problem.beta_demi());
    Ok(problem)
}

/// Every operator trivial: `K = R^d`, `Λ = 0`, `Π = 0`, `T_i = I`, `φ = 0`,
/// `Φ = I`. The main update reduces to `ψ⁺ = (1 − α_n(1 − μ_n))ψ` when
/// `η = 1`.
pub fn trivial_instance(d: usize, params: ViscosityParams) -> Result<ProblemInstance> {
    identity_phi(&params)?;
    let zero_ism = Moduli {
        lipschitz: Some(0.0),
        inverse_strong_monotonicity: Some(1.0),
        ..Moduli::default()
    };
    let origin = Point::zeros(d);
    let ident = |name: &str, class| {
        MultiMap::new(name, d, class, |x| SetImage::Singleton(x.clone())).with_fixed_points(vec![origin.clone()])
    };
    Ok(ProblemInstance {
        name: format!("trivial_d{d}"),
        dim: d,
        feasible: ConvexSet::WholeSpace,
        forward: SingleOp::zero(d, 0.0).with_moduli(zero_ism),
        backward: MaxMonotone::ZeroOperator,
        t1: ident("T1", OperatorClass::Demicontractive(0.0)),
        t2: ident("T2", OperatorClass::Demicontractive(0.0)),
        t3: ident("T3", OperatorClass::QuasiNonexpansive),
        contraction: SingleOp::zero(d, 0.0),
        strong: SingleOp::identity(d),
        params,
        selection: SelectionRule::Metric,
        strict_fixed_points: true,
        known_solution: Some(origin.clone()),
        known_common_points: vec![origin],
    })
}

/// Identifiers of the built-in instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    /// [`make_inclusion_instance`].
    Inclusion,
    /// [`make_oscillating_instance`].
    Oscillating,
    /// [`trivial_instance`].
    Trivial,
}

impl InstanceKind {
    /// All kinds, in a fixed order.
    pub const ALL: [InstanceKind; 3] = [InstanceKind::Inclusion, InstanceKind::Oscillating, InstanceKind::Trivial];

    /// Identifier used in configs.
    pub fn id(self) -> &'static str {
        match self {
            InstanceKind::Inclusion => "inclusion",
            InstanceKind::Oscillating => "oscillating",
            InstanceKind::Trivial => "trivial",
        }
    }

    /// Inverse of [`InstanceKind::id`].
    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.id() == id)
    }
}

/// Numeric description of a built-in instance.
#[derive(Debug, Clone)]
pub struct InstanceSpec {
    /// Which instance.
    pub kind: InstanceKind,
    /// Dimension; ignored by the 1D oscillating instance.
    pub dim: usize,
    /// Constraint set `C`; `None` is the cube `[−1, 1]^d`.
    pub set: Option<ConvexSet>,
    /// Offset `a` in `Λx = x − a`; `None` is the origin.
    pub offset: Option<Point>,
    /// Scale of the fixed-point maps.
    pub scale: f64,
    /// Remaining options.
    pub options: InclusionOptions,
}

impl InstanceSpec {
    /// Default spec for `kind` in dimension `dim`.
    pub fn new(kind: InstanceKind, dim: usize) -> Self {
        InstanceSpec {
            kind,
            dim,
            set: None,
            offset: None,
            scale: 0.5,
            options: InclusionOptions::default(),
        }
    }

    /// Assembles the instance.
    pub fn build(&self) -> Result<ProblemInstance> {
        let mut problem = match self.kind {
            InstanceKind::Inclusion => {
                let set = match &self.set {
                    Some(s) => s.clone(),
                    None => ConvexSet::cube(self.dim, -1.0, 1.0)?,
                };
                let a = self.offset.clone().unwrap_or_else(|| Point::zeros(self.dim));
                make_inclusion_instance(self.dim, set, a, self.scale, self.options.clone())?
            }
            InstanceKind::Oscillating => make_oscillating_instance(self.scale, self.options.clone())?,
            InstanceKind::Trivial => trivial_instance(self.dim, self.options.params)?,
        };
        problem.selection = self.options.selection;
        problem.strict_fixed_points = self.options.strict_fixed_points;
        problem.validate()?;
        Ok(problem)
    }
}

/// Regular grid of `count` points in `[lo, hi]^dim`, used by the class audits.
/// Coordinates cycle through `⌈count^{1/dim}⌉` levels per axis.
pub fn sample_grid(dim: usize, count: usize, lo: f64, hi: f64) -> Vec<Point> {
    let mut per_axis = 1usize;
    while per_axis.saturating_pow(dim as u32) < count {
        per_axis += 1;
    }
    let level = |i: usize| {
        if per_axis == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (per_axis - 1) as f64
        }
    };
    (0..count)
        .map(|mut idx| {
            let coords: Vec<f64> = (0..dim)
                .map(|_| {
                    let c = level(idx % per_axis);
                    idx /= per_axis;
                    c
                })
                .collect();
            Point::new(coords).unwrap_or_else(|_| Point::zeros(dim))
        })
        .collect()
}
