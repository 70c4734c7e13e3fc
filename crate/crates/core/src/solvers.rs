//! The viscosity forward-backward iterations and their run-time audits.
//!
//! One update of the main iteration, from `ψ` with parameters at index `n`:
//!
//! ```text
//! δ = J_λ(ψ − λΛψ)
//! π = θδ + (1−θ)v,       v ∈ T1 δ
//! φ = βπ + (1−β)u,       u ∈ T2 π
//! ξ = γφ + (1−γ)z,       z ∈ T3 φ
//! ψ⁺ = P_K(αγ·φ_c(ψ) + μξ + (1−μ)(ψ − ηαΦψ))
//! ```
//!
//! where `φ_c` is the viscosity contraction. The two baselines differ only in
//! the last line (and the baseline with two maps stops after `φ`).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::audit::AuditRecord;
use crate::error::{Error, Result};
use crate::hilbert::{project, ConvexSet, Point};
use crate::monotone::{fixed_point_residual, forward_backward_step, MaxMonotone, SingleOp};
use crate::schedules::{validate, Schedule, StepParams, ViscosityParams};
use crate::setvalued::{select, MultiMap, OperatorClass, SelectionRule, SetImage};
use crate::AUDIT_TOL;

/// Residual threshold for accepting a probe as a common point of `Ω`.
pub const CERTIFY_TOL: f64 = 1e-8;
/// Slack of the boundedness audit.
pub const BOUND_TOL: f64 = 1e-8;
/// Default divergence guard on `‖ψ_n‖`.
pub const DIVERGENCE_NORM: f64 = 1e12;

/// A complete problem: the inclusion `0 ∈ Πψ + Λψ` on `K`, three multivalued
/// maps, and the viscosity data `φ`, `Φ`, `γ`, `η`.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    /// Display name.
    pub name: String,
    /// Ambient dimension.
    pub dim: usize,
    /// Feasible set `K`; every update is projected onto it.
    pub feasible: ConvexSet,
    /// `Λ`, inverse strongly monotone.
    pub forward: SingleOp,
    /// `Π`, maximal monotone, domain inside `K`.
    pub backward: MaxMonotone,
    /// `T1`, demicontractive.
    pub t1: MultiMap,
    /// `T2`, demicontractive.
    pub t2: MultiMap,
    /// `T3`, quasi-nonexpansive.
    pub t3: MultiMap,
    /// Viscosity contraction `φ`, `b`-Lipschitz.
    pub contraction: SingleOp,
    /// `Φ`, `k`-strongly monotone and `L`-Lipschitz.
    pub strong: SingleOp,
    /// `γ, η, k, L, b`.
    pub params: ViscosityParams,
    /// Element selection for `v_n, u_n, z_n`.
    pub selection: SelectionRule,
    /// Require `T1 q = T2 q = T3 q = {q}` for every declared common point.
    /// Off for the metric-projection variant, which drops that hypothesis.
    pub strict_fixed_points: bool,
    /// The solution `ψ*` of the variational inequality, when known.
    pub known_solution: Option<Point>,
    /// Points of `Ω` known in closed form; used as audit anchors.
    pub known_common_points: Vec<Point>,
}

fn dim_error(expected: usize, found: usize) -> Error {
    Error::DimensionMismatch { expected, found }
}

impl ProblemInstance {
    /// Largest declared demicontractive constant of `T1`, `T2` (`0` when a
    /// map declares a stronger class).
    pub fn beta_demi(&self) -> f64 {
        [&self.t1, &self.t2]
            .iter()
            .map(|t| match t.declared_class() {
                OperatorClass::Demicontractive(b) => b,
                OperatorClass::StrictlyPseudocontractive(k) => k,
                _ => 0.0,
            })
            .fold(0.0, f64::max)
    }

    /// Declared inverse-strong-monotonicity constant of `Λ` (`1/2` if none).
    pub fn alpha_ism(&self) -> f64 {
        self.forward.moduli().inverse_strong_monotonicity.unwrap_or(0.5)
    }

    /// Step size used when certifying probes: `min{1, 2α}/2`, with `α` the
    /// declared inverse-strong-monotonicity constant of `Λ` (`1/2` if none).
    pub fn certify_lambda(&self) -> f64 {
        (2.0 * self.alpha_ism()).min(1.0) / 2.0
    }

    /// Largest of `‖q − J(q − λΛq)‖` and `d(q, T_i q)` for `i = 1, 2, 3`.
    pub fn membership_residual(&self, q: &Point) -> Result<f64> {
        let fb = fixed_point_residual(&self.backward, &self.forward, self.certify_lambda(), q)?;
        let maps = [&self.t1, &self.t2, &self.t3];
        maps.iter()
            .map(|t| t.residual(q))
            .try_fold(fb, |acc, r| Ok(acc.max(r?)))
    }

    /// Fails unless `q` is a common point within [`CERTIFY_TOL`].
    pub fn certify(&self, q: &Point, index: usize) -> Result<()> {
        let residual = self.membership_residual(q)?;
        if residual <= CERTIFY_TOL {
            Ok(())
        } else {
            Err(Error::UncertifiedProbe { index, residual })
        }
    }

    /// Checks dimensions, constants, declared common points and the strict
    /// fixed-point hypothesis.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        if let Some(k) = self.feasible.dim() {
            if k != d {
                return Err(dim_error(d, k));
            }
        }
        self.feasible.validate()?;
        for op in [&self.forward, &self.contraction, &self.strong] {
            if op.dim() != d {
                return Err(dim_error(d, op.dim()));
            }
        }
        for t in [&self.t1, &self.t2, &self.t3] {
            if t.dim() != d {
                return Err(dim_error(d, t.dim()));
            }
        }
        match &self.backward {
            MaxMonotone::NormalCone(c) => {
                c.validate()?;
                if let Some(k) = c.dim() {
                    if k != d {
                        return Err(dim_error(d, k));
                    }
                }
            }
            MaxMonotone::SeparableSubdifferential(terms) if terms.len() != d => {
                return Err(dim_error(d, terms.len()));
            }
            _ => {}
        }
        self.params.check()?;
        if let Some(s) = &self.known_solution {
            if s.dim() != d {
                return Err(dim_error(d, s.dim()));
            }
        }
        for (i, q) in self.known_common_points.iter().enumerate() {
            if q.dim() != d {
                return Err(dim_error(d, q.dim()));
            }
            self.certify(q, i)?;
            if self.strict_fixed_points {
                for t in [&self.t1, &self.t2, &self.t3] {
                    match t.image(q)? {
                        SetImage::Singleton(p) if p.distance(q) <= 1e-12 => {}
                        other => {
                            return Err(Error::InvalidInstance(format!(
                                "{}: image of common point {i} is {other:?}, not {{q}}",
                                t.name()
                            )))
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The iteration to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Three maps, `μ_n`-averaged viscosity update.
    Main,
    /// Two maps, viscosity step applied to `π_n`.
    TwoMap,
    /// Three maps, viscosity step applied to the last average.
    ThreeMap,
    /// `ψ⁺ = J_λ(ψ − λΛψ)`.
    ForwardBackward,
}

impl Algorithm {
    /// All algorithms, in a fixed order.
    pub const ALL: [Algorithm; 4] = [Algorithm::Main, Algorithm::TwoMap, Algorithm::ThreeMap, Algorithm::ForwardBackward];

    /// Identifier used in configs and file names.
    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Main => "main",
            Algorithm::TwoMap => "two_map",
            Algorithm::ThreeMap => "three_map",
            Algorithm::ForwardBackward => "forward_backward",
        }
    }

    /// Inverse of [`Algorithm::id`].
    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.id() == id)
    }
}

/// Which averaged point the two-map baseline feeds into its last line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TwoMapLastLine {
    /// `π_n`, as the baseline is usually stated.
    #[default]
    Pi,
    /// `φ_n`, the point the baseline actually computes last.
    Phi,
}

/// Intermediate points of one update.
#[derive(Debug, Clone, PartialEq)]
pub struct Stages {
    /// The iterate the update started from.
    pub prev_psi: Point,
    /// Sequence values used.
    pub params: StepParams,
    /// `δ_n`.
    pub delta: Point,
    /// `v_n ∈ T1 δ_n` and `π_n`.
    pub v: Option<Point>,
    /// `π_n`.
    pub pi: Option<Point>,
    /// `u_n ∈ T2 π_n`.
    pub u: Option<Point>,
    /// `φ_n`.
    pub phi: Option<Point>,
    /// `z_n ∈ T3 φ_n`.
    pub z: Option<Point>,
    /// `ξ_n` (or `t_n` for the `ThreeMap` baseline).
    pub xi: Option<Point>,
}

impl Stages {
    /// The chain `ξ, φ, π, δ, ψ_prev` restricted to the stages computed.
    pub fn chain(&self) -> Vec<&Point> {
        let mut out: Vec<&Point> = [&self.xi, &self.phi, &self.pi].into_iter().flatten().collect();
        out.push(&self.delta);
        out.push(&self.prev_psi);
        out
    }
}

/// Residuals after one update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// `d(δ, T1 δ)`.
    pub t1: f64,
    /// `d(π, T2 π)` (at `δ` when `π` was not computed).
    pub t2: f64,
    /// `d(φ, T3 φ)` (at the last computed stage when `φ` was not).
    pub t3: f64,
    /// `‖ψ − J_λ(ψ − λΛψ)‖` at the new iterate.
    pub fb: f64,
    /// `‖ψ_n − ψ_{n−1}‖`.
    pub displacement: f64,
    /// `‖ψ_n − ψ*‖` when `ψ*` is known.
    pub dist_to_solution: Option<f64>,
}

impl Residuals {
    /// Largest of the three set residuals.
    pub fn max_set(&self) -> f64 {
        self.t1.max(self.t2).max(self.t3)
    }
}

/// State after `n` updates.
#[derive(Debug, Clone, PartialEq)]
pub struct IterState {
    /// Number of updates performed.
    pub n: usize,
    /// `ψ_n`.
    pub psi: Point,
    /// Intermediate points of the update that produced `ψ_n`; `None` at `n = 0`.
    pub stages: Option<Stages>,
    /// Residuals of that update; `None` at `n = 0`.
    pub residuals: Option<Residuals>,
}

impl IterState {
    /// The state before any update.
    pub fn initial(psi: Point) -> Self {
        IterState {
            n: 0,
            psi,
            stages: None,
            residuals: None,
        }
    }
}

struct Picked {
    point: Point,
}

fn pick(map: &MultiMap, rule: SelectionRule, x: &Point) -> Result<Picked> {
    Ok(Picked {
        point: select(map, rule, x)?,
    })
}

/// `αγφ(ψ) + (w − ηαΦw)`: the viscosity line shared by the baselines.
fn viscosity_line(problem: &ProblemInstance, p: &StepParams, psi: &Point, w: &Point) -> Result<Point> {
    let vp = &problem.params;
    let visc = problem.contraction.apply(psi)?;
    let damped = w.add_scaled(-vp.eta * p.alpha, &problem.strong.apply(w)?);
    Ok(damped.add_scaled(p.alpha * vp.gamma, &visc))
}

fn advance(
    algorithm: Algorithm,
    problem: &ProblemInstance,
    schedule: &Schedule,
    state: &IterState,
    last_line: TwoMapLastLine,
) -> Result<IterState> {
    let n = state.n + 1;
    let p = schedule.at(n)?;
    let rule = problem.selection;
    let psi = &state.psi;
    if psi.dim() != problem.dim {
        return Err(dim_error(problem.dim, psi.dim()));
    }

    let delta = forward_backward_step(&problem.backward, &problem.forward, p.lambda, psi)?;
    let mut stages = Stages {
        prev_psi: psi.clone(),
        params: p,
        delta,
        v: None,
        pi: None,
        u: None,
        phi: None,
        z: None,
        xi: None,
    };

    let next = if algorithm == Algorithm::ForwardBackward {
        stages.delta.clone()
    } else {
        let v = pick(&problem.t1, rule, &stages.delta)?;
        let pi = stages.delta.combine(p.theta, &v.point, 1.0 - p.theta);
        let u = pick(&problem.t2, rule, &pi)?;
        let phi = pi.combine(p.beta, &u.point, 1.0 - p.beta);
        stages.v = Some(v.point);
        stages.u = Some(u.point);

        let pre = match algorithm {
            Algorithm::TwoMap => {
                let w = match last_line {
                    TwoMapLastLine::Pi => &pi,
                    TwoMapLastLine::Phi => &phi,
                };
                viscosity_line(problem, &p, psi, w)?
            }
            Algorithm::Main | Algorithm::ThreeMap => {
                let z = pick(&problem.t3, rule, &phi)?;
                let xi = phi.combine(p.gamma, &z.point, 1.0 - p.gamma);
                let pre = if algorithm == Algorithm::Main {
                    let vp = &problem.params;
                    let damped = psi.add_scaled(-vp.eta * p.alpha, &problem.strong.apply(psi)?);
                    let visc = problem.contraction.apply(psi)?;
                    xi.combine(p.mu, &damped, 1.0 - p.mu)
                        .add_scaled(p.alpha * vp.gamma, &visc)
                } else {
                    viscosity_line(problem, &p, psi, &xi)?
                };
                stages.z = Some(z.point);
                stages.xi = Some(xi);
                pre
            }
            Algorithm::ForwardBackward => unreachable!(),
        };
        stages.pi = Some(pi);
        stages.phi = Some(phi);
        pre
    };

    let next = if next.is_finite() {
        project(&problem.feasible, &next)?
    } else {
        next
    };
    let residuals = if next.is_finite() {
        Some(residuals_for(problem, &stages, &next)?)
    } else {
        None
    };
    Ok(IterState {
        n,
        psi: next,
        stages: Some(stages),
        residuals,
    })
}

fn residuals_for(problem: &ProblemInstance, stages: &Stages, psi: &Point) -> Result<Residuals> {
    let at_pi = stages.pi.as_ref().unwrap_or(&stages.delta);
    let at_phi = stages.phi.as_ref().unwrap_or(at_pi);
    Ok(Residuals {
        t1: problem.t1.residual(&stages.delta)?,
        t2: problem.t2.residual(at_pi)?,
        t3: problem.t3.residual(at_phi)?,
        fb: fixed_point_residual(&problem.backward, &problem.forward, stages.params.lambda, psi)?,
        displacement: psi.distance(&stages.prev_psi),
        dist_to_solution: problem.known_solution.as_ref().map(|s| psi.distance(s)),
    })
}

fn checked(state: IterState) -> Result<IterState> {
    if state.psi.is_finite() {
        Ok(state)
    } else {
        Err(Error::NonFiniteIterate(state.n))
    }
}

/// One update of the main three-map iteration.
pub fn step_main(problem: &ProblemInstance, schedule: &Schedule, state: &IterState) -> Result<IterState> {
    checked(advance(Algorithm::Main, problem, schedule, state, TwoMapLastLine::Pi)?)
}

/// One update of the two-map baseline; `line` picks `π_n` or `φ_n` for the
/// viscosity step.
pub fn step_two_map(
    problem: &ProblemInstance,
    schedule: &Schedule,
    state: &IterState,
    line: TwoMapLastLine,
) -> Result<IterState> {
    checked(advance(Algorithm::TwoMap, problem, schedule, state, line)?)
}

/// One update of the three-map baseline whose viscosity step acts on `t_n`.
pub fn step_three_map(problem: &ProblemInstance, schedule: &Schedule, state: &IterState) -> Result<IterState> {
    checked(advance(Algorithm::ThreeMap, problem, schedule, state, TwoMapLastLine::Pi)?)
}

/// One plain forward-backward update.
pub fn step_forward_backward(problem: &ProblemInstance, schedule: &Schedule, state: &IterState) -> Result<IterState> {
    checked(advance(Algorithm::ForwardBackward, problem, schedule, state, TwoMapLastLine::Pi)?)
}

/// Audits `‖ξ−q‖ ≤ ‖φ−q‖ ≤ ‖π−q‖ ≤ ‖δ−q‖ ≤ ‖ψ−q‖` for one update, over the
/// stages the algorithm computed. `ψ` here is the iterate the update started
/// from. Witness indices are `(n, link)`, link 0 being the innermost pair.
pub fn audit_fejer_chain(state: &IterState, q: &Point) -> AuditRecord {
    let mut rec = AuditRecord::new("fejer_chain", AUDIT_TOL);
    if let Some(stages) = &state.stages {
        let dists: Vec<f64> = stages.chain().iter().map(|p| p.distance(q)).collect();
        for (link, w) in dists.windows(2).enumerate() {
            rec.observe((state.n, link), w[0], w[1]);
        }
    }
    rec
}

/// Audits `‖δ_n − q‖ ≤ ‖ψ_n − q‖` for one update.
pub fn audit_forward_backward_link(state: &IterState, q: &Point) -> AuditRecord {
    let mut rec = AuditRecord::new("delta_link", AUDIT_TOL);
    if let Some(stages) = &state.stages {
        rec.observe((state.n, 0), stages.delta.distance(q), stages.prev_psi.distance(q));
    }
    rec
}

/// `max{‖ψ_0 − q‖, ‖γφ(q) − ηΦq‖/(τ − bγ − τμ̄)}`, the a-priori bound on
/// `‖ψ_n − q‖`. Fails when the denominator is not positive.
pub fn boundedness_bound(problem: &ProblemInstance, psi0: &Point, q: &Point, mu_bar: f64) -> Result<f64> {
    let vp = &problem.params;
    let denom = vp.tau() - vp.b * vp.gamma - vp.tau() * mu_bar;
    if !(denom > 0.0) {
        return Err(Error::Infeasible {
            condition: "τ − bγ − τμ̄ > 0",
            detail: format!("τ − bγ − τμ̄ = {denom}"),
        });
    }
    let drift = (vp.gamma * &problem.contraction.apply(q)?).add_scaled(-vp.eta, &problem.strong.apply(q)?);
    Ok(psi0.distance(q).max(drift.norm() / denom))
}

/// Audits every recorded iterate against [`boundedness_bound`]; the first
/// trajectory entry is taken as `ψ_0`.
pub fn audit_bounded(
    trajectory: &[IterSummary],
    q: &Point,
    problem: &ProblemInstance,
    mu_bar: f64,
) -> Result<AuditRecord> {
    let mut rec = AuditRecord::new("bounded", BOUND_TOL);
    let Some(first) = trajectory.first() else {
        return Ok(rec);
    };
    let bound = boundedness_bound(problem, &first.psi, q, mu_bar)?;
    for s in trajectory {
        rec.observe((s.n, 0), s.psi.distance(q), bound);
    }
    Ok(rec)
}

/// `max_q ⟨ηΦψ − γφ(ψ), ψ − q⟩` over certified probes `q ∈ Ω`. The solution of
/// the variational inequality makes this `≤ 0`.
pub fn vi_residual(problem: &ProblemInstance, psi: &Point, probes: &[Point]) -> Result<f64> {
    if probes.is_empty() {
        return Err(Error::InvalidInstance(String::from("vi_residual needs at least one probe")));
    }
    let vp = &problem.params;
    let field = (vp.eta * &problem.strong.apply(psi)?).add_scaled(-vp.gamma, &problem.contraction.apply(psi)?);
    let mut worst = f64::NEG_INFINITY;
    for (i, q) in probes.iter().enumerate() {
        problem.certify(q, i)?;
        worst = worst.max(field.dot(&(psi - q)));
    }
    Ok(worst)
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Displacement and every set residual fell below `tol`.
    Tolerance,
    /// The iteration budget ran out.
    MaxIter,
    /// `‖ψ_n‖` exceeded the guard or became non-finite.
    DivergenceGuard,
}

impl Termination {
    /// Identifier used in output files.
    pub fn id(self) -> &'static str {
        match self {
            Termination::Tolerance => "tolerance",
            Termination::MaxIter => "max_iter",
            Termination::DivergenceGuard => "divergence_guard",
        }
    }
}

/// Stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    /// Threshold on displacement and set residuals.
    pub tol: f64,
    /// Update budget.
    pub max_iter: usize,
}

/// Which iterates are kept in the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HistoryStride {
    /// Keep every iterate with `n ≤ dense_until`.
    pub dense_until: usize,
    /// Afterwards keep every `every`-th iterate.
    pub every: usize,
}

impl Default for HistoryStride {
    fn default() -> Self {
        HistoryStride {
            dense_until: 10_000,
            every: 100,
        }
    }
}

impl HistoryStride {
    fn keeps(&self, n: usize) -> bool {
        n <= self.dense_until || n.is_multiple_of(self.every.max(1))
    }
}

/// Knobs of [`run`] beyond the stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Recording stride.
    pub history: HistoryStride,
    /// Last line of the two-map baseline.
    pub last_line: TwoMapLastLine,
    /// Guard on `‖ψ_n‖`.
    pub divergence_norm: f64,
    /// Run even if the schedule fails validation.
    pub allow_invalid_schedule: bool,
    /// Horizon used for schedule validation.
    pub validation_horizon: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            history: HistoryStride::default(),
            last_line: TwoMapLastLine::Pi,
            divergence_norm: DIVERGENCE_NORM,
            allow_invalid_schedule: false,
            validation_horizon: 1000,
        }
    }
}

/// Recorded summary of one iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct IterSummary {
    /// Update count.
    pub n: usize,
    /// `ψ_n`.
    pub psi: Point,
    /// `‖ψ_n‖`.
    pub psi_norm: f64,
    /// `‖ψ_{n−1}‖`, absent at `n = 0`.
    pub prev_psi_norm: Option<f64>,
    /// `‖ψ_n − ψ*‖` when `ψ*` is known.
    pub dist_to_solution: Option<f64>,
    /// Residuals of the update, absent at `n = 0`.
    pub residuals: Option<Residuals>,
    /// Forward-backward residual at `ψ_n`.
    pub fb_residual: f64,
    /// Whether the Fejér chain held toward every common point; absent at
    /// `n = 0` or without common points.
    pub fejer_ok: Option<bool>,
    /// `α_n`, absent at `n = 0`.
    pub alpha: Option<f64>,
    /// `μ_n`, absent at `n = 0`.
    pub mu: Option<f64>,
}

/// Aggregated audit counts over a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunAudit {
    /// Fejér chain over every update and common point.
    pub fejer: AuditRecord,
    /// `‖δ_n − q‖ ≤ ‖ψ_n − q‖` over every update and common point.
    pub delta_link: AuditRecord,
    /// Boundedness estimate over every iterate and common point.
    pub bounded: AuditRecord,
}

impl RunAudit {
    /// Total violations across the three audits.
    pub fn violations(&self) -> usize {
        self.fejer.violations + self.delta_link.violations + self.bounded.violations
    }
}

/// Full outcome of [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    /// Algorithm run.
    pub algorithm: Algorithm,
    /// Recorded iterates; never empty, always ends with the final one.
    pub trajectory: Vec<IterSummary>,
    /// Why the run stopped.
    pub terminated_by: Termination,
    /// Updates performed.
    pub iterations: usize,
    /// Final iterate.
    pub final_psi: Point,
    /// Audit counts.
    pub audit: RunAudit,
    /// `vi_residual` at the final iterate over the declared common points.
    pub vi_residual: Option<f64>,
    /// `sup μ_n` used by the boundedness audit.
    pub mu_bar: f64,
}

fn summarize(problem: &ProblemInstance, state: &IterState, fejer_ok: Option<bool>, lambda: f64) -> Result<IterSummary> {
    let psi = &state.psi;
    let fb_residual = match &state.residuals {
        Some(r) => r.fb,
        None if psi.is_finite() => fixed_point_residual(&problem.backward, &problem.forward, lambda, psi)?,
        None => f64::NAN,
    };
    Ok(IterSummary {
        n: state.n,
        psi: psi.clone(),
        psi_norm: psi.norm(),
        prev_psi_norm: state.stages.as_ref().map(|s| s.prev_psi.norm()),
        dist_to_solution: problem.known_solution.as_ref().map(|s| psi.distance(s)),
        residuals: state.residuals,
        fb_residual,
        fejer_ok,
        alpha: state.stages.as_ref().map(|s| s.params.alpha),
        mu: state.stages.as_ref().map(|s| s.params.mu),
    })
}

/// Runs `algorithm` from `psi0` (projected onto `K` first) until the
/// stopping rule, the budget or the divergence guard fires, auditing the
/// Fejér chain and the boundedness estimate against every declared common
/// point at every update.
pub fn run(
    algorithm: Algorithm,
    problem: &ProblemInstance,
    schedule: &Schedule,
    psi0: &Point,
    stop: StopRule,
    options: &RunOptions,
) -> Result<RunReport> {
    if !(stop.tol > 0.0) {
        return Err(Error::OutOfRange {
            name: "tol",
            value: stop.tol,
            range: "(0, ∞)",
        });
    }
    problem.validate()?;
    if psi0.dim() != problem.dim {
        return Err(dim_error(problem.dim, psi0.dim()));
    }
    let report = validate(schedule, &problem.params, options.validation_horizon);
    let mu_bar = report.mu_bar;
    if !options.allow_invalid_schedule {
        report.into_result()?;
    }

    let start = project(&problem.feasible, psi0)?;
    let anchors = &problem.known_common_points;
    let bounds: Vec<Option<f64>> = anchors
        .iter()
        .map(|q| boundedness_bound(problem, &start, q, mu_bar).ok())
        .collect();

    let mut audit = RunAudit {
        fejer: AuditRecord::new("fejer_chain", AUDIT_TOL),
        delta_link: AuditRecord::new("delta_link", AUDIT_TOL),
        bounded: AuditRecord::new("bounded", BOUND_TOL),
    };
    audit.bounded.out_of_range = bounds.iter().any(Option::is_none);

    let first_lambda = schedule.at(1).map(|p| p.lambda).unwrap_or_else(|_| problem.certify_lambda());
    let mut state = IterState::initial(start);
    let mut trajectory = vec![summarize(problem, &state, None, first_lambda)?];
    for (q, bound) in anchors.iter().zip(&bounds) {
        if let Some(b) = bound {
            audit.bounded.observe((0, 0), state.psi.distance(q), *b);
        }
    }

    let mut terminated_by = Termination::MaxIter;
    while state.n < stop.max_iter {
        state = advance(algorithm, problem, schedule, &state, options.last_line)?;
        let diverged = !state.psi.is_finite() || state.psi.norm() > options.divergence_norm;

        let mut fejer_ok = None;
        if !diverged {
            for (j, (q, bound)) in anchors.iter().zip(&bounds).enumerate() {
                let chain = audit_fejer_chain(&state, q);
                fejer_ok = Some(fejer_ok.unwrap_or(true) && chain.passed());
                audit.fejer.merge(&chain);
                audit.delta_link.merge(&audit_forward_backward_link(&state, q));
                if let Some(b) = bound {
                    audit.bounded.observe((state.n, j), state.psi.distance(q), *b);
                }
            }
        }

        let converged = state
            .residuals
            .is_some_and(|r| r.displacement <= stop.tol && r.max_set() <= stop.tol);
        let last = diverged || converged || state.n >= stop.max_iter;
        if last || options.history.keeps(state.n) {
            trajectory.push(summarize(problem, &state, fejer_ok, first_lambda)?);
        }
        if diverged {
            terminated_by = Termination::DivergenceGuard;
            break;
        }
        if converged {
            terminated_by = Termination::Tolerance;
            break;
        }
    }

    let vi = if anchors.is_empty() || terminated_by == Termination::DivergenceGuard {
        None
    } else {
        Some(vi_residual(problem, &state.psi, anchors)?)
    };
    Ok(RunReport {
        algorithm,
        iterations: state.n,
        final_psi: state.psi,
        trajectory,
        terminated_by,
        audit,
        vi_residual: vi,
        mu_bar,
    })
}
