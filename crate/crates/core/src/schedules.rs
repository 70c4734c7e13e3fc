//! Parameter sequences `α_n, β_n, γ_n, θ_n, μ_n, λ_n` and their validation.
//!
//! Sequences are indexed from `n = 1`: the `n`-th update of a solver maps
//! `ψ_{n−1}` to `ψ_n` using the values at index `n`.
//!
//! Built-in families carry closed-form limits, suprema and summability, so
//! the `liminf` conditions are certified exactly. Custom sequences are only
//! checked on the finite horizon and the report marks them empirical.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A real sequence `n ↦ a_n`, `n ≥ 1`.
#[derive(Clone)]
pub enum Sequence {
    /// `c`.
    Constant(f64),
    /// `scale / (n + shift)`.
    Harmonic {
        /// Numerator.
        scale: f64,
        /// Index shift.
        shift: f64,
    },
    /// `scale / (n + shift)^exponent`.
    Power {
        /// Numerator.
        scale: f64,
        /// Index shift.
        shift: f64,
        /// Decay exponent, positive.
        exponent: f64,
    },
    /// `1 − scale / (n + shift)`.
    OneMinusHarmonic {
        /// Numerator.
        scale: f64,
        /// Index shift.
        shift: f64,
    },
    /// Arbitrary pure function; validated on the horizon only.
    Custom(Arc<dyn Fn(usize) -> f64 + Send + Sync>),
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequence::Constant(c) => write!(f, "Constant({c})"),
            Sequence::Harmonic { scale, shift } => write!(f, "{scale}/(n+{shift})"),
            Sequence::Power { scale, shift, exponent } => write!(f, "{scale}/(n+{shift})^{exponent}"),
            Sequence::OneMinusHarmonic { scale, shift } => write!(f, "1-{scale}/(n+{shift})"),
            Sequence::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Sequence {
    /// `1/(n+1)`.
    pub fn harmonic() -> Self {
        Sequence::Harmonic { scale: 1.0, shift: 1.0 }
    }

    /// Value at index `n`.
    pub fn value(&self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            Sequence::Constant(c) => *c,
            Sequence::Harmonic { scale, shift } => scale / (n + shift),
            Sequence::Power { scale, shift, exponent } => scale / libm::pow(n + shift, *exponent),
            Sequence::OneMinusHarmonic { scale, shift } => 1.0 - scale / (n + shift),
            Sequence::Custom(f) => f(n as usize),
        }
    }

    /// Closed-form limit, for built-in families.
    pub fn limit(&self) -> Option<f64> {
        match self {
            Sequence::Constant(c) => Some(*c),
            Sequence::Harmonic { .. } => Some(0.0),
            Sequence::Power { exponent, scale, .. } => Some(if *exponent > 0.0 { 0.0 } else { *scale }),
            Sequence::OneMinusHarmonic { .. } => Some(1.0),
            Sequence::Custom(_) => None,
        }
    }

    /// `sup_{n ≥ 1} a_n` in closed form, for built-in families.
    ///
    /// Assumes the denominators stay positive over `n ≥ 1` (`shift > −1`).
    pub fn supremum(&self) -> Option<f64> {
        match self {
            Sequence::Constant(c) => Some(*c),
            Sequence::Harmonic { scale, .. } | Sequence::Power { scale, .. } => {
                // monotone in n: the sup is the first term or the limit
                Some(self.value(1).max(if *scale >= 0.0 { 0.0 } else { self.limit()? }))
            }
            Sequence::OneMinusHarmonic { scale, .. } => {
                Some(if *scale >= 0.0 { 1.0 } else { self.value(1) })
            }
            Sequence::Custom(_) => None,
        }
    }

    /// Whether `Σ a_n` diverges, for built-in families.
    pub fn sum_diverges(&self) -> Option<bool> {
        match self {
            Sequence::Constant(c) => Some(*c != 0.0),
            Sequence::Harmonic { scale, .. } => Some(*scale != 0.0),
            Sequence::Power { scale, exponent, .. } => Some(*scale != 0.0 && *exponent <= 1.0),
            Sequence::OneMinusHarmonic { .. } => Some(true),
            Sequence::Custom(_) => None,
        }
    }

    fn is_builtin(&self) -> bool {
        !matches!(self, Sequence::Custom(_))
    }
}

/// Summability requirement imposed on `α_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumCondition {
    /// `Σ α_n = ∞`, as the convergence argument requires.
    #[default]
    Divergent,
    /// `Σ α_n < ∞`, with `α_n = 1/(n+1)²`.
    Summable,
}

/// Values of every sequence at one index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    /// Viscosity weight `α_n`.
    pub alpha: f64,
    /// `β_n`, weight of `π_n` in the `T2` averaging step.
    pub beta: f64,
    /// `γ_n`, weight of `φ_n` in the `T3` averaging step.
    pub gamma: f64,
    /// `θ_n`, weight of `δ_n` in the `T1` averaging step.
    pub theta: f64,
    /// `μ_n`, weight of `ξ_n` in the final update.
    pub mu: f64,
    /// Forward-backward step size `λ_n`.
    pub lambda: f64,
}

/// The six parameter sequences plus the constants they are validated against.
#[derive(Debug, Clone)]
pub struct Schedule {
    /// `α_n`.
    pub alpha: Sequence,
    /// `β_n`.
    pub beta: Sequence,
    /// `γ_n`.
    pub gamma: Sequence,
    /// `θ_n`.
    pub theta: Sequence,
    /// `μ_n`.
    pub mu: Sequence,
    /// `λ_n`.
    pub lambda: Sequence,
    /// Demicontractivity constant `β` of `T1`, `T2`.
    pub beta_demi: f64,
    /// Inverse-strong-monotonicity constant `α` of `Λ`.
    pub alpha_ism: f64,
    /// `[a, b]` containing every `λ_n`.
    pub lambda_interval: (f64, f64),
    /// Summability requirement on `α_n`.
    pub sum_condition: SumCondition,
    /// Last usable index, if the schedule is finite.
    pub horizon: Option<usize>,
}

impl Schedule {
    /// Sequence values at index `n ≥ 1`.
    pub fn at(&self, n: usize) -> Result<StepParams> {
        if n == 0 || self.horizon.is_some_and(|h| n > h) {
            return Err(Error::ScheduleExhausted(n));
        }
        Ok(StepParams {
            alpha: self.alpha.value(n),
            beta: self.beta.value(n),
            gamma: self.gamma.value(n),
            theta: self.theta.value(n),
            mu: self.mu.value(n),
            lambda: self.lambda.value(n),
        })
    }

    /// Switches to summable step sizes: `α_n = 1/(n+1)²` and
    /// `Σ α_n < ∞`.
    pub fn summable_steps(mut self) -> Self {
        self.alpha = Sequence::Power {
            scale: 1.0,
            shift: 1.0,
            exponent: 2.0,
        };
        self.sum_condition = SumCondition::Summable;
        self
    }
}

/// Constants of the viscosity step: `γ`, `η`, and the moduli of `Φ` and `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscosityParams {
    /// Viscosity weight `γ > 0`.
    pub gamma: f64,
    /// Step `η > 0` applied to `Φ`.
    pub eta: f64,
    /// Strong-monotonicity constant `k` of `Φ`.
    pub k: f64,
    /// Lipschitz constant `L` of `Φ`.
    pub lipschitz: f64,
    /// Lipschitz constant `b` of `φ`.
    pub b: f64,
}

impl Default for ViscosityParams {
    /// `Φ = I` (`k = L = 1`), `η = 1`, `b = 1`, `γ = 1/4`, so `τ = 1/2`.
    fn default() -> Self {
        ViscosityParams {
            gamma: 0.25,
            eta: 1.0,
            k: 1.0,
            lipschitz: 1.0,
            b: 1.0,
        }
    }
}

/// Name of the step-size bound on `η`.
pub const COND_ETA: &str = "0 < η < 2k/L²";
/// Name of the viscosity feasibility condition.
pub const COND_GAMMA_B: &str = "0 < γb < τ";

impl ViscosityParams {
    /// `τ = η(k − L²η/2)`.
    pub fn tau(&self) -> f64 {
        self.eta * (self.k - self.lipschitz * self.lipschitz * self.eta / 2.0)
    }

    /// The two hypotheses on the constants, in order, with pass flags.
    pub fn conditions(&self) -> [(&'static str, bool, String); 2] {
        let eta_max = 2.0 * self.k / (self.lipschitz * self.lipschitz);
        let gb = self.gamma * self.b;
        let tau = self.tau();
        [
            (
                COND_ETA,
                self.k > 0.0 && self.lipschitz > 0.0 && self.eta > 0.0 && self.eta < eta_max,
                format!("η = {}, 2k/L² = {eta_max}", self.eta),
            ),
            (
                COND_GAMMA_B,
                self.gamma > 0.0 && gb > 0.0 && gb < tau,
                format!("γb = {gb}, τ = {tau}"),
            ),
        ]
    }

    /// Fails with the first violated hypothesis.
    pub fn check(&self) -> Result<()> {
        for (condition, ok, detail) in self.conditions() {
            if !ok {
                return Err(Error::Infeasible { condition, detail });
            }
        }
        Ok(())
    }

    /// Largest `μ̄` with `τ(1 − μ̄) − γb > 0`, exclusive.
    pub fn mu_limit(&self) -> f64 {
        1.0 - self.gamma * self.b / self.tau()
    }
}

/// How a condition was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    /// From closed-form properties of built-in families (plus the horizon
    /// for the per-index checks).
    ClosedForm,
    /// From the finite horizon only.
    Empirical,
}

/// Verdict on one named condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionResult {
    /// Condition text, e.g. `liminf (1−γ_n)γ_n > 0`.
    pub name: &'static str,
    /// Which hypothesis group it belongs to: `steps`, `demicontractive`, `averaging`, `μ`,
    /// `constants`.
    pub group: &'static str,
    /// Verdict.
    pub passed: bool,
    /// How the verdict was reached.
    pub certification: Certification,
    /// Values behind the verdict.
    pub detail: String,
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Every condition, in a fixed order.
    pub conditions: Vec<ConditionResult>,
    /// `sup μ_n` used for the `μ` condition and the boundedness audit.
    pub mu_bar: f64,
}

impl ValidationReport {
    /// All conditions hold.
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    /// Failing conditions.
    pub fn failures(&self) -> impl Iterator<Item = &ConditionResult> {
        self.conditions.iter().filter(|c| !c.passed)
    }

    /// Looks a condition up by name.
    pub fn condition(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }

    /// Converts a failing report into [`Error::Infeasible`] naming the first
    /// failed condition.
    pub fn into_result(self) -> Result<Self> {
        let failure = self.failures().next().map(|c| (c.name, c.detail.clone()));
        match failure {
            None => Ok(self),
            Some((condition, detail)) => Err(Error::Infeasible { condition, detail }),
        }
    }
}

/// Condition names, usable with [`ValidationReport::condition`].
pub mod conditions {
    /// `lim α_n = 0`.
    pub const ALPHA_LIMIT: &str = "lim α_n = 0";
    /// `Σ α_n = ∞`.
    pub const ALPHA_DIVERGENT: &str = "Σ α_n = ∞";
    /// `Σ α_n < ∞`.
    pub const ALPHA_SUMMABLE: &str = "Σ α_n < ∞";
    /// Step sizes in their interval.
    pub const LAMBDA_INTERVAL: &str = "λ_n ∈ [a,b] ⊂ (0, min{1,2α})";
    /// `β_n ∈ (β,1)`.
    pub const BETA_RANGE: &str = "β_n ∈ (β,1)";
    /// `θ_n ∈ (β,1)`.
    pub const THETA_RANGE: &str = "θ_n ∈ (β,1)";
    /// Demicontractive averaging bound for β.
    pub const BETA_DEMI_LIMINF: &str = "liminf (1−β_n)(β_n−β) > 0";
    /// Demicontractive averaging bound for θ.
    pub const THETA_DEMI_LIMINF: &str = "liminf (1−θ_n)(θ_n−β) > 0";
    /// Nondegenerate averaging of γ.
    pub const GAMMA_LIMINF: &str = "liminf (1−γ_n)γ_n > 0";
    /// Nondegenerate averaging of β.
    pub const BETA_LIMINF: &str = "liminf (1−β_n)β_n > 0";
    /// Nondegenerate averaging of θ.
    pub const THETA_LIMINF: &str = "liminf (1−θ_n)θ_n > 0";
    /// The μ constraint used by the boundedness estimate.
    pub const MU_BOUND: &str = "sup μ_n ≤ μ̄ with τ(1−μ̄) − γb > 0";
}

struct Checker<'a> {
    horizon: usize,
    out: &'a mut Vec<ConditionResult>,
}

impl Checker<'_> {
    fn push(&mut self, name: &'static str, group: &'static str, passed: bool, cert: Certification, detail: String) {
        self.out.push(ConditionResult {
            name,
            group,
            passed,
            certification: cert,
            detail,
        });
    }

    /// Every `a_n`, `n ≤ horizon`, in the open interval `(lo, hi)`.
    fn open_range(&mut self, name: &'static str, group: &'static str, seq: &Sequence, lo: f64, hi: f64) {
        let bad = (1..=self.horizon)
            .map(|n| (n, seq.value(n)))
            .find(|&(_, v)| !(v > lo && v < hi));
        let detail = match bad {
            Some((n, v)) => format!("value {v} at n = {n}"),
            None => format!("all of n ≤ {} inside ({lo}, {hi})", self.horizon),
        };
        self.push(name, group, bad.is_none(), Certification::ClosedForm, detail);
    }

    /// `liminf f(a_n) > 0` for continuous `f`.
    fn liminf(&mut self, name: &'static str, group: &'static str, seq: &Sequence, f: impl Fn(f64) -> f64) {
        match seq.limit() {
            Some(l) => {
                let v = f(l);
                self.push(
                    name,
                    group,
                    v > 0.0,
                    Certification::ClosedForm,
                    format!("limit value {v} at a_n → {l}"),
                );
            }
            None => {
                let from = (self.horizon / 2).max(1);
                let v = (from..=self.horizon)
                    .map(|n| f(seq.value(n)))
                    .fold(f64::INFINITY, f64::min);
                self.push(
                    name,
                    group,
                    v > 0.0,
                    Certification::Empirical,
                    format!("min over n ∈ [{from}, {}] is {v}", self.horizon),
                );
            }
        }
    }
}

/// Checks a schedule and the viscosity constants against every hypothesis of
/// the convergence result, over `n ≤ horizon` plus closed-form limits.
///
/// Never fails; the report carries the verdicts.
pub fn validate(schedule: &Schedule, params: &ViscosityParams, horizon: usize) -> ValidationReport {
    use conditions::*;
    use Certification::*;

    let horizon = horizon.max(1);
    let mut out = Vec::new();
    let mut c = Checker {
        horizon,
        out: &mut out,
    };

    for (name, ok, detail) in params.conditions() {
        c.push(name, "constants", ok, ClosedForm, detail);
    }

    c.open_range("α_n ∈ (0,1)", "steps", &schedule.alpha, 0.0, 1.0);
    c.open_range("γ_n ∈ (0,1)", "averaging", &schedule.gamma, 0.0, 1.0);
    c.open_range("μ_n ∈ (0,1)", "μ", &schedule.mu, 0.0, 1.0);

    // lim α_n = 0
    match schedule.alpha.limit() {
        Some(l) => c.push(ALPHA_LIMIT, "steps", l == 0.0, ClosedForm, format!("limit {l}")),
        None => {
            let (first, last) = (schedule.alpha.value(1), schedule.alpha.value(horizon));
            let mid = schedule.alpha.value((horizon / 2).max(1));
            let ok = last <= mid && last <= first / 10.0;
            c.push(ALPHA_LIMIT, "steps", ok, Empirical, format!("α_1 = {first}, α_h = {last}"));
        }
    }

    let (sum_name, want_divergent) = match schedule.sum_condition {
        SumCondition::Divergent => (ALPHA_DIVERGENT, true),
        SumCondition::Summable => (ALPHA_SUMMABLE, false),
    };
    match schedule.alpha.sum_diverges() {
        Some(div) => c.push(sum_name, "steps", div == want_divergent, ClosedForm, format!("series diverges: {div}")),
        None => {
            // n·α_n roughly flat for 1/n-like decay, shrinking for summable decay
            let h = horizon.max(2);
            let half = h / 2;
            let ratio = (h as f64 * schedule.alpha.value(h)) / (half as f64 * schedule.alpha.value(half));
            let div = ratio >= 0.9;
            c.push(
                sum_name,
                "steps",
                div == want_divergent,
                Empirical,
                format!("tail ratio of n·α_n is {ratio}"),
            );
        }
    }

    let (a, b) = schedule.lambda_interval;
    let upper = (2.0 * schedule.alpha_ism).min(1.0);
    let interval_ok = a > 0.0 && a <= b && b < upper;
    let mut lambda_vals: Vec<(usize, f64)> = (1..=horizon).map(|n| (n, schedule.lambda.value(n))).collect();
    if let Some(l) = schedule.lambda.limit() {
        lambda_vals.push((usize::MAX, l));
    }
    let bad_lambda = lambda_vals.iter().find(|(_, v)| !(*v >= a && *v <= b));
    let detail = match bad_lambda {
        Some((n, v)) if *n == usize::MAX => format!("limit {v} outside [{a}, {b}]"),
        Some((n, v)) => format!("λ_{n} = {v} outside [{a}, {b}]"),
        None if !interval_ok => format!("[{a}, {b}] not inside (0, {upper})"),
        None => format!("[{a}, {b}] ⊂ (0, {upper})"),
    };
    let cert = if schedule.lambda.is_builtin() { ClosedForm } else { Empirical };
    c.push(LAMBDA_INTERVAL, "steps", interval_ok && bad_lambda.is_none(), cert, detail);

    let beta_demi = schedule.beta_demi;
    c.open_range(BETA_RANGE, "demicontractive", &schedule.beta, beta_demi, 1.0);
    c.open_range(THETA_RANGE, "demicontractive", &schedule.theta, beta_demi, 1.0);
    c.liminf(BETA_DEMI_LIMINF, "demicontractive", &schedule.beta, |v| (1.0 - v) * (v - beta_demi));
    c.liminf(THETA_DEMI_LIMINF, "demicontractive", &schedule.theta, |v| (1.0 - v) * (v - beta_demi));
    c.liminf(GAMMA_LIMINF, "averaging", &schedule.gamma, |v| (1.0 - v) * v);
    c.liminf(BETA_LIMINF, "averaging", &schedule.beta, |v| (1.0 - v) * v);
    c.liminf(THETA_LIMINF, "averaging", &schedule.theta, |v| (1.0 - v) * v);

    let horizon_sup = (1..=horizon).map(|n| schedule.mu.value(n)).fold(f64::NEG_INFINITY, f64::max);
    let (mu_bar, cert) = match schedule.mu.supremum() {
        Some(s) => (s.max(horizon_sup), ClosedForm),
        None => (horizon_sup, Empirical),
    };
    let margin = params.tau() * (1.0 - mu_bar) - params.gamma * params.b;
    c.push(
        MU_BOUND,
        "μ",
        margin > 0.0,
        cert,
        format!("μ̄ = {mu_bar}, τ(1−μ̄) − γb = {margin}"),
    );

    ValidationReport { conditions: out, mu_bar }
}

/// The default family: `α_n = 1/(n+1)`, `β_n = θ_n = (1+β)/2`, `γ_n = 1/2`,
/// `μ_n = 0.8(1 − γb/τ)` and `λ_n = min{1, 2α}/2`.
///
/// Always passes [`validate`] when the constants are feasible.
pub fn default_schedule(params: &ViscosityParams, beta_demi: f64, alpha_ism: f64) -> Result<Schedule> {
    params.check()?;
    if !(0.0..1.0).contains(&beta_demi) {
        return Err(Error::OutOfRange {
            name: "beta_demi",
            value: beta_demi,
            range: "[0, 1)",
        });
    }
    if !(alpha_ism > 0.0 && alpha_ism.is_finite()) {
        return Err(Error::OutOfRange {
            name: "alpha_ism",
            value: alpha_ism,
            range: "(0, ∞)",
        });
    }
    let mix = (1.0 + beta_demi) / 2.0;
    let lambda = (2.0 * alpha_ism).min(1.0) / 2.0;
    Ok(Schedule {
        alpha: Sequence::harmonic(),
        beta: Sequence::Constant(mix),
        gamma: Sequence::Constant(0.5),
        theta: Sequence::Constant(mix),
        mu: Sequence::Constant(0.8 * params.mu_limit()),
        lambda: Sequence::Constant(lambda),
        beta_demi,
        alpha_ism,
        lambda_interval: (lambda, lambda),
        sum_condition: SumCondition::Divergent,
        horizon: None,
    })
}
