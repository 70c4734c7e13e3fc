//! Single-valued operators with declared moduli, maximal monotone operators
//! with closed-form resolvents, and the forward-backward map
//! `x ↦ J_λ(x − λΛx)`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::audit::AuditRecord;
use crate::error::{Error, Result};
use crate::hilbert::{project, ConvexSet, Point};
use crate::AUDIT_TOL;

/// Constants the constructor of an operator claims for it. Absent means "not
/// claimed"; every present value can be certified with the `check_*`
/// functions below.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moduli {
    /// `L` with `‖Ax − Ay‖ ≤ L‖x − y‖`.
    pub lipschitz: Option<f64>,
    /// `k` with `⟨Ax − Ay, x − y⟩ ≥ k‖x − y‖²`.
    pub strong_monotonicity: Option<f64>,
    /// `α` with `⟨Ax − Ay, x − y⟩ ≥ α‖Ax − Ay‖²`.
    pub inverse_strong_monotonicity: Option<f64>,
    /// `γ̄` with `⟨Ax, x⟩ ≥ γ̄‖x‖²`. Not consumed by any algorithm.
    pub strong_positivity: Option<f64>,
}

/// Operator function of a [`SingleOp`].
pub type OpFn = Arc<dyn Fn(&Point) -> Point + Send + Sync>;

/// A single-valued operator `R^d → R^d`.
#[derive(Clone)]
pub struct SingleOp {
    name: String,
    dim: usize,
    apply: OpFn,
    moduli: Moduli,
}

impl fmt::Debug for SingleOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SingleOp")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("moduli", &self.moduli)
            .finish_non_exhaustive()
    }
}

impl SingleOp {
    /// Wraps a pure function with its declared moduli.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        moduli: Moduli,
        apply: impl Fn(&Point) -> Point + Send + Sync + 'static,
    ) -> Self {
        SingleOp {
            name: name.into(),
            dim,
            apply: Arc::new(apply),
            moduli,
        }
    }

    /// `x ↦ 0`. Declared Lipschitz with constant `lipschitz_bound`, which
    /// any nonnegative value satisfies.
    pub fn zero(dim: usize, lipschitz_bound: f64) -> Self {
        let moduli = Moduli {
            lipschitz: Some(lipschitz_bound),
            ..Moduli::default()
        };
        SingleOp::new("zero", dim, moduli, move |_| Point::zeros(dim))
    }

    /// `x ↦ c·x`.
    pub fn scaled_identity(dim: usize, c: f64) -> Self {
        let positive = c > 0.0;
        let moduli = Moduli {
            lipschitz: Some(libm::fabs(c)),
            strong_monotonicity: positive.then_some(c),
            inverse_strong_monotonicity: positive.then(|| 1.0 / c),
            strong_positivity: positive.then_some(c),
        };
        SingleOp::new(format!("{c}*identity"), dim, moduli, move |x| c * x)
    }

    /// `x ↦ x`.
    pub fn identity(dim: usize) -> Self {
        let mut op = Self::scaled_identity(dim, 1.0);
        op.name = String::from("identity");
        op
    }

    /// `x ↦ x − a`: the gradient of `½‖x − a‖²`, 1-inverse strongly monotone.
    pub fn shifted_identity(a: Point) -> Self {
        let moduli = Moduli {
            lipschitz: Some(1.0),
            strong_monotonicity: Some(1.0),
            inverse_strong_monotonicity: Some(1.0),
            strong_positivity: None,
        };
        SingleOp::new("identity - a", a.dim(), moduli, move |x| x - &a)
    }

    /// `x ↦ c·x + v`, Lipschitz with constant `|c|`.
    pub fn affine(c: f64, v: Point) -> Self {
        let moduli = Moduli {
            lipschitz: Some(libm::fabs(c)),
            ..Moduli::default()
        };
        SingleOp::new(format!("{c}*x + v"), v.dim(), moduli, move |x| x.combine(c, &v, 1.0))
    }

    /// `x ↦ Mx` for a row-major square matrix. Moduli are the caller's
    /// declaration.
    pub fn linear(rows: Vec<Vec<f64>>, moduli: Moduli) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::EmptyPoint);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Ok(SingleOp::new("linear", dim, moduli, move |x| {
            Point::raw(
                rows.iter()
                    .map(|r| r.iter().zip(x.coords()).map(|(a, b)| a * b).sum())
                    .collect(),
            )
        }))
    }

    /// Display name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Declared moduli.
    pub fn moduli(&self) -> Moduli {
        self.moduli
    }

    /// Replaces the declared moduli.
    pub fn with_moduli(mut self, moduli: Moduli) -> Self {
        self.moduli = moduli;
        self
    }

    /// `A(x)`.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        let y = (self.apply)(x);
        if y.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: y.dim(),
            });
        }
        Ok(y)
    }
}

/// Per-coordinate convex term of a separable function whose subdifferential
/// has a closed-form resolvent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoordinateTerm {
    /// `w·|t|`, `w ≥ 0`; resolvent is soft thresholding by `λw`.
    Abs {
        /// Weight.
        weight: f64,
    },
    /// `(c/2)·t²`, `c ≥ 0`, subdifferential `c·t`; resolvent is `t/(1+λc)`.
    Linear {
        /// Slope of the subdifferential.
        coef: f64,
    },
}

/// A maximal monotone operator from the catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum MaxMonotone {
    /// Normal cone of a closed convex set; resolvent is the projection.
    NormalCone(ConvexSet),
    /// Subdifferential of `Σ_i f_i(x_i)`, one term per coordinate.
    SeparableSubdifferential(Vec<CoordinateTerm>),
    /// `Π ≡ 0`; resolvent is the identity.
    ZeroOperator,
}

impl MaxMonotone {
    /// `w·‖x‖₁` in dimension `dim`.
    pub fn weighted_abs(dim: usize, weight: f64) -> Self {
        MaxMonotone::SeparableSubdifferential(alloc::vec![CoordinateTerm::Abs { weight }; dim])
    }

    fn validate_for(&self, x: &Point) -> Result<()> {
        match self {
            MaxMonotone::NormalCone(set) => set.validate(),
            MaxMonotone::SeparableSubdifferential(terms) => {
                if terms.len() != x.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: terms.len(),
                        found: x.dim(),
                    });
                }
                for t in terms {
                    let (name, v) = match *t {
                        CoordinateTerm::Abs { weight } => ("abs weight", weight),
                        CoordinateTerm::Linear { coef } => ("linear coefficient", coef),
                    };
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(Error::OutOfRange {
                            name,
                            value: v,
                            range: "[0, ∞)",
                        });
                    }
                }
                Ok(())
            }
            MaxMonotone::ZeroOperator => Ok(()),
        }
    }
}

fn check_step(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            range: "(0, ∞)",
        })
    }
}

fn soft_threshold(x: f64, t: f64) -> f64 {
    libm::copysign((libm::fabs(x) - t).max(0.0), x)
}

/// `J_λ(x) = (I + λΠ)^{-1}(x)`: the unique `p` with `x ∈ p + λΠ(p)`.
pub fn resolvent(op: &MaxMonotone, lambda: f64, x: &Point) -> Result<Point> {
    check_step(lambda)?;
    op.validate_for(x)?;
    match op {
        MaxMonotone::NormalCone(set) => project(set, x),
        MaxMonotone::SeparableSubdifferential(terms) => Ok(Point::raw(
            x.coords()
                .iter()
                .zip(terms)
                .map(|(&v, term)| match *term {
                    CoordinateTerm::Abs { weight } => soft_threshold(v, lambda * weight),
                    CoordinateTerm::Linear { coef } => v / (1.0 + lambda * coef),
                })
                .collect(),
        )),
        MaxMonotone::ZeroOperator => Ok(x.clone()),
    }
}

/// `J_λ(x − λΛx)`.
pub fn forward_backward_step(pi: &MaxMonotone, lambda_op: &SingleOp, lambda: f64, x: &Point) -> Result<Point> {
    check_step(lambda)?;
    let forward = x.add_scaled(-lambda, &lambda_op.apply(x)?);
    resolvent(pi, lambda, &forward)
}

/// `‖x − J_λ(x − λΛx)‖`; zero exactly on the solution set of `0 ∈ Πx + Λx`.
pub fn fixed_point_residual(pi: &MaxMonotone, lambda_op: &SingleOp, lambda: f64, x: &Point) -> Result<f64> {
    Ok(x.distance(&forward_backward_step(pi, lambda_op, lambda, x)?))
}

/// Certifies `⟨Λψ − Λπ, ψ − π⟩ ≥ α‖Λψ − Λπ‖²` on each pair.
pub fn check_inverse_strongly_monotone(op: &SingleOp, alpha: f64, pairs: &[(Point, Point)]) -> Result<AuditRecord> {
    let mut rec = AuditRecord::new("inverse_strongly_monotone", AUDIT_TOL);
    rec.out_of_range = !(alpha > 0.0);
    for (i, (x, y)) in pairs.iter().enumerate() {
        let d_op = &op.apply(x)? - &op.apply(y)?;
        rec.observe((i, 0), alpha * d_op.norm_sq(), d_op.dot(&(x - y)));
    }
    Ok(rec)
}

/// Certifies `‖Ax − Ay‖ ≤ L‖x − y‖` on each pair.
pub fn check_lipschitz(op: &SingleOp, lipschitz: f64, pairs: &[(Point, Point)]) -> Result<AuditRecord> {
    let mut rec = AuditRecord::new("lipschitz", AUDIT_TOL);
    for (i, (x, y)) in pairs.iter().enumerate() {
        let d_op = &op.apply(x)? - &op.apply(y)?;
        rec.observe((i, 0), d_op.norm(), lipschitz * x.distance(y));
    }
    Ok(rec)
}

/// Certifies `⟨Ax − Ay, x − y⟩ ≥ k‖x − y‖²` on each pair.
pub fn check_strongly_monotone(op: &SingleOp, k: f64, pairs: &[(Point, Point)]) -> Result<AuditRecord> {
    let mut rec = AuditRecord::new("strongly_monotone", AUDIT_TOL);
    for (i, (x, y)) in pairs.iter().enumerate() {
        let diff = x - y;
        let d_op = &op.apply(x)? - &op.apply(y)?;
        rec.observe((i, 0), k * diff.norm_sq(), d_op.dot(&diff));
    }
    Ok(rec)
}

/// Certifies `‖(I−θΛ)ψ − (I−θΛ)π‖² ≤ ‖ψ−π‖² + θ(θ−2α)‖Λψ−Λπ‖²` on each
/// pair. Outside `θ ∈ [0, 2α]` the record is marked `out_of_range`.
pub fn check_forward_nonexpansive(
    op: &SingleOp,
    alpha: f64,
    theta: f64,
    pairs: &[(Point, Point)],
) -> Result<AuditRecord> {
    let mut rec = AuditRecord::new("forward_nonexpansive", AUDIT_TOL);
    rec.out_of_range = !(theta >= 0.0 && theta <= 2.0 * alpha);
    for (i, (x, y)) in pairs.iter().enumerate() {
        let (ax, ay) = (op.apply(x)?, op.apply(y)?);
        let fx = x.add_scaled(-theta, &ax);
        let fy = y.add_scaled(-theta, &ay);
        let lhs = fx.distance(&fy);
        let gap = x.distance(y);
        rec.observe((i, 0), lhs * lhs, gap * gap + theta * (theta - 2.0 * alpha) * (&ax - &ay).norm_sq());
    }
    Ok(rec)
}

/// Checks the preconditions of the `(I − tηΦ)` contraction estimate and
/// returns `(k, L)` from `phi`'s declared moduli.
pub fn damped_contraction_preconditions(phi: &SingleOp, eta: f64, tau: f64, t: f64) -> Result<(f64, f64)> {
    let m = phi.moduli();
    let (k, l) = match (m.strong_monotonicity, m.lipschitz) {
        (Some(k), Some(l)) if k > 0.0 && l > 0.0 => (k, l),
        _ => {
            return Err(Error::Infeasible {
                condition: "Φ k-strongly monotone and L-Lipschitz with k, L > 0",
                detail: format!("declared {m:?}"),
            })
        }
    };
    if !(eta > 0.0 && eta < 2.0 * k / (l * l)) {
        return Err(Error::Infeasible {
            condition: "0 < η < 2k/L²",
            detail: format!("η = {eta}, 2k/L² = {}", 2.0 * k / (l * l)),
        });
    }
    let expected = eta * (k - l * l * eta / 2.0);
    if libm::fabs(tau - expected) > 1e-12 * expected.max(1.0) {
        return Err(Error::Infeasible {
            condition: "τ = η(k − L²η/2)",
            detail: format!("τ = {tau}, η(k − L²η/2) = {expected}"),
        });
    }
    let t_max = (1.0 / tau).min(1.0);
    if !(t > 0.0 && t < t_max) {
        return Err(Error::Infeasible {
            condition: "t ∈ (0, min(1, 1/τ))",
            detail: format!("t = {t}, upper bound {t_max}"),
        });
    }
    Ok((k, l))
}

/// Certifies `‖(I − tηΦ)x − (I − tηΦ)y‖ ≤ (1 − tτ)‖x − y‖` on each pair.
pub fn check_damped_contraction(
    phi: &SingleOp,
    eta: f64,
    tau: f64,
    t: f64,
    pairs: &[(Point, Point)],
) -> Result<AuditRecord> {
    damped_contraction_preconditions(phi, eta, tau, t)?;
    let mut rec = AuditRecord::new("damped_contraction", AUDIT_TOL);
    for (i, (x, y)) in pairs.iter().enumerate() {
        let fx = x.add_scaled(-t * eta, &phi.apply(x)?);
        let fy = y.add_scaled(-t * eta, &phi.apply(y)?);
        rec.observe((i, 0), fx.distance(&fy), (1.0 - t * tau) * x.distance(y));
    }
    Ok(rec)
}

/// Certifies `‖Jx − Jy‖² ≤ ⟨Jx − Jy, x − y⟩` for `J = J_λ^Π` on each pair.
pub fn check_resolvent_firmly_nonexpansive(
    op: &MaxMonotone,
    lambda: f64,
    pairs: &[(Point, Point)],
) -> Result<AuditRecord> {
    let mut rec = AuditRecord::new("resolvent_firmly_nonexpansive", AUDIT_TOL);
    for (i, (x, y)) in pairs.iter().enumerate() {
        let dj = &resolvent(op, lambda, x)? - &resolvent(op, lambda, y)?;
        rec.observe((i, 0), dj.norm_sq(), dj.dot(&(x - y)));
    }
    Ok(rec)
}

/// Certifies that the forward-backward map is nonexpansive on each pair.
pub fn check_forward_backward_nonexpansive(
    pi: &MaxMonotone,
    lambda_op: &SingleOp,
    lambda: f64,
    pairs: &[(Point, Point)],
) -> Result<AuditRecord> {
    let mut rec = AuditRecord::new("forward_backward_nonexpansive", AUDIT_TOL);
    for (i, (x, y)) in pairs.iter().enumerate() {
        let fx = forward_backward_step(pi, lambda_op, lambda, x)?;
        let fy = forward_backward_step(pi, lambda_op, lambda, y)?;
        rec.observe((i, 0), fx.distance(&fy), x.distance(y));
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(c: &[f64]) -> Point {
        Point::from_slice(c).unwrap()
    }

    #[test]
    fn resolvent_examples() {
        assert_eq!(resolvent(&MaxMonotone::ZeroOperator, 0.5, &p(&[1.0, 2.0])).unwrap(), p(&[1.0, 2.0]));
        let cone = MaxMonotone::NormalCone(ConvexSet::cube(2, -1.0, 1.0).unwrap());
        assert_eq!(resolvent(&cone, 1.0, &p(&[2.0, 0.0])).unwrap(), p(&[1.0, 0.0]));
        let l1 = MaxMonotone::weighted_abs(2, 1.0);
        assert_eq!(resolvent(&l1, 0.5, &p(&[2.0, -0.3])).unwrap(), p(&[1.5, 0.0]));
    }

    #[test]
    fn linear_term_resolvent_shrinks() {
        let op = MaxMonotone::SeparableSubdifferential(vec![CoordinateTerm::Linear { coef: 3.0 }]);
        // p + λ·3p = 2 with λ = 1/3 gives p = 1
        assert_eq!(resolvent(&op, 1.0 / 3.0, &p(&[2.0])).unwrap(), p(&[1.0]));
    }

    #[test]
    fn resolvent_rejects_bad_input() {
        assert!(resolvent(&MaxMonotone::ZeroOperator, 0.0, &p(&[1.0])).is_err());
        assert!(resolvent(&MaxMonotone::weighted_abs(2, 1.0), 1.0, &p(&[1.0])).is_err());
        assert!(resolvent(&MaxMonotone::weighted_abs(1, -1.0), 1.0, &p(&[1.0])).is_err());
    }

    #[test]
    fn forward_backward_examples() {
        let zero = SingleOp::zero(2, 0.0);
        let x = p(&[0.3, -0.7]);
        assert_eq!(forward_backward_step(&MaxMonotone::ZeroOperator, &zero, 0.5, &x).unwrap(), x);

        let shift = SingleOp::shifted_identity(p(&[1.0, 1.0]));
        let origin = p(&[0.0, 0.0]);
        assert_eq!(
            forward_backward_step(&MaxMonotone::ZeroOperator, &shift, 1.0, &origin).unwrap(),
            p(&[1.0, 1.0])
        );

        let shift = SingleOp::shifted_identity(p(&[2.0, 0.0]));
        let ball = MaxMonotone::NormalCone(ConvexSet::ball(origin.clone(), 1.0).unwrap());
        assert_eq!(forward_backward_step(&ball, &shift, 1.0, &origin).unwrap(), p(&[1.0, 0.0]));
    }

    #[test]
    fn residual_examples() {
        // oracle: 0 ∈ x − a + N_C(x) is solved by x = P_C(a)
        let a = p(&[3.0, -0.25]);
        let c = ConvexSet::cube(2, -1.0, 1.0).unwrap();
        let solution = project(&c, &a).unwrap();
        let cone = MaxMonotone::NormalCone(c);
        let op = SingleOp::shifted_identity(a);
        assert_eq!(fixed_point_residual(&cone, &op, 0.7, &solution).unwrap(), 0.0);

        let zero = SingleOp::zero(2, 0.0);
        assert_eq!(
            fixed_point_residual(&MaxMonotone::ZeroOperator, &zero, 0.3, &p(&[5.0, 1.0])).unwrap(),
            0.0
        );

        let id = SingleOp::identity(2);
        assert_eq!(
            fixed_point_residual(&MaxMonotone::ZeroOperator, &id, 0.5, &p(&[2.0, 0.0])).unwrap(),
            1.0
        );
    }

    fn sample_pairs() -> Vec<(Point, Point)> {
        vec![
            (p(&[1.0, 0.0]), p(&[0.0, 0.0])),
            (p(&[2.0, -1.0]), p(&[-0.5, 3.0])),
            (p(&[0.1, 0.2]), p(&[0.3, -0.4])),
        ]
    }

    #[test]
    fn inverse_strong_monotonicity_examples() {
        let rec = check_inverse_strongly_monotone(&SingleOp::identity(2), 1.0, &sample_pairs()).unwrap();
        assert!(rec.passed());
        assert!(rec.worst_slack.abs() < 1e-12);
        let double = SingleOp::scaled_identity(2, 2.0);
        assert!(!check_inverse_strongly_monotone(&double, 1.0, &sample_pairs()).unwrap().passed());
    }

    #[test]
    fn quadratic_gradient_is_inverse_strongly_monotone() {
        // Q = [[2, 1], [1, 2]], eigenvalues 1 and 3
        let q = SingleOp::linear(vec![vec![2.0, 1.0], vec![1.0, 2.0]], Moduli::default()).unwrap();
        assert!(check_inverse_strongly_monotone(&q, 1.0 / 3.0, &sample_pairs()).unwrap().passed());
        // a pair along the top eigenvector (1,1) attains the bound
        let tight = [(p(&[1.0, 1.0]), p(&[0.0, 0.0]))];
        assert!(!check_inverse_strongly_monotone(&q, 0.34, &tight).unwrap().passed());
    }

    #[test]
    fn forward_nonexpansive_examples() {
        let id = SingleOp::identity(2);
        let rec = check_forward_nonexpansive(&id, 1.0, 0.0, &sample_pairs()).unwrap();
        assert!(rec.passed() && rec.worst_slack.abs() < 1e-12);
        let rec = check_forward_nonexpansive(&id, 1.0, 2.0, &sample_pairs()).unwrap();
        assert!(rec.passed() && rec.worst_slack.abs() < 1e-12);
        let rec = check_forward_nonexpansive(&id, 1.0, 1.0, &sample_pairs()[..1]).unwrap();
        assert_eq!(rec.worst_sides, Some((0.0, 0.0)));
        assert!(check_forward_nonexpansive(&id, 1.0, 2.5, &[]).unwrap().out_of_range);
    }

    #[test]
    fn damped_contraction_examples() {
        let pair = [(p(&[1.0, 0.0]), p(&[0.0, 0.0]))];
        let id = SingleOp::identity(2);
        let rec = check_damped_contraction(&id, 1.0, 0.5, 0.5, &pair).unwrap();
        assert_eq!(rec.worst_sides, Some((0.5, 0.75)));

        let rec = check_damped_contraction(&id, 1.0, 0.5, 1e-9, &sample_pairs()).unwrap();
        assert!(rec.passed());
        let (lhs, rhs) = rec.worst_sides.unwrap();
        assert!((lhs - rhs).abs() < 1e-8);

        let double = SingleOp::scaled_identity(2, 2.0);
        let rec = check_damped_contraction(&double, 0.5, 0.5, 0.5, &pair).unwrap();
        assert_eq!(rec.worst_sides, Some((0.5, 0.75)));
    }

    #[test]
    fn damped_contraction_rejects_bad_parameters() {
        let id = SingleOp::identity(1);
        assert!(matches!(
            check_damped_contraction(&id, 2.0, 0.0, 0.5, &[]),
            Err(Error::Infeasible { condition: "0 < η < 2k/L²", .. })
        ));
        assert!(matches!(
            check_damped_contraction(&id, 1.0, 0.4, 0.5, &[]),
            Err(Error::Infeasible { condition: "τ = η(k − L²η/2)", .. })
        ));
        assert!(matches!(
            check_damped_contraction(&id, 1.0, 0.5, 1.0, &[]),
            Err(Error::Infeasible { condition: "t ∈ (0, min(1, 1/τ))", .. })
        ));
        assert!(check_damped_contraction(&SingleOp::zero(1, 1.0), 1.0, 0.5, 0.5, &[]).is_err());
    }

    #[test]
    fn resolvents_are_firmly_nonexpansive() {
        let ops = [
            MaxMonotone::ZeroOperator,
            MaxMonotone::weighted_abs(2, 0.7),
            MaxMonotone::NormalCone(ConvexSet::ball(p(&[0.5, 0.5]), 0.3).unwrap()),
        ];
        for op in &ops {
            assert!(check_resolvent_firmly_nonexpansive(op, 0.8, &sample_pairs()).unwrap().passed());
        }
    }

    #[test]
    fn moduli_checks() {
        let op = SingleOp::scaled_identity(2, 3.0);
        let m = op.moduli();
        assert!(check_lipschitz(&op, m.lipschitz.unwrap(), &sample_pairs()).unwrap().passed());
        assert!(check_strongly_monotone(&op, m.strong_monotonicity.unwrap(), &sample_pairs()).unwrap().passed());
        assert!(!check_lipschitz(&op, 2.9, &sample_pairs()).unwrap().passed());
        let aff = SingleOp::affine(0.5, p(&[1.0, -1.0]));
        assert!(check_lipschitz(&aff, 0.5, &sample_pairs()).unwrap().passed());
    }
}
