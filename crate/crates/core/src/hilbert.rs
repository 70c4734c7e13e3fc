//! `R^d` as a real Hilbert space: points, inner product, norm, and exact
//! projections onto a small family of closed convex sets.

use alloc::format;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::AUDIT_TOL;

/// A point of `R^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    /// Builds a point, rejecting empty or non-finite coordinate lists.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("point coordinates"));
        }
        Ok(Point(coords))
    }

    /// Builds a point from a slice; see [`Point::new`].
    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    /// One-dimensional point.
    pub fn scalar(value: f64) -> Result<Self> {
        Self::new(alloc::vec![value])
    }

    /// The origin of `R^dim`.
    ///
    /// # Panics
    ///
    /// If `dim == 0`.
    pub fn zeros(dim: usize) -> Self {
        Self::filled(dim, 0.0)
    }

    /// The point with every coordinate equal to `value`.
    ///
    /// # Panics
    ///
    /// If `dim == 0` or `value` is not finite.
    pub fn filled(dim: usize, value: f64) -> Self {
        assert!(dim > 0, "points must have at least one coordinate");
        assert!(value.is_finite(), "non-finite coordinate");
        Point(alloc::vec![value; dim])
    }

    /// Wraps coordinates produced by arithmetic; finiteness is the caller's
    /// concern (the solvers check it through their divergence guard).
    pub(crate) fn raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Point(coords)
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinates as a slice.
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Consumes the point, returning its coordinates.
    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    /// True when every coordinate is finite.
    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Dot product. Panics on dimension mismatch; use [`inner`] for a
    /// checked version.
    pub fn dot(&self, other: &Point) -> f64 {
        assert_same_dim(self, other);
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Squared Euclidean norm.
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sq())
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Point) -> f64 {
        assert_same_dim(self, other);
        libm::sqrt(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (a - b) * (a - b))
                .sum(),
        )
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Point, b: f64) -> Point {
        assert_same_dim(self, other);
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    /// `self + t·dir`.
    pub fn add_scaled(&self, t: f64, dir: &Point) -> Point {
        self.combine(1.0, dir, t)
    }

    /// Componentwise map.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Point {
        Point(self.0.iter().map(|&x| f(x)).collect())
    }
}

fn assert_same_dim(a: &Point, b: &Point) {
    assert_eq!(a.dim(), b.dim(), "point dimension mismatch");
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        self.combine(1.0, rhs, 1.0)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        self.combine(1.0, rhs, -1.0)
    }
}

impl Mul<&Point> for f64 {
    type Output = Point;
    fn mul(self, rhs: &Point) -> Point {
        rhs.map(|x| self * x)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        self.map(|x| -x)
    }
}

/// Checks that two points share a dimension.
pub fn check_dims(x: &Point, y: &Point) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(())
}

/// `⟨x, y⟩`.
pub fn inner(x: &Point, y: &Point) -> Result<f64> {
    check_dims(x, y)?;
    Ok(x.dot(y))
}

/// `‖x‖ = sqrt(⟨x, x⟩)`.
pub fn norm(x: &Point) -> f64 {
    x.norm()
}

/// A nonempty closed convex subset of `R^d` with a closed-form projection.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    /// All of `R^d`.
    WholeSpace,
    /// `{ y : lower ≤ y ≤ upper }` componentwise.
    Box {
        /// Lower corner.
        lower: Point,
        /// Upper corner.
        upper: Point,
    },
    /// Closed Euclidean ball.
    Ball {
        /// Center.
        center: Point,
        /// Radius, positive.
        radius: f64,
    },
    /// `{ y : ⟨normal, y⟩ ≤ offset }`.
    HalfSpace {
        /// Outward normal, nonzero.
        normal: Point,
        /// Right-hand side.
        offset: f64,
    },
    /// `anchor + span(basis)`; the basis must be orthonormal. An empty basis
    /// describes the single point `{anchor}`.
    AffineSet {
        /// A point of the set.
        anchor: Point,
        /// Orthonormal directions.
        basis: Vec<Point>,
    },
}

const ORTHONORMAL_TOL: f64 = 1e-10;

impl ConvexSet {
    /// Checked box constructor.
    pub fn boxed(lower: Point, upper: Point) -> Result<Self> {
        let set = ConvexSet::Box { lower, upper };
        set.validate()?;
        Ok(set)
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyPoint);
        }
        Self::boxed(Point::new(alloc::vec![lo; dim])?, Point::new(alloc::vec![hi; dim])?)
    }

    /// Checked ball constructor.
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        let set = ConvexSet::Ball { center, radius };
        set.validate()?;
        Ok(set)
    }

    /// Checked half-space constructor.
    pub fn half_space(normal: Point, offset: f64) -> Result<Self> {
        let set = ConvexSet::HalfSpace { normal, offset };
        set.validate()?;
        Ok(set)
    }

    /// Checked affine-set constructor.
    pub fn affine(anchor: Point, basis: Vec<Point>) -> Result<Self> {
        let set = ConvexSet::AffineSet { anchor, basis };
        set.validate()?;
        Ok(set)
    }

    /// Ambient dimension, or `None` for [`ConvexSet::WholeSpace`].
    pub fn dim(&self) -> Option<usize> {
        match self {
            ConvexSet::WholeSpace => None,
            ConvexSet::Box { lower, .. } => Some(lower.dim()),
            ConvexSet::Ball { center, .. } => Some(center.dim()),
            ConvexSet::HalfSpace { normal, .. } => Some(normal.dim()),
            ConvexSet::AffineSet { anchor, .. } => Some(anchor.dim()),
        }
    }

    /// Checks the descriptor's internal consistency.
    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexSet::WholeSpace => Ok(()),
            ConvexSet::Box { lower, upper } => {
                check_dims(lower, upper)?;
                if let Some(i) = (0..lower.dim()).find(|&i| lower.0[i] > upper.0[i]) {
                    return Err(Error::InvalidSet(format!(
                        "box lower[{i}] = {} exceeds upper[{i}] = {}",
                        lower.0[i], upper.0[i]
                    )));
                }
                Ok(())
            }
            ConvexSet::Ball { radius, .. } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidSet(format!("ball radius {radius} must be positive")));
                }
                Ok(())
            }
            ConvexSet::HalfSpace { normal, offset } => {
                if normal.norm_sq() == 0.0 {
                    return Err(Error::InvalidSet("half-space normal is zero".into()));
                }
                if !offset.is_finite() {
                    return Err(Error::NonFinite("half-space offset"));
                }
                Ok(())
            }
            ConvexSet::AffineSet { anchor, basis } => {
                for (i, e) in basis.iter().enumerate() {
                    check_dims(anchor, e)?;
                    for (j, f) in basis.iter().enumerate().skip(i) {
                        let expected = if i == j { 1.0 } else { 0.0 };
                        if libm::fabs(e.dot(f) - expected) > ORTHONORMAL_TOL {
                            return Err(Error::InvalidSet(format!(
                                "affine basis is not orthonormal at ({i}, {j})"
                            )));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        match self.dim() {
            Some(d) if d != x.dim() => Err(Error::DimensionMismatch {
                expected: d,
                found: x.dim(),
            }),
            _ => Ok(()),
        }
    }

    /// Membership test with absolute slack `tol`.
    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        self.check_point(x)?;
        let p = project(self, x)?;
        Ok(x.distance(&p) <= tol)
    }
}

/// Metric projection of `x` onto `set`.
///
/// The result is the unique nearest point of the set; it satisfies
/// `⟨x − p, y − p⟩ ≤ 0` for every `y` in the set.
pub fn project(set: &ConvexSet, x: &Point) -> Result<Point> {
    set.validate()?;
    set.check_point(x)?;
    let p = match set {
        ConvexSet::WholeSpace => x.clone(),
        ConvexSet::Box { lower, upper } => Point(
            x.0.iter()
                .zip(lower.0.iter().zip(&upper.0))
                .map(|(&v, (&lo, &hi))| v.clamp(lo, hi))
                .collect(),
        ),
        ConvexSet::Ball { center, radius } => {
            let offset = x - center;
            let dist = offset.norm();
            if dist <= *radius {
                x.clone()
            } else {
                center.add_scaled(radius / dist, &offset)
            }
        }
        ConvexSet::HalfSpace { normal, offset } => {
            let excess = normal.dot(x) - offset;
            if excess <= 0.0 {
                x.clone()
            } else {
                x.add_scaled(-excess / normal.norm_sq(), normal)
            }
        }
        ConvexSet::AffineSet { anchor, basis } => {
            let rel = x - anchor;
            basis
                .iter()
                .fold(anchor.clone(), |acc, e| acc.add_scaled(rel.dot(e), e))
        }
    };
    Ok(p)
}

/// Both sides of one inequality, and whether `lhs ≤ rhs + tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalitySides {
    /// Left-hand side.
    pub lhs: f64,
    /// Right-hand side.
    pub rhs: f64,
    /// `lhs ≤ rhs + tol`.
    pub holds: bool,
}

impl InequalitySides {
    pub(crate) fn new(lhs: f64, rhs: f64, tol: f64) -> Self {
        InequalitySides {
            lhs,
            rhs,
            holds: lhs <= rhs + tol,
        }
    }
}

/// Numerical audit of the two elementary Hilbert-space relations used by the
/// convergence argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityAudit {
    /// `‖λx + (1−λ)y‖²` against `λ‖x‖² + (1−λ)‖y‖² − λ(1−λ)‖x−y‖²`.
    pub combination: InequalitySides,
    /// True when the two sides of the combination identity agree to the
    /// tolerance (the relation is an equality in any inner-product space).
    pub combination_exact: bool,
    /// `‖x − y‖² ≤ ‖x‖² + 2⟨y, x + y⟩`, the form with a minus sign.
    pub subgradient_minus: InequalitySides,
    /// `‖x + y‖² ≤ ‖x‖² + 2⟨y, x + y⟩`, the standard form; always true.
    pub subgradient_plus: InequalitySides,
}

/// Evaluates both readings of the subgradient inequality and the
/// convex-combination identity at `(x, y, lambda)`, with tolerance `1e-10`.
pub fn hilbert_identity_check(x: &Point, y: &Point, lambda: f64) -> Result<IdentityAudit> {
    check_dims(x, y)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            range: "(0, 1)",
        });
    }
    let tol = AUDIT_TOL;
    let mix = x.combine(lambda, y, 1.0 - lambda);
    let lhs = mix.norm_sq();
    let rhs = lambda * x.norm_sq() + (1.0 - lambda) * y.norm_sq()
        - lambda * (1.0 - lambda) * x.distance(y) * x.distance(y);
    let sum = x + y;
    let bound = x.norm_sq() + 2.0 * y.dot(&sum);
    Ok(IdentityAudit {
        combination: InequalitySides::new(lhs, rhs, tol),
        combination_exact: libm::fabs(lhs - rhs) <= tol,
        subgradient_minus: InequalitySides::new((x - y).norm_sq(), bound, tol),
        subgradient_plus: InequalitySides::new(sum.norm_sq(), bound, tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(c: &[f64]) -> Point {
        Point::from_slice(c).unwrap()
    }

    #[test]
    fn inner_examples() {
        assert_eq!(inner(&p(&[1.0, 0.0]), &p(&[0.0, 1.0])).unwrap(), 0.0);
        assert_eq!(inner(&p(&[3.0, 4.0]), &p(&[3.0, 4.0])).unwrap(), 25.0);
        assert_eq!(inner(&p(&[1.0, 2.0, 3.0]), &p(&[4.0, 5.0, 6.0])).unwrap(), 32.0);
    }

    #[test]
    fn inner_rejects_mismatched_dims() {
        assert_eq!(
            inner(&p(&[1.0]), &p(&[1.0, 2.0])),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&p(&[0.0, 0.0, 0.0])), 0.0);
        assert_eq!(norm(&p(&[3.0, 4.0])), 5.0);
        assert_eq!(norm(&p(&[1.0, 1.0, 1.0, 1.0])), 2.0);
    }

    #[test]
    fn point_rejects_bad_coords() {
        assert_eq!(Point::new(vec![]), Err(Error::EmptyPoint));
        assert!(matches!(Point::new(vec![1.0, f64::NAN]), Err(Error::NonFinite(_))));
        assert!(matches!(Point::new(vec![f64::INFINITY]), Err(Error::NonFinite(_))));
    }

    #[test]
    fn projection_examples() {
        let ball = ConvexSet::ball(p(&[0.0, 0.0]), 1.0).unwrap();
        let got = project(&ball, &p(&[3.0, 4.0])).unwrap();
        assert!(got.distance(&p(&[0.6, 0.8])) < 1e-15);

        let bx = ConvexSet::cube(2, -1.0, 1.0).unwrap();
        assert_eq!(project(&bx, &p(&[2.0, 0.5])).unwrap(), p(&[1.0, 0.5]));

        let hs = ConvexSet::half_space(p(&[1.0, 0.0]), 0.0).unwrap();
        assert_eq!(project(&hs, &p(&[2.0, 3.0])).unwrap(), p(&[0.0, 3.0]));
    }

    #[test]
    fn affine_projection_drops_normal_component() {
        let line = ConvexSet::affine(p(&[0.0, 1.0]), vec![p(&[1.0, 0.0])]).unwrap();
        assert_eq!(project(&line, &p(&[5.0, -3.0])).unwrap(), p(&[5.0, 1.0]));
        let single = ConvexSet::affine(p(&[2.0, 2.0]), vec![]).unwrap();
        assert_eq!(project(&single, &p(&[5.0, -3.0])).unwrap(), p(&[2.0, 2.0]));
    }

    #[test]
    fn whole_space_projection_is_identity() {
        let x = p(&[1.5, -2.25, 1e300]);
        assert_eq!(project(&ConvexSet::WholeSpace, &x).unwrap(), x);
    }

    #[test]
    fn inconsistent_sets_are_rejected() {
        assert!(ConvexSet::boxed(p(&[0.0, 1.0]), p(&[1.0, 0.0])).is_err());
        assert!(ConvexSet::ball(p(&[0.0]), 0.0).is_err());
        assert!(ConvexSet::half_space(p(&[0.0, 0.0]), 1.0).is_err());
        assert!(ConvexSet::affine(p(&[0.0, 0.0]), vec![p(&[1.0, 1.0])]).is_err());
        let raw = ConvexSet::Box {
            lower: p(&[1.0]),
            upper: p(&[0.0]),
        };
        assert!(matches!(project(&raw, &p(&[0.5])), Err(Error::InvalidSet(_))));
        assert!(matches!(
            project(&ConvexSet::cube(2, 0.0, 1.0).unwrap(), &p(&[0.5])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn combination_identity_examples() {
        let a = hilbert_identity_check(&p(&[1.0, 1.0]), &p(&[1.0, 1.0]), 0.5).unwrap();
        assert_eq!(a.combination.lhs, 2.0);
        assert_eq!(a.combination.rhs, 2.0);

        let b = hilbert_identity_check(&p(&[1.0, 0.0]), &p(&[0.0, 1.0]), 0.5).unwrap();
        assert!((b.combination.lhs - 0.5).abs() < 1e-15);
        assert!((b.combination.rhs - 0.5).abs() < 1e-15);

        let c = hilbert_identity_check(&p(&[2.0, 0.0]), &p(&[0.0, 0.0]), 0.25).unwrap();
        assert!((c.combination.lhs - 0.25).abs() < 1e-15);
        assert!((c.combination.rhs - 0.25).abs() < 1e-15);
        assert!(a.combination_exact && b.combination_exact && c.combination_exact);
    }

    #[test]
    fn subgradient_readings_can_disagree() {
        // x = (1,0), y = (-0.1,0): ‖x−y‖² = 1.21 but the bound is 1 + 2·(−0.1·0.9) = 0.82.
        let a = hilbert_identity_check(&p(&[1.0, 0.0]), &p(&[-0.1, 0.0]), 0.5).unwrap();
        assert!(!a.subgradient_minus.holds);
        assert!(a.subgradient_plus.holds);
    }

    #[test]
    fn identity_check_rejects_lambda_outside_open_interval() {
        for lambda in [0.0, 1.0, -0.5, 2.0] {
            assert!(matches!(
                hilbert_identity_check(&p(&[1.0]), &p(&[0.0]), lambda),
                Err(Error::OutOfRange { name: "lambda", .. })
            ));
        }
    }
}
