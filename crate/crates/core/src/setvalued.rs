//! Multivalued mappings with exactly representable images.
//!
//! Images are singletons, finite sets or closed balls, for which the distance
//! function, nearest-point selection and (for the supported pairings) the
//! Hausdorff metric have closed forms. The class checkers at the bottom of
//! the module certify an operator class on a finite list of samples.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::audit::AuditRecord;
use crate::error::{Error, Result};
use crate::hilbert::{check_dims, Point};
use crate::AUDIT_TOL;

/// The value `T(x)` of a multivalued map: a nonempty closed bounded set.
#[derive(Debug, Clone, PartialEq)]
pub enum SetImage {
    /// `{p}`.
    Singleton(Point),
    /// A nonempty finite set, in enumeration order.
    FiniteSet(Vec<Point>),
    /// Closed ball; radius zero is allowed.
    BallImage {
        /// Center.
        center: Point,
        /// Radius, nonnegative.
        radius: f64,
    },
}

impl SetImage {
    /// Checked finite-set constructor.
    pub fn finite(points: Vec<Point>) -> Result<Self> {
        let s = SetImage::FiniteSet(points);
        s.validate()?;
        Ok(s)
    }

    /// Checked ball constructor.
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        let s = SetImage::BallImage { center, radius };
        s.validate()?;
        Ok(s)
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        match self {
            SetImage::Singleton(p) => p.dim(),
            SetImage::FiniteSet(ps) => ps.first().map_or(0, Point::dim),
            SetImage::BallImage { center, .. } => center.dim(),
        }
    }

    /// Checks nonemptiness, dimension agreement and the radius sign.
    pub fn validate(&self) -> Result<()> {
        match self {
            SetImage::Singleton(_) => Ok(()),
            SetImage::FiniteSet(ps) => {
                let first = ps
                    .first()
                    .ok_or_else(|| Error::InvalidSet(String::from("empty finite set")))?;
                ps.iter().try_for_each(|p| check_dims(first, p))
            }
            SetImage::BallImage { radius, .. } => {
                if radius.is_finite() && *radius >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidSet(alloc::format!(
                        "ball image radius {radius} must be nonnegative"
                    )))
                }
            }
        }
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        self.validate()?;
        if self.dim() != x.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Ok(())
    }

    /// `d(x, self) ≤ tol`.
    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        Ok(distance_to_set(x, self)? <= tol)
    }
}

/// `d(x, S) = inf_{u ∈ S} ‖x − u‖`, exact for every image variant.
pub fn distance_to_set(x: &Point, set: &SetImage) -> Result<f64> {
    set.check_point(x)?;
    Ok(match set {
        SetImage::Singleton(p) => x.distance(p),
        SetImage::FiniteSet(ps) => ps
            .iter()
            .map(|p| x.distance(p))
            .fold(f64::INFINITY, f64::min),
        SetImage::BallImage { center, radius } => (x.distance(center) - radius).max(0.0),
    })
}

fn directed_finite(from: &[Point], to: &[Point]) -> f64 {
    from.iter()
        .map(|a| to.iter().map(|b| a.distance(b)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

fn as_points(s: &SetImage) -> Option<&[Point]> {
    match s {
        SetImage::Singleton(p) => Some(core::slice::from_ref(p)),
        SetImage::FiniteSet(ps) => Some(ps),
        SetImage::BallImage { .. } => None,
    }
}

fn as_ball(s: &SetImage) -> Option<(&Point, f64)> {
    match s {
        SetImage::Singleton(p) => Some((p, 0.0)),
        SetImage::BallImage { center, radius } => Some((center, *radius)),
        SetImage::FiniteSet(_) => None,
    }
}

/// Hausdorff distance `max{sup_{a∈A} d(a,B), sup_{b∈B} d(b,A)}`.
///
/// Exact for pairs of singletons/finite sets and for pairs of balls (a
/// singleton counts as a ball of radius zero). A finite set against a ball
/// is refused.
pub fn hausdorff(a: &SetImage, b: &SetImage) -> Result<f64> {
    a.validate()?;
    b.validate()?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if let (Some(pa), Some(pb)) = (as_points(a), as_points(b)) {
        return Ok(directed_finite(pa, pb).max(directed_finite(pb, pa)));
    }
    if let (Some((ca, ra)), Some((cb, rb))) = (as_ball(a), as_ball(b)) {
        let gap = ca.distance(cb);
        return Ok((gap + ra - rb).max(gap + rb - ra).max(0.0));
    }
    Err(Error::UnsupportedPairing("finite set against ball"))
}

/// How an element of `T(x)` is picked when an iteration needs one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionRule {
    /// Nearest point of `T(x)` to `x` (the metric projection `P_T`); ties go
    /// to the lowest index.
    #[default]
    Metric,
    /// The canonical representative: the point of a singleton, the first
    /// element of a finite set, the center of a ball.
    FirstEnumerated,
}

/// Picks an element of `image` according to `rule`, relative to `x`.
pub fn select_from(image: &SetImage, rule: SelectionRule, x: &Point) -> Result<Point> {
    image.check_point(x)?;
    Ok(match (image, rule) {
        (SetImage::Singleton(p), _) => p.clone(),
        (SetImage::FiniteSet(ps), SelectionRule::FirstEnumerated) => ps[0].clone(),
        (SetImage::FiniteSet(ps), SelectionRule::Metric) => {
            let mut best = 0;
            let mut best_dist = f64::INFINITY;
            for (i, p) in ps.iter().enumerate() {
                let d = x.distance(p);
                if d < best_dist {
                    best = i;
                    best_dist = d;
                }
            }
            ps[best].clone()
        }
        (SetImage::BallImage { center, .. }, SelectionRule::FirstEnumerated) => center.clone(),
        (SetImage::BallImage { center, radius }, SelectionRule::Metric) => {
            let offset = x - center;
            let dist = offset.norm();
            if dist <= *radius {
                x.clone()
            } else {
                center.add_scaled(radius / dist, &offset)
            }
        }
    })
}

/// Operator class a [`MultiMap`] claims to belong to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorClass {
    /// `H(Tψ,Tp)² ≤ ‖ψ−p‖² + β·d(ψ,Tψ)²` for fixed points `p`.
    Demicontractive(f64),
    /// `H(Tψ,Tp) ≤ ‖ψ−p‖` for fixed points `p`.
    QuasiNonexpansive,
    /// `H(Tψ,Tπ)² ≤ ‖ψ−π‖² + k‖(ψ−u)−(π−v)‖²`.
    StrictlyPseudocontractive(f64),
    /// `H(Tψ,Tπ) ≤ ‖ψ−π‖`.
    Nonexpansive,
}

/// Image function of a multivalued map.
pub type ImageFn = Arc<dyn Fn(&Point) -> SetImage + Send + Sync>;

/// A multivalued map `T: R^d → CB(R^d)` with its declared class and any
/// fixed points known in closed form.
#[derive(Clone)]
pub struct MultiMap {
    name: String,
    dim: usize,
    image: ImageFn,
    declared_class: OperatorClass,
    known_fixed_points: Vec<Point>,
}

impl fmt::Debug for MultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiMap")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("declared_class", &self.declared_class)
            .field("known_fixed_points", &self.known_fixed_points)
            .finish_non_exhaustive()
    }
}

impl MultiMap {
    /// Wraps an image function. The function must be pure.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        declared_class: OperatorClass,
        image: impl Fn(&Point) -> SetImage + Send + Sync + 'static,
    ) -> Self {
        MultiMap {
            name: name.into(),
            dim,
            image: Arc::new(image),
            declared_class,
            known_fixed_points: Vec::new(),
        }
    }

    /// Declares fixed points known in closed form.
    pub fn with_fixed_points(mut self, points: Vec<Point>) -> Self {
        self.known_fixed_points = points;
        self
    }

    /// `x ↦ {x}`.
    pub fn identity(dim: usize) -> Self {
        MultiMap::new("identity", dim, OperatorClass::Nonexpansive, |x| {
            SetImage::Singleton(x.clone())
        })
    }

    /// `x ↦ {s·x}`; declared nonexpansive for `|s| ≤ 1`, fixed point 0.
    pub fn scaling(dim: usize, s: f64, declared_class: OperatorClass) -> Self {
        MultiMap::new(alloc::format!("scale({s})"), dim, declared_class, move |x| {
            SetImage::Singleton(s * x)
        })
        .with_fixed_points(alloc::vec![Point::zeros(dim)])
    }

    /// `x ↦ {q}`.
    pub fn constant(q: Point) -> Self {
        let fixed = q.clone();
        MultiMap::new("constant", q.dim(), OperatorClass::QuasiNonexpansive, move |_| {
            SetImage::Singleton(q.clone())
        })
        .with_fixed_points(alloc::vec![fixed])
    }

    /// Display name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Declared operator class.
    pub fn declared_class(&self) -> OperatorClass {
        self.declared_class
    }

    /// Fixed points declared at construction.
    pub fn known_fixed_points(&self) -> &[Point] {
        &self.known_fixed_points
    }

    /// `T(x)`.
    pub fn image(&self, x: &Point) -> Result<SetImage> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        let img = (self.image)(x);
        img.check_point(x)?;
        Ok(img)
    }

    /// `d(x, T(x))`.
    pub fn residual(&self, x: &Point) -> Result<f64> {
        distance_to_set(x, &self.image(x)?)
    }
}

/// Picks an element of `T(x)`.
pub fn select(map: &MultiMap, rule: SelectionRule, x: &Point) -> Result<Point> {
    select_from(&map.image(x)?, rule, x)
}

fn fixed_points(map: &MultiMap) -> Result<&[Point]> {
    match map.known_fixed_points() {
        [] => Err(Error::MissingFixedPoints),
        fp => Ok(fp),
    }
}

/// Certifies `H(Tψ,Tp)² ≤ ‖ψ−p‖² + β·d(ψ,Tψ)²` for every sample `ψ` and every
/// declared fixed point `p`. Witness indices are `(sample, fixed point)`.
pub fn check_demicontractive(map: &MultiMap, beta: f64, samples: &[Point]) -> Result<AuditRecord> {
    let fps = fixed_points(map)?;
    let mut rec = AuditRecord::new("demicontractive", AUDIT_TOL);
    rec.out_of_range = !(0.0..1.0).contains(&beta);
    let fixed_images = fps.iter().map(|p| map.image(p)).collect::<Result<Vec<_>>>()?;
    for (i, psi) in samples.iter().enumerate() {
        let img = map.image(psi)?;
        let d = distance_to_set(psi, &img)?;
        for (j, (p, tp)) in fps.iter().zip(&fixed_images).enumerate() {
            let h = hausdorff(&img, tp)?;
            let gap = psi.distance(p);
            rec.observe((i, j), h * h, gap * gap + beta * d * d);
        }
    }
    Ok(rec)
}

/// Certifies `H(Tψ,Tp) ≤ ‖ψ−p‖` for every sample and declared fixed point.
pub fn check_quasi_nonexpansive(map: &MultiMap, samples: &[Point]) -> Result<AuditRecord> {
    let fps = fixed_points(map)?;
    let mut rec = AuditRecord::new("quasi_nonexpansive", AUDIT_TOL);
    let fixed_images = fps.iter().map(|p| map.image(p)).collect::<Result<Vec<_>>>()?;
    for (i, psi) in samples.iter().enumerate() {
        let img = map.image(psi)?;
        for (j, (p, tp)) in fps.iter().zip(&fixed_images).enumerate() {
            rec.observe((i, j), hausdorff(&img, tp)?, psi.distance(p));
        }
    }
    Ok(rec)
}

/// Certifies `H(Tψ,Tπ)² ≤ ‖ψ−π‖² + k‖(ψ−u)−(π−v)‖²` on each pair, where `u`
/// and `v` are the metric selections from `Tψ` and `Tπ`.
///
/// The class is defined for `k ∈ (0,1)`; other values are evaluated anyway
/// and the record is marked `out_of_range`.
pub fn check_strictly_pseudocontractive(
    map: &MultiMap,
    k: f64,
    pairs: &[(Point, Point)],
) -> Result<AuditRecord> {
    let mut rec = AuditRecord::new("strictly_pseudocontractive", AUDIT_TOL);
    rec.out_of_range = !(k > 0.0 && k < 1.0);
    for (i, (psi, pi)) in pairs.iter().enumerate() {
        let (tpsi, tpi) = (map.image(psi)?, map.image(pi)?);
        let u = select_from(&tpsi, SelectionRule::Metric, psi)?;
        let v = select_from(&tpi, SelectionRule::Metric, pi)?;
        let h = hausdorff(&tpsi, &tpi)?;
        let gap = psi.distance(pi);
        let correction = (&(psi - &u) - &(pi - &v)).norm_sq();
        rec.observe((i, 0), h * h, gap * gap + k * correction);
    }
    Ok(rec)
}

/// Certifies `H(Tψ,Tπ) ≤ ‖ψ−π‖` on each pair.
pub fn check_nonexpansive(map: &MultiMap, pairs: &[(Point, Point)]) -> Result<AuditRecord> {
    let mut rec = AuditRecord::new("nonexpansive", AUDIT_TOL);
    for (i, (psi, pi)) in pairs.iter().enumerate() {
        let h = hausdorff(&map.image(psi)?, &map.image(pi)?)?;
        rec.observe((i, 0), h, psi.distance(pi));
    }
    Ok(rec)
}

/// Runs the checker matching the map's declared class.
pub fn check_declared_class(
    map: &MultiMap,
    samples: &[Point],
    pairs: &[(Point, Point)],
) -> Result<AuditRecord> {
    match map.declared_class() {
        OperatorClass::Demicontractive(beta) => check_demicontractive(map, beta, samples),
        OperatorClass::QuasiNonexpansive => check_quasi_nonexpansive(map, samples),
        OperatorClass::StrictlyPseudocontractive(k) => check_strictly_pseudocontractive(map, k, pairs),
        OperatorClass::Nonexpansive => check_nonexpansive(map, pairs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(c: &[f64]) -> Point {
        Point::from_slice(c).unwrap()
    }

    fn s(x: f64) -> Point {
        Point::scalar(x).unwrap()
    }

    #[test]
    fn distance_examples() {
        let o = p(&[0.0, 0.0]);
        assert_eq!(distance_to_set(&o, &SetImage::Singleton(p(&[3.0, 4.0]))).unwrap(), 5.0);
        let ball = SetImage::ball(p(&[3.0, 4.0]), 1.0).unwrap();
        assert_eq!(distance_to_set(&o, &ball).unwrap(), 4.0);
        let fin = SetImage::finite(vec![p(&[1.0, 1.0]), p(&[5.0, 5.0])]).unwrap();
        assert_eq!(distance_to_set(&p(&[1.0, 1.0]), &fin).unwrap(), 0.0);
        // inside a ball
        assert_eq!(distance_to_set(&p(&[3.5, 4.0]), &ball).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_examples() {
        let half = SetImage::Singleton(s(2.0 / 2.0));
        assert_eq!(hausdorff(&half, &SetImage::Singleton(s(0.0))).unwrap(), 1.0);
        let o = SetImage::finite(vec![p(&[0.0, 0.0])]).unwrap();
        assert_eq!(hausdorff(&o, &o).unwrap(), 0.0);
        let a = SetImage::finite(vec![s(0.0), s(2.0)]).unwrap();
        let b = SetImage::finite(vec![s(1.0)]).unwrap();
        assert_eq!(hausdorff(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn hausdorff_of_balls() {
        let a = SetImage::ball(p(&[0.0, 0.0]), 1.0).unwrap();
        let b = SetImage::ball(p(&[3.0, 4.0]), 2.5).unwrap();
        assert_eq!(hausdorff(&a, &b).unwrap(), 6.5);
        let pt = SetImage::Singleton(p(&[0.0, 2.0]));
        assert_eq!(hausdorff(&pt, &a).unwrap(), 3.0);
    }

    #[test]
    fn hausdorff_refuses_finite_against_ball() {
        let a = SetImage::finite(vec![s(0.0), s(1.0)]).unwrap();
        let b = SetImage::ball(s(0.0), 1.0).unwrap();
        assert!(matches!(hausdorff(&a, &b), Err(Error::UnsupportedPairing(_))));
        assert!(matches!(hausdorff(&b, &a), Err(Error::UnsupportedPairing(_))));
    }

    #[test]
    fn invalid_images_are_rejected() {
        assert!(SetImage::finite(vec![]).is_err());
        assert!(SetImage::finite(vec![s(0.0), p(&[0.0, 1.0])]).is_err());
        assert!(SetImage::ball(s(0.0), -1.0).is_err());
    }

    #[test]
    fn selection_examples() {
        let half = MultiMap::scaling(1, 0.5, OperatorClass::QuasiNonexpansive);
        for rule in [SelectionRule::Metric, SelectionRule::FirstEnumerated] {
            assert_eq!(select(&half, rule, &s(4.0)).unwrap(), s(2.0));
        }
        let ball = SetImage::ball(p(&[0.0, 0.0]), 1.0).unwrap();
        assert_eq!(select_from(&ball, SelectionRule::Metric, &p(&[2.0, 0.0])).unwrap(), p(&[1.0, 0.0]));
        assert_eq!(select_from(&ball, SelectionRule::Metric, &p(&[0.0, 0.0])).unwrap(), p(&[0.0, 0.0]));
        assert_eq!(
            select_from(&ball, SelectionRule::FirstEnumerated, &p(&[2.0, 0.0])).unwrap(),
            p(&[0.0, 0.0])
        );
        let fin = SetImage::finite(vec![p(&[0.0, 0.0]), p(&[2.0, 0.0])]).unwrap();
        assert_eq!(select_from(&fin, SelectionRule::Metric, &p(&[0.9, 0.0])).unwrap(), p(&[0.0, 0.0]));
        assert_eq!(select_from(&fin, SelectionRule::Metric, &p(&[1.1, 0.0])).unwrap(), p(&[2.0, 0.0]));
    }

    #[test]
    fn metric_selection_ties_go_to_lowest_index() {
        let fin = SetImage::finite(vec![s(2.0), s(0.0)]).unwrap();
        assert_eq!(select_from(&fin, SelectionRule::Metric, &s(1.0)).unwrap(), s(2.0));
    }

    #[test]
    fn demicontractive_half_map() {
        let half = MultiMap::scaling(1, 0.5, OperatorClass::Demicontractive(0.5));
        let samples = [s(-2.0), s(-1.0), s(1.0), s(2.0)];
        for beta in [0.1, 0.5, 0.9] {
            assert!(check_demicontractive(&half, beta, &samples).unwrap().passed());
        }
    }

    #[test]
    fn identity_is_demicontractive_with_equality() {
        let id = MultiMap::identity(2).with_fixed_points(vec![p(&[0.0, 0.0])]);
        let rec = check_demicontractive(&id, 0.3, &[p(&[1.0, 2.0]), p(&[-3.0, 0.5])]).unwrap();
        assert!(rec.passed());
        assert!(rec.worst_slack.abs() < 1e-12);
    }

    #[test]
    fn checkers_need_fixed_points() {
        let id = MultiMap::identity(1);
        assert_eq!(check_demicontractive(&id, 0.5, &[s(1.0)]), Err(Error::MissingFixedPoints));
        assert_eq!(check_quasi_nonexpansive(&id, &[s(1.0)]), Err(Error::MissingFixedPoints));
    }

    #[test]
    fn quasi_nonexpansive_examples() {
        let half = MultiMap::scaling(1, 0.5, OperatorClass::QuasiNonexpansive);
        assert!(check_quasi_nonexpansive(&half, &[s(-3.0), s(7.0)]).unwrap().passed());

        let q = p(&[1.0, -1.0]);
        let constant = MultiMap::constant(q.clone());
        let rec = check_quasi_nonexpansive(&constant, &[p(&[5.0, 5.0]), q]).unwrap();
        assert!(rec.passed());
        assert_eq!(rec.worst_sides.unwrap().0, 0.0);

        let double = MultiMap::scaling(1, 2.0, OperatorClass::QuasiNonexpansive);
        let rec = check_quasi_nonexpansive(&double, &[s(1.0)]).unwrap();
        assert!(!rec.passed());
        assert_eq!(rec.worst_sides, Some((2.0, 1.0)));
        assert_eq!(rec.witness, Some((0, 0)));
    }

    #[test]
    fn strict_pseudocontraction_examples() {
        let id = MultiMap::identity(2);
        let pairs = [(p(&[1.0, 2.0]), p(&[-1.0, 0.0]))];
        assert!(check_strictly_pseudocontractive(&id, 0.5, &pairs).unwrap().passed());

        // {x/2}: LHS 0.25, RHS 1 + 0.5·0.25
        let half = MultiMap::scaling(1, 0.5, OperatorClass::StrictlyPseudocontractive(0.5));
        let rec = check_strictly_pseudocontractive(&half, 0.5, &[(s(1.0), s(0.0))]).unwrap();
        assert!(rec.passed());
        let (lhs, rhs) = rec.worst_sides.unwrap();
        assert_eq!(lhs, 0.25);
        assert_eq!(rhs, 1.125);
        assert!(!rec.out_of_range);
        assert!(check_strictly_pseudocontractive(&half, 1.0, &[]).unwrap().out_of_range);
    }

    #[test]
    fn nonexpansive_checker() {
        let half = MultiMap::scaling(1, 0.5, OperatorClass::Nonexpansive);
        assert!(check_nonexpansive(&half, &[(s(1.0), s(-3.0))]).unwrap().passed());
        let double = MultiMap::scaling(1, 2.0, OperatorClass::Nonexpansive);
        assert!(!check_nonexpansive(&double, &[(s(1.0), s(-3.0))]).unwrap().passed());
    }

    #[test]
    fn image_rejects_wrong_dimension() {
        let id = MultiMap::identity(2);
        assert!(matches!(id.image(&s(1.0)), Err(Error::DimensionMismatch { .. })));
    }
}
