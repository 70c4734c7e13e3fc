//! Seeded, sample-based audits of an instance's operator hypotheses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use viscofb_core::hilbert::hilbert_identity_check;
use viscofb_core::monotone::{
    check_forward_backward_nonexpansive, check_forward_nonexpansive, check_inverse_strongly_monotone,
    check_lipschitz, check_resolvent_firmly_nonexpansive, check_strongly_monotone, check_damped_contraction,
};
use viscofb_core::setvalued::check_declared_class;
use viscofb_core::solvers::ProblemInstance;
use viscofb_core::{AuditRecord, Point, Result, AUDIT_TOL};

/// Half-width of the sampling cube `[−R, R]^d`.
pub const SAMPLE_RADIUS: f64 = 10.0;

/// Deterministic sampler over `[−R, R]^d`.
pub struct Sampler {
    rng: ChaCha8Rng,
    dim: usize,
}

impl Sampler {
    /// Sampler seeded with `seed`.
    pub fn new(seed: u64, dim: usize) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
        }
    }

    /// One uniform point.
    pub fn point(&mut self) -> Point {
        let coords = (0..self.dim)
            .map(|_| self.rng.random_range(-SAMPLE_RADIUS..=SAMPLE_RADIUS))
            .collect();
        Point::new(coords).expect("finite nonempty sample")
    }

    /// `count` uniform points.
    pub fn points(&mut self, count: usize) -> Vec<Point> {
        (0..count).map(|_| self.point()).collect()
    }

    /// `count` independent pairs.
    pub fn pairs(&mut self, count: usize) -> Vec<(Point, Point)> {
        (0..count).map(|_| (self.point(), self.point())).collect()
    }

    /// Uniform scalar in the open interval `(0, 1)`.
    pub fn unit(&mut self) -> f64 {
        loop {
            let t: f64 = self.rng.random();
            if t > 0.0 {
                return t;
            }
        }
    }
}

/// Audit name paired with its record, so that repeated checkers stay
/// distinguishable.
#[derive(Debug, Clone)]
pub struct NamedAudit {
    /// Which operator or identity was checked.
    pub label: String,
    /// Outcome.
    pub record: AuditRecord,
}

fn named(label: &str, record: AuditRecord) -> NamedAudit {
    NamedAudit {
        label: label.to_owned(),
        record,
    }
}

/// Exactness of `‖λx + (1−λ)y‖² = λ‖x‖² + (1−λ)‖y‖² − λ(1−λ)‖x−y‖²` on
/// random `λ ∈ (0, 1)`.
pub fn combination_identity_audit(sampler: &mut Sampler, pairs: &[(Point, Point)]) -> Result<AuditRecord> {
    let mut rec = AuditRecord::new("combination_identity", AUDIT_TOL);
    for (i, (x, y)) in pairs.iter().enumerate() {
        let audit = hilbert_identity_check(x, y, sampler.unit())?;
        let gap = (audit.combination.lhs - audit.combination.rhs).abs();
        rec.observe((i, 0), gap, 0.0);
    }
    Ok(rec)
}

/// Runs every operator audit of `problem` on `samples` random points and
/// pairs drawn with `seed`.
pub fn instance_audits(problem: &ProblemInstance, samples: usize, seed: u64) -> Result<Vec<NamedAudit>> {
    let mut sampler = Sampler::new(seed, problem.dim);
    let points = sampler.points(samples);
    let pairs = sampler.pairs(samples);
    let mut out = Vec::new();

    for t in [&problem.t1, &problem.t2, &problem.t3] {
        out.push(named(t.name(), check_declared_class(t, &points, &pairs)?));
    }

    let alpha = problem.alpha_ism();
    let lambda = problem.certify_lambda();
    out.push(named("Λ inverse strongly monotone", check_inverse_strongly_monotone(&problem.forward, alpha, &pairs)?));
    out.push(named("I − 2αΛ", check_forward_nonexpansive(&problem.forward, alpha, 2.0 * alpha, &pairs)?));
    out.push(named("J_λ firmly nonexpansive", check_resolvent_firmly_nonexpansive(&problem.backward, lambda, &pairs)?));
    out.push(named(
        "J_λ(I − λΛ) nonexpansive",
        check_forward_backward_nonexpansive(&problem.backward, &problem.forward, lambda, &pairs)?,
    ));

    let vp = &problem.params;
    out.push(named("Φ strongly monotone", check_strongly_monotone(&problem.strong, vp.k, &pairs)?));
    out.push(named("Φ Lipschitz", check_lipschitz(&problem.strong, vp.lipschitz, &pairs)?));
    out.push(named("φ Lipschitz", check_lipschitz(&problem.contraction, vp.b, &pairs)?));

    let m = problem.strong.moduli();
    if let (Some(k), Some(l)) = (m.strong_monotonicity, m.lipschitz) {
        let tau = vp.eta * (k - l * l * vp.eta / 2.0);
        let t = 0.5 * (1.0f64).min(1.0 / tau);
        out.push(named("I − tηΦ contraction", check_damped_contraction(&problem.strong, vp.eta, tau, t, &pairs)?));
    }

    out.push(named("combination identity", combination_identity_audit(&mut sampler, &pairs)?));
    Ok(out)
}
