//! Bookkeeping for sample-based inequality audits.

/// Outcome of checking one inequality `lhs ≤ rhs` over a batch of samples.
///
/// `worst_slack` is the minimum of `rhs − lhs` seen so far; a violation is
/// any sample with `lhs > rhs + tol`. A record that checked nothing passes
/// vacuously.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditRecord {
    /// Short identifier of the inequality.
    pub name: &'static str,
    /// Absolute tolerance applied.
    pub tol: f64,
    /// Number of samples evaluated.
    pub checked: usize,
    /// Number of samples violating the inequality.
    pub violations: usize,
    /// Smallest `rhs − lhs` observed.
    pub worst_slack: f64,
    /// `(lhs, rhs)` at the smallest slack.
    pub worst_sides: Option<(f64, f64)>,
    /// Sample indices at the smallest slack (second index is 0 when a
    /// checker iterates over a single list).
    pub witness: Option<(usize, usize)>,
    /// Set when the checker's parameter precondition does not hold; the
    /// inequality is still evaluated but carries no theoretical guarantee.
    pub out_of_range: bool,
}

impl AuditRecord {
    /// Empty record.
    pub fn new(name: &'static str, tol: f64) -> Self {
        AuditRecord {
            name,
            tol,
            checked: 0,
            violations: 0,
            worst_slack: f64::INFINITY,
            worst_sides: None,
            witness: None,
            out_of_range: false,
        }
    }

    /// Records one evaluation of `lhs ≤ rhs`.
    pub fn observe(&mut self, witness: (usize, usize), lhs: f64, rhs: f64) {
        self.checked += 1;
        let slack = rhs - lhs;
        // NaN counts as a violation and as the new worst case
        if !(slack >= -self.tol) {
            self.violations += 1;
        }
        if !(slack >= self.worst_slack) {
            self.worst_slack = slack;
            self.worst_sides = Some((lhs, rhs));
            self.witness = Some(witness);
        }
    }

    /// Folds another record over the same inequality into this one.
    pub fn merge(&mut self, other: &AuditRecord) {
        self.checked += other.checked;
        self.violations += other.violations;
        self.out_of_range |= other.out_of_range;
        if other.worst_slack < self.worst_slack {
            self.worst_slack = other.worst_slack;
            self.worst_sides = other.worst_sides;
            self.witness = other.witness;
        }
    }

    /// No violations observed.
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracks_worst_case_and_violations() {
        let mut r = AuditRecord::new("t", 1e-10);
        r.observe((0, 0), 1.0, 2.0);
        r.observe((1, 0), 2.0, 2.0 - 5e-11);
        assert!(r.passed());
        r.observe((2, 3), 3.0, 2.0);
        assert_eq!(r.violations, 1);
        assert_eq!(r.witness, Some((2, 3)));
        assert_eq!(r.worst_sides, Some((3.0, 2.0)));
        assert_eq!(r.checked, 3);
    }

    #[test]
    fn nan_is_a_violation() {
        let mut r = AuditRecord::new("t", 1e-10);
        r.observe((0, 0), f64::NAN, 1.0);
        assert!(!r.passed());
    }
}
