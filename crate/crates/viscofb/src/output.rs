//! Per-cell CSV trajectories and the JSON run summary.

use std::fs;
use std::path::Path;

use serde::Serialize;
use viscofb_core::solvers::{IterSummary, RunReport};
use viscofb_core::AuditRecord;

use crate::audits::NamedAudit;
use crate::error::RunError;

/// CSV header, one column per field of a recorded iterate.
pub const CSV_HEADER: [&str; 9] = [
    "n",
    "psi_norm",
    "dist_to_solution",
    "delta_residual_T1",
    "pi_residual_T2",
    "phi_residual_T3",
    "fb_residual",
    "fejer_ok",
    "step_size_alpha",
];

/// Shortest round-trip text of a float; stable across runs.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// CSV fields of one recorded iterate; absent values are empty.
pub fn csv_row(s: &IterSummary) -> [String; 9] {
    let r = s.residuals;
    [
        s.n.to_string(),
        fmt_f64(s.psi_norm),
        opt(s.dist_to_solution),
        opt(r.map(|r| r.t1)),
        opt(r.map(|r| r.t2)),
        opt(r.map(|r| r.t3)),
        fmt_f64(s.fb_residual),
        s.fejer_ok.map(|b| b.to_string()).unwrap_or_default(),
        opt(s.alpha),
    ]
}

/// Writes the trajectory of `report` to `path`.
pub fn write_csv(path: &Path, report: &RunReport) -> Result<(), RunError> {
    let io = |e: csv::Error| RunError::io(path, e.into());
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(CSV_HEADER).map_err(io)?;
    for s in &report.trajectory {
        w.write_record(csv_row(s)).map_err(io)?;
    }
    w.flush().map_err(|e| RunError::io(path, e))
}

/// Serializable view of an [`AuditRecord`].
#[derive(Debug, Clone, Serialize)]
pub struct AuditSummary {
    /// Which inequality.
    pub name: String,
    /// Samples evaluated.
    pub checked: usize,
    /// Samples violating it.
    pub violations: usize,
    /// Smallest `rhs − lhs`; `null` when nothing was checked.
    pub worst_slack: Option<f64>,
    /// Parameter precondition failed.
    pub out_of_range: bool,
}

impl AuditSummary {
    /// View of `rec` under `name`.
    pub fn new(name: &str, rec: &AuditRecord) -> Self {
        AuditSummary {
            name: name.to_owned(),
            checked: rec.checked,
            violations: rec.violations,
            worst_slack: rec.worst_slack.is_finite().then_some(rec.worst_slack),
            out_of_range: rec.out_of_range,
        }
    }
}

/// JSON summary of one cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    /// Cell id.
    pub id: String,
    /// Algorithm id.
    pub algorithm: String,
    /// Instance id.
    pub instance: String,
    /// Dimension.
    pub dim: usize,
    /// CSV file name, relative to the output directory.
    pub csv: String,
    /// Rows written to the CSV, header excluded.
    pub recorded_rows: usize,
    /// Updates performed.
    pub iterations: usize,
    /// `tolerance`, `max_iter` or `divergence_guard`.
    pub terminated_by: String,
    /// Final iterate.
    pub final_psi: Vec<f64>,
    /// `‖ψ_final − ψ*‖` when `ψ*` is known.
    pub final_dist_to_solution: Option<f64>,
    /// Variational-inequality residual over the declared common points.
    pub vi_residual: Option<f64>,
    /// `sup μ_n`.
    pub mu_bar: f64,
    /// Run-time audits (Fejér chain, `δ` link, boundedness).
    pub run_audits: Vec<AuditSummary>,
    /// Sampled operator audits; empty without a seed.
    pub operator_audits: Vec<AuditSummary>,
    /// Sum of violations over both audit lists.
    pub audit_violations: usize,
}

impl CellSummary {
    /// Summary of a finished cell.
    pub fn new(id: &str, instance: &str, report: &RunReport, operator_audits: &[NamedAudit]) -> Self {
        let run_audits = vec![
            AuditSummary::new("fejer_chain", &report.audit.fejer),
            AuditSummary::new("delta_link", &report.audit.delta_link),
            AuditSummary::new("bounded", &report.audit.bounded),
        ];
        let operator_audits: Vec<AuditSummary> = operator_audits
            .iter()
            .map(|a| AuditSummary::new(&a.label, &a.record))
            .collect();
        let audit_violations = run_audits.iter().chain(&operator_audits).map(|a| a.violations).sum();
        let last = report.trajectory.last();
        CellSummary {
            id: id.to_owned(),
            algorithm: report.algorithm.id().to_owned(),
            instance: instance.to_owned(),
            dim: report.final_psi.dim(),
            csv: format!("{id}.csv"),
            recorded_rows: report.trajectory.len(),
            iterations: report.iterations,
            terminated_by: report.terminated_by.id().to_owned(),
            final_psi: report.final_psi.coords().to_vec(),
            final_dist_to_solution: last.and_then(|s| s.dist_to_solution),
            vi_residual: report.vi_residual,
            mu_bar: report.mu_bar,
            run_audits,
            operator_audits,
            audit_violations,
        }
    }

    /// Converged by tolerance with no audit violations.
    pub fn succeeded(&self) -> bool {
        self.terminated_by == "tolerance" && self.audit_violations == 0
    }
}

/// JSON summary of a whole plan.
#[derive(Debug, Clone, Serialize)]
pub struct PlanSummary {
    /// Audit seed, if any.
    pub seed: Option<u64>,
    /// Per-cell summaries in execution order.
    pub cells: Vec<CellSummary>,
    /// Process exit code.
    pub exit_code: u8,
}

/// Writes `summary` as pretty JSON with a trailing newline.
pub fn write_summary(path: &Path, summary: &PlanSummary) -> Result<(), RunError> {
    let mut text = serde_json::to_string_pretty(summary).map_err(|e| RunError::io(path, e.into()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| RunError::io(path, e))
}
