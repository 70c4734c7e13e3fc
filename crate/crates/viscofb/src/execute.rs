//! Runs a validated plan and writes its artifacts.

use std::fs;
use std::path::Path;

use viscofb_core::solvers::run;

use crate::audits::instance_audits;
use crate::config::{Cell, RunPlan};
use crate::error::RunError;
use crate::output::{write_csv, write_summary, CellSummary, PlanSummary};

/// Name of the JSON summary inside the output directory.
pub const SUMMARY_FILE: &str = "summary.json";

/// Runs one cell, writing `<id>.csv` into `out_dir`.
pub fn execute_cell(cell: &Cell, out_dir: &Path, seed: Option<u64>, audit_samples: usize) -> Result<CellSummary, RunError> {
    let solver_err = |source| RunError::Solver {
        cell: cell.id.clone(),
        source,
    };
    let report = run(cell.algorithm, &cell.problem, &cell.schedule, &cell.psi0, cell.stop, &cell.options)
        .map_err(solver_err)?;
    let operator_audits = match seed {
        Some(s) => instance_audits(&cell.problem, audit_samples, s).map_err(solver_err)?,
        None => Vec::new(),
    };
    write_csv(&out_dir.join(format!("{}.csv", cell.id)), &report)?;
    Ok(CellSummary::new(&cell.id, cell.spec.kind.id(), &report, &operator_audits))
}

/// Executes every cell in order, then writes the summary. Exit code 0 iff
/// every cell converged by tolerance without audit violations, 1 otherwise.
pub fn execute(plan: &RunPlan, out_dir: &Path) -> Result<PlanSummary, RunError> {
    fs::create_dir_all(out_dir).map_err(|e| RunError::io(out_dir, e))?;
    let cells = plan
        .cells
        .iter()
        .map(|c| execute_cell(c, out_dir, plan.seed, plan.audit_samples))
        .collect::<Result<Vec<_>, _>>()?;
    let exit_code = if cells.iter().all(CellSummary::succeeded) { 0 } else { 1 };
    let summary = PlanSummary {
        seed: plan.seed,
        cells,
        exit_code,
    };
    write_summary(&out_dir.join(SUMMARY_FILE), &summary)?;
    Ok(summary)
}
