use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use viscofb::audits::instance_audits;
use viscofb::config::{parse_config, RunPlan, DEFAULT_AUDIT_SAMPLES};
use viscofb::error::{ConfigError, RunError};
use viscofb::execute::execute;
use viscofb::output::fmt_f64;
use viscofb_core::problems::{InstanceKind, InstanceSpec};

/// Viscosity forward-backward splitting experiments.
#[derive(Parser)]
#[command(name = "viscofb", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every cell of a config, writing CSV trajectories and summary.json.
    Run {
        /// TOML configuration.
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Seed of the sampled operator audits; overrides the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the sampled operator audits of a built-in instance.
    Check {
        /// `inclusion`, `oscillating` or `trivial`.
        instance: String,
        /// Dimension.
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Sampler seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Points and pairs per audit.
        #[arg(long, default_value_t = DEFAULT_AUDIT_SAMPLES)]
        samples: usize,
    },
    /// Parse and validate a config without running it.
    Validate {
        /// TOML configuration.
        config: PathBuf,
    },
}

fn load(path: &Path) -> Result<RunPlan, RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::Io {
        path: path.to_owned(),
        source: e,
    })?;
    Ok(parse_config(&text)?)
}

fn fail(err: RunError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(err.exit_code())
}

fn cmd_run(config: &Path, out: &Path, seed: Option<u64>) -> Result<u8, RunError> {
    let mut plan = load(config)?;
    if seed.is_some() {
        plan.seed = seed;
    }
    let summary = execute(&plan, out)?;
    for c in &summary.cells {
        println!(
            "{}: {} after {} iterations, final ‖ψ − ψ*‖ = {}, audit violations = {}",
            c.id,
            c.terminated_by,
            c.iterations,
            c.final_dist_to_solution.map(fmt_f64).unwrap_or_else(|| "n/a".into()),
            c.audit_violations
        );
    }
    Ok(summary.exit_code)
}

fn cmd_check(instance: &str, dim: usize, seed: u64, samples: usize) -> Result<u8, RunError> {
    let kind = InstanceKind::from_id(instance).ok_or_else(|| ConfigError::Unknown {
        cell: String::new(),
        field: "instance",
        value: instance.to_owned(),
        expected: "inclusion, oscillating, trivial",
    })?;
    let dim = if kind == InstanceKind::Oscillating { 1 } else { dim };
    let problem = InstanceSpec::new(kind, dim).build().map_err(|e| RunError::Solver {
        cell: instance.to_owned(),
        source: e,
    })?;
    let audits = instance_audits(&problem, samples, seed).map_err(|e| RunError::Solver {
        cell: instance.to_owned(),
        source: e,
    })?;
    let mut ok = true;
    for a in &audits {
        let r = &a.record;
        ok &= r.passed();
        println!(
            "{} {}: checked={} violations={} worst_slack={}{}",
            if r.passed() { "PASS" } else { "FAIL" },
            a.label,
            r.checked,
            r.violations,
            fmt_f64(r.worst_slack),
            if r.out_of_range { " (out of range)" } else { "" }
        );
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_validate(config: &Path) -> Result<u8, RunError> {
    let plan = load(config)?;
    for c in &plan.cells {
        println!(
            "{}: ok ({}, {}, d = {}, tol = {}, max_iter = {})",
            c.id,
            c.algorithm.id(),
            c.spec.kind.id(),
            c.problem.dim,
            fmt_f64(c.stop.tol),
            c.stop.max_iter
        );
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, out, seed } => cmd_run(config, out, *seed),
        Command::Check {
            instance,
            dim,
            seed,
            samples,
        } => cmd_check(instance, *dim, *seed, *samples),
        Command::Validate { config } => cmd_validate(config),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => fail(e),
    }
}
