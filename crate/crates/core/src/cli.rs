//! The `qwalk` command line: `run` evolves a configured experiment and writes
//! probability grids; `verify` runs one of the unitarity, equivalence or
//! cross-recovery checks and prints a `key=value` report.
//!
//! Exit status: 0 success or pass, 1 check failed, 2 invalid input.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use crate::config::Experiment;
use crate::grid::{Lattice, Position, ProbabilityGrid};
use crate::label::Model;
use crate::state::{compare_operators, evolve, verify_unitary_on_window, Conjugated};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

pub const CSV_HEADER: &str = "x,y,position_kind,j,k,orientation,probability";

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Coined and scattering quantum walks on line, square and honeycomb lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve the configured walk and write probability grids.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides `steps` from the config.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Check unitarity, operator equivalence or cross-recovery.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        check: Check,
        /// Window radius for unitarity and equivalence.
        #[arg(long, default_value_t = 4)]
        window: i64,
        /// Defaults to 1e-12, or 1e-10 for cross-recovery.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Unitarity,
    Equivalence,
    CrossRecovery,
}

impl Check {
    pub fn as_str(self) -> &'static str {
        match self {
            Check::Unitarity => "unitarity",
            Check::Equivalence => "equivalence",
            Check::CrossRecovery => "cross-recovery",
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Check::CrossRecovery => 1e-10,
            _ => 1e-12,
        }
    }
}

/// Runs a parsed command, writing reports to `out`. Returns the exit status.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> u8 {
    let outcome = match &cli.command {
        Command::Run { config, out: dir, steps } => load(config, *steps).and_then(|e| run(&e, dir, out)).map(|_| true),
        Command::Verify { config, check, window, tol, steps } => {
            let tol = tol.unwrap_or(check.default_tol());
            if !(tol >= 0.0) || *window < 0 {
                eprintln!("error: --tol and --window must be nonnegative");
                return EXIT_INVALID;
            }
            load(config, *steps).and_then(|e| verify(&e, *check, *window, tol, out))
        }
    };
    match outcome {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(err) => {
            eprintln!("error: {err:#}");
            EXIT_INVALID
        }
    }
}

fn load(path: &Path, steps: Option<usize>) -> anyhow::Result<Experiment> {
    let mut experiment = Experiment::load(path)?;
    if let Some(n) = steps {
        experiment.steps = n;
    }
    Ok(experiment)
}

/// Grid rows in key order.
pub fn grid_csv(grid: &ProbabilityGrid, lattice: Lattice) -> String {
    let mut text = String::with_capacity(64 * (grid.len() + 1));
    text.push_str(CSV_HEADER);
    text.push('\n');
    for (position, p) in grid.iter() {
        let (x, y) = lattice.plot_point(position);
        let (kind, orientation) = match position {
            Position::Site { .. } => ("site", ""),
            Position::Bond { orientation, .. } => ("bond", orientation.as_str()),
        };
        let (j, k) = position.anchor();
        writeln!(text, "{x},{y},{kind},{j},{k},{orientation},{p}").expect("writing to a String");
    }
    text
}

/// Evolves the experiment and writes `native.csv`, `cross.csv` and
/// `metadata.txt` into `dir`.
pub fn run(experiment: &Experiment, dir: &Path, out: &mut dyn Write) -> anyhow::Result<()> {
    let start = Instant::now();
    let op = experiment.operator(experiment.model);
    let psi = evolve(&experiment.initial, op.as_ref(), experiment.steps)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let mut totals = Vec::new();
    for (wanted, name, grid) in [
        (experiment.output.native(), "native.csv", experiment.output.native().then(|| experiment.native_grid(&psi))),
        (experiment.output.cross(), "cross.csv", experiment.output.cross().then(|| experiment.cross_grid(&psi))),
    ] {
        if !wanted {
            continue;
        }
        let grid = grid.expect("computed when wanted")?;
        let path = dir.join(name);
        fs::write(&path, grid_csv(&grid, experiment.lattice)).with_context(|| format!("writing {}", path.display()))?;
        totals.push((name, grid.total()));
        written.push(path);
    }
    let elapsed = start.elapsed();

    let mut meta = String::new();
    writeln!(meta, "config_sha256={}", experiment.config_hash)?;
    writeln!(meta, "lattice={}", experiment.lattice)?;
    writeln!(meta, "model={}", experiment.model)?;
    writeln!(meta, "steps={}", experiment.steps)?;
    writeln!(meta, "norm={}", psi.norm_sq())?;
    writeln!(meta, "amplitudes={}", psi.len())?;
    for (name, total) in &totals {
        writeln!(meta, "total[{name}]={total}")?;
    }
    writeln!(meta, "runtime_ms={:.3}", elapsed.as_secs_f64() * 1e3)?;
    fs::write(dir.join("metadata.txt"), meta).context("writing metadata.txt")?;

    for path in written {
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(())
}

/// Runs `check` and prints its report. Returns whether it passed.
pub fn verify(experiment: &Experiment, check: Check, window: i64, tol: f64, out: &mut dyn Write) -> anyhow::Result<bool> {
    let mut report = vec![
        ("check".to_string(), check.as_str().to_string()),
        ("lattice".to_string(), experiment.lattice.to_string()),
        ("tol".to_string(), format!("{tol:e}")),
    ];
    let mut worst: f64 = 0.0;
    match check {
        Check::Unitarity => {
            report.push(("window".into(), window.to_string()));
            for model in [Model::Coined, Model::Scattering] {
                let op = experiment.operator(model);
                let r = verify_unitary_on_window(op.as_ref(), &experiment.window(model, window), tol);
                report.push((format!("{model}.labels_checked"), r.labels_checked.to_string()));
                report.push((format!("{model}.max_deviation"), format!("{:e}", r.max_deviation)));
                worst = worst.max(r.max_deviation);
            }
        }
        Check::Equivalence => {
            report.push(("window".into(), window.to_string()));
            let us = experiment.operator(Model::Scattering);
            let uc = experiment.operator(Model::Coined);
            let map = experiment.relabeling();
            let pulled = Conjugated { coined: uc.as_ref(), map: map.as_ref() };
            let cmp = compare_operators(us.as_ref(), &pulled, &experiment.window(Model::Scattering, window))?;
            report.push(("labels_checked".into(), cmp.labels_checked.to_string()));
            worst = cmp.max_deviation;
        }
        Check::CrossRecovery => {
            report.push(("steps".into(), experiment.steps.to_string()));
            let mut evolved = Vec::new();
            for model in [Model::Coined, Model::Scattering] {
                let op = experiment.operator(model);
                evolved.push(evolve(&experiment.initial_in(model)?, op.as_ref(), experiment.steps)?);
            }
            let (coined, scattering) = (&evolved[0], &evolved[1]);
            let site_diff = experiment.native_grid(coined)?.max_abs_diff(&experiment.cross_grid(scattering)?);
            let bond_diff = experiment.native_grid(scattering)?.max_abs_diff(&experiment.cross_grid(coined)?);
            report.push(("coined_vs_cross.max_deviation".into(), format!("{site_diff:e}")));
            report.push(("scattering_vs_cross.max_deviation".into(), format!("{bond_diff:e}")));
            worst = site_diff.max(bond_diff);
        }
    }
    let passed = worst <= tol;
    report.push(("max_deviation".into(), format!("{worst:e}")));
    report.push(("result".into(), if passed { "pass" } else { "fail" }.into()));
    for (key, value) in report {
        writeln!(out, "{key}={value}")?;
    }
    Ok(passed)
}
