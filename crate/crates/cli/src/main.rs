//! `twoterm` command-line front end.

mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use twoterm::spectrum::angular_label;
use twoterm::verify::{self, Fault, VerifyOptions};
use twoterm::wavefunction::NormSource;
use twoterm::{dirac_pair, kg_wavefunction, solve_level, Angular, Component, Error, QuantumNumbers};

use crate::config::{Equation, Format, RunConfig, WavefunctionBlock};
use crate::output::{LevelRecord, SweepRecord, WavefunctionRow, WavefunctionTable};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solver diagnostic: {0}")]
    Solver(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("output error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Solver(_) => 2,
            CliError::Verify(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "twoterm", version, about = "Bound states of the two-term exponential potential")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    equation: Option<Equation>,
    /// Root tolerance in units of m0 c^2.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Energies and coefficients for every requested level.
    Solve,
    /// Tabulate one normalized radial function.
    Wavefunction {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, conflicts_with = "kappa")]
        ell: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<i32>,
        #[arg(long)]
        r_min: Option<f64>,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Run the acceptance suite.
    Verify {
        /// Comma-separated criterion ids (all when absent).
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u8>>,
        /// Solve the analytic spectrum on the wrong branch of D.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Solve every level for each value of one potential parameter.
    Sweep,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twoterm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(eq) = cli.equation {
        config.equation = eq;
        if cli.config.is_none() && eq == Equation::Dirac {
            config.quantum.ell = None;
            config.quantum.kappa = Some(vec![1, -1, 2]);
        }
    }
    if let Some(tol) = cli.tol {
        config.solver.tol = tol;
    }
    if let Some(format) = cli.format {
        config.output.format = Some(format);
    }
    if let Some(out) = &cli.out {
        config.output.path = Some(out.clone());
    }
    Ok(config)
}

fn sink(config: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    match &config.output.path {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = load_config(&cli)?;
    match cli.command {
        Command::Solve => {
            config.validate()?;
            let records = solve_records(&config)?;
            let format = config.output.format.unwrap_or_default();
            output::write_levels(sink(&config)?, format, &records)?;
            check_statuses(records.iter())
        }
        Command::Sweep => {
            config.validate()?;
            let sweep = config.sweep.clone().ok_or_else(|| CliError::Config("sweep needs a [sweep] section".into()))?;
            if sweep.values.is_empty() {
                return Err(CliError::Config("sweep.values must not be empty".into()));
            }
            let mut records = Vec::new();
            for &value in &sweep.values {
                let point = config.with_parameter(&sweep.parameter, value)?;
                point.validate()?;
                for level in solve_records(&point)? {
                    records.push(SweepRecord { parameter: sweep.parameter.clone(), value, level });
                }
            }
            let format = config.output.format.unwrap_or_default();
            output::write_sweep(sink(&config)?, format, &records)?;
            check_statuses(records.iter().map(|r| &r.level))
        }
        Command::Wavefunction { n, ell, kappa, r_min, r_max, points } => {
            config.validate()?;
            let mut block = config.wavefunction.clone().unwrap_or_default();
            block.n = n.unwrap_or(block.n);
            if ell.is_some() {
                block.ell = ell;
                block.kappa = None;
            }
            if kappa.is_some() {
                block.kappa = kappa;
                block.ell = None;
            }
            block.r_min = r_min.unwrap_or(block.r_min);
            block.r_max = r_max.unwrap_or(block.r_max);
            block.points = points.unwrap_or(block.points);
            let table = wavefunction_table(&config, &block)?;
            let format = config.output.format.unwrap_or_default();
            output::write_wavefunction(sink(&config)?, format, &table)
        }
        Command::Verify { criteria, inject_fault } => {
            let options = VerifyOptions {
                fault: inject_fault.then_some(Fault::NegativeDBranch),
                criteria: criteria.unwrap_or_else(|| config.verify.criteria.clone()),
            };
            if let Some(bad) = options.criteria.iter().find(|&&id| verify::criterion_name(id).is_none()) {
                return Err(CliError::Config(format!("unknown criterion {bad}; valid ids are 1-9")));
            }
            let report = verify::run(&options);
            for outcome in &report.outcomes {
                eprintln!("{}", outcome.summary_line());
            }
            let format = config.output.format.unwrap_or_default();
            output::write_report(sink(&config)?, format, &report)?;
            let failed: Vec<String> = report.failed().map(|o| format!("criterion {} ({})", o.id, o.name)).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verify(failed.join(", ")))
            }
        }
    }
}

fn component_label(q: &QuantumNumbers) -> &'static str {
    match q.angular {
        Angular::Orbital { .. } => "none",
        Angular::SpinOrbit { component: Component::Upper, .. } => "upper",
        Angular::SpinOrbit { component: Component::Lower, .. } => "lower",
    }
}

fn status_of(err: &Error) -> &'static str {
    match err {
        Error::NoBoundState => "no_bound_state",
        Error::MultipleRoots { .. } => "multiple_roots",
        Error::InvalidCoefficients { .. } => "invalid_coefficients",
        Error::NonConvergence(_) => "non_convergence",
        _ => "error",
    }
}

fn solve_records(config: &RunConfig) -> Result<Vec<LevelRecord>, CliError> {
    let spec = config.potential_spec()?;
    let units = config.units()?;
    let solver = config.solver_config()?;
    let levels = config.levels()?;
    Ok(levels
        .par_iter()
        .map(|q| {
            let base = LevelRecord {
                n: q.n,
                ell_or_kappa: angular_label(q),
                component: component_label(q).to_string(),
                energy: None,
                residual: None,
                a1: None,
                a2: None,
                a3sq: None,
                d: None,
                status: String::new(),
            };
            match solve_level(&spec, &units, q, &solver) {
                Ok(level) => LevelRecord {
                    energy: Some(level.energy),
                    residual: Some(level.residual),
                    a1: Some(level.coeffs.a1),
                    a2: Some(level.coeffs.a2),
                    a3sq: Some(level.coeffs.a3sq),
                    d: Some(level.coeffs.d),
                    status: "ok".into(),
                    ..base
                },
                Err(e) => LevelRecord { status: status_of(&e).into(), ..base },
            }
        })
        .collect())
}

fn check_statuses<'a>(records: impl Iterator<Item = &'a LevelRecord>) -> Result<(), CliError> {
    let bad: Vec<String> = records
        .filter(|r| r.status != "ok" && r.status != "no_bound_state")
        .map(|r| format!("n={} ell_or_kappa={}: {}", r.n, r.ell_or_kappa, r.status))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Solver(bad.join("; ")))
    }
}

fn wavefunction_table(config: &RunConfig, block: &WavefunctionBlock) -> Result<WavefunctionTable, CliError> {
    if !(block.r_min > 0.0 && block.r_max >= block.r_min && block.r_max.is_finite()) {
        return Err(CliError::Config(format!(
            "need 0 < r_min <= r_max, got r_min={}, r_max={}",
            block.r_min, block.r_max
        )));
    }
    if block.points == 0 {
        return Err(CliError::Config("wavefunction.points must be >= 1".into()));
    }
    let angular = match (config.equation, block.ell, block.kappa) {
        (Equation::Kg, Some(ell), _) => i64::from(ell),
        (Equation::Kg, None, None) => 0,
        (Equation::Dirac, _, Some(kappa)) => i64::from(kappa),
        (Equation::Dirac, None, None) => -1,
        (Equation::Kg, None, Some(_)) => {
            return Err(CliError::Config("kappa selects a Dirac level; use --equation dirac".into()))
        }
        (Equation::Dirac, Some(_), None) => {
            return Err(CliError::Config("ell selects a Klein-Gordon level; use --equation kg or --kappa".into()))
        }
    };
    let q = config.quantum_numbers(block.n, angular)?;
    if matches!(q.angular, Angular::SpinOrbit { component: Component::Lower, .. }) {
        return Err(CliError::Config(
            "wavefunction tables are built from the upper component; set quantum.component = \"upper\"".into(),
        ));
    }
    let spec = config.potential_spec()?;
    let units = config.units()?;
    let level = solve_level(&spec, &units, &q, &config.solver_config()?)
        .map_err(|e| CliError::Solver(format!("n={} ell_or_kappa={angular}: {e}", block.n)))?;
    let solver_err = |e: Error| CliError::Solver(e.to_string());

    let grid: Vec<f64> = if block.points == 1 {
        vec![block.r_min]
    } else {
        (0..block.points)
            .map(|k| block.r_min + (block.r_max - block.r_min) * k as f64 / (block.points - 1) as f64)
            .collect()
    };
    let (rows, norm_fn) = match config.equation {
        Equation::Kg => {
            let u = kg_wavefunction(&spec, &units, &level).map_err(solver_err)?;
            let values = u.evaluate_on_grid(&grid).map_err(solver_err)?;
            let rows = grid
                .iter()
                .zip(values)
                .map(|(&r, v)| WavefunctionRow { r, z: u.z_of(r), u: Some(v), f: None, g: None })
                .collect();
            (rows, u)
        }
        Equation::Dirac => {
            let (f, g) = dirac_pair(&spec, &units, &level, block.joint_norm).map_err(solver_err)?;
            let fv = f.evaluate_on_grid(&grid).map_err(solver_err)?;
            let gv = g.evaluate_on_grid(&grid).map_err(solver_err)?;
            let rows = grid
                .iter()
                .zip(fv.into_iter().zip(gv))
                .map(|(&r, (fr, gr))| WavefunctionRow { r, z: f.z_of(r), u: None, f: Some(fr), g: Some(gr) })
                .collect();
            (rows, f)
        }
    };
    Ok(WavefunctionTable {
        n: q.n,
        ell_or_kappa: angular,
        component: component_label(&q).into(),
        norm: norm_fn.norm(),
        norm_source: match norm_fn.norm_source() {
            NormSource::ClosedForm => "closed_form".into(),
            NormSource::Numerical => "numerical".into(),
        },
        a1: norm_fn.a1(),
        d: norm_fn.d(),
        energy: level.energy,
        rows,
    })
}
