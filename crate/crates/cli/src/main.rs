//! `liouville-fock`: verify the operator-space algebra, export dual bases,
//! and solve quadratic Lindblad models from JSON.
//!
//! Exit codes: 0 success, 1 numerical or physical failure, 2 input error.

mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use liouville_fock::bases::{build_dual_basis, max_safe_index, DualBasis};
use liouville_fock::fock::number_op;
use liouville_fock::lindblad::{
    assemble_liouvillean, expectation, min_eigenvalue, ness_of, superop_spectrum, SteadyState,
    NEAR_DEGENERATE_GAP,
};
use liouville_fock::supermaps::{canonical_maps, verify_algebra};
use liouville_fock::{Error, ModeSystem, Statistics, C64};
use serde_json::json;

use input::{InputError, ModelFile};
use report::{
    BasisResult, Expectation, Matrix, NessSection, Report, SpectrumSection, VerifyResult,
};

const SPECTRUM_HEAD: usize = 10;

#[derive(Parser)]
#[command(name = "liouville-fock", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the (anti)commutation relations, vacuum conditions, parity and
    /// dual-basis Gram matrix of the canonical adjoint maps.
    VerifyAlgebra(SystemArgs),
    /// Build the dual Fock basis and write kets, bras, Gram matrix and
    /// index list as JSON files.
    Basis {
        #[command(flatten)]
        system: SystemArgs,
        /// Largest per-slot index (defaults to the largest safe value).
        #[arg(long)]
        max_index: Option<usize>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Non-equilibrium steady state of a model file.
    Ness {
        /// Model JSON (or a report produced by this tool).
        model: PathBuf,
        /// JSON list of observables to evaluate in the steady state.
        #[arg(long)]
        observables: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full eigenvalue list of the generator of a model file.
    Spectrum {
        model: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct SystemArgs {
    #[arg(long, value_enum)]
    statistics: StatisticsArg,
    /// Number of modes.
    #[arg(long)]
    n: usize,
    /// Bosonic occupation cutoff.
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum StatisticsArg {
    Fermionic,
    Bosonic,
}

impl From<StatisticsArg> for Statistics {
    fn from(s: StatisticsArg) -> Self {
        match s {
            StatisticsArg::Fermionic => Statistics::Fermionic,
            StatisticsArg::Bosonic => Statistics::Bosonic,
        }
    }
}

impl SystemArgs {
    fn system(&self) -> Result<ModeSystem, Failure> {
        let stats = Statistics::from(self.statistics);
        if stats == Statistics::Fermionic && self.cutoff.is_some() {
            return Err(Failure::Input(
                "--cutoff applies only to bosonic systems".into(),
            ));
        }
        check_tolerance(self.tolerance)?;
        ModeSystem::new(stats, self.n, self.cutoff).map_err(Failure::from)
    }

    fn echo(&self) -> serde_json::Value {
        json!({
            "statistics": Statistics::from(self.statistics),
            "n": self.n,
            "cutoff": self.cutoff,
            "tolerance": self.tolerance,
        })
    }
}

enum Failure {
    /// Exit 2.
    Input(String),
    /// Exit 1.
    Numerical(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonQuadratic { .. } | Error::Degenerate { .. } | Error::Linalg(_) => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn check_tolerance(tol: f64) -> Result<(), Failure> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::Input(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn emit<R: serde::Serialize>(report: &Report<R>, out: Option<&Path>) -> Result<(), Failure> {
    report::write_or_print(&report::to_json(report), out).map_err(|e| match out {
        Some(p) => io_failure(p, e),
        None => Failure::Input(e.to_string()),
    })
}

fn verdict(passed: bool, what: impl FnOnce() -> String) -> Result<(), Failure> {
    if passed {
        Ok(())
    } else {
        Err(Failure::Numerical(what()))
    }
}

fn cmd_verify_algebra(args: &SystemArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let sys = args.system()?;
    let fam = canonical_maps(&sys)?;
    let algebra = verify_algebra(&fam);
    let max_index = max_safe_index(&sys);
    let basis = build_dual_basis(&fam, max_index)?;
    let gram_deviation = basis.gram_deviation();
    let max_residual = algebra.max_residual();
    let passed = max_residual <= args.tolerance && gram_deviation <= args.tolerance;
    let echo = args.echo();
    let result = VerifyResult {
        statistics: sys.statistics(),
        n_modes: sys.n_modes(),
        cutoff: sys.cutoff(),
        tolerance: args.tolerance,
        passed,
        max_residual,
        basis_max_index: max_index,
        basis_size: basis.len(),
        gram_deviation,
        algebra,
    };
    let input = echo.to_string();
    emit(
        &Report::new(
            "verify-algebra",
            echo,
            input.as_bytes(),
            started,
            None,
            result,
        ),
        None,
    )?;
    verdict(passed, || {
        format!(
            "residuals exceed tolerance {:e}: algebra {max_residual:e}, Gram {gram_deviation:e}",
            args.tolerance
        )
    })
}

fn mat_rows(m: faer::MatRef<'_, C64>) -> Matrix {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<String, Failure> {
    let path = dir.join(name);
    std::fs::write(&path, report::to_json(value)).map_err(|e| io_failure(&path, e))?;
    Ok(path.display().to_string())
}

fn write_basis(dir: &Path, basis: &DualBasis) -> Result<Vec<String>, Failure> {
    std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let kets = basis.kets();
    let ket_list: Vec<Vec<C64>> = (0..kets.ncols())
        .map(|c| (0..kets.nrows()).map(|r| kets[(r, c)]).collect())
        .collect();
    let indices: Vec<_> = basis
        .indices()
        .iter()
        .enumerate()
        .map(|(i, m)| json!({ "position": i, "index": m.as_slice() }))
        .collect();
    Ok(vec![
        write_json(dir, "kets.json", &ket_list)?,
        write_json(dir, "bras.json", &mat_rows(basis.bras().as_ref()))?,
        write_json(dir, "gram.json", &mat_rows(basis.gram().as_ref()))?,
        write_json(dir, "indices.json", &indices)?,
    ])
}

fn cmd_basis(args: &SystemArgs, max_index: Option<usize>, out: &Path) -> Result<(), Failure> {
    let started = Instant::now();
    let sys = args.system()?;
    let fam = canonical_maps(&sys)?;
    let max_index = max_index.unwrap_or_else(|| max_safe_index(&sys));
    let basis = build_dual_basis(&fam, max_index)?;
    let gram_deviation = basis.gram_deviation();
    let passed = gram_deviation <= args.tolerance;
    let files = write_basis(out, &basis)?;
    let mut echo = args.echo();
    echo["max_index"] = json!(max_index);
    echo["out"] = json!(out.display().to_string());
    let result = BasisResult {
        statistics: sys.statistics(),
        n_modes: sys.n_modes(),
        cutoff: sys.cutoff(),
        max_index,
        size: basis.len(),
        tolerance: args.tolerance,
        passed,
        gram_deviation,
        min_ket_singular_value: basis.min_ket_singular_value()?,
        files,
    };
    let input = echo.to_string();
    emit(
        &Report::new("basis", echo, input.as_bytes(), started, None, result),
        None,
    )?;
    verdict(passed, || {
        format!(
            "Gram deviation {gram_deviation:e} exceeds tolerance {:e}",
            args.tolerance
        )
    })
}

fn load_model(path: &Path) -> Result<(Vec<u8>, ModelFile), Failure> {
    let bytes = input::read_file(path)?;
    let file = input::parse_model(path, &bytes)?;
    Ok((bytes, file))
}

fn cmd_ness(
    model_path: &Path,
    observables: Option<&Path>,
    tolerance: f64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let started = Instant::now();
    check_tolerance(tolerance)?;
    let (mut bytes, file) = load_model(model_path)?;
    let model = file.to_model()?;
    let sys = *model.system();
    let specs = match observables {
        Some(p) => {
            let raw = input::read_file(p)?;
            let specs = input::parse_observables(p, &raw)?;
            bytes.extend_from_slice(&raw);
            specs
        }
        None => Vec::new(),
    };
    let ops = specs
        .iter()
        .map(|s| s.build(&sys))
        .collect::<Result<Vec<_>, _>>()?;

    let res = ness_of(&assemble_liouvillean(&model))?;
    let head: Vec<C64> = res
        .eigenvalues
        .iter()
        .take(SPECTRUM_HEAD)
        .copied()
        .collect();
    let mut section = NessSection {
        null_dim: res.null_dim,
        degenerate: res.is_degenerate(),
        spectral_gap: res.spectral_gap,
        near_degenerate: res.near_degenerate,
        residual: res.residual,
        tolerance,
        passed: false,
        trace: None,
        hermiticity_deviation: None,
        min_eigenvalue: None,
        rho_ness: None,
        null_basis: None,
        occupations: Vec::new(),
        expectations: Vec::new(),
        spectrum_head: head,
    };
    let failure = match &res.steady_state {
        SteadyState::Unique(rho) => {
            section.trace = Some(rho.trace());
            section.hermiticity_deviation = Some(rho.hermiticity_deviation());
            section.min_eigenvalue = Some(min_eigenvalue(rho)?);
            section.rho_ness = Some(rho.rows());
            section.occupations = (1..=sys.n_modes())
                .map(|j| expectation(&number_op(&sys, j)?, &res))
                .collect::<Result<_, _>>()?;
            section.expectations = specs
                .iter()
                .zip(&ops)
                .map(|(s, a)| {
                    Ok(Expectation {
                        name: s.name().to_owned(),
                        value: expectation(a, &res)?,
                    })
                })
                .collect::<Result<_, Error>>()?;
            (res.residual > tolerance).then(|| {
                format!(
                    "steady-state residual {:e} exceeds tolerance {tolerance:e}",
                    res.residual
                )
            })
        }
        SteadyState::Degenerate(basis) => {
            section.null_basis = Some(basis.iter().map(|b| b.rows()).collect());
            Some(format!(
                "degenerate steady state: null_dim = {} (null-space basis in report)",
                res.null_dim
            ))
        }
    };
    section.passed = failure.is_none();
    let echo = json!({
        "model": model_path.display().to_string(),
        "observables": observables.map(|p| p.display().to_string()),
        "tolerance": tolerance,
    });
    emit(
        &Report::new("ness", echo, &bytes, started, Some(file), section),
        out,
    )?;
    match failure {
        Some(msg) => Err(Failure::Numerical(msg)),
        None => Ok(()),
    }
}

fn cmd_spectrum(model_path: &Path, tolerance: f64, out: Option<&Path>) -> Result<(), Failure> {
    let started = Instant::now();
    check_tolerance(tolerance)?;
    let (bytes, file) = load_model(model_path)?;
    let model = file.to_model()?;
    let eigenvalues = superop_spectrum(&assemble_liouvillean(&model))?;
    let max_real_part = eigenvalues
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let dissipative = max_real_part <= tolerance;
    let section = SpectrumSection {
        dimension: eigenvalues.len(),
        zero_modes: eigenvalues
            .iter()
            .filter(|z| z.norm() < NEAR_DEGENERATE_GAP)
            .count(),
        max_real_part,
        tolerance,
        dissipative,
        eigenvalues,
    };
    let echo = json!({
        "model": model_path.display().to_string(),
        "tolerance": tolerance,
    });
    emit(
        &Report::new("spectrum", echo, &bytes, started, Some(file), section),
        out,
    )?;
    verdict(dissipative, || {
        format!("eigenvalue with real part {max_real_part:e} above tolerance {tolerance:e}")
    })
}

fn configure_threads() -> Result<(), Failure> {
    match std::env::var("LIOUVILLE_FOCK_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| {
                Failure::Input(format!(
                    "LIOUVILLE_FOCK_THREADS must be a positive integer, got {v:?}"
                ))
            })?;
            liouville_fock::configure_threads(Some(n));
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match &cli.command {
        Command::VerifyAlgebra(args) => cmd_verify_algebra(args),
        Command::Basis {
            system,
            max_index,
            out,
        } => cmd_basis(system, *max_index, out),
        Command::Ness {
            model,
            observables,
            tolerance,
            out,
        } => cmd_ness(model, observables.as_deref(), *tolerance, out.as_deref()),
        Command::Spectrum {
            model,
            tolerance,
            out,
        } => cmd_spectrum(model, *tolerance, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
