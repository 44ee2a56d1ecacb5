//! Command-line front end for block output-feedback gain synthesis.
//!
//! Exit codes: 0 success, 2 rank or solvability failure, 3 input or schema
//! error, 4 numeric failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use blockgain::assignment::{
    amca_solvable, char_poly, solve_gain_with_method, MethodChoice,
};
use blockgain::error::Error;
use blockgain::formats::{
    matrix_from_data, matrix_to_data, GainFile, JsonScalar, OdeFile, ResultFile, SystemFile,
    TargetsFile,
};
use blockgain::reduction::hessenberg_to_frobenius;
use blockgain::scalar::{Rational, Scalar};
use blockgain::solvents::{assign_solvents, SolventSet};
use blockgain::system::{
    frobenius_coefficients, frobenius_from_coeffs, ode_to_state_space, BlockSystem, Form,
};

#[derive(Parser)]
#[command(
    name = "blockgain",
    about = "Static output-feedback gains assigning block characteristic matrix polynomial coefficients",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum MethodArg {
    #[default]
    Auto,
    General,
    ScalarH,
    ScalarFg,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::General => MethodChoice::General,
            MethodArg::ScalarH => MethodChoice::ScalarH,
            MethodArg::ScalarFg => MethodChoice::ScalarFg,
        }
    }
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Use exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    /// Residual and rank tolerance (defaults to 1e-9, or 0 with --exact).
    #[arg(long)]
    tol: Option<f64>,
    /// Write the result document here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Rank-based solvability test for arbitrary coefficient assignment.
    Check {
        system: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Synthesize a gain realizing prescribed coefficient blocks.
    Assign {
        system: PathBuf,
        /// Targets file with the key "gammas".
        #[arg(long)]
        targets: PathBuf,
        /// Synthesis path.
        #[arg(long, value_enum, default_value_t)]
        method: MethodArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Synthesize a gain placing a complete set of left solvents.
    AssignSolvents {
        system: PathBuf,
        /// Targets file with the key "solvents".
        #[arg(long)]
        targets: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reduce the state matrix to block companion form.
    Reduce {
        system: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check a gain against prescribed coefficient blocks.
    Verify {
        system: PathBuf,
        /// Gain file with the key "Q".
        #[arg(long)]
        gain: PathBuf,
        /// Targets file with the key "gammas".
        #[arg(long)]
        targets: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Convert a higher-order ODE system to companion state-space form.
    Ode2ss {
        ode: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Failure carrying the process exit code.
struct CmdError {
    code: u8,
    message: String,
}

type CmdResult<T> = std::result::Result<T, CmdError>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Dimension(_) | Error::Validation(_) | Error::SingularBlock { .. }
        | Error::Solvents(_) => 3,
        Error::RankDeficient { .. } => 2,
        Error::Unsolvable { .. } | Error::Numeric(_) => 4,
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        CmdError { code: exit_code(&e), message: e.to_string() }
    }
}

fn schema_err(message: String) -> CmdError {
    CmdError { code: 3, message }
}

fn read_json<D: serde::de::DeserializeOwned>(path: &Path, what: &str) -> CmdResult<D> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| schema_err(format!("cannot read {what} file {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| schema_err(format!("malformed {what} file {}: {e}", path.display())))
}

fn load_system<T: JsonScalar>(path: &Path, tol: f64) -> CmdResult<BlockSystem<T>> {
    let file: SystemFile = read_json(path, "system")?;
    let sys = file.into_system::<T>()?;
    let violations = sys.validate(tol);
    if let Some(v) = violations.first() {
        return Err(schema_err(format!(
            "system violates the declared {} form: {} ({} violations)",
            sys.form,
            v,
            violations.len()
        )));
    }
    Ok(sys)
}

fn emit(result: &ResultFile, output: Option<&Path>) -> CmdResult<()> {
    let text = serde_json::to_string_pretty(result)
        .map_err(|e| schema_err(format!("serialization failed: {e}")))?;
    write_out(&text, output)
}

fn write_out(text: &str, output: Option<&Path>) -> CmdResult<()> {
    match output {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| schema_err(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_check<T: JsonScalar>(system: &Path, common: &CommonArgs, tol: f64) -> CmdResult<u8> {
    let sys = load_system::<T>(system, tol)?;
    let solvability = amca_solvable(&sys, tol)?;
    eprintln!(
        "{}: rank {} of required {}, precheck mk >= n {}",
        if solvability.solvable { "solvable" } else { "not solvable" },
        solvability.rank,
        solvability.required,
        if solvability.precheck_mk_ge_n { "holds" } else { "fails" },
    );
    let result = ResultFile {
        solvable: Some(solvability.solvable),
        rank: Some(solvability.rank),
        required_rank: Some(solvability.required),
        precheck_mk_ge_n: Some(solvability.precheck_mk_ge_n),
        ..Default::default()
    };
    emit(&result, common.output.as_deref())?;
    Ok(if solvability.solvable { 0 } else { 2 })
}

fn cmd_assign<T: JsonScalar>(
    system: &Path,
    targets: &Path,
    method: MethodArg,
    common: &CommonArgs,
    tol: f64,
) -> CmdResult<u8> {
    let sys = load_system::<T>(system, tol)?;
    let targets_file: TargetsFile = read_json(targets, "targets")?;
    let targets = targets_file.into_targets::<T>(sys.n, sys.s)?;
    let solvability = amca_solvable(&sys, tol)?;
    match solve_gain_with_method(&sys, &targets, method.into(), tol) {
        Ok(assignment) => {
            let mut diagnostics = Vec::new();
            if !solvability.solvable {
                diagnostics.push(
                    "rank test failed but the targets are attainable; the rank condition is sufficient, not necessary"
                        .into(),
                );
            }
            let result = ResultFile {
                solvable: Some(solvability.solvable),
                rank: Some(solvability.rank),
                required_rank: Some(solvability.required),
                q: Some(matrix_to_data(&assignment.q.mat)),
                s: Some(matrix_to_data(&assignment.s.mat)),
                phi: Some(matrix_to_data(&assignment.phi.mat)),
                residual_solve: Some(assignment.residual_solve),
                residual_similarity: Some(assignment.residual_similarity),
                method: Some(assignment.method.to_string()),
                diagnostics,
                ..Default::default()
            };
            emit(&result, common.output.as_deref())?;
            Ok(0)
        }
        Err(Error::Unsolvable { residual }) if !solvability.solvable => {
            let result = ResultFile {
                solvable: Some(false),
                rank: Some(solvability.rank),
                required_rank: Some(solvability.required),
                residual_solve: Some(residual),
                diagnostics: vec![
                    "rank test failed and no residual-consistent solution exists; test inconclusive"
                        .into(),
                ],
                ..Default::default()
            };
            emit(&result, common.output.as_deref())?;
            Err(CmdError {
                code: 2,
                message: format!(
                    "test inconclusive: rank {} below required {} and least-norm residual {residual:e} exceeds the tolerance",
                    solvability.rank, solvability.required
                ),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_assign_solvents<T: JsonScalar>(
    system: &Path,
    targets: &Path,
    common: &CommonArgs,
    tol: f64,
) -> CmdResult<u8> {
    let sys = load_system::<T>(system, tol)?;
    let targets_file: TargetsFile = read_json(targets, "targets")?;
    let solvent_list = targets_file.into_solvents::<T>(sys.n, sys.s)?;
    let set = SolventSet::new(solvent_list)?;
    let (assignment, gammas, residuals) = assign_solvents(&sys, &set, tol)?;
    let result = ResultFile {
        solvable: Some(true),
        rank: Some(assignment.rank_solvability),
        required_rank: Some(sys.n * sys.s * sys.s),
        q: Some(matrix_to_data(&assignment.q.mat)),
        s: Some(matrix_to_data(&assignment.s.mat)),
        phi: Some(matrix_to_data(&assignment.phi.mat)),
        gammas: Some(gammas.gammas.iter().map(matrix_to_data).collect()),
        residual_solve: Some(assignment.residual_solve),
        residual_similarity: Some(assignment.residual_similarity),
        solvent_residuals: Some(residuals),
        method: Some(assignment.method.to_string()),
        ..Default::default()
    };
    emit(&result, common.output.as_deref())?;
    Ok(0)
}

fn cmd_reduce<T: JsonScalar>(system: &Path, common: &CommonArgs, tol: f64) -> CmdResult<u8> {
    let sys = load_system::<T>(system, tol)?;
    if sys.form == Form::General {
        return Err(schema_err("reduction requires a hessenberg or frobenius system".into()));
    }
    let reduction = hessenberg_to_frobenius(&sys.f, tol)?;
    let result = ResultFile {
        s: Some(matrix_to_data(&reduction.s.mat)),
        phi: Some(matrix_to_data(&reduction.phi.mat)),
        residual_similarity: Some(reduction.residual),
        ..Default::default()
    };
    emit(&result, common.output.as_deref())?;
    Ok(0)
}

fn cmd_verify<T: JsonScalar>(
    system: &Path,
    gain: &Path,
    targets: &Path,
    common: &CommonArgs,
    tol: f64,
) -> CmdResult<u8> {
    let sys = load_system::<T>(system, tol)?;
    let gain_file: GainFile = read_json(gain, "gain")?;
    let q_mat = matrix_from_data::<T>(&gain_file.q, sys.m * sys.s, sys.k * sys.s, "Q")?;
    let q = blockgain::blockmat::BlockMatrix::new(q_mat, sys.s)?;
    let targets_file: TargetsFile = read_json(targets, "targets")?;
    let targets = targets_file.into_targets::<T>(sys.n, sys.s)?;
    let phi = frobenius_from_coeffs(&targets);

    // Reduce the closed loop back to companion form and compare its last
    // block row against the prescribed coefficients.
    let closed = sys.closed_loop(&q)?;
    let mut diagnostics = Vec::new();
    let (ok, residual) = match hessenberg_to_frobenius(&closed, tol) {
        Ok(reduction) => {
            let realized = frobenius_coefficients(&reduction.phi);
            let deviation = realized
                .iter()
                .zip(&targets.gammas)
                .map(|(a, b)| a.sub(b).max_norm())
                .fold(reduction.residual, f64::max);
            (deviation <= tol, deviation)
        }
        Err(e) => {
            diagnostics.push(format!("closed loop is not reducible: {e}"));
            (false, f64::INFINITY)
        }
    };
    let cp_closed = char_poly(&closed);
    let cp_phi = char_poly(&phi);
    let cp_deviation = cp_closed
        .iter()
        .zip(&cp_phi)
        .map(|(a, b)| a.sub(b).magnitude())
        .fold(0.0, f64::max);
    diagnostics.push(format!(
        "characteristic polynomials of the closed loop and the target companion matrix {} (deviation {cp_deviation:e})",
        if cp_deviation <= tol { "agree" } else { "disagree" }
    ));
    eprintln!(
        "{}: residual {residual:e}",
        if ok { "ok" } else { "gain does not realize the targets" }
    );
    let result = ResultFile {
        ok: Some(ok),
        residual_similarity: Some(if residual.is_finite() { residual } else { f64::MAX }),
        diagnostics,
        ..Default::default()
    };
    emit(&result, common.output.as_deref())?;
    Ok(if ok { 0 } else { 4 })
}

fn cmd_ode2ss<T: JsonScalar>(ode: &Path, common: &CommonArgs) -> CmdResult<u8> {
    let file: OdeFile = read_json(ode, "ode")?;
    let ode = file.into_ode::<T>()?;
    let sys = ode_to_state_space(&ode)?;
    let out = SystemFile::from_system(&sys);
    let text = serde_json::to_string_pretty(&out)
        .map_err(|e| schema_err(format!("serialization failed: {e}")))?;
    write_out(&text, common.output.as_deref())?;
    Ok(0)
}

fn dispatch<T: JsonScalar>(cli: &Cli, tol: f64) -> CmdResult<u8> {
    match &cli.command {
        Command::Check { system, common } => cmd_check::<T>(system, common, tol),
        Command::Assign { system, targets, method, common } => {
            cmd_assign::<T>(system, targets, *method, common, tol)
        }
        Command::AssignSolvents { system, targets, common } => {
            cmd_assign_solvents::<T>(system, targets, common, tol)
        }
        Command::Reduce { system, common } => cmd_reduce::<T>(system, common, tol),
        Command::Verify { system, gain, targets, common } => {
            cmd_verify::<T>(system, gain, targets, common, tol)
        }
        Command::Ode2ss { ode, common } => cmd_ode2ss::<T>(ode, common),
    }
}

fn common_args(cli: &Cli) -> &CommonArgs {
    match &cli.command {
        Command::Check { common, .. }
        | Command::Assign { common, .. }
        | Command::AssignSolvents { common, .. }
        | Command::Reduce { common, .. }
        | Command::Verify { common, .. }
        | Command::Ode2ss { common, .. } => common,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = common_args(&cli);
    let exact = common.exact;
    let tol = common.tol.unwrap_or_else(|| {
        if exact { Rational::default_tol() } else { f64::default_tol() }
    });
    let outcome = if exact {
        dispatch::<Rational>(&cli, tol)
    } else {
        dispatch::<f64>(&cli, tol)
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
