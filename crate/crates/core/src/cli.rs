//! Command-line surface. A thin layer over the library: read records,
//! run one operation, print a single JSON document, and map the outcome to
//! an exit code: 0 success, 2 infeasibility / pathology / failed check,
//! 3 solver gave up, 4 bad input.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use serde::Serialize;

use crate::cones::Point;
use crate::diagnosis::{classify, classify_with_base, Diagnosis, GapCase, TriState};
use crate::error::{Error, Result};
use crate::fileio::{self, Record};
use crate::game::verify_equilibrium;
use crate::instances::{gap_instance, matrix_game, sdp_game, GapVariant, PolyGame};
use crate::reduction::{build_shifted_pair, choose_params, solve_game, ReductionParams};
use crate::solver::{solve_pair, SolveOptions, Status};

#[derive(Parser)]
#[command(
    name = "conic-games",
    version,
    about = "Solve cone-based zero-sum games and diagnose conic program pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonFlags {
    /// Solver feasibility and gap tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Iteration cap for each interior-point solve.
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Write the JSON result to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print per-iteration solver progress to stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game record for its value and optimal strategies.
    Solve {
        #[arg(long)]
        game: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Solve a conic pair record and report both objectives.
    SolvePair {
        #[arg(long)]
        pair: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Classify a pair's strict feasibility and duality-gap risk.
    Diagnose {
        #[arg(long)]
        pair: PathBuf,
        /// Base functional for the first cone (JSON array file); defaults
        /// to the canonical interior point.
        #[arg(long)]
        alpha: Option<PathBuf>,
        /// Base functional for the second cone (JSON array file).
        #[arg(long)]
        beta: Option<PathBuf>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Check a claimed equilibrium of a game record.
    Verify {
        #[arg(long)]
        game: PathBuf,
        /// First player's strategy (JSON array file).
        #[arg(long)]
        x: PathBuf,
        /// Second player's strategy (JSON array file).
        #[arg(long)]
        y: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Emit the shifted conic pair a game reduces to.
    Reduce {
        #[arg(long)]
        game: PathBuf,
        /// Payoff scaling; must be positive.
        #[arg(long)]
        lambda: Option<f64>,
        /// Payoff shift; must exceed one half after scaling.
        #[arg(long)]
        kappa: Option<f64>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Construct a bundled instance family and emit its record.
    Instance {
        /// One of: matrix, sdp, polynomial, gap.
        #[arg(long)]
        family: String,
        /// Family parameter as key=value; values are JSON except names.
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[command(flatten)]
        flags: CommonFlags,
    },
}

#[derive(Serialize)]
struct SolveOut {
    value: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    lambda: f64,
    kappa: f64,
    pair_values: (f64, f64),
    residual_i: f64,
    residual_ii: f64,
}

#[derive(Serialize)]
struct PairOut {
    status: &'static str,
    primal_objective: f64,
    dual_objective: f64,
    gap: f64,
    iterations: usize,
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Serialize)]
struct VerifyOut {
    value: f64,
    residual_i: f64,
    residual_ii: f64,
    ok: bool,
}

#[derive(Serialize)]
struct DiagnosisOut {
    game_value: f64,
    case: GapCase,
    strict_p: TriState,
    strict_d: TriState,
    #[serde(skip_serializing_if = "Option::is_none")]
    bi_meets_cperp: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bii_meets_bperp: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    strict_witness_p: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    strict_witness_d: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimal_x: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimal_y: Option<Vec<f64>>,
    zero_gap_certified: bool,
}

impl DiagnosisOut {
    fn from(d: &Diagnosis) -> DiagnosisOut {
        let flat = |p: &Option<Point>| p.as_ref().map(|v| v.as_slice().to_vec());
        DiagnosisOut {
            game_value: d.game_value,
            case: d.case,
            strict_p: d.strict_p,
            strict_d: d.strict_d,
            bi_meets_cperp: d.bi_meets_cperp,
            bii_meets_bperp: d.bii_meets_bperp,
            strict_witness_p: flat(&d.strict_witness_p),
            strict_witness_d: flat(&d.strict_witness_d),
            optimal_x: flat(&d.optimal_x),
            optimal_y: flat(&d.optimal_y),
            zero_gap_certified: d.zero_gap_certified,
        }
    }
}

fn options(flags: &CommonFlags) -> SolveOptions {
    SolveOptions {
        feas_tol: flags.tol,
        gap_tol: flags.tol,
        max_iter: flags.max_iter,
        verbose: flags.verbose,
    }
}

fn emit<T: Serialize>(flags: &CommonFlags, value: &T) -> Result<()> {
    let text = serde_json::to_string(value).map_err(|e| Error::Parse(e.to_string()))?;
    match &flags.out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_record(flags: &CommonFlags, record: &Record) -> Result<()> {
    match &flags.out {
        Some(path) => fileio::write_record(path, record),
        None => {
            println!("{}", fileio::serialize_record(record));
            Ok(())
        }
    }
}

fn status_name(status: Status) -> &'static str {
    match status {
        Status::Optimal => "optimal",
        Status::PrimalInfeasible => "primal_infeasible",
        Status::DualInfeasible => "dual_infeasible",
        Status::Unknown => "unknown",
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_)
        | Error::Parse(_)
        | Error::DimensionMismatch { .. }
        | Error::NotSymmetric { .. }
        | Error::NotTriangularLength { .. }
        | Error::InvalidCone { .. }
        | Error::InvalidParam { .. } => 4,
        Error::NotAStrategy { .. }
        | Error::InfeasiblePoint { .. }
        | Error::EquilibriumCheck { .. } => 2,
        Error::SolverFailure { .. }
        | Error::EscalationExhausted { .. }
        | Error::ValueNearZero { .. } => 3,
    }
}

fn param_map(params: &[String]) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::param("param", format!("expected key=value, got {p:?}")))?;
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::param("param", format!("duplicate key {k:?}")));
        }
    }
    Ok(map)
}

fn take_raw<'a>(map: &'a BTreeMap<String, String>, key: &'static str) -> Result<&'a str> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::param("param", format!("missing required key {key:?}")))
}

fn take_json<T: serde::de::DeserializeOwned>(
    map: &BTreeMap<String, String>,
    key: &'static str,
) -> Result<T> {
    serde_json::from_str(take_raw(map, key)?)
        .map_err(|e| Error::param("param", format!("bad value for {key:?}: {e}")))
}

fn json_matrix(map: &BTreeMap<String, String>, key: &'static str) -> Result<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = take_json(map, key)?;
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::param(
            "param",
            format!("{key:?} must be a non-empty rectangular array of arrays"),
        ));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn build_instance(family: &str, params: &[String]) -> Result<Record> {
    let map = param_map(params)?;
    match family {
        "matrix" => Ok(Record::from_game(&matrix_game(&json_matrix(&map, "r")?)?)),
        "sdp" => {
            let m: usize = take_json(&map, "m")?;
            let n: usize = take_json(&map, "n")?;
            let tensor: Vec<f64> = take_json(&map, "t")?;
            Ok(Record::from_game(&sdp_game(&tensor, m, n)?))
        }
        "polynomial" => {
            let game = PolyGame::new(json_matrix(&map, "p")?)?;
            Ok(Record::from_pair(&game.compiled_pair()?))
        }
        "gap" => {
            let variant = match take_raw(&map, "variant")? {
                "standard" => GapVariant::Standard,
                "rho" => GapVariant::ScaledObjective(take_json(&map, "value")?),
                "sigma" => GapVariant::CoupledRhs(take_json(&map, "value")?),
                other => {
                    return Err(Error::param(
                        "param",
                        format!("unknown gap variant {other:?}; use standard, rho, or sigma"),
                    ))
                }
            };
            let (game, pair) = gap_instance(variant)?;
            Ok(Record::from_both(&game, &pair))
        }
        other => Err(Error::param(
            "family",
            format!("unknown family {other:?}; use matrix, sdp, polynomial, or gap"),
        )),
    }
}

fn load_game(path: &Path) -> Result<crate::game::ConicGame> {
    fileio::read_record(path)?.to_game()
}

fn load_pair(path: &Path) -> Result<crate::programs::ConicPair> {
    fileio::read_record(path)?.to_pair()
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Solve { game, flags } => {
            let game = load_game(&game)?;
            let sol = solve_game(&game, &options(&flags))?;
            emit(
                &flags,
                &SolveOut {
                    value: sol.value,
                    x: sol.x_star.as_slice().to_vec(),
                    y: sol.y_star.as_slice().to_vec(),
                    lambda: sol.params.lambda,
                    kappa: sol.params.kappa,
                    pair_values: sol.pair_values,
                    residual_i: sol.report.residual_i,
                    residual_ii: sol.report.residual_ii,
                },
            )?;
            Ok(0)
        }
        Command::SolvePair { pair, flags } => {
            let pair = load_pair(&pair)?;
            let res = solve_pair(&pair, &options(&flags))?;
            emit(
                &flags,
                &PairOut {
                    status: status_name(res.status),
                    primal_objective: res.primal_obj,
                    dual_objective: res.dual_obj,
                    gap: res.gap,
                    iterations: res.iterations,
                    x: res.x.as_slice().to_vec(),
                    y: res.y.as_slice().to_vec(),
                },
            )?;
            Ok(match res.status {
                Status::Optimal => 0,
                Status::PrimalInfeasible | Status::DualInfeasible => 2,
                Status::Unknown => 3,
            })
        }
        Command::Diagnose {
            pair,
            alpha,
            beta,
            flags,
        } => {
            let pair = load_pair(&pair)?;
            let opts = options(&flags);
            let diag = if alpha.is_none() && beta.is_none() {
                classify(&pair, &opts)?
            } else {
                let a = match alpha {
                    Some(p) => fileio::read_point(&p)?,
                    None => pair.cone_c().canonical_interior(),
                };
                let b = match beta {
                    Some(p) => fileio::read_point(&p)?,
                    None => pair.cone_k().canonical_interior(),
                };
                classify_with_base(&pair, &a, &b, &opts)?
            };
            emit(&flags, &DiagnosisOut::from(&diag))?;
            Ok(if diag.case == GapCase::ZeroValuePathology {
                2
            } else {
                0
            })
        }
        Command::Verify { game, x, y, flags } => {
            let game = load_game(&game)?;
            let x = fileio::read_point(&x)?;
            let y = fileio::read_point(&y)?;
            let report = verify_equilibrium(&game, &x, &y, flags.tol.max(1e-12))?;
            emit(
                &flags,
                &VerifyOut {
                    value: report.value,
                    residual_i: report.residual_i,
                    residual_ii: report.residual_ii,
                    ok: report.ok,
                },
            )?;
            Ok(if report.ok { 0 } else { 2 })
        }
        Command::Reduce {
            game,
            lambda,
            kappa,
            flags,
        } => {
            let game = load_game(&game)?;
            let opts = options(&flags);
            let params = match (lambda, kappa) {
                (None, None) => choose_params(&game, &opts)?,
                (l, k) => {
                    let base = choose_params(&game, &opts)?;
                    ReductionParams::new(l.unwrap_or(base.lambda), k.unwrap_or(base.kappa))?
                }
            };
            emit_record(&flags, &Record::from_pair(&build_shifted_pair(&game, &params)))?;
            Ok(0)
        }
        Command::Instance {
            family,
            params,
            flags,
        } => {
            emit_record(&flags, &build_instance(&family, &params)?)?;
            Ok(0)
        }
    }
}

/// Parses arguments from the process environment, runs the command, and
/// returns the exit code for `main` to pass on.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests land here too; they keep clap's
            // zero exit, while genuine usage errors become input errors.
            let is_usage = e.use_stderr();
            let _ = e.print();
            return if is_usage { 4 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
