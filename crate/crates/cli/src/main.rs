//! `tdd`: trace distance discord of two-qubit states from the command line.
//!
//! Exit codes: 0 success, 1 file/parse/parameter errors, 2 state or
//! constructor validation failures, 3 method not applicable to the state.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};
use tdd_core::oracle::{tdd_definition, OracleConfig};
use tdd_core::spinchain::{run_series, series_peak, ChainConfig};
use tdd_core::state::{
    make_bell_diagonal, make_quantum_classical, make_x_state, matrix_from_json, to_bloch, to_json,
};
use tdd_core::tdd::{tdd_numeric, VERIFY_TOL};
use tdd_core::{tdd, tdd_closed, DensityMatrix, Error, MinimizerConfig, Vec3};

#[derive(Parser)]
#[command(name = "tdd", version, about = "One-sided trace distance discord of two-qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discord of a state read from a JSON file.
    Compute(ComputeArgs),
    /// Discord along an XX spin chain as CSV.
    SpinChain(ChainArgs),
    /// Write a named state as JSON.
    Make {
        #[command(subcommand)]
        family: MakeCommand,
    },
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Cross-check against the numeric minimizer and the brute-force oracle.
    #[arg(long)]
    verify: bool,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Numeric,
    Oracle,
    Closed,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    j: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    t_max: f64,
    #[arg(long, default_value_t = 500)]
    steps: usize,
    /// CSV destination; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MakeCommand {
    /// `p rho0 (x) |0><0| + (1 - p) rho1 (x) |1><1|`.
    Qc {
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        /// Bloch vector of rho0 as `x,y,z`.
        #[arg(long, allow_hyphen_values = true)]
        s0: String,
        #[arg(long, allow_hyphen_values = true)]
        s1: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// X state from its diagonal and the entries `rho32`, `rho41` as `re[,im]`.
    X {
        #[arg(long, allow_hyphen_values = true)]
        diag: String,
        #[arg(long, allow_hyphen_values = true)]
        rho32: String,
        #[arg(long, allow_hyphen_values = true)]
        rho41: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bell-diagonal state with correlations `c1,c2,c3`.
    BellDiagonal {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonHermitian { .. }
            | Error::TraceNotOne { .. }
            | Error::NotPositive { .. }
            | Error::NonFinite
            | Error::Domain(_)
            | Error::XStatePositivity { .. }
            | Error::VerificationFailed { .. } => 2,
            Error::NotApplicable(_) => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Compute(args) => compute(&args),
        Command::SpinChain(args) => spin_chain(&args),
        Command::Make { family } => make(family),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Minimizer settings, with the grid taken from `TDD_GRID` (`64x128`, or `N`
/// for `N x 2N`) when set.
fn minimizer_config(verify: bool) -> Result<MinimizerConfig, Failure> {
    let mut cfg = MinimizerConfig {
        verify,
        ..Default::default()
    };
    if let Ok(raw) = std::env::var("TDD_GRID") {
        let bad = || Failure::usage(format!("TDD_GRID: expected `N` or `NxM`, got {raw:?}"));
        let (t, p) = match raw.split_once(['x', 'X']) {
            Some((t, p)) => (
                t.trim().parse().map_err(|_| bad())?,
                p.trim().parse().map_err(|_| bad())?,
            ),
            None => {
                let n: usize = raw.trim().parse().map_err(|_| bad())?;
                (n, 2 * n)
            }
        };
        cfg.grid_theta = t;
        cfg.grid_phi = p;
        cfg.validate().map_err(|e| Failure::usage(format!("TDD_GRID: {e}")))?;
    }
    Ok(cfg)
}

fn read_state(path: &Path) -> Result<DensityMatrix, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let m = matrix_from_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(DensityMatrix::validate(m)?)
}

fn compute(args: &ComputeArgs) -> Result<(), Failure> {
    let rho = read_state(&args.input)?;
    let cfg = minimizer_config(args.verify && args.method == MethodArg::Auto)?;
    let oracle_cfg = OracleConfig::default();
    let numeric = || tdd_numeric(&to_bloch(&rho), &cfg);

    let (value, method, result) = match args.method {
        MethodArg::Auto => {
            let r = tdd(&rho, &cfg)?;
            (r.value, r.method.as_str(), Some(r))
        }
        MethodArg::Closed => {
            let mut r = tdd_closed(&rho)?;
            if args.verify {
                let n = numeric()?;
                let diff = (n.value - r.value).abs();
                if diff > VERIFY_TOL {
                    return Err(Error::VerificationFailed {
                        method: r.method.as_str(),
                        value: r.value,
                        numeric: n.value,
                        diff,
                    }
                    .into());
                }
                r.diagnostics.numeric_check = Some(diff);
            }
            (r.value, r.method.as_str(), Some(r))
        }
        MethodArg::Numeric => {
            let r = numeric()?;
            (r.value, r.method.as_str(), Some(r))
        }
        MethodArg::Oracle => (tdd_definition(&rho, &oracle_cfg)?, "oracle", None),
    };

    let mut checks = Vec::new();
    if args.verify {
        match args.method {
            MethodArg::Oracle => checks.push(("numeric", (numeric()?.value - value).abs())),
            _ => {
                if let Some(d) = result.as_ref().and_then(|r| r.diagnostics.numeric_check) {
                    checks.push(("numeric", d));
                }
                checks.push(("oracle", (tdd_definition(&rho, &oracle_cfg)? - value).abs()));
            }
        }
    }

    let direction = result.as_ref().and_then(|r| r.direction);
    let mut out = io::stdout().lock();
    let written = if args.json {
        let report = json!({
            "value": value,
            "method": method,
            "direction": direction.map(|d| json!({"theta": d.theta, "phi": d.phi})),
            "h_min": result.as_ref().map(|r| r.h_min),
            "residual": result.as_ref().and_then(|r| r.diagnostics.residual),
            "fallback": result.as_ref().is_some_and(|r| r.diagnostics.fallback),
            "checks": checks.iter().map(|(k, v)| ((*k).to_string(), json!(v))).collect::<serde_json::Map<String, Value>>(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("plain JSON values"))
    } else {
        let mut line = format!("{value:.9} method={method}");
        if let Some(d) = direction {
            line.push_str(&format!(" theta={:.9} phi={:.9}", d.theta, d.phi));
        }
        for (name, diff) in &checks {
            line.push_str(&format!(" {name}_diff={diff:.3e}"));
        }
        writeln!(out, "{line}")
    };
    written.map_err(|e| Failure::usage(format!("stdout: {e}")))
}

fn spin_chain(args: &ChainArgs) -> Result<(), Failure> {
    let chain = ChainConfig::uniform(args.n, args.j, args.t_max, args.steps)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let rows = run_series(&chain, &minimizer_config(false)?).map_err(|e| Failure::usage(e.to_string()))?;

    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(
            fs::File::create(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let io_err = |e: csv::Error| Failure::usage(format!("writing CSV: {e}"));
    w.write_record(["t", "abs_f", "d_closed", "d_xstate", "d_numeric"])
        .map_err(io_err)?;
    for r in &rows {
        w.write_record(
            [r.t, r.f.norm(), r.d, r.d_xstate, r.d_numeric].map(|v| format!("{v:.11e}")),
        )
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Failure::usage(format!("writing CSV: {e}")))?;
    drop(w);

    if let Some((fm, dm)) = series_peak(&rows) {
        let summary = format!("peak abs_f={fm:.6} d={dm:.6}");
        if args.out.is_some() {
            println!("{summary}");
        } else {
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn parse_reals<const N: usize>(name: &str, s: &str) -> Result<[f64; N], Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Failure::usage(format!("--{name}: expected {N} comma-separated numbers, got {s:?}"));
    if parts.len() != N {
        return Err(bad());
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| bad())?;
    }
    Ok(out)
}

fn parse_complex(name: &str, s: &str) -> Result<Complex64, Failure> {
    match s.split(',').count() {
        1 => parse_reals::<1>(name, s).map(|[re]| Complex64::new(re, 0.0)),
        _ => parse_reals::<2>(name, s).map(|[re, im]| Complex64::new(re, im)),
    }
}

fn make(family: MakeCommand) -> Result<(), Failure> {
    let (rho, out) = match family {
        MakeCommand::Qc { p, s0, s1, out } => {
            let s0 = Vec3(parse_reals::<3>("s0", &s0)?);
            let s1 = Vec3(parse_reals::<3>("s1", &s1)?);
            (make_quantum_classical(p, s0, s1)?, out)
        }
        MakeCommand::X {
            diag,
            rho32,
            rho41,
            out,
        } => {
            let diag = parse_reals::<4>("diag", &diag)?;
            let r32 = parse_complex("rho32", &rho32)?;
            let r41 = parse_complex("rho41", &rho41)?;
            (make_x_state(diag, r32, r41)?, out)
        }
        MakeCommand::BellDiagonal { c, out } => {
            let [c1, c2, c3] = parse_reals::<3>("c", &c)?;
            (make_bell_diagonal(c1, c2, c3)?, out)
        }
    };
    let text = serde_json::to_string_pretty(&to_json(&rho)).expect("plain JSON values") + "\n";
    match out {
        Some(path) => fs::write(&path, text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("stdout: {e}"))),
    }
}
