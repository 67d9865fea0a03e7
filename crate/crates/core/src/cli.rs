//! Command-line front end. Exit status: 0 when every check passes, 1 on
//! usage or input errors, 2 when a mathematical check fails.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{
    find_critical_params, full_report_with_tolerance, CheckSelection, CHAIN_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::harness::{
    evaluate_appendix, render_appendix_csv, render_appendix_table, render_critical_table,
    render_fuzz_csv, render_fuzz_table, render_report_table, run_fuzz, to_json, FuzzConfig,
    RankSpec, TrialRow, CSV_HEADER, DEFAULT_SEED, DEFAULT_X_MARGIN,
};
use crate::states::{from_bloch, load_state, BlochVector, DensityMatrix, MixtureProblem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qconcave", version, about = "Bounds on the concavity of von Neumann entropy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the gap and every bound for one problem.
    Eval(EvalArgs),
    /// Reproduce the three qubit examples.
    Appendix(OutputArgs),
    /// Seeded fuzz campaign over random problems.
    Fuzz(FuzzArgs),
    /// Search for critical Renyi orders.
    Critical(CriticalArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write the payload here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StateArgs {
    /// First state as a Bloch vector `w1,w2,w3`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "state1")]
    bloch1: Option<String>,
    /// Second state as a Bloch vector `w1,w2,w3`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "state2")]
    bloch2: Option<String>,
    /// First state from a JSON state file.
    #[arg(long)]
    state1: Option<PathBuf>,
    /// Second state from a JSON state file.
    #[arg(long)]
    state2: Option<PathBuf>,
    /// Mixing weight in (0, 1).
    #[arg(long)]
    x: f64,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    states: StateArgs,
    #[arg(long, default_value_t = CHAIN_TOLERANCE)]
    tolerance: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FuzzArgs {
    /// Comma-separated state dimensions.
    #[arg(long, default_value = "2", value_delimiter = ',')]
    dims: Vec<usize>,
    /// `full` or comma-separated ranks.
    #[arg(long, default_value = "full")]
    ranks: String,
    /// Trials per dimension (and rank).
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = CHAIN_TOLERANCE)]
    tolerance: f64,
    /// Checks that count as violations: all, core (all but the cited
    /// Kim and Bures bounds) or theorem1 (`lowbd1 ≤ gap ≤ audenaert`).
    #[arg(long, value_enum, default_value = "all")]
    checks: Checks,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Checks {
    All,
    Core,
    Theorem1,
}

impl From<Checks> for CheckSelection {
    fn from(c: Checks) -> Self {
        match c {
            Checks::All => CheckSelection::All,
            Checks::Core => CheckSelection::Core,
            Checks::Theorem1 => CheckSelection::Theorem1,
        }
    }
}

#[derive(Args, Debug)]
struct CriticalArgs {
    #[command(flatten)]
    states: StateArgs,
    /// Bisection bracket width.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[command(flatten)]
    output: OutputArgs,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Eval(args) => eval(args, stdout),
        Command::Appendix(args) => appendix(args, stdout, stderr),
        Command::Fuzz(args) => fuzz(args, stdout, stderr),
        Command::Critical(args) => critical(args, stdout),
    }
}

fn emit(output: &OutputArgs, payload: &str, stdout: &mut dyn Write) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| Error::StateFile(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(payload.as_bytes())
            .map_err(|e| Error::StateFile(format!("stdout: {e}"))),
    }
}

fn parse_bloch(text: &str) -> Result<DensityMatrix> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Domain(format!("bad Bloch vector {text:?}: {e}")))?;
    let w: [f64; 3] = parts
        .try_into()
        .map_err(|_| Error::Domain(format!("Bloch vector {text:?} needs three components")))?;
    Ok(from_bloch(BlochVector::new(w)?))
}

fn load_one(bloch: &Option<String>, file: &Option<PathBuf>, which: u8) -> Result<DensityMatrix> {
    match (bloch, file) {
        (Some(b), None) => parse_bloch(b),
        (None, Some(path)) => load_state(path),
        _ => Err(Error::Domain(format!(
            "state {which}: give exactly one of --bloch{which} or --state{which}"
        ))),
    }
}

fn problem_from(args: &StateArgs) -> Result<MixtureProblem> {
    let rho1 = load_one(&args.bloch1, &args.state1, 1)?;
    let rho2 = load_one(&args.bloch2, &args.state2, 2)?;
    MixtureProblem::new(args.x, rho1, rho2)
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if !(tolerance >= 0.0) || !tolerance.is_finite() {
        return Err(Error::Domain(format!("tolerance must be finite and nonnegative, got {tolerance}")));
    }
    Ok(())
}

fn eval(args: EvalArgs, stdout: &mut dyn Write) -> Result<i32> {
    check_tolerance(args.tolerance)?;
    let p = problem_from(&args.states)?;
    let report = full_report_with_tolerance(&p, args.tolerance);
    let payload = match args.output.format {
        Format::Table => render_report_table(&report),
        Format::Json => to_json(&report),
        Format::Csv => format!("{CSV_HEADER}\n{}\n", TrialRow::from_report("eval", &report).to_csv()),
    };
    emit(&args.output, &payload, stdout)?;
    Ok(if report.chain_ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn appendix(args: OutputArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let rows = evaluate_appendix(CHAIN_TOLERANCE)?;
    let payload = match args.format {
        Format::Table => render_appendix_table(&rows),
        Format::Json => to_json(&rows),
        Format::Csv => render_appendix_csv(&rows),
    };
    emit(&args, &payload, stdout)?;
    let mut ok = true;
    for row in &rows {
        if !row.reproduced || !row.report.chain_ok {
            ok = false;
            let _ = writeln!(
                stderr,
                "({}) expected {} > {}, got margin {:e}; chain {}",
                row.id,
                row.expected.stronger.as_str(),
                row.expected.weaker.as_str(),
                row.margin,
                if row.report.chain_ok { "ok" } else { "violated" }
            );
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn parse_ranks(text: &str) -> Result<RankSpec> {
    if text.trim() == "full" {
        return Ok(RankSpec::Full);
    }
    text.split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(RankSpec::List)
        .map_err(|e| Error::Domain(format!("bad --ranks {text:?}: {e}")))
}

fn fuzz(args: FuzzArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    check_tolerance(args.tolerance)?;
    let cfg = FuzzConfig {
        dims: args.dims,
        ranks: parse_ranks(&args.ranks)?,
        trials: args.trials,
        seed: args.seed,
        tolerance: args.tolerance,
        x_margin: DEFAULT_X_MARGIN,
        checks: args.checks.into(),
    };
    let report = run_fuzz(&cfg)?;
    let payload = match args.output.format {
        Format::Table => render_fuzz_table(&report),
        Format::Json => to_json(&report),
        Format::Csv => {
            let _ = write!(stderr, "{}", render_fuzz_table(&report));
            render_fuzz_csv(&report)
        }
    };
    emit(&args.output, &payload, stdout)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn critical(args: CriticalArgs, stdout: &mut dyn Write) -> Result<i32> {
    let p = problem_from(&args.states)?;
    let params = find_critical_params(&p, args.tolerance)?;
    let payload = match args.output.format {
        Format::Table => render_critical_table(&params),
        Format::Json => to_json(&params),
        Format::Csv => {
            let mut s = String::from("family,order,mixture,reference,satisfied\n");
            for (family, grid) in [("standard", &params.b_grid), ("sandwiched", &params.a_grid)] {
                for g in grid {
                    s.push_str(&format!(
                        "{family},{},{},{},{}\n",
                        crate::harness::fmt_num(g.order),
                        crate::harness::fmt_num(g.mixture),
                        crate::harness::fmt_num(g.reference),
                        g.satisfied
                    ));
                }
            }
            s
        }
    };
    emit(&args.output, &payload, stdout)?;
    Ok(EXIT_OK)
}
