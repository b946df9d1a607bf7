//! `quadiff`: deformation dimensions from ramification data, checked against
//! explicit oracles.
//!
//! Exit codes: 0 on success, 1 on invalid input or a failed cross-check,
//! 2 when the input is valid but a hypothesis of the requested statement
//! fails.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "quadiff", version, about = "Equivariant deformation dimensions of p-group covers of curves")]
struct Cli {
    /// Output format; tables are a rendering of the JSON report.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a dimension formula on a cover.
    Dim(DimArgs),
    /// Tot(H^0(X, O(D))) from the floor pushforward of D.
    Tot(TotArgs),
    /// H_0, H_1 of (Z/p)^s on the 3-dimensional local module, by chain complex
    /// and by closed form.
    Homology(HomologyArgs),
    /// Local-field computations in k((s)).
    Local(LocalArgs),
    /// Jordan type of sigma on L(D) for an explicit curve y^p - y = f(x).
    Oracle(OracleArgs),
    /// Every formula/oracle pair on an explicit curve; exits 1 on a mismatch.
    Crosscheck(CurveArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Case {
    Tame,
    Cyclic,
    Weakly,
    FreeRank,
    Homology,
    Prank,
    MRegular,
}

#[derive(Args, Debug)]
struct DimArgs {
    #[arg(long, value_enum)]
    case: Case,
    /// Cover JSON file.
    cover: PathBuf,
    /// p-rank of Y (for `--case prank`).
    #[arg(long)]
    gamma_y: Option<u64>,
    /// Number of distinct points in div(phi), needed by `--case prank` when g_Y >= 1.
    #[arg(long)]
    deg_phi_red: Option<u64>,
}

#[derive(Args, Debug)]
struct TotArgs {
    cover: PathBuf,
    divisor: PathBuf,
}

#[derive(Args, Debug)]
struct HomologyArgs {
    #[arg(long)]
    p: u64,
    /// Rank s of G = (Z/p)^s.
    #[arg(long)]
    s: usize,
    /// Residue field F_{p^m}; defaults to max(s, 1).
    #[arg(long)]
    m: Option<usize>,
    /// Draw samples at random (needs --seed).
    #[arg(long, requires = "seed")]
    random: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// How b is drawn in random mode.
    #[arg(long, value_enum, default_value_t = BetaArg::Free)]
    beta_choice: BetaArg,
    /// a(g_i) as field-element indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<u64>,
    /// b(g_i) as field-element indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    beta: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BetaArg {
    Free,
    Proportional,
    Square,
}

#[derive(Args, Debug)]
struct LocalArgs {
    #[command(subcommand)]
    op: LocalOp,
}

#[derive(Subcommand, Debug)]
enum LocalOp {
    /// Strip p-th power leading terms from x.
    Normalize(SeriesArgs),
    /// Ramification jump of y^p - y = x.
    Jump(SeriesArgs),
    /// Complete weakly ramified tower of given rank and its group action.
    Tower(TowerArgs),
    /// Smallest odd pole number test, on a list or on an explicit curve.
    Weierstrass(WeierstrassArgs),
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Terms `exp:coeff` separated by commas, e.g. `-3:1,0:2`. Coefficients are
    /// residues for m = 1 and field-element indices otherwise.
    #[arg(long, allow_hyphen_values = true)]
    series: String,
    /// Absolute precision of the input (exact when omitted).
    #[arg(long, allow_hyphen_values = true)]
    prec: Option<i64>,
    /// Working precision for the extension (jump only).
    #[arg(long)]
    work_prec: Option<i64>,
}

#[derive(Args, Debug)]
struct TowerArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    rank: usize,
    #[arg(long, default_value_t = 14)]
    prec: i64,
    /// Largest residue degree tried.
    #[arg(long, default_value_t = 6)]
    max_m: usize,
}

#[derive(Args, Debug)]
struct WeierstrassArgs {
    /// Pole numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    poles: Vec<u64>,
    #[arg(long)]
    bound: u64,
    /// Compute the pole numbers on y^p - y = f(x) instead.
    #[arg(long, requires = "f")]
    p: Option<u64>,
    #[arg(long, requires = "p")]
    f: Option<String>,
    /// Index of the ramified point (0 is infinity when f has a pole there).
    #[arg(long, default_value_t = 0)]
    point: usize,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long)]
    p: u64,
    /// f(x), e.g. "x^3", "x + x^-1", "x + (x-1)^-1".
    #[arg(long, allow_hyphen_values = true)]
    f: String,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Sum of multiples of K, R, Rred and [j], e.g. "2K", "2K+3Rred".
    #[arg(long, default_value = "2K")]
    divisor: String,
}

/// What went wrong, and how the process should exit.
pub enum Failure {
    Core(quadiff_core::Error),
    /// Unreadable or malformed input outside the core library.
    Input(String),
    /// A computed comparison failed; the report is still printed.
    Mismatch(serde_json::Value),
}

impl From<quadiff_core::Error> for Failure {
    fn from(e: quadiff_core::Error) -> Self {
        Failure::Core(e)
    }
}

fn emit(format: Format, value: &serde_json::Value) {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n",
        Format::Table => render::table(value),
    };
    // a closed pipe downstream is not an error of ours
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli.command) {
        Ok(report) => {
            emit(cli.format, &report);
            ExitCode::SUCCESS
        }
        Err(Failure::Mismatch(report)) => {
            emit(cli.format, &report);
            ExitCode::from(1)
        }
        Err(Failure::Input(message)) => {
            eprintln!("{}", json!({ "error": "InvalidInput", "precondition": false, "message": message }));
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            let pre = e.is_precondition();
            eprintln!("{}", json!({ "error": e.kind(), "precondition": pre, "message": e.to_string() }));
            ExitCode::from(if pre { 2 } else { 1 })
        }
    }
}
