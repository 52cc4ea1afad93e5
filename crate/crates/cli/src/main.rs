//! `ldpclab`: reproducible random-code experiments with JSON/CSV output.
//!
//! Exit codes: 0 success, 2 precondition violation, 3 resource guard,
//! 4 numeric failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "ldpclab", version, about = "Random LDPC and linear-code experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an s-LDPC code (with --s) or a random linear code and write it as JSON.
    Sample(SampleArgs),
    /// Distance certificate: the phi/psi/beta* grid and the failure bound.
    DistanceProfile(DistanceProfileArgs),
    /// Expectation threshold and R* of a row distribution, optionally with a containment sweep.
    Threshold(ThresholdArgs),
    /// Bound, exact value and Monte Carlo estimate of Pr[M in C] for a random s-LDPC code.
    LdpcContain(LdpcContainArgs),
    /// Brute-force maximum list sizes across the feasible rates, plus a bad-list threshold search.
    Listdecode(ListdecodeArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Field as `p` or `p,h` (q = p^h).
    #[arg(long, value_parser = parse_field)]
    pub field: Option<(u32, u32)>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: usize,
    /// Rate as a fraction (`1/3`) or an exact decimal.
    #[arg(long)]
    pub rate: String,
    /// Row sparsity; omit for a random linear code.
    #[arg(long)]
    pub s: Option<usize>,
}

#[derive(Args, Debug)]
pub struct DistanceProfileArgs {
    #[command(flatten)]
    pub common: Common,
    /// Block length; the grid is lambda = i/n.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub rate: String,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    /// Also sample codes and record their exact minimum distances.
    #[arg(long)]
    pub empirical: bool,
    /// Number of codes for --empirical.
    #[arg(long, default_value_t = 50)]
    pub trials: u64,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub common: Common,
    /// Row distribution JSON file.
    #[arg(long)]
    pub tau: PathBuf,
    /// Run the random-linear-code containment sweep over rates k/n.
    #[arg(long)]
    pub empirical: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
}

#[derive(Args, Debug)]
pub struct LdpcContainArgs {
    #[command(flatten)]
    pub common: Common,
    /// Matrix JSON file (n x l).
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub rate: String,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    /// Monte Carlo samples; 0 skips the estimate.
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
}

#[derive(Args, Debug)]
pub struct ListdecodeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub list_size: usize,
    /// Codes sampled per rate.
    #[arg(long, default_value_t = 20)]
    pub trials: u64,
    /// Local-search steps per restart of the threshold search.
    #[arg(long, default_value_t = 400)]
    pub search_iterations: u64,
    #[arg(long, default_value_t = 8)]
    pub support_cap: usize,
}

fn parse_field(s: &str) -> Result<(u32, u32), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [p] => Ok((num(p)?, 1)),
        [p, h] => Ok((num(p)?, num(h)?)),
        _ => Err(format!("expected p or p,h, got {s:?}")),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("LDPCLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("LDPCLAB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Sample(a) => commands::sample(a),
        Command::DistanceProfile(a) => commands::distance_profile(a),
        Command::Threshold(a) => commands::threshold(a),
        Command::LdpcContain(a) => commands::ldpc_contain(a),
        Command::Listdecode(a) => commands::listdecode(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
