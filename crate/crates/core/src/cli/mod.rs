//! Command implementations behind the `holonomy` binary.
//!
//! Every command returns an [`OutputEnvelope`]. Exit codes: 0 success,
//! 2 usage or parse error, 3 solver found no root, 4 numerical contract
//! violated.

mod commands;
pub mod envelope;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{cmd_overlap, cmd_qec_bitflip, cmd_qec_shor, cmd_simulate, cmd_synth, cmd_zeno};
pub use envelope::OutputEnvelope;

use crate::angle;
use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_ROOT: i32 = 3;
pub const EXIT_CONTRACT: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoRoot { .. } => EXIT_NO_ROOT,
            Error::NotUnitary(_)
            | Error::ContractViolation(_)
            | Error::SingularInput(_)
            | Error::DegenerateCycle { .. }
            | Error::DegenerateLeg(_)
            | Error::AntipodalLeg(_)
            | Error::ZeroR(_)
            | Error::ZeroWeight => EXIT_CONTRACT,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "holonomy", version, about = "Discrete holonomies of spin coherent state measurement sequences")]
pub struct Cli {
    /// Output format on stdout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Overlap matrix between two coherent-state frames.
    Overlap(OverlapArgs),
    /// Compile a gate into a measurement sequence.
    Synth(SynthArgs),
    /// Dense-measurement sweep of a rotation cycle.
    Zeno(ZenoArgs),
    /// Monte Carlo of a path file.
    Simulate(SimulateArgs),
    /// Error-correction checks.
    #[command(subcommand)]
    Qec(QecCommand),
}

fn angle_arg(s: &str) -> Result<f64, String> {
    angle::parse_angle(s).map_err(|e| e.to_string())
}

fn pair_arg(s: &str) -> Result<(f64, f64), String> {
    angle::parse_angle_pair(s).map_err(|e| e.to_string())
}

fn triple_arg(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("expected three comma-separated angles, got `{s}`"));
    };
    Ok((angle_arg(a)?, angle_arg(b)?, angle_arg(c)?))
}

#[derive(Debug, Args)]
pub struct OverlapArgs {
    #[arg(long, default_value = "3/2")]
    pub j: String,
    /// First direction `theta,phi`.
    #[arg(long, value_parser = pair_arg, allow_hyphen_values = true)]
    pub a: (f64, f64),
    /// Second direction `theta,phi`.
    #[arg(long, value_parser = pair_arg, allow_hyphen_values = true)]
    pub b: (f64, f64),
    /// Real auxiliary overlap ξ for the two-qubit frames.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateKind {
    #[value(name = "T", alias = "t")]
    T,
    #[value(name = "S", alias = "s")]
    S,
    #[value(name = "H", alias = "h")]
    H,
    Rx,
    Ry,
    Rz,
    Su2,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub gate: GateKind,
    #[arg(long, default_value = "3/2")]
    pub j: String,
    /// Rotation angle for rx/ry/rz.
    #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
    pub angle: Option<f64>,
    /// `alpha,beta,gamma` for su2, target `D_z(alpha) D_y(beta) D_z(gamma)`.
    #[arg(long, value_parser = triple_arg, allow_hyphen_values = true)]
    pub euler: Option<(f64, f64, f64)>,
    /// Use the tabulated n = 1 angles for T, S and H.
    #[arg(long)]
    pub printed_table: bool,
    /// With --printed-table, use (pi/2, 0) as the fifth H vertex.
    #[arg(long, requires = "printed_table")]
    pub alternate_h: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZenoAxis {
    X,
    Z,
}

#[derive(Debug, Args)]
pub struct ZenoArgs {
    #[arg(long, default_value = "3/2")]
    pub j: String,
    #[arg(long, value_parser = angle_arg, allow_hyphen_values = true, default_value = "pi/4")]
    pub phi: f64,
    #[arg(long, value_enum, default_value_t = ZenoAxis::Z)]
    pub axis: ZenoAxis,
    /// Steps per leg, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,4,16,64,256")]
    pub steps: Vec<usize>,
    /// Also write the table as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Postselect,
    Restart,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Path file: one `theta phi` per line, `#` comments.
    pub path: PathBuf,
    #[arg(long, default_value = "3/2")]
    pub j: String,
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Postselect)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 200)]
    pub max_restarts: u32,
    /// Real input amplitudes `a,b`; defaults to (1,1)/sqrt2.
    #[arg(long, value_parser = pair_arg, allow_hyphen_values = true)]
    pub input: Option<(f64, f64)>,
}

#[derive(Debug, Subcommand)]
pub enum QecCommand {
    /// Syndrome table of the rotated bit-flip code.
    BitflipDemo(BitflipArgs),
    /// Shor logical overlap conditions over random direction pairs.
    ShorVerify(ShorArgs),
}

#[derive(Debug, Args)]
pub struct BitflipArgs {
    /// Frame direction `theta,phi`.
    #[arg(long, value_parser = pair_arg, allow_hyphen_values = true, default_value = "0,0")]
    pub direction: (f64, f64),
    /// Use this many random directions and logical states instead.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Inject unrotated sigma_x flips and report every syndrome branch.
    #[arg(long)]
    pub lab_frame: bool,
}

#[derive(Debug, Args)]
pub struct ShorArgs {
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples also checked by the full 9-qubit contraction.
    #[arg(long, default_value_t = 5)]
    pub direct: usize,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let result = match &cli.command {
        Command::Overlap(a) => cmd_overlap(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Zeno(a) => cmd_zeno(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Qec(QecCommand::BitflipDemo(a)) => cmd_qec_bitflip(a),
        Command::Qec(QecCommand::ShorVerify(a)) => cmd_qec_shor(a),
    };
    match result {
        Ok(env) => {
            let stdout = match cli.format {
                Format::Json => env.to_json(),
                Format::Csv => env.to_csv(),
            };
            Outcome { code: EXIT_OK, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: e.code, stdout: String::new(), stderr: format!("error: {}\n", e.message) },
    }
}
