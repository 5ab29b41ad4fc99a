mod commands;
mod reproduce;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use codebounds::theta::ThetaVariant;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Solver(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl From<codebounds::Error> for CliError {
    fn from(e: codebounds::Error) -> Self {
        match e {
            codebounds::Error::Solver(m) => CliError::Solver(m),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "codebounds", version, about = "Exact and certified upper bounds for codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or evaluate an orthogonal polynomial.
    Poly(PolyArgs),
    /// Compute a bound on the size of a code.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Lovász θ of a graph.
    Theta(ThetaArgs),
    /// Check a certificate file.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Rerun a worked example end to end.
    Reproduce {
        #[arg(value_enum)]
        recipe: Recipe,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PolyFamily {
    Krawtchouk,
    Hahn,
    Qhahn,
    Gegenbauer,
}

#[derive(Args, Debug)]
pub struct PolyArgs {
    #[arg(value_enum)]
    pub family: PolyFamily,
    #[arg(long)]
    pub n: usize,
    /// Alphabet size (Krawtchouk) or field size, 1 for the set case (q-Hahn).
    #[arg(long)]
    pub q: Option<u64>,
    /// Word weight (Hahn).
    #[arg(long)]
    pub w: Option<usize>,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long)]
    pub j: Option<usize>,
    /// Point to evaluate at; an integer x for q-Hahn.
    #[arg(long, allow_hyphen_values = true)]
    pub eval: Option<String>,
    /// Print the monomial coefficients, lowest degree first.
    #[arg(long)]
    pub coeffs: bool,
}

#[derive(Subcommand, Debug)]
enum BoundCommand {
    /// Delsarte linear programming bound.
    Lp(LpArgs),
    /// Three-point semidefinite bound.
    Sdp(SdpArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LpSpace {
    Hamming,
    Johnson,
    Sphere,
}

#[derive(Args, Debug)]
pub struct LpArgs {
    #[arg(value_enum)]
    pub space: LpSpace,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    #[arg(long)]
    pub w: Option<usize>,
    #[arg(long, required_unless_present = "max_cos", conflicts_with = "max_cos")]
    pub delta: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub max_cos: Option<String>,
    /// Highest polynomial degree in the LP.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Write a run report.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write the dual polynomial as a certificate document.
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SdpProgram {
    Schrijver,
}

#[derive(Args, Debug)]
pub struct SdpArgs {
    #[arg(value_enum)]
    pub program: SdpProgram,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub delta: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Assemble the program, write it in SDPA sparse format and stop.
    #[arg(long)]
    pub emit_sdpa: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write the rationalized dual as a certificate document.
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VariantArg {
    Theta,
    ThetaPrime,
}

impl From<VariantArg> for ThetaVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Theta => ThetaVariant::Theta,
            VariantArg::ThetaPrime => ThetaVariant::ThetaPrime,
        }
    }
}

#[derive(Args, Debug)]
pub struct ThetaArgs {
    #[command(subcommand)]
    pub target: ThetaTarget,
    #[arg(long, value_enum, global = true, default_value = "theta")]
    pub variant: VariantArg,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ThetaTarget {
    /// A graph in edge-list format.
    Graph { path: PathBuf },
    /// The cycle C_q.
    Cycle {
        #[arg(long)]
        q: usize,
    },
    /// The graph joining words of a Hamming space at distance below delta.
    Code {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 2)]
        q: u64,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    Cert { path: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Recipe {
    Kissing8,
    Pentagon,
    McwilliamsDemo,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let echo = argv[1..].to_vec();
    let result = match cli.command {
        Command::Poly(args) => commands::poly(&args),
        Command::Bound(BoundCommand::Lp(args)) => commands::bound_lp(&args, echo),
        Command::Bound(BoundCommand::Sdp(args)) => commands::bound_sdp(&args, echo),
        Command::Theta(args) => commands::theta(&args, echo),
        Command::Verify(VerifyCommand::Cert { path }) => commands::verify_cert(&path),
        Command::Reproduce { recipe } => reproduce::run(recipe),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(codebounds::Error::domain("x")).exit_code(), 1);
        assert_eq!(CliError::from(codebounds::Error::parse("x")).exit_code(), 1);
        assert_eq!(CliError::from(codebounds::Error::solver("x")).exit_code(), 2);
        assert_eq!(CliError::Verification("x".into()).exit_code(), 3);
    }

    #[test]
    fn argument_surface() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["codebounds", "theta", "cycle", "--q", "5", "--variant", "theta-prime"]).unwrap();
        let Command::Theta(args) = cli.command else { panic!() };
        assert!(matches!(args.variant, VariantArg::ThetaPrime));
        assert!(Cli::try_parse_from(["codebounds", "bound", "lp", "sphere", "--n", "8"]).is_err());
    }
}
