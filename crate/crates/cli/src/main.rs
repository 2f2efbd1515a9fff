mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "curvchain", version, about = "Build and certify non-positively curved 2-complexes, chains and distortion tables")]
pub struct Cli {
    /// Output root; every command writes under it with fixed file names.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Optional TOML file with defaults; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Template complex X_k with its vertex link.
    BuildXk {
        #[arg(long)]
        k: Option<usize>,
    },
    /// Link condition for a complex file.
    CheckNpc {
        file: PathBuf,
        /// Also require every link cycle to be longer than 2π.
        #[arg(long)]
        strict: bool,
    },
    /// Full construction of Y_k with every certificate.
    PipelineYk {
        #[arg(long)]
        k: Option<usize>,
        /// Skip monodromy extraction.
        #[arg(long)]
        no_monodromy: bool,
    },
    /// Iterated glueing K_0 ∪ Y_{k_1} ∪ … along roses.
    Chain {
        /// Ranks k_1, …, k_n of the attached Y_k (may be empty).
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        ks: Vec<usize>,
        #[arg(long, value_enum, default_value_t = ChainBaseKind::Gamma)]
        base: ChainBaseKind,
        /// Rank of the Γ base, or k of the Y base. Defaults to k_1.
        #[arg(long)]
        base_rank: Option<usize>,
    },
    /// Re-extracts the monodromy recorded by a pipeline report.
    Monodromy {
        #[arg(long)]
        from_pipeline: PathBuf,
    },
    /// Graphs of groups and presentations for a chain of length n.
    Presentations(PresentationArgs),
    /// Bass condition property tests.
    BassTest {
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Commutator demonstration in the BS(1,2) double.
    BsDemo,
    /// Distortion growth tables and fits.
    Distort {
        #[command(subcommand)]
        what: DistortCommand,
    },
    /// Converts an artifact to another format.
    Export {
        #[arg(value_enum)]
        what: ExportWhat,
        #[arg(long)]
        from: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
    },
}

#[derive(Args, Debug)]
pub struct PresentationArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = TerminalChoice::Example1)]
    pub terminal: TerminalChoice,
    /// Rank of A_0 for the Example-1 terminal.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Exponent recorded for the snowflake terminal.
    #[arg(long, default_value_t = 1.5)]
    pub alpha: f64,
    /// Use the monodromy of Y_k (k = rank of A_0) for the first level.
    #[arg(long)]
    pub extracted: bool,
}

#[derive(Subcommand, Debug)]
pub enum DistortCommand {
    /// |φ^n(x_i)| and the t^n x_k^n t^-n witness table.
    Example1 {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Example-1 base witness pushed through extracted monodromies.
    Chain {
        #[arg(long, num_args = 1.., required = true)]
        monodromy: Vec<PathBuf>,
        /// Base witness, `example1:k=<k>`.
        #[arg(long, default_value = "example1:k=1")]
        base: String,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Random-word table for one extracted monodromy.
    Hyperbolic {
        #[arg(long)]
        monodromy: PathBuf,
        #[arg(long)]
        xmax: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Growth classification of a CSV table.
    Fit { csv: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainBaseKind {
    Gamma,
    Y,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminalChoice {
    Example1,
    Example2,
    Example3,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportWhat {
    Link,
    Complex,
    Table,
    Presentations,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Csv,
    Json,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("certificate failure, see the report");
            ExitCode::from(1)
        }
        Err(e) => {
            if let Some(u) = e.downcast_ref::<commands::UsageError>() {
                eprintln!("usage error: {u}");
                return ExitCode::from(2);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
