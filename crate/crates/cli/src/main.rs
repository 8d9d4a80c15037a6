use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Analysis of revision operators over finite base logics.
#[derive(Parser, Debug)]
#[command(name = "revkit", version)]
struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel commands (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct LogicOp {
    #[arg(long)]
    logic: PathBuf,
    #[arg(long)]
    operator: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Full,
    Semantic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EncoderArg {
    Canonical,
    Sqrel,
    Km,
    Dpw,
    Aiguier,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QuantifierArg {
    /// Semantic classes if G4 holds, every base otherwise.
    Auto,
    Classes,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Theorems {
    All,
    Representation,
    Enforcing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    Properties,
    Enforcing,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check G1-G6 (and related postulates) for an operator.
    CheckPostulates {
        #[command(flatten)]
        io: LogicOp,
        #[arg(long, value_enum, default_value = "semantic")]
        mode: Mode,
        /// Also check acyclicity.
        #[arg(long)]
        acyc: bool,
    },
    /// Encode an operator as a preference relation at one base, or as a whole assignment.
    Extract {
        #[command(flatten)]
        io: LogicOp,
        /// Comma-separated sentence names; omit to extract the full assignment.
        #[arg(long)]
        base: Option<String>,
        #[arg(long, value_enum, default_value = "canonical")]
        encoder: EncoderArg,
        #[arg(long, value_enum, default_value = "auto")]
        quantifier: QuantifierArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check faithfulness, min-friendliness and min-expressibility of an assignment.
    CheckAssignment {
        #[arg(long)]
        logic: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
        /// Also check compatibility with this operator.
        #[arg(long)]
        operator: Option<PathBuf>,
    },
    /// Search for a critical loop.
    DetectLoop {
        #[arg(long)]
        logic: PathBuf,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the operator induced by a critical loop and check it.
    SynthFromLoop {
        #[arg(long)]
        logic: PathBuf,
        #[arg(long = "loop")]
        loop_file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn the encoded relation at a base into a compatible total preorder.
    Tpo {
        #[command(flatten)]
        io: LogicOp,
        #[arg(long)]
        base: String,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check the representation and preorder-enforcing claims on one instance.
    Verify {
        #[arg(long)]
        logic: PathBuf,
        /// Required unless only the enforcing check is run.
        #[arg(long)]
        operator: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "all")]
        theorems: Theorems,
        /// Random relations to sample when the logic is too large for an exhaustive scan.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Randomized property sweep over generated logics.
    Sweep {
        #[arg(long, default_value = "micro")]
        profile: String,
        #[arg(long, default_value_t = 1000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "properties")]
        kind: SweepKind,
        #[arg(long)]
        junit: Option<PathBuf>,
    },
    /// Built-in example instances.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
}

#[derive(Subcommand, Debug)]
enum GalleryAction {
    List,
    /// Write the logic and its operator, assignment and relations as JSON files.
    Export {
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli.command) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
