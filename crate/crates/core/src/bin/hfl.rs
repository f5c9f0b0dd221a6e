//! `hfl`: run experiment descriptors from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hfl::builtins::list_builtins;
use hfl::descriptor::{Analysis, ExperimentDescriptor, Format};
use hfl::runner::run;
use hfl::Error;

#[derive(Parser)]
#[command(name = "hfl", version, about = "Recurrence and multicorrelation experiments along Hardy field sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the recurrence conditions, the normal form and property P of a family
    Condition(RunArgs),
    /// Weighted averages of a sequence over an N grid
    Avg(RunArgs),
    /// Weighted multicorrelation averages on a system
    Multicorr(RunArgs),
    /// Uniformity seminorms of a cyclic observable
    Seminorm(RunArgs),
    /// Weyl or joint-orbit discrepancy
    Equi(RunArgs),
    /// Search a set for rounded configurations
    Pattern(RunArgs),
    /// Return set of a set under the rounded family
    ReturnSet(RunArgs),
    /// Shifted-pattern probe and shifted combinations
    Probe(RunArgs),
    /// List builtin constants, families and systems
    Builtins {
        #[arg(long, default_value = "")]
        filter: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// Descriptor file (JSON)
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Starting digit count of certified evaluations
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    threads: Option<usize>,
}

fn execute(analysis: Analysis, args: &RunArgs) -> hfl::Result<()> {
    let text = std::fs::read_to_string(&args.spec).map_err(|e| Error::Io(format!("{}: {e}", args.spec.display())))?;
    let mut desc = ExperimentDescriptor::from_json(&text)?;
    desc.analysis = Some(analysis);
    if let Some(p) = args.precision {
        desc.precision = Some(p);
    }
    if let Some(t) = args.threads {
        desc.threads = Some(t);
    }
    if let Some(f) = args.format {
        desc.format = Some(match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        });
    }
    // thread count is an execution detail, kept out of the echoed descriptor
    let threads = desc.threads.take();
    let report = run(&desc, threads)?;
    let body = match desc.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.csv.clone(),
    };
    match &args.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (analysis, args) = match &cli.command {
        Command::Builtins { filter } => {
            println!("{}", serde_json::to_string_pretty(&list_builtins(filter)).expect("catalog serializes"));
            return ExitCode::SUCCESS;
        }
        Command::Condition(a) => (Analysis::Condition, a),
        Command::Avg(a) => (Analysis::Avg, a),
        Command::Multicorr(a) => (Analysis::Multicorr, a),
        Command::Seminorm(a) => (Analysis::Seminorm, a),
        Command::Equi(a) => (Analysis::Equi, a),
        Command::Pattern(a) => (Analysis::Pattern, a),
        Command::ReturnSet(a) => (Analysis::ReturnSet, a),
        Command::Probe(a) => (Analysis::Probe, a),
    };
    match execute(analysis, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hfl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
