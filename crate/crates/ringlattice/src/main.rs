use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ringlattice::catalog;
use ringlattice::harness::{self, RunOptions};

#[derive(Parser)]
#[command(name = "ringlattice", version, about = "Lattices of intermediate rings of finite ring extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate and classify the intermediate rings of one extension.
    Analyze(AnalyzeArgs),
    /// Run every check on catalog and random instances.
    Verify(VerifyArgs),
    /// Catalog operations.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Path to a spec file, or the name of a catalog instance.
    spec: String,
    /// Write the Hasse diagram in DOT format.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
    /// Write the analysis as JSON.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Largest ring size the construction may produce.
    #[arg(long, env = "RINGLATTICE_CAP")]
    cap: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run on the whole catalog (the default when no pattern is given).
    #[arg(long, conflicts_with = "pattern")]
    all: bool,
    /// Only catalog instances whose name contains this text.
    pattern: Option<String>,
    /// Number of additional random instances.
    #[arg(long, default_value_t = 0)]
    random: usize,
    /// Seed for the random instances.
    #[arg(long, env = "RINGLATTICE_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the report as JSON.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Include wall-clock times in the report.
    #[arg(long)]
    timings: bool,
    #[arg(long, env = "RINGLATTICE_CAP")]
    cap: Option<usize>,
    /// Recompute oracle expectations for the selected catalog instances and
    /// write them instead of verifying.
    #[arg(long)]
    regen_expectations: bool,
    /// Destination for --regen-expectations.
    #[arg(long, value_name = "PATH", requires = "regen_expectations")]
    expectations_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List the curated instances.
    List,
}

/// Prints to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<(), String> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
        _ => Ok(()),
    }
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn analyze(args: AnalyzeArgs) -> Result<ExitCode, String> {
    let (name, text) = match catalog::find(&args.spec) {
        Some(inst) if !Path::new(&args.spec).exists() => (inst.name, inst.spec),
        _ => {
            let text = std::fs::read_to_string(&args.spec).map_err(|e| format!("cannot read {}: {e}", args.spec))?;
            let stem = Path::new(&args.spec).file_stem().map_or_else(|| args.spec.clone(), |s| s.to_string_lossy().into_owned());
            (stem, text)
        }
    };
    let opts = RunOptions { cap: args.cap, ..RunOptions::default() };
    let p = harness::prepare(&name, &text, &opts)?;
    emit(&p.summary.text())?;
    if let Some(path) = &args.dot {
        write(path, &p.summary.dot())?;
    }
    if let Some(path) = &args.json {
        let mut s = serde_json::to_string_pretty(&p.summary).map_err(|e| e.to_string())?;
        s.push('\n');
        write(path, &s)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let opts = RunOptions { cap: args.cap, timings: args.timings, ..RunOptions::default() };
    let pattern = if args.all { None } else { args.pattern.as_deref() };
    let mut instances = catalog::matching(pattern);
    if args.regen_expectations {
        let text = harness::regenerate_expectations(&instances, &opts)?;
        let out = args
            .expectations_out
            .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("catalog").join("expectations.json"));
        write(&out, &text)?;
        eprintln!("wrote derived expectations to {}", out.display());
        return Ok(ExitCode::SUCCESS);
    }
    if pattern.is_some() && instances.is_empty() && args.random == 0 {
        return Err(format!("no catalog instance matches {:?}", pattern.unwrap_or_default()));
    }
    instances.extend(catalog::random_instances(args.seed, args.random));
    let report = harness::run_catalog(&instances, pattern, args.random, args.seed, &opts);
    emit(&report.text())?;
    if let Some(path) = &args.json {
        write(path, &report.json())?;
    }
    Ok(if report.is_green() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn list() -> Result<ExitCode, String> {
    let all = catalog::catalog();
    let width = all.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let text: String = all.iter().map(|c| format!("{:<width$}  {}\n", c.name, c.description)).collect();
    emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Verify(v) => verify(v),
        Command::Catalog { command: CatalogCommand::List } => list(),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
