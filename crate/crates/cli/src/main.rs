use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crdiam::{render_text, run, serialize, CliError, JobSpec, Task};
use crdiam_core::complexes::Window;

#[derive(Parser)]
#[command(name = "crdiam", version, about = "Critical degrees and diameters of complete resolutions over Artinian complete intersections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complete resolution ranks and complexity
    Resolve(Common),
    /// Eisenbud operators and their audit
    Cioperators(Common),
    /// Critical degree
    Crdeg(Common),
    /// Cocritical degree
    Cocrdeg(Common),
    /// Critical diameter
    Diameter(Common),
    /// Law checks on the complete resolution
    Verify(Common),
    /// Pretty-printed complete resolution
    Show(Common),
    /// The tasks listed in the job file (all of them if none are listed)
    Run(Common),
}

#[derive(Args)]
struct Common {
    /// Job file; reads stdin when absent or `-`
    input: Option<PathBuf>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    window: Option<Vec<i64>>,
    #[arg(long, value_name = "E")]
    ext_degree: Option<u32>,
    #[arg(long, value_name = "Q")]
    max_period: Option<usize>,
    /// Dump the lifted operator matrices
    #[arg(long)]
    audit: bool,
    /// Print the report as JSON
    #[arg(long)]
    json: bool,
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(s)
        }
    }
}

fn execute(task: Option<Task>, args: &Common) -> Result<String, CliError> {
    let mut spec = JobSpec::from_json(&read_input(&args.input)?)?;
    if let Some(t) = task {
        spec.tasks = vec![t];
    }
    if let Some(w) = &args.window {
        spec.window = Window::new(w[0], w[1]);
    }
    if let Some(e) = args.ext_degree {
        spec.field.e = e;
    }
    if let Some(q) = args.max_period {
        spec.options.max_period = q;
    }
    spec.options.audit |= args.audit;
    let report = run(&spec)?;
    Ok(if args.json { serialize(&report) } else { render_text(&report) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (task, args) = match &cli.command {
        Command::Resolve(a) => (Some(Task::Resolve), a),
        Command::Cioperators(a) => (Some(Task::Cioperators), a),
        Command::Crdeg(a) => (Some(Task::Crdeg), a),
        Command::Cocrdeg(a) => (Some(Task::Cocrdeg), a),
        Command::Diameter(a) => (Some(Task::Diameter), a),
        Command::Verify(a) => (Some(Task::Verify), a),
        Command::Show(a) => (Some(Task::Show), a),
        Command::Run(a) => (None, a),
    };
    match execute(task, args) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
