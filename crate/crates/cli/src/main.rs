mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "coordrate", version, about = "Coordination rates, rate regions and scheme simulations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write results here instead of standard output; replaced atomically.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Base seed for optimizer restarts and simulation codebooks [default: 0].
    #[arg(long, env = "COORDRATE_SEED", global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the available cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

impl Global {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an information measure on a pmf file.
    Measure(commands::MeasureArgs),
    /// Run an auxiliary-channel optimizer on a pmf file.
    Optimize(commands::OptimizeArgs),
    /// Closed-form quantities of the doubly symmetric binary source.
    Dsbs(commands::DsbsArgs),
    /// Rate-region membership for one rate tuple.
    Region(commands::RegionArgs),
    /// Eliminate variables from a linear system by Fourier-Motzkin.
    Fme(commands::FmeArgs),
    /// Exact total-variation sweeps of a simulated scheme.
    Simulate(commands::SimulateArgs),
}

/// 1 for bad input, 2 for failures of the computation itself.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<coordrate::Error>() {
        Some(e) if !e.is_input_error() => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.global.threads {
        anyhow::ensure!(n > 0, coordrate::Error::Argument("--threads must be positive".into()));
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let g = &cli.global;
    let text = match &cli.command {
        Command::Measure(a) => commands::measure(a, g)?,
        Command::Optimize(a) => commands::optimize(a, g)?,
        Command::Dsbs(a) => commands::dsbs(a, g)?,
        Command::Region(a) => commands::region(a, g)?,
        Command::Fme(a) => commands::fme(a, g)?,
        Command::Simulate(a) => commands::simulate(a, g)?,
    };
    output::emit(&text, g.output.as_deref())
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
