//! Thin CLI over the library commands.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use tweezersense::commands::{
    cmd_pattern, cmd_sensitivity_sweep, cmd_snr_sweep, cmd_validate, CommandOptions,
};
use tweezersense::{RunConfig, TweezerError};

#[derive(Parser)]
#[command(
    name = "tweezersense",
    about = "Shot-noise-limited particle sensing in optical tweezers: \
             split detection vs. spatial homodyne detection",
    after_help = "Configuration is a strict JSON document in SI units; every field \
                  has a default matching the built-in reference parameter set. \
                  Outputs are deterministic for a given config and build; the \
                  TWEEZERSENSE_SEED environment variable is reserved and unused."
)]
struct Cli {
    /// JSON config file; omitted means the reference configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's outputs.directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sweep points (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Include the scattered×scattered photocurrent term.
    #[arg(long = "full-quadratic", global = true)]
    full_quadratic: bool,

    /// Write SNR columns normalized to each curve's maximum.
    #[arg(long, global = true)]
    normalize: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trap-subtracted interference patterns, one matrix per
    /// (displacement, polarization).
    Pattern {
        /// Comma-separated particle displacements in meters.
        #[arg(long, value_delimiter = ',')]
        displacements: Option<Vec<f64>>,
        /// Also write raw little-endian f64 matrices with JSON sidecars.
        #[arg(long)]
        binary: bool,
    },
    /// SNR of both detection schemes versus particle displacement.
    SnrSweep,
    /// Minimum detectable displacement of both schemes versus NA.
    SensitivitySweep,
    /// Run the invariant suite and report pass/fail per check.
    Validate,
}

fn load_config(cli: &Cli) -> Result<RunConfig, TweezerError> {
    match &cli.config {
        Some(path) => RunConfig::from_path(path),
        None => {
            let cfg = RunConfig::default();
            cfg.validate()?;
            Ok(cfg)
        }
    }
}

fn run(cli: &Cli) -> Result<(), TweezerError> {
    let run_cfg = load_config(cli)?;
    let mut opts = CommandOptions {
        out_dir: cli.out.clone(),
        full_quadratic: cli.full_quadratic,
        normalize: cli.normalize,
        ..Default::default()
    };

    match &cli.command {
        Command::Pattern {
            displacements,
            binary,
        } => {
            opts.displacements = displacements.clone();
            opts.binary = *binary;
            let files = cmd_pattern(&run_cfg, &opts)?;
            for f in files {
                println!("wrote {}", f.display());
            }
        }
        Command::SnrSweep => {
            let path = cmd_snr_sweep(&run_cfg, &opts)?;
            println!("wrote {}", path.display());
        }
        Command::SensitivitySweep => {
            let path = cmd_sensitivity_sweep(&run_cfg, &opts)?;
            println!("wrote {}", path.display());
        }
        Command::Validate => {
            for w in run_cfg.tweezer().warnings() {
                eprintln!("warning: {w}");
            }
            let report = cmd_validate(&run_cfg)?;
            print!("{}", report.render());
            if !report.all_passed() {
                return Err(TweezerError::ValidationFailed(
                    "one or more invariant checks failed".into(),
                ));
            }
        }
    }
    Ok(())
}

fn exit_code(err: &TweezerError) -> u8 {
    match err {
        TweezerError::ValidationFailed(_) => 1,
        TweezerError::InvalidConfig(_)
        | TweezerError::Json(_)
        | TweezerError::InvalidGrid(_)
        | TweezerError::Precondition(_) => 2,
        TweezerError::Io(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let pool = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: could not build thread pool: {e}");
            return ExitCode::from(2);
        }
    };

    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
