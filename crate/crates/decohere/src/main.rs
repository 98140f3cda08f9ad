use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use decohere::cli::{
    run_evolve, run_figure1, run_sweep, run_validate, RunError, ScenarioConfig,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// Momentum-space vacuum decoherence of a free charged particle.
#[derive(Parser)]
#[command(name = "decohere", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the configured wave packet over the time grid.
    Evolve(ScenarioArgs),
    /// Emit |Γ̄_vac(τ)| columns for the configured list of Q values.
    Figure1(ScenarioArgs),
    /// Long-format Q sweep of Γ̄_vac and its asymptotic laws.
    Sweep(ScenarioArgs),
    /// Run the oracle-equivalence suite; exits 0 only if every check passes.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario configuration file (flat key = value lines).
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// KEY=VALUE overrides applied on top of the file.
    #[arg(value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Accepted for interface uniformity; the validation grids are fixed.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };

    let outcome = match &cli.command {
        Command::Evolve(args) => run_scenario(args, run_evolve),
        Command::Figure1(args) => run_scenario(args, run_figure1),
        Command::Sweep(args) => run_scenario(args, run_sweep),
        Command::Validate(args) => match run_validate() {
            Ok(report) => {
                if let Err(code) = write_output(args.out.as_deref(), &report.csv) {
                    return code;
                }
                if report.all_passed {
                    return ExitCode::SUCCESS;
                }
                eprintln!("validation failed; see report");
                return ExitCode::from(2);
            }
            Err(e) => Err(e),
        },
    };

    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run_scenario(
    args: &ScenarioArgs,
    runner: fn(&ScenarioConfig) -> Result<String, RunError>,
) -> Result<(), RunError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        RunError::Config(decohere::cli::ConfigError::Invalid(format!(
            "cannot read {}: {e}",
            args.config.display()
        )))
    })?;
    let config = ScenarioConfig::load(&text, &args.overrides)?;
    if let Ok(packet) = config.build_packet() {
        if packet.max_abs_momentum() > decohere::model::NON_RELATIVISTIC_BOUND {
            eprintln!(
                "warning: packet reaches |u| = {:.3}, beyond the non-relativistic guard {}",
                packet.max_abs_momentum(),
                decohere::model::NON_RELATIVISTIC_BOUND
            );
        }
    }
    let csv = runner(&config)?;
    write_output(args.out.as_deref(), &csv).map_err(|_| {
        RunError::Config(decohere::cli::ConfigError::Invalid("write failed".into()))
    })
}

fn write_output(path: Option<&std::path::Path>, payload: &str) -> Result<(), ExitCode> {
    match path {
        Some(path) => std::fs::write(path, payload).map_err(|e| {
            eprintln!("cannot write {}: {e}", path.display());
            ExitCode::from(1)
        }),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}
