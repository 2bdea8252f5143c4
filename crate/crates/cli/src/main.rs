mod commands;
mod config;
mod error;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Flags, RunConfig};
use error::CliError;

/// Coupled critical Schrödinger systems: limit levels, instanton checks and
/// radial ground states on a ball.
#[derive(Debug, Parser)]
#[command(name = "nehari", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Limit ground-state level and regime for each mu.
    Levels {
        #[command(flatten)]
        flags: Flags,
    },
    /// Every positive coupling root (m, k, l) with residuals.
    Coupling {
        #[command(flatten)]
        flags: Flags,
    },
    /// Regime thresholds for N.
    Thresholds {
        #[command(flatten)]
        flags: Flags,
    },
    /// Radial ground state on the ball B_R.
    Solve {
        #[command(flatten)]
        flags: Flags,
    },
    /// Instanton norms and limit energies against the closed forms.
    LimitCheck {
        #[command(flatten)]
        flags: Flags,
    },
    /// Pohozaev diagnostics of the computed ground state.
    Pohozaev {
        #[command(flatten)]
        flags: Flags,
    },
    /// Run every invariant suite; exits 1 if any invariant fails.
    Verify {
        #[command(flatten)]
        flags: Flags,
        /// Scale the Sobolev constant by (1 + delta) in the level checks.
        #[arg(long = "perturb-s", hide = true, default_value_t = 0.0)]
        perturb_s: f64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let flags = match &cli.command {
        Command::Levels { flags }
        | Command::Coupling { flags }
        | Command::Thresholds { flags }
        | Command::Solve { flags }
        | Command::LimitCheck { flags }
        | Command::Pohozaev { flags }
        | Command::Verify { flags, .. } => flags,
    };
    let cfg = RunConfig::resolve(flags).map_err(CliError::Usage)?;
    let (text, failure) = match &cli.command {
        Command::Levels { .. } => (commands::levels(&cfg)?, None),
        Command::Coupling { .. } => (commands::coupling(&cfg)?, None),
        Command::Thresholds { .. } => (commands::thresholds_table(&cfg)?, None),
        Command::Solve { .. } => (commands::solve(&cfg)?, None),
        Command::Pohozaev { .. } => (commands::pohozaev(&cfg)?, None),
        Command::LimitCheck { .. } => {
            let (text, pass) = commands::limit_check(&cfg)?;
            (text, (!pass).then(|| "limit check failed".to_string()))
        }
        Command::Verify { perturb_s, .. } => {
            let checks = verify::run(cfg.seed, *perturb_s);
            let failed = checks.iter().filter(|c| !c.pass()).count();
            (verify::report(&checks), (failed > 0).then(|| format!("{failed} invariant(s) failed")))
        }
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    match failure {
        Some(msg) => Err(CliError::Invariant(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
