use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tad_cli::commands::{self, SweepParam, SweepSpec};

/// Active target defense game with a fast Defender.
#[derive(Parser)]
#[command(name = "tad", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the optimal interception point and write a JSON record.
    Solve {
        scenario: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Simulate the engagement; writes trajectory.csv and outcome.json.
    Simulate {
        scenario: PathBuf,
        #[arg(short = 'd', long)]
        dir: Option<PathBuf>,
    },
    /// Print the critical Target/Attacker speed ratio.
    CriticalAlpha { scenario: PathBuf },
    /// Solve over a grid of one parameter and write a CSV table.
    Sweep {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print the six roots of the interception polynomial.
    Roots { scenario: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Solve { scenario, out: o } => commands::solve(scenario, o.as_deref(), &mut out),
        Command::Simulate { scenario, dir } => commands::simulate(scenario, dir.as_deref(), &mut out),
        Command::CriticalAlpha { scenario } => commands::critical_alpha_cmd(scenario, &mut out),
        Command::Sweep {
            scenario,
            param,
            from,
            to,
            steps,
            out: o,
        } => {
            let spec = SweepSpec {
                param: *param,
                from: *from,
                to: *to,
                steps: *steps,
            };
            commands::sweep(scenario, &spec, o.as_deref(), &mut out)
        }
        Command::Roots { scenario } => commands::roots(scenario, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tad: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
