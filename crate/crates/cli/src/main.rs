use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use cohen_gabber_cli::{execute, AppArgs, Format};

/// Normalize a characteristic-p hypersurface: find shears and
/// coefficient-field twists making the induced module-finite extension
/// generically separable, and emit verifiable certificates.
#[derive(Parser, Debug)]
#[command(name = "cohen-gabber", version)]
struct Cli {
    /// Input file (p=..., field=..., vars=..., factor=... lines).
    input: PathBuf,
    /// Total-degree truncation bound to start from.
    #[arg(long, default_value_t = 24)]
    precision: u32,
    /// Cap for the precision-doubling escalation.
    #[arg(long, default_value_t = 96)]
    max_precision: u32,
    /// How many twist amounts to try per Step-2 move.
    #[arg(long, default_value_t = 64)]
    delta_attempts: u32,
    /// How many shear exponents to try per repair or Step-1 move.
    #[arg(long, default_value_t = 64)]
    shear_bound: u32,
    /// Output format.
    #[arg(long, value_enum, default_value_t = CliFormat::Text)]
    format: CliFormat,
    /// Re-apply a saved transformation log and re-certify instead of searching.
    #[arg(long)]
    replay: Option<PathBuf>,
    /// Write the transformation log of a certified run to this file.
    #[arg(long)]
    save_log: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CliFormat {
    Text,
    Structured,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = AppArgs {
        input: cli.input,
        precision: cli.precision.max(1),
        max_precision: cli.max_precision,
        delta_attempts: cli.delta_attempts,
        shear_bound: cli.shear_bound,
        format: match cli.format {
            CliFormat::Text => Format::Text,
            CliFormat::Structured => Format::Structured,
        },
        replay: cli.replay,
        save_log: cli.save_log,
    };
    let (code, output) = execute(&args);
    print!("{output}");
    ExitCode::from(code as u8)
}
