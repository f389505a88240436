//! `trilin`: runs one experiment from a TOML config and writes its
//! artifacts (CSV with a provenance trailer, polynomial text files).

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Ctx;
use crate::error::CliError;
use crate::output::Artifacts;

#[derive(Parser)]
#[command(name = "trilin", version, about = "Trilinear oscillatory integral experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for all randomized steps (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Progress messages on stderr.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// ‖P‖_nd, the quotient norm modulo degenerate polynomials.
    Norm,
    /// The polynomial Q(x₂, y₂) = ‖P(·, x₂, ·, y₂)‖²_nd for κ = 2.
    QPoly,
    /// One oscillatory integral I(λP; f₁, f₂, f₃).
    Integrate,
    /// λ-sweep of |I(λP)| with a power-law fit.
    Decay,
    /// Sublevel-set measures |{|Q| < ε}| with an exponent fit.
    Sublevel,
    /// Coordinates that make a projection triple canonical.
    Normalize,
    /// Flatness of the degenerate counterexample across λ.
    Counterexample,
    /// Slice witness for |f(x) − f′(x′)| ≤ R on a discretized set.
    LemmaFrust,
    /// Polynomial approximation from |f(x) + g(y) + P(x, y)| ≤ 1.
    LemmaCousin,
    /// Sampled constant of the seminorm-sum inequality.
    SeminormConst,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    }
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Validation("--config is required".into()))?;
    let loaded = config::load(path)?;
    let seed = cli.seed.or(loaded.config.seed).unwrap_or(0);
    let dir = commands::output_dir(cli.out.as_deref(), &loaded);
    let artifacts = Artifacts::new(&dir, seed, &loaded.raw)?;
    let ctx = Ctx {
        loaded,
        artifacts,
        seed,
        verbose: cli.verbose,
    };
    match cli.command {
        Command::Norm => commands::norm(&ctx),
        Command::QPoly => commands::q_poly(&ctx),
        Command::Integrate => commands::integrate(&ctx),
        Command::Decay => commands::decay(&ctx),
        Command::Sublevel => commands::sublevel(&ctx),
        Command::Normalize => commands::normalize(&ctx),
        Command::Counterexample => commands::counterexample(&ctx),
        Command::LemmaFrust => commands::lemma_frust(&ctx),
        Command::LemmaCousin => commands::lemma_cousin(&ctx),
        Command::SeminormConst => commands::seminorm_const(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
