use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hypercell::cli::{format_check_report, run, ExperimentConfig};

/// Poisson hyperplane tessellation experiments: exact typical-cell sampling
/// and statistical verification of small-cell limit laws.
#[derive(Parser)]
#[command(name = "hypercell", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Experiment configuration file (TOML, or JSON with a .json extension).
    #[arg(long)]
    config: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the worker count.
    #[arg(long)]
    workers: Option<usize>,
    /// Override the output directory.
    #[arg(long)]
    output_dir: Option<String>,
    /// Override the sample budget.
    #[arg(long)]
    n_samples: Option<u64>,
    /// Override the observation window radius.
    #[arg(long)]
    window_r: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiment and write samples, estimates and the
    /// manifest into the output directory. Exits nonzero if any registered
    /// check fails.
    Run(Overrides),
    /// Print structural diagnostics for the configuration without sampling.
    Validate(Overrides),
}

impl Overrides {
    fn load(&self) -> Result<ExperimentConfig, hypercell::cli::RunError> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if let Some(dir) = &self.output_dir {
            cfg.output_dir = dir.clone();
        }
        if let Some(n) = self.n_samples {
            cfg.n_samples = n;
        }
        if let Some(w) = self.window_r {
            cfg.window_r = Some(w);
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(overrides) => {
            let cfg = match overrides.load() {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            match run(&cfg) {
                Ok(manifest) => {
                    print!("{}", format_check_report(&manifest));
                    println!(
                        "run {} ({}): {} samples, {} slots, {} dropped -> {}",
                        manifest.run_id,
                        manifest.experiment,
                        manifest.samples_emitted,
                        manifest.slots_processed,
                        manifest.dropped_degenerate,
                        cfg.output_dir
                    );
                    if manifest.all_passed() {
                        ExitCode::SUCCESS
                    } else {
                        eprintln!("error: registered checks failed");
                        ExitCode::from(2)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Validate(overrides) => {
            let cfg = match overrides.load() {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            for line in cfg.validate() {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
    }
}
