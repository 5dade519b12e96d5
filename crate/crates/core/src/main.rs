use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sanloc::experiment::{fig2d_sweep, parse_seed_list, results, run_sweep, ExperimentConfig, SweepOutput};
use sanloc::signaling::Mode;
use sanloc::validation;
use sanloc::SanError;

/// Location-privacy sweeps for SAN-precoded mmWave MISO-OFDM.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a TOML config.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the numerical self-check suite.
    Validate,
    /// Run the sweep with both key entries multiplied by --scale.
    Fig2d {
        config: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        scale: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Output directory (overrides output.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seeds, e.g. `0..20`, `0-19` or `1,5,9` (overrides sweep.seeds).
    #[arg(long)]
    seeds: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn load(path: &Path, common: &Common) -> sanloc::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::from_path(path)?;
    if let Some(dir) = &common.out {
        cfg.output.dir = dir.clone();
    }
    if let Some(seeds) = &common.seeds {
        cfg.sweep.seeds = parse_seed_list(seeds)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> sanloc::Result<T> + Send) -> sanloc::Result<T> {
    match threads {
        None => f(),
        Some(0) => Err(SanError::Config("--threads: must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| SanError::Config(format!("--threads: {e}")))?
            .install(f),
    }
}

fn finish(out: &SweepOutput, cfg: &ExperimentConfig) -> sanloc::Result<()> {
    let (csv, manifest) = out.write(&cfg.output.dir, cfg)?;
    for (snr, gap) in results::privacy_gap_db(&out.rows, Mode::San) {
        println!("snr {snr:>6} dB  eve/bob peb gap (san) median {:.3} dB", gap.median);
    }
    println!("wrote {} and {}", csv.display(), manifest.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are configuration errors; exit code 2 is reserved
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Validate => match validation::validate() {
            Ok(report) => {
                println!("{report}");
                if !report.passed() {
                    return ExitCode::from(2);
                }
                Ok(())
            }
            Err(e) => Err(e),
        },
        Command::Run { config, common } => load(config, common).and_then(|cfg| {
            let out = with_threads(common.threads, || run_sweep(&cfg))?;
            finish(&out, &cfg)
        }),
        Command::Fig2d { config, scale, common } => load(config, common).and_then(|cfg| {
            let out = with_threads(common.threads, || fig2d_sweep(&cfg, *scale))?;
            finish(&out, &cfg)
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
