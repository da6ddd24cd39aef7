use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pwlab::experiments::{run, Experiment, RunConfig, EXIT_CONFIG};

/// Paley-Wiener radius laboratory.
#[derive(Parser, Debug)]
#[command(name = "pwlab", version, about)]
struct Cli {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// estimate, transform, weights-check, suite, poly or hermite.
    #[arg(long)]
    experiment: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "PWLAB_THREADS")]
    threads: Option<usize>,
    /// Seed of the randomized checks.
    #[arg(long)]
    seed: Option<u64>,
}

fn config_from(cli: &Cli) -> pwlab::Result<RunConfig> {
    let mut cfg = match (&cli.config, &cli.experiment) {
        (Some(p), _) => RunConfig::load(p)?,
        (None, Some(e)) => RunConfig::new(Experiment::parse(e)?),
        (None, None) => return Err(pwlab::Error::Config("need --config or --experiment".into())),
    };
    if let Some(e) = &cli.experiment {
        cfg.experiment = Experiment::parse(e)?;
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config_from(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("pwlab: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    if let Some(t) = cfg.threads {
        if t == 0 || rayon::ThreadPoolBuilder::new().num_threads(t).build_global().is_err() {
            eprintln!("pwlab: cannot start {t} worker threads");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    }
    match run(&cfg) {
        Ok(out) => {
            for f in &out.report.failures {
                eprintln!("FAIL {} [{}] {}", f.name, f.kind, f.detail);
            }
            if let Some(g) = out.report.guard_failure() {
                eprintln!("pwlab: numerical guard `{g}`");
            }
            println!(
                "{}: {} checks, {} failures, report in {}",
                cfg.experiment.name(),
                out.report.checks.len(),
                out.report.failures.len(),
                cfg.out.display()
            );
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("pwlab: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
