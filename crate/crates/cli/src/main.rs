use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use budgeted_bandits::harness::{format_g12, summary_text};
use budgeted_bandits::{
    load_config, lower_bound_constant, run_experiment, ConfigSource, PolicyKind,
};
use clap::{Args, Parser, Subcommand};

/// Budgeted multiple-play bandit simulations.
#[derive(Debug, Parser)]
#[command(name = "bbsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run replications of each algorithm and write CSVs plus a summary.
    Run(RunArgs),
    /// Print the oracle solution and the regret lower-bound constant.
    Lowerbound(SourceArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// One of sim1, sim2, sim3, sim4.
    #[arg(long)]
    preset: Option<String>,
    /// TOML experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl SourceArgs {
    fn source(&self) -> ConfigSource {
        match (&self.preset, &self.config) {
            (Some(p), _) => ConfigSource::Preset(p.clone()),
            (None, Some(path)) => ConfigSource::File(path.clone()),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long = "horizon", short = 'T')]
    horizon: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, env = "BB_SEED")]
    seed: Option<u64>,
    /// Comma-separated list, e.g. klucb:1,klucb:3,ts,escb:8,oracle.
    #[arg(long, value_delimiter = ',')]
    algs: Option<Vec<PolicyKind>>,
    #[arg(long, env = "BB_WORKERS")]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of geometrically spaced checkpoints.
    #[arg(long)]
    checkpoints: Option<usize>,
}

fn run(args: RunArgs) -> Result<()> {
    let mut config = load_config(&args.source.source())?;
    if let Some(h) = args.horizon {
        config.horizon = h;
    }
    if let Some(r) = args.reps {
        config.replications = r;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(algs) = args.algs {
        config.algorithms = algs;
    }
    if let Some(w) = args.workers {
        config.workers = w;
    }
    if let Some(out) = args.out {
        config.out_dir = out;
    }
    if let Some(c) = args.checkpoints {
        config.checkpoints = c;
    }
    config.validate()?;

    let (results, paths) =
        run_experiment(&config).with_context(|| format!("experiment `{}` failed", config.name))?;
    println!(
        "{}: T = {}, {} replications, seed {}",
        config.name, config.horizon, config.replications, config.seed
    );
    let lb = results.lower_bound.at(config.horizon as f64);
    for (kind, agg) in &results.per_algorithm {
        println!(
            "  {:<10} regret {} ± {}   (lower bound {})",
            kind.to_string(),
            format_g12(agg.regret.last_mean()),
            format_g12(agg.regret.last_stderr()),
            format_g12(lb)
        );
    }
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn lowerbound(args: SourceArgs) -> Result<()> {
    let config = load_config(&args.source())?;
    let inst = &config.instance;
    let lb = lower_bound_constant(inst)?;
    print!("{}", summary_text(inst, &inst.solve(), &lb));
    Ok(())
}

fn main() -> ExitCode {
    let outcome = match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::Lowerbound(args) => lowerbound(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
