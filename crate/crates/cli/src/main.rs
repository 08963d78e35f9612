use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use lcl_lab::config::{ExperimentConfig, Kind};
use lcl_lab::{generate_graph, run_experiment, Verdict};

/// Experiment runner for LOCAL-model algorithms and locally checkable
/// labelings.
///
/// Exit codes: 0 = ok, 1 = a correctness claim was falsified, 2 = error.
#[derive(Parser)]
#[command(name = "lcl-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's trial count.
    #[arg(long)]
    trials: Option<u64>,
    /// Directory for CSV/JSON outputs.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the configured graph as an edge-list file.
    Gen {
        #[command(flatten)]
        common: CommonArgs,
        /// Output file for the edge list.
        #[arg(long, default_value = "graph.txt")]
        out: PathBuf,
    },
    /// Run an algorithm against a problem (config kind `run` or `sweep`).
    Run(CommonArgs),
    /// Probe a claimed 2-coloring algorithm with the identifier-swap
    /// construction.
    Adversary(CommonArgs),
    /// Run a nominal-size algorithm on an oversized host through
    /// power-graph pseudo-identifiers.
    Bridge(CommonArgs),
    /// Check an adaptive window rule along sampled aperiodic sequences.
    Shift(CommonArgs),
    /// Check the interval 3-coloring of an irrational rotation.
    Rotation(CommonArgs),
    /// Summarize the artifacts in an output directory.
    Report {
        /// Directory holding experiment outputs.
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
}

fn load_config(common: &CommonArgs) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(&common.config)
        .with_context(|| format!("reading {}", common.config.display()))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = common.trials {
        cfg.trials = trials;
    }
    if let Some(jobs) = common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    Ok(cfg)
}

fn expect_kind(cfg: &ExperimentConfig, allowed: &[Kind]) -> Result<()> {
    if allowed.contains(&cfg.kind) {
        Ok(())
    } else {
        bail!(
            "this subcommand handles {allowed:?} configs, the file says {:?}",
            cfg.kind
        )
    }
}

fn dispatch(cli: Cli) -> Result<Verdict> {
    match cli.command {
        Command::Gen { common, out } => {
            let cfg = load_config(&common)?;
            let g = generate_graph(&cfg, &out)?;
            println!(
                "wrote {} ({} vertices, {} edges)",
                out.display(),
                g.n(),
                g.edge_count()
            );
            Ok(Verdict::Ok)
        }
        Command::Run(common) => {
            let cfg = load_config(&common)?;
            expect_kind(&cfg, &[Kind::Run, Kind::Sweep])?;
            run_with_dir(&cfg, &common)
        }
        Command::Adversary(common) => {
            let cfg = load_config(&common)?;
            expect_kind(&cfg, &[Kind::Adversary])?;
            run_with_dir(&cfg, &common)
        }
        Command::Bridge(common) => {
            let cfg = load_config(&common)?;
            expect_kind(&cfg, &[Kind::Bridge])?;
            run_with_dir(&cfg, &common)
        }
        Command::Shift(common) => {
            let cfg = load_config(&common)?;
            expect_kind(&cfg, &[Kind::Shift])?;
            run_with_dir(&cfg, &common)
        }
        Command::Rotation(common) => {
            let cfg = load_config(&common)?;
            expect_kind(&cfg, &[Kind::Rotation])?;
            run_with_dir(&cfg, &common)
        }
        Command::Report { out_dir } => {
            lcl_lab::report::print(&out_dir)?;
            Ok(Verdict::Ok)
        }
    }
}

fn run_with_dir(cfg: &ExperimentConfig, common: &CommonArgs) -> Result<Verdict> {
    let out_dir = cfg
        .out_dir
        .clone()
        .unwrap_or_else(|| common.out_dir.clone());
    let verdict = run_experiment(cfg, &out_dir)?;
    println!(
        "{} -> {}",
        out_dir.display(),
        match verdict {
            Verdict::Ok => "ok",
            Verdict::Falsified => "falsified",
        }
    );
    Ok(verdict)
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(Verdict::Ok) => ExitCode::from(0),
        Ok(Verdict::Falsified) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
