use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use randspec_cli::config::parse_seed;
use randspec_cli::{compare_runs, run_experiment_with, ConfigLayer, Ensemble, Profile, RunManifest, Stages};

#[derive(Parser)]
#[command(
    name = "randspec",
    version,
    about = "Seeded spectral statistics of random matrices and random graphs"
)]
struct Cli {
    /// Repeat for more log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write ensemble instances: graph.edges, points.csv or matrix.csv.
    Generate(ExperimentArgs),
    /// Write eigenvalues.csv per replica.
    Spectrum(ExperimentArgs),
    /// Write bulk, spacing, quantile and localization tables.
    Stats(ExperimentArgs),
    /// Write nodal.csv per replica (graph ensembles).
    Nodal(ExperimentArgs),
    /// Full pipeline.
    Run(RunArgs),
    /// Compare the spacing samples of two finished runs.
    Compare(CompareArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    /// key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    ensemble: Option<Ensemble>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long, value_parser = parse_seed)]
    seed: Option<u64>,
    /// Fraction trimmed from each end of the spectrum before spacings.
    #[arg(long)]
    trim: Option<f64>,
    /// Localization bin width.
    #[arg(long)]
    bin: Option<f64>,
    /// Bulk histogram bin width.
    #[arg(long)]
    bulk_bin: Option<f64>,
    /// Edge-list file for the imported-map ensemble.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    profile: Option<Profile>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Re-run the configuration recorded in a manifest.
    #[arg(long, conflicts_with = "config")]
    replay: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    run_a: PathBuf,
    run_b: PathBuf,
    /// Also write ks.csv and qq.csv to this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn layer(&self) -> randspec_cli::Result<ConfigLayer> {
        let base = match &self.config {
            Some(path) => ConfigLayer::from_file(path)?,
            None => ConfigLayer::default(),
        };
        Ok(base.merge(ConfigLayer {
            ensemble: self.ensemble,
            size: self.size,
            degree: self.degree,
            replicas: self.replicas,
            seed: self.seed,
            trim: self.trim,
            bin: self.bin,
            bulk_bin: self.bulk_bin,
            out: self.out.clone(),
            input: self.input.clone(),
            profile: self.profile,
        }))
    }
}

fn experiment(args: &ExperimentArgs, stages: Stages) -> randspec_cli::Result<()> {
    let cfg = args.layer()?.resolve()?;
    report(run_experiment_with(&cfg, stages, args.workers)?);
    Ok(())
}

fn report(manifest: RunManifest) {
    println!(
        "{} n={} replicas={}: {} files in {} ({:.1}s)",
        manifest.config.ensemble.name(),
        manifest.config.size,
        manifest.config.replicas,
        manifest.files.len(),
        manifest.config.output_dir.display(),
        manifest.timings.total_seconds
    );
}

fn run(args: &RunArgs) -> randspec_cli::Result<()> {
    let Some(path) = &args.replay else {
        return experiment(&args.experiment, Stages::ALL);
    };
    let recorded = RunManifest::load(path)?;
    let mut cfg = recorded.config;
    if let Some(out) = &args.experiment.out {
        cfg.output_dir = out.clone();
    }
    report(run_experiment_with(&cfg, recorded.stages, args.experiment.workers)?);
    Ok(())
}

fn compare(args: &CompareArgs) -> randspec_cli::Result<()> {
    let cmp = compare_runs(&args.run_a, &args.run_b)?;
    println!("label,n_a,n_b,ks");
    for r in &cmp.rows {
        println!("{},{},{},{:.6}", r.label, r.n_a, r.n_b, r.ks);
    }
    if let Some(dir) = &args.out {
        cmp.write(dir)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match &cli.command {
        Command::Generate(a) => experiment(a, Stages::GENERATE),
        Command::Spectrum(a) => experiment(a, Stages::SPECTRUM),
        Command::Stats(a) => experiment(a, Stages::STATS),
        Command::Nodal(a) => experiment(a, Stages::NODAL),
        Command::Run(a) => run(a),
        Command::Compare(a) => compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
