//! `bgt`: classify games, fit and cross-validate behavioral models, and
//! analyze parameter posteriors from the command line.
//!
//! Every command writes UTF-8 CSV files into `--out`. Each file starts with
//! `#` comment lines that embed the full run configuration, and is written
//! atomically once the command has finished. The exit code is non-zero
//! whenever any requested output could not be produced.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bgt", version, about = "Behavioral game theory models of initial play")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dominance and equilibrium classification of every game, with feature counts.
    Classify(DataArgs),
    /// Maximum-likelihood fits on the full dataset.
    Fit(FitArgs),
    /// Repeated k-fold cross-validation and likelihood ratios against uniform play.
    Cv(CvArgs),
    /// Posterior distribution of one model's parameters.
    Posterior(PosteriorArgs),
    /// Principal-branch QRE path of each game.
    QrePath(QrePathArgs),
    /// Synthetic observations drawn from a model.
    Generate(GenerateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Dataset manifest (JSON); repeat to combine several sources.
    #[arg(long = "manifest", required = true)]
    manifests: Vec<PathBuf>,
    /// Keep only games with this feature (D1, D2, D2s, DS, DSs, ND, PSNE1, MSNE1, MultiEqm).
    #[arg(long)]
    filter: Option<String>,
    /// Draw this many plays from every source before combining them.
    #[arg(long)]
    subsample_per_source: Option<usize>,
    /// Seed for every stochastic step.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Comma-separated model names from the registry.
    #[arg(long, value_delimiter = ',', required = true)]
    models: Vec<String>,
    /// Optimizer restarts per fit.
    #[arg(long, default_value_t = bgt::estimation::DEFAULT_RESTARTS)]
    restarts: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FoldUnitArg {
    Obs,
    Game,
}

#[derive(Args, Debug)]
struct CvArgs {
    #[command(flatten)]
    fit: FitArgs,
    #[arg(long, default_value_t = 10)]
    rounds: usize,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, value_enum, default_value_t = FoldUnitArg::Obs)]
    fold_unit: FoldUnitArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PosteriorMethod {
    Grid,
    Ais,
}

#[derive(Args, Debug)]
struct PosteriorArgs {
    #[command(flatten)]
    data: DataArgs,
    /// The model to analyze.
    #[arg(long)]
    model: String,
    #[arg(long, value_enum, default_value_t = PosteriorMethod::Ais)]
    method: PosteriorMethod,
    /// AIS chains.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Grid lower bound (grid method, single-parameter models).
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    #[arg(long, default_value_t = 10.0)]
    hi: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Credible-interval masses to report.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.95, 0.99])]
    mass: Vec<f64>,
}

#[derive(Args, Debug)]
struct QrePathArgs {
    /// Game JSON files; repeat for several games.
    #[arg(long = "game", required_unless_present = "manifests")]
    games: Vec<PathBuf>,
    /// Or take the games of these dataset manifests.
    #[arg(long = "manifest")]
    manifests: Vec<PathBuf>,
    /// Largest precision on the path.
    #[arg(long, default_value_t = 1.0)]
    lambda_max: f64,
    /// Number of evenly spaced path points.
    #[arg(long, default_value_t = 50)]
    steps: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureSet {
    Classic,
    Pool,
    Recovery,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// The generating model.
    #[arg(long)]
    model: String,
    /// Parameter values as `name=value` pairs, comma separated.
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    /// Games from a dataset manifest.
    #[arg(long = "manifest", conflicts_with = "fixture")]
    manifests: Vec<PathBuf>,
    /// Or one of the bundled game sets.
    #[arg(long, value_enum)]
    fixture: Option<FixtureSet>,
    /// Number of plays to draw.
    #[arg(long)]
    n_obs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Source name recorded in the manifest; combined datasets prefix game
    /// ids with it, so give each generated source its own name.
    #[arg(long, default_value = "synthetic")]
    source: String,
    /// Output directory for the dataset manifest, games and observations.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(args) => commands::classify(&args),
        Command::Fit(args) => commands::fit(&args.data, &args.models, args.restarts),
        Command::Cv(args) => commands::cv(
            &args.fit.data,
            &args.fit.models,
            args.fit.restarts,
            args.rounds,
            args.folds,
            args.fold_unit,
        ),
        Command::Posterior(args) => commands::posterior(&commands::PosteriorRequest {
            data: &args.data,
            model: &args.model,
            method: args.method,
            samples: args.samples,
            grid: (args.lo, args.hi, args.step),
            masses: &args.mass,
        }),
        Command::QrePath(args) => {
            commands::qre_path(&args.games, &args.manifests, args.lambda_max, args.steps, &args.out)
        }
        Command::Generate(args) => commands::generate(&commands::GenerateRequest {
            model: &args.model,
            params: &args.params,
            manifests: &args.manifests,
            fixture: args.fixture,
            n_obs: args.n_obs,
            seed: args.seed,
            source: &args.source,
            out: &args.out,
        }),
    };
    match result {
        Ok(commands::Outcome::Complete) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Partial(failures)) => {
            for f in failures {
                log::error!("{f}");
            }
            ExitCode::FAILURE
        }
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::FAILURE
        }
    }
}
