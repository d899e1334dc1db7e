//! The subcommands. Each one builds its reports in memory and commits them
//! together at the end.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

use bgt::data::{game_features, generate_synthetic, io::read_game, save_dataset, GameFeatures};
use bgt::estimation::{cross_validate_with, fit_mle, nee_bounds, CountTable, FitOptions, FoldPlan, FoldUnit};
use bgt::nash::EquilibriumStructure;
use bgt::posterior::{
    ais_with, credible_interval, grid_posterior_1d, marginal_cdf, AisOptions, PosteriorSampleSet,
};
use bgt::qre::qre_path as solve_qre_path;
use bgt::{fixtures, Dataset, FeatureFilter, Game, ModelSpec, ParameterVector, Player};

use crate::config::{assemble_dataset, load_sources, resolve_models, FoldPlanConfig, RunConfig};
use crate::report::{commit, format_params, Report};
use crate::{DataArgs, FixtureSet, FoldUnitArg, PosteriorMethod};

/// How a command ended when it did not fail outright.
pub enum Outcome {
    Complete,
    /// Reports were written, but some requested results are missing.
    Partial(Vec<String>),
}

impl Outcome {
    fn from_failures(failures: Vec<String>) -> Self {
        if failures.is_empty() {
            Self::Complete
        } else {
            Self::Partial(failures)
        }
    }
}

/// Below this effective sample size an AIS run is reported as collapsed.
const MIN_EFFECTIVE_SAMPLES: f64 = 10.0;

fn structure_name(s: EquilibriumStructure) -> &'static str {
    match s {
        EquilibriumStructure::SinglePure => "single-pure",
        EquilibriumStructure::SingleMixed => "single-mixed",
        EquilibriumStructure::Multiple => "multiple",
    }
}

fn feature_names(features: &GameFeatures) -> String {
    FeatureFilter::ALL
        .iter()
        .filter(|f| f.matches(features))
        .map(|f| f.name())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn classify(data: &DataArgs) -> Result<Outcome> {
    let config = RunConfig::new("classify", &data.out).with_data(data);
    let sources = load_sources(&data.manifests)?;
    let mut games = Report::new(
        "classify.csv",
        &[
            "source",
            "game_id",
            "rows",
            "cols",
            "strict_solvable",
            "strict_rounds",
            "weak_solvable",
            "weak_rounds",
            "equilibria",
            "structure",
            "degenerate",
            "features",
        ],
    )?;
    // counts[source][feature index in FeatureFilter::ALL]
    let mut counts = vec![[0usize; FeatureFilter::ALL.len()]; sources.len()];
    let mut totals = vec![0usize; sources.len()];
    let wanted = crate::config::parse_filter(data.filter.as_deref())?;
    for (s, source) in sources.iter().enumerate() {
        for game in source.games() {
            let features = game_features(game)?;
            if wanted.is_some_and(|f| !f.matches(&features)) {
                continue;
            }
            totals[s] += 1;
            for (i, f) in FeatureFilter::ALL.iter().enumerate() {
                if f.matches(&features) {
                    counts[s][i] += 1;
                }
            }
            let (rows, cols) = game.shape();
            let d = features.dominance;
            games.row((
                source.source(),
                game.id(),
                rows,
                cols,
                d.solvable_strict,
                d.rounds_strict,
                d.solvable_weak,
                d.rounds_weak,
                game.equilibria()?.len(),
                structure_name(features.structure),
                features.degenerate,
                feature_names(&features),
            ))?;
        }
    }
    let mut columns = vec!["feature"];
    columns.extend(sources.iter().map(|d| d.source()));
    columns.push("all");
    let mut table = Report::new("classify_counts.csv", &columns)?;
    let mut write_counts = |label: &str, per_source: Vec<usize>| -> Result<()> {
        let total: usize = per_source.iter().sum();
        let mut record = vec![label.to_string()];
        record.extend(per_source.iter().map(usize::to_string));
        record.push(total.to_string());
        table.row(record)
    };
    write_counts("games", totals)?;
    for (i, f) in FeatureFilter::ALL.iter().enumerate() {
        let per_source = counts.iter().map(|c| c[i]).collect();
        write_counts(f.name(), per_source)?;
    }
    commit(&data.out, &config, vec![games, table])?;
    Ok(Outcome::Complete)
}

pub fn fit(data: &DataArgs, models: &[String], restarts: usize) -> Result<Outcome> {
    let resolved = resolve_models(models)?;
    let config = RunConfig::new("fit", &data.out)
        .with_data(data)
        .option("restarts", restarts);
    let config = RunConfig { models: models.to_vec(), ..config };
    let dataset = assemble_dataset(data)?;
    let uniform_ll = CountTable::from_dataset(&dataset).uniform_log_likelihood();
    let mut report = Report::new(
        "fit.csv",
        &[
            "model",
            "status",
            "parameters",
            "log_likelihood",
            "log10_ratio_vs_uniform",
            "converged",
            "evaluations",
            "estimates",
            "error",
        ],
    )?;
    let mut failures = Vec::new();
    for (name, spec) in &resolved {
        log::info!("fitting {name}");
        match fit_mle(spec, &dataset, restarts, data.seed) {
            Ok(fit) => report.row((
                name,
                "ok",
                spec.num_parameters(),
                fit.train_log_likelihood,
                (fit.train_log_likelihood - uniform_ll) / std::f64::consts::LN_10,
                fit.converged,
                fit.evaluations,
                format_params(fit.params.iter()),
                "",
            ))?,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                report.row((
                    name,
                    "failed",
                    spec.num_parameters(),
                    None::<f64>,
                    None::<f64>,
                    None::<bool>,
                    None::<usize>,
                    "",
                    e.to_string(),
                ))?;
            }
        }
    }
    commit(&data.out, &config, vec![report])?;
    Ok(Outcome::from_failures(failures))
}

pub fn cv(
    data: &DataArgs,
    models: &[String],
    restarts: usize,
    rounds: usize,
    folds: usize,
    fold_unit: FoldUnitArg,
) -> Result<Outcome> {
    let resolved = resolve_models(models)?;
    let mut config = RunConfig::new("cv", &data.out)
        .with_data(data)
        .option("restarts", restarts);
    config.models = models.to_vec();
    config.fold_plan = Some(FoldPlanConfig { rounds, folds, fold_unit });
    let dataset = assemble_dataset(data)?;
    let unit = match fold_unit {
        FoldUnitArg::Obs => FoldUnit::Observation,
        FoldUnitArg::Game => FoldUnit::Game,
    };
    let plan = FoldPlan::new(&dataset, unit, folds, rounds, data.seed)?;
    let options = FitOptions::new(restarts, data.seed);

    let mut table = Report::new(
        "cv.csv",
        &[
            "model",
            "status",
            "parameters",
            "mean_test_log_likelihood",
            "ci95_half_width",
            "uniform_log_likelihood",
            "log10_ratio",
            "log10_ci95_half_width",
            "nee_best_log10_ratio",
            "nee_worst_log10_ratio",
            "error",
        ],
    )?;
    let mut bars = Report::new("cv_ratios.csv", &["model", "log10_ratio", "ci95_low", "ci95_high"])?;
    let mut failures = Vec::new();
    for (name, spec) in &resolved {
        log::info!("cross-validating {name}");
        let result = if *spec == ModelSpec::Nee {
            nee_bounds(&dataset, &plan, None).map(|b| (b.average, Some((b.best, b.worst))))
        } else {
            cross_validate_with(spec, &dataset, &plan, &options).map(|r| (r.score, None))
        };
        match result {
            Ok((score, nee)) => {
                let half = score.ci_half_width / std::f64::consts::LN_10;
                let ratio = score.log10_ratio();
                table.row((
                    name,
                    "ok",
                    spec.num_parameters(),
                    score.mean,
                    score.ci_half_width,
                    score.uniform_log_likelihood,
                    ratio,
                    half,
                    nee.as_ref().map(|(b, _)| b.log10_ratio()),
                    nee.as_ref().map(|(_, w)| w.log10_ratio()),
                    "",
                ))?;
                bars.row((name, ratio, ratio - half, ratio + half))?;
            }
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                table.row((
                    name,
                    "failed",
                    spec.num_parameters(),
                    None::<f64>,
                    None::<f64>,
                    None::<f64>,
                    None::<f64>,
                    None::<f64>,
                    None::<f64>,
                    None::<f64>,
                    e.to_string(),
                ))?;
            }
        }
    }
    commit(&data.out, &config, vec![table, bars])?;
    Ok(Outcome::from_failures(failures))
}

pub struct PosteriorRequest<'a> {
    pub data: &'a DataArgs,
    pub model: &'a str,
    pub method: PosteriorMethod,
    pub samples: usize,
    pub grid: (f64, f64, f64),
    pub masses: &'a [f64],
}

pub fn posterior(req: &PosteriorRequest<'_>) -> Result<Outcome> {
    let data = req.data;
    let (name, spec) = resolve_models(&[req.model.to_string()])?.remove(0);
    let mut config = RunConfig::new("posterior", &data.out)
        .with_data(data)
        .option("method", req.method)
        .option("masses", req.masses);
    config.models = vec![name];
    if let Some(m) = req.masses.iter().find(|m| !(**m > 0.0 && **m < 1.0)) {
        bail!("credible mass {m} is not in (0, 1)");
    }
    let dataset = assemble_dataset(data)?;
    let mut cdf = Report::new("posterior_cdf.csv", &["parameter", "value", "cdf"])?;
    let mut intervals = Report::new(
        "posterior_intervals.csv",
        &["parameter", "mass", "lower", "upper", "mean", "sd", "effective_samples", "acceptance_rate"],
    )?;
    let mut failures = Vec::new();
    match req.method {
        PosteriorMethod::Grid => {
            let (lo, hi, step) = req.grid;
            config = config.option("grid", [lo, hi, step]);
            let names = spec.parameter_names();
            let [parameter] = names.as_slice() else {
                bail!("the grid method needs a one-parameter model; {} has {}", spec.name(), names.len());
            };
            let grid = grid_posterior_1d(&spec, &dataset, lo, hi, step)?;
            let table = grid.table();
            let mut acc = 0.0;
            for (value, p) in table {
                acc += p;
                cdf.row((parameter, value, acc.min(1.0)))?;
            }
            let samples = grid.to_samples()?;
            let sd = samples.weighted_sd(parameter)?;
            for &mass in req.masses {
                let (lower, upper) = grid.credible_interval(mass)?;
                intervals.row((parameter, mass, lower, upper, grid.mean(), sd, None::<f64>, None::<f64>))?;
            }
        }
        PosteriorMethod::Ais => {
            config = config.option("samples", req.samples);
            let options = AisOptions::new(req.samples, data.seed);
            let samples = ais_with(&spec, &dataset, &options)?;
            let ess = samples.effective_sample_size();
            if ess < MIN_EFFECTIVE_SAMPLES {
                failures.push(format!(
                    "AIS weights collapsed: effective sample size {ess:.1} of {} samples",
                    samples.len()
                ));
            }
            write_sample_reports(&samples, &spec, req.masses, &mut cdf, &mut intervals)?;
        }
    }
    commit(&data.out, &config, vec![cdf, intervals])?;
    Ok(Outcome::from_failures(failures))
}

fn write_sample_reports(
    samples: &PosteriorSampleSet,
    spec: &ModelSpec,
    masses: &[f64],
    cdf: &mut Report,
    intervals: &mut Report,
) -> Result<()> {
    let ess = samples.effective_sample_size();
    for parameter in spec.parameter_names() {
        for (value, c) in marginal_cdf(samples, &parameter)? {
            cdf.row((&parameter, value, c))?;
        }
        let mean = samples.weighted_mean(&parameter)?;
        let sd = samples.weighted_sd(&parameter)?;
        for &mass in masses {
            let (lower, upper) = credible_interval(samples, &parameter, mass)?;
            intervals.row((&parameter, mass, lower, upper, mean, sd, ess, samples.acceptance_rate))?;
        }
    }
    Ok(())
}

pub fn qre_path(
    game_paths: &[PathBuf],
    manifests: &[PathBuf],
    lambda_max: f64,
    steps: usize,
    out: &Path,
) -> Result<Outcome> {
    let mut config = RunConfig::new("qre-path", out)
        .option("games", game_paths)
        .option("lambda_max", lambda_max)
        .option("steps", steps);
    config.manifests = manifests.to_vec();
    let mut games: Vec<Game> = game_paths
        .iter()
        .map(|p| read_game(p).with_context(|| format!("loading {}", p.display())))
        .collect::<Result<_>>()?;
    for source in load_sources(manifests)? {
        games.extend(source.games().cloned());
    }
    let mut report = Report::new(
        "qre_path.csv",
        &["game_id", "lambda", "residual", "player", "action_index", "action", "probability"],
    )?;
    let mut failures = Vec::new();
    for game in &games {
        match solve_qre_path(game, lambda_max, steps) {
            Ok(path) => {
                for point in path {
                    for player in [Player::Row, Player::Col] {
                        let labels = game.action_labels(player);
                        for (a, p) in point.profile.get(player).probs().iter().enumerate() {
                            report.row((
                                game.id(),
                                point.lambda,
                                point.residual,
                                player.role(),
                                a,
                                &labels[a],
                                p,
                            ))?;
                        }
                    }
                }
            }
            Err(e) => failures.push(format!("{}: {e}", game.id())),
        }
    }
    commit(out, &config, vec![report])?;
    Ok(Outcome::from_failures(failures))
}

pub struct GenerateRequest<'a> {
    pub model: &'a str,
    pub params: &'a [String],
    pub manifests: &'a [PathBuf],
    pub fixture: Option<FixtureSet>,
    pub n_obs: usize,
    pub seed: u64,
    pub source: &'a str,
    pub out: &'a Path,
}

fn parse_params(spec: &ModelSpec, pairs: &[String]) -> Result<ParameterVector> {
    let mut given = BTreeMap::new();
    for pair in pairs.iter().filter(|p| !p.trim().is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| anyhow!("parameter `{pair}` is not of the form name=value"))?;
        let v: f64 = v.trim().parse().with_context(|| format!("parameter `{pair}`"))?;
        given.insert(k.trim().to_string(), v);
    }
    let names = spec.parameter_names();
    let values = names
        .iter()
        .map(|n| given.remove(n).ok_or_else(|| anyhow!("missing parameter `{n}` for {}", spec.name())))
        .collect::<Result<Vec<_>>>()?;
    if let Some(extra) = given.keys().next() {
        bail!("{} has no parameter `{extra}` (expected {})", spec.name(), names.join(", "));
    }
    Ok(spec.parameter_vector(&values)?)
}

pub fn generate(req: &GenerateRequest<'_>) -> Result<Outcome> {
    let (_, spec) = resolve_models(&[req.model.to_string()])?.remove(0);
    let theta = parse_params(&spec, req.params)?;
    let games: Vec<Game> = match req.fixture {
        Some(FixtureSet::Classic) => fixtures::classic_games(),
        Some(FixtureSet::Pool) => fixtures::feature_pool(),
        Some(FixtureSet::Recovery) => fixtures::recovery_games(),
        None if req.manifests.is_empty() => bail!("give --manifest or --fixture"),
        None => Dataset::merge(&load_sources(req.manifests)?, "games")?.games().cloned().collect(),
    };
    let config = RunConfig {
        models: vec![req.model.to_string()],
        manifests: req.manifests.to_vec(),
        seed: Some(req.seed),
        ..RunConfig::new("generate", req.out)
    }
    .option("params", format_params(theta.iter()))
    .option("fixture", req.fixture)
    .option("n_obs", req.n_obs)
    .option("source", req.source);
    let dataset = generate_synthetic(&spec, &theta, &games, req.n_obs, req.seed)?;
    let dataset = Dataset::merge(&[dataset], req.source)?;
    if req.out.join("manifest.json").exists() {
        bail!("{} already holds a dataset", req.out.display());
    }
    fs::create_dir_all(req.out).with_context(|| format!("creating {}", req.out.display()))?;
    // Stage the dataset next to its destination and move it into place,
    // manifest last, so an interrupted run never leaves a loadable manifest
    // pointing at missing files.
    let staging = tempfile::tempdir_in(req.out)?;
    save_dataset(&dataset, staging.path())?;
    let provenance = serde_json::to_string_pretty(&config)?;
    fs::write(staging.path().join("run_config.json"), provenance)?;
    for entry in ["games", "observations.csv", "run_config.json", "manifest.json"] {
        let target = req.out.join(entry);
        if entry == "games" && target.exists() {
            fs::remove_dir_all(&target)?;
        }
        fs::rename(staging.path().join(entry), &target)
            .with_context(|| format!("writing {}", target.display()))?;
    }
    log::info!(
        "wrote {} observations over {} games to {}",
        dataset.total_count(),
        dataset.num_games(),
        req.out.join("manifest.json").display()
    );
    Ok(Outcome::Complete)
}
