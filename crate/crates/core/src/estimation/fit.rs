use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::estimation::likelihood::CountTable;
use crate::estimation::nelder_mead::{minimize, NelderMeadOptions};
use crate::estimation::transform::Transform;
use crate::models::{ModelSpec, ParameterVector};
use crate::posterior::PriorSpec;
use crate::rng::stream_rng;

pub const DEFAULT_RESTARTS: usize = 10;

#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Random starts drawn from `prior`.
    pub restarts: usize,
    pub seed: u64,
    pub prior: PriorSpec,
    pub nelder_mead: NelderMeadOptions,
    /// Extra starting points, searched before the random ones.
    pub warm_starts: Vec<ParameterVector>,
}

impl FitOptions {
    pub fn new(restarts: usize, seed: u64) -> Self {
        Self {
            restarts,
            seed,
            prior: PriorSpec::default(),
            nelder_mead: NelderMeadOptions::default(),
            warm_starts: Vec::new(),
        }
    }

    pub fn with_warm_start(mut self, theta: ParameterVector) -> Self {
        self.warm_starts.push(theta);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: String,
    pub params: ParameterVector,
    pub train_log_likelihood: f64,
    /// Number of searches run (warm starts plus random restarts).
    pub restarts_used: usize,
    /// Whether the winning search met its convergence criterion.
    pub converged: bool,
    pub evaluations: usize,
}

/// Maximum likelihood fit with `restarts` random starts.
pub fn fit_mle(model: &ModelSpec, dataset: &Dataset, restarts: usize, seed: u64) -> Result<FitResult> {
    fit_counts(model, &CountTable::from_dataset(dataset), &FitOptions::new(restarts, seed))
}

/// Maximum likelihood fit on pre-grouped counts.
pub fn fit_counts(model: &ModelSpec, counts: &CountTable, options: &FitOptions) -> Result<FitResult> {
    if counts.is_empty() {
        return Err(Error::InsufficientObservations {
            source_name: "training data".into(),
            needed: 1,
            available: 0,
        });
    }
    let layout = model.parameters();
    let names = model.parameter_names();
    if layout.is_empty() {
        let theta = ParameterVector::empty();
        return Ok(FitResult {
            model: model.name(),
            train_log_likelihood: counts.log_likelihood(model, &theta)?,
            params: theta,
            restarts_used: 0,
            converged: true,
            evaluations: 1,
        });
    }
    let transform = Transform::new(&layout);
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for w in &options.warm_starts {
        model.validate(w)?;
        starts.push(w.values().to_vec());
    }
    for r in 0..options.restarts {
        let mut rng = stream_rng(options.seed, r as u64);
        starts.push(options.prior.sample(&layout, &mut rng)?);
    }
    if starts.is_empty() {
        return Err(Error::InvalidPlan("fit needs at least one start".into()));
    }

    let objective = |z: &[f64]| -> f64 {
        let values = transform.to_constrained(z);
        let theta = ParameterVector::new(names.clone(), values).expect("layout length");
        match counts.log_likelihood(model, &theta) {
            Ok(ll) => -ll,
            Err(e) => {
                log::debug!("{model}: objective failed at {theta}: {e}");
                f64::INFINITY
            }
        }
    };
    let runs: Vec<_> = starts
        .par_iter()
        .map(|start| minimize(objective, &transform.to_unconstrained(start), &options.nelder_mead))
        .collect();
    let evaluations = runs.iter().map(|m| m.evaluations).sum();
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .map(|(_, m)| m)
        .expect("at least one start");
    let theta = ParameterVector::new(names, transform.to_constrained(&best.x))?;
    let ll = counts.log_likelihood(model, &theta)?;
    if !best.converged {
        log::warn!("{model}: best search stopped at the evaluation limit");
    }
    Ok(FitResult {
        model: model.name(),
        params: theta,
        train_log_likelihood: ll,
        restarts_used: starts.len(),
        converged: best.converged,
        evaluations,
    })
}

/// `theta` re-expressed for a larger model: shared names keep their values,
/// names only `target` has are set to `fill`.
pub fn embed_parameters(theta: &ParameterVector, target: &ModelSpec, fill: f64) -> Result<ParameterVector> {
    let names = target.parameter_names();
    let values = names.iter().map(|n| theta.get(n).unwrap_or(fill)).collect();
    let out = ParameterVector::new(names, values)?;
    target.validate(&out)?;
    Ok(out)
}
