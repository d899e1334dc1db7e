//! Repeated k-fold cross-validation.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::estimation::fit::{fit_counts, FitOptions, FitResult};
use crate::estimation::likelihood::CountTable;
use crate::math::mean_and_sd;
use crate::models::ModelSpec;
use crate::rng::{derive_seed, stream_rng};

/// What a fold is made of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FoldUnit {
    /// Individual plays, so a game's data is spread across folds.
    Observation,
    /// Whole games: every play of a game lands in one fold.
    Game,
}

/// Fold assignments for every round, reproducible from the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub unit: FoldUnit,
    pub folds: usize,
    pub rounds: usize,
    pub seed: u64,
    /// `assignments[round][unit]` is the fold holding that unit.
    assignments: Vec<Vec<usize>>,
}

/// The units of `dataset`: observation-row indices, one per play, or game
/// indices in id order.
fn units(dataset: &Dataset, unit: FoldUnit) -> Vec<usize> {
    match unit {
        FoldUnit::Observation => dataset.unit_rows(),
        FoldUnit::Game => (0..game_ids(dataset).len()).collect(),
    }
}

/// Ids of games that have at least one observation, sorted.
fn game_ids(dataset: &Dataset) -> Vec<&str> {
    let mut ids: Vec<&str> = dataset.observations().iter().map(|o| o.game_id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

impl FoldPlan {
    pub fn new(dataset: &Dataset, unit: FoldUnit, folds: usize, rounds: usize, seed: u64) -> Result<Self> {
        if folds < 2 {
            return Err(Error::InvalidPlan(format!("need at least 2 folds, got {folds}")));
        }
        if rounds < 1 {
            return Err(Error::InvalidPlan("need at least one round".into()));
        }
        let n = units(dataset, unit).len();
        if n < folds {
            return Err(Error::TooFewUnits { units: n, folds });
        }
        let assignments = (0..rounds)
            .map(|r| {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut stream_rng(derive_seed(seed, &[0xf01d]), r as u64));
                let mut fold_of = vec![0; n];
                for (pos, &u) in order.iter().enumerate() {
                    fold_of[u] = pos % folds;
                }
                fold_of
            })
            .collect();
        Ok(Self {
            unit,
            folds,
            rounds,
            seed,
            assignments,
        })
    }

    /// Ten rounds of ten-fold cross-validation over individual plays.
    pub fn standard(dataset: &Dataset, seed: u64) -> Result<Self> {
        Self::new(dataset, FoldUnit::Observation, 10, 10, seed)
    }

    pub fn assignments(&self, round: usize) -> &[usize] {
        &self.assignments[round]
    }

    /// Per-row observation counts of the training and test parts.
    pub fn split_counts(&self, dataset: &Dataset, round: usize, fold: usize) -> (Vec<u64>, Vec<u64>) {
        let rows = dataset.observations().len();
        let mut test = vec![0u64; rows];
        let assign = &self.assignments[round];
        match self.unit {
            FoldUnit::Observation => {
                for (u, &row) in dataset.unit_rows().iter().enumerate() {
                    if assign[u] == fold {
                        test[row] += 1;
                    }
                }
            }
            FoldUnit::Game => {
                let index: BTreeMap<&str, usize> =
                    game_ids(dataset).into_iter().enumerate().map(|(i, id)| (id, i)).collect();
                for (row, obs) in dataset.observations().iter().enumerate() {
                    if assign[index[obs.game_id.as_str()]] == fold {
                        test[row] = obs.count;
                    }
                }
            }
        }
        let train = dataset
            .observations()
            .iter()
            .zip(&test)
            .map(|(o, &t)| o.count - t)
            .collect();
        (train, test)
    }

    fn check(&self, dataset: &Dataset) -> Result<()> {
        let n = units(dataset, self.unit).len();
        if self.assignments.first().map(Vec::len) != Some(n) {
            return Err(Error::InvalidPlan(format!(
                "plan covers {} units, dataset has {n}",
                self.assignments.first().map_or(0, Vec::len)
            )));
        }
        Ok(())
    }
}

/// 95% Student's-t confidence-interval half-width for the mean of `values`.
pub fn t_half_width(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let (_, sd) = mean_and_sd(values);
    let dof = (values.len() - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, dof).expect("positive dof").inverse_cdf(0.975);
    t * sd / (values.len() as f64).sqrt()
}

/// Cross-validated test log likelihood of one model.
///
/// A round's score is the summed held-out log likelihood over its folds, i.e.
/// a log likelihood for the whole dataset in which every play was predicted by
/// a model that never saw it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvScore {
    pub model: String,
    pub round_scores: Vec<f64>,
    pub mean: f64,
    pub ci_half_width: f64,
    pub folds: usize,
    /// Log likelihood of uniform play on the same dataset.
    pub uniform_log_likelihood: f64,
    pub observations: u64,
}

impl CvScore {
    pub fn from_rounds(model: impl Into<String>, round_scores: Vec<f64>, folds: usize, dataset: &Dataset) -> Self {
        let (mean, _) = mean_and_sd(&round_scores);
        let table = CountTable::from_dataset(dataset);
        Self {
            model: model.into(),
            ci_half_width: t_half_width(&round_scores),
            mean,
            round_scores,
            folds,
            uniform_log_likelihood: table.uniform_log_likelihood(),
            observations: table.total(),
        }
    }

    /// Mean held-out log likelihood of a single fold.
    pub fn per_fold_mean(&self) -> f64 {
        self.mean / self.folds as f64
    }

    /// Natural-log likelihood ratio against uniform play.
    pub fn ln_ratio(&self) -> f64 {
        self.mean - self.uniform_log_likelihood
    }

    /// Base-10 likelihood ratio against uniform play.
    pub fn log10_ratio(&self) -> f64 {
        self.ln_ratio() / std::f64::consts::LN_10
    }
}

/// `log₁₀` of the model's cross-validated likelihood over uniform play.
pub fn likelihood_ratio_vs_uniform(score: &CvScore, dataset: &Dataset) -> f64 {
    (score.mean - CountTable::from_dataset(dataset).uniform_log_likelihood()) / std::f64::consts::LN_10
}

/// Result of cross-validation with the fits of every fold.
#[derive(Debug, Clone)]
pub struct CvReport {
    pub score: CvScore,
    /// `fits[round][fold]`.
    pub fits: Vec<Vec<FitResult>>,
}

pub fn cross_validate(model: &ModelSpec, dataset: &Dataset, plan: &FoldPlan) -> Result<CvScore> {
    cross_validate_with(model, dataset, plan, &FitOptions::new(crate::estimation::DEFAULT_RESTARTS, plan.seed))
        .map(|r| r.score)
}

/// Cross-validation with explicit fit options. Each (round, fold) fit uses a
/// seed derived from `options.seed` and its coordinates.
pub fn cross_validate_with(
    model: &ModelSpec,
    dataset: &Dataset,
    plan: &FoldPlan,
    options: &FitOptions,
) -> Result<CvReport> {
    plan.check(dataset)?;
    let cells: Vec<(usize, usize)> = (0..plan.rounds)
        .flat_map(|r| (0..plan.folds).map(move |f| (r, f)))
        .collect();
    let results: Vec<(f64, FitResult)> = cells
        .par_iter()
        .map(|&(round, fold)| {
            let (train, test) = plan.split_counts(dataset, round, fold);
            let train = CountTable::from_row_counts(dataset, &train);
            let test = CountTable::from_row_counts(dataset, &test);
            let opts = FitOptions {
                seed: derive_seed(options.seed, &[round as u64, fold as u64]),
                ..options.clone()
            };
            let fit = fit_counts(model, &train, &opts)?;
            let score = test.log_likelihood(model, &fit.params)?;
            Ok((score, fit))
        })
        .collect::<Result<_>>()?;
    let mut round_scores = vec![0.0; plan.rounds];
    let mut fits = vec![Vec::with_capacity(plan.folds); plan.rounds];
    for (&(round, _), (score, fit)) in cells.iter().zip(results) {
        round_scores[round] += score;
        fits[round].push(fit);
    }
    Ok(CvReport {
        score: CvScore::from_rounds(model.name(), round_scores, plan.folds, dataset),
        fits,
    })
}
