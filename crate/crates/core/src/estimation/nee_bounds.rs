//! Test-set bounds for Nash equilibrium with error.
//!
//! In games with several equilibria, which one the population coordinates on
//! is unknown. Each fold fits the noise `ε` on its training part (maximizing
//! the log likelihood expected when every game's equilibrium is drawn
//! uniformly), then scores the test part three ways per game: with the
//! equilibrium that predicts it best, the one that predicts it worst, and the
//! mean over equilibria. Since a mean lies between its extremes,
//! `best ≥ average ≥ worst` holds fold by fold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::estimation::cv::{CvScore, FoldPlan};
use crate::estimation::likelihood::{CountTable, GameCounts};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeeBounds {
    pub best: CvScore,
    pub worst: CvScore,
    pub average: CvScore,
    /// Fitted noise, `epsilons[round][fold]`.
    pub epsilons: Vec<Vec<f64>>,
}

/// Log likelihood of `entry` under each equilibrium with noise `epsilon`.
fn per_equilibrium(entry: &GameCounts, epsilon: f64) -> Result<Vec<f64>> {
    let set = entry.game.equilibria()?;
    Ok(set
        .equilibria
        .iter()
        .map(|eq| {
            let noisy = |probs: &[f64]| {
                let u = 1.0 / probs.len() as f64;
                probs.iter().map(|&p| (1.0 - epsilon) * p + epsilon * u).collect::<Vec<_>>()
            };
            let row = noisy(eq.row.probs());
            let col = noisy(eq.col.probs());
            entry.log_likelihood_of([&row, &col])
        })
        .collect())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Expected log likelihood when each game's equilibrium is drawn uniformly.
pub fn nee_expected_log_likelihood(counts: &CountTable, epsilon: f64) -> Result<f64> {
    let mut total = 0.0;
    for e in counts.entries() {
        total += mean(&per_equilibrium(e, epsilon)?);
    }
    Ok(total)
}

/// Maximizes [`nee_expected_log_likelihood`] over `ε ∈ [0, 1]` by golden
/// section search (the objective is concave in `ε`).
pub fn fit_nee_epsilon(counts: &CountTable) -> Result<f64> {
    // surface enumeration failures before searching
    for e in counts.entries() {
        e.game.equilibria()?;
    }
    let f = |eps: f64| nee_expected_log_likelihood(counts, eps).expect("equilibria cached");
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-10 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    // the optimum may sit on the boundary
    Ok([0.0, mid, 1.0]
        .into_iter()
        .map(|e| (e, f(e)))
        .fold((mid, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
        .0)
}

/// Best / worst / average NEE test scores under `plan`. With
/// `fixed_epsilon`, no fitting takes place.
pub fn nee_bounds(dataset: &Dataset, plan: &FoldPlan, fixed_epsilon: Option<f64>) -> Result<NeeBounds> {
    if let Some(e) = fixed_epsilon {
        if !(0.0..=1.0).contains(&e) {
            return Err(Error::InvalidParameter {
                name: "epsilon".into(),
                value: e,
                reason: "probability must lie in [0, 1]",
            });
        }
    }
    let cells: Vec<(usize, usize)> = (0..plan.rounds)
        .flat_map(|r| (0..plan.folds).map(move |f| (r, f)))
        .collect();
    let scores: Vec<(f64, [f64; 3])> = cells
        .par_iter()
        .map(|&(round, fold)| {
            let (train, test) = plan.split_counts(dataset, round, fold);
            let train = CountTable::from_row_counts(dataset, &train);
            let test = CountTable::from_row_counts(dataset, &test);
            let eps = match fixed_epsilon {
                Some(e) => e,
                None if train.is_empty() => 1.0,
                None => fit_nee_epsilon(&train)?,
            };
            let mut acc = [0.0; 3];
            for e in test.entries() {
                let lls = per_equilibrium(e, eps)?;
                acc[0] += lls.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                acc[1] += lls.iter().copied().fold(f64::INFINITY, f64::min);
                acc[2] += mean(&lls);
            }
            Ok((eps, acc))
        })
        .collect::<Result<_>>()?;
    let mut rounds = [vec![0.0; plan.rounds], vec![0.0; plan.rounds], vec![0.0; plan.rounds]];
    let mut epsilons = vec![Vec::with_capacity(plan.folds); plan.rounds];
    for (&(round, _), (eps, acc)) in cells.iter().zip(scores) {
        for k in 0..3 {
            rounds[k][round] += acc[k];
        }
        epsilons[round].push(eps);
    }
    let [best, worst, average] = rounds;
    Ok(NeeBounds {
        best: CvScore::from_rounds("NEE (best)", best, plan.folds, dataset),
        worst: CvScore::from_rounds("NEE (worst)", worst, plan.folds, dataset),
        average: CvScore::from_rounds("NEE (average)", average, plan.folds, dataset),
        epsilons,
    })
}
