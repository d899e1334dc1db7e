//! Posterior of a single parameter evaluated on an evenly spaced grid under a
//! flat prior.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::estimation::CountTable;
use crate::math::log_sum_exp;
use crate::models::{ModelSpec, ParameterVector};
use crate::posterior::PosteriorSampleSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPosterior {
    pub parameter: String,
    pub step: f64,
    pub points: Vec<f64>,
    /// Normalized log posterior mass per point.
    pub log_probs: Vec<f64>,
}

/// `lo, lo + step, …` up to `hi` (inclusive up to rounding).
pub fn grid_points(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0 && lo <= hi) {
        return Err(Error::InvalidGrid(format!("lo {lo}, hi {hi}, step {step}")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| lo + i as f64 * step).collect())
}

fn single_parameter(model: &ModelSpec) -> Result<String> {
    match model.parameter_names().as_slice() {
        [name] => Ok(name.clone()),
        names => Err(Error::ParameterMismatch {
            model: model.name(),
            reason: format!("grid posteriors need exactly one parameter, model has {}", names.len()),
        }),
    }
}

fn grid_log_likelihoods(model: &ModelSpec, name: &str, points: &[f64], dataset: &Dataset) -> Result<Vec<f64>> {
    let table = CountTable::from_dataset(dataset);
    points
        .par_iter()
        .map(|&v| table.log_likelihood(model, &ParameterVector::from_pairs(&[(name, v)])))
        .collect()
}

/// Flat-prior posterior of the single parameter of `model` on the grid
/// `lo..=hi` with spacing `step`.
pub fn grid_posterior_1d(model: &ModelSpec, dataset: &Dataset, lo: f64, hi: f64, step: f64) -> Result<GridPosterior> {
    GridPosterior::flat(model, lo, hi, step)?.updated(model, dataset)
}

impl GridPosterior {
    /// The flat prior over the grid.
    pub fn flat(model: &ModelSpec, lo: f64, hi: f64, step: f64) -> Result<Self> {
        let parameter = single_parameter(model)?;
        let points = grid_points(lo, hi, step)?;
        let log_p = -(points.len() as f64).ln();
        Ok(Self {
            parameter,
            step,
            log_probs: vec![log_p; points.len()],
            points,
        })
    }

    /// Bayesian update of this distribution (as prior) with `dataset`.
    pub fn updated(&self, model: &ModelSpec, dataset: &Dataset) -> Result<Self> {
        let lls = grid_log_likelihoods(model, &self.parameter, &self.points, dataset)?;
        let unnormalized: Vec<f64> = self.log_probs.iter().zip(&lls).map(|(p, l)| p + l).collect();
        let total = log_sum_exp(&unnormalized);
        if !total.is_finite() {
            return Err(Error::WeightCollapse);
        }
        Ok(Self {
            log_probs: unnormalized.iter().map(|u| u - total).collect(),
            ..self.clone()
        })
    }

    pub fn probs(&self) -> Vec<f64> {
        self.log_probs.iter().map(|l| l.exp()).collect()
    }

    /// `(value, probability)` per grid point.
    pub fn table(&self) -> Vec<(f64, f64)> {
        self.points.iter().copied().zip(self.probs()).collect()
    }

    pub fn mode(&self) -> f64 {
        let i = (0..self.points.len())
            .max_by(|&a, &b| self.log_probs[a].total_cmp(&self.log_probs[b]).then(b.cmp(&a)))
            .expect("non-empty grid");
        self.points[i]
    }

    pub fn mean(&self) -> f64 {
        self.table().iter().map(|(v, p)| v * p).sum()
    }

    /// CDF treating each point's mass as spread evenly over its cell
    /// `[x − step/2, x + step/2]`, so it is continuous and piecewise linear.
    pub fn cdf_at(&self, x: f64) -> f64 {
        let half = self.step / 2.0;
        let mut acc = 0.0;
        for (v, p) in self.table() {
            if x >= v + half {
                acc += p;
            } else if x > v - half {
                acc += p * (x - (v - half)) / self.step;
            } else {
                break;
            }
        }
        acc.min(1.0)
    }

    /// Inverse of [`cdf_at`](Self::cdf_at).
    pub fn quantile(&self, q: f64) -> f64 {
        let half = self.step / 2.0;
        let mut acc = 0.0;
        let table = self.table();
        for &(v, p) in &table {
            if acc + p >= q {
                let frac = if p > 0.0 { ((q - acc) / p).clamp(0.0, 1.0) } else { 0.0 };
                return v - half + frac * self.step;
            }
            acc += p;
        }
        table.last().expect("non-empty grid").0 + half
    }

    /// Central interval with `mass` posterior probability.
    pub fn credible_interval(&self, mass: f64) -> Result<(f64, f64)> {
        if !(mass > 0.0 && mass < 1.0) {
            return Err(Error::InvalidParameter {
                name: "mass".into(),
                value: mass,
                reason: "credible mass must lie in (0, 1)",
            });
        }
        let tail = (1.0 - mass) / 2.0;
        Ok((self.quantile(tail), self.quantile(1.0 - tail)))
    }

    /// Largest gap between this CDF and the weighted empirical CDF of
    /// `samples`, checked on both sides of every sample jump and at grid cell
    /// edges.
    pub fn sup_cdf_distance(&self, samples: &PosteriorSampleSet) -> Result<f64> {
        let cdf = crate::posterior::marginal_cdf(samples, &self.parameter)?;
        let mut worst = 0.0f64;
        let mut before = 0.0;
        for &(v, c) in &cdf {
            let g = self.cdf_at(v);
            worst = worst.max((g - before).abs()).max((g - c).abs());
            before = c;
        }
        for &x in &self.points {
            let x = x + self.step / 2.0;
            let idx = cdf.partition_point(|(v, _)| *v <= x);
            let c = if idx == 0 { 0.0 } else { cdf[idx - 1].1 };
            worst = worst.max((self.cdf_at(x) - c).abs());
        }
        Ok(worst)
    }

    /// The grid as a weighted sample set (one sample per point).
    pub fn to_samples(&self) -> Result<PosteriorSampleSet> {
        PosteriorSampleSet::from_log_weights(
            self.points
                .iter()
                .map(|&v| ParameterVector::from_pairs(&[(&self.parameter, v)]))
                .collect(),
            self.log_probs.clone(),
        )
    }
}
