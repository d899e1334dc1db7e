use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::log_sum_exp;
use crate::models::ParameterVector;
use crate::posterior::AnnealingSchedule;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSample {
    pub theta: ParameterVector,
    /// Normalized weight; all weights of a set sum to one.
    pub weight: f64,
    pub log_weight: f64,
}

/// Weighted parameter samples with the provenance of how they were drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSampleSet {
    pub samples: Vec<WeightedSample>,
    pub schedule: Option<AnnealingSchedule>,
    pub seed: Option<u64>,
    /// Fraction of accepted Metropolis proposals, when sampled by MCMC moves.
    pub acceptance_rate: Option<f64>,
}

impl PosteriorSampleSet {
    /// Normalizes `log_weights` in log space.
    pub fn from_log_weights(thetas: Vec<ParameterVector>, log_weights: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() || thetas.len() != log_weights.len() {
            return Err(Error::DegenerateSamples("no samples".into()));
        }
        if log_weights.iter().any(|w| w.is_nan() || *w == f64::INFINITY) {
            return Err(Error::DegenerateSamples("non-finite log weight".into()));
        }
        let total = log_sum_exp(&log_weights);
        if total == f64::NEG_INFINITY {
            return Err(Error::WeightCollapse);
        }
        let samples = thetas
            .into_iter()
            .zip(log_weights)
            .map(|(theta, lw)| WeightedSample {
                theta,
                weight: (lw - total).exp(),
                log_weight: lw,
            })
            .collect();
        Ok(Self {
            samples,
            schedule: None,
            seed: None,
            acceptance_rate: None,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Kish effective sample size `(Σw)² / Σw²`.
    pub fn effective_sample_size(&self) -> f64 {
        let s: f64 = self.samples.iter().map(|s| s.weight).sum();
        let s2: f64 = self.samples.iter().map(|s| s.weight * s.weight).sum();
        s * s / s2
    }

    /// `(value, weight)` pairs of one parameter, sorted by value.
    pub fn marginal(&self, parameter: &str) -> Result<Vec<(f64, f64)>> {
        let mut out: Vec<(f64, f64)> = self
            .samples
            .iter()
            .map(|s| {
                s.theta
                    .get(parameter)
                    .map(|v| (v, s.weight))
                    .ok_or_else(|| Error::UnknownParameter(parameter.to_string()))
            })
            .collect::<Result<_>>()?;
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(out)
    }

    pub fn weighted_mean(&self, parameter: &str) -> Result<f64> {
        Ok(self.marginal(parameter)?.iter().map(|(v, w)| v * w).sum())
    }

    /// Weighted standard deviation.
    pub fn weighted_sd(&self, parameter: &str) -> Result<f64> {
        let m = self.marginal(parameter)?;
        let mean: f64 = m.iter().map(|(v, w)| v * w).sum();
        Ok(m.iter().map(|(v, w)| w * (v - mean).powi(2)).sum::<f64>().sqrt())
    }

    /// Smallest sample value whose weighted CDF reaches `q`.
    pub fn quantile(&self, parameter: &str, q: f64) -> Result<f64> {
        let cdf = marginal_cdf(self, parameter)?;
        Ok(quantile_of_steps(&cdf, q))
    }
}

fn quantile_of_steps(cdf: &[(f64, f64)], q: f64) -> f64 {
    cdf.iter()
        .find(|(_, c)| *c >= q - 1e-12)
        .unwrap_or_else(|| cdf.last().expect("non-empty"))
        .0
}

/// Weighted empirical CDF `(value, P(X ≤ value))` at the distinct sample values.
pub fn marginal_cdf(samples: &PosteriorSampleSet, parameter: &str) -> Result<Vec<(f64, f64)>> {
    let m = samples.marginal(parameter)?;
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut acc = 0.0;
    for (v, w) in m {
        acc += w;
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 = acc,
            _ => out.push((v, acc)),
        }
    }
    if let Some(last) = out.last_mut() {
        last.1 = 1.0;
    }
    Ok(out)
}

/// Central interval holding `mass` of the posterior: weighted quantiles at
/// `(1 − mass)/2` and `1 − (1 − mass)/2`.
pub fn credible_interval(samples: &PosteriorSampleSet, parameter: &str, mass: f64) -> Result<(f64, f64)> {
    if !(mass > 0.0 && mass < 1.0) {
        return Err(Error::InvalidParameter {
            name: "mass".into(),
            value: mass,
            reason: "credible mass must lie in (0, 1)",
        });
    }
    let cdf = marginal_cdf(samples, parameter)?;
    let tail = (1.0 - mass) / 2.0;
    Ok((quantile_of_steps(&cdf, tail), quantile_of_steps(&cdf, 1.0 - tail)))
}

/// Number of slope sign changes of a weighted Gaussian kernel density
/// estimate on `points` evenly spaced values. A unimodal marginal gives 1.
pub fn slope_reversals(samples: &PosteriorSampleSet, parameter: &str, points: usize) -> Result<usize> {
    let m = samples.marginal(parameter)?;
    let lo = m.first().expect("non-empty").0;
    let hi = m.last().expect("non-empty").0;
    if hi <= lo || points < 3 {
        return Ok(0);
    }
    let mean: f64 = m.iter().map(|(v, w)| v * w).sum();
    let sd = m.iter().map(|(v, w)| w * (v - mean).powi(2)).sum::<f64>().sqrt();
    let n_eff = samples.effective_sample_size();
    let bandwidth = (1.06 * sd * n_eff.powf(-0.2)).max((hi - lo) * 1e-3);
    let density: Vec<f64> = (0..points)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            m.iter().map(|(v, w)| w * (-0.5 * ((x - v) / bandwidth).powi(2)).exp()).sum()
        })
        .collect();
    let scale = density.iter().copied().fold(0.0, f64::max);
    let mut reversals = 0;
    let mut last_sign = 0i8;
    for w in density.windows(2) {
        let d = w[1] - w[0];
        let sign = if d > 1e-9 * scale {
            1
        } else if d < -1e-9 * scale {
            -1
        } else {
            0
        };
        if sign != 0 {
            if last_sign != 0 && sign != last_sign {
                reversals += 1;
            }
            last_sign = sign;
        }
    }
    Ok(reversals)
}
