//! Annealed importance sampling.
//!
//! Each chain starts from the prior and walks through the tempered targets
//! `p₀(θ)·L(θ)^γ`. Before the Metropolis–Hastings moves at temperature `γ_j`
//! the chain's log weight grows by `(γ_j − γ_{j−1})·ln L(θ)`; the final state
//! and its weight form one independent weighted posterior sample.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal as NormalDist};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::estimation::CountTable;
use crate::math::log_sum_exp;
use crate::models::{ModelSpec, ParamInfo, ParamKind, ParameterVector};
use crate::posterior::prior::dirichlet_log_density_general;
use crate::posterior::{AnnealingSchedule, PosteriorSampleSet, PriorSpec};
use crate::rng::stream_rng;

/// Metropolis proposal kernels, each centred on the current value.
///
/// Proportions (with the implied level-0 share) move by a Dirichlet draw with
/// concentrations `dirichlet_scale · α`; precisions and Poisson means by a
/// normal step truncated at 0; probabilities by a normal step truncated to
/// `[0, 1]`. Asymmetric kernel densities enter the acceptance ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProposalSpec {
    pub dirichlet_scale: f64,
    /// Lower bound on each Dirichlet concentration so that proposals can
    /// leave the simplex boundary.
    pub min_concentration: f64,
    pub precision_sd: f64,
    pub rate_sd: f64,
    pub probability_sd: f64,
}

impl Default for ProposalSpec {
    fn default() -> Self {
        Self {
            dirichlet_scale: 20.0,
            min_concentration: 0.05,
            precision_sd: 0.2,
            rate_sd: 0.2,
            probability_sd: 0.1,
        }
    }
}

/// Gamma(shape, 1) draw in log space, exact for tiny shapes.
fn log_gamma_draw(shape: f64, rng: &mut impl Rng) -> f64 {
    if shape >= 1.0 {
        Gamma::new(shape, 1.0).expect("valid shape").sample(rng).ln()
    } else {
        let y = Gamma::new(shape + 1.0, 1.0).expect("valid shape").sample(rng);
        y.ln() + rng.random::<f64>().ln() / shape
    }
}

/// Normal(`mean`, `sd`) restricted to `[lo, hi]`.
fn truncated_normal(mean: f64, sd: f64, lo: f64, hi: f64, rng: &mut impl Rng) -> f64 {
    let normal = Normal::new(mean, sd).expect("sd > 0");
    for _ in 0..10_000 {
        let x = normal.sample(rng);
        if (lo..=hi).contains(&x) {
            return x;
        }
    }
    // the interval holds almost no mass: fall back to its nearest edge
    mean.clamp(lo, hi)
}

fn truncated_normal_log_density(x: f64, mean: f64, sd: f64, lo: f64, hi: f64) -> f64 {
    let std = NormalDist::new(0.0, 1.0).expect("standard normal");
    let z = (x - mean) / sd;
    let mass = std.cdf((hi - mean) / sd) - std.cdf((lo - mean) / sd);
    -0.5 * z * z - 0.5 * (2.0 * std::f64::consts::PI).ln() - sd.ln() - mass.ln()
}

impl ProposalSpec {
    fn bounds(kind: ParamKind) -> (f64, f64) {
        match kind {
            ParamKind::Probability => (0.0, 1.0),
            _ => (0.0, f64::INFINITY),
        }
    }

    fn sd(&self, kind: ParamKind) -> f64 {
        match kind {
            ParamKind::Precision => self.precision_sd,
            ParamKind::Rate => self.rate_sd,
            ParamKind::Probability => self.probability_sd,
            ParamKind::Proportion => unreachable!("proportions move jointly"),
        }
    }

    fn concentrations(&self, simplex: &[f64]) -> Vec<f64> {
        simplex
            .iter()
            .map(|&a| (self.dirichlet_scale * a).max(self.min_concentration))
            .collect()
    }

    /// Proposes a new point; `None` if the draw underflowed to the simplex
    /// boundary.
    fn propose(&self, layout: &[ParamInfo], current: &[f64], rng: &mut impl Rng) -> Option<Vec<f64>> {
        let mut out = current.to_vec();
        let props: Vec<usize> = (0..layout.len()).filter(|&i| layout[i].kind == ParamKind::Proportion).collect();
        if !props.is_empty() {
            let simplex = full_simplex(&props, current);
            let logs: Vec<f64> = self
                .concentrations(&simplex)
                .iter()
                .map(|&c| log_gamma_draw(c, rng))
                .collect();
            let total = log_sum_exp(&logs);
            let new: Vec<f64> = logs.iter().map(|l| (l - total).exp()).collect();
            if new.iter().any(|&x| x <= 0.0 || !x.is_finite()) {
                return None;
            }
            for (&i, &x) in props.iter().zip(&new[1..]) {
                out[i] = x;
            }
        }
        for (i, info) in layout.iter().enumerate() {
            if info.kind != ParamKind::Proportion {
                let (lo, hi) = Self::bounds(info.kind);
                out[i] = truncated_normal(current[i], self.sd(info.kind), lo, hi, rng);
            }
        }
        Some(out)
    }

    /// `ln q(to | from)`.
    fn log_density(&self, layout: &[ParamInfo], from: &[f64], to: &[f64]) -> f64 {
        let mut total = 0.0;
        let props: Vec<usize> = (0..layout.len()).filter(|&i| layout[i].kind == ParamKind::Proportion).collect();
        if !props.is_empty() {
            let conc = self.concentrations(&full_simplex(&props, from));
            total += dirichlet_log_density_general(&full_simplex(&props, to), &conc);
        }
        for (i, info) in layout.iter().enumerate() {
            if info.kind != ParamKind::Proportion {
                let (lo, hi) = Self::bounds(info.kind);
                total += truncated_normal_log_density(to[i], from[i], self.sd(info.kind), lo, hi);
            }
        }
        total
    }
}

/// `[α₀, α₁, …]` from the proportion entries of `values`.
fn full_simplex(props: &[usize], values: &[f64]) -> Vec<f64> {
    let sum: f64 = props.iter().map(|&i| values[i]).sum();
    std::iter::once((1.0 - sum).max(0.0))
        .chain(props.iter().map(|&i| values[i]))
        .collect()
}

#[derive(Debug, Clone)]
pub struct AisOptions {
    pub n_samples: usize,
    pub schedule: AnnealingSchedule,
    pub prior: PriorSpec,
    pub proposal: ProposalSpec,
    pub seed: u64,
}

impl AisOptions {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        Self {
            n_samples,
            schedule: AnnealingSchedule::standard(),
            prior: PriorSpec::default(),
            proposal: ProposalSpec::default(),
            seed,
        }
    }
}

struct Chain {
    theta: Vec<f64>,
    log_weight: f64,
    accepted: usize,
    proposed: usize,
}

pub fn ais_posterior(
    model: &ModelSpec,
    dataset: &Dataset,
    n_samples: usize,
    schedule: &AnnealingSchedule,
    prior: &PriorSpec,
    proposal: &ProposalSpec,
    seed: u64,
) -> Result<PosteriorSampleSet> {
    ais_with(
        model,
        dataset,
        &AisOptions {
            n_samples,
            schedule: schedule.clone(),
            prior: prior.clone(),
            proposal: proposal.clone(),
            seed,
        },
    )
}

pub fn ais_with(model: &ModelSpec, dataset: &Dataset, options: &AisOptions) -> Result<PosteriorSampleSet> {
    if options.n_samples == 0 {
        return Err(Error::DegenerateSamples("n_samples must be at least 1".into()));
    }
    let layout = model.parameters();
    let names = model.parameter_names();
    let table = CountTable::from_dataset(dataset);
    let log_lik = |values: &[f64]| -> f64 {
        if table.is_empty() {
            return 0.0;
        }
        let theta = ParameterVector::new(names.clone(), values.to_vec()).expect("layout length");
        table.log_likelihood(model, &theta).unwrap_or(f64::NEG_INFINITY)
    };
    let gammas = options.schedule.gammas();
    let chains: Vec<Chain> = (0..options.n_samples)
        .into_par_iter()
        .map(|i| -> Result<Chain> {
            let mut rng = stream_rng(options.seed, i as u64);
            let mut theta = options.prior.sample(&layout, &mut rng)?;
            let mut ll = log_lik(&theta);
            let mut lp = options.prior.log_density(&layout, &theta);
            let mut chain = Chain {
                theta: Vec::new(),
                log_weight: 0.0,
                accepted: 0,
                proposed: 0,
            };
            for j in 1..gammas.len() {
                let (g_prev, g) = (gammas[j - 1], gammas[j]);
                if g > g_prev {
                    chain.log_weight += (g - g_prev) * ll;
                }
                if layout.is_empty() || chain.log_weight == f64::NEG_INFINITY {
                    continue;
                }
                for _ in 0..options.schedule.metropolis_updates {
                    chain.proposed += 1;
                    let Some(cand) = options.proposal.propose(&layout, &theta, &mut rng) else {
                        continue;
                    };
                    let cand_lp = options.prior.log_density(&layout, &cand);
                    if cand_lp == f64::NEG_INFINITY {
                        continue;
                    }
                    let cand_ll = log_lik(&cand);
                    let log_ratio = (cand_lp + g * cand_ll) - (lp + g * ll)
                        + options.proposal.log_density(&layout, &cand, &theta)
                        - options.proposal.log_density(&layout, &theta, &cand);
                    if log_ratio >= 0.0 || rng.random::<f64>().ln() < log_ratio {
                        theta = cand;
                        ll = cand_ll;
                        lp = cand_lp;
                        chain.accepted += 1;
                    }
                }
            }
            chain.theta = theta;
            Ok(chain)
        })
        .collect::<Result<_>>()?;
    let accepted: usize = chains.iter().map(|c| c.accepted).sum();
    let proposed: usize = chains.iter().map(|c| c.proposed).sum();
    let mut set = PosteriorSampleSet::from_log_weights(
        chains
            .iter()
            .map(|c| ParameterVector::new(names.clone(), c.theta.clone()))
            .collect::<Result<_>>()?,
        chains.iter().map(|c| c.log_weight).collect(),
    )?;
    set.schedule = Some(options.schedule.clone());
    set.seed = Some(options.seed);
    set.acceptance_rate = (proposed > 0).then(|| accepted as f64 / proposed as f64);
    Ok(set)
}
