//! Nash equilibrium enumeration for bimatrix games.
//!
//! Candidate mixed strategies for each player are enumerated as vertices of
//! the opponent's best-response polyhedron: for a support `S` of the mixing
//! player and an equally sized set `B` of opponent actions assumed to be
//! best responses, the square system
//!
//! ```text
//!   Σ_{j∈S} u(a, j)·y_j − v = 0   for a ∈ B
//!   Σ_{j∈S} y_j             = 1
//! ```
//!
//! is solved and kept when `y ≥ 0` and no opponent action earns more than `v`.
//! Pairs of vertices that are mutual best responses are the extreme
//! equilibria. In degenerate games this reports the extreme points of each
//! equilibrium component, and the result is flagged `degenerate`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{best_responses, ActionDistribution, Game, Player, StrategyProfile};

/// Games with more cells than this are rejected.
pub const MAX_CELLS: usize = 400;

const FEAS_TOL: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-8;
const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquilibriumStructure {
    SinglePure,
    SingleMixed,
    Multiple,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSet {
    pub equilibria: Vec<StrategyProfile>,
    pub structure: EquilibriumStructure,
    pub degenerate: bool,
}

impl EquilibriumSet {
    pub fn len(&self) -> usize {
        self.equilibria.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equilibria.is_empty()
    }
}

struct Vertex {
    strategy: Vec<f64>,
    degenerate: bool,
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k == 0 || k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of the polyhedron of strategies for `mixer` against which the
/// opponent's best-response value is well defined.
fn vertices(game: &Game, mixer: Player, singular: &mut usize) -> Vec<Vertex> {
    let responder = mixer.opponent();
    let n_mix = game.num_actions(mixer);
    let n_resp = game.num_actions(responder);
    let mut out: Vec<Vertex> = Vec::new();
    for k in 1..=n_mix.min(n_resp) {
        for_each_subset(n_mix, k, |support| {
            for_each_subset(n_resp, k, |binding| {
                let dim = k + 1;
                let mut a = DMatrix::<f64>::zeros(dim, dim);
                let mut b = DVector::<f64>::zeros(dim);
                for (r, &resp) in binding.iter().enumerate() {
                    for (c, &mix) in support.iter().enumerate() {
                        a[(r, c)] = game.own_payoff(responder, resp, mix);
                    }
                    a[(r, k)] = -1.0;
                }
                for c in 0..k {
                    a[(k, c)] = 1.0;
                }
                b[k] = 1.0;
                let lu = a.lu();
                let sol = match lu.solve(&b) {
                    Some(s) if s.iter().all(|v| v.is_finite()) => s,
                    _ => {
                        *singular += 1;
                        return;
                    }
                };
                // LU succeeds on nearly singular systems; reject tiny pivots.
                let u = lu.u();
                let scale = u.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
                if (0..dim).any(|i| u[(i, i)].abs() < PIVOT_TOL * scale) {
                    *singular += 1;
                    return;
                }
                if sol.iter().take(k).any(|&y| y < -FEAS_TOL) {
                    return;
                }
                let mut strategy = vec![0.0; n_mix];
                for (c, &mix) in support.iter().enumerate() {
                    strategy[mix] = sol[c].max(0.0);
                }
                let total: f64 = strategy.iter().sum();
                strategy.iter_mut().for_each(|v| *v /= total);
                let value = sol[k];
                let utils = game.utilities(responder, &strategy);
                if utils.iter().any(|&u| u > value + FEAS_TOL * value.abs().max(1.0)) {
                    return;
                }
                if out.iter().any(|v| max_diff(&v.strategy, &strategy) < DEDUP_TOL) {
                    return;
                }
                let n_br = best_responses(&utils).len();
                let n_support = strategy.iter().filter(|&&p| p > FEAS_TOL).count();
                out.push(Vertex {
                    strategy,
                    degenerate: n_br > n_support,
                });
            });
        });
    }
    out
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn supported_by(strategy: &[f64], best: &[usize]) -> bool {
    strategy
        .iter()
        .enumerate()
        .all(|(i, &p)| p <= FEAS_TOL || best.contains(&i))
}

/// Extreme Nash equilibria of `game`.
pub fn enumerate_nash(game: &Game) -> Result<EquilibriumSet> {
    let (rows, cols) = game.shape();
    if rows * cols > MAX_CELLS {
        return Err(Error::GameTooLarge {
            id: game.id().to_string(),
            rows,
            cols,
            limit: MAX_CELLS,
        });
    }
    let mut singular = 0;
    let row_vertices = vertices(game, Player::Row, &mut singular);
    let col_vertices = vertices(game, Player::Col, &mut singular);
    if singular > 0 {
        log::debug!(
            "game {:?}: skipped {singular} numerically singular support systems",
            game.id()
        );
    }

    let mut equilibria = Vec::new();
    let mut degenerate = false;
    for x in &row_vertices {
        let col_best = best_responses(&game.utilities(Player::Col, &x.strategy));
        for y in &col_vertices {
            if !supported_by(&y.strategy, &col_best) {
                continue;
            }
            let row_best = best_responses(&game.utilities(Player::Row, &y.strategy));
            if !supported_by(&x.strategy, &row_best) {
                continue;
            }
            degenerate |= x.degenerate || y.degenerate;
            equilibria.push(StrategyProfile::new(
                ActionDistribution::from_normalized(x.strategy.clone()),
                ActionDistribution::from_normalized(y.strategy.clone()),
            ));
        }
    }
    let structure = match equilibria.as_slice() {
        [only] if only.is_pure(FEAS_TOL) => EquilibriumStructure::SinglePure,
        [_] => EquilibriumStructure::SingleMixed,
        _ => EquilibriumStructure::Multiple,
    };
    Ok(EquilibriumSet {
        equilibria,
        structure,
        degenerate,
    })
}

/// Largest gain any player could get by deviating to a pure action.
pub fn regret(game: &Game, profile: &StrategyProfile) -> f64 {
    Player::BOTH
        .iter()
        .map(|&p| {
            let own = profile.get(p).probs();
            let utils = game.utilities(p, profile.get(p.opponent()).probs());
            let value: f64 = own.iter().zip(&utils).map(|(a, b)| a * b).sum();
            utils.iter().fold(f64::NEG_INFINITY, |m, &u| m.max(u)) - value
        })
        .fold(0.0, f64::max)
}
