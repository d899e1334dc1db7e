//! Logit quantal response equilibrium on the principal branch.
//!
//! The solver starts from the uniform profile at `λ = 0`, which is the unique
//! fixed point there, and walks `λ` upward. Each step uses a tangent predictor
//! followed by a corrector: damped fixed-point iteration while the residual is
//! large, Newton's method on `s − QBR(s; λ) = 0` once it drops below `1e-3`.
//! Step lengths are measured in `λ × payoff spread`, so rescaling payoffs by
//! `c` and the target precision by `1/c` retraces the same path.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ActionDistribution, Game, Player, StrategyProfile};
use crate::math::logit_choice;

/// Fixed-point residual required at every returned point.
pub const QRE_TOLERANCE: f64 = 1e-8;

const NEWTON_SWITCH: f64 = 1e-3;
const DAMPING: f64 = 0.5;
const INITIAL_STEP: f64 = 0.01;
const MIN_STEP: f64 = 1e-10;
const MAX_CORRECTOR_ITERS: usize = 200;
const POLISH_ITERS: usize = 4;
const POLISH_TARGET: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QrePathPoint {
    pub lambda: f64,
    pub profile: StrategyProfile,
    pub residual: f64,
}

/// Logit quantal best response of `player` to the opponent mixture `opp`.
pub fn quantal_best_response(game: &Game, player: Player, opp: &[f64], lambda: f64) -> Vec<f64> {
    logit_choice(&game.utilities(player, opp), lambda)
}

struct Tracker<'g> {
    game: &'g Game,
    rows: usize,
    scale: f64,
    lambda: f64,
    /// Row strategy followed by column strategy.
    state: Vec<f64>,
    step: f64,
}

impl<'g> Tracker<'g> {
    fn new(game: &'g Game) -> Self {
        let (rows, cols) = game.shape();
        let mut state = vec![1.0 / rows as f64; rows];
        state.extend(std::iter::repeat(1.0 / cols as f64).take(cols));
        Self {
            game,
            rows,
            scale: game.payoff_scale(),
            lambda: 0.0,
            state,
            step: INITIAL_STEP,
        }
    }

    fn split<'a>(&self, s: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        s.split_at(self.rows)
    }

    fn response(&self, s: &[f64], lambda: f64) -> Vec<f64> {
        let (row, col) = self.split(s);
        let mut out = quantal_best_response(self.game, Player::Row, col, lambda);
        out.extend(quantal_best_response(self.game, Player::Col, row, lambda));
        out
    }

    fn residual_of(&self, s: &[f64], lambda: f64) -> f64 {
        let f = self.response(s, lambda);
        max_abs_diff(s, &f)
    }

    /// Jacobian of `s ↦ s − QBR(s; λ)` and the derivative of `QBR` in `λ`.
    fn jacobian(&self, s: &[f64], lambda: f64) -> (DMatrix<f64>, DVector<f64>) {
        let (row, col) = self.split(s);
        let (rows, cols) = self.game.shape();
        let dim = rows + cols;
        let p = quantal_best_response(self.game, Player::Row, col, lambda);
        let q = quantal_best_response(self.game, Player::Col, row, lambda);
        let u_row = self.game.utilities(Player::Row, col);
        let u_col = self.game.utilities(Player::Col, row);
        let mut jac = DMatrix::<f64>::identity(dim, dim);
        let mut dlambda = DVector::<f64>::zeros(dim);

        let mean_u_row: f64 = p.iter().zip(&u_row).map(|(a, b)| a * b).sum();
        for a in 0..rows {
            dlambda[a] = p[a] * (u_row[a] - mean_u_row);
        }
        for b in 0..cols {
            let mean: f64 = (0..rows)
                .map(|c| p[c] * self.game.payoff(Player::Row, c, b))
                .sum();
            for a in 0..rows {
                jac[(a, rows + b)] -=
                    lambda * p[a] * (self.game.payoff(Player::Row, a, b) - mean);
            }
        }

        let mean_u_col: f64 = q.iter().zip(&u_col).map(|(a, b)| a * b).sum();
        for b in 0..cols {
            dlambda[rows + b] = q[b] * (u_col[b] - mean_u_col);
        }
        for a in 0..rows {
            let mean: f64 = (0..cols)
                .map(|d| q[d] * self.game.payoff(Player::Col, a, d))
                .sum();
            for b in 0..cols {
                jac[(rows + b, a)] -=
                    lambda * q[b] * (self.game.payoff(Player::Col, a, b) - mean);
            }
        }
        (jac, dlambda)
    }

    fn project(&self, s: &mut [f64]) {
        let (row, col) = s.split_at_mut(self.rows);
        for part in [row, col] {
            for v in part.iter_mut() {
                if !(*v > 0.0) {
                    *v = 0.0;
                }
            }
            let total: f64 = part.iter().sum();
            if total > 0.0 {
                part.iter_mut().for_each(|v| *v /= total);
            } else {
                let n = part.len() as f64;
                part.iter_mut().for_each(|v| *v = 1.0 / n);
            }
        }
    }

    /// Drives `s` to a fixed point at `lambda`. Returns the final residual on
    /// success, or the last residual on failure.
    fn correct(&self, s: &mut Vec<f64>, lambda: f64) -> std::result::Result<f64, f64> {
        let mut residual = f64::INFINITY;
        for _ in 0..MAX_CORRECTOR_ITERS {
            let f = self.response(s, lambda);
            residual = max_abs_diff(s, &f);
            if residual <= QRE_TOLERANCE {
                return Ok(residual);
            }
            if !residual.is_finite() {
                return Err(residual);
            }
            if residual < NEWTON_SWITCH {
                let (jac, _) = self.jacobian(s, lambda);
                let g = DVector::from_iterator(s.len(), s.iter().zip(&f).map(|(a, b)| b - a));
                if let Some(delta) = jac.lu().solve(&g) {
                    let mut candidate: Vec<f64> =
                        s.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
                    self.project(&mut candidate);
                    if self.residual_of(&candidate, lambda) < residual {
                        *s = candidate;
                        continue;
                    }
                }
            }
            for (x, fx) in s.iter_mut().zip(&f) {
                *x = (1.0 - DAMPING) * *x + DAMPING * fx;
            }
        }
        let final_residual = self.residual_of(s, lambda);
        if final_residual <= QRE_TOLERANCE {
            Ok(final_residual)
        } else {
            Err(final_residual.min(residual))
        }
    }

    /// Extra Newton steps at an accepted point, kept while they reduce the
    /// residual, so returned profiles are accurate well beyond the
    /// acceptance tolerance.
    fn polish(&mut self, mut residual: f64) -> f64 {
        for _ in 0..POLISH_ITERS {
            if residual <= POLISH_TARGET {
                break;
            }
            let f = self.response(&self.state, self.lambda);
            let (jac, _) = self.jacobian(&self.state, self.lambda);
            let g = DVector::from_iterator(f.len(), self.state.iter().zip(&f).map(|(a, b)| b - a));
            let Some(delta) = jac.lu().solve(&g) else { break };
            let mut candidate: Vec<f64> = self.state.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
            self.project(&mut candidate);
            let r = self.residual_of(&candidate, self.lambda);
            if !(r < residual) {
                break;
            }
            self.state = candidate;
            residual = r;
        }
        residual
    }

    /// Continues the branch from the current point up to `target`.
    fn advance_to(&mut self, target: f64) -> Result<f64> {
        if target < self.lambda {
            return Err(Error::InvalidParameter {
                name: "lambda".into(),
                value: target,
                reason: "continuation only moves toward larger precision",
            });
        }
        if target == 0.0 {
            return Ok(0.0);
        }
        let mut residual = self.residual_of(&self.state, self.lambda);
        while self.lambda < target {
            let t = self.lambda * self.scale;
            let step = self.step.min(1.0 + t);
            let next = if (target - self.lambda) * self.scale <= step {
                target
            } else {
                self.lambda + step / self.scale
            };
            let (jac, dlambda) = self.jacobian(&self.state, self.lambda);
            let mut guess = match jac.lu().solve(&dlambda) {
                Some(tangent) => self
                    .state
                    .iter()
                    .zip(tangent.iter())
                    .map(|(s, ds)| s + (next - self.lambda) * ds)
                    .collect(),
                None => self.state.clone(),
            };
            self.project(&mut guess);
            match self.correct(&mut guess, next) {
                Ok(r) => {
                    residual = r;
                    self.state = guess;
                    self.lambda = next;
                    self.step = (2.0 * step).max(INITIAL_STEP);
                }
                Err(r) => {
                    self.step = step / 2.0;
                    if self.step < MIN_STEP {
                        return Err(Error::QreNonConvergence {
                            lambda: self.lambda,
                            target,
                            residual: r,
                        });
                    }
                }
            }
        }
        Ok(self.polish(residual))
    }

    fn profile(&self) -> StrategyProfile {
        let (row, col) = self.split(&self.state);
        StrategyProfile::new(
            ActionDistribution::from_normalized(row.to_vec()),
            ActionDistribution::from_normalized(col.to_vec()),
        )
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter {
            name: "lambda".into(),
            value: lambda,
            reason: "precision must be finite and non-negative",
        });
    }
    Ok(())
}

/// The principal-branch logit QRE of `game` at precision `lambda`.
pub fn solve_qre(game: &Game, lambda: f64) -> Result<StrategyProfile> {
    check_lambda(lambda)?;
    let mut tracker = Tracker::new(game);
    tracker.advance_to(lambda)?;
    Ok(tracker.profile())
}

/// Converged points at `lambda_max · i / steps` for `i = 1..=steps`.
pub fn qre_path(game: &Game, lambda_max: f64, steps: usize) -> Result<Vec<QrePathPoint>> {
    check_lambda(lambda_max)?;
    if steps == 0 {
        return Err(Error::InvalidParameter {
            name: "steps".into(),
            value: 0.0,
            reason: "at least one path point is required",
        });
    }
    let mut tracker = Tracker::new(game);
    let mut out = Vec::with_capacity(steps);
    for i in 1..=steps {
        let lambda = lambda_max * i as f64 / steps as f64;
        let residual = tracker.advance_to(lambda)?;
        out.push(QrePathPoint {
            lambda,
            profile: tracker.profile(),
            residual,
        });
    }
    Ok(out)
}

/// `‖sᵢ − QBRᵢ(s₋ᵢ; λ)‖∞` over both players.
pub fn qre_residual(game: &Game, profile: &StrategyProfile, lambda: f64) -> f64 {
    Player::BOTH
        .iter()
        .map(|&p| {
            let br = quantal_best_response(game, p, profile.get(p.opponent()).probs(), lambda);
            max_abs_diff(profile.get(p).probs(), &br)
        })
        .fold(0.0, f64::max)
}
