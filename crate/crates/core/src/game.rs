//! Two-player normal-form games, mixed strategies, expected utility and best
//! responses.
//!
//! Payoffs are stored as two row-major `rows × cols` matrices, indexed by the
//! row player's action first for both players. After [`Game::normalize_payoffs`]
//! they are in expected cents and `unit_factor` is 1.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nash::EquilibriumSet;

/// Utilities closer than this are treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Tolerance on the sum of a probability vector.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Row,
    Col,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::Row, Player::Col];

    pub fn index(self) -> usize {
        match self {
            Player::Row => 0,
            Player::Col => 1,
        }
    }

    /// Player roles are numbered 1 (row) and 2 (column) in files and reports.
    pub fn role(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_role(role: u8) -> Option<Player> {
        match role {
            1 => Some(Player::Row),
            2 => Some(Player::Col),
            _ => None,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::Row => Player::Col,
            Player::Col => Player::Row,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Row => f.write_str("player 1"),
            Player::Col => f.write_str("player 2"),
        }
    }
}

/// A probability vector over one player's actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionDistribution(Vec<f64>);

impl ActionDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no actions".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidDistribution(format!(
                "entry {p} outside [0, 1]"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}"
            )));
        }
        Ok(Self(probs))
    }

    /// Wraps a vector the caller has already normalized.
    pub(crate) fn from_normalized(probs: Vec<f64>) -> Self {
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= 1e-8);
        Self(probs)
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    /// All mass on `action`.
    pub fn pure(n: usize, action: usize) -> Self {
        let mut v = vec![0.0; n];
        v[action] = 1.0;
        Self(v)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Indices with positive probability.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > tol).collect()
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.support(tol).len() == 1
    }

    pub fn max_abs_diff(&self, other: &ActionDistribution) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// One mixed strategy per player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub row: ActionDistribution,
    pub col: ActionDistribution,
}

impl StrategyProfile {
    pub fn new(row: ActionDistribution, col: ActionDistribution) -> Self {
        Self { row, col }
    }

    pub fn get(&self, player: Player) -> &ActionDistribution {
        match player {
            Player::Row => &self.row,
            Player::Col => &self.col,
        }
    }

    pub fn uniform(game: &Game) -> Self {
        Self {
            row: ActionDistribution::uniform(game.num_actions(Player::Row)),
            col: ActionDistribution::uniform(game.num_actions(Player::Col)),
        }
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.row.is_pure(tol) && self.col.is_pure(tol)
    }

    pub fn max_abs_diff(&self, other: &StrategyProfile) -> f64 {
        self.row
            .max_abs_diff(&other.row)
            .max(self.col.max_abs_diff(&other.col))
    }
}

/// A two-player normal-form game. Immutable once constructed.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "GameFile", into = "GameFile")]
pub struct Game {
    id: String,
    unit_factor: f64,
    actions: [Vec<String>; 2],
    rows: usize,
    cols: usize,
    payoffs: [Vec<f64>; 2],
    equilibria: Arc<OnceLock<EquilibriumSet>>,
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Game")
            .field("id", &self.id)
            .field("unit_factor", &self.unit_factor)
            .field("actions", &self.actions)
            .field("payoffs", &self.payoffs)
            .finish()
    }
}

impl PartialEq for Game {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.unit_factor.to_bits() == other.unit_factor.to_bits()
            && self.actions == other.actions
            && self.payoffs[0].len() == other.payoffs[0].len()
            && self
                .payoffs
                .iter()
                .flatten()
                .zip(other.payoffs.iter().flatten())
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// On-disk layout of a game: `payoffs[p][r][c]` is player `p`'s payoff when the
/// row player picks `r` and the column player picks `c`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameFile {
    pub id: String,
    #[serde(default = "one")]
    pub unit_factor: f64,
    pub actions: [Vec<String>; 2],
    pub payoffs: [Vec<Vec<f64>>; 2],
}

fn one() -> f64 {
    1.0
}

impl TryFrom<GameFile> for Game {
    type Error = Error;

    fn try_from(file: GameFile) -> Result<Self> {
        Game::new(file.id, file.unit_factor, file.actions, file.payoffs)
    }
}

impl From<Game> for GameFile {
    fn from(game: Game) -> Self {
        let payoffs = [0, 1].map(|p| {
            game.payoffs[p]
                .chunks(game.cols)
                .map(<[f64]>::to_vec)
                .collect()
        });
        GameFile {
            id: game.id,
            unit_factor: game.unit_factor,
            actions: game.actions,
            payoffs,
        }
    }
}

impl Game {
    pub fn new(
        id: impl Into<String>,
        unit_factor: f64,
        actions: [Vec<String>; 2],
        payoffs: [Vec<Vec<f64>>; 2],
    ) -> Result<Self> {
        let id = id.into();
        let invalid = |reason: String| Error::InvalidGame {
            id: id.clone(),
            reason,
        };
        let rows = actions[0].len();
        let cols = actions[1].len();
        if rows == 0 || cols == 0 {
            return Err(invalid("each player needs at least one action".into()));
        }
        if !unit_factor.is_finite() {
            return Err(invalid(format!("unit factor {unit_factor} is not finite")));
        }
        let mut flat = [Vec::with_capacity(rows * cols), Vec::with_capacity(rows * cols)];
        for (p, matrix) in payoffs.iter().enumerate() {
            if matrix.len() != rows {
                return Err(invalid(format!(
                    "payoff matrix {} has {} rows, expected {rows}",
                    p + 1,
                    matrix.len()
                )));
            }
            for (r, row) in matrix.iter().enumerate() {
                if row.len() != cols {
                    return Err(invalid(format!(
                        "payoff matrix {} row {r} has {} entries, expected {cols}",
                        p + 1,
                        row.len()
                    )));
                }
                if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                    return Err(invalid(format!("non-finite payoff {v}")));
                }
                flat[p].extend_from_slice(row);
            }
        }
        Ok(Self {
            id,
            unit_factor,
            actions,
            rows,
            cols,
            payoffs: flat,
            equilibria: Arc::default(),
        })
    }

    /// Builds a game with default action labels from a bimatrix given as
    /// `cells[r][c] = (row payoff, col payoff)`.
    pub fn from_bimatrix(id: impl Into<String>, cells: &[Vec<(f64, f64)>]) -> Result<Self> {
        let rows = cells.len();
        let cols = cells.first().map_or(0, Vec::len);
        let actions = [
            (0..rows).map(|r| format!("r{r}")).collect(),
            (0..cols).map(|c| format!("c{c}")).collect(),
        ];
        let payoffs = [
            cells
                .iter()
                .map(|row| row.iter().map(|c| c.0).collect())
                .collect(),
            cells
                .iter()
                .map(|row| row.iter().map(|c| c.1).collect())
                .collect(),
        ];
        Game::new(id, 1.0, actions, payoffs)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn unit_factor(&self) -> f64 {
        self.unit_factor
    }

    pub fn action_labels(&self, player: Player) -> &[String] {
        &self.actions[player.index()]
    }

    pub fn num_actions(&self, player: Player) -> usize {
        match player {
            Player::Row => self.rows,
            Player::Col => self.cols,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Payoff to `player` when the row player picks `row` and the column
    /// player picks `col`.
    #[inline]
    pub fn payoff(&self, player: Player, row: usize, col: usize) -> f64 {
        self.payoffs[player.index()][row * self.cols + col]
    }

    /// Payoff to `player` indexed by its own action first.
    #[inline]
    pub fn own_payoff(&self, player: Player, own: usize, opp: usize) -> f64 {
        match player {
            Player::Row => self.payoff(Player::Row, own, opp),
            Player::Col => self.payoff(Player::Col, opp, own),
        }
    }

    pub fn payoff_matrix(&self, player: Player) -> Vec<Vec<f64>> {
        self.payoffs[player.index()]
            .chunks(self.cols)
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// Largest payoff spread across both players; 1 for constant games.
    pub fn payoff_scale(&self) -> f64 {
        let spread = self
            .payoffs
            .iter()
            .map(|m| {
                let (lo, hi) = m
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                        (lo.min(v), hi.max(v))
                    });
                hi - lo
            })
            .fold(0.0, f64::max);
        if spread > 0.0 {
            spread
        } else {
            1.0
        }
    }

    /// Expected utilities of all of `player`'s actions against `opp`, with no
    /// validation of `opp`.
    pub fn utilities(&self, player: Player, opp: &[f64]) -> Vec<f64> {
        let own_n = self.num_actions(player);
        let mut out = vec![0.0; own_n];
        match player {
            Player::Row => {
                let m = &self.payoffs[0];
                for (r, u) in out.iter_mut().enumerate() {
                    let row = &m[r * self.cols..(r + 1) * self.cols];
                    *u = row.iter().zip(opp).map(|(a, b)| a * b).sum();
                }
            }
            Player::Col => {
                let m = &self.payoffs[1];
                for (r, &q) in opp.iter().enumerate() {
                    if q == 0.0 {
                        continue;
                    }
                    let row = &m[r * self.cols..(r + 1) * self.cols];
                    for (u, a) in out.iter_mut().zip(row) {
                        *u += q * a;
                    }
                }
            }
        }
        out
    }

    fn check_opp(&self, player: Player, opp: &ActionDistribution) -> Result<()> {
        let expected = self.num_actions(player.opponent());
        if opp.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: opp.len(),
            });
        }
        Ok(())
    }

    /// Expected utility of `action` for `player` against the opponent mixture.
    pub fn expected_utility(
        &self,
        player: Player,
        action: usize,
        opp: &ActionDistribution,
    ) -> Result<f64> {
        let count = self.num_actions(player);
        if action >= count {
            return Err(Error::ActionOutOfRange {
                player,
                index: action,
                count,
            });
        }
        self.check_opp(player, opp)?;
        Ok(opp
            .probs()
            .iter()
            .enumerate()
            .map(|(j, q)| q * self.own_payoff(player, action, j))
            .sum())
    }

    /// All actions whose expected utility is within [`TIE_TOLERANCE`] of the
    /// maximum, in increasing index order.
    pub fn best_response_set(&self, player: Player, opp: &ActionDistribution) -> Result<Vec<usize>> {
        self.check_opp(player, opp)?;
        Ok(best_responses(&self.utilities(player, opp.probs())))
    }

    /// Converts payoffs to expected cents by multiplying by `unit_factor`.
    pub fn normalize_payoffs(&self) -> Result<Game> {
        if !(self.unit_factor > 0.0) || !self.unit_factor.is_finite() {
            return Err(Error::InvalidUnitFactor(self.unit_factor));
        }
        Ok(self.map_payoffs(|_, v| v * self.unit_factor, 1.0))
    }

    /// A copy with every payoff transformed by `f(player, payoff)`.
    pub fn map_payoffs(&self, f: impl Fn(Player, f64) -> f64, unit_factor: f64) -> Game {
        let payoffs = [0, 1].map(|p| {
            let player = if p == 0 { Player::Row } else { Player::Col };
            self.payoffs[p].iter().map(|&v| f(player, v)).collect()
        });
        Game {
            id: self.id.clone(),
            unit_factor,
            actions: self.actions.clone(),
            rows: self.rows,
            cols: self.cols,
            payoffs,
            equilibria: Arc::default(),
        }
    }

    /// A copy carrying a different id.
    pub fn with_id(&self, id: impl Into<String>) -> Game {
        Game {
            id: id.into(),
            ..self.clone()
        }
    }

    /// Replaces the unit factor without touching payoffs.
    pub fn with_unit_factor(&self, unit_factor: f64) -> Game {
        Game {
            unit_factor,
            equilibria: Arc::default(),
            ..self.clone()
        }
    }

    /// Nash equilibria, enumerated once and cached for the life of the game.
    pub fn equilibria(&self) -> Result<&EquilibriumSet> {
        if let Some(set) = self.equilibria.get() {
            return Ok(set);
        }
        let set = crate::nash::enumerate_nash(self)?;
        let _ = self.equilibria.set(set);
        Ok(self.equilibria.get().expect("just set"))
    }
}

/// Indices of the maxima of `utilities` up to [`TIE_TOLERANCE`].
pub fn best_responses(utilities: &[f64]) -> Vec<usize> {
    let max = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..utilities.len())
        .filter(|&i| utilities[i] >= max - TIE_TOLERANCE)
        .collect()
}

/// Uniform mixture over a set of actions.
pub(crate) fn uniform_over(n: usize, set: &[usize]) -> Vec<f64> {
    let mut v = vec![0.0; n];
    let w = 1.0 / set.len() as f64;
    for &i in set {
        v[i] = w;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_relative_eq;

    fn row_only(cells: [[f64; 2]; 2]) -> Game {
        let cells: Vec<Vec<(f64, f64)>> = cells
            .iter()
            .map(|r| r.iter().map(|&v| (v, 0.0)).collect())
            .collect();
        Game::from_bimatrix("t", &cells).unwrap()
    }

    #[test]
    fn expected_utility_examples() {
        let g = row_only([[1.0, 0.0], [0.0, 1.0]]);
        let half = ActionDistribution::uniform(2);
        assert_eq!(g.expected_utility(Player::Row, 0, &half).unwrap(), 0.5);
        let left = ActionDistribution::pure(2, 0);
        assert_eq!(g.expected_utility(Player::Row, 0, &left).unwrap(), 1.0);

        let g = row_only([[3.0, 0.0], [5.0, 1.0]]);
        let opp = ActionDistribution::new(vec![0.25, 0.75]).unwrap();
        assert_relative_eq!(g.expected_utility(Player::Row, 1, &opp).unwrap(), 2.0);
        assert_relative_eq!(g.expected_utility(Player::Row, 0, &opp).unwrap(), 0.75);
        assert_eq!(g.best_response_set(Player::Row, &opp).unwrap(), vec![1]);
    }

    #[test]
    fn expected_utility_errors() {
        let g = row_only([[1.0, 0.0], [0.0, 1.0]]);
        let half = ActionDistribution::uniform(2);
        assert!(matches!(
            g.expected_utility(Player::Row, 2, &half),
            Err(Error::ActionOutOfRange { index: 2, .. })
        ));
        let three = ActionDistribution::uniform(3);
        assert!(matches!(
            g.expected_utility(Player::Row, 0, &three),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn best_response_examples() {
        let pd = fixtures::prisoners_dilemma();
        for opp in [vec![1.0, 0.0], vec![0.0, 1.0], vec![0.3, 0.7]] {
            let opp = ActionDistribution::new(opp).unwrap();
            assert_eq!(pd.best_response_set(Player::Row, &opp).unwrap(), vec![1]);
            assert_eq!(pd.best_response_set(Player::Col, &opp).unwrap(), vec![1]);
        }
        let mp = fixtures::matching_pennies();
        let half = ActionDistribution::uniform(2);
        assert_eq!(mp.best_response_set(Player::Row, &half).unwrap(), vec![0, 1]);
    }

    #[test]
    fn column_player_utilities_use_column_payoffs() {
        let g = Game::from_bimatrix(
            "asym",
            &[vec![(0.0, 1.0), (0.0, 2.0)], vec![(0.0, 3.0), (0.0, 4.0)]],
        )
        .unwrap();
        let opp = ActionDistribution::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(g.utilities(Player::Col, opp.probs()), vec![2.0, 3.0]);
        assert_eq!(g.expected_utility(Player::Col, 1, &opp).unwrap(), 3.0);
    }

    #[test]
    fn normalization_scales_to_cents() {
        // 100 points at $0.02 per point = 2 cents per point.
        let g = row_only([[100.0, 0.0], [0.0, 40.0]]).with_unit_factor(2.0);
        let n = g.normalize_payoffs().unwrap();
        assert_eq!(n.payoff(Player::Row, 0, 0), 200.0);
        assert_eq!(n.unit_factor(), 1.0);
        // 40 points at $0.01 per point.
        let g = row_only([[100.0, 0.0], [0.0, 40.0]]).with_unit_factor(1.0);
        let n = g.normalize_payoffs().unwrap();
        assert_eq!(n, g);
        assert_eq!(n.payoff(Player::Row, 1, 1), 40.0);
        assert!(matches!(
            g.with_unit_factor(0.0).normalize_payoffs(),
            Err(Error::InvalidUnitFactor(_))
        ));
    }

    #[test]
    fn rejects_malformed_games() {
        let bad = Game::new(
            "bad",
            1.0,
            [vec!["a".into()], vec!["x".into(), "y".into()]],
            [vec![vec![1.0]], vec![vec![1.0, 2.0]]],
        );
        assert!(matches!(bad, Err(Error::InvalidGame { .. })));
        let nan = Game::from_bimatrix("nan", &[vec![(f64::NAN, 0.0)]]);
        assert!(nan.is_err());
        assert!(Game::from_bimatrix("empty", &[]).is_err());
    }

    #[test]
    fn json_layout_round_trips() {
        let g = fixtures::battle_of_the_sexes();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.contains("\"payoffs\":[[[2.0,0.0],[0.0,1.0]],[[1.0,0.0],[0.0,2.0]]]"));
        let back: Game = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn distribution_validation() {
        assert!(ActionDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(ActionDistribution::new(vec![-0.1, 1.1]).is_err());
        assert!(ActionDistribution::new(vec![]).is_err());
        assert!(ActionDistribution::new(vec![0.5, 0.5 + 1e-12]).is_ok());
    }
}
