//! Iterated elimination of dominated pure strategies.
//!
//! Dominance is checked against pure strategies only. Each sweep removes
//! every currently dominated action of both players at once, and the number
//! of sweeps that removed something is reported as the round count.

use serde::{Deserialize, Serialize};

use crate::game::{Game, Player, TIE_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DominanceKind {
    Strict,
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceClassification {
    pub solvable_strict: bool,
    pub solvable_weak: bool,
    pub rounds_strict: Option<usize>,
    pub rounds_weak: Option<usize>,
}

/// Surviving actions per player after elimination, plus the sweeps used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub surviving: [Vec<usize>; 2],
    pub rounds: usize,
}

impl Elimination {
    pub fn solved(&self) -> bool {
        self.surviving[0].len() == 1 && self.surviving[1].len() == 1
    }
}

/// Does `a` dominate `b` for `player` given the opponent's remaining actions?
fn dominates(
    game: &Game,
    player: Player,
    a: usize,
    b: usize,
    opp: &[usize],
    kind: DominanceKind,
) -> bool {
    let mut some_strict = false;
    for &j in opp {
        let diff = game.own_payoff(player, a, j) - game.own_payoff(player, b, j);
        match kind {
            DominanceKind::Strict => {
                if diff <= TIE_TOLERANCE {
                    return false;
                }
            }
            DominanceKind::Weak => {
                if diff < -TIE_TOLERANCE {
                    return false;
                }
                some_strict |= diff > TIE_TOLERANCE;
            }
        }
    }
    match kind {
        DominanceKind::Strict => true,
        DominanceKind::Weak => some_strict,
    }
}

pub fn iterated_elimination(game: &Game, kind: DominanceKind) -> Elimination {
    let mut surviving = [
        (0..game.num_actions(Player::Row)).collect::<Vec<_>>(),
        (0..game.num_actions(Player::Col)).collect::<Vec<_>>(),
    ];
    let mut rounds = 0;
    loop {
        let removed: [Vec<usize>; 2] = Player::BOTH.map(|p| {
            let own = &surviving[p.index()];
            let opp = &surviving[p.opponent().index()];
            own.iter()
                .copied()
                .filter(|&b| {
                    own.iter()
                        .any(|&a| a != b && dominates(game, p, a, b, opp, kind))
                })
                .collect()
        });
        if removed.iter().all(Vec::is_empty) {
            break;
        }
        for p in 0..2 {
            surviving[p].retain(|a| !removed[p].contains(a));
        }
        rounds += 1;
    }
    Elimination { surviving, rounds }
}

pub fn classify_dominance(game: &Game) -> DominanceClassification {
    let strict = iterated_elimination(game, DominanceKind::Strict);
    let weak = iterated_elimination(game, DominanceKind::Weak);
    // A game that is already 1x1 is solved in zero sweeps; report one round so
    // that `rounds >= 1` holds whenever the game counts as solvable.
    let rounds = |e: &Elimination| e.solved().then_some(e.rounds.max(1));
    DominanceClassification {
        solvable_strict: strict.solved(),
        solvable_weak: weak.solved(),
        rounds_strict: rounds(&strict),
        rounds_weak: rounds(&weak),
    }
}
