use std::time::Instant;

use crate::error::{Error, Result};
use crate::game::{NodeId, NodeSet, ParityGame, Player, SolveResult, SolveStats, Strategy};

use super::cycles::{can_reach, nodes_on_cycles};

pub const DEFAULT_BRUTE_BUDGET: u64 = 1_000_000;

/// Nodes from which `player` wins when fixing the choice `pick[v]` (an index
/// into the successor list) at each of its nodes.
fn won_under(game: &ParityGame, player: Player, pick: &[usize]) -> NodeSet {
    let edges: Vec<Vec<NodeId>> = game
        .nodes()
        .map(|v| {
            if game.owner(v) == player {
                vec![game.successors(v)[pick[v.index()]]]
            } else {
                game.successors(v).to_vec()
            }
        })
        .collect();
    let all = game.all_nodes();
    let bad = nodes_on_cycles(game, &edges, &all, player.opponent().parity());
    can_reach(&edges, &all, &bad).complement()
}

/// Calls `visit` with every assignment of successor indices to `owned`
/// until it returns false.
fn for_each_pick(game: &ParityGame, owned: &[NodeId], mut visit: impl FnMut(&[usize]) -> bool) {
    let mut pick = vec![0usize; game.node_count()];
    while visit(&pick) {
        let mut carry = true;
        for &v in owned {
            let k = &mut pick[v.index()];
            *k += 1;
            if *k < game.successors(v).len() {
                carry = false;
                break;
            }
            *k = 0;
        }
        if carry {
            return;
        }
    }
}

/// The winning region of `player` and a positional strategy winning on all
/// of it, by trying every positional strategy.
fn enumerate(game: &ParityGame, player: Player, budget: u64) -> Result<(NodeSet, Strategy, u64)> {
    let owned: Vec<NodeId> = game.owned_by(player).iter().collect();
    let mut total: u64 = 1;
    for &v in &owned {
        total = total.saturating_mul(game.successors(v).len() as u64);
        if total > budget {
            return Err(Error::ResourceLimit {
                what: "positional strategy enumeration",
                limit: budget,
            });
        }
    }

    let n = game.node_count();
    let mut region = NodeSet::empty(n);
    for_each_pick(game, &owned, |pick| {
        region.union_with(&won_under(game, player, pick));
        true
    });
    let mut uniform = None;
    for_each_pick(game, &owned, |pick| {
        if won_under(game, player, pick) == region {
            uniform = Some(pick.to_vec());
            return false;
        }
        true
    });
    let pick = uniform.expect("positional determinacy yields a uniform winning strategy");
    let strategy = Strategy::from_pairs(
        n,
        owned
            .iter()
            .filter(|&&v| region.contains(v))
            .map(|&v| (v, game.successors(v)[pick[v.index()]])),
    );
    Ok((region, strategy, total))
}

/// Solves `game` by enumerating the positional strategies of each player.
/// Fails if either player has more than `budget` of them.
pub fn brute_solve_with_budget(game: &ParityGame, budget: u64) -> Result<SolveResult> {
    let started = Instant::now();
    let (w_even, strategy_even, k_even) = enumerate(game, Player::Even, budget)?;
    let (w_odd, strategy_odd, k_odd) = enumerate(game, Player::Odd, budget)?;
    assert_eq!(w_odd, w_even.complement(), "the two enumerations must partition the game");
    Ok(SolveResult {
        w_even,
        w_odd,
        strategy_even,
        strategy_odd,
        stats: SolveStats {
            outer_iterations: k_even + k_odd,
            per_level_iterations: Vec::new(),
            wall_time: started.elapsed(),
            solver_variant: "brute".into(),
        },
    })
}

pub fn brute_solve(game: &ParityGame) -> Result<SolveResult> {
    brute_solve_with_budget(game, DEFAULT_BRUTE_BUDGET)
}
