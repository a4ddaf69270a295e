//! Zielonka's recursive algorithm.

use std::time::Instant;

use crate::game::{NodeSet, ParityGame, Player, SolveResult, SolveStats, Strategy};

/// Attractor of `player` to `target` within `scope`. Nodes of `player` that
/// join because of a successor get that successor recorded in `strategy`.
pub fn attractor(game: &ParityGame, scope: &NodeSet, target: &NodeSet, player: Player, strategy: &mut Strategy) -> NodeSet {
    let mut attr = target.intersection(scope);
    let mut remaining: Vec<usize> = game
        .nodes()
        .map(|v| game.successors(v).iter().filter(|&&t| scope.contains(t)).count())
        .collect();
    let mut queue: Vec<_> = attr.iter().collect();
    while let Some(t) = queue.pop() {
        for &v in game.predecessors(t) {
            if !scope.contains(v) || attr.contains(v) {
                continue;
            }
            let joins = if game.owner(v) == player {
                strategy.set(v, t);
                true
            } else {
                remaining[v.index()] -= 1;
                remaining[v.index()] == 0
            };
            if joins {
                attr.insert(v);
                queue.push(v);
            }
        }
    }
    attr
}

struct Solution {
    won: [NodeSet; 2],
    strategy: [Strategy; 2],
}

fn slot(p: Player) -> usize {
    p.parity()
}

fn zielonka(game: &ParityGame, scope: &NodeSet, calls: &mut u64) -> Solution {
    *calls += 1;
    let n = game.node_count();
    if scope.is_empty() {
        return Solution {
            won: [NodeSet::empty(n), NodeSet::empty(n)],
            strategy: [Strategy::empty(n), Strategy::empty(n)],
        };
    }
    let top = scope.iter().map(|v| game.priority(v)).max().unwrap();
    let alpha = Player::of_priority(top);
    let beta = alpha.opponent();
    let heads = game.priority_class(top).intersection(scope);

    let mut attract_alpha = Strategy::empty(n);
    let a = attractor(game, scope, &heads, alpha, &mut attract_alpha);
    let mut inner = zielonka(game, &scope.difference(&a), calls);

    if inner.won[slot(beta)].is_empty() {
        let mut strategy = std::mem::replace(&mut inner.strategy[slot(alpha)], Strategy::empty(n));
        for (v, t) in attract_alpha.pairs() {
            strategy.set(v, t);
        }
        for v in heads.iter().filter(|&v| game.owner(v) == alpha) {
            let t = *game
                .successors(v)
                .iter()
                .find(|&&t| scope.contains(t))
                .expect("subgames are total");
            strategy.set(v, t);
        }
        let mut won = [NodeSet::empty(n), NodeSet::empty(n)];
        won[slot(alpha)] = scope.clone();
        let mut strategies = [Strategy::empty(n), Strategy::empty(n)];
        strategies[slot(alpha)] = strategy;
        return Solution {
            won,
            strategy: strategies,
        };
    }

    let mut attract_beta = Strategy::empty(n);
    let b = attractor(game, scope, &inner.won[slot(beta)], beta, &mut attract_beta);
    let mut rest = zielonka(game, &scope.difference(&b), calls);

    let mut beta_strategy = std::mem::replace(&mut rest.strategy[slot(beta)], Strategy::empty(n));
    for (v, t) in inner.strategy[slot(beta)].pairs() {
        beta_strategy.set(v, t);
    }
    for (v, t) in attract_beta.pairs() {
        if !inner.won[slot(beta)].contains(v) {
            beta_strategy.set(v, t);
        }
    }
    rest.won[slot(beta)].union_with(&b);
    rest.strategy[slot(beta)] = beta_strategy;
    rest
}

/// Solves `game` with the recursive attractor decomposition.
pub fn reference_solve(game: &ParityGame) -> SolveResult {
    let started = Instant::now();
    let mut calls = 0;
    let Solution { won, strategy } = zielonka(game, &game.all_nodes(), &mut calls);
    let [w_even, w_odd] = won;
    let [mut strategy_even, mut strategy_odd] = strategy;
    strategy_even.restrict_to(&w_even.intersection(game.owned_by(Player::Even)));
    strategy_odd.restrict_to(&w_odd.intersection(game.owned_by(Player::Odd)));
    SolveResult {
        w_even,
        w_odd,
        strategy_even,
        strategy_odd,
        stats: SolveStats {
            outer_iterations: calls,
            per_level_iterations: Vec::new(),
            wall_time: started.elapsed(),
            solver_variant: "reference".into(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::e1;
    use crate::game::{build_game, NodeId, NodeSpec};
    use crate::oracle::verify::verify_positional;
    use Player::*;

    #[test]
    fn e1_is_won_by_even() {
        let g = e1();
        let r = reference_solve(&g);
        assert_eq!(r.w_even, NodeSet::full(5));
        assert_eq!(r.strategy_even.get(NodeId::new(0)), Some(NodeId::new(1)));
        assert!(verify_positional(&g, Even, &r.strategy_even, &r.w_even).is_valid());
    }

    #[test]
    fn mixed_regions() {
        // 0 (prio 1, Even) can only go to 1; 1 (prio 2, Odd) chooses 0 or 2; 2 (prio 3) loops.
        let g = build_game([
            NodeSpec::new(1, Even, [1]),
            NodeSpec::new(2, Odd, [0, 2]),
            NodeSpec::new(3, Even, [2]),
        ])
        .unwrap();
        let r = reference_solve(&g);
        assert_eq!(r.w_odd, NodeSet::full(3));
        assert!(verify_positional(&g, Odd, &r.strategy_odd, &r.w_odd).is_valid());
    }
}
