//! The credit pay-off game.
//!
//! A configuration is a node together with a credit `(c_{d-1}, …, c_0)`.
//! If the credit for the priority `p` of the current node is used up, the
//! play ends and the parity of `p` decides the winner. Otherwise the owner
//! moves and the credit is updated: `c_p` decreases by one, the counters
//! below `p` are refilled to `n`, the ones above stay. The update lowers the
//! credit lexicographically, so every play is finite.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fixpoint::Timestamp;
use crate::game::{NodeId, NodeSet, ParityGame, Player, Priority};

pub const DEFAULT_PAYOFF_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PayoffConfig {
    pub node: NodeId,
    pub credit: Timestamp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayoffOutcome {
    pub winner: Player,
    /// A play in which the winner follows a winning choice and the loser
    /// the first listed successor, ending in a terminal configuration.
    pub witness: Option<Vec<PayoffConfig>>,
}

/// Credit after leaving a node of priority `p`.
pub fn step_credit(c: &Timestamp, p: Priority, n: usize) -> Result<Timestamp> {
    if c.get(p) == 0 {
        return Err(Error::TerminalConfig { priority: p });
    }
    let mut next = c.clone();
    next.set(p, c.get(p) - 1);
    for h in 0..p {
        next.set(h, n as u32);
    }
    Ok(next)
}

/// Winner of every configuration of a game, by backward induction over
/// credits in increasing order.
pub struct PayoffTable<'g> {
    game: &'g ParityGame,
    radix: usize,
    even_wins: Vec<bool>,
}

impl<'g> PayoffTable<'g> {
    pub fn new(game: &'g ParityGame) -> Result<Self> {
        Self::with_budget(game, DEFAULT_PAYOFF_BUDGET)
    }

    /// Fails with `ResourceLimit` if there are more than `budget`
    /// configurations.
    pub fn with_budget(game: &'g ParityGame, budget: u64) -> Result<Self> {
        let n = game.node_count();
        let d = game.d();
        let limit = Error::ResourceLimit {
            what: "pay-off configurations",
            limit: budget,
        };
        let credits = (n as u64 + 1).checked_pow(d as u32).ok_or(limit.clone())?;
        let size = credits.checked_mul(n as u64).ok_or(limit.clone())?;
        if size > budget {
            return Err(limit);
        }
        let radix = n + 1;
        let mut even_wins = vec![false; size as usize];
        let mut credit = Timestamp::zero(d);
        for index in 0..credits as usize {
            for v in game.nodes() {
                let p = game.priority(v);
                let value = if credit.get(p) == 0 {
                    p.is_multiple_of(2)
                } else {
                    let base = encode(&step_credit(&credit, p, n)?, radix) * n;
                    debug_assert!(base < index * n);
                    let mut wins = game.successors(v).iter().map(|t| even_wins[base + t.index()]);
                    match game.owner(v) {
                        Player::Even => wins.any(|w| w),
                        Player::Odd => wins.all(|w| w),
                    }
                };
                even_wins[index * n + v.index()] = value;
            }
            advance(&mut credit, n as u32);
        }
        Ok(Self { game, radix, even_wins })
    }

    fn check(&self, start: &PayoffConfig) -> Result<()> {
        let d = self.game.d();
        if start.credit.len() != d {
            return Err(Error::LengthMismatch {
                left: start.credit.len(),
                right: d,
            });
        }
        if start.credit.levels().iter().any(|&c| c as usize >= self.radix) {
            return Err(Error::InvalidConfig(format!(
                "credit {} exceeds the node count",
                start.credit
            )));
        }
        Ok(())
    }

    fn lookup(&self, v: NodeId, credit: &Timestamp) -> bool {
        self.even_wins[encode(credit, self.radix) * self.game.node_count() + v.index()]
    }

    pub fn winner(&self, start: &PayoffConfig) -> Result<Player> {
        self.check(start)?;
        Ok(if self.lookup(start.node, &start.credit) {
            Player::Even
        } else {
            Player::Odd
        })
    }

    pub fn outcome(&self, start: &PayoffConfig) -> Result<PayoffOutcome> {
        let winner = self.winner(start)?;
        let n = self.game.node_count();
        let mut play = vec![start.clone()];
        let mut cur = start.clone();
        loop {
            let p = self.game.priority(cur.node);
            if cur.credit.get(p) == 0 {
                break;
            }
            let next = step_credit(&cur.credit, p, n)?;
            let successors = self.game.successors(cur.node);
            let target = if self.game.owner(cur.node) == winner {
                *successors
                    .iter()
                    .find(|&&t| self.lookup(t, &next) == (winner == Player::Even))
                    .expect("a winning configuration has a winning move")
            } else {
                successors[0]
            };
            cur = PayoffConfig {
                node: target,
                credit: next,
            };
            play.push(cur.clone());
        }
        Ok(PayoffOutcome {
            winner,
            witness: Some(play),
        })
    }
}

fn encode(c: &Timestamp, radix: usize) -> usize {
    c.levels().iter().rev().fold(0, |acc, &x| acc * radix + x as usize)
}

/// Next credit in increasing index order (`c_0` fastest).
fn advance(c: &mut Timestamp, max: u32) {
    for level in 0..c.len() {
        if c.get(level) < max {
            c.increment(level);
            return;
        }
        c.set(level, 0);
    }
}

/// Winner of the pay-off game from `start`.
pub fn payoff_winner(game: &ParityGame, start: &PayoffConfig) -> Result<PayoffOutcome> {
    PayoffTable::new(game)?.outcome(start)
}

/// The priority-`h` nodes from which Even wins the pay-off game with credit
/// `c`, computed level by level: at credit `c` with `c_h > 0`, a node of
/// priority `h` is won for Even iff its owner can move (Even) or must move
/// (Odd) into a node of priority `h'` won at credit
/// `(c_{d-1}, …, c_h − 1, n, …, n)`. Memoised on `(h, c_{d-1}, …, c_h)`.
pub fn snapshot_value(game: &ParityGame, h: Priority, c: &Timestamp) -> Result<NodeSet> {
    snapshot_value_with_budget(game, h, c, DEFAULT_PAYOFF_BUDGET)
}

pub fn snapshot_value_with_budget(game: &ParityGame, h: Priority, c: &Timestamp, budget: u64) -> Result<NodeSet> {
    if c.len() != game.d() {
        return Err(Error::LengthMismatch {
            left: c.len(),
            right: game.d(),
        });
    }
    let mut memo = SnapshotMemo {
        game,
        budget,
        values: HashMap::new(),
    };
    let key = (h, c.to_high()[..game.d() - h].to_vec());
    memo.solve(key)
}

type SnapshotKey = (Priority, Vec<u32>);

struct SnapshotMemo<'g> {
    game: &'g ParityGame,
    budget: u64,
    /// Keyed by level and the counters from `c_{d-1}` down to `c_h`.
    values: HashMap<SnapshotKey, NodeSet>,
}

impl SnapshotMemo<'_> {
    /// Keys the value of `(h, prefix)` depends on.
    fn dependencies(&self, (h, prefix): &SnapshotKey) -> Vec<SnapshotKey> {
        let d = self.game.d();
        let n = self.game.node_count() as u32;
        if *prefix.last().unwrap() == 0 {
            return Vec::new();
        }
        let mut next = prefix.clone();
        *next.last_mut().unwrap() -= 1;
        next.extend(std::iter::repeat_n(n, *h));
        debug_assert_eq!(next.len(), d);
        (0..d).map(|h2| (h2, next[..d - h2].to_vec())).collect()
    }

    fn solve(&mut self, root: SnapshotKey) -> Result<NodeSet> {
        let mut work = vec![root.clone()];
        while let Some(key) = work.last().cloned() {
            if self.values.contains_key(&key) {
                work.pop();
                continue;
            }
            let deps = self.dependencies(&key);
            let missing: Vec<_> = deps.iter().filter(|k| !self.values.contains_key(*k)).cloned().collect();
            if !missing.is_empty() {
                work.extend(missing);
                continue;
            }
            work.pop();
            let value = self.evaluate(&key, &deps);
            if self.values.len() as u64 >= self.budget {
                return Err(Error::ResourceLimit {
                    what: "snapshot memo",
                    limit: self.budget,
                });
            }
            self.values.insert(key, value);
        }
        Ok(self.values[&root].clone())
    }

    fn evaluate(&self, (h, _): &SnapshotKey, deps: &[SnapshotKey]) -> NodeSet {
        let game = self.game;
        if deps.is_empty() {
            return if h % 2 == 0 {
                game.priority_class(*h).clone()
            } else {
                NodeSet::empty(game.node_count())
            };
        }
        let accepted = |t: NodeId| self.values[&deps[game.priority(t)]].contains(t);
        let mut out = NodeSet::empty(game.node_count());
        for v in game.priority_class(*h).iter() {
            let mut succ = game.successors(v).iter().map(|&t| accepted(t));
            let wins = match game.owner(v) {
                Player::Even => succ.any(|w| w),
                Player::Odd => succ.all(|w| w),
            };
            if wins {
                out.insert(v);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::e1;
    use crate::game::{build_game, NodeSpec};
    use Player::*;

    fn ts(c: &[u32]) -> Timestamp {
        Timestamp::from_high(c)
    }

    #[test]
    fn credit_updates() {
        assert_eq!(step_credit(&ts(&[3, 2, 1]), 2, 4).unwrap(), ts(&[2, 4, 4]));
        assert_eq!(step_credit(&ts(&[3, 2, 1]), 0, 4).unwrap(), ts(&[3, 2, 0]));
        assert_eq!(step_credit(&ts(&[3, 0, 0]), 2, 4).unwrap(), ts(&[2, 4, 4]));
        assert_eq!(
            step_credit(&ts(&[3, 0, 1]), 1, 4),
            Err(Error::TerminalConfig { priority: 1 })
        );
    }

    #[test]
    fn terminal_configurations() {
        let g = e1();
        let table = PayoffTable::new(&g).unwrap();
        let at = |v: usize, c: &[u32]| {
            table
                .winner(&PayoffConfig {
                    node: NodeId::new(v),
                    credit: ts(c),
                })
                .unwrap()
        };
        assert_eq!(at(2, &[5, 5, 0, 5, 5]), Even);
        assert_eq!(at(3, &[5, 0, 5, 5, 5]), Odd);
        assert_eq!(at(0, &[5, 5, 5, 5, 5]), Even);
    }

    #[test]
    fn e1_witness_play() {
        let g = e1();
        let start = PayoffConfig {
            node: NodeId::new(0),
            credit: Timestamp::uniform(5, 5),
        };
        let out = payoff_winner(&g, &start).unwrap();
        assert_eq!(out.winner, Even);
        let play = out.witness.unwrap();
        assert_eq!(play[0], start);
        for pair in play.windows(2) {
            assert!(g.has_edge(pair[0].node, pair[1].node));
            let p = g.priority(pair[0].node);
            assert_eq!(pair[1].credit, step_credit(&pair[0].credit, p, 5).unwrap());
        }
        let last = play.last().unwrap();
        let p = g.priority(last.node);
        assert_eq!(last.credit.get(p), 0);
        assert_eq!(p % 2, 0);
    }

    #[test]
    fn snapshot_value_examples() {
        let g = e1();
        for h in 0..5 {
            let zero = snapshot_value(&g, h, &Timestamp::zero(5)).unwrap();
            let expected = if h % 2 == 0 { g.with_priority(h) } else { NodeSet::empty(5) };
            assert_eq!(zero, expected);
        }
        assert_eq!(
            snapshot_value(&g, 0, &Timestamp::uniform(5, 5)).unwrap(),
            NodeSet::from_nodes(5, [NodeId::new(0)])
        );
        assert!(snapshot_value(&g, 3, &ts(&[5, 0, 5, 5, 5])).unwrap().is_empty());
    }

    #[test]
    fn two_routes_agree() {
        let g = build_game([
            NodeSpec::new(0, Even, [1, 2]),
            NodeSpec::new(1, Odd, [0, 2]),
            NodeSpec::new(2, Odd, [0]),
        ])
        .unwrap();
        let table = PayoffTable::new(&g).unwrap();
        let mut c = Timestamp::zero(3);
        for _ in 0..64 {
            for h in 0..3 {
                let set = snapshot_value(&g, h, &c).unwrap();
                for v in g.with_priority(h).iter() {
                    let w = table.winner(&PayoffConfig { node: v, credit: c.clone() }).unwrap();
                    assert_eq!(set.contains(v), w == Even, "node {v} credit {c}");
                }
            }
            advance(&mut c, 3);
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            PayoffTable::with_budget(&e1(), 100),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
