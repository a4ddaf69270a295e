//! Evaluation of the inner expression Ψ over a bank of level variables.
//!
//! `Ψ(X) = {v ∈ V_Even | ∃ (v,t) ∈ E. t ∈ X_{Ω(t)}} ∪ {v ∈ V_Odd | ∀ (v,t) ∈ E. t ∈ X_{Ω(t)}}`

use crate::error::Result;
use crate::game::{NodeSet, ParityGame, Player};

use super::Timestamp;

#[inline]
fn accepted(game: &ParityGame, bank: &[NodeSet], t: crate::game::NodeId) -> bool {
    bank[game.priority(t)].contains(t)
}

/// Even nodes with some successor `t ∈ X_{Ω(t)}`.
pub fn eval_diamond(game: &ParityGame, bank: &[NodeSet]) -> NodeSet {
    debug_assert_eq!(bank.len(), game.d());
    let mut out = NodeSet::empty(game.node_count());
    for v in game.owned_by(Player::Even).iter() {
        if game.successors(v).iter().any(|&t| accepted(game, bank, t)) {
            out.insert(v);
        }
    }
    out
}

/// Odd nodes all of whose successors `t` satisfy `t ∈ X_{Ω(t)}`.
pub fn eval_box(game: &ParityGame, bank: &[NodeSet]) -> NodeSet {
    debug_assert_eq!(bank.len(), game.d());
    let mut out = NodeSet::empty(game.node_count());
    for v in game.owned_by(Player::Odd).iter() {
        if game.successors(v).iter().all(|&t| accepted(game, bank, t)) {
            out.insert(v);
        }
    }
    out
}

/// `eval_diamond ∪ eval_box`.
pub fn eval_psi(game: &ParityGame, bank: &[NodeSet]) -> NodeSet {
    let mut out = eval_diamond(game, bank);
    out.union_with(&eval_box(game, bank));
    out
}

/// Strategy for evaluating Ψ inside the iteration loop.
pub trait ModalEvaluator {
    /// Computes Ψ over `bank` at moment `count`. Levels above `changed_upto`
    /// hold the same values as at the previous call.
    fn evaluate(&mut self, bank: &[NodeSet], count: &Timestamp, changed_upto: usize) -> Result<NodeSet>;
}

/// Evaluates Ψ from scratch every time.
pub struct PlainModal<'g> {
    game: &'g ParityGame,
}

impl<'g> PlainModal<'g> {
    pub fn new(game: &'g ParityGame) -> Self {
        Self { game }
    }
}

impl ModalEvaluator for PlainModal<'_> {
    fn evaluate(&mut self, bank: &[NodeSet], _count: &Timestamp, _changed_upto: usize) -> Result<NodeSet> {
        Ok(eval_psi(self.game, bank))
    }
}

/// Keeps the per-level modal parts and their suffix aggregates so that only
/// the levels that changed since the last call are recomputed.
///
/// For level `i`, `diamond[i]` holds the Even nodes with an accepted
/// priority-`i` successor and `blocked[i]` the Odd nodes with a rejected
/// priority-`i` successor. Ψ is then `∪ diamond ∪ (V_Odd \ ∪ blocked)`.
pub struct CachedModal<'g> {
    game: &'g ParityGame,
    /// Edges `(source, target)` grouped by the priority of the target.
    edges_into: Vec<Vec<(crate::game::NodeId, crate::game::NodeId)>>,
    diamond: Vec<NodeSet>,
    blocked: Vec<NodeSet>,
    /// `diamond_from[i] = ∪_{j ≥ i} diamond[j]`, with a trailing empty set.
    diamond_from: Vec<NodeSet>,
    blocked_from: Vec<NodeSet>,
    primed: bool,
}

impl<'g> CachedModal<'g> {
    pub fn new(game: &'g ParityGame) -> Self {
        let d = game.d();
        let n = game.node_count();
        let mut edges_into = vec![Vec::new(); d];
        for v in game.nodes() {
            for &t in game.successors(v) {
                edges_into[game.priority(t)].push((v, t));
            }
        }
        Self {
            game,
            edges_into,
            diamond: vec![NodeSet::empty(n); d],
            blocked: vec![NodeSet::empty(n); d],
            diamond_from: vec![NodeSet::empty(n); d + 1],
            blocked_from: vec![NodeSet::empty(n); d + 1],
            primed: false,
        }
    }

    fn refresh_level(&mut self, level: usize, value: &NodeSet) {
        let (diamond, blocked) = (&mut self.diamond[level], &mut self.blocked[level]);
        diamond.clear();
        blocked.clear();
        for &(v, t) in &self.edges_into[level] {
            let ok = value.contains(t);
            match self.game.owner(v) {
                Player::Even if ok => diamond.insert(v),
                Player::Odd if !ok => blocked.insert(v),
                _ => {}
            }
        }
    }
}

impl ModalEvaluator for CachedModal<'_> {
    fn evaluate(&mut self, bank: &[NodeSet], _count: &Timestamp, changed_upto: usize) -> Result<NodeSet> {
        let d = self.game.d();
        let top = if self.primed { changed_upto.min(d - 1) } else { d - 1 };
        self.primed = true;
        for level in (0..=top).rev() {
            self.refresh_level(level, &bank[level]);
            let mut diamond = self.diamond_from[level + 1].clone();
            diamond.union_with(&self.diamond[level]);
            self.diamond_from[level] = diamond;
            let mut blocked = self.blocked_from[level + 1].clone();
            blocked.union_with(&self.blocked[level]);
            self.blocked_from[level] = blocked;
        }
        let mut out = self.game.owned_by(Player::Odd).difference(&self.blocked_from[0]);
        out.union_with(&self.diamond_from[0]);
        Ok(out)
    }
}
