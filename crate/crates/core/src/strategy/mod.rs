//! Positional strategies from the fixpoint iteration.
//!
//! While Ψ is evaluated, every Even node admitted by the diamond part and
//! every Odd node rejected by the box part pushes the current counter value
//! and the successor responsible onto its own stack.
//!
//! [`extract_strategies`] keeps, for a player `P`, only decisions taken while
//! every level of `P`'s own parity sat in its closing round (so the sets the
//! opponent relies on were already fixpoints), and picks the one that is
//! earliest in `P`'s order. Along every edge of the result the opponent-parity
//! counters at and above the target's priority never grow, and they shrink
//! when that priority favours the opponent, so every cycle is won by `P`.
//!
//! [`extract_by_traversal`] is the replay procedure: reaching a node with
//! credit `C` discards decisions recorded later than `C` and follows the
//! latest survivor. It can return losing strategies and is kept for
//! comparison.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixpoint::{run_with, ModalEvaluator, SolverConfig, Timestamp};
use crate::game::{NodeId, NodeSet, ParityGame, Player, SolveResult, Strategy};

mod rounds;

pub use rounds::RoundLog;

/// One recorded choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub stamp: Timestamp,
    pub target: NodeId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    Diamond,
    Box,
}

/// A recording event as written by the trace dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub node: NodeId,
    pub stamp: Timestamp,
    pub target: NodeId,
    pub operator: Operator,
}

/// Per-node stacks of decisions, top = most recently pushed. Optionally also
/// keeps the flat event log, up to a budget.
#[derive(Clone, Debug)]
pub struct DecisionStacks {
    stacks: Vec<Vec<Decision>>,
    events: Option<Vec<TraceEvent>>,
    event_budget: usize,
    overflowed: bool,
}

impl DecisionStacks {
    pub fn new(n: usize) -> Self {
        Self {
            stacks: vec![Vec::new(); n],
            events: None,
            event_budget: 0,
            overflowed: false,
        }
    }

    /// Stacks that also log up to `budget` events.
    pub fn with_trace(n: usize, budget: usize) -> Self {
        Self {
            events: Some(Vec::new()),
            event_budget: budget,
            ..Self::new(n)
        }
    }

    pub fn push(&mut self, node: NodeId, stamp: &Timestamp, target: NodeId, operator: Operator) {
        let stack = &mut self.stacks[node.index()];
        if let Some(top) = stack.last() {
            assert!(
                *stamp > top.stamp,
                "decision stamps at node {node} must increase: {stamp} after {}",
                top.stamp
            );
        }
        stack.push(Decision {
            stamp: stamp.clone(),
            target,
        });
        if let Some(events) = &mut self.events {
            if events.len() < self.event_budget {
                events.push(TraceEvent {
                    node,
                    stamp: stamp.clone(),
                    target,
                    operator,
                });
            } else {
                self.overflowed = true;
            }
        }
    }

    /// The stack of `v`, bottom first.
    pub fn stack(&self, v: NodeId) -> &[Decision] {
        &self.stacks[v.index()]
    }

    pub fn events(&self) -> &[TraceEvent] {
        self.events.as_deref().unwrap_or(&[])
    }

    pub fn take_events(&mut self) -> Vec<TraceEvent> {
        self.events.take().unwrap_or_default()
    }

    /// Whether the event log ran out of budget.
    pub fn overflowed(&self) -> bool {
        self.overflowed
    }

    pub fn total(&self) -> usize {
        self.stacks.iter().map(Vec::len).sum()
    }

    /// Removes the entries of `v` recorded later than `c` for `player`.
    /// True iff something was removed, or `unassigned` holds and the stack
    /// is nonempty.
    pub fn strip(&mut self, player: Player, v: NodeId, c: &Timestamp, unassigned: bool) -> Result<bool> {
        let stack = &mut self.stacks[v.index()];
        let before = stack.len();
        let mut failure = None;
        stack.retain(|e| match e.stamp.later_than(c, player) {
            Ok(later) => !later,
            Err(err) => {
                failure.get_or_insert(err);
                true
            }
        });
        if let Some(err) = failure {
            return Err(err);
        }
        Ok(stack.len() < before || (unassigned && !stack.is_empty()))
    }
}

fn accepted(game: &ParityGame, bank: &[NodeSet], t: NodeId) -> bool {
    bank[game.priority(t)].contains(t)
}

/// The diamond part of Ψ, recording the first accepted successor of every
/// node it admits.
pub fn diamond_recording(game: &ParityGame, bank: &[NodeSet], count: &Timestamp, stacks: &mut DecisionStacks) -> NodeSet {
    let mut out = NodeSet::empty(game.node_count());
    for v in game.owned_by(Player::Even).iter() {
        if let Some(&t) = game.successors(v).iter().find(|&&t| accepted(game, bank, t)) {
            out.insert(v);
            stacks.push(v, count, t, Operator::Diamond);
        }
    }
    out
}

/// The box part of Ψ, recording the first rejected successor of every node
/// it excludes.
pub fn box_recording(game: &ParityGame, bank: &[NodeSet], count: &Timestamp, stacks: &mut DecisionStacks) -> NodeSet {
    let mut out = NodeSet::empty(game.node_count());
    for v in game.owned_by(Player::Odd).iter() {
        match game.successors(v).iter().find(|&&t| !accepted(game, bank, t)) {
            Some(&t) => stacks.push(v, count, t, Operator::Box),
            None => out.insert(v),
        }
    }
    out
}

/// Evaluates Ψ from scratch while filling a set of decision stacks.
pub struct RecordingModal<'g> {
    game: &'g ParityGame,
    pub stacks: DecisionStacks,
    pub rounds: RoundLog,
}

impl<'g> RecordingModal<'g> {
    pub fn new(game: &'g ParityGame, stacks: DecisionStacks) -> Self {
        Self {
            game,
            stacks,
            rounds: RoundLog::new(),
        }
    }
}

impl ModalEvaluator for RecordingModal<'_> {
    fn evaluate(&mut self, bank: &[NodeSet], count: &Timestamp, _changed_upto: usize) -> Result<NodeSet> {
        self.rounds.record(count);
        let mut out = diamond_recording(self.game, bank, count, &mut self.stacks);
        out.union_with(&box_recording(self.game, bank, count, &mut self.stacks));
        if self.stacks.overflowed() {
            return Err(Error::ResourceLimit {
                what: "trace events",
                limit: self.stacks.event_budget as u64,
            });
        }
        Ok(out)
    }
}

/// σ and `last` of one extraction, plus the per-pass visited set.
#[derive(Clone, Debug)]
pub struct ExtractionState {
    pub sigma: Strategy,
    pub last: Vec<Option<Timestamp>>,
    visited: HashSet<(NodeId, Timestamp)>,
}

impl ExtractionState {
    fn new(n: usize) -> Self {
        Self {
            sigma: Strategy::empty(n),
            last: vec![None; n],
            visited: HashSet::new(),
        }
    }
}

fn traverse(
    game: &ParityGame,
    stacks: &mut DecisionStacks,
    state: &mut ExtractionState,
    player: Player,
    start: NodeId,
    credit: Timestamp,
) -> Result<()> {
    state.visited.clear();
    let mut work = vec![(start, credit)];
    while let Some((v, c)) = work.pop() {
        if !state.visited.insert((v, c.clone())) {
            continue;
        }
        if game.owner(v) == player {
            let unassigned = state.sigma.get(v).is_none();
            if stacks.strip(player, v, &c, unassigned)? {
                let top = stacks.stack(v).last().ok_or(Error::ExtractionStuck { node: v.index() })?;
                let (w, stamp) = (top.target, top.stamp.clone());
                state.sigma.set(v, w);
                state.last[v.index()] = Some(stamp.clone());
                work.push((w, stamp));
            }
        } else {
            for &u in game.successors(v).iter().rev() {
                work.push((u, c.clone()));
            }
        }
    }
    Ok(())
}

/// Positional strategies for both players on their winning regions, from
/// the decisions recorded in settled rounds.
pub fn extract_strategies(
    game: &ParityGame,
    stacks: &DecisionStacks,
    rounds: &RoundLog,
    w_even: &NodeSet,
    w_odd: &NodeSet,
) -> Result<(Strategy, Strategy)> {
    let n = game.node_count();
    let mut out = Vec::with_capacity(2);
    for (player, region) in [(Player::Even, w_even), (Player::Odd, w_odd)] {
        let mut sigma = Strategy::empty(n);
        for v in game.owned_by(player).intersection(region).iter() {
            let mut best: Option<&Decision> = None;
            for e in stacks.stack(v) {
                if !rounds.settled_for(&e.stamp, player) {
                    continue;
                }
                match best {
                    Some(b) if !b.stamp.later_than(&e.stamp, player)? => {}
                    _ => best = Some(e),
                }
            }
            let pick = best.ok_or(Error::ExtractionStuck { node: v.index() })?;
            sigma.set(v, pick.target);
        }
        out.push(sigma);
    }
    let odd = out.pop().unwrap();
    let even = out.pop().unwrap();
    Ok((even, odd))
}

/// Replays the stacks back to front from credit `(n,…,n)`. Consumes (strips)
/// the stacks.
pub fn extract_by_traversal(
    game: &ParityGame,
    stacks: &mut DecisionStacks,
    w_even: &NodeSet,
    w_odd: &NodeSet,
) -> Result<(Strategy, Strategy)> {
    let n = game.node_count();
    let full_credit = Timestamp::uniform(game.d(), n as u32);
    let mut out = Vec::with_capacity(2);
    for (player, region) in [(Player::Even, w_even), (Player::Odd, w_odd)] {
        let mut state = ExtractionState::new(n);
        let domain = game.owned_by(player).intersection(region);
        for v in domain.iter() {
            if state.sigma.get(v).is_some() {
                continue;
            }
            if stacks.stack(v).is_empty() {
                return Err(Error::ExtractionStuck { node: v.index() });
            }
            traverse(game, stacks, &mut state, player, v, full_credit.clone())?;
        }
        state.sigma.restrict_to(&domain);
        out.push(state.sigma);
    }
    let odd = out.pop().unwrap();
    let even = out.pop().unwrap();
    Ok((even, odd))
}

/// Solves `game` with decision recording and extracts both strategies.
///
/// Recording evaluates Ψ without the modal cache; `cache_modal_parts` is
/// ignored. Neither `eliminate_resets` nor `full_iteration_mode` is
/// supported since both alter the meaning of the counter.
pub fn solve_with_strategies(game: &ParityGame, config: &SolverConfig) -> Result<SolveResult> {
    if config.eliminate_resets || config.full_iteration_mode {
        return Err(Error::InvalidConfig(
            "strategy recording needs the standard counter schedule".into(),
        ));
    }
    let mut modal = RecordingModal::new(game, DecisionStacks::new(game.node_count()));
    let config = SolverConfig {
        cache_modal_parts: false,
        ..config.clone()
    };
    let run = run_with(game, &config, &mut modal)?;
    let mut result = run.into_result();
    let (even, odd) = extract_strategies(game, &modal.stacks, &modal.rounds, &result.w_even, &result.w_odd)?;
    result.strategy_even = even;
    result.strategy_odd = odd;
    Ok(result)
}

/// A recorded run: the regions, the counter at the end, and the event log.
#[derive(Clone, Debug)]
pub struct TraceRun {
    pub result: SolveResult,
    pub events: Vec<TraceEvent>,
    pub snapshot_keys: Vec<Timestamp>,
}

/// Runs the baseline iteration recording every decision event, failing
/// with `ResourceLimit` once more than `budget` events would be logged.
pub fn trace_run(game: &ParityGame, budget: usize) -> Result<TraceRun> {
    let mut modal = RecordingModal::new(game, DecisionStacks::with_trace(game.node_count(), budget));
    let config = SolverConfig {
        snapshot_budget: crate::fixpoint::DEFAULT_SNAPSHOT_BUDGET,
        ..SolverConfig::baseline().with_snapshots()
    };
    let run = run_with(game, &config, &mut modal)?;
    let snapshot_keys = run.snapshots.iter().map(|s| s.stamp.clone()).collect();
    Ok(TraceRun {
        result: run.into_result(),
        events: modal.stacks.take_events(),
        snapshot_keys,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::{eval_box, eval_diamond};
    use crate::game::fixtures::e1;
    use crate::game::{build_game, NodeSpec};
    use crate::oracle::verify_positional;
    use Player::*;

    fn ts(c: &[u32]) -> Timestamp {
        Timestamp::from_high(c)
    }

    fn id(i: usize) -> NodeId {
        NodeId::new(i)
    }

    #[test]
    fn e1_decisions_at_node_0() {
        let g = e1();
        let run = trace_run(&g, 10_000).unwrap();
        let at0: Vec<_> = run.events.iter().filter(|e| e.node == id(0)).collect();
        let wanted = [(ts(&[0, 0, 0, 0, 1]), 2), (ts(&[0, 0, 1, 1, 1]), 1), (ts(&[0, 1, 0, 0, 1]), 2)];
        let mut it = at0.iter();
        for (stamp, target) in wanted {
            assert!(
                it.any(|e| e.stamp == stamp && e.target == id(target)),
                "missing ({stamp}, {target})"
            );
        }
        let first_box = run.events.iter().find(|e| e.operator == Operator::Box).unwrap();
        assert_eq!((first_box.node, first_box.target), (id(2), id(3)));
        assert_eq!(first_box.stamp, ts(&[0, 0, 0, 0, 1]));
        assert!(run.events.iter().all(|e| e.node != id(1)));
    }

    #[test]
    fn e1_strategy() {
        let r = solve_with_strategies(&e1(), &SolverConfig::baseline()).unwrap();
        assert_eq!(r.strategy_even.pairs().collect::<Vec<_>>(), vec![(id(0), id(1))]);
        assert!(r.strategy_odd.is_empty());
    }

    #[test]
    fn traversal_can_close_a_losing_cycle() {
        // Odd wins everywhere by looping on node 1. Late in the run node 1
        // is recorded moving to node 0, which is only good while credit for
        // priority 2 remains.
        let g = build_game([NodeSpec::new(2, Odd, [1]), NodeSpec::new(1, Odd, [0, 1])]).unwrap();
        let mut modal = RecordingModal::new(&g, DecisionStacks::new(2));
        let run = run_with(&g, &SolverConfig::baseline(), &mut modal).unwrap();
        let r = run.into_result();
        assert!(r.w_even.is_empty());

        let (_, odd) = extract_by_traversal(&g, &mut modal.stacks.clone(), &r.w_even, &r.w_odd).unwrap();
        assert_eq!(odd.get(id(1)), Some(id(0)));
        assert!(!verify_positional(&g, Odd, &odd, &r.w_odd).is_valid());

        let (_, odd) = extract_strategies(&g, &modal.stacks, &modal.rounds, &r.w_even, &r.w_odd).unwrap();
        assert_eq!(odd.get(id(1)), Some(id(1)));
        assert!(verify_positional(&g, Odd, &odd, &r.w_odd).is_valid());
    }

    #[test]
    fn strip_examples() {
        let mut stacks = DecisionStacks::new(5);
        for (c, t) in [([0, 0, 0, 0, 1], 2), ([0, 0, 1, 1, 1], 1), ([0, 1, 0, 0, 1], 2)] {
            stacks.push(id(0), &ts(&c), id(t), Operator::Diamond);
        }
        assert!(stacks.strip(Even, id(0), &ts(&[0, 0, 1, 1, 1]), false).unwrap());
        let top = stacks.stack(id(0)).last().unwrap();
        assert_eq!((top.stamp.clone(), top.target), (ts(&[0, 0, 1, 1, 1]), id(1)));
        let own = top.stamp.clone();
        assert!(!stacks.strip(Even, id(0), &own, false).unwrap());
        assert!(stacks.strip(Even, id(0), &own, true).unwrap());
        assert!(!stacks.strip(Even, id(1), &own, true).unwrap());
    }

    #[test]
    fn recording_does_not_change_sets() {
        let g = e1();
        let bank = vec![
            NodeSet::from_nodes(5, [id(1), id(3)]),
            NodeSet::from_nodes(5, [id(1)]),
            NodeSet::full(5),
            NodeSet::empty(5),
            NodeSet::full(5),
        ];
        let mut stacks = DecisionStacks::new(5);
        let c = ts(&[0, 0, 0, 0, 1]);
        assert_eq!(diamond_recording(&g, &bank, &c, &mut stacks), eval_diamond(&g, &bank));
        assert_eq!(box_recording(&g, &bank, &c, &mut stacks), eval_box(&g, &bank));
    }

    #[test]
    fn no_recordings_without_even_nodes_or_exclusions() {
        let g = build_game([NodeSpec::new(1, Odd, [0])]).unwrap();
        let mut stacks = DecisionStacks::new(1);
        diamond_recording(&g, &[NodeSet::full(1), NodeSet::full(1)], &ts(&[0, 1]), &mut stacks);
        box_recording(&g, &[NodeSet::full(1), NodeSet::full(1)], &ts(&[0, 1]), &mut stacks);
        assert_eq!(stacks.total(), 0);
    }

    #[test]
    fn self_loops() {
        let g = build_game([NodeSpec::new(0, Even, [0])]).unwrap();
        let r = solve_with_strategies(&g, &SolverConfig::baseline()).unwrap();
        assert_eq!(r.strategy_even.get(id(0)), Some(id(0)));
        let g = build_game([NodeSpec::new(1, Odd, [0])]).unwrap();
        let r = solve_with_strategies(&g, &SolverConfig::baseline()).unwrap();
        assert_eq!(r.strategy_odd.get(id(0)), Some(id(0)));
    }

    #[test]
    #[should_panic(expected = "must increase")]
    fn push_rejects_non_increasing_stamps() {
        let mut stacks = DecisionStacks::new(1);
        stacks.push(id(0), &ts(&[1]), id(0), Operator::Box);
        stacks.push(id(0), &ts(&[1]), id(0), Operator::Box);
    }

    #[test]
    fn trace_budget() {
        assert!(matches!(trace_run(&e1(), 0), Err(Error::ResourceLimit { .. })));
    }
}
