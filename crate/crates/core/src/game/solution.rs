use std::time::Duration;

use serde::Serialize;

use super::{NodeId, NodeSet, Player};

/// A positional strategy: a partial map from nodes to chosen successors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Strategy {
    choice: Vec<Option<NodeId>>,
}

impl Strategy {
    pub fn empty(n: usize) -> Self {
        Self {
            choice: vec![None; n],
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let mut s = Self::empty(n);
        for (v, t) in pairs {
            s.set(v, t);
        }
        s
    }

    pub fn get(&self, v: NodeId) -> Option<NodeId> {
        self.choice[v.index()]
    }

    pub fn set(&mut self, v: NodeId, target: NodeId) {
        self.choice[v.index()] = Some(target);
    }

    pub fn unset(&mut self, v: NodeId) {
        self.choice[v.index()] = None;
    }

    /// Defined `(node, successor)` pairs in ascending node order.
    pub fn pairs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.choice
            .iter()
            .enumerate()
            .filter_map(|(v, t)| t.map(|t| (NodeId::new(v), t)))
    }

    pub fn domain_size(&self) -> usize {
        self.choice.iter().filter(|t| t.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.domain_size() == 0
    }

    /// Drops every choice outside `keep`.
    pub fn restrict_to(&mut self, keep: &NodeSet) {
        for (v, t) in self.choice.iter_mut().enumerate() {
            if !keep.contains(NodeId::new(v)) {
                *t = None;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.choice.len()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SolveStats {
    /// Evaluations of the inner expression (fixpoint solvers), or the analogous
    /// unit of work for the oracle solvers.
    pub outer_iterations: u64,
    /// High-water mark reached by each level's iteration counter.
    pub per_level_iterations: Vec<u32>,
    #[serde(rename = "wall_time_ms", serialize_with = "as_millis")]
    pub wall_time: Duration,
    pub solver_variant: String,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

/// Winning regions, positional strategies and run statistics.
///
/// `w_even` and `w_odd` partition the nodes; `strategy_even` is defined at
/// most on `V_Even ∩ w_even` (likewise for Odd) and may be empty when the
/// solver only computed regions.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub w_even: NodeSet,
    pub w_odd: NodeSet,
    pub strategy_even: Strategy,
    pub strategy_odd: Strategy,
    pub stats: SolveStats,
}

impl SolveResult {
    /// Result with `w_even` as given, its complement for Odd, and no strategies.
    pub fn regions_only(w_even: NodeSet, stats: SolveStats) -> Self {
        let n = w_even.universe();
        Self {
            w_odd: w_even.complement(),
            w_even,
            strategy_even: Strategy::empty(n),
            strategy_odd: Strategy::empty(n),
            stats,
        }
    }

    pub fn winner(&self, v: NodeId) -> Player {
        if self.w_even.contains(v) {
            Player::Even
        } else {
            Player::Odd
        }
    }

    pub fn region(&self, player: Player) -> &NodeSet {
        match player {
            Player::Even => &self.w_even,
            Player::Odd => &self.w_odd,
        }
    }

    pub fn strategy(&self, player: Player) -> &Strategy {
        match player {
            Player::Even => &self.strategy_even,
            Player::Odd => &self.strategy_odd,
        }
    }

    pub fn strategy_mut(&mut self, player: Player) -> &mut Strategy {
        match player {
            Player::Even => &mut self.strategy_even,
            Player::Odd => &mut self.strategy_odd,
        }
    }
}
