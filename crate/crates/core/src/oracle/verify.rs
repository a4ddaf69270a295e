use std::fmt;

use crate::game::{NodeId, NodeSet, ParityGame, Player, Strategy};

use super::cycles::find_cycle;

/// Why a strategy fails to be winning on a region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A node of the player in the region has no choice.
    Undefined { node: NodeId },
    /// The chosen target is not a successor.
    NotSuccessor { node: NodeId, target: NodeId },
    /// The chosen target lies outside the region.
    LeavesRegion { node: NodeId, target: NodeId },
    /// An opponent node in the region can move out of it.
    OpponentEscapes { node: NodeId, target: NodeId },
    /// A cycle consistent with the strategy whose top priority favours the
    /// opponent; first and last entries coincide.
    LosingCycle { cycle: Vec<NodeId> },
}

impl Violation {
    /// The node the violation is reported at.
    pub fn node(&self) -> NodeId {
        match self {
            Violation::Undefined { node }
            | Violation::NotSuccessor { node, .. }
            | Violation::LeavesRegion { node, .. }
            | Violation::OpponentEscapes { node, .. } => *node,
            Violation::LosingCycle { cycle } => cycle[0],
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Undefined { node } => write!(f, "node {node}: no strategy choice"),
            Violation::NotSuccessor { node, target } => write!(f, "node {node}: chosen {target} is not a successor"),
            Violation::LeavesRegion { node, target } => {
                write!(f, "node {node}: chosen {target} lies outside the winning region")
            }
            Violation::OpponentEscapes { node, target } => {
                write!(f, "node {node}: opponent can leave the winning region to {target}")
            }
            Violation::LosingCycle { cycle } => {
                write!(f, "losing cycle ")?;
                for (i, v) in cycle.iter().enumerate() {
                    if i > 0 {
                        write!(f, "->")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Violation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Checks that `sigma` is a positional winning strategy for `player` from
/// every node of `region`.
pub fn verify_positional(game: &ParityGame, player: Player, sigma: &Strategy, region: &NodeSet) -> Verdict {
    let n = game.node_count();
    let mut edges = vec![Vec::new(); n];
    for v in region.iter() {
        if game.owner(v) == player {
            let Some(t) = sigma.get(v) else {
                return Verdict::Invalid(Violation::Undefined { node: v });
            };
            if !game.has_edge(v, t) {
                return Verdict::Invalid(Violation::NotSuccessor { node: v, target: t });
            }
            if !region.contains(t) {
                return Verdict::Invalid(Violation::LeavesRegion { node: v, target: t });
            }
            edges[v.index()].push(t);
        } else {
            if let Some(&t) = game.successors(v).iter().find(|&&t| !region.contains(t)) {
                return Verdict::Invalid(Violation::OpponentEscapes { node: v, target: t });
            }
            edges[v.index()].extend_from_slice(game.successors(v));
        }
    }
    match find_cycle(game, &edges, region, player.opponent().parity()) {
        Some(cycle) => Verdict::Invalid(Violation::LosingCycle { cycle }),
        None => Verdict::Valid,
    }
}
