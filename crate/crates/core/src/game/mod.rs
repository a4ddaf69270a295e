//! The parity game model: nodes, owners, priorities and successor lists.
//!
//! A play is won by [`Player::Even`] iff the maximal priority seen infinitely
//! often is even. Node ids are dense in `0..n`, every node has at least one
//! successor and successor lists are duplicate-free.

mod compress;
mod nodeset;
mod pgsolver;
mod solution;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use compress::compress_priorities;
pub use nodeset::NodeSet;
pub use pgsolver::{parse_pgsolver, parse_solution, write_pgsolver, write_solution, ParsedSolution};
pub use solution::{SolveResult, SolveStats, Strategy};

pub type Priority = usize;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(u32);

impl NodeId {
    #[inline]
    pub fn new(index: usize) -> Self {
        debug_assert!(index <= u32::MAX as usize);
        NodeId(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(index: usize) -> Self {
        NodeId::new(index)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// The player who wins a play whose dominant priority is `priority`.
    pub fn of_priority(priority: Priority) -> Player {
        if priority.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }

    /// Numeric code used in the PGSolver formats: 0 for Even, 1 for Odd.
    pub fn code(self) -> u8 {
        match self {
            Player::Even => 0,
            Player::Odd => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Player> {
        match code {
            0 => Some(Player::Even),
            1 => Some(Player::Odd),
            _ => None,
        }
    }

    /// Parity of the priorities this player wants to see, as a remainder mod 2.
    pub fn parity(self) -> usize {
        self.code() as usize
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Even => write!(f, "Even"),
            Player::Odd => write!(f, "Odd"),
        }
    }
}

/// Input description of a single node for [`ParityGame::build`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSpec {
    pub priority: i64,
    pub owner: Player,
    pub successors: Vec<usize>,
    pub name: Option<String>,
}

impl NodeSpec {
    pub fn new(priority: i64, owner: Player, successors: impl Into<Vec<usize>>) -> Self {
        Self {
            priority,
            owner,
            successors: successors.into(),
            name: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }
}

/// A finite parity game `(V, V_Even, V_Odd, E, Ω)` with dense node ids.
///
/// Immutable once built; share it freely between concurrent solver runs.
#[derive(Clone, PartialEq, Eq)]
pub struct ParityGame {
    owner: Vec<Player>,
    priority: Vec<Priority>,
    successors: Vec<Vec<NodeId>>,
    predecessors: Vec<Vec<NodeId>>,
    names: Vec<Option<String>>,
    max_priority: Priority,
    edge_count: usize,
    even_nodes: NodeSet,
    odd_nodes: NodeSet,
    by_priority: Vec<NodeSet>,
}

impl ParityGame {
    /// Validates `nodes` and builds the game; node `i` of the input gets id `i`.
    pub fn build(nodes: Vec<NodeSpec>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::EmptyGame);
        }
        let n = nodes.len();
        let mut owner = Vec::with_capacity(n);
        let mut priority = Vec::with_capacity(n);
        let mut successors = Vec::with_capacity(n);
        let mut names = Vec::with_capacity(n);
        let mut seen = vec![usize::MAX; n];

        for (v, spec) in nodes.into_iter().enumerate() {
            if spec.priority < 0 {
                return Err(Error::NegativePriority {
                    node: v,
                    priority: spec.priority,
                });
            }
            if spec.successors.is_empty() {
                return Err(Error::NoSuccessor { node: v });
            }
            let mut succ = Vec::with_capacity(spec.successors.len());
            for &t in &spec.successors {
                if t >= n {
                    return Err(Error::DanglingEdge { node: v, target: t });
                }
                if seen[t] == v {
                    return Err(Error::DuplicateEdge { node: v, target: t });
                }
                seen[t] = v;
                succ.push(NodeId::new(t));
            }
            owner.push(spec.owner);
            priority.push(spec.priority as Priority);
            successors.push(succ);
            names.push(spec.name);
        }
        Ok(Self::assemble(owner, priority, successors, names))
    }

    fn assemble(
        owner: Vec<Player>,
        priority: Vec<Priority>,
        successors: Vec<Vec<NodeId>>,
        names: Vec<Option<String>>,
    ) -> Self {
        let n = owner.len();
        let max_priority = priority.iter().copied().max().unwrap_or(0);
        let mut predecessors = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (v, succ) in successors.iter().enumerate() {
            edge_count += succ.len();
            for t in succ {
                predecessors[t.index()].push(NodeId::new(v));
            }
        }
        let even_nodes = NodeSet::from_nodes(
            n,
            (0..n).filter(|&v| owner[v] == Player::Even).map(NodeId::new),
        );
        let odd_nodes = even_nodes.complement();
        let mut by_priority = vec![NodeSet::empty(n); max_priority + 1];
        for (v, &p) in priority.iter().enumerate() {
            by_priority[p].insert(NodeId::new(v));
        }
        Self {
            owner,
            priority,
            successors,
            predecessors,
            names,
            max_priority,
            edge_count,
            even_nodes,
            odd_nodes,
            by_priority,
        }
    }

    /// Same graph and owners with every priority passed through `map`.
    pub(crate) fn with_priorities(&self, map: impl Fn(Priority) -> Priority) -> Self {
        let priority = self.priority.iter().map(|&p| map(p)).collect();
        Self::assemble(
            self.owner.clone(),
            priority,
            self.successors.clone(),
            self.names.clone(),
        )
    }

    /// Number of nodes `n`.
    pub fn node_count(&self) -> usize {
        self.owner.len()
    }

    /// Number of edges `e`, the total length of all successor lists.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// The index bound `d = max priority + 1` used by the fixpoint solver.
    pub fn d(&self) -> usize {
        self.max_priority + 1
    }

    pub fn max_priority(&self) -> Priority {
        self.max_priority
    }

    /// Smallest priority occurring in the game.
    pub fn min_priority(&self) -> Priority {
        self.priority.iter().copied().min().unwrap_or(0)
    }

    /// Number of distinct priorities that actually occur.
    pub fn distinct_priorities(&self) -> usize {
        self.by_priority.iter().filter(|s| !s.is_empty()).count()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + Clone {
        (0..self.node_count()).map(NodeId::new)
    }

    #[inline]
    pub fn owner(&self, v: NodeId) -> Player {
        self.owner[v.index()]
    }

    #[inline]
    pub fn priority(&self, v: NodeId) -> Priority {
        self.priority[v.index()]
    }

    #[inline]
    pub fn successors(&self, v: NodeId) -> &[NodeId] {
        &self.successors[v.index()]
    }

    #[inline]
    pub fn predecessors(&self, v: NodeId) -> &[NodeId] {
        &self.predecessors[v.index()]
    }

    pub fn has_edge(&self, v: NodeId, t: NodeId) -> bool {
        self.successors(v).contains(&t)
    }

    pub fn name(&self, v: NodeId) -> Option<&str> {
        self.names[v.index()].as_deref()
    }

    /// Nodes owned by `player`.
    pub fn owned_by(&self, player: Player) -> &NodeSet {
        match player {
            Player::Even => &self.even_nodes,
            Player::Odd => &self.odd_nodes,
        }
    }

    /// `Ω⁻¹(p)`; empty for priorities above the maximum.
    pub fn with_priority(&self, p: Priority) -> NodeSet {
        self.by_priority
            .get(p)
            .cloned()
            .unwrap_or_else(|| NodeSet::empty(self.node_count()))
    }

    pub(crate) fn priority_class(&self, p: Priority) -> &NodeSet {
        &self.by_priority[p]
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.node_count())
    }

    /// Back to the builder representation; `ParityGame::build(g.to_specs()) == g`.
    pub fn to_specs(&self) -> Vec<NodeSpec> {
        self.nodes()
            .map(|v| NodeSpec {
                priority: self.priority(v) as i64,
                owner: self.owner(v),
                successors: self.successors(v).iter().map(|t| t.index()).collect(),
                name: self.names[v.index()].clone(),
            })
            .collect()
    }
}

impl fmt::Debug for ParityGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "ParityGame {{ n: {}, e: {}, d: {} }}",
            self.node_count(),
            self.edge_count(),
            self.d()
        )?;
        for v in self.nodes() {
            writeln!(
                f,
                "  {v}: prio {} {} -> {:?}",
                self.priority(v),
                self.owner(v),
                self.successors(v)
            )?;
        }
        Ok(())
    }
}

/// Builds a game from `(priority, owner, successors, name)` tuples.
pub fn build_game<I>(nodes: I) -> Result<ParityGame>
where
    I: IntoIterator<Item = NodeSpec>,
{
    ParityGame::build(nodes.into_iter().collect())
}
