use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use super::NodeId;

/// A set of nodes over a fixed universe `0..n`, stored as a dense bit set.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NodeSet {
    bits: FixedBitSet,
}

impl NodeSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Self { bits }
    }

    pub fn from_nodes(universe: usize, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut set = Self::empty(universe);
        for v in nodes {
            set.insert(v);
        }
        set
    }

    /// Size of the universe, i.e. the node count of the owning game.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        self.bits.contains(v.index())
    }

    #[inline]
    pub fn insert(&mut self, v: NodeId) {
        self.bits.insert(v.index());
    }

    #[inline]
    pub fn remove(&mut self, v: NodeId) {
        self.bits.set(v.index(), false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.bits.ones().map(NodeId::from)
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.universe(), other.universe());
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.universe(), other.universe());
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.universe(), other.universe());
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn complement(&self) -> NodeSet {
        let mut out = self.clone();
        out.bits.toggle_range(..);
        out
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// Replaces the contents with those of `other` without reallocating.
    pub fn assign(&mut self, other: &NodeSet) {
        self.bits.clone_from(&other.bits);
    }

    pub fn clear(&mut self) {
        self.bits.clear();
    }

    pub fn fill(&mut self) {
        self.bits.insert_range(..);
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.index())).finish()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|v| v.index()))
    }
}
