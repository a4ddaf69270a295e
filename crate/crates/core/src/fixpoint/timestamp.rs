use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::game::{Player, Priority};

/// A `d`-tuple of counters `(c_{d-1}, …, c_0)`.
///
/// Doubles as the iteration counter of the fixpoint solver and as the credit
/// of the pay-off game. Entry `i` is the counter of level `i`; ordering is
/// lexicographic with `c_{d-1}` most significant, and `Display`/serde print
/// the tuple from the highest level down.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Timestamp {
    levels: Vec<u32>,
}

impl Timestamp {
    pub fn zero(d: usize) -> Self {
        Self { levels: vec![0; d] }
    }

    pub fn uniform(d: usize, value: u32) -> Self {
        Self {
            levels: vec![value; d],
        }
    }

    /// Builds a timestamp from counters written highest level first, the way
    /// they are printed: `from_high(&[0, 0, 0, 0, 1])` has `c_0 = 1`.
    pub fn from_high(counters: &[u32]) -> Self {
        Self {
            levels: counters.iter().rev().copied().collect(),
        }
    }

    /// Counters listed from the highest level down.
    pub fn to_high(&self) -> Vec<u32> {
        self.levels.iter().rev().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// The counter `c_level`.
    #[inline]
    pub fn get(&self, level: Priority) -> u32 {
        self.levels[level]
    }

    #[inline]
    pub fn set(&mut self, level: Priority, value: u32) {
        self.levels[level] = value;
    }

    #[inline]
    pub fn increment(&mut self, level: Priority) {
        self.levels[level] += 1;
    }

    /// Counters indexed by level, `c_0` first.
    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    /// The `>_P` order: `self >_P other` iff at the highest level `j` of the
    /// opponent's parity where the two differ, `self` has the larger counter.
    /// Even looks only at odd levels, Odd only at even levels.
    pub fn later_than(&self, other: &Timestamp, player: Player) -> Result<bool> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let parity = player.opponent().parity();
        for j in (0..self.len()).rev().filter(|j| j % 2 == parity) {
            match self.levels[j].cmp(&other.levels[j]) {
                Ordering::Greater => return Ok(true),
                Ordering::Less => return Ok(false),
                Ordering::Equal => {}
            }
        }
        Ok(false)
    }
}

/// Free-function form of [`Timestamp::later_than`].
pub fn later_than(a: &Timestamp, b: &Timestamp, player: Player) -> Result<bool> {
    a.later_than(b, player)
}

impl Ord for Timestamp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.levels.iter().rev().cmp(other.levels.iter().rev()))
    }
}

impl PartialOrd for Timestamp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.levels.iter().rev().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.levels.iter().rev())
    }
}
