use std::collections::HashMap;

use crate::fixpoint::Timestamp;
use crate::game::Player;

/// Remembers, for every level and every value of the counters above it, the
/// last count that level reached. The counter only grows, so a round of
/// level `j` was the closing one of its context iff its count is the stored
/// one: in that round `X_j` already held its fixpoint.
#[derive(Clone, Debug, Default)]
pub struct RoundLog {
    last: HashMap<(usize, Vec<u32>), u32>,
}

impl RoundLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, stamp: &Timestamp) {
        let high = stamp.to_high();
        let d = high.len();
        for level in 0..d {
            self.last.insert((level, high[..d - 1 - level].to_vec()), stamp.get(level));
        }
    }

    pub fn is_final(&self, stamp: &Timestamp, level: usize) -> bool {
        let high = stamp.to_high();
        let prefix = high[..high.len() - 1 - level].to_vec();
        self.last.get(&(level, prefix)) == Some(&stamp.get(level))
    }

    /// True iff every level of `player`'s own parity is in its closing
    /// round at `stamp`.
    pub fn settled_for(&self, stamp: &Timestamp, player: Player) -> bool {
        (0..stamp.len())
            .filter(|j| j % 2 == player.parity())
            .all(|j| self.is_final(stamp, j))
    }
}
