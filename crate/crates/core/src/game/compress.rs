use std::collections::BTreeMap;

use super::{ParityGame, Priority};

/// Renumbers priorities onto a minimal initial segment.
///
/// Distinct priorities are visited in ascending order; neighbouring classes of
/// the same parity merge, and each parity switch opens the next value. The
/// smallest priority maps to 0 if even and to 1 if odd, so every node keeps
/// its parity and `d` never grows. Returns the new game and the old → new map.
pub fn compress_priorities(game: &ParityGame) -> (ParityGame, BTreeMap<Priority, Priority>) {
    let mut mapping = BTreeMap::new();
    let mut current: Option<(Priority, Priority)> = None;
    for p in 0..=game.max_priority() {
        if game.priority_class(p).is_empty() {
            continue;
        }
        let next = match current {
            None => p % 2,
            Some((old, new)) if old % 2 == p % 2 => new,
            Some((_, new)) => new + 1,
        };
        mapping.insert(p, next);
        current = Some((p, next));
    }
    let compressed = game.with_priorities(|p| mapping[&p]);
    (compressed, mapping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_game, NodeSpec, Player::*};

    fn cycle_with(priorities: &[i64]) -> ParityGame {
        let n = priorities.len();
        build_game(
            priorities
                .iter()
                .enumerate()
                .map(|(v, &p)| NodeSpec::new(p, if v % 2 == 0 { Even } else { Odd }, [(v + 1) % n])),
        )
        .unwrap()
    }

    #[test]
    fn merges_same_parity_neighbours() {
        let (g, map) = compress_priorities(&cycle_with(&[2, 5, 7]));
        assert_eq!(map, BTreeMap::from([(2, 0), (5, 1), (7, 1)]));
        assert_eq!(g.d(), 2);
    }

    #[test]
    fn compact_priorities_are_untouched() {
        let original = cycle_with(&[0, 1, 2]);
        let (g, map) = compress_priorities(&original);
        assert_eq!(map, BTreeMap::from([(0, 0), (1, 1), (2, 2)]));
        assert_eq!(g, original);
    }

    #[test]
    fn single_odd_class_stays_odd() {
        let (g, map) = compress_priorities(&cycle_with(&[1, 3]));
        assert_eq!(map, BTreeMap::from([(1, 1), (3, 1)]));
        assert_eq!(g.d(), 2);
        assert_eq!(g.min_priority(), 1);
    }
}
