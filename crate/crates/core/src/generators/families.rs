use crate::game::{build_game, NodeSpec, ParityGame, Player};

/// Jurdziński-style game with `n` odd levels of width `width`.
///
/// Rows `0..=n` of `2·width` nodes alternate priority 0 (owned by Odd) and
/// priority `2k+2` (owned by Even) along a path walkable in both directions.
/// Odd row `j` holds `width` Odd nodes of priority `2j+1`; its `t`-th node is
/// linked both ways with position `2t+1` of rows `j` and `j+1`. The first
/// node carries a self-loop.
///
/// Sizes: `3·width·n + 2·width` nodes, `(8·width−2)·n + 4·width−1` edges and
/// priorities `0..=2n+2`.
pub fn jurdzinski(n: usize, width: usize) -> ParityGame {
    let row = 2 * width;
    let even_node = |k: usize, p: usize| k * row + p;
    let odd_base = (n + 1) * row;
    let odd_node = |j: usize, t: usize| odd_base + j * width + t;

    let mut nodes = Vec::with_capacity(odd_base + n * width);
    for k in 0..=n {
        for p in 0..row {
            let mut succ = Vec::new();
            if p > 0 {
                succ.push(even_node(k, p - 1));
            }
            if p + 1 < row {
                succ.push(even_node(k, p + 1));
            }
            if p % 2 == 1 {
                let t = p / 2;
                if k > 0 {
                    succ.push(odd_node(k - 1, t));
                }
                if k < n {
                    succ.push(odd_node(k, t));
                }
            }
            if k == 0 && p == 0 {
                succ.push(even_node(0, 0));
            }
            let (priority, owner) = if p % 2 == 0 {
                (0, Player::Odd)
            } else {
                (2 * k as i64 + 2, Player::Even)
            };
            nodes.push(NodeSpec::new(priority, owner, succ));
        }
    }
    for j in 0..n {
        for t in 0..width {
            let succ = vec![even_node(j, 2 * t + 1), even_node(j + 1, 2 * t + 1)];
            nodes.push(NodeSpec::new(2 * j as i64 + 1, Player::Odd, succ));
        }
    }
    let mut specs = nodes;
    for s in &mut specs {
        s.successors.sort_unstable();
    }
    build_game(specs).expect("jurdzinski construction is well formed")
}

/// Ladder of `n` rungs with five nodes each.
///
/// Rung `i` starts at node `5i` and uses priorities `3i + {0, 1, 2, 4, 5}`:
///
/// ```text
/// 5i+0  Even  3i      -> 5i+1, 5i+2, up
/// 5i+1  Odd   3i+1    -> 5i+0, 5i+4, up
/// 5i+2  Even  3i+2    -> 5i+3, 5i+4
/// 5i+3  Odd   3i+4    -> 5i+1, up
/// 5i+4  Odd   3i+5    -> 5i+2
/// ```
///
/// where `up` is the same position on rung `i+1`; the top rung has no such
/// edges. Sizes: `5n` nodes, `11n − 3` edges, priorities `0..=3n+2`.
pub fn ladder(n: usize) -> ParityGame {
    let mut specs = Vec::with_capacity(5 * n);
    for i in 0..n {
        let b = 5 * i;
        let p = 3 * i as i64;
        let up = |v: usize| (i + 1 < n).then_some(v + 5);
        let rung = [
            (0, Player::Even, vec![b + 1, b + 2], up(b)),
            (1, Player::Odd, vec![b, b + 4], up(b + 1)),
            (2, Player::Even, vec![b + 3, b + 4], None),
            (4, Player::Odd, vec![b + 1], up(b + 3)),
            (5, Player::Odd, vec![b + 2], None),
        ];
        for (offset, owner, mut succ, next) in rung {
            succ.extend(next);
            specs.push(NodeSpec::new(p + offset, owner, succ));
        }
    }
    build_game(specs).expect("ladder construction is well formed")
}
