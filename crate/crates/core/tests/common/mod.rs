#![allow(dead_code)]

use fpiter::generators::random_game;
use fpiter::{build_game, NodeSpec, ParityGame, Player};

pub const E1: &str = "parity 4;\n0 0 0 1,2;\n1 1 1 4;\n2 2 1 3;\n3 3 1 0;\n4 4 1 0;\n";

pub fn e1() -> ParityGame {
    fpiter::parse_pgsolver(E1).unwrap()
}

/// One node of an enumerated game: priority, owner, successor bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Cell {
    priority: u8,
    owner: u8,
    succ: u8,
}

fn options(n: usize, max_priority: u8, max_degree: u32) -> Vec<Cell> {
    let mut out = Vec::new();
    for priority in 0..=max_priority {
        for owner in 0..2 {
            for succ in 1u8..(1 << n) {
                if succ.count_ones() <= max_degree {
                    out.push(Cell { priority, owner, succ });
                }
            }
        }
    }
    out
}

fn permute(cells: &[Cell], perm: &[usize]) -> Vec<Cell> {
    // node i becomes perm[i]
    let mut out = cells.to_vec();
    for (i, c) in cells.iter().enumerate() {
        let mut succ = 0u8;
        for (j, &p) in perm.iter().enumerate() {
            if c.succ & (1 << j) != 0 {
                succ |= 1 << p;
            }
        }
        out[perm[i]] = Cell { succ, ..*c };
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..n {
            if !prefix.contains(&k) {
                prefix.push(k);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

fn label(c: &Cell) -> (u8, u8, u32) {
    (c.priority, c.owner, c.succ.count_ones())
}

fn to_game(cells: &[Cell]) -> ParityGame {
    let n = cells.len();
    build_game(cells.iter().map(|c| {
        let owner = if c.owner == 0 { Player::Even } else { Player::Odd };
        NodeSpec::new(c.priority as i64, owner, (0..n).filter(|j| c.succ & (1 << j) != 0).collect::<Vec<_>>())
    }))
    .unwrap()
}

/// Every game with `1..=max_n` nodes, priorities in `0..=max_priority` and
/// out-degree between 1 and `max_degree`, one representative per
/// isomorphism class (renumbering nodes).
pub fn exhaustive(max_n: usize, max_priority: u8, max_degree: u32) -> Vec<ParityGame> {
    let mut games = Vec::new();
    for n in 1..=max_n {
        let opts = options(n, max_priority, max_degree);
        let perms = permutations(n);
        let mut idx = vec![0usize; n];
        'outer: loop {
            let cells: Vec<Cell> = idx.iter().map(|&i| opts[i]).collect();
            if cells.windows(2).all(|w| label(&w[0]) <= label(&w[1])) {
                let canonical = perms
                    .iter()
                    .filter(|p| p.iter().enumerate().all(|(i, &j)| label(&cells[i]) == label(&cells[j])))
                    .all(|p| permute(&cells, p) >= cells);
                if canonical {
                    games.push(to_game(&cells));
                }
            }
            for k in (0..n).rev() {
                idx[k] += 1;
                if idx[k] < opts.len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
    }
    games
}

/// `count` seeded random games with `1..=max_n` nodes and `1..=max_d`
/// priorities.
pub fn random_corpus(count: u64, max_n: usize, max_d: usize, salt: u64) -> Vec<ParityGame> {
    (0..count)
        .map(|i| {
            let seed = salt.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ i;
            let n = 1 + (i as usize % max_n);
            let d = 1 + (i as usize / max_n % max_d);
            let max_deg = 1 + (i as usize / (max_n * max_d) % 3).min(n - 1);
            random_game(n, d, 1, max_deg, seed).unwrap()
        })
        .collect()
}
