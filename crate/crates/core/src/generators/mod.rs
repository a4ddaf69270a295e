//! Deterministic game families.

mod families;
mod rng;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::game::{build_game, NodeSpec, ParityGame, Player};

pub use families::{jurdzinski, ladder};
pub use rng::SplitMix64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    Ladder(usize),
    Jurdzinski(usize, usize),
    Random {
        n: usize,
        d: usize,
        min_deg: usize,
        max_deg: usize,
        seed: u64,
    },
}

impl GeneratorSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GeneratorSpec::Ladder(_) => "ladder",
            GeneratorSpec::Jurdzinski(..) => "jurdzinski",
            GeneratorSpec::Random { .. } => "random",
        }
    }

    pub fn params(&self) -> Vec<u64> {
        match *self {
            GeneratorSpec::Ladder(n) => vec![n as u64],
            GeneratorSpec::Jurdzinski(n, w) => vec![n as u64, w as u64],
            GeneratorSpec::Random {
                n,
                d,
                min_deg,
                max_deg,
                seed,
            } => vec![n as u64, d as u64, min_deg as u64, max_deg as u64, seed],
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match *self {
            GeneratorSpec::Ladder(0) => bad("ladder size must be at least 1".into()),
            GeneratorSpec::Jurdzinski(n, w) if n == 0 || w == 0 => {
                bad("jurdzinski parameters must be at least 1".into())
            }
            GeneratorSpec::Random {
                n,
                d,
                min_deg,
                max_deg,
                ..
            } => {
                if n == 0 || d == 0 {
                    bad("random games need n >= 1 and d >= 1".into())
                } else if min_deg == 0 || min_deg > max_deg || max_deg > n {
                    bad(format!("degree bounds must satisfy 1 <= {min_deg} <= {max_deg} <= {n}"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family())?;
        for p in self.params() {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    /// `ladder N`, `jurdzinski N W` or `random N D MIN MAX SEED`.
    fn from_str(s: &str) -> Result<Self> {
        let mut words = s.split_whitespace();
        let family = words.next().ok_or_else(|| Error::InvalidSpec("empty spec".into()))?;
        let nums = words
            .map(|w| {
                w.parse::<u64>()
                    .map_err(|_| Error::InvalidSpec(format!("not a non-negative integer: {w:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let arity = |k: usize| {
            if nums.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!(
                    "{family} takes {k} parameter(s), got {}",
                    nums.len()
                )))
            }
        };
        let spec = match family {
            "ladder" => {
                arity(1)?;
                GeneratorSpec::Ladder(nums[0] as usize)
            }
            "jurdzinski" => {
                arity(2)?;
                GeneratorSpec::Jurdzinski(nums[0] as usize, nums[1] as usize)
            }
            "random" => {
                arity(5)?;
                GeneratorSpec::Random {
                    n: nums[0] as usize,
                    d: nums[1] as usize,
                    min_deg: nums[2] as usize,
                    max_deg: nums[3] as usize,
                    seed: nums[4],
                }
            }
            other => return Err(Error::InvalidSpec(format!("unknown family {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<ParityGame> {
    spec.validate()?;
    match *spec {
        GeneratorSpec::Ladder(n) => Ok(ladder(n)),
        GeneratorSpec::Jurdzinski(n, w) => Ok(jurdzinski(n, w)),
        GeneratorSpec::Random {
            n,
            d,
            min_deg,
            max_deg,
            seed,
        } => random_game(n, d, min_deg, max_deg, seed),
    }
}

/// A random game. Node by node: priority uniform in `0..d`, owner uniform,
/// out-degree uniform in `min_deg..=max_deg`, successors a uniform subset
/// drawn by partial Fisher-Yates and listed in ascending order.
pub fn random_game(n: usize, d: usize, min_deg: usize, max_deg: usize, seed: u64) -> Result<ParityGame> {
    GeneratorSpec::Random {
        n,
        d,
        min_deg,
        max_deg,
        seed,
    }
    .validate()?;
    let mut rng = SplitMix64::new(seed);
    let mut pool: Vec<usize> = (0..n).collect();
    let mut nodes = Vec::with_capacity(n);
    for _ in 0..n {
        let priority = rng.below(d as u64) as i64;
        let owner = if rng.below(2) == 0 { Player::Even } else { Player::Odd };
        let degree = min_deg + rng.below((max_deg - min_deg + 1) as u64) as usize;
        for k in 0..degree {
            let j = k + rng.below((n - k) as u64) as usize;
            pool.swap(k, j);
        }
        let mut successors = pool[..degree].to_vec();
        successors.sort_unstable();
        nodes.push(NodeSpec::new(priority, owner, successors));
    }
    build_game(nodes)
}
