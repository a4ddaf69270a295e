//! Solving parity games by nested fixpoint iteration of the Walukiewicz
//! formula.
//!
//! Level `i` of the iteration owns a variable `X_i`: a greatest fixpoint for
//! even `i`, a least one for odd `i`. Each round evaluates Ψ over the current
//! bank into `X_0` and then climbs: while the value of level `i` is unchanged
//! since its previous round, the value moves up into `X_{i+1}`, the counter of
//! level `i+1` advances and the levels below are re-initialised. The counter
//! array grows strictly lexicographically, so a run performs at most
//! `(n+1)^d` evaluations and `O(e · n^d)` work.

mod modal;
mod timestamp;

use std::mem;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::game::{NodeSet, ParityGame, SolveResult, SolveStats};

pub use modal::{eval_box, eval_diamond, eval_psi, CachedModal, ModalEvaluator, PlainModal};
pub use timestamp::{later_than, Timestamp};

pub const DEFAULT_SNAPSHOT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Store only `X ∩ Ω⁻¹(i)` in `X_i`; Ψ lives in a separate working set.
    pub restrict_to_priority: bool,
    /// Reuse the modal parts of levels that did not change.
    pub cache_modal_parts: bool,
    /// After climbing to level `i`, re-initialise only `X_{i-1}, X_{i-3}, …`.
    pub eliminate_resets: bool,
    pub log_snapshots: bool,
    /// Run every level until its counter reaches `n`, even once stable.
    /// Implies `log_snapshots`.
    pub full_iteration_mode: bool,
    /// Maximal number of logged snapshots.
    pub snapshot_budget: u64,
    /// Maximal number of evaluations of Ψ; unlimited if `None`.
    pub evaluation_budget: Option<u64>,
    /// Wall-clock limit, checked every 1024 evaluations.
    pub time_limit: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::baseline()
    }
}

impl SolverConfig {
    pub fn baseline() -> Self {
        Self {
            restrict_to_priority: false,
            cache_modal_parts: false,
            eliminate_resets: false,
            log_snapshots: false,
            full_iteration_mode: false,
            snapshot_budget: DEFAULT_SNAPSHOT_BUDGET,
            evaluation_budget: None,
            time_limit: None,
        }
    }

    /// All three optimisations switched on.
    pub fn optimized() -> Self {
        Self {
            restrict_to_priority: true,
            cache_modal_parts: true,
            eliminate_resets: true,
            ..Self::baseline()
        }
    }

    pub fn full_iteration() -> Self {
        Self {
            log_snapshots: true,
            full_iteration_mode: true,
            ..Self::baseline()
        }
    }

    pub fn with_snapshots(mut self) -> Self {
        self.log_snapshots = true;
        self
    }

    /// Short tag naming the enabled options, e.g. `fpiter+restrict+cache`.
    pub fn variant_name(&self) -> String {
        let mut name = String::from("fpiter");
        for (on, tag) in [
            (self.restrict_to_priority, "+restrict"),
            (self.cache_modal_parts, "+cache"),
            (self.eliminate_resets, "+noreset"),
            (self.full_iteration_mode, "+full"),
        ] {
            if on {
                name.push_str(tag);
            }
        }
        name
    }

    fn validated(&self) -> Result<SolverConfig> {
        let mut cfg = self.clone();
        if cfg.full_iteration_mode {
            if cfg.restrict_to_priority || cfg.eliminate_resets {
                return Err(Error::InvalidConfig(
                    "full iteration mode runs the unoptimised schedule; \
                     disable restrict_to_priority and eliminate_resets"
                        .into(),
                ));
            }
            cfg.log_snapshots = true;
        }
        Ok(cfg)
    }
}

/// The variable bank as it stood right after an evaluation of Ψ, keyed by
/// the counter value at that moment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub stamp: Timestamp,
    pub bank: Vec<NodeSet>,
}

/// Mutable state of one fixpoint run.
#[derive(Clone, Debug)]
pub struct IterationState {
    /// `X_0 … X_{d-1}`.
    pub x: Vec<NodeSet>,
    /// `X'_0 … X'_{d-1}`; `None` until first assigned.
    pub x_shadow: Vec<Option<NodeSet>>,
    pub count: Timestamp,
    /// Last value of Ψ; differs from `X_0` only when restricting to priorities.
    pub working: NodeSet,
    pub snapshots: Vec<Snapshot>,
    high_water: Vec<u32>,
}

impl IterationState {
    /// State after `Init(d-1), …, Init(0)`.
    pub fn new(game: &ParityGame, config: &SolverConfig) -> Self {
        let d = game.d();
        let n = game.node_count();
        let mut state = Self {
            x: vec![NodeSet::empty(n); d],
            x_shadow: vec![None; d],
            count: Timestamp::zero(d),
            working: NodeSet::empty(n),
            snapshots: Vec::new(),
            high_water: vec![0; d],
        };
        for level in (0..d).rev() {
            state.init(game, config, level);
        }
        state
    }

    /// `X_i ← V` for even `i`, `∅` for odd `i` (intersected with `Ω⁻¹(i)` when
    /// restricting), and `count[i] ← 0`.
    pub fn init(&mut self, game: &ParityGame, config: &SolverConfig, level: usize) {
        let x = &mut self.x[level];
        if level.is_multiple_of(2) {
            if config.restrict_to_priority {
                x.assign(game.priority_class(level));
            } else {
                x.fill();
            }
        } else {
            x.clear();
        }
        self.count.set(level, 0);
    }

    fn stable(&self, level: usize, n: usize, config: &SolverConfig) -> bool {
        if config.full_iteration_mode {
            self.count.get(level) as usize >= n
        } else {
            let previous = self.x_shadow[level]
                .as_ref()
                .expect("shadow variable read before it was assigned");
            self.x[level] == *previous
        }
    }

    fn bump(&mut self, level: usize) {
        self.count.increment(level);
        self.high_water[level] = self.high_water[level].max(self.count.get(level));
    }

    /// Stores a fresh Ψ value into `X_0`, saving the old one in `X'_0`.
    fn store_evaluation(&mut self, game: &ParityGame, config: &SolverConfig, value: NodeSet) {
        let x0 = if config.restrict_to_priority {
            value.intersection(game.priority_class(0))
        } else {
            value.clone()
        };
        self.working = value;
        self.x_shadow[0] = Some(mem::replace(&mut self.x[0], x0));
    }

    /// Moves stabilised values upward after `X_0` has been recomputed and
    /// re-initialises the levels below the one reached, which is returned.
    pub fn shift_and_reset(&mut self, game: &ParityGame, config: &SolverConfig) -> usize {
        let d = game.d();
        let n = game.node_count();
        let mut level = 0;
        while level < d - 1 && self.stable(level, n, config) {
            level += 1;
            self.bump(level);
            let next = if config.restrict_to_priority {
                self.working.intersection(game.priority_class(level))
            } else {
                self.x[level - 1].clone()
            };
            self.x_shadow[level] = Some(mem::replace(&mut self.x[level], next));
            if !config.eliminate_resets {
                self.init(game, config, level - 1);
            }
        }
        if config.eliminate_resets && level > 0 {
            for below in 0..level {
                self.count.set(below, 0);
            }
            for below in (0..level).rev().step_by(2) {
                self.init(game, config, below);
            }
        }
        level
    }

    pub fn per_level_high_water(&self) -> &[u32] {
        &self.high_water
    }
}

/// What a fixpoint run produced.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub w_even: NodeSet,
    pub stats: SolveStats,
    pub snapshots: Vec<Snapshot>,
}

impl RunOutput {
    pub fn into_result(self) -> SolveResult {
        SolveResult::regions_only(self.w_even, self.stats)
    }
}

fn iteration_bound(n: usize, d: usize) -> u128 {
    (n as u128 + 1).saturating_pow(d as u32)
}

/// Runs the iteration with a caller-supplied evaluator for Ψ.
pub fn run_with(game: &ParityGame, config: &SolverConfig, modal: &mut dyn ModalEvaluator) -> Result<RunOutput> {
    let config = config.validated()?;
    let started = Instant::now();
    let d = game.d();
    let n = game.node_count();
    let bound = iteration_bound(n, d);
    let mut state = IterationState::new(game, &config);
    let mut previous: Option<Timestamp> = None;
    let mut evaluations: u64 = 0;
    let mut changed_upto = d - 1;

    loop {
        state.bump(0);
        if let Some(prev) = &previous {
            assert!(
                state.count > *prev,
                "iteration counter must grow lexicographically: {} after {}",
                state.count,
                prev
            );
        }
        previous = Some(state.count.clone());
        if let Some(limit) = config.evaluation_budget {
            if evaluations >= limit {
                return Err(Error::ResourceLimit {
                    what: "evaluations",
                    limit,
                });
            }
        }
        if let Some(limit) = config.time_limit {
            if evaluations.is_multiple_of(1024) && started.elapsed() > limit {
                return Err(Error::ResourceLimit {
                    what: "wall time (ms)",
                    limit: limit.as_millis() as u64,
                });
            }
        }
        evaluations += 1;
        assert!(
            evaluations as u128 <= bound,
            "more than (n+1)^d = {bound} evaluations"
        );

        let value = modal.evaluate(&state.x, &state.count, changed_upto)?;
        state.store_evaluation(game, &config, value);

        if config.log_snapshots {
            if state.snapshots.len() as u64 >= config.snapshot_budget {
                return Err(Error::ResourceLimit {
                    what: "snapshot log",
                    limit: config.snapshot_budget,
                });
            }
            state.snapshots.push(Snapshot {
                stamp: state.count.clone(),
                bank: state.x.clone(),
            });
        }

        let level = state.shift_and_reset(game, &config);
        if level == d - 1 && state.stable(d - 1, n, &config) {
            break;
        }
        changed_upto = level;
    }

    let stats = SolveStats {
        outer_iterations: evaluations,
        per_level_iterations: state.per_level_high_water().to_vec(),
        wall_time: started.elapsed(),
        solver_variant: config.variant_name(),
    };
    Ok(RunOutput {
        w_even: state.working,
        stats,
        snapshots: state.snapshots,
    })
}

fn evaluator<'g>(game: &'g ParityGame, config: &SolverConfig) -> Box<dyn ModalEvaluator + 'g> {
    if config.cache_modal_parts {
        Box::new(CachedModal::new(game))
    } else {
        Box::new(PlainModal::new(game))
    }
}

/// Computes the winning regions. Strategies in the result are empty; see
/// [`crate::strategy::solve_with_strategies`] for those.
pub fn solve(game: &ParityGame, config: &SolverConfig) -> Result<SolveResult> {
    let mut modal = evaluator(game, config);
    Ok(run_with(game, config, modal.as_mut())?.into_result())
}

/// Like [`solve`], additionally returning one snapshot per evaluation of Ψ.
pub fn solve_with_snapshots(game: &ParityGame, config: &SolverConfig) -> Result<(SolveResult, Vec<Snapshot>)> {
    let config = config.clone().with_snapshots();
    let mut modal = evaluator(game, &config);
    let mut out = run_with(game, &config, modal.as_mut())?;
    let snapshots = mem::take(&mut out.snapshots);
    Ok((out.into_result(), snapshots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::e1;
    use crate::game::{build_game, NodeId, NodeSpec, Player::*};

    fn set(n: usize, ids: &[usize]) -> NodeSet {
        NodeSet::from_nodes(n, ids.iter().copied().map(NodeId::new))
    }

    fn ts(c: &[u32]) -> Timestamp {
        Timestamp::from_high(c)
    }

    #[test]
    fn e1_even_wins_everywhere() {
        let r = solve(&e1(), &SolverConfig::baseline()).unwrap();
        assert_eq!(r.w_even, NodeSet::full(5));
        assert!(r.w_odd.is_empty());
        assert!(r.stats.outer_iterations >= 1);
    }

    #[test]
    fn tiny_games() {
        let g = build_game([NodeSpec::new(0, Even, [0])]).unwrap();
        assert_eq!(solve(&g, &SolverConfig::baseline()).unwrap().w_even, set(1, &[0]));

        let g = build_game([NodeSpec::new(1, Even, [0])]).unwrap();
        assert!(solve(&g, &SolverConfig::baseline()).unwrap().w_even.is_empty());

        for (a, b) in [(Even, Even), (Even, Odd), (Odd, Even), (Odd, Odd)] {
            let g = build_game([NodeSpec::new(0, a, [1]), NodeSpec::new(1, b, [0])]).unwrap();
            let r = solve(&g, &SolverConfig::baseline()).unwrap();
            assert_eq!(r.w_odd, set(2, &[0, 1]));
        }
    }

    #[test]
    fn e1_snapshot_trace() {
        let (_, snaps) = solve_with_snapshots(&e1(), &SolverConfig::baseline()).unwrap();
        assert_eq!(snaps[0].stamp, ts(&[0, 0, 0, 0, 1]));
        assert_eq!(snaps[0].bank[0], set(5, &[0, 1, 3, 4]));
        // The first stabilisation of X_0 moves {0,1,3,4} into X_1.
        assert_eq!(snaps[1].stamp, ts(&[0, 0, 0, 0, 2]));
        assert_eq!(snaps[2].stamp, ts(&[0, 0, 0, 1, 1]));
        assert_eq!(snaps[2].bank[1], set(5, &[0, 1, 3, 4]));
        let at = snaps.iter().find(|s| s.stamp == ts(&[0, 0, 1, 1, 1])).unwrap();
        assert_eq!(at.bank[0], set(5, &[0, 1, 3, 4]));
        assert_eq!(at.bank[1], set(5, &[1]));
        let last = snaps.last().unwrap();
        assert_eq!(last.bank[0], NodeSet::full(5));
        assert!(snaps.iter().any(|s| s.stamp == ts(&[0, 1, 0, 0, 1])));
    }

    #[test]
    fn single_level_snapshot_keys_count_up() {
        let g = build_game([NodeSpec::new(0, Odd, [1]), NodeSpec::new(0, Even, [0, 1])]).unwrap();
        let (_, snaps) = solve_with_snapshots(&g, &SolverConfig::baseline()).unwrap();
        for (k, s) in snaps.iter().enumerate() {
            assert_eq!(s.stamp, ts(&[k as u32 + 1]));
        }
        let (_, snaps) = solve_with_snapshots(&g, &SolverConfig::full_iteration()).unwrap();
        assert_eq!(snaps.iter().map(|s| s.stamp.clone()).collect::<Vec<_>>(), vec![ts(&[1]), ts(&[2])]);
    }

    #[test]
    fn d1_never_climbs() {
        let g = build_game([NodeSpec::new(0, Even, [0])]).unwrap();
        let cfg = SolverConfig::baseline();
        let mut state = IterationState::new(&g, &cfg);
        state.bump(0);
        state.store_evaluation(&g, &cfg, NodeSet::full(1));
        assert_eq!(state.shift_and_reset(&g, &cfg), 0);
    }

    #[test]
    fn eliminate_resets_keeps_same_parity_levels() {
        // Three levels; force a climb to level 2 and watch X_0.
        let g = build_game([
            NodeSpec::new(0, Even, [1]),
            NodeSpec::new(1, Odd, [2]),
            NodeSpec::new(2, Odd, [0]),
        ])
        .unwrap();
        let cfg = SolverConfig {
            eliminate_resets: true,
            ..SolverConfig::baseline()
        };
        let mut state = IterationState::new(&g, &cfg);
        let value = set(3, &[0, 2]);
        state.x = vec![value.clone(), value.clone(), NodeSet::full(3)];
        state.x_shadow = vec![None, Some(value.clone()), Some(NodeSet::full(3))];
        state.bump(0);
        state.store_evaluation(&g, &cfg, value.clone());
        assert_eq!(state.shift_and_reset(&g, &cfg), 2);
        assert_eq!(state.x[2], value);
        assert!(state.x[1].is_empty(), "X_1 is reset");
        assert_eq!(state.x[0], value, "X_0 keeps its value");
        assert_eq!(state.count, ts(&[1, 0, 0]));
    }

    #[test]
    fn full_mode_rejects_schedule_changing_options() {
        let cfg = SolverConfig {
            eliminate_resets: true,
            ..SolverConfig::full_iteration()
        };
        assert!(matches!(solve(&e1(), &cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn snapshot_budget_is_enforced() {
        let cfg = SolverConfig {
            snapshot_budget: 3,
            ..SolverConfig::baseline()
        };
        assert!(matches!(
            solve_with_snapshots(&e1(), &cfg),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn variants_agree_on_e1() {
        let base = solve(&e1(), &SolverConfig::baseline()).unwrap();
        for cfg in [
            SolverConfig { restrict_to_priority: true, ..SolverConfig::baseline() },
            SolverConfig { cache_modal_parts: true, ..SolverConfig::baseline() },
            SolverConfig { eliminate_resets: true, ..SolverConfig::baseline() },
            SolverConfig::optimized(),
        ] {
            let r = solve(&e1(), &cfg).unwrap();
            assert_eq!(r.w_even, base.w_even, "{}", cfg.variant_name());
            assert!(r.stats.outer_iterations <= base.stats.outer_iterations);
        }
    }
}
