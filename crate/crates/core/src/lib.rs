//! Parity game solving by fixpoint iteration, with strategy extraction from
//! the iteration trace, a pay-off game for cross-checking intermediate
//! values, oracle solvers and benchmark game generators.

pub mod error;
pub mod fixpoint;
pub mod game;
pub mod generators;
pub mod oracle;
pub mod strategy;

pub use error::{Error, Result};
pub use fixpoint::{
    eval_box, eval_diamond, eval_psi, later_than, solve, solve_with_snapshots, Snapshot, SolverConfig, Timestamp,
};
pub use game::{
    build_game, compress_priorities, parse_pgsolver, parse_solution, write_pgsolver, write_solution, NodeId, NodeSet,
    NodeSpec, ParityGame, ParsedSolution, Player, Priority, SolveResult, SolveStats, Strategy,
};
