//! Independent solvers and checkers used to cross-examine the fixpoint
//! solver.

mod brute;
mod cycles;
mod payoff;
mod reference;
mod verify;

pub use brute::{brute_solve, brute_solve_with_budget, DEFAULT_BRUTE_BUDGET};
pub use payoff::{
    payoff_winner, snapshot_value, snapshot_value_with_budget, step_credit, PayoffConfig, PayoffOutcome, PayoffTable,
    DEFAULT_PAYOFF_BUDGET,
};
pub use reference::{attractor, reference_solve};
pub use verify::{verify_positional, Verdict, Violation};
