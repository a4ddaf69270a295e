use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fpiter::generators::{generate, GeneratorSpec};
use fpiter::oracle::{brute_solve, reference_solve, verify_positional, Verdict};
use fpiter::strategy::{solve_with_strategies, trace_run};
use fpiter::{
    parse_pgsolver, parse_solution, solve, write_pgsolver, write_solution, Error, NodeId, NodeSet, ParityGame, Player,
    SolveResult, SolverConfig, Strategy,
};

/// Games up to this many nodes are also cross-checked by strategy enumeration.
const BRUTE_CHECK_NODES: usize = 12;

#[derive(Parser)]
#[command(name = "fpiter", version, about = "Parity game solving by fixpoint iteration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game in PGSolver format and print its solution.
    Solve {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverKind::Fpiter)]
        solver: SolverKind,
        /// Store only the nodes of priority i in X_i.
        #[arg(long)]
        restrict: bool,
        /// Recompute modal parts only for levels that changed.
        #[arg(long)]
        cache: bool,
        /// Re-initialise only levels of the opposite parity after a climb.
        #[arg(long)]
        no_resets: bool,
        /// Compute and print positional winning strategies.
        #[arg(long)]
        strategies: bool,
        /// Write run statistics as JSON to this file.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Verify the result against the oracles before printing it.
        #[arg(long)]
        check: bool,
        /// Stop after this many evaluations of the inner expression.
        #[arg(long)]
        max_evaluations: Option<u64>,
        /// Stop once the iteration has run for this many seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Flip the winner of node 0 before checking (exercises --check).
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a solution file against a game.
    Verify { game: PathBuf, solution: PathBuf },
    /// Generate a game, e.g. `ladder 8`, `jurdzinski 5 3`, `random 8 4 1 2 42`.
    Generate {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve every game of a spec list and report statistics as JSON.
    Bench {
        /// One generator spec per line; blank lines and `#` comments are skipped.
        specs: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverKind::Fpiter)]
        solver: SolverKind,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        #[arg(long)]
        max_evaluations: Option<u64>,
        /// Per-instance limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the recorded strategy decisions of a baseline run as JSON lines.
    Trace {
        game: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Maximal number of events.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SolverKind {
    Fpiter,
    FpiterOpt,
    Brute,
    Reference,
}

/// Failure classes with their exit codes.
#[derive(Debug)]
enum Failure {
    Parse(String),
    Verification(String),
    Resource(String),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Verification(_) => 3,
            Failure::Resource(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } => Failure::Resource(e.to_string()),
            Error::EmptyGame
            | Error::NoSuccessor { .. }
            | Error::DanglingEdge { .. }
            | Error::DuplicateEdge { .. }
            | Error::NegativePriority { .. }
            | Error::Syntax { .. }
            | Error::DuplicateNode { .. }
            | Error::MissingNode { .. }
            | Error::InvalidSpec(_) => Failure::Parse(e.to_string()),
            _ => Failure::Other(e.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve {
            game,
            solver,
            restrict,
            cache,
            no_resets,
            strategies,
            stats,
            check,
            max_evaluations,
            time_limit,
            inject_fault,
            output,
        } => {
            let config = SolverConfig {
                restrict_to_priority: restrict || solver == SolverKind::FpiterOpt,
                cache_modal_parts: cache || solver == SolverKind::FpiterOpt,
                eliminate_resets: no_resets || solver == SolverKind::FpiterOpt,
                evaluation_budget: max_evaluations,
                time_limit: time_limit.map(Duration::from_secs_f64),
                ..SolverConfig::baseline()
            };
            let opts = SolveOpts {
                solver,
                config,
                strategies,
                stats,
                check,
                inject_fault,
                output,
            };
            cmd_solve(&game, &opts)
        }
        Command::Verify { game, solution } => cmd_verify(&game, &solution),
        Command::Generate { spec, output } => cmd_generate(&spec.join(" "), output.as_deref()),
        Command::Bench {
            specs,
            solver,
            repeat,
            max_evaluations,
            time_limit,
            out,
        } => {
            let limits = Limits {
                evaluations: max_evaluations,
                time: time_limit.map(Duration::from_secs_f64),
            };
            cmd_bench(&specs, solver, repeat.max(1), limits, out.as_deref())
        }
        Command::Trace { game, out, budget } => cmd_trace(&game, out.as_deref(), budget),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Other(e) => eprintln!("error: {e:#}"),
                Failure::Parse(m) => eprintln!("parse error: {m}"),
                Failure::Verification(m) => eprintln!("verification failed: {m}"),
                Failure::Resource(m) => eprintln!("resource limit: {m}"),
            }
            ExitCode::from(failure.code())
        }
    }
}

fn read_game(path: &Path) -> Result<ParityGame, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(parse_pgsolver(&text)?)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => io::stdout().write_all(text.as_bytes()).context("cannot write to stdout")?,
    }
    Ok(())
}

struct SolveOpts {
    solver: SolverKind,
    config: SolverConfig,
    strategies: bool,
    stats: Option<PathBuf>,
    check: bool,
    inject_fault: bool,
    output: Option<PathBuf>,
}

fn run_solver(game: &ParityGame, opts: &SolveOpts) -> Result<SolveResult, Failure> {
    let result = match opts.solver {
        SolverKind::Fpiter | SolverKind::FpiterOpt if opts.strategies => {
            // Recording needs the standard counter schedule.
            let config = SolverConfig {
                eliminate_resets: false,
                ..opts.config.clone()
            };
            solve_with_strategies(game, &config)?
        }
        SolverKind::Fpiter | SolverKind::FpiterOpt => solve(game, &opts.config)?,
        SolverKind::Brute => brute_solve(game)?,
        SolverKind::Reference => reference_solve(game),
    };
    Ok(result)
}

fn cmd_solve(path: &Path, opts: &SolveOpts) -> CmdResult {
    let game = read_game(path)?;
    let mut result = run_solver(&game, opts)?;
    if !opts.strategies {
        result.strategy_even = Strategy::empty(game.node_count());
        result.strategy_odd = Strategy::empty(game.node_count());
    }
    if opts.inject_fault {
        let v = NodeId::new(0);
        let (from, to) = match result.winner(v) {
            Player::Even => (&mut result.w_even, &mut result.w_odd),
            Player::Odd => (&mut result.w_odd, &mut result.w_even),
        };
        from.remove(v);
        to.insert(v);
    }
    if opts.check {
        check_regions(&game, &result.w_even)?;
        if opts.strategies {
            for player in [Player::Even, Player::Odd] {
                check_strategy(&game, player, result.strategy(player), result.region(player))?;
            }
        }
    }
    if let Some(stats_path) = &opts.stats {
        let json = serde_json::to_string_pretty(&result.stats).context("cannot encode stats")?;
        fs::write(stats_path, json + "\n").with_context(|| format!("cannot write {}", stats_path.display()))?;
    }
    emit(opts.output.as_deref(), &write_solution(&result))
}

fn first_difference(claimed: &NodeSet, actual: &NodeSet) -> Option<NodeId> {
    let mut diff = claimed.difference(actual);
    diff.union_with(&actual.difference(claimed));
    let first = diff.iter().next();
    first
}

fn check_regions(game: &ParityGame, w_even: &NodeSet) -> CmdResult {
    let reference = reference_solve(game);
    let mut oracles = vec![("reference", reference.w_even)];
    if game.node_count() <= BRUTE_CHECK_NODES {
        if let Ok(brute) = brute_solve(game) {
            oracles.push(("brute", brute.w_even));
        }
    }
    for (name, truth) in oracles {
        if let Some(v) = first_difference(w_even, &truth) {
            let winner = if truth.contains(v) { Player::Even } else { Player::Odd };
            return Err(Failure::Verification(format!(
                "node {v}: the {name} solver says {winner} wins, the solution disagrees"
            )));
        }
    }
    Ok(())
}

fn check_strategy(game: &ParityGame, player: Player, sigma: &Strategy, region: &NodeSet) -> CmdResult {
    match verify_positional(game, player, sigma, region) {
        Verdict::Valid => Ok(()),
        Verdict::Invalid(violation) => Err(Failure::Verification(format!("{player} strategy: {violation}"))),
    }
}

fn cmd_verify(game_path: &Path, solution_path: &Path) -> CmdResult {
    let game = read_game(game_path)?;
    let text = fs::read_to_string(solution_path).with_context(|| format!("cannot read {}", solution_path.display()))?;
    let solution = parse_solution(&text)?;
    let n = game.node_count();
    if solution.winners.len() != n {
        return Err(Failure::Verification(format!(
            "solution covers {} nodes, the game has {n}",
            solution.winners.len()
        )));
    }
    let w_even = NodeSet::from_nodes(
        n,
        (0..n).filter(|&v| solution.winners[v] == Player::Even).map(NodeId::new),
    );
    check_regions(&game, &w_even)?;
    println!("regions: ok ({} won by Even, {} by Odd)", w_even.len(), n - w_even.len());

    if solution.choices.iter().all(Option::is_none) {
        println!("strategies: none supplied");
        return Ok(());
    }
    let w_odd = w_even.complement();
    for player in [Player::Even, Player::Odd] {
        let region = if player == Player::Even { &w_even } else { &w_odd };
        let sigma = Strategy::from_pairs(
            n,
            (0..n).map(NodeId::new).filter_map(|v| {
                let owned = game.owner(v) == player && solution.winners[v.index()] == player;
                solution.choices[v.index()].filter(|_| owned).map(|t| (v, t))
            }),
        );
        if let Some(t) = sigma.pairs().map(|(_, t)| t).find(|t| t.index() >= n) {
            return Err(Failure::Verification(format!("strategy target {t} is not a node")));
        }
        check_strategy(&game, player, &sigma, region)?;
        println!("{player} strategy: ok");
    }
    Ok(())
}

fn cmd_generate(spec: &str, output: Option<&Path>) -> CmdResult {
    let spec: GeneratorSpec = spec.parse()?;
    let game = generate(&spec)?;
    emit(output, &write_pgsolver(&game))
}

#[derive(Serialize)]
#[serde(untagged)]
enum BenchRecord {
    Ok {
        family: &'static str,
        params: Vec<u64>,
        nodes: usize,
        edges: usize,
        index: usize,
        solver_variant: String,
        outer_iterations: u64,
        wall_time_ms: f64,
    },
    Failed {
        spec: String,
        error: String,
    },
}

fn median(mut times: Vec<Duration>) -> Duration {
    times.sort_unstable();
    times[times.len() / 2]
}

#[derive(Copy, Clone)]
struct Limits {
    evaluations: Option<u64>,
    time: Option<Duration>,
}

fn bench_one(line: &str, solver: SolverKind, repeat: usize, limits: Limits) -> Result<BenchRecord, Error> {
    let spec: GeneratorSpec = line.parse()?;
    let game = generate(&spec)?;
    let opts = SolveOpts {
        solver,
        config: SolverConfig {
            evaluation_budget: limits.evaluations,
            time_limit: limits.time,
            ..if solver == SolverKind::FpiterOpt {
                SolverConfig::optimized()
            } else {
                SolverConfig::baseline()
            }
        },
        strategies: false,
        stats: None,
        check: false,
        inject_fault: false,
        output: None,
    };
    let mut times = Vec::with_capacity(repeat);
    let mut last = None;
    for _ in 0..repeat {
        let result = run_solver(&game, &opts).map_err(|f| match f {
            Failure::Resource(m) | Failure::Parse(m) | Failure::Verification(m) => Error::InvalidConfig(m),
            Failure::Other(e) => Error::InvalidConfig(e.to_string()),
        })?;
        times.push(result.stats.wall_time);
        last = Some(result.stats);
    }
    let stats = last.expect("at least one repetition");
    Ok(BenchRecord::Ok {
        family: spec.family(),
        params: spec.params(),
        nodes: game.node_count(),
        edges: game.edge_count(),
        index: game.max_priority() - game.min_priority() + 1,
        solver_variant: stats.solver_variant,
        outer_iterations: stats.outer_iterations,
        wall_time_ms: median(times).as_secs_f64() * 1e3,
    })
}

fn cmd_bench(
    specs: &Path,
    solver: SolverKind,
    repeat: usize,
    limits: Limits,
    out: Option<&Path>,
) -> CmdResult {
    let text = fs::read_to_string(specs).with_context(|| format!("cannot read {}", specs.display()))?;
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .collect();
    let mut records = Vec::with_capacity(lines.len());
    let mut failures = 0;
    for line in &lines {
        let record = bench_one(line, solver, repeat, limits).unwrap_or_else(|e| {
            failures += 1;
            BenchRecord::Failed {
                spec: line.to_string(),
                error: e.to_string(),
            }
        });
        records.push(record);
    }
    let json = serde_json::to_string_pretty(&records).context("cannot encode records")?;
    emit(out, &(json + "\n"))?;
    if !lines.is_empty() && failures == lines.len() {
        return Err(Failure::Other(anyhow::anyhow!("every benchmark entry failed")));
    }
    Ok(())
}

#[derive(Serialize)]
struct TraceSummary {
    evaluations: u64,
    final_count: Option<fpiter::Timestamp>,
    per_level_iterations: Vec<u32>,
    snapshot_keys: Vec<fpiter::Timestamp>,
}

fn cmd_trace(path: &Path, out: Option<&Path>, budget: usize) -> CmdResult {
    let game = read_game(path)?;
    let run = trace_run(&game, budget)?;
    let mut lines = String::new();
    for event in &run.events {
        lines.push_str(&serde_json::to_string(event).context("cannot encode event")?);
        lines.push('\n');
    }
    emit(out, &lines)?;
    let summary = TraceSummary {
        evaluations: run.result.stats.outer_iterations,
        final_count: run.snapshot_keys.last().cloned(),
        per_level_iterations: run.result.stats.per_level_iterations.clone(),
        snapshot_keys: run.snapshot_keys,
    };
    let json = serde_json::to_string(&summary).context("cannot encode summary")?;
    if out.is_some() {
        println!("{json}");
    } else {
        eprintln!("{json}");
    }
    Ok(())
}
