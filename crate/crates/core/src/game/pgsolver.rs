//! Reading and writing the PGSolver text formats.
//!
//! Game files: an optional header `parity <maxid>;` followed by one line per
//! node, `<id> <priority> <owner> <succ>(,<succ>)* ("name")? ;`, owner 0 for
//! Even and 1 for Odd. Solution files: `paritysol <maxid>;` followed by
//! `<id> <winner>( <succ>)? ;`. Output uses `\n`; input may use `\r\n`.
//! `start <id>;` lines are accepted and ignored.

use std::fmt::Write as _;

use super::{NodeId, NodeSpec, ParityGame, Player, SolveResult};
use crate::error::{Error, Result};

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-empty statements of `text` with their 1-based line numbers, the
/// trailing `;` removed.
fn statements(text: &str) -> impl Iterator<Item = Result<(usize, &str)>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            return None;
        }
        Some(match trimmed.strip_suffix(';') {
            Some(body) => Ok((line, body.trim_end())),
            None => Err(syntax(line, "statement must end with ';'")),
        })
    })
}

fn parse_uint(line: usize, token: &str, what: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| syntax(line, format!("expected {what}, found {token:?}")))
}

/// Recognizes `<keyword> <n>` headers; `Ok(None)` if the keyword differs.
fn header(line: usize, body: &str, keyword: &str) -> Result<Option<usize>> {
    let mut tokens = body.split_whitespace();
    if tokens.next() != Some(keyword) {
        return Ok(None);
    }
    let max_id = match tokens.next() {
        Some(t) => parse_uint(line, t, "maximal node id")?,
        None => return Err(syntax(line, format!("'{keyword}' header needs a maximal node id"))),
    };
    if tokens.next().is_some() {
        return Err(syntax(line, "trailing tokens after header"));
    }
    Ok(Some(max_id))
}

fn split_name(line: usize, body: &str) -> Result<(&str, Option<String>)> {
    match body.find('"') {
        None => Ok((body, None)),
        Some(open) => {
            let close = body.rfind('"').unwrap();
            if close == open {
                return Err(syntax(line, "unterminated node name"));
            }
            if !body[close + 1..].trim().is_empty() {
                return Err(syntax(line, "unexpected text after node name"));
            }
            Ok((&body[..open], Some(body[open + 1..close].to_string())))
        }
    }
}

/// Places `item` at slot `id`, growing the table as needed.
fn place<T>(slots: &mut Vec<Option<T>>, id: usize, item: T, line: usize) -> Result<()> {
    if slots.len() <= id {
        slots.resize_with(id + 1, || None);
    }
    if slots[id].is_some() {
        return Err(Error::DuplicateNode { line, node: id });
    }
    slots[id] = Some(item);
    Ok(())
}

fn check_declared(declared: Option<(usize, usize)>, id: usize, line: usize) -> Result<()> {
    match declared {
        Some((max_id, _)) if id > max_id => Err(syntax(
            line,
            format!("node id {id} exceeds the declared maximal id {max_id}"),
        )),
        _ => Ok(()),
    }
}

fn densify<T>(slots: Vec<Option<T>>, declared: Option<(usize, usize)>) -> Result<Vec<T>> {
    let len = match declared {
        Some((max_id, _)) => max_id + 1,
        None => slots.len(),
    };
    let mut out = Vec::with_capacity(len);
    let mut slots = slots.into_iter();
    for id in 0..len {
        match slots.next().flatten() {
            Some(item) => out.push(item),
            None => return Err(Error::MissingNode { node: id }),
        }
    }
    Ok(out)
}

pub fn parse_pgsolver(text: &str) -> Result<ParityGame> {
    let mut declared = None;
    let mut slots: Vec<Option<NodeSpec>> = Vec::new();
    let mut first = true;

    for stmt in statements(text) {
        let (line, body) = stmt?;
        if first {
            first = false;
            if let Some(max_id) = header(line, body, "parity")? {
                declared = Some((max_id, line));
                continue;
            }
        }
        if header(line, body, "start")?.is_some() {
            continue;
        }

        let (head, name) = split_name(line, body)?;
        let mut tokens = head.split_whitespace();
        let mut field = |what: &str| {
            tokens
                .next()
                .ok_or_else(|| syntax(line, format!("missing {what}")))
        };
        let id = parse_uint(line, field("node id")?, "node id")?;
        let prio_token = field("priority")?;
        let priority = prio_token
            .parse::<i64>()
            .map_err(|_| syntax(line, format!("expected priority, found {prio_token:?}")))?;
        let owner_token = field("owner")?;
        let owner = owner_token
            .parse::<u8>()
            .ok()
            .and_then(Player::from_code)
            .ok_or_else(|| syntax(line, format!("owner must be 0 or 1, found {owner_token:?}")))?;
        let succ_text: String = tokens.collect();
        if succ_text.is_empty() {
            return Err(syntax(line, "missing successor list"));
        }
        let successors = succ_text
            .split(',')
            .map(|t| parse_uint(line, t, "successor id"))
            .collect::<Result<Vec<_>>>()?;

        check_declared(declared, id, line)?;
        place(
            &mut slots,
            id,
            NodeSpec {
                priority,
                owner,
                successors,
                name,
            },
            line,
        )?;
    }

    let nodes = densify(slots, declared)?;
    if nodes.is_empty() {
        return Err(Error::EmptyGame);
    }
    ParityGame::build(nodes)
}

/// Canonical PGSolver serialization: header, ascending ids, comma-separated
/// successors, names quoted, every line newline-terminated.
pub fn write_pgsolver(game: &ParityGame) -> String {
    let mut out = String::new();
    writeln!(out, "parity {};", game.node_count() - 1).unwrap();
    for v in game.nodes() {
        write!(out, "{} {} {} ", v, game.priority(v), game.owner(v).code()).unwrap();
        for (i, t) in game.successors(v).iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{t}").unwrap();
        }
        if let Some(name) = game.name(v) {
            write!(out, " \"{name}\"").unwrap();
        }
        out.push_str(";\n");
    }
    out
}

/// Writes `paritysol` output; the strategy field is the winner's choice at
/// nodes the winner owns.
pub fn write_solution(result: &SolveResult) -> String {
    let n = result.w_even.universe();
    let mut out = String::new();
    writeln!(out, "paritysol {};", n.saturating_sub(1)).unwrap();
    for v in (0..n).map(NodeId::new) {
        let winner = result.winner(v);
        write!(out, "{} {}", v, winner.code()).unwrap();
        if let Some(t) = result.strategy(winner).get(v) {
            write!(out, " {t}").unwrap();
        }
        out.push_str(";\n");
    }
    out
}

/// Contents of a solution file, before any check against a game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedSolution {
    pub winners: Vec<Player>,
    pub choices: Vec<Option<NodeId>>,
}

pub fn parse_solution(text: &str) -> Result<ParsedSolution> {
    let mut declared = None;
    let mut slots: Vec<Option<(Player, Option<NodeId>)>> = Vec::new();
    let mut first = true;

    for stmt in statements(text) {
        let (line, body) = stmt?;
        if first {
            first = false;
            if let Some(max_id) = header(line, body, "paritysol")? {
                declared = Some((max_id, line));
                continue;
            }
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if !(2..=3).contains(&tokens.len()) {
            return Err(syntax(line, "expected '<id> <winner> [<successor>]'"));
        }
        let id = parse_uint(line, tokens[0], "node id")?;
        let winner = tokens[1]
            .parse::<u8>()
            .ok()
            .and_then(Player::from_code)
            .ok_or_else(|| syntax(line, format!("winner must be 0 or 1, found {:?}", tokens[1])))?;
        let choice = match tokens.get(2) {
            Some(t) => Some(NodeId::new(parse_uint(line, t, "successor id")?)),
            None => None,
        };
        check_declared(declared, id, line)?;
        place(&mut slots, id, (winner, choice), line)?;
    }

    let entries = densify(slots, declared)?;
    let (winners, choices) = entries.into_iter().unzip();
    Ok(ParsedSolution { winners, choices })
}
