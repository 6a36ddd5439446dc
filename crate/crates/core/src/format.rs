//! Line-oriented text formats for puzzles and solutions.
//!
//! Coordinates are sparse and y-up: `Top` is the direction of larger `y`.
//! Blank lines and everything after `#` are ignored.
//!
//! Puzzle:
//!
//! ```text
//! k 2
//! node 0 0 2      # node <x> <y> <magnitude>
//! node 1 0 2
//! ```
//!
//! Solution, one record per connected pair with its multiplicity:
//!
//! ```text
//! conn 0 0 1 0 2  # conn <x1> <y1> <x2> <y2> <m>
//! ```
//!
//! A solution file may hold several solutions, each introduced by a
//! `solution` line (an optional index after the keyword is ignored). Records
//! before the first `solution` line form a solution of their own.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::grid::{Coordinate, EdgeKey, Node, NumberedGrid};
use crate::state::{ConnectionMap, PuzzleState, SolveCheck, StateError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate coordinate {coord}")]
    DuplicateCoordinate { line: usize, coord: Coordinate },
    #[error("line {line}: duplicate connection {edge}")]
    DuplicateConnection { line: usize, edge: EdgeKey },
    #[error("line {line}: expected `k <int>` header before any other record")]
    MissingHeader { line: usize },
    #[error("line {line}: {what} must be at least 1")]
    Range { line: usize, what: &'static str },
    #[error("puzzle has a header but no nodes")]
    Empty,
}

fn significant(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn ints<const N: usize>(
    line: usize,
    keyword: &str,
    args: &[&str],
) -> Result<[u32; N], FormatError> {
    if args.len() != N {
        return Err(FormatError::Parse {
            line,
            message: format!("`{keyword}` takes {N} integers, found {}", args.len()),
        });
    }
    let mut out = [0u32; N];
    for (slot, a) in out.iter_mut().zip(args) {
        *slot = a.parse().map_err(|_| FormatError::Parse {
            line,
            message: format!("`{a}` is not a non-negative integer"),
        })?;
    }
    Ok(out)
}

pub fn parse_puzzle(text: &str) -> Result<NumberedGrid, FormatError> {
    let mut lines = significant(text);
    let (line, fields) = lines.next().ok_or(FormatError::MissingHeader { line: 1 })?;
    if fields[0] != "k" {
        return Err(FormatError::MissingHeader { line });
    }
    let [k] = ints::<1>(line, "k", &fields[1..])?;
    if k == 0 {
        return Err(FormatError::Range { line, what: "k" });
    }
    let mut seen = BTreeSet::new();
    let mut nodes = Vec::new();
    for (line, fields) in lines {
        match fields[0] {
            "node" => {
                let [x, y, n] = ints::<3>(line, "node", &fields[1..])?;
                if n == 0 {
                    return Err(FormatError::Range {
                        line,
                        what: "magnitude",
                    });
                }
                let coord = Coordinate::new(x, y);
                if !seen.insert(coord) {
                    return Err(FormatError::DuplicateCoordinate { line, coord });
                }
                nodes.push(Node::new(x, y, n));
            }
            "k" => {
                return Err(FormatError::Parse {
                    line,
                    message: "second `k` header".into(),
                })
            }
            other => {
                return Err(FormatError::Parse {
                    line,
                    message: format!("unknown record `{other}`"),
                })
            }
        }
    }
    if nodes.is_empty() {
        return Err(FormatError::Empty);
    }
    Ok(NumberedGrid::new(k, nodes).expect("header and nodes already validated"))
}

pub fn serialize_puzzle(grid: &NumberedGrid) -> String {
    let mut s = format!("k {}\n", grid.k());
    for n in grid.nodes() {
        let _ = writeln!(s, "node {} {} {}", n.coord.x, n.coord.y, n.magnitude);
    }
    s
}

/// Every solution in `text`, in file order.
pub fn parse_solutions(text: &str) -> Result<Vec<ConnectionMap>, FormatError> {
    let mut out: Vec<ConnectionMap> = Vec::new();
    let mut current: Option<ConnectionMap> = None;
    for (line, fields) in significant(text) {
        match fields[0] {
            "solution" => {
                if fields.len() > 2 {
                    return Err(FormatError::Parse {
                        line,
                        message: "`solution` takes at most an index".into(),
                    });
                }
                out.extend(current.replace(ConnectionMap::new()));
            }
            "conn" => {
                let [x1, y1, x2, y2, m] = ints::<5>(line, "conn", &fields[1..])?;
                if m == 0 {
                    return Err(FormatError::Range {
                        line,
                        what: "multiplicity",
                    });
                }
                let (a, b) = (Coordinate::new(x1, y1), Coordinate::new(x2, y2));
                if a == b {
                    return Err(FormatError::Parse {
                        line,
                        message: format!("connection from {a} to itself"),
                    });
                }
                let edge = EdgeKey::new(a, b);
                let map = current.get_or_insert_with(ConnectionMap::new);
                if map.insert(edge, m).is_some() {
                    return Err(FormatError::DuplicateConnection { line, edge });
                }
            }
            other => {
                return Err(FormatError::Parse {
                    line,
                    message: format!("unknown record `{other}`"),
                })
            }
        }
    }
    out.extend(current);
    Ok(out)
}

/// A file holding exactly one solution.
pub fn parse_solution(text: &str) -> Result<ConnectionMap, FormatError> {
    let mut all = parse_solutions(text)?;
    match all.len() {
        0 => Ok(ConnectionMap::new()),
        1 => Ok(all.remove(0)),
        n => Err(FormatError::Parse {
            line: 1,
            message: format!("expected one solution, found {n}"),
        }),
    }
}

pub fn serialize_solution(solution: &ConnectionMap) -> String {
    let mut s = String::new();
    for (e, m) in solution {
        let _ = writeln!(s, "conn {} {} {} {} {m}", e.a.x, e.a.y, e.b.x, e.b.y);
    }
    s
}

/// Several solutions as numbered `solution` blocks.
pub fn serialize_solutions(solutions: &[ConnectionMap]) -> String {
    let mut s = String::new();
    for (i, sol) in solutions.iter().enumerate() {
        let _ = writeln!(s, "solution {}", i + 1);
        s.push_str(&serialize_solution(sol));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// A record cannot be placed on the grid at all.
    Invalid(StateError),
    /// The records fit but do not solve the grid.
    NotSolved(SolveCheck),
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::Invalid(e) => write!(f, "{e}"),
            Rejection::NotSolved(c) => write!(f, "{c}"),
        }
    }
}

impl std::error::Error for Rejection {}

/// Accepts `solution` iff it is a complete solution of `grid`.
pub fn verify(grid: &NumberedGrid, solution: &ConnectionMap) -> Result<(), Rejection> {
    let state =
        PuzzleState::from_connections(grid.clone(), solution).map_err(Rejection::Invalid)?;
    match state.is_solved() {
        SolveCheck::Solved => Ok(()),
        other => Err(Rejection::NotSolved(other)),
    }
}
