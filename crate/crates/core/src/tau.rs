//! Forced-connection propagation.
//!
//! [`run_tau`] repeatedly finds a node whose next connections are forced and
//! draws them with [`apply_builder`], until the grid is solved, no node has a
//! guaranteed connection left, or the state is shown to have no completion.
//! Rules are tried in priority order after every mutation:
//!
//! 1. **Full saturation**: the node's residual equals the remaining pair
//!    capacity `Σ (k - multiplicity)` over its neighbors (initially
//!    `magnitude = r·k`), so every pair is filled to `k`.
//! 2. **Single neighbor**: all residual connections go to the only neighbor.
//! 3. **One incomplete neighbor**: all residual connections go to it.
//! 4. **Guaranteed word**: among nodes with a non-zero [`omega_star`], pick by
//!    fewest neighbors, then magnitude farthest from `⌊r·k/2⌋`, then
//!    row-major position, and draw its guaranteed word.
//!
//! Every rule only draws connections present in all solutions extending the
//! current state, so a run that ends solved has found the unique solution.
//!
//! [`omega_star`]: crate::words::omega_star

use std::fmt;

use serde::Serialize;

use crate::grid::{Coordinate, Direction, EdgeKey, NumberedGrid};
use crate::par::{self, Exec};
use crate::screens::{screen, ScreenReport};
use crate::state::{PuzzleState, SolveCheck, StateError};
use crate::words::{apply_word, omega_star_at, ConfigWord, OmegaStar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    #[serde(rename = "R1")]
    FullSaturation,
    #[serde(rename = "R2")]
    SingleNeighbor,
    #[serde(rename = "R3")]
    OneIncompleteNeighbor,
    #[serde(rename = "R4")]
    OmegaStar,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::FullSaturation => "R1 full-saturation",
            Rule::SingleNeighbor => "R2 single-neighbor",
            Rule::OneIncompleteNeighbor => "R3 one-incomplete-neighbor",
            Rule::OmegaStar => "R4 omega-star",
        };
        f.write_str(s)
    }
}

/// One applied builder step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauStep {
    pub rule: Rule,
    pub node: Coordinate,
    pub word: ConfigWord,
    /// Connections drawn by this step, in canonical edge order.
    pub added: Vec<(EdgeKey, u32)>,
    /// Digest of the state after the step.
    pub digest: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TauStatus {
    Solved,
    Stalled,
    Unsolvable,
}

impl fmt::Display for TauStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TauStatus::Solved => "solved",
            TauStatus::Stalled => "stalled",
            TauStatus::Unsolvable => "unsolvable",
        })
    }
}

#[derive(Clone, Debug)]
pub struct TauOutcome {
    pub status: TauStatus,
    pub final_state: PuzzleState,
    pub trace: Vec<TauStep>,
    pub reason: Option<String>,
    pub screen: ScreenReport,
}

impl TauOutcome {
    /// Recomputes the stall condition: every incomplete node of the final
    /// state has a zero guaranteed word.
    pub fn stall_holds(&self) -> bool {
        let s = &self.final_state;
        (0..s.grid().len())
            .filter(|&i| !s.is_complete(i))
            .all(|i| omega_star_at(s, i) == OmegaStar::Guaranteed(ConfigWord::zero()))
    }
}

/// Draws `word` at node `p`: each direction's count is added to the pair's
/// multiplicity and subtracted from both residuals.
pub fn apply_builder(
    state: &PuzzleState,
    p: Coordinate,
    word: &ConfigWord,
) -> Result<PuzzleState, StateError> {
    let idx = state.grid().index_of(p).ok_or(StateError::UnknownNode(p))?;
    apply_word(state, idx, word)
}

pub fn run_tau(grid: &NumberedGrid) -> TauOutcome {
    run_tau_with(grid, Exec::default())
}

/// [`run_tau`] with an explicit execution mode for the per-iteration
/// guaranteed-word evaluations. The outcome does not depend on `exec`.
pub fn run_tau_with(grid: &NumberedGrid, exec: Exec) -> TauOutcome {
    let report = screen(grid);
    let state = PuzzleState::new(grid.clone());
    if report.is_unsolvable() {
        return TauOutcome {
            status: TauStatus::Unsolvable,
            final_state: state,
            trace: Vec::new(),
            reason: Some(report.summary()),
            screen: report,
        };
    }
    let mut run = Run {
        state,
        trace: Vec::new(),
        exec,
    };
    let (status, reason) = run.propagate();
    TauOutcome {
        status,
        final_state: run.state,
        trace: run.trace,
        reason,
        screen: report,
    }
}

enum Next {
    Apply(usize, Rule, ConfigWord),
    Impossible(String),
    Stalled,
}

struct Run {
    state: PuzzleState,
    trace: Vec<TauStep>,
    exec: Exec,
}

/// Fewest neighbors, farthest from the midpoint, then row-major position.
type PickKey = (usize, std::cmp::Reverse<u32>, u32, u32);

impl Run {
    fn propagate(&mut self) -> (TauStatus, Option<String>) {
        loop {
            if self.state.total_residual() == 0 {
                return match self.state.is_solved() {
                    SolveCheck::Solved => (TauStatus::Solved, None),
                    other => (
                        TauStatus::Unsolvable,
                        Some(format!(
                            "forced connections complete every node but {other}"
                        )),
                    ),
                };
            }
            if let Some(i) = self.state.sealed_component() {
                let at = self.state.grid().node(i).coord;
                return (
                    TauStatus::Unsolvable,
                    Some(format!("completed component containing {at} is cut off")),
                );
            }
            if let Some(i) = self.state.starved_node() {
                let at = self.state.grid().node(i).coord;
                return (
                    TauStatus::Unsolvable,
                    Some(format!(
                        "node {at} is incomplete but all its neighbors are complete"
                    )),
                );
            }
            let next = match self.forced() {
                Some(next) => next,
                None => self.guaranteed(),
            };
            match next {
                Next::Apply(idx, rule, word) => {
                    if let Err(err) = self.apply(idx, rule, word) {
                        let at = self.state.grid().node(idx).coord;
                        return (
                            TauStatus::Unsolvable,
                            Some(format!("{rule} at {at} cannot be drawn: {err}")),
                        );
                    }
                }
                Next::Impossible(reason) => return (TauStatus::Unsolvable, Some(reason)),
                Next::Stalled => return (TauStatus::Stalled, None),
            }
        }
    }

    fn apply(&mut self, idx: usize, rule: Rule, word: ConfigWord) -> Result<(), StateError> {
        let next = apply_word(&self.state, idx, &word)?;
        let grid = self.state.grid();
        let mut added: Vec<(EdgeKey, u32)> = word
            .directions()
            .map(|(d, c)| {
                let e = grid
                    .incident_edge(idx, d)
                    .expect("applied word uses neighbors");
                (grid.edge(e).key, c)
            })
            .collect();
        added.sort();
        self.trace.push(TauStep {
            rule,
            node: grid.node(idx).coord,
            word,
            added,
            digest: next.digest(),
        });
        self.state = next;
        Ok(())
    }

    /// Rules 1 to 3, each scanned over incomplete nodes in row-major order.
    fn forced(&self) -> Option<Next> {
        let s = &self.state;
        let grid = s.grid();
        let k = grid.k();
        let incomplete: Vec<usize> = (0..grid.len()).filter(|&i| !s.is_complete(i)).collect();
        let neighbors = |i: usize| {
            Direction::ALL
                .into_iter()
                .filter_map(move |d| grid.neighbor_index(i, d).map(|j| (d, j)))
        };

        for &i in &incomplete {
            let mut word = [0u32; 4];
            for (d, _) in neighbors(i) {
                word[d.index()] = k - s.multiplicity_toward(i, d);
            }
            let capacity: u32 = word.iter().sum();
            let residual = s.residual_of(i);
            if residual > capacity {
                return Some(Next::Impossible(format!(
                    "node {} needs {residual} more connections but its pairs hold only {capacity}",
                    grid.node(i).coord
                )));
            }
            if residual == capacity {
                return Some(Next::Apply(i, Rule::FullSaturation, ConfigWord::new(word)));
            }
        }
        for &i in &incomplete {
            if grid.neighbor_count(i) == 1 {
                let (d, _) = neighbors(i).next()?;
                let word = ConfigWord::single(d, s.residual_of(i));
                return Some(Next::Apply(i, Rule::SingleNeighbor, word));
            }
        }
        for &i in &incomplete {
            let mut open = neighbors(i).filter(|&(_, j)| !s.is_complete(j));
            if let (Some((d, _)), None) = (open.next(), open.next()) {
                let word = ConfigWord::single(d, s.residual_of(i));
                return Some(Next::Apply(i, Rule::OneIncompleteNeighbor, word));
            }
        }
        None
    }

    /// Rule 4.
    fn guaranteed(&self) -> Next {
        let s = &self.state;
        let grid = s.grid();
        let k = grid.k();
        let incomplete: Vec<usize> = (0..grid.len()).filter(|&i| !s.is_complete(i)).collect();
        let stars = par::map(self.exec, &incomplete, |&i| omega_star_at(s, i));

        let mut best: Option<(PickKey, usize, ConfigWord)> = None;
        for (&i, star) in incomplete.iter().zip(&stars) {
            let word = match star {
                OmegaStar::Infeasible => {
                    return Next::Impossible(format!(
                        "node {} has no feasible configuration",
                        grid.node(i).coord
                    ))
                }
                OmegaStar::Guaranteed(w) if w.is_zero() => continue,
                OmegaStar::Guaranteed(w) => *w,
            };
            let r = grid.neighbor_count(i);
            let mid = (r as u32 * k) / 2;
            let c = grid.node(i).coord;
            let key = (
                r,
                std::cmp::Reverse(s.residual_of(i).abs_diff(mid)),
                c.y,
                c.x,
            );
            if best.as_ref().is_none_or(|(b, _, _)| key < *b) {
                best = Some((key, i, word));
            }
        }
        match best {
            Some((_, i, word)) => Next::Apply(i, Rule::OmegaStar, word),
            None => Next::Stalled,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Node;

    fn grid(k: u32, nodes: &[(u32, u32, u32)]) -> NumberedGrid {
        NumberedGrid::new(k, nodes.iter().map(|&(x, y, n)| Node::new(x, y, n))).unwrap()
    }

    fn c(x: u32, y: u32) -> Coordinate {
        Coordinate::new(x, y)
    }

    fn square() -> NumberedGrid {
        grid(2, &[(0, 0, 2), (1, 0, 2), (0, 1, 2), (1, 1, 2)])
    }

    #[test]
    fn builder_updates_residuals() {
        let s = PuzzleState::new(square());
        let s = apply_builder(&s, c(0, 0), &"12".parse().unwrap()).unwrap();
        assert_eq!(s.residual(c(0, 0)), Some(0));
        assert_eq!(s.residual(c(0, 1)), Some(1));
        assert_eq!(s.residual(c(1, 0)), Some(1));
        assert_eq!(s.residual(c(1, 1)), Some(2));
    }

    #[test]
    fn builder_zero_word_is_identity() {
        let s = PuzzleState::new(square());
        let t = apply_builder(&s, c(0, 0), &ConfigWord::zero()).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn builder_rejects_overdraw() {
        let s = PuzzleState::new(grid(2, &[(0, 0, 2), (1, 0, 1)]));
        let err = apply_builder(&s, c(0, 0), &"22".parse().unwrap()).unwrap_err();
        assert!(matches!(err, StateError::ResidualExceeded { .. }));
        let err = apply_builder(&s, c(0, 0), &"1".parse().unwrap()).unwrap_err();
        assert!(matches!(err, StateError::MissingNeighbor { .. }));
    }

    #[test]
    fn pair_solves_in_one_step() {
        let out = run_tau(&grid(1, &[(0, 0, 1), (1, 0, 1)]));
        assert_eq!(out.status, TauStatus::Solved);
        assert_eq!(out.trace.len(), 1);
        assert_eq!(
            out.final_state
                .connections()
                .into_iter()
                .collect::<Vec<_>>(),
            vec![(EdgeKey::new(c(0, 0), c(1, 0)), 1)]
        );
    }

    #[test]
    fn square_uses_guaranteed_word_then_single_neighbors() {
        let out = run_tau(&square());
        assert_eq!(out.status, TauStatus::Solved);
        let rules: Vec<Rule> = out.trace.iter().map(|s| s.rule).collect();
        assert_eq!(
            rules,
            vec![
                Rule::OmegaStar,
                Rule::OneIncompleteNeighbor,
                Rule::OneIncompleteNeighbor
            ]
        );
        assert_eq!(out.trace[0].node, c(0, 0));
        assert_eq!(out.trace[0].word.to_string(), "12");
        assert!(out.final_state.connections().values().all(|&m| m == 1));
        assert_eq!(out.final_state.connections().len(), 4);
    }

    #[test]
    fn double_pair() {
        let out = run_tau(&grid(2, &[(0, 0, 2), (1, 0, 2)]));
        assert_eq!(out.status, TauStatus::Solved);
        assert_eq!(out.trace[0].rule, Rule::FullSaturation);
        assert_eq!(out.final_state.connections().values().next(), Some(&2));
    }

    #[test]
    fn screen_short_circuits() {
        let out = run_tau(&grid(2, &[(0, 0, 1), (1, 0, 2)]));
        assert_eq!(out.status, TauStatus::Unsolvable);
        assert!(out.trace.is_empty());
        assert!(out.reason.unwrap().contains("C2"));
    }

    #[test]
    fn sealed_pair_is_unsolvable() {
        // Two doubles forced on the left pair leave the right pair cut off.
        let out = run_tau(&grid(2, &[(0, 0, 2), (1, 0, 4), (2, 0, 2), (1, 1, 2)]));
        assert_eq!(out.status, TauStatus::Unsolvable);
    }

    #[test]
    fn steps_strictly_reduce_residual() {
        let out = run_tau(&square());
        let mut s = PuzzleState::new(square());
        let mut before = s.total_residual();
        for step in &out.trace {
            s = apply_builder(&s, step.node, &step.word).unwrap();
            assert!(s.total_residual() < before);
            assert_eq!(s.digest(), step.digest);
            before = s.total_residual();
        }
        assert_eq!(s, out.final_state);
    }

    #[test]
    fn exec_modes_agree() {
        let g = square();
        let a = run_tau_with(&g, Exec::Sequential);
        let b = run_tau_with(&g, Exec::Parallel);
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.status, b.status);
    }
}
