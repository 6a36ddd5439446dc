//! Syntactic unsolvability checks on an unconnected grid.
//!
//! Each check is a necessary condition for solvability, so a violation proves
//! the grid unsolvable while a clean report proves nothing. The
//! "every configuration disconnects the grid" condition is dynamic and is
//! detected by [`omega_star`](crate::words::omega_star) returning
//! [`Infeasible`](crate::words::OmegaStar::Infeasible) instead.

use std::fmt;

use serde::Serialize;

use crate::grid::{Coordinate, Direction, NumberedGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Condition {
    /// A node has no neighbors.
    NoNeighbors,
    /// The magnitude sum is odd.
    OddMagnitudeSum,
    /// Neighbor magnitudes sum to less than the node's own.
    NeighborsTooSmall,
    /// Magnitude exceeds `r * k`.
    OverCapacity,
    /// Magnitude `(r-1)k + j` next to a neighbor of magnitude below `j`.
    IncompatibleNeighbor,
}

impl Condition {
    /// Numeric id in the 1..6 condition list (4 is the dynamic check).
    pub fn id(self) -> u8 {
        match self {
            Condition::NoNeighbors => 1,
            Condition::OddMagnitudeSum => 2,
            Condition::NeighborsTooSmall => 3,
            Condition::OverCapacity => 5,
            Condition::IncompatibleNeighbor => 6,
        }
    }

    pub fn label(self) -> String {
        format!("C{}", self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Grid,
    Node(Coordinate),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Grid => write!(f, "grid"),
            Witness::Node(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub witness: Witness,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    MaybeSolvable,
    Unsolvable,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScreenReport {
    pub violations: Vec<Violation>,
}

impl ScreenReport {
    pub fn verdict(&self) -> Verdict {
        if self.violations.is_empty() {
            Verdict::MaybeSolvable
        } else {
            Verdict::Unsolvable
        }
    }

    pub fn is_unsolvable(&self) -> bool {
        !self.violations.is_empty()
    }

    pub fn fired(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| format!("{} at {}: {}", v.condition.label(), v.witness, v.message))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Runs every check and collects all violations: the grid-level parity check
/// first, then per node in row-major order.
pub fn screen(grid: &NumberedGrid) -> ScreenReport {
    let mut violations = Vec::new();
    let total = grid.magnitude_sum();
    if total % 2 == 1 {
        violations.push(Violation {
            condition: Condition::OddMagnitudeSum,
            witness: Witness::Grid,
            message: format!("magnitudes sum to {total}, which is odd"),
        });
    }
    let k = grid.k();
    for (idx, node) in grid.nodes().iter().enumerate() {
        let at = Witness::Node(node.coord);
        let n = node.magnitude;
        let nbrs: Vec<u32> = Direction::ALL
            .iter()
            .filter_map(|&d| grid.neighbor_index(idx, d))
            .map(|j| grid.node(j).magnitude)
            .collect();
        let r = nbrs.len() as u32;
        if r == 0 {
            violations.push(Violation {
                condition: Condition::NoNeighbors,
                witness: at,
                message: "node has no neighbors".into(),
            });
        }
        let nbr_sum: u64 = nbrs.iter().map(|&m| u64::from(m)).sum();
        if r > 0 && nbr_sum < u64::from(n) {
            violations.push(Violation {
                condition: Condition::NeighborsTooSmall,
                witness: at,
                message: format!("neighbor magnitudes sum to {nbr_sum} < {n}"),
            });
        }
        if r > 0 && u64::from(n) > u64::from(r) * u64::from(k) {
            violations.push(Violation {
                condition: Condition::OverCapacity,
                witness: at,
                message: format!("magnitude {n} > r*k = {r}*{k}"),
            });
        }
        if k > 1 && r > 0 {
            let base = (r - 1) * k;
            if n >= base + 2 && n <= base + k {
                let j = n - base;
                if let Some(&small) = nbrs.iter().filter(|&&m| m < j).min() {
                    violations.push(Violation {
                        condition: Condition::IncompatibleNeighbor,
                        witness: at,
                        message: format!(
                            "magnitude {n} = ({r}-1)*{k} + {j} but a neighbor has magnitude {small} <= {}",
                            j - 1
                        ),
                    });
                }
            }
        }
    }
    ScreenReport { violations }
}
