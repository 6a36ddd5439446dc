//! Connection bookkeeping on top of an immutable grid.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::grid::{Coordinate, Direction, EdgeKey, NumberedGrid};

/// Positive multiplicities keyed by canonical edge.
pub type ConnectionMap = BTreeMap<EdgeKey, u32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateError {
    #[error("no node at {0}")]
    UnknownNode(Coordinate),
    #[error("{0} does not join two neighboring nodes")]
    NotNeighbors(EdgeKey),
    #[error("node {node} has no {direction:?} neighbor")]
    MissingNeighbor {
        node: Coordinate,
        direction: Direction,
    },
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("{edge}: {current} + {added} connections exceed k = {k}")]
    CapacityExceeded {
        edge: EdgeKey,
        current: u32,
        added: u32,
        k: u32,
    },
    #[error("{edge}: node {node} has residual {residual}, cannot take {added}")]
    ResidualExceeded {
        edge: EdgeKey,
        node: Coordinate,
        residual: u32,
        added: u32,
    },
    #[error("{edge} crosses existing connection {other}")]
    CrossingViolation { edge: EdgeKey, other: EdgeKey },
}

/// Outcome of checking a state against the solved-grid definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum SolveCheck {
    Solved,
    Incomplete { node: Coordinate, residual: u32 },
    OverCapacity { edge: EdgeKey, multiplicity: u32 },
    Crossing { first: EdgeKey, second: EdgeKey },
    Disconnected { node: Coordinate },
}

impl SolveCheck {
    pub fn is_solved(&self) -> bool {
        matches!(self, SolveCheck::Solved)
    }
}

impl fmt::Display for SolveCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveCheck::Solved => write!(f, "solved"),
            SolveCheck::Incomplete { node, residual } => {
                write!(f, "incomplete node at {node} (residual {residual})")
            }
            SolveCheck::OverCapacity { edge, multiplicity } => {
                write!(f, "{edge} carries {multiplicity} connections, above k")
            }
            SolveCheck::Crossing { first, second } => {
                write!(f, "connections {first} and {second} cross")
            }
            SolveCheck::Disconnected { node } => {
                write!(
                    f,
                    "disconnected: {node} is not reachable from the first node"
                )
            }
        }
    }
}

/// A grid plus a multiset of connections. Cloning is cheap enough for
/// speculative application; all public mutators return a new state.
#[derive(Clone, Debug)]
pub struct PuzzleState {
    grid: Arc<NumberedGrid>,
    mult: Vec<u32>,
    residual: Vec<u32>,
}

impl PartialEq for PuzzleState {
    fn eq(&self, other: &Self) -> bool {
        *self.grid == *other.grid && self.mult == other.mult
    }
}

impl Eq for PuzzleState {}

impl PuzzleState {
    pub fn new(grid: impl Into<Arc<NumberedGrid>>) -> Self {
        let grid = grid.into();
        let residual = grid.nodes().iter().map(|n| n.magnitude).collect();
        let mult = vec![0; grid.edges().len()];
        PuzzleState {
            grid,
            mult,
            residual,
        }
    }

    /// Builds a state from a connection map, checking every invariant.
    pub fn from_connections(
        grid: impl Into<Arc<NumberedGrid>>,
        connections: &ConnectionMap,
    ) -> Result<Self, StateError> {
        let mut state = PuzzleState::new(grid);
        for (key, &m) in connections {
            state = state.add_connections(*key, m)?;
        }
        Ok(state)
    }

    pub fn grid(&self) -> &NumberedGrid {
        &self.grid
    }

    pub fn shared_grid(&self) -> &Arc<NumberedGrid> {
        &self.grid
    }

    pub fn multiplicity(&self, key: &EdgeKey) -> u32 {
        self.grid.edge_index(key).map_or(0, |e| self.mult[e])
    }

    pub fn multiplicity_at(&self, edge: usize) -> u32 {
        self.mult[edge]
    }

    /// Multiplicity between node `idx` and its `d` neighbor (0 if absent).
    pub fn multiplicity_toward(&self, idx: usize, d: Direction) -> u32 {
        self.grid.incident_edge(idx, d).map_or(0, |e| self.mult[e])
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    pub fn residuals(&self) -> &[u32] {
        &self.residual
    }

    pub fn residual_of(&self, idx: usize) -> u32 {
        self.residual[idx]
    }

    pub fn degree_of(&self, idx: usize) -> u32 {
        self.grid.node(idx).magnitude - self.residual[idx]
    }

    /// Sum of multiplicities incident to the node at `c`.
    pub fn degree(&self, c: Coordinate) -> Option<u32> {
        self.grid.index_of(c).map(|i| self.degree_of(i))
    }

    pub fn residual(&self, c: Coordinate) -> Option<u32> {
        self.grid.index_of(c).map(|i| self.residual[i])
    }

    pub fn is_complete(&self, idx: usize) -> bool {
        self.residual[idx] == 0
    }

    pub fn total_residual(&self) -> u64 {
        self.residual.iter().map(|&r| u64::from(r)).sum()
    }

    pub fn connections(&self) -> ConnectionMap {
        self.grid
            .edges()
            .iter()
            .zip(&self.mult)
            .filter(|(_, &m)| m > 0)
            .map(|(e, &m)| (e.key, m))
            .collect()
    }

    /// Returns a new state with `m` more connections on `key`.
    pub fn add_connections(&self, key: EdgeKey, m: u32) -> Result<Self, StateError> {
        let e = self
            .grid
            .edge_index(&key)
            .ok_or(StateError::NotNeighbors(key))?;
        let mut next = self.clone();
        next.connect(e, m)?;
        Ok(next)
    }

    /// Checks whether `m` more connections fit on edge `e`.
    pub(crate) fn check_connect(&self, e: usize, m: u32) -> Result<(), StateError> {
        if m == 0 {
            return Err(StateError::ZeroMultiplicity);
        }
        let edge = *self.grid.edge(e);
        let k = self.grid.k();
        if self.mult[e] + m > k {
            return Err(StateError::CapacityExceeded {
                edge: edge.key,
                current: self.mult[e],
                added: m,
                k,
            });
        }
        for idx in [edge.a, edge.b] {
            if self.residual[idx] < m {
                return Err(StateError::ResidualExceeded {
                    edge: edge.key,
                    node: self.grid.node(idx).coord,
                    residual: self.residual[idx],
                    added: m,
                });
            }
        }
        if let Some(&other) = self
            .grid
            .crossing_edges(e)
            .iter()
            .find(|&&o| self.mult[o] > 0)
        {
            return Err(StateError::CrossingViolation {
                edge: edge.key,
                other: self.grid.edge(other).key,
            });
        }
        Ok(())
    }

    /// In-place variant of [`add_connections`](Self::add_connections).
    pub(crate) fn connect(&mut self, e: usize, m: u32) -> Result<(), StateError> {
        self.check_connect(e, m)?;
        let edge = *self.grid.edge(e);
        self.mult[e] += m;
        self.residual[edge.a] -= m;
        self.residual[edge.b] -= m;
        Ok(())
    }

    /// Component label per node over positive-multiplicity edges. Labels are
    /// the smallest node index in each component.
    pub fn components(&self) -> Vec<usize> {
        let n = self.grid.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (e, edge) in self.grid.edges().iter().enumerate() {
            if self.mult[e] > 0 {
                let ra = find(&mut parent, edge.a);
                let rb = find(&mut parent, edge.b);
                if ra != rb {
                    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    parent[hi] = lo;
                }
            }
        }
        (0..n).map(|i| find(&mut parent, i)).collect()
    }

    /// A node of some component whose members are all complete while other
    /// nodes lie outside it. Such a component can never join the rest.
    pub fn sealed_component(&self) -> Option<usize> {
        let labels = self.components();
        let n = labels.len();
        let mut open = vec![false; n];
        let mut size = vec![0usize; n];
        for (i, &l) in labels.iter().enumerate() {
            size[l] += 1;
            if self.residual[i] > 0 {
                open[l] = true;
            }
        }
        (0..n).find(|&l| labels[l] == l && !open[l] && size[l] < n)
    }

    /// An incomplete node whose existing neighbors are all complete.
    pub fn starved_node(&self) -> Option<usize> {
        (0..self.grid.len()).find(|&i| {
            self.residual[i] > 0
                && Direction::ALL
                    .iter()
                    .filter_map(|&d| self.grid.neighbor_index(i, d))
                    .all(|j| self.residual[j] == 0)
        })
    }

    pub fn is_solved(&self) -> SolveCheck {
        let grid = &self.grid;
        if let Some(i) = (0..grid.len()).find(|&i| self.residual[i] != 0) {
            return SolveCheck::Incomplete {
                node: grid.node(i).coord,
                residual: self.residual[i],
            };
        }
        if let Some(e) = (0..self.mult.len()).find(|&e| self.mult[e] > grid.k()) {
            return SolveCheck::OverCapacity {
                edge: grid.edge(e).key,
                multiplicity: self.mult[e],
            };
        }
        for e in 0..self.mult.len() {
            if self.mult[e] == 0 {
                continue;
            }
            if let Some(&o) = grid
                .crossing_edges(e)
                .iter()
                .find(|&&o| o > e && self.mult[o] > 0)
            {
                return SolveCheck::Crossing {
                    first: grid.edge(e).key,
                    second: grid.edge(o).key,
                };
            }
        }
        let labels = self.components();
        if let Some(i) = labels.iter().position(|&l| l != labels[0]) {
            return SolveCheck::Disconnected {
                node: grid.node(i).coord,
            };
        }
        SolveCheck::Solved
    }

    /// Re-derives every structural invariant from scratch.
    pub fn validate(&self) -> Result<(), StateError> {
        let rebuilt = PuzzleState::from_connections(self.grid.clone(), &self.connections())?;
        debug_assert_eq!(rebuilt.residual, self.residual);
        Ok(())
    }

    /// Short content hash of the connection map, stable across runs.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.grid.k().to_le_bytes());
        for (key, m) in self.connections() {
            for v in [key.a.x, key.a.y, key.b.x, key.b.y, m] {
                hasher.update(v.to_le_bytes());
            }
        }
        hasher
            .finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
