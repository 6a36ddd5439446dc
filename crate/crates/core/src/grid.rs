//! Instance model: coordinates, nodes, directions and the immutable
//! [`NumberedGrid`] with its precomputed neighbor and edge tables.
//!
//! Orientation is y-up: the `Top` neighbor of a node has the same `x` and the
//! smallest strictly larger `y`. Neighbors are the nearest node in the row or
//! column, so they can be arbitrarily far apart in sparse grids.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Lattice position. `x` grows to the right, `y` grows upward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coordinate {
    pub x: u32,
    pub y: u32,
}

impl Coordinate {
    pub const fn new(x: u32, y: u32) -> Self {
        Coordinate { x, y }
    }

    /// Row-major ordering key `(y, x)`, used for every deterministic scan.
    pub fn row_major(&self) -> (u32, u32) {
        (self.y, self.x)
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    pub coord: Coordinate,
    pub magnitude: u32,
}

impl Node {
    pub const fn new(x: u32, y: u32, magnitude: u32) -> Self {
        Node {
            coord: Coordinate::new(x, y),
            magnitude,
        }
    }
}

/// The four neighbor directions, encoded Top=1, Right=2, Bottom=3, Left=4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Top = 1,
    Right = 2,
    Bottom = 3,
    Left = 4,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Top,
        Direction::Right,
        Direction::Bottom,
        Direction::Left,
    ];

    /// Zero-based slot in four-element arrays.
    pub const fn index(self) -> usize {
        self as usize - 1
    }

    pub const fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Direction> {
        match code {
            1 => Some(Direction::Top),
            2 => Some(Direction::Right),
            3 => Some(Direction::Bottom),
            4 => Some(Direction::Left),
            _ => None,
        }
    }

    pub const fn opposite(self) -> Direction {
        match self {
            Direction::Top => Direction::Bottom,
            Direction::Right => Direction::Left,
            Direction::Bottom => Direction::Top,
            Direction::Left => Direction::Right,
        }
    }
}

/// Unordered neighbor pair, stored with `a < b` in `(x, y)` order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub a: Coordinate,
    pub b: Coordinate,
}

impl EdgeKey {
    pub fn new(p: Coordinate, q: Coordinate) -> Self {
        match p.cmp(&q) {
            Ordering::Greater => EdgeKey { a: q, b: p },
            _ => EdgeKey { a: p, b: q },
        }
    }

    pub fn is_horizontal(&self) -> bool {
        self.a.y == self.b.y
    }

    pub fn is_vertical(&self) -> bool {
        self.a.x == self.b.x
    }

    pub fn touches(&self, c: Coordinate) -> bool {
        self.a == c || self.b == c
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Strict interior crossing of two axis-aligned neighbor segments.
///
/// Parallel segments never cross: neighbor minimality keeps node-free
/// interiors, so collinear overlap cannot happen. Touching at an endpoint is
/// not a crossing.
pub fn segments_cross(e1: &EdgeKey, e2: &EdgeKey) -> bool {
    let (h, v) = if e1.is_horizontal() && e2.is_vertical() {
        (e1, e2)
    } else if e2.is_horizontal() && e1.is_vertical() {
        (e2, e1)
    } else {
        return false;
    };
    // a < b in (x, y) order, so h.a.x < h.b.x and v.a.y < v.b.y.
    let row = h.a.y;
    let col = v.a.x;
    h.a.x < col && col < h.b.x && v.a.y < row && row < v.b.y
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("a grid needs at least one node")]
    Empty,
    #[error("node at {0} has magnitude 0")]
    ZeroMagnitude(Coordinate),
    #[error("two nodes share coordinate {0}")]
    DuplicateCoordinate(Coordinate),
}

/// Neighbor pair with its endpoints resolved to node indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub key: EdgeKey,
    /// Index of `key.a`.
    pub a: usize,
    /// Index of `key.b`.
    pub b: usize,
}

impl Edge {
    pub fn other(&self, node: usize) -> usize {
        if node == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// An immutable numbered k-grid.
///
/// Nodes are stored in row-major `(y, x)` order; node indices used throughout
/// the crate refer to this order. Edges are every neighbor pair, indexed in
/// canonical [`EdgeKey`] order.
#[derive(Clone, Debug)]
pub struct NumberedGrid {
    k: u32,
    nodes: Vec<Node>,
    index: HashMap<Coordinate, usize>,
    neighbors: Vec<[Option<usize>; 4]>,
    incident: Vec<[Option<usize>; 4]>,
    edges: Vec<Edge>,
    edge_index: HashMap<EdgeKey, usize>,
    crossings: Vec<Vec<usize>>,
}

impl PartialEq for NumberedGrid {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.nodes == other.nodes
    }
}

impl Eq for NumberedGrid {}

impl NumberedGrid {
    pub fn new(k: u32, nodes: impl IntoIterator<Item = Node>) -> Result<Self, GridError> {
        if k == 0 {
            return Err(GridError::ZeroK);
        }
        let mut nodes: Vec<Node> = nodes.into_iter().collect();
        if nodes.is_empty() {
            return Err(GridError::Empty);
        }
        nodes.sort_by_key(|n| n.coord.row_major());
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if n.magnitude == 0 {
                return Err(GridError::ZeroMagnitude(n.coord));
            }
            if index.insert(n.coord, i).is_some() {
                return Err(GridError::DuplicateCoordinate(n.coord));
            }
        }

        let mut neighbors = vec![[None; 4]; nodes.len()];
        // Row-major order: consecutive nodes in a row are Left/Right neighbors.
        for w in 0..nodes.len().saturating_sub(1) {
            if nodes[w].coord.y == nodes[w + 1].coord.y {
                neighbors[w][Direction::Right.index()] = Some(w + 1);
                neighbors[w + 1][Direction::Left.index()] = Some(w);
            }
        }
        let mut by_column: Vec<usize> = (0..nodes.len()).collect();
        by_column.sort_by_key(|&i| (nodes[i].coord.x, nodes[i].coord.y));
        for w in by_column.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if nodes[lo].coord.x == nodes[hi].coord.x {
                neighbors[lo][Direction::Top.index()] = Some(hi);
                neighbors[hi][Direction::Bottom.index()] = Some(lo);
            }
        }

        let mut edges = Vec::new();
        for (i, nb) in neighbors.iter().enumerate() {
            for d in [Direction::Top, Direction::Right] {
                if let Some(j) = nb[d.index()] {
                    let key = EdgeKey::new(nodes[i].coord, nodes[j].coord);
                    edges.push(Edge { key, a: i, b: j });
                }
            }
        }
        edges.sort_by_key(|e| e.key);
        let edge_index: HashMap<EdgeKey, usize> =
            edges.iter().enumerate().map(|(i, e)| (e.key, i)).collect();

        let mut incident = vec![[None; 4]; nodes.len()];
        for (i, nb) in neighbors.iter().enumerate() {
            for d in Direction::ALL {
                if let Some(j) = nb[d.index()] {
                    let key = EdgeKey::new(nodes[i].coord, nodes[j].coord);
                    incident[i][d.index()] = Some(edge_index[&key]);
                }
            }
        }

        let mut crossings = vec![Vec::new(); edges.len()];
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                if segments_cross(&edges[i].key, &edges[j].key) {
                    crossings[i].push(j);
                    crossings[j].push(i);
                }
            }
        }

        Ok(NumberedGrid {
            k,
            nodes,
            index,
            neighbors,
            incident,
            edges,
            edge_index,
            crossings,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Same node set under a different connection bound.
    pub fn with_k(&self, k: u32) -> Result<Self, GridError> {
        if k == 0 {
            return Err(GridError::ZeroK);
        }
        let mut g = self.clone();
        g.k = k;
        Ok(g)
    }

    /// Nodes in row-major order.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, idx: usize) -> &Node {
        &self.nodes[idx]
    }

    pub fn index_of(&self, c: Coordinate) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn node_at(&self, c: Coordinate) -> Option<&Node> {
        self.index_of(c).map(|i| &self.nodes[i])
    }

    pub fn neighbor_index(&self, idx: usize, d: Direction) -> Option<usize> {
        self.neighbors[idx][d.index()]
    }

    /// The nearest node from `p` in direction `d`, if any.
    pub fn neighbor(&self, p: Coordinate, d: Direction) -> Option<&Node> {
        let i = self.index_of(p)?;
        self.neighbor_index(i, d).map(|j| &self.nodes[j])
    }

    /// Number of existing neighbors of node `idx` (the `r` of a node).
    pub fn neighbor_count(&self, idx: usize) -> usize {
        self.neighbors[idx].iter().flatten().count()
    }

    /// Edge index joining `idx` to its `d` neighbor.
    pub fn incident_edge(&self, idx: usize, d: Direction) -> Option<usize> {
        self.incident[idx][d.index()]
    }

    pub fn incident_edges(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[idx].iter().flatten().copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_index(&self, key: &EdgeKey) -> Option<usize> {
        self.edge_index.get(key).copied()
    }

    /// Edges whose segment strictly crosses edge `e`.
    pub fn crossing_edges(&self, e: usize) -> &[usize] {
        &self.crossings[e]
    }

    pub fn magnitude_sum(&self) -> u64 {
        self.nodes.iter().map(|n| u64::from(n.magnitude)).sum()
    }

    /// Inclusive bounding box `(min, max)` of all node coordinates.
    pub fn bounds(&self) -> (Coordinate, Coordinate) {
        let min_x = self.nodes.iter().map(|n| n.coord.x).min().unwrap_or(0);
        let max_x = self.nodes.iter().map(|n| n.coord.x).max().unwrap_or(0);
        let min_y = self.nodes.iter().map(|n| n.coord.y).min().unwrap_or(0);
        let max_y = self.nodes.iter().map(|n| n.coord.y).max().unwrap_or(0);
        (Coordinate::new(min_x, min_y), Coordinate::new(max_x, max_y))
    }
}
