//! Exhaustive ground truth: backtracking enumeration of every solution,
//! minimal-k sweeps, instance generation and the search for grids that have
//! a unique solution yet give propagation nothing to start from.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::grid::{Coordinate, EdgeKey, Node, NumberedGrid};
use crate::par::{self, Exec};
use crate::screens::screen;
use crate::state::{ConnectionMap, PuzzleState};
use crate::tau::{run_tau, TauStatus};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolutionSet {
    /// Solutions in ascending order of their multiplicity vectors over the
    /// canonical edge order.
    pub solutions: Vec<ConnectionMap>,
    /// False when `limit` cut the search short.
    pub exhausted: bool,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// Exactly one solution and the search was complete.
    pub fn is_unique(&self) -> bool {
        self.exhausted && self.solutions.len() == 1
    }
}

pub fn enumerate_solutions(grid: &NumberedGrid, limit: Option<usize>) -> SolutionSet {
    enumerate_solutions_with(grid, limit, Exec::default())
}

/// Depth-first assignment of multiplicities `0..=k` to edges in canonical
/// order. A node's residual must stay coverable by its undecided, unblocked
/// edges; positive edges block every edge they cross; connectivity is checked
/// at the leaves. The result does not depend on `exec`.
pub fn enumerate_solutions_with(
    grid: &NumberedGrid,
    limit: Option<usize>,
    exec: Exec,
) -> SolutionSet {
    // Search for one extra solution so `exhausted` is exact.
    let cap = limit.map(|l| l.saturating_add(1));
    let root = Search::new(grid);
    let prefixes = root.prefixes(FAN_OUT_DEPTH.min(grid.edges().len()));
    let batches = par::map(exec, &prefixes, |prefix| {
        let mut s = root.clone();
        s.replay(prefix);
        s.cap = cap;
        s.dfs(prefix.len());
        s.found
    });
    let mut solutions: Vec<Vec<u32>> = Vec::new();
    for batch in batches {
        solutions.extend(batch);
        if cap.is_some_and(|c| solutions.len() >= c) {
            break;
        }
    }
    let exhausted = match limit {
        Some(l) if solutions.len() > l => {
            solutions.truncate(l);
            false
        }
        _ => true,
    };
    let solutions = solutions
        .into_iter()
        .map(|mult| {
            grid.edges()
                .iter()
                .zip(mult)
                .filter(|&(_, m)| m > 0)
                .map(|(e, m)| (e.key, m))
                .collect()
        })
        .collect();
    SolutionSet {
        solutions,
        exhausted,
    }
}

const FAN_OUT_DEPTH: usize = 3;

#[derive(Clone)]
struct Search<'g> {
    grid: &'g NumberedGrid,
    k: u32,
    mult: Vec<u32>,
    residual: Vec<u32>,
    blocked: Vec<u32>,
    found: Vec<Vec<u32>>,
    cap: Option<usize>,
}

impl<'g> Search<'g> {
    fn new(grid: &'g NumberedGrid) -> Self {
        Search {
            grid,
            k: grid.k(),
            mult: vec![0; grid.edges().len()],
            residual: grid.nodes().iter().map(|n| n.magnitude).collect(),
            blocked: vec![0; grid.edges().len()],
            found: Vec::new(),
            cap: None,
        }
    }

    fn max_at(&self, e: usize) -> u32 {
        if self.blocked[e] > 0 {
            return 0;
        }
        let edge = self.grid.edge(e);
        self.k.min(self.residual[edge.a]).min(self.residual[edge.b])
    }

    fn assign(&mut self, e: usize, m: u32) {
        let edge = *self.grid.edge(e);
        self.mult[e] = m;
        if m > 0 {
            self.residual[edge.a] -= m;
            self.residual[edge.b] -= m;
            for &o in self.grid.crossing_edges(e) {
                self.blocked[o] += 1;
            }
        }
    }

    fn unassign(&mut self, e: usize) {
        let m = self.mult[e];
        if m > 0 {
            let edge = *self.grid.edge(e);
            self.residual[edge.a] += m;
            self.residual[edge.b] += m;
            for &o in self.grid.crossing_edges(e) {
                self.blocked[o] -= 1;
            }
        }
        self.mult[e] = 0;
    }

    /// Residual of `node` can still be met by edges after position `pos`.
    fn coverable(&self, node: usize, pos: usize) -> bool {
        let need = self.residual[node];
        if need == 0 {
            return true;
        }
        let mut room = 0;
        for f in self.grid.incident_edges(node) {
            if f > pos && self.blocked[f] == 0 {
                let other = self.grid.edge(f).other(node);
                room += self.k.min(self.residual[other]);
                if room >= need {
                    return true;
                }
            }
        }
        false
    }

    fn consistent_after(&self, e: usize) -> bool {
        let edge = self.grid.edge(e);
        if !self.coverable(edge.a, e) || !self.coverable(edge.b, e) {
            return false;
        }
        if self.mult[e] > 0 {
            for &o in self.grid.crossing_edges(e) {
                if o > e {
                    let f = self.grid.edge(o);
                    if !self.coverable(f.a, e) || !self.coverable(f.b, e) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn full(&self) -> bool {
        self.cap.is_some_and(|c| self.found.len() >= c)
    }

    fn dfs(&mut self, pos: usize) {
        if self.full() {
            return;
        }
        if pos == self.mult.len() {
            if self.residual.iter().all(|&r| r == 0) && self.connected() {
                self.found.push(self.mult.clone());
            }
            return;
        }
        for m in 0..=self.max_at(pos) {
            self.assign(pos, m);
            if self.consistent_after(pos) {
                self.dfs(pos + 1);
            }
            self.unassign(pos);
            if self.full() {
                return;
            }
        }
    }

    fn connected(&self) -> bool {
        let n = self.residual.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for f in self.grid.incident_edges(v) {
                if self.mult[f] > 0 {
                    let w = self.grid.edge(f).other(v);
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
        }
        count == n
    }

    /// Consistent assignments of the first `depth` edges, in ascending order.
    fn prefixes(&self, depth: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut s = self.clone();
        let mut cur = Vec::with_capacity(depth);
        s.collect_prefixes(0, depth, &mut cur, &mut out);
        out
    }

    fn collect_prefixes(
        &mut self,
        pos: usize,
        depth: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pos == depth {
            out.push(cur.clone());
            return;
        }
        for m in 0..=self.max_at(pos) {
            self.assign(pos, m);
            if self.consistent_after(pos) {
                cur.push(m);
                self.collect_prefixes(pos + 1, depth, cur, out);
                cur.pop();
            }
            self.unassign(pos);
        }
    }

    fn replay(&mut self, prefix: &[u32]) {
        for (e, &m) in prefix.iter().enumerate() {
            self.assign(e, m);
        }
    }
}

/// Smallest `k' <= k_max` for which the grid's nodes admit a solution.
pub fn min_solvable_k(grid: &NumberedGrid, k_max: u32) -> Option<u32> {
    // Solvable at k implies solvable at every larger k, so a linear scan
    // from 1 finds the threshold.
    (1..=k_max).find(|&k| {
        let g = grid.with_k(k).expect("k >= 1");
        !screen(&g).is_unsolvable() && !enumerate_solutions(&g, Some(1)).is_empty()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenMode {
    /// Random magnitudes; may or may not be solvable.
    Random,
    /// Magnitudes read off a random connected non-crossing multigraph.
    SolvableByConstruction,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenSpec {
    pub seed: u64,
    pub width: u32,
    pub height: u32,
    pub node_density: f64,
    pub k: u32,
    pub mode: GenMode,
    pub symmetry: Symmetry,
}

/// Placement symmetry. Under [`Symmetry::QuarterTurn`] cells, magnitudes and
/// constructed edges are chosen per orbit of the 90° rotation of a square
/// lattice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    #[default]
    None,
    QuarterTurn,
}

impl GenSpec {
    pub fn with_seed(&self, seed: u64) -> GenSpec {
        GenSpec {
            seed,
            ..self.clone()
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("could not place at least two connected nodes: {0}")]
    GenerationFailure(String),
}

const PLACEMENT_ATTEMPTS: usize = 64;
const EXTRA_EDGE_PROBABILITY: f64 = 0.35;

/// Builds a grid from `spec`, deterministically in `spec.seed`.
pub fn generate(spec: &GenSpec) -> Result<NumberedGrid, GenError> {
    Ok(generate_with_witness(spec)?.0)
}

/// Like [`generate`], also returning the construction's own solution in
/// [`GenMode::SolvableByConstruction`] mode.
pub fn generate_with_witness(
    spec: &GenSpec,
) -> Result<(NumberedGrid, Option<ConnectionMap>), GenError> {
    if spec.width == 0 || spec.height == 0 {
        return Err(GenError::InvalidSpec(
            "width and height must be positive".into(),
        ));
    }
    if !(spec.node_density > 0.0 && spec.node_density <= 1.0) {
        return Err(GenError::InvalidSpec(format!(
            "density {} outside (0, 1]",
            spec.node_density
        )));
    }
    if spec.k == 0 {
        return Err(GenError::InvalidSpec("k must be positive".into()));
    }
    if spec.symmetry == Symmetry::QuarterTurn && spec.width != spec.height {
        return Err(GenError::InvalidSpec(format!(
            "quarter-turn symmetry needs a square lattice, got {}x{}",
            spec.width, spec.height
        )));
    }
    if u64::from(spec.width) * u64::from(spec.height) < 2 {
        return Err(GenError::GenerationFailure(format!(
            "a {}x{} lattice has fewer than two cells",
            spec.width, spec.height
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..PLACEMENT_ATTEMPTS {
        let cells = place(spec, &mut rng);
        if cells.len() < 2 {
            continue;
        }
        let skeleton = NumberedGrid::new(spec.k, cells.iter().map(|&(x, y)| Node::new(x, y, 1)))
            .expect("distinct cells");
        let built = match (spec.mode, spec.symmetry) {
            (GenMode::Random, _) => Some((random_magnitudes(&skeleton, spec, &mut rng), None)),
            (GenMode::SolvableByConstruction, Symmetry::None) => {
                constructed(&skeleton, spec.k, &mut rng).map(|(g, w)| (g, Some(w)))
            }
            (GenMode::SolvableByConstruction, Symmetry::QuarterTurn) => {
                constructed_symmetric(&skeleton, spec, &mut rng).map(|(g, w)| (g, Some(w)))
            }
        };
        if let Some(out) = built {
            return Ok(out);
        }
    }
    Err(GenError::GenerationFailure(format!(
        "{PLACEMENT_ATTEMPTS} placements at density {} left fewer than two usable nodes",
        spec.node_density
    )))
}

fn place(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let mut cells = Vec::new();
    if spec.symmetry == Symmetry::QuarterTurn {
        for orbit in cell_orbits(spec.width) {
            if rng.gen_bool(spec.node_density) {
                cells.extend(orbit);
            }
        }
        cells.sort_by_key(|&(x, y)| (y, x));
        return cells;
    }
    for y in 0..spec.height {
        for x in 0..spec.width {
            if rng.gen_bool(spec.node_density) {
                cells.push((x, y));
            }
        }
    }
    cells
}

fn rotate(c: Coordinate, side: u32) -> Coordinate {
    Coordinate::new(c.y, side - 1 - c.x)
}

/// Orbits of the quarter turn on a `side` x `side` lattice, in row-major
/// order of their first cell.
fn cell_orbits(side: u32) -> Vec<Vec<(u32, u32)>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for y in 0..side {
        for x in 0..side {
            let mut c = Coordinate::new(x, y);
            if seen.contains(&c) {
                continue;
            }
            let mut orbit = Vec::new();
            while seen.insert(c) {
                orbit.push((c.x, c.y));
                c = rotate(c, side);
            }
            out.push(orbit);
        }
    }
    out
}

fn random_magnitudes(
    skeleton: &NumberedGrid,
    spec: &GenSpec,
    rng: &mut ChaCha8Rng,
) -> NumberedGrid {
    let k = spec.k;
    if spec.symmetry == Symmetry::QuarterTurn {
        let side = spec.width;
        let mut mags = vec![0u32; skeleton.len()];
        for i in 0..skeleton.len() {
            if mags[i] != 0 {
                continue;
            }
            let r = skeleton.neighbor_count(i) as u32;
            let m = rng.gen_range(1..=(r * k).clamp(1, 4 * k));
            let mut c = skeleton.node(i).coord;
            while let Some(j) = skeleton.index_of(c).filter(|&j| mags[j] == 0) {
                mags[j] = m;
                c = rotate(c, side);
            }
        }
        let nodes = skeleton.nodes().iter().zip(mags).map(|(n, m)| Node {
            coord: n.coord,
            magnitude: m,
        });
        return NumberedGrid::new(k, nodes).expect("valid magnitudes");
    }
    let nodes: Vec<Node> = skeleton
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let r = skeleton.neighbor_count(i) as u32;
            let hi = (r * k).clamp(1, 4 * k);
            Node {
                coord: n.coord,
                magnitude: rng.gen_range(1..=hi),
            }
        })
        .collect();
    NumberedGrid::new(k, nodes).expect("valid magnitudes")
}

fn constructed(
    skeleton: &NumberedGrid,
    k: u32,
    rng: &mut ChaCha8Rng,
) -> Option<(NumberedGrid, ConnectionMap)> {
    let n = skeleton.len();
    let mut order: Vec<usize> = (0..skeleton.edges().len()).collect();
    order.shuffle(rng);

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut chosen = vec![false; skeleton.edges().len()];
    let crosses_chosen =
        |e: usize, chosen: &[bool]| skeleton.crossing_edges(e).iter().any(|&o| chosen[o]);
    for &e in &order {
        let edge = skeleton.edge(e);
        let (ra, rb) = (find(&mut parent, edge.a), find(&mut parent, edge.b));
        if ra != rb && !crosses_chosen(e, &chosen) {
            parent[ra.max(rb)] = ra.min(rb);
            chosen[e] = true;
        }
    }
    // Keep the largest tree; ties go to the one holding the lowest index.
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut size = vec![0usize; n];
    for &r in &roots {
        size[r] += 1;
    }
    let keep_root = (0..n).max_by_key(|&r| (size[r], std::cmp::Reverse(r)))?;
    if size[keep_root] < 2 {
        return None;
    }
    let kept = |i: usize| roots[i] == keep_root;
    for &e in &order {
        let edge = skeleton.edge(e);
        if !chosen[e]
            && kept(edge.a)
            && !crosses_chosen(e, &chosen)
            && rng.gen_bool(EXTRA_EDGE_PROBABILITY)
        {
            chosen[e] = true;
        }
    }
    let mut degree = vec![0u32; n];
    let mut witness = ConnectionMap::new();
    for (e, edge) in skeleton.edges().iter().enumerate() {
        if chosen[e] && kept(edge.a) {
            let m = rng.gen_range(1..=k);
            degree[edge.a] += m;
            degree[edge.b] += m;
            witness.insert(edge.key, m);
        }
    }
    let nodes: Vec<Node> = (0..n)
        .filter(|&i| kept(i))
        .map(|i| Node {
            coord: skeleton.node(i).coord,
            magnitude: degree[i],
        })
        .collect();
    let grid = NumberedGrid::new(k, nodes).expect("kept nodes have positive degree");
    debug_assert!(PuzzleState::from_connections(grid.clone(), &witness)
        .map(|s| s.is_solved().is_solved())
        .unwrap_or(false));
    Some((grid, witness))
}

/// Picks whole edge orbits in random order, each with probability one half
/// when it crosses nothing already picked. Fails unless every node is used
/// and the result is connected.
fn constructed_symmetric(
    skeleton: &NumberedGrid,
    spec: &GenSpec,
    rng: &mut ChaCha8Rng,
) -> Option<(NumberedGrid, ConnectionMap)> {
    let (k, side) = (spec.k, spec.width);
    let edge_count = skeleton.edges().len();
    let mut seen = vec![false; edge_count];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for e in 0..edge_count {
        if seen[e] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut key = skeleton.edge(e).key;
        while let Some(i) = skeleton.edge_index(&key).filter(|&i| !seen[i]) {
            seen[i] = true;
            orbit.push(i);
            key = EdgeKey::new(rotate(key.a, side), rotate(key.b, side));
        }
        orbits.push(orbit);
    }
    orbits.shuffle(rng);
    let mut chosen = vec![0u32; edge_count];
    for orbit in &orbits {
        if !rng.gen_bool(0.5) {
            continue;
        }
        let clear = orbit
            .iter()
            .all(|&e| skeleton.crossing_edges(e).iter().all(|&o| chosen[o] == 0));
        if clear {
            let m = rng.gen_range(1..=k);
            for &e in orbit {
                chosen[e] = m;
            }
        }
    }
    let mut degree = vec![0u32; skeleton.len()];
    let mut witness = ConnectionMap::new();
    for (e, edge) in skeleton.edges().iter().enumerate() {
        if chosen[e] > 0 {
            degree[edge.a] += chosen[e];
            degree[edge.b] += chosen[e];
            witness.insert(edge.key, chosen[e]);
        }
    }
    if degree.contains(&0) {
        return None;
    }
    let nodes = skeleton.nodes().iter().zip(&degree).map(|(n, &d)| Node {
        coord: n.coord,
        magnitude: d,
    });
    let grid = NumberedGrid::new(k, nodes).expect("positive degrees");
    let state = PuzzleState::from_connections(grid.clone(), &witness).ok()?;
    state.is_solved().is_solved().then_some((grid, witness))
}

/// A grid with a unique solution on which propagation draws nothing.
#[derive(Clone, Debug)]
pub struct StallWitness {
    pub grid: NumberedGrid,
    pub seed: u64,
    pub candidates_tried: u64,
    pub solution: ConnectionMap,
}

/// Tries up to `budget` generated grids, seeds `spec.seed, spec.seed + 1, …`,
/// and returns the first whose propagation run stalls with an empty trace
/// while the oracle finds exactly one solution.
pub fn find_stall_witness(budget: u64, spec: &GenSpec) -> Option<StallWitness> {
    find_stall_witness_with(budget, spec, Exec::default())
}

pub fn find_stall_witness_with(budget: u64, spec: &GenSpec, exec: Exec) -> Option<StallWitness> {
    let n = usize::try_from(budget).unwrap_or(usize::MAX);
    let hit = par::find_first(exec, n, |i| {
        let seed = spec.seed.wrapping_add(i as u64);
        let grid = generate(&spec.with_seed(seed)).ok()?;
        is_stall_witness(&grid).map(|solution| (grid, seed, solution))
    })?;
    let (i, (grid, seed, solution)) = hit;
    Some(StallWitness {
        grid,
        seed,
        candidates_tried: i as u64 + 1,
        solution,
    })
}

/// The unique solution of `grid` if propagation stalls on it immediately.
pub fn is_stall_witness(grid: &NumberedGrid) -> Option<ConnectionMap> {
    let out = run_tau(grid);
    if out.status != TauStatus::Stalled || !out.trace.is_empty() {
        return None;
    }
    let set = enumerate_solutions_with(grid, Some(1), Exec::Sequential);
    if set.is_unique() {
        set.solutions.into_iter().next()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(k: u32, nodes: &[(u32, u32, u32)]) -> NumberedGrid {
        NumberedGrid::new(k, nodes.iter().map(|&(x, y, n)| Node::new(x, y, n))).unwrap()
    }

    fn two_by_three() -> NumberedGrid {
        grid(
            3,
            &[
                (0, 0, 3),
                (1, 0, 4),
                (2, 0, 3),
                (0, 1, 3),
                (1, 1, 4),
                (2, 1, 3),
            ],
        )
    }

    #[test]
    fn small_counts() {
        assert_eq!(
            enumerate_solutions(&grid(1, &[(0, 0, 1), (1, 0, 1)]), None).len(),
            1
        );
        let chain = enumerate_solutions(&grid(1, &[(0, 0, 1), (1, 0, 2), (2, 0, 1)]), None);
        assert_eq!(chain.len(), 1);
        assert_eq!(chain.solutions[0].len(), 2);
        assert!(enumerate_solutions(&grid(1, &[(0, 0, 2), (1, 0, 2)]), None).is_empty());
    }

    #[test]
    fn square_of_twos_has_only_the_cycle() {
        let g = grid(2, &[(0, 0, 2), (1, 0, 2), (0, 1, 2), (1, 1, 2)]);
        let set = enumerate_solutions(&g, None);
        assert!(set.is_unique());
        assert!(set.solutions[0].values().all(|&m| m == 1));
        assert_eq!(set.solutions[0].len(), 4);
    }

    #[test]
    fn crossing_pairs_exclude_each_other() {
        // Plus shape without a center plus a hub below: both long edges
        // cannot coexist.
        let g = grid(1, &[(0, 1, 1), (2, 1, 1), (1, 0, 1), (1, 2, 1)]);
        // Two disjoint pairs can never be connected.
        assert!(enumerate_solutions(&g, None).is_empty());
    }

    #[test]
    fn limit_marks_truncation() {
        let g = two_by_three();
        let all = enumerate_solutions(&g, None);
        assert!(all.exhausted);
        assert!(all.len() > 2);
        let first = enumerate_solutions(&g, Some(2));
        assert_eq!(first.len(), 2);
        assert!(!first.exhausted);
        assert_eq!(first.solutions[..], all.solutions[..2]);
        let everything = enumerate_solutions(&g, Some(all.len()));
        assert!(everything.exhausted);
    }

    #[test]
    fn min_k_examples() {
        assert_eq!(
            min_solvable_k(&grid(1, &[(0, 0, 2), (1, 0, 2)]), 4),
            Some(2)
        );
        assert_eq!(
            min_solvable_k(&grid(3, &[(0, 0, 1), (1, 0, 1)]), 4),
            Some(1)
        );
        assert_eq!(min_solvable_k(&grid(1, &[(0, 0, 1), (1, 0, 2)]), 4), None);
    }

    #[test]
    fn generation_is_deterministic() {
        for mode in [GenMode::Random, GenMode::SolvableByConstruction] {
            let spec = GenSpec {
                seed: 42,
                width: 4,
                height: 4,
                node_density: 0.6,
                k: 2,
                mode,
                symmetry: Symmetry::None,
            };
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        }
    }

    #[test]
    fn constructed_grids_are_solvable() {
        for seed in 0..40 {
            let spec = GenSpec {
                seed,
                width: 4,
                height: 4,
                node_density: 0.5,
                k: 1 + (seed % 3) as u32,
                mode: GenMode::SolvableByConstruction,
                symmetry: Symmetry::None,
            };
            let (g, witness) = generate_with_witness(&spec).unwrap();
            let witness = witness.unwrap();
            let state = PuzzleState::from_connections(g.clone(), &witness).unwrap();
            assert!(state.is_solved().is_solved());
            let set = enumerate_solutions(&g, None);
            assert!(set.solutions.contains(&witness));
        }
    }

    #[test]
    fn quarter_turn_grids_are_rotation_invariant() {
        for seed in 0..30 {
            for mode in [GenMode::Random, GenMode::SolvableByConstruction] {
                let spec = GenSpec {
                    seed,
                    width: 5,
                    height: 5,
                    node_density: 0.6,
                    k: 2,
                    mode,
                    symmetry: Symmetry::QuarterTurn,
                };
                let Ok((g, witness)) = generate_with_witness(&spec) else {
                    continue;
                };
                for n in g.nodes() {
                    let turned = g.index_of(rotate(n.coord, 5)).map(|j| g.node(j).magnitude);
                    assert_eq!(turned, Some(n.magnitude), "seed {seed}");
                }
                if let Some(w) = witness {
                    assert!(PuzzleState::from_connections(g.clone(), &w)
                        .unwrap()
                        .is_solved()
                        .is_solved());
                }
            }
        }
        let mut spec = GenSpec {
            seed: 0,
            width: 4,
            height: 5,
            node_density: 0.5,
            k: 1,
            mode: GenMode::Random,
            symmetry: Symmetry::QuarterTurn,
        };
        assert!(matches!(generate(&spec), Err(GenError::InvalidSpec(_))));
        spec.height = 4;
        assert!(generate(&spec).is_ok());
    }

    #[test]
    fn generator_errors() {
        let mut spec = GenSpec {
            seed: 1,
            width: 1,
            height: 1,
            node_density: 1.0,
            k: 1,
            mode: GenMode::Random,
            symmetry: Symmetry::None,
        };
        assert!(matches!(
            generate(&spec),
            Err(GenError::GenerationFailure(_))
        ));
        spec.width = 3;
        spec.node_density = 0.0;
        assert!(matches!(generate(&spec), Err(GenError::InvalidSpec(_))));
    }

    #[test]
    fn zero_budget_finds_nothing() {
        let spec = GenSpec {
            seed: 0,
            width: 3,
            height: 3,
            node_density: 0.7,
            k: 2,
            mode: GenMode::SolvableByConstruction,
            symmetry: Symmetry::None,
        };
        assert!(find_stall_witness(0, &spec).is_none());
    }

    #[test]
    fn square_is_not_a_stall_witness() {
        let g = grid(2, &[(0, 0, 2), (1, 0, 2), (0, 1, 2), (1, 1, 2)]);
        assert!(is_stall_witness(&g).is_none());
    }

    #[test]
    fn exec_modes_agree() {
        let g = two_by_three();
        let a = enumerate_solutions_with(&g, None, Exec::Sequential);
        let b = enumerate_solutions_with(&g, None, Exec::Parallel);
        assert_eq!(a, b);
        assert!(a.len() > 1);
        let c = enumerate_solutions_with(&g, Some(3), Exec::Parallel);
        assert_eq!(c.solutions[..], a.solutions[..3]);
    }

    #[test]
    fn solutions_are_sorted_and_valid() {
        let g = two_by_three();
        let set = enumerate_solutions(&g, None);
        let vectors: Vec<Vec<u32>> = set
            .solutions
            .iter()
            .map(|s| {
                g.edges()
                    .iter()
                    .map(|e| s.get(&e.key).copied().unwrap_or(0))
                    .collect()
            })
            .collect();
        assert!(vectors.windows(2).all(|w| w[0] < w[1]));
        for s in &set.solutions {
            let state = PuzzleState::from_connections(g.clone(), s).unwrap();
            assert!(state.is_solved().is_solved());
        }
    }
}
