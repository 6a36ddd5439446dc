//! Connection configurations for a single node.
//!
//! A configuration word says how many of a node's connections go to each of
//! its four neighbors. Word order never matters, so a word is stored as a
//! count vector `(top, right, bottom, left)` and printed as the sorted
//! direction digits, e.g. `(2,1,0,0)` prints as `112`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::grid::{Coordinate, Direction};
use crate::state::{PuzzleState, StateError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub struct ConfigWord {
    counts: [u32; 4],
}

impl ConfigWord {
    pub const fn new(counts: [u32; 4]) -> Self {
        ConfigWord { counts }
    }

    pub const fn zero() -> Self {
        ConfigWord { counts: [0; 4] }
    }

    pub fn single(d: Direction, m: u32) -> Self {
        let mut counts = [0; 4];
        counts[d.index()] = m;
        ConfigWord { counts }
    }

    pub fn counts(&self) -> [u32; 4] {
        self.counts
    }

    pub fn count(&self, d: Direction) -> u32 {
        self.counts[d.index()]
    }

    /// Total number of connections, `||w||`.
    pub fn length(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.counts == [0; 4]
    }

    /// Componentwise minimum: the connections two words share.
    pub fn meet(&self, other: &ConfigWord) -> ConfigWord {
        let mut counts = [0; 4];
        for (i, c) in counts.iter_mut().enumerate() {
            *c = self.counts[i].min(other.counts[i]);
        }
        ConfigWord { counts }
    }

    /// True when every component of `self` is at most the one in `other`.
    pub fn is_dominated_by(&self, other: &ConfigWord) -> bool {
        self.counts.iter().zip(other.counts).all(|(&a, b)| a <= b)
    }

    pub fn directions(&self) -> impl Iterator<Item = (Direction, u32)> + '_ {
        Direction::ALL
            .into_iter()
            .map(|d| (d, self.count(d)))
            .filter(|&(_, c)| c > 0)
    }
}

impl fmt::Display for ConfigWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "-");
        }
        for d in Direction::ALL {
            for _ in 0..self.count(d) {
                write!(f, "{}", d.code())?;
            }
        }
        Ok(())
    }
}

impl From<ConfigWord> for String {
    fn from(w: ConfigWord) -> String {
        w.to_string()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid configuration word {0:?}: expected digits 1-4 or '-'")]
pub struct ParseWordError(pub String);

impl FromStr for ConfigWord {
    type Err = ParseWordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" {
            return Ok(ConfigWord::zero());
        }
        if s.is_empty() {
            return Err(ParseWordError(s.to_string()));
        }
        let mut counts = [0; 4];
        for ch in s.chars() {
            let d = ch
                .to_digit(10)
                .and_then(|v| Direction::from_code(v as u8))
                .ok_or_else(|| ParseWordError(s.to_string()))?;
            counts[d.index()] += 1;
        }
        Ok(ConfigWord { counts })
    }
}

/// Deduplicated words in a fixed order: ascending by printed form
/// (`11 < 12 < … < 44`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordSet {
    words: Vec<ConfigWord>,
}

impl WordSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ConfigWord> {
        self.words.iter()
    }

    pub fn as_slice(&self) -> &[ConfigWord] {
        &self.words
    }

    pub fn contains(&self, w: &ConfigWord) -> bool {
        self.words.contains(w)
    }

    /// Componentwise minimum over all words; `None` for an empty set.
    pub fn meet(&self) -> Option<ConfigWord> {
        let mut it = self.words.iter();
        let first = *it.next()?;
        Some(it.fold(first, |acc, w| acc.meet(w)))
    }
}

impl<'a> IntoIterator for &'a WordSet {
    type Item = &'a ConfigWord;
    type IntoIter = std::slice::Iter<'a, ConfigWord>;

    fn into_iter(self) -> Self::IntoIter {
        self.words.iter()
    }
}

impl FromIterator<ConfigWord> for WordSet {
    fn from_iter<I: IntoIterator<Item = ConfigWord>>(iter: I) -> Self {
        let mut words: Vec<ConfigWord> = iter.into_iter().collect();
        // Descending count vectors give ascending printed order for a fixed length.
        words.sort_by(|a, b| (a.length(), b.counts).cmp(&(b.length(), a.counts)));
        words.dedup();
        WordSet { words }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordsError {
    #[error("no configuration of {n} connections fits four directions with k = {k}")]
    EmptyResult { n: u32, k: u32 },
    #[error("magnitude and k must both be at least 1 (got n = {n}, k = {k})")]
    InvalidInput { n: u32, k: u32 },
    #[error("no node at {0}")]
    UnknownNode(Coordinate),
    #[error("node at {0} is already complete")]
    NodeComplete(Coordinate),
}

/// Every way to spread `n` connections over four directions with at most `k`
/// per direction, ignoring the surrounding grid.
pub fn enumerate_phi_k(n: u32, k: u32) -> Result<WordSet, WordsError> {
    if n == 0 || k == 0 {
        return Err(WordsError::InvalidInput { n, k });
    }
    if u64::from(n) > 4 * u64::from(k) {
        return Err(WordsError::EmptyResult { n, k });
    }
    let mut words = Vec::new();
    let mut counts = [0u32; 4];
    fill(0, n, k, &mut counts, &mut words);
    Ok(WordSet { words })
}

// Emits count vectors in descending lexicographic order, which is the
// ascending order of their printed form.
fn fill(slot: usize, left: u32, k: u32, counts: &mut [u32; 4], out: &mut Vec<ConfigWord>) {
    if slot == 3 {
        if left <= k {
            counts[3] = left;
            out.push(ConfigWord::new(*counts));
        }
        return;
    }
    let remaining_slots = (3 - slot) as u32;
    let hi = left.min(k);
    let lo = left.saturating_sub(remaining_slots * k);
    for c in (lo..=hi).rev() {
        counts[slot] = c;
        fill(slot + 1, left - c, k, counts, out);
    }
}

/// Number of ways to place `n` connections on `r` directions with at most `k`
/// each: the coefficient of `x^n` in `(1 + x + … + x^k)^r`.
pub fn count_configs(n: u32, r: u32, k: u32) -> u64 {
    let n = n as usize;
    let k = k as usize;
    if n > r as usize * k {
        return 0;
    }
    let mut poly = vec![0u64; n + 1];
    poly[0] = 1;
    for _ in 0..r {
        let mut next = vec![0u64; n + 1];
        for (deg, &coef) in poly.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            for add in 0..=k.min(n - deg) {
                next[deg + add] += coef;
            }
        }
        poly = next;
    }
    poly[n]
}

/// Largest count each direction can still take from node `idx` given
/// capacity, neighbor residuals and crossings with existing connections.
pub(crate) fn direction_caps(state: &PuzzleState, idx: usize) -> [u32; 4] {
    let grid = state.grid();
    let k = grid.k();
    let mut caps = [0; 4];
    for d in Direction::ALL {
        let (Some(q), Some(e)) = (grid.neighbor_index(idx, d), grid.incident_edge(idx, d)) else {
            continue;
        };
        let blocked = grid
            .crossing_edges(e)
            .iter()
            .any(|&o| state.multiplicity_at(o) > 0);
        if blocked {
            continue;
        }
        caps[d.index()] = (k - state.multiplicity_at(e)).min(state.residual_of(q));
    }
    caps
}

/// Applies `word` at node `idx` without checking the feasibility filter.
pub(crate) fn apply_word(
    state: &PuzzleState,
    idx: usize,
    word: &ConfigWord,
) -> Result<PuzzleState, StateError> {
    let mut next = state.clone();
    for (d, c) in word.directions() {
        let e = state
            .grid()
            .incident_edge(idx, d)
            .ok_or(StateError::MissingNeighbor {
                node: state.grid().node(idx).coord,
                direction: d,
            })?;
        next.connect(e, c)?;
    }
    Ok(next)
}

pub(crate) fn feasible_words(state: &PuzzleState, idx: usize) -> WordSet {
    let residual = state.residual_of(idx);
    let Ok(all) = enumerate_phi_k(residual, state.grid().k()) else {
        return WordSet::default();
    };
    let caps = direction_caps(state, idx);
    all.iter()
        .filter(|w| w.counts.iter().zip(caps).all(|(&c, cap)| c <= cap))
        .filter(|w| match apply_word(state, idx, w) {
            Ok(next) => next.sealed_component().is_none() && next.starved_node().is_none(),
            Err(_) => false,
        })
        .copied()
        .collect()
}

fn resolve(state: &PuzzleState, p: Coordinate) -> Result<usize, WordsError> {
    let idx = state.grid().index_of(p).ok_or(WordsError::UnknownNode(p))?;
    if state.residual_of(idx) == 0 {
        return Err(WordsError::NodeComplete(p));
    }
    Ok(idx)
}

/// The configurations of `p` that survive capacity, crossing,
/// neighbor-residual, sealed-component and starved-node checks against the
/// current state, each with one step of lookahead.
pub fn enumerate_feasible(state: &PuzzleState, p: Coordinate) -> Result<WordSet, WordsError> {
    let idx = resolve(state, p)?;
    Ok(feasible_words(state, idx))
}

/// Guaranteed connections of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaStar {
    /// Shared by every feasible configuration; may be the zero word.
    Guaranteed(ConfigWord),
    /// No feasible configuration exists, so the state has no completion.
    Infeasible,
}

impl OmegaStar {
    pub fn word(&self) -> Option<ConfigWord> {
        match self {
            OmegaStar::Guaranteed(w) => Some(*w),
            OmegaStar::Infeasible => None,
        }
    }
}

pub(crate) fn omega_star_at(state: &PuzzleState, idx: usize) -> OmegaStar {
    match feasible_words(state, idx).meet() {
        Some(w) => OmegaStar::Guaranteed(w),
        None => OmegaStar::Infeasible,
    }
}

pub fn omega_star(state: &PuzzleState, p: Coordinate) -> Result<OmegaStar, WordsError> {
    let idx = resolve(state, p)?;
    Ok(omega_star_at(state, idx))
}
