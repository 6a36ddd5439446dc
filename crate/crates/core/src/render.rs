//! ASCII board rendering.
//!
//! Rows are drawn top to bottom by decreasing `y`. Only rows and columns that
//! hold a node are drawn, so long-range neighbors sit next to each other.
//! A cell shows the magnitude, followed by the residual in parentheses while
//! it is non-zero. Links: `-` / `=` horizontally, `|` / `‖` vertically, and a
//! `<m>` tag on a plain line for multiplicities above two.

use crate::grid::NumberedGrid;
use crate::state::PuzzleState;

struct Canvas {
    rows: Vec<Vec<char>>,
}

impl Canvas {
    fn new(height: usize, width: usize) -> Self {
        Canvas {
            rows: vec![vec![' '; width]; height],
        }
    }

    fn put(&mut self, row: usize, col: usize, s: &str) {
        for (i, ch) in s.chars().enumerate() {
            self.rows[row][col + i] = ch;
        }
    }

    fn finish(self) -> String {
        let mut out = String::new();
        for row in self.rows {
            let line: String = row.into_iter().collect();
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

fn label(state: &PuzzleState, idx: usize) -> String {
    let n = state.grid().node(idx).magnitude;
    match state.residual_of(idx) {
        0 => n.to_string(),
        r => format!("{n}({r})"),
    }
}

fn tag(m: u32) -> String {
    format!("<{m}>")
}

pub fn render_board(state: &PuzzleState) -> String {
    let grid: &NumberedGrid = state.grid();
    let mut xs: Vec<u32> = grid.nodes().iter().map(|n| n.coord.x).collect();
    let mut ys: Vec<u32> = grid.nodes().iter().map(|n| n.coord.y).collect();
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable_by(|a, b| b.cmp(a));
    ys.dedup();
    let col_of = |x: u32| xs.binary_search(&x).expect("x of a node");
    let row_of = |y: u32| ys.iter().position(|&v| v == y).expect("y of a node");

    let labels: Vec<String> = (0..grid.len()).map(|i| label(state, i)).collect();
    let widest_tag = state
        .multiplicities()
        .iter()
        .copied()
        .filter(|&m| m > 2)
        .map(|m| tag(m).len())
        .max()
        .unwrap_or(0);
    let cell = labels
        .iter()
        .map(String::len)
        .max()
        .unwrap_or(1)
        .max(widest_tag)
        .max(3);
    let gap = widest_tag.max(3);
    let margin = ys
        .iter()
        .chain(&xs)
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1)
        + 1;

    let height = 2 * ys.len();
    let width = margin + xs.len() * (cell + gap);
    let mut c = Canvas::new(height, width);
    let cell_start = |j: usize| margin + j * (cell + gap);
    let centre = |j: usize| cell_start(j) + cell / 2;

    for (i, y) in ys.iter().enumerate() {
        c.put(2 * i, 0, &format!("{y:>w$}", w = margin - 1));
    }
    let bottom = height - 1;
    for (j, x) in xs.iter().enumerate() {
        let s = x.to_string();
        c.put(bottom, centre(j) - (s.len() - 1) / 2, &s);
    }

    // Label spans, so links can run right up to the text.
    let mut span = vec![(0usize, 0usize); grid.len()];
    for (idx, node) in grid.nodes().iter().enumerate() {
        let (i, j) = (row_of(node.coord.y), col_of(node.coord.x));
        let len = labels[idx].len();
        let start = cell_start(j) + (cell - len) / 2;
        c.put(2 * i, start, &labels[idx]);
        span[idx] = (start, start + len);
    }

    for (e, edge) in grid.edges().iter().enumerate() {
        let m = state.multiplicity_at(e);
        if m == 0 {
            continue;
        }
        if edge.key.is_horizontal() {
            let row = 2 * row_of(edge.key.a.y);
            let (from, to) = (span[edge.a].1, span[edge.b].0);
            let glyph = if m == 2 { '=' } else { '-' };
            for col in from..to {
                c.rows[row][col] = glyph;
            }
            if m > 2 {
                let t = tag(m);
                let j = col_of(edge.key.a.x);
                c.put(row, cell_start(j) + cell + (gap - t.len()) / 2, &t);
            }
        } else {
            let col = centre(col_of(edge.key.a.x));
            let (top, low) = (row_of(edge.key.b.y), row_of(edge.key.a.y));
            let glyph = if m == 2 { '‖' } else { '|' };
            for row in 2 * top + 1..2 * low {
                c.rows[row][col] = glyph;
            }
            if m > 2 {
                let t = tag(m);
                c.put(2 * top + 1, col - (t.len() - 1) / 2, &t);
            }
        }
    }
    c.finish()
}
