//! Tables of configuration counts per neighbor count.

use std::fmt::Write as _;

use serde::Serialize;

use crate::words::count_configs;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub k: u32,
    /// `counts[n]` for `n` in `0..=r*k`.
    pub counts: Vec<u64>,
    pub max: u64,
    /// Every `n` attaining `max`.
    pub argmax: Vec<u32>,
    /// `⌊r·k/2⌋`.
    pub midpoint: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub r: u32,
    pub k_max: u32,
    pub rows: Vec<CountRow>,
}

pub fn count_table(r: u32, k_max: u32) -> CountTable {
    let rows = (1..=k_max)
        .map(|k| {
            let counts: Vec<u64> = (0..=r * k).map(|n| count_configs(n, r, k)).collect();
            let max = counts.iter().copied().max().unwrap_or(0);
            let argmax = (0..=r * k).filter(|&n| counts[n as usize] == max).collect();
            CountRow {
                k,
                counts,
                max,
                argmax,
                midpoint: r * k / 2,
            }
        })
        .collect();
    CountTable { r, k_max, rows }
}

impl CountTable {
    /// Entry at row `k`, column `n`; `None` past the row's end.
    pub fn get(&self, k: u32, n: u32) -> Option<u64> {
        let row = self.rows.get(k.checked_sub(1)? as usize)?;
        row.counts.get(n as usize).copied()
    }

    fn columns(&self) -> u32 {
        self.r * self.k_max + 1
    }

    fn argmax_text(row: &CountRow) -> String {
        row.argmax
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join("/")
    }

    /// Fixed-width text. Each row ends with its maximum, where it is
    /// attained, and the midpoint `⌊r·k/2⌋`.
    pub fn to_text(&self) -> String {
        let widest = self
            .rows
            .iter()
            .flat_map(|r| r.counts.iter())
            .map(|c| c.to_string().len())
            .max()
            .unwrap_or(1);
        let w = widest.max((self.columns() - 1).to_string().len());
        let kw = self.k_max.to_string().len().max(1);
        let mut s = format!("configurations over r = {} neighbors\n", self.r);
        let _ = write!(s, "{:>kw$} |", "k");
        for n in 0..self.columns() {
            let _ = write!(s, " {n:>w$}");
        }
        s.push_str(" | max @ n | mid\n");
        for row in &self.rows {
            let _ = write!(s, "{:>kw$} |", row.k);
            for n in 0..self.columns() as usize {
                match row.counts.get(n) {
                    Some(c) => {
                        let _ = write!(s, " {c:>w$}");
                    }
                    None => {
                        let _ = write!(s, " {:>w$}", "");
                    }
                }
            }
            let _ = writeln!(
                s,
                " | {} @ {} | {}",
                row.max,
                Self::argmax_text(row),
                row.midpoint
            );
        }
        s
    }

    /// CSV with header `k,0,1,…,max,argmax,mid`; entries past `r·k` are empty.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k");
        for n in 0..self.columns() {
            let _ = write!(s, ",{n}");
        }
        s.push_str(",max,argmax,mid\n");
        for row in &self.rows {
            let _ = write!(s, "{}", row.k);
            for n in 0..self.columns() as usize {
                s.push(',');
                if let Some(c) = row.counts.get(n) {
                    let _ = write!(s, "{c}");
                }
            }
            let _ = writeln!(
                s,
                ",{},{},{}",
                row.max,
                Self::argmax_text(row),
                row.midpoint
            );
        }
        s
    }
}
