use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{DiagramError, PlanarDiagram, RawDiagram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("column {0} holds both O and X")]
    SharedCell(usize),
    #[error("O and X permutations have different lengths")]
    SizeMismatch,
    #[error("grid size {n} exceeds the limit {limit}")]
    GridTooLarge { n: usize, limit: usize },
    #[error("tilde ranks are not divisible by 2^{0}")]
    NonDivisibleRanks(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// An `n x n` grid: column `i` holds an O in row `o[i]` and an X in row `x[i]`.
/// Rows grow upward, columns to the right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridDiagram {
    o: Vec<usize>,
    x: Vec<usize>,
    name: Option<String>,
}

fn check_perm(p: &[usize]) -> Result<(), GridError> {
    let mut seen = vec![false; p.len()];
    for &v in p {
        if v >= p.len() || seen[v] {
            return Err(GridError::NotAPermutation(
                p.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ));
        }
        seen[v] = true;
    }
    Ok(())
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

impl GridDiagram {
    pub fn new(o: Vec<usize>, x: Vec<usize>) -> Result<Self, GridError> {
        if o.len() != x.len() {
            return Err(GridError::SizeMismatch);
        }
        check_perm(&o)?;
        check_perm(&x)?;
        if let Some(i) = (0..o.len()).find(|&i| o[i] == x[i]) {
            return Err(GridError::SharedCell(i));
        }
        Ok(GridDiagram { o, x, name: None })
    }

    /// Parses `"o_0,o_1,... | x_0,x_1,..."`.
    pub fn parse(text: &str) -> Result<Self, GridError> {
        let (a, b) = text
            .split_once('|')
            .ok_or_else(|| GridError::NotAPermutation(text.trim().to_string()))?;
        let perm = |s: &str| -> Result<Vec<usize>, GridError> {
            s.split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| GridError::NotAPermutation(s.trim().to_string()))
        };
        Self::new(perm(a)?, perm(b)?)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn size(&self) -> usize {
        self.o.len()
    }

    pub fn o_perm(&self) -> &[usize] {
        &self.o
    }

    pub fn x_perm(&self) -> &[usize] {
        &self.x
    }

    /// Number of link components: cycles of column -> O row -> X column.
    pub fn components(&self) -> usize {
        let x_col = inverse(&self.x);
        let mut seen = vec![false; self.size()];
        let mut count = 0;
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut c = start;
            while !seen[c] {
                seen[c] = true;
                c = x_col[self.o[c]];
            }
        }
        count
    }

    /// Reflection in a vertical line; presents the mirror image.
    pub fn mirror(&self) -> GridDiagram {
        let mut o = self.o.clone();
        let mut x = self.x.clone();
        o.reverse();
        x.reverse();
        GridDiagram {
            o,
            x,
            name: self.name.clone(),
        }
    }

    /// Cyclic shift of columns by `dc` and rows by `dr`; presents the same link.
    pub fn translate(&self, dc: usize, dr: usize) -> GridDiagram {
        let n = self.size();
        let mut o = vec![0; n];
        let mut x = vec![0; n];
        for i in 0..n {
            o[(i + dc) % n] = (self.o[i] + dr) % n;
            x[(i + dc) % n] = (self.x[i] + dr) % n;
        }
        GridDiagram {
            o,
            x,
            name: self.name.clone(),
        }
    }

    /// Planar diagram of the grid: vertical segments run from X to O and
    /// cross over horizontal ones, which run from O to X.
    pub fn to_planar_diagram(&self) -> Result<PlanarDiagram, GridError> {
        let n = self.size();
        let x_in_row = inverse(&self.x);
        let o_in_row = inverse(&self.o);
        let span = |a: usize, b: usize| (a.min(b), a.max(b));
        // passages along the traversal: (crossing id, is_over, travel sign)
        let mut crossing_id = std::collections::HashMap::new();
        let mut crossing_dirs: Vec<(i64, i64)> = Vec::new();
        let mut legs: Vec<[usize; 4]> = Vec::new();
        let mut hints: Vec<[bool; 4]> = Vec::new();
        let mut next_label = 1;
        let mut free_loops = 0;
        let mut col_done = vec![false; n];
        for start in 0..n {
            if col_done[start] {
                continue;
            }
            let mut passages: Vec<(usize, bool)> = Vec::new();
            let mut c = start;
            loop {
                col_done[c] = true;
                // horizontal: row o[c], from column c to the X in that row
                let r = self.o[c];
                let c2 = x_in_row[r];
                let dx: i64 = if c2 > c { 1 } else { -1 };
                let (lo, hi) = span(c, c2);
                let mut cols: Vec<usize> = (lo + 1..hi)
                    .filter(|&k| {
                        let (a, b) = span(self.o[k], self.x[k]);
                        a < r && r < b
                    })
                    .collect();
                if dx < 0 {
                    cols.reverse();
                }
                for k in cols {
                    let id = *crossing_id.entry((k, r)).or_insert_with(|| {
                        crossing_dirs.push((0, 0));
                        crossing_dirs.len() - 1
                    });
                    crossing_dirs[id].0 = dx;
                    passages.push((id, false));
                }
                // vertical: column c2, from the X at row r to the O
                let r2 = self.o[c2];
                let dy: i64 = if r2 > r { 1 } else { -1 };
                let (lo, hi) = span(r, r2);
                let mut rows: Vec<usize> = (lo + 1..hi)
                    .filter(|&q| {
                        let (a, b) = span(o_in_row[q], x_in_row[q]);
                        a < c2 && c2 < b
                    })
                    .collect();
                if dy < 0 {
                    rows.reverse();
                }
                for q in rows {
                    let id = *crossing_id.entry((c2, q)).or_insert_with(|| {
                        crossing_dirs.push((0, 0));
                        crossing_dirs.len() - 1
                    });
                    crossing_dirs[id].1 = dy;
                    passages.push((id, true));
                }
                c = c2;
                if c == start {
                    break;
                }
            }
            if passages.is_empty() {
                free_loops += 1;
                continue;
            }
            let k = passages.len();
            let labels: Vec<usize> = (0..k).map(|i| next_label + i).collect();
            next_label += k;
            for (p, &(id, over)) in passages.iter().enumerate() {
                if legs.len() <= id {
                    legs.resize(id + 1, [0; 4]);
                    hints.resize(id + 1, [false; 4]);
                }
                let (e_in, e_out) = (labels[p], labels[(p + 1) % k]);
                if over {
                    // filled below once both travel directions are known
                    legs[id][1] = e_in;
                    legs[id][3] = e_out;
                } else {
                    legs[id][0] = e_in;
                    legs[id][2] = e_out;
                }
            }
        }
        for (id, t) in legs.iter_mut().enumerate() {
            let (dx, dy) = crossing_dirs[id];
            let (over_in, over_out) = (t[1], t[3]);
            // counterclockwise from the incoming under-leg (direction -dx)
            // the next leg points along (0, -dx)
            if -dx == dy {
                t[1] = over_out;
                t[3] = over_in;
                hints[id] = [true, false, false, true];
            } else {
                hints[id] = [true, true, false, false];
            }
        }
        if legs.is_empty() {
            return Ok(PlanarDiagram::unlink(free_loops.max(1)));
        }
        let raw = RawDiagram {
            legs,
            hints: Some(hints),
            free_loops,
            marked: None,
            name: self.name.clone(),
        };
        Ok(raw.finish(&[])?)
    }
}
