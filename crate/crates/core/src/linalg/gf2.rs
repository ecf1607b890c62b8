use std::collections::HashMap;

/// Dense matrix over GF(2) with rows packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let src = other.row(k).to_vec();
                    let dst = &mut out.data[r * out.words..(r + 1) * out.words];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Rank by elimination against a basis keyed on leading bit.
    pub fn rank(&self) -> usize {
        let mut basis: HashMap<usize, Vec<u64>> = HashMap::new();
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            while let Some(lead) = leading_bit(&row) {
                match basis.get(&lead) {
                    Some(b) => {
                        for (x, y) in row.iter_mut().zip(b) {
                            *x ^= y;
                        }
                    }
                    None => {
                        basis.insert(lead, row);
                        break;
                    }
                }
            }
        }
        basis.len()
    }
}

fn leading_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .rev()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}

/// Rank over GF(2) of a matrix given as sparse rows of column indices.
///
/// Repeated indices cancel in pairs.
pub fn rank_sparse(cols: usize, rows: &[Vec<usize>]) -> usize {
    let mut m = BitMatrix::zeros(rows.len(), cols);
    for (r, row) in rows.iter().enumerate() {
        for &c in row {
            m.flip(r, c);
        }
    }
    m.rank()
}
