//! Matrices over GF(2) and their rank.

/// Bit matrix, row-major, 64 columns per storage word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1);
        let words_per_row = cols.div_ceil(64);
        BinaryMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.bits[i * self.words_per_row + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }
}

/// Rank over GF(2) by Gaussian elimination on packed rows.
pub fn gf2_rank(matrix: &BinaryMatrix) -> usize {
    let mut m = matrix.clone();
    let wpr = m.words_per_row;
    let mut rank = 0;
    for col in 0..m.cols {
        let word = col / 64;
        let mask = 1u64 << (col % 64);
        // find a pivot at or below `rank`
        let pivot = (rank..m.rows).find(|&r| m.bits[r * wpr + word] & mask != 0);
        let Some(pivot) = pivot else { continue };
        if pivot != rank {
            for w in 0..wpr {
                m.bits.swap(pivot * wpr + w, rank * wpr + w);
            }
        }
        for r in 0..m.rows {
            if r != rank && m.bits[r * wpr + word] & mask != 0 {
                for w in 0..wpr {
                    let v = m.bits[rank * wpr + w];
                    m.bits[r * wpr + w] ^= v;
                }
            }
        }
        rank += 1;
        if rank == m.rows {
            break;
        }
    }
    rank
}

/// Rank of up to 32-column rows given as bit masks. Fast path for the
/// battery's fixed-size matrices; algorithmically independent of
/// [`gf2_rank`] (basis insertion instead of full elimination).
pub(crate) fn rank_of_rows(rows: &[u32]) -> usize {
    let mut basis = [0u32; 32];
    let mut rank = 0;
    for &row in rows {
        let mut r = row;
        while r != 0 {
            let b = (31 - r.leading_zeros()) as usize;
            if basis[b] == 0 {
                basis[b] = r;
                rank += 1;
                break;
            }
            r ^= basis[b];
        }
    }
    rank
}
