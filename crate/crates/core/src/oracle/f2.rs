//! Dense matrices over F2 with rows packed into `u64` words.

/// Row-major bit matrix. Rows are appended one at a time and reduced
/// when the rank is taken.
#[derive(Clone, Debug)]
pub struct F2Matrix {
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn new(cols: usize) -> F2Matrix {
        F2Matrix {
            cols,
            stride: cols.div_ceil(64).max(1),
            data: Vec::new(),
        }
    }

    pub fn with_capacity(cols: usize, rows: usize) -> F2Matrix {
        let mut m = F2Matrix::new(cols);
        m.data.reserve(rows * m.stride);
        m
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.data.len() / self.stride
    }

    /// Appends a row with ones at `ones`. Repeated columns cancel.
    pub fn push_row<I: IntoIterator<Item = usize>>(&mut self, ones: I) {
        let start = self.data.len();
        self.data.resize(start + self.stride, 0);
        for c in ones {
            assert!(c < self.cols, "column {c} out of range {}", self.cols);
            self.data[start + c / 64] ^= 1u64 << (c % 64);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.stride + col / 64] >> (col % 64) & 1 == 1
    }

    /// Rank by elimination on the lowest set bit. Each row is reduced
    /// against the pivot rows kept so far; the lowest set bit only moves
    /// up, so the scan start never goes back.
    pub fn rank(mut self) -> usize {
        let stride = self.stride;
        let rows = self.rows();
        // pivot[c] = index of the stored row whose lowest bit is c.
        let mut pivot = vec![usize::MAX; self.cols];
        let mut rank = 0;
        for r in 0..rows {
            let mut word = 0;
            loop {
                let base = r * stride;
                while word < stride && self.data[base + word] == 0 {
                    word += 1;
                }
                if word == stride {
                    break;
                }
                let col = word * 64 + self.data[base + word].trailing_zeros() as usize;
                let p = pivot[col];
                if p == usize::MAX {
                    pivot[col] = r;
                    rank += 1;
                    break;
                }
                let (lo, hi) = self.data.split_at_mut(base);
                let prow = &lo[p * stride..p * stride + stride];
                for (dst, src) in hi[..stride].iter_mut().zip(prow).skip(word) {
                    *dst ^= *src;
                }
            }
        }
        rank
    }
}
