//! Dense GF(2) linear algebra on bit-packed matrices, sized for the graded
//! blocks that show up in strands-algebra homology and cobar solves.

/// A dense matrix over GF(2); rows are bit-packed in 64-bit words.
#[derive(Clone, Debug)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> F2Matrix {
        let words_per_row = cols.div_ceil(64).max(1);
        F2Matrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words_per_row + c / 64] & (1u64 << (c % 64)) != 0
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words_per_row + c / 64];
        if v {
            *w |= 1u64 << (c % 64);
        } else {
            *w &= !(1u64 << (c % 64));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.words_per_row + c / 64] ^= 1u64 << (c % 64);
    }

    fn row_xor(&mut self, dst: usize, src: usize) {
        let w = self.words_per_row;
        let (d, s) = (dst * w, src * w);
        for k in 0..w {
            let v = self.data[s + k];
            self.data[d + k] ^= v;
        }
    }

    fn row_is_zero(&self, r: usize) -> bool {
        let w = self.words_per_row;
        self.data[r * w..(r + 1) * w].iter().all(|&x| x == 0)
    }
}

/// Row echelon form of a matrix, retaining the elimination transform so that
/// systems `M x = b` can be solved and membership in the row space tested.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Reduced rows of the original matrix (transposed systems pass columns).
    mat: F2Matrix,
    /// Accumulated row operations applied to the identity.
    transform: F2Matrix,
    /// pivots[k] = column of the k-th pivot row.
    pivots: Vec<usize>,
}

impl Echelon {
    /// Eliminates `mat` (consuming it) into row echelon form.
    pub fn reduce(mut mat: F2Matrix) -> Echelon {
        let rows = mat.rows();
        let mut transform = F2Matrix::zero(rows, rows);
        for r in 0..rows {
            transform.set(r, r, true);
        }
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..mat.cols() {
            let Some(pivot_row) = (next_row..rows).find(|&r| mat.get(r, col)) else {
                continue;
            };
            if pivot_row != next_row {
                for k in 0..mat.words_per_row {
                    mat.data.swap(
                        pivot_row * mat.words_per_row + k,
                        next_row * mat.words_per_row + k,
                    );
                }
                for k in 0..transform.words_per_row {
                    transform.data.swap(
                        pivot_row * transform.words_per_row + k,
                        next_row * transform.words_per_row + k,
                    );
                }
            }
            for r in 0..rows {
                if r != next_row && mat.get(r, col) {
                    mat.row_xor(r, next_row);
                    transform.row_xor(r, next_row);
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == rows {
                break;
            }
        }
        Echelon {
            mat,
            transform,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Expresses `b` as a combination of the original rows, if possible;
    /// returns the coefficient vector (indices of rows used).
    pub fn express(&self, b: &[bool]) -> Option<Vec<usize>> {
        assert_eq!(b.len(), self.mat.cols());
        let mut residue: Vec<u64> = vec![0; self.mat.words_per_row];
        for (c, &bit) in b.iter().enumerate() {
            if bit {
                residue[c / 64] ^= 1u64 << (c % 64);
            }
        }
        let mut combo: Vec<u64> = vec![0; self.transform.words_per_row];
        for (k, &col) in self.pivots.iter().enumerate() {
            if residue[col / 64] & (1u64 << (col % 64)) != 0 {
                let w = self.mat.words_per_row;
                for j in 0..w {
                    residue[j] ^= self.mat.data[k * w + j];
                }
                let tw = self.transform.words_per_row;
                for j in 0..tw {
                    combo[j] ^= self.transform.data[k * tw + j];
                }
            }
        }
        if residue.iter().any(|&x| x != 0) {
            return None;
        }
        let mut rows = Vec::new();
        for r in 0..self.transform.cols() {
            if combo[r / 64] & (1u64 << (r % 64)) != 0 {
                rows.push(r);
            }
        }
        Some(rows)
    }

    /// Indices of the original rows that reduced to zero (a kernel basis of
    /// the row-combination map), as coefficient vectors over original rows.
    pub fn kernel_combinations(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for r in self.rank()..self.mat.rows() {
            if self.mat.row_is_zero(r) {
                let mut rows = Vec::new();
                for c in 0..self.transform.cols() {
                    if self.transform.get(r, c) {
                        rows.push(c);
                    }
                }
                out.push(rows);
            }
        }
        out
    }
}

/// An incrementally grown row space over GF(2).
#[derive(Clone, Debug)]
pub struct F2Span {
    cols: usize,
    words: usize,
    /// Reduced rows paired with their pivot column.
    rows: Vec<(usize, Vec<u64>)>,
}

impl F2Span {
    pub fn new(cols: usize) -> F2Span {
        F2Span {
            cols,
            words: cols.div_ceil(64).max(1),
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn pack(&self, v: &[bool]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let mut w = vec![0u64; self.words];
        for (c, &bit) in v.iter().enumerate() {
            if bit {
                w[c / 64] |= 1u64 << (c % 64);
            }
        }
        w
    }

    fn reduce(&self, mut w: Vec<u64>) -> Vec<u64> {
        for (pivot, row) in &self.rows {
            if w[pivot / 64] & (1u64 << (pivot % 64)) != 0 {
                for k in 0..self.words {
                    w[k] ^= row[k];
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[bool]) -> bool {
        self.reduce(self.pack(v)).iter().all(|&x| x == 0)
    }

    /// Inserts `v` if independent of the current span. Returns whether the
    /// dimension grew.
    pub fn insert(&mut self, v: &[bool]) -> bool {
        let w = self.reduce(self.pack(v));
        let Some(pivot) = (0..self.cols).find(|&c| w[c / 64] & (1u64 << (c % 64)) != 0) else {
            return false;
        };
        self.rows.push((pivot, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&[u8]]) -> F2Matrix {
        let mut m = F2Matrix::zero(rows.len(), rows[0].len());
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v != 0);
            }
        }
        m
    }

    #[test]
    fn rank_and_solve() {
        let m = from_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let ech = Echelon::reduce(m);
        assert_eq!(ech.rank(), 2);
        // [1,0,1] = row0 + row1.
        let combo = ech.express(&[true, false, true]).unwrap();
        let mut sum = [false; 3];
        let rows: [[bool; 3]; 3] = [
            [true, true, false],
            [false, true, true],
            [true, false, true],
        ];
        for r in combo {
            for c in 0..3 {
                sum[c] ^= rows[r][c];
            }
        }
        assert_eq!(sum, [true, false, true]);
        assert!(ech.express(&[true, false, false]).is_none());
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let m = from_rows(&[&[1, 0], &[0, 1], &[1, 1]]);
        let ech = Echelon::reduce(m);
        assert_eq!(ech.rank(), 2);
        let kernel = ech.kernel_combinations();
        assert_eq!(kernel.len(), 1);
        assert_eq!(kernel[0], vec![0, 1, 2]);
    }
}
