//! Compressed sparse column matrices.
//!
//! Row indices are sorted within each column, so a single entry lookup is
//! a binary search over one column. This is the storage behind the
//! implicit Google-matrix representation: columns of the normalized web
//! graph are exactly the out-neighborhoods of the underlying graph.

use alloc::vec::Vec;

use crate::error::Error;

/// Sparse matrix in compressed sparse column form.
#[derive(Debug, Clone, PartialEq)]
pub struct CscMatrix {
    n_rows: u32,
    n_cols: u32,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<f64>,
}

impl CscMatrix {
    /// Assembles a matrix from raw CSC arrays. Row indices must be sorted
    /// and unique within each column.
    pub fn from_parts(
        n_rows: u32,
        n_cols: u32,
        col_ptr: Vec<usize>,
        row_idx: Vec<u32>,
        vals: Vec<f64>,
    ) -> Result<Self, Error> {
        if col_ptr.len() != n_cols as usize + 1
            || col_ptr.first() != Some(&0)
            || col_ptr.last() != Some(&row_idx.len())
            || row_idx.len() != vals.len()
        {
            return Err(Error::param("csc", "inconsistent array lengths"));
        }
        for c in 0..n_cols as usize {
            if col_ptr[c] > col_ptr[c + 1] {
                return Err(Error::param("csc", "column pointers not monotone"));
            }
            let col = &row_idx[col_ptr[c]..col_ptr[c + 1]];
            for w in col.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::param("csc", "row indices not sorted unique"));
                }
            }
            if let Some(&last) = col.last() {
                if last >= n_rows {
                    return Err(Error::param("csc", "row index out of range"));
                }
            }
        }
        Ok(CscMatrix {
            n_rows,
            n_cols,
            col_ptr,
            row_idx,
            vals,
        })
    }

    pub fn n_rows(&self) -> u32 {
        self.n_rows
    }

    pub fn n_cols(&self) -> u32 {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_idx(&self) -> &[u32] {
        &self.row_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.vals
    }

    /// One column as parallel `(row, value)` slices.
    pub fn col(&self, c: u32) -> (&[u32], &[f64]) {
        let (a, b) = (self.col_ptr[c as usize], self.col_ptr[c as usize + 1]);
        (&self.row_idx[a..b], &self.vals[a..b])
    }

    /// Entry lookup by binary search within the column; zero when absent.
    pub fn get(&self, row: u32, col: u32) -> f64 {
        let (rows, vals) = self.col(col);
        match rows.binary_search(&row) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// y = M x.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n_cols as usize);
        let mut y = alloc::vec![0.0; self.n_rows as usize];
        for c in 0..self.n_cols as usize {
            let xc = x[c];
            if xc == 0.0 {
                continue;
            }
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                y[self.row_idx[k] as usize] += self.vals[k] * xc;
            }
        }
        y
    }

    /// y = Mᵀ x. Each output coordinate is the dot product of one column
    /// with `x`, so CSC storage serves both orientations.
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n_rows as usize);
        let mut y = alloc::vec![0.0; self.n_cols as usize];
        for c in 0..self.n_cols as usize {
            let mut acc = 0.0;
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                acc += self.vals[k] * x[self.row_idx[k] as usize];
            }
            y[c] = acc;
        }
        y
    }

    /// Per-row sums.
    pub fn row_sums(&self) -> Vec<f64> {
        let mut s = alloc::vec![0.0; self.n_rows as usize];
        for c in 0..self.n_cols as usize {
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                s[self.row_idx[k] as usize] += self.vals[k];
            }
        }
        s
    }

    /// Per-column sums.
    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.n_cols)
            .map(|c| self.col(c).1.iter().sum())
            .collect()
    }

    /// Sparse product `self * rhs` with an explicit nonzero budget.
    ///
    /// Fails loudly when the result would exceed `nnz_budget`; nothing is
    /// silently truncated.
    pub fn multiply(&self, rhs: &CscMatrix, nnz_budget: usize) -> Result<CscMatrix, Error> {
        if self.n_cols != rhs.n_rows {
            return Err(Error::param("multiply", "dimension mismatch"));
        }
        let n_rows = self.n_rows as usize;
        let mut col_ptr = Vec::with_capacity(rhs.n_cols as usize + 1);
        col_ptr.push(0usize);
        let mut row_idx: Vec<u32> = Vec::new();
        let mut vals: Vec<f64> = Vec::new();

        // Sparse accumulator reused across columns.
        let mut acc = alloc::vec![0.0f64; n_rows];
        let mut touched: Vec<u32> = Vec::new();

        for c in 0..rhs.n_cols {
            let (brows, bvals) = rhs.col(c);
            for (&k, &bv) in brows.iter().zip(bvals) {
                let (arows, avals) = self.col(k);
                for (&r, &av) in arows.iter().zip(avals) {
                    if acc[r as usize] == 0.0 {
                        touched.push(r);
                    }
                    acc[r as usize] += av * bv;
                }
            }
            if row_idx.len() + touched.len() > nnz_budget {
                return Err(Error::CapacityExceeded {
                    what: "sparse product nonzeros",
                    needed: row_idx.len() + touched.len(),
                    budget: nnz_budget,
                });
            }
            touched.sort_unstable();
            for &r in &touched {
                // Keep exact zeros produced by cancellation: dropping them
                // would make entry lookups disagree with the dense oracle
                // only in sign-of-zero cases, but budget accounting is
                // simpler when structure equals the symbolic product.
                row_idx.push(r);
                vals.push(acc[r as usize]);
                acc[r as usize] = 0.0;
            }
            touched.clear();
            col_ptr.push(row_idx.len());
        }

        Ok(CscMatrix {
            n_rows: self.n_rows,
            n_cols: rhs.n_cols,
            col_ptr,
            row_idx,
            vals,
        })
    }
}
