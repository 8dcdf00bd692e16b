//! Dense matrices and the explicit dense mode.
//!
//! The implicit context never materializes the Google matrix; this module
//! does, on request, for the spectral laboratory and for oracle
//! validation. Dense mode is opt-in and capped at [`DENSE_CAP`] nodes so
//! it can never be selected by accident on a large graph.

use alloc::vec::Vec;

use crate::error::Error;
use crate::googlemat::GoogleParams;
use crate::graph::Graph;

/// Hard node-count cap for dense materialization.
pub const DENSE_CAP: u32 = 5000;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        DenseMatrix {
            n_rows,
            n_cols,
            data: alloc::vec![0.0; n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from a closure over (row, col).
    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n_cols);
        (0..self.n_rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n_cols, rhs.n_rows);
        let mut out = DenseMatrix::zeros(self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = out.row_mut(i);
                for j in 0..rhs.n_cols {
                    orow[j] += aik * rrow[j];
                }
            }
        }
        out
    }

    /// Largest absolute entry of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n_rows).map(|i| self.row(i).iter().sum()).collect()
    }
}

/// LU factorization with partial pivoting.
pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn factor(a: &DenseMatrix) -> Result<Self, Error> {
        assert_eq!(a.n_rows, a.n_cols);
        let n = a.n_rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = lu.get(k, k).abs();
            for r in k + 1..n {
                let cand = lu.get(r, k).abs();
                if cand > best {
                    best = cand;
                    p = r;
                }
            }
            if best == 0.0 {
                return Err(Error::NumericalFailure {
                    what: "lu",
                    reason: alloc::format!("singular matrix at pivot {k}"),
                });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu.get(k, j);
                    lu.set(k, j, lu.get(p, j));
                    lu.set(p, j, tmp);
                }
            }
            let pivot = lu.get(k, k);
            for r in k + 1..n {
                let factor = lu.get(r, k) / pivot;
                lu.set(r, k, factor);
                if factor != 0.0 {
                    for j in k + 1..n {
                        let v = lu.get(r, j) - factor * lu.get(k, j);
                        lu.set(r, j, v);
                    }
                }
            }
        }
        Ok(LuFactors { lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.n_rows;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for k in 0..n {
            for j in 0..k {
                x[k] -= self.lu.get(k, j) * x[j];
            }
        }
        for k in (0..n).rev() {
            for j in k + 1..n {
                x[k] -= self.lu.get(k, j) * x[j];
            }
            x[k] /= self.lu.get(k, k);
        }
        x
    }

    pub fn inverse(&self) -> DenseMatrix {
        let n = self.lu.n_rows;
        let mut inv = DenseMatrix::zeros(n, n);
        let mut e = alloc::vec![0.0; n];
        for c in 0..n {
            e[c] = 1.0;
            let col = self.solve(&e);
            e[c] = 0.0;
            for r in 0..n {
                inv.set(r, c, col[r]);
            }
        }
        inv
    }
}

fn check_cap(n: u32) -> Result<(), Error> {
    if n > DENSE_CAP {
        return Err(Error::CapacityExceeded {
            what: "dense materialization nodes",
            needed: n as usize,
            budget: DENSE_CAP as usize,
        });
    }
    Ok(())
}

/// Dense column-normalized graph matrix plus the dangling indicator.
pub fn build_ghat(graph: &Graph) -> Result<(DenseMatrix, Vec<bool>), Error> {
    check_cap(graph.node_count())?;
    let n = graph.node_count() as usize;
    let mut ghat = DenseMatrix::zeros(n, n);
    let mut dangling = alloc::vec![false; n];
    for j in 0..graph.node_count() {
        let total = graph.out_weight(j);
        if total == 0.0 {
            dangling[j as usize] = true;
            continue;
        }
        let (dst, w) = graph.out_edges(j);
        for (&i, &w) in dst.iter().zip(w) {
            ghat.set(i as usize, j as usize, w / total);
        }
    }
    Ok((ghat, dangling))
}

/// Dense Google matrix `G = alpha (Ghat + u d^T) + (1 - alpha) v 1^T`.
pub fn build_g(graph: &Graph, params: &GoogleParams) -> Result<DenseMatrix, Error> {
    let n = graph.node_count() as usize;
    params.validate(graph.node_count())?;
    let (ghat, dangling) = build_ghat(graph)?;
    let alpha = params.alpha();
    let mut g = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let ui = params.u_at(i as u32, graph.node_count());
        let vi = params.v_at(i as u32, graph.node_count());
        for j in 0..n {
            let dangle = if dangling[j] { ui } else { 0.0 };
            g.set(i, j, alpha * (ghat.get(i, j) + dangle) + (1.0 - alpha) * vi);
        }
    }
    Ok(g)
}

/// Dense `A = G - I`.
pub fn build_a(graph: &Graph, params: &GoogleParams) -> Result<DenseMatrix, Error> {
    let mut a = build_g(graph, params)?;
    for i in 0..a.n_rows() {
        let v = a.get(i, i) - 1.0;
        a.set(i, i, v);
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_small_system() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]][i][j]);
        let lu = LuFactors::factor(&a).unwrap();
        let x = lu.solve(&[3.0, 5.0, 3.0]);
        let back = a.matvec(&x);
        for (b, want) in back.iter().zip([3.0, 5.0, 3.0]) {
            assert!((b - want).abs() < 1e-12);
        }
        let inv = lu.inverse();
        let prod = a.matmul(&inv);
        assert!(prod.max_abs_diff(&DenseMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn lu_reports_singularity() {
        let a = DenseMatrix::from_fn(2, 2, |i, _| if i == 0 { 1.0 } else { 2.0 });
        assert!(LuFactors::factor(&a).is_err());
    }

    #[test]
    fn dense_cap_is_enforced() {
        let g = crate::gen::gen_erdos_renyi(2, 1.0, 1, true).unwrap();
        assert!(build_ghat(&g).is_ok());
        // Cap check happens before any allocation.
        assert!(check_cap(DENSE_CAP + 1).is_err());
    }
}
