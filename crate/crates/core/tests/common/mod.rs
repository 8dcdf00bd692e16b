//! Shared test oracles.
//!
//! Everything here is built straight from definitions, independent of
//! the implicit context implementation it validates: dense matrices are
//! assembled from the raw arc list, and the linear solve is a plain
//! Gaussian elimination written for the tests.

#![allow(dead_code)]

use tworank_core::googlemat::GoogleParams;
use tworank_core::graph::Graph;

/// Dense n x n matrix as nested vectors, row major.
pub type Mat = Vec<Vec<f64>>;

/// Dense Google matrix assembled directly from the definition:
/// column-normalize the arc weights, patch dangling columns with `u`,
/// and mix in the teleport term.
pub fn dense_g(graph: &Graph, params: &GoogleParams) -> Mat {
    let n = graph.node_count() as usize;
    let alpha = params.alpha();
    let mut ghat = vec![vec![0.0; n]; n];
    let mut dangling = vec![true; n];
    for j in 0..graph.node_count() {
        let (dst, w) = graph.out_edges(j);
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            dangling[j as usize] = false;
            for (&i, &w) in dst.iter().zip(w) {
                ghat[i as usize][j as usize] = w / total;
            }
        }
    }
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        let ui = params.u_at(i as u32, graph.node_count());
        let vi = params.v_at(i as u32, graph.node_count());
        for j in 0..n {
            let dangle = if dangling[j] { ui } else { 0.0 };
            g[i][j] = alpha * (ghat[i][j] + dangle) + (1.0 - alpha) * vi;
        }
    }
    g
}

/// Dense `A = G - I`.
pub fn dense_a(graph: &Graph, params: &GoogleParams) -> Mat {
    let mut a = dense_g(graph, params);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= 1.0;
    }
    a
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Mat, x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn row_sums(a: &Mat) -> Vec<f64> {
    a.iter().map(|row| row.iter().sum()).collect()
}

/// Plain Gaussian elimination with partial pivoting.
pub fn solve(a: &Mat, b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut m: Mat = a.clone();
    let mut x: Vec<f64> = b.to_vec();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&p, &q| m[p][k].abs().partial_cmp(&m[q][k].abs()).unwrap())
            .unwrap();
        m.swap(k, piv);
        x.swap(k, piv);
        assert!(m[k][k] != 0.0, "singular oracle system");
        for r in k + 1..n {
            let f = m[r][k] / m[k][k];
            if f != 0.0 {
                for c in k..n {
                    m[r][c] -= f * m[k][c];
                }
                x[r] -= f * x[k];
            }
        }
    }
    for k in (0..n).rev() {
        for c in k + 1..n {
            x[k] -= m[k][c] * x[c];
        }
        x[k] /= m[k][k];
    }
    x
}

/// PageRank by direct linear solve: replace the last equation of
/// `(G - I) r = 0` with the normalization `sum r = 1`.
pub fn pagerank_by_solve(graph: &Graph, params: &GoogleParams) -> Vec<f64> {
    let n = graph.node_count() as usize;
    let g = dense_g(graph, params);
    let mut sys = vec![vec![0.0; n]; n];
    let mut rhs = vec![0.0; n];
    for i in 0..n - 1 {
        for j in 0..n {
            sys[i][j] = g[i][j] - if i == j { 1.0 } else { 0.0 };
        }
    }
    for j in 0..n {
        sys[n - 1][j] = 1.0;
    }
    rhs[n - 1] = 1.0;
    solve(&sys, &rhs)
}

/// Mean and standard deviation of a sample.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
