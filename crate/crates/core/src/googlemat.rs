//! The Google matrix held implicitly, with O(1) access to entries, entry
//! differences, and row sums of `A = G - I` and `B = A^2`.
//!
//! `G = alpha (Ghat + u d^T) + (1 - alpha) v 1^T` is fully dense because
//! of the teleport term, so it is never materialized. Writing
//! `M = alpha Ghat` and `R = alpha u d^T + (1 - alpha) v 1^T`, every entry
//! of `G` and `G^2 = M^2 + MR + RM + R^2` reduces to entries of `Ghat`,
//! `Ghat^2`, and a handful of precomputed correction vectors:
//!
//! - `gu = Ghat u`, `gv = Ghat v`, `gtd = Ghat^T d`
//! - row sums and column sums of `Ghat`, row sums of `Ghat^2`
//! - scalars `d^T u`, `d^T v`, and the dangling count
//!
//! `A` and `B` then follow from `A = G - I` and `B = G^2 - 2G + I`.
//!
//! Every O(1) accessor bumps an internal read counter so tests can verify
//! that a pairwise comparison touches a bounded number of context entries
//! regardless of graph size.

use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::error::Error;
use crate::graph::Graph;
use crate::sparse::CscMatrix;

/// Default nonzero budget for the `Ghat^2` sparse product.
pub const DEFAULT_GHAT2_NNZ_BUDGET: usize = 1 << 26;

/// Damping factor, dangling-node vector, and personalization vector.
///
/// `u` and `v` default to uniform; explicit vectors must be nonnegative
/// with unit 1-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct GoogleParams {
    alpha: f64,
    u: Option<Vec<f64>>,
    v: Option<Vec<f64>>,
}

impl GoogleParams {
    /// Uniform `u`, `v` with the given damping factor.
    pub fn new(alpha: f64) -> Result<Self, Error> {
        if !(0.0..1.0).contains(&alpha) || alpha.is_nan() {
            return Err(Error::param("alpha", "must lie in [0, 1)"));
        }
        Ok(GoogleParams {
            alpha,
            u: None,
            v: None,
        })
    }

    /// The paper-default parameters: `alpha = 0.85`, uniform `u`, `v`.
    pub fn default_params() -> Self {
        GoogleParams::new(0.85).expect("0.85 is a valid damping factor")
    }

    pub fn with_dangling_vector(mut self, u: Vec<f64>) -> Self {
        self.u = Some(u);
        self
    }

    pub fn with_personalization(mut self, v: Vec<f64>) -> Self {
        self.v = Some(v);
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_uniform_u(&self) -> bool {
        self.u.is_none()
    }

    pub fn is_uniform_v(&self) -> bool {
        self.v.is_none()
    }

    pub fn explicit_u(&self) -> Option<&[f64]> {
        self.u.as_deref()
    }

    pub fn explicit_v(&self) -> Option<&[f64]> {
        self.v.as_deref()
    }

    #[inline]
    pub fn u_at(&self, i: u32, n: u32) -> f64 {
        match &self.u {
            Some(u) => u[i as usize],
            None => 1.0 / n as f64,
        }
    }

    #[inline]
    pub fn v_at(&self, i: u32, n: u32) -> f64 {
        match &self.v {
            Some(v) => v[i as usize],
            None => 1.0 / n as f64,
        }
    }

    /// Checks vector lengths, nonnegativity, and unit 1-norm (1e-12).
    pub fn validate(&self, n: u32) -> Result<(), Error> {
        for (name, vec) in [("u", &self.u), ("v", &self.v)] {
            if let Some(vec) = vec {
                if vec.len() != n as usize {
                    return Err(Error::param(name, "length must equal node count"));
                }
                if vec.iter().any(|&x| x < 0.0 || !x.is_finite()) {
                    return Err(Error::param(name, "entries must be nonnegative and finite"));
                }
                let norm: f64 = vec.iter().sum();
                if (norm - 1.0).abs() > 1e-12 {
                    return Err(Error::param(name, alloc::format!("1-norm is {norm}, expected 1")));
                }
            }
        }
        Ok(())
    }

    fn resolve(&self, which: &Option<Vec<f64>>, n: u32) -> Vec<f64> {
        match which {
            Some(vec) => vec.clone(),
            None => alloc::vec![1.0 / n as f64; n as usize],
        }
    }
}

/// Column-normalizes a graph: `ghat[i][j] = w(j -> i) / outweight(j)`.
/// Columns of dangling nodes (no out-arcs) are zero and flagged.
pub fn column_normalize(graph: &Graph) -> (CscMatrix, Vec<bool>) {
    let n = graph.node_count();
    let mut col_ptr = Vec::with_capacity(n as usize + 1);
    col_ptr.push(0usize);
    let mut row_idx: Vec<u32> = Vec::with_capacity(graph.arc_count());
    let mut vals: Vec<f64> = Vec::with_capacity(graph.arc_count());
    let mut dangling = alloc::vec![false; n as usize];
    for j in 0..n {
        let (dst, w) = graph.out_edges(j);
        let total: f64 = w.iter().sum();
        if total == 0.0 {
            dangling[j as usize] = true;
        } else {
            // Out-neighborhoods are sorted by destination, which is
            // exactly the sorted-row invariant for column j.
            for (&i, &w) in dst.iter().zip(w) {
                row_idx.push(i);
                vals.push(w / total);
            }
        }
        col_ptr.push(row_idx.len());
    }
    let ghat = CscMatrix::from_parts(n, n, col_ptr, row_idx, vals)
        .expect("normalized columns are well-formed by construction");
    (ghat, dangling)
}

/// Immutable precomputed query structure for O(1) pairwise comparisons.
pub struct RankContext {
    n: u32,
    params: GoogleParams,
    ghat: CscMatrix,
    ghat2: CscMatrix,
    /// Row support of `ghat`: for each row i, the columns h with
    /// `ghat[i][h] != 0` (the in-neighborhood of i).
    row_ptr: Vec<usize>,
    row_cols: Vec<u32>,
    dangling: Vec<bool>,
    dangling_count: u32,
    gu: Vec<f64>,
    gv: Vec<f64>,
    gtd: Vec<f64>,
    ghat_rowsum: Vec<f64>,
    ghat_colsum: Vec<f64>,
    ghat2_rowsum: Vec<f64>,
    dtu: f64,
    dtv: f64,
    rowsum_g: Vec<f64>,
    rowsum_g2: Vec<f64>,
    rowsum_a: Vec<f64>,
    rowsum_b: Vec<f64>,
    reads: AtomicU64,
}

impl core::fmt::Debug for RankContext {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("RankContext")
            .field("n", &self.n)
            .field("alpha", &self.params.alpha())
            .field("nnz_ghat", &self.ghat.nnz())
            .field("nnz_ghat2", &self.ghat2.nnz())
            .field("dangling_count", &self.dangling_count)
            .finish()
    }
}

impl Clone for RankContext {
    fn clone(&self) -> Self {
        RankContext {
            n: self.n,
            params: self.params.clone(),
            ghat: self.ghat.clone(),
            ghat2: self.ghat2.clone(),
            row_ptr: self.row_ptr.clone(),
            row_cols: self.row_cols.clone(),
            dangling: self.dangling.clone(),
            dangling_count: self.dangling_count,
            gu: self.gu.clone(),
            gv: self.gv.clone(),
            gtd: self.gtd.clone(),
            ghat_rowsum: self.ghat_rowsum.clone(),
            ghat_colsum: self.ghat_colsum.clone(),
            ghat2_rowsum: self.ghat2_rowsum.clone(),
            dtu: self.dtu,
            dtv: self.dtv,
            rowsum_g: self.rowsum_g.clone(),
            rowsum_g2: self.rowsum_g2.clone(),
            rowsum_a: self.rowsum_a.clone(),
            rowsum_b: self.rowsum_b.clone(),
            reads: AtomicU64::new(0),
        }
    }
}

impl PartialEq for RankContext {
    /// Field-by-field equality of the mathematical content; the read
    /// counter is instrumentation and does not participate.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.params == other.params
            && self.ghat == other.ghat
            && self.ghat2 == other.ghat2
            && self.row_ptr == other.row_ptr
            && self.row_cols == other.row_cols
            && self.dangling == other.dangling
            && self.gu == other.gu
            && self.gv == other.gv
            && self.gtd == other.gtd
            && self.ghat_rowsum == other.ghat_rowsum
            && self.ghat_colsum == other.ghat_colsum
            && self.ghat2_rowsum == other.ghat2_rowsum
            && self.dtu == other.dtu
            && self.dtv == other.dtv
            && self.rowsum_g == other.rowsum_g
            && self.rowsum_g2 == other.rowsum_g2
            && self.rowsum_a == other.rowsum_a
            && self.rowsum_b == other.rowsum_b
    }
}

impl RankContext {
    /// Builds the context with the default `Ghat^2` nonzero budget.
    pub fn build(graph: &Graph, params: GoogleParams) -> Result<Self, Error> {
        Self::build_with_budget(graph, params, DEFAULT_GHAT2_NNZ_BUDGET)
    }

    /// Builds the context; fails loudly if `Ghat^2` would exceed the
    /// nonzero budget.
    pub fn build_with_budget(
        graph: &Graph,
        params: GoogleParams,
        ghat2_nnz_budget: usize,
    ) -> Result<Self, Error> {
        let n = graph.node_count();
        params.validate(n)?;
        let (ghat, dangling) = column_normalize(graph);
        let ghat2 = ghat.multiply(&ghat, ghat2_nnz_budget)?;

        let u = params.resolve(&params.u, n);
        let v = params.resolve(&params.v, n);
        let d: Vec<f64> = dangling.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();

        let gu = ghat.matvec(&u);
        let gv = ghat.matvec(&v);
        let gtd = ghat.matvec_transpose(&d);
        let ghat_rowsum = ghat.row_sums();
        let ghat_colsum = ghat.col_sums();
        let ghat2_rowsum = ghat2.row_sums();
        let dtu: f64 = d.iter().zip(&u).map(|(a, b)| a * b).sum();
        let dtv: f64 = d.iter().zip(&v).map(|(a, b)| a * b).sum();
        let dangling_count = dangling.iter().filter(|&&b| b).count() as u32;

        let alpha = params.alpha();
        let rowsum_g: Vec<f64> = (0..n as usize)
            .map(|i| {
                alpha * ghat_rowsum[i]
                    + alpha * u[i] * dangling_count as f64
                    + (1.0 - alpha) * v[i] * n as f64
            })
            .collect();

        // Row support of ghat (in-neighborhood index).
        let mut row_ptr = alloc::vec![0usize; n as usize + 1];
        for &i in ghat.row_idx() {
            row_ptr[i as usize + 1] += 1;
        }
        for k in 0..n as usize {
            row_ptr[k + 1] += row_ptr[k];
        }
        let mut cursor = row_ptr.clone();
        let mut row_cols = alloc::vec![0u32; ghat.nnz()];
        for c in 0..n {
            for &i in ghat.col(c).0 {
                row_cols[cursor[i as usize]] = c;
                cursor[i as usize] += 1;
            }
        }
        for i in 0..n as usize {
            row_cols[row_ptr[i]..row_ptr[i + 1]].sort_unstable();
        }

        let mut ctx = RankContext {
            n,
            params,
            ghat,
            ghat2,
            row_ptr,
            row_cols,
            dangling,
            dangling_count,
            gu,
            gv,
            gtd,
            ghat_rowsum,
            ghat_colsum,
            ghat2_rowsum,
            dtu,
            dtv,
            rowsum_g: rowsum_g.clone(),
            rowsum_g2: Vec::new(),
            rowsum_a: Vec::new(),
            rowsum_b: Vec::new(),
            reads: AtomicU64::new(0),
        };
        // rowsum(G^2) = G (G 1) by one implicit mat-vec over rowsum(G).
        let rowsum_g2 = ctx.matvec_g(&rowsum_g);
        ctx.rowsum_a = rowsum_g.iter().map(|s| s - 1.0).collect();
        ctx.rowsum_b = rowsum_g2
            .iter()
            .zip(&rowsum_g)
            .map(|(s2, s)| s2 - 2.0 * s + 1.0)
            .collect();
        ctx.rowsum_g2 = rowsum_g2;
        Ok(ctx)
    }

    /// Reassembles a context from stored arrays (used by the file
    /// format). Cheap structural invariants are revalidated; numeric
    /// content is trusted as-is so round trips stay bit-exact.
    #[allow(clippy::too_many_arguments)]
    pub fn from_raw_parts(
        params: GoogleParams,
        ghat: CscMatrix,
        ghat2: CscMatrix,
        dangling: Vec<bool>,
        gu: Vec<f64>,
        gv: Vec<f64>,
        gtd: Vec<f64>,
        ghat_rowsum: Vec<f64>,
        ghat_colsum: Vec<f64>,
        ghat2_rowsum: Vec<f64>,
        dtu: f64,
        dtv: f64,
        rowsum_g: Vec<f64>,
        rowsum_g2: Vec<f64>,
        rowsum_a: Vec<f64>,
        rowsum_b: Vec<f64>,
    ) -> Result<Self, Error> {
        let n = ghat.n_rows();
        params.validate(n)?;
        if ghat.n_cols() != n || ghat2.n_rows() != n || ghat2.n_cols() != n {
            return Err(Error::param("context", "matrix dimensions disagree"));
        }
        let nu = n as usize;
        let lens = [
            dangling.len(),
            gu.len(),
            gv.len(),
            gtd.len(),
            ghat_rowsum.len(),
            ghat_colsum.len(),
            ghat2_rowsum.len(),
            rowsum_g.len(),
            rowsum_g2.len(),
            rowsum_a.len(),
            rowsum_b.len(),
        ];
        if lens.iter().any(|&l| l != nu) {
            return Err(Error::param("context", "vector length disagrees with n"));
        }
        let dangling_count = dangling.iter().filter(|&&b| b).count() as u32;

        let mut row_ptr = alloc::vec![0usize; nu + 1];
        for &i in ghat.row_idx() {
            row_ptr[i as usize + 1] += 1;
        }
        for k in 0..nu {
            row_ptr[k + 1] += row_ptr[k];
        }
        let mut cursor = row_ptr.clone();
        let mut row_cols = alloc::vec![0u32; ghat.nnz()];
        for c in 0..n {
            for &i in ghat.col(c).0 {
                row_cols[cursor[i as usize]] = c;
                cursor[i as usize] += 1;
            }
        }
        for i in 0..nu {
            row_cols[row_ptr[i]..row_ptr[i + 1]].sort_unstable();
        }

        Ok(RankContext {
            n,
            params,
            ghat,
            ghat2,
            row_ptr,
            row_cols,
            dangling,
            dangling_count,
            gu,
            gv,
            gtd,
            ghat_rowsum,
            ghat_colsum,
            ghat2_rowsum,
            dtu,
            dtv,
            rowsum_g,
            rowsum_g2,
            rowsum_a,
            rowsum_b,
            reads: AtomicU64::new(0),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha()
    }

    pub fn params(&self) -> &GoogleParams {
        &self.params
    }

    pub fn ghat(&self) -> &CscMatrix {
        &self.ghat
    }

    pub fn ghat2(&self) -> &CscMatrix {
        &self.ghat2
    }

    pub fn is_dangling(&self, h: u32) -> bool {
        self.dangling[h as usize]
    }

    pub fn dangling(&self) -> &[bool] {
        &self.dangling
    }

    pub fn dangling_count(&self) -> u32 {
        self.dangling_count
    }

    pub fn gu(&self) -> &[f64] {
        &self.gu
    }

    pub fn gv(&self) -> &[f64] {
        &self.gv
    }

    pub fn gtd(&self) -> &[f64] {
        &self.gtd
    }

    pub fn ghat_rowsum(&self) -> &[f64] {
        &self.ghat_rowsum
    }

    pub fn ghat_colsum(&self) -> &[f64] {
        &self.ghat_colsum
    }

    pub fn ghat2_rowsum(&self) -> &[f64] {
        &self.ghat2_rowsum
    }

    pub fn dtu(&self) -> f64 {
        self.dtu
    }

    pub fn dtv(&self) -> f64 {
        self.dtv
    }

    pub fn rowsum_g(&self) -> &[f64] {
        &self.rowsum_g
    }

    pub fn rowsum_g2(&self) -> &[f64] {
        &self.rowsum_g2
    }

    /// Row sums of `A` as a slice (serialization; does not count as an
    /// instrumented read).
    pub fn rowsums_a(&self) -> &[f64] {
        &self.rowsum_a
    }

    /// Row sums of `B` as a slice (serialization; does not count as an
    /// instrumented read).
    pub fn rowsums_b(&self) -> &[f64] {
        &self.rowsum_b
    }

    /// Whether both teleport vectors are uniform, which makes entry
    /// differences vanish outside in-neighborhoods.
    pub fn uniform_teleport(&self) -> bool {
        self.params.is_uniform_u() && self.params.is_uniform_v()
    }

    /// In-neighborhood of node `i`: all columns h with `ghat[i][h] != 0`.
    pub fn in_support(&self, i: u32) -> &[u32] {
        &self.row_cols[self.row_ptr[i as usize]..self.row_ptr[i as usize + 1]]
    }

    // --- instrumentation ---

    #[inline]
    fn bump(&self) {
        self.reads.fetch_add(1, Ordering::Relaxed);
    }

    /// Number of O(1) context-entry reads since the last reset.
    pub fn access_count(&self) -> u64 {
        self.reads.load(Ordering::Relaxed)
    }

    pub fn reset_access_count(&self) {
        self.reads.store(0, Ordering::Relaxed);
    }

    // --- O(1) accessors ---

    #[inline]
    fn u_at(&self, i: u32) -> f64 {
        self.params.u_at(i, self.n)
    }

    #[inline]
    fn v_at(&self, i: u32) -> f64 {
        self.params.v_at(i, self.n)
    }

    #[inline]
    fn d_at(&self, h: u32) -> f64 {
        if self.dangling[h as usize] {
            1.0
        } else {
            0.0
        }
    }

    /// `g[i][h]` of the implicit Google matrix.
    fn entry_g_inner(&self, i: u32, h: u32) -> f64 {
        let alpha = self.params.alpha();
        alpha * (self.ghat.get(i, h) + self.u_at(i) * self.d_at(h))
            + (1.0 - alpha) * self.v_at(i)
    }

    /// `g2[i][h]` of the implicit `G^2`.
    fn entry_g2_inner(&self, i: u32, h: u32) -> f64 {
        let a = self.params.alpha();
        let b = 1.0 - a;
        let (iu, hu) = (i as usize, h as usize);
        a * a * self.ghat2.get(i, h)
            + a * a * self.gu[iu] * self.d_at(h)
            + a * b * self.gv[iu]
            + a * a * self.u_at(i) * self.gtd[hu]
            + a * b * self.v_at(i) * self.ghat_colsum[hu]
            + a * a * self.dtu * self.u_at(i) * self.d_at(h)
            + a * b * self.dtv * self.u_at(i)
            + a * b * self.v_at(i) * self.d_at(h)
            + b * b * self.v_at(i)
    }

    /// `a[i][h]` where `A = G - I`.
    pub fn entry_a(&self, i: u32, h: u32) -> f64 {
        self.bump();
        self.entry_g_inner(i, h) - if i == h { 1.0 } else { 0.0 }
    }

    /// `b[i][h]` where `B = A^2 = G^2 - 2G + I`.
    pub fn entry_b(&self, i: u32, h: u32) -> f64 {
        self.bump();
        self.entry_g2_inner(i, h) - 2.0 * self.entry_g_inner(i, h)
            + if i == h { 1.0 } else { 0.0 }
    }

    /// `a[i][h] - a[j][h]` with the rank-one terms cancelled
    /// analytically: under uniform `u = v` and `h` outside `{i, j}` this
    /// is exactly `alpha (ghat[i][h] - ghat[j][h])`.
    pub fn diff_a(&self, i: u32, j: u32, h: u32) -> f64 {
        self.bump();
        let alpha = self.params.alpha();
        let gd = alpha * (self.ghat.get(i, h) - self.ghat.get(j, h));
        let ud = alpha * (self.u_at(i) - self.u_at(j)) * self.d_at(h);
        let vd = (1.0 - alpha) * (self.v_at(i) - self.v_at(j));
        let id = if i == h { 1.0 } else { 0.0 } - if j == h { 1.0 } else { 0.0 };
        gd + ud + vd - id
    }

    /// `b[i][h] - b[j][h]`, same cancellation strategy as [`Self::diff_a`].
    pub fn diff_b(&self, i: u32, j: u32, h: u32) -> f64 {
        self.bump();
        let a = self.params.alpha();
        let b = 1.0 - a;
        let (iu, ju, hu) = (i as usize, j as usize, h as usize);
        let du = self.u_at(i) - self.u_at(j);
        let dv = self.v_at(i) - self.v_at(j);
        let g2d = a * a * (self.ghat2.get(i, h) - self.ghat2.get(j, h))
            + a * a * (self.gu[iu] - self.gu[ju]) * self.d_at(h)
            + a * b * (self.gv[iu] - self.gv[ju])
            + a * a * du * self.gtd[hu]
            + a * b * dv * self.ghat_colsum[hu]
            + a * a * self.dtu * du * self.d_at(h)
            + a * b * self.dtv * du
            + a * b * dv * self.d_at(h)
            + b * b * dv;
        let gd = a * (self.ghat.get(i, h) - self.ghat.get(j, h))
            + a * du * self.d_at(h)
            + b * dv;
        let id = if i == h { 1.0 } else { 0.0 } - if j == h { 1.0 } else { 0.0 };
        g2d - 2.0 * gd + id
    }

    /// Row sum of `A`.
    pub fn row_sum_a(&self, i: u32) -> f64 {
        self.bump();
        self.rowsum_a[i as usize]
    }

    /// Row sum of `B`.
    pub fn row_sum_b(&self, i: u32) -> f64 {
        self.bump();
        self.rowsum_b[i as usize]
    }

    // --- implicit O(nnz) linear maps ---

    /// y = G x without materializing G.
    pub fn matvec_g(&self, x: &[f64]) -> Vec<f64> {
        let alpha = self.params.alpha();
        let n = self.n;
        let mut y = self.ghat.matvec(x);
        let dx: f64 = x
            .iter()
            .zip(&self.dangling)
            .filter(|(_, &d)| d)
            .map(|(x, _)| x)
            .sum();
        let ox: f64 = x.iter().sum();
        for i in 0..n {
            let iu = i as usize;
            y[iu] = alpha * (y[iu] + self.u_at(i) * dx) + (1.0 - alpha) * self.v_at(i) * ox;
        }
        y
    }

    /// y = A x = G x - x.
    pub fn matvec_a(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.matvec_g(x);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi -= xi;
        }
        y
    }

    /// y = A^T x = G^T x - x.
    pub fn matvec_a_transpose(&self, x: &[f64]) -> Vec<f64> {
        let alpha = self.params.alpha();
        let n = self.n as usize;
        let mut y = self.ghat.matvec_transpose(x);
        let ux: f64 = (0..self.n).map(|i| self.u_at(i) * x[i as usize]).sum();
        let vx: f64 = (0..self.n).map(|i| self.v_at(i) * x[i as usize]).sum();
        for h in 0..n {
            let dangle = if self.dangling[h] { ux } else { 0.0 };
            y[h] = alpha * (y[h] + dangle) + (1.0 - alpha) * vx - x[h];
        }
        y
    }
}
