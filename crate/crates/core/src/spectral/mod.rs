//! Desk-scale spectral laboratory.
//!
//! Decomposes `A = G - I` into the block-real eigenform
//! `A = P diag[l_1..l_r, A_{r+1}..A_{r+s}] P^{-1}` (real eigenvalues
//! first, complex pairs as 2x2 rotation-scaling blocks), evaluates the
//! matrix-exponential curve `F(A, w, t)` that interpolates between `w`
//! and the PageRank direction, and builds the two eigenvalue-derived
//! vectors whose angle `theta` predicts the pairwise correct rate via
//! `pi = 1 - theta / 180`.

pub mod eigen;

use alloc::vec::Vec;

use crate::dense::{DenseMatrix, LuFactors};
use crate::error::Error;

/// Hard cap for eigendecomposition size.
pub const SPECTRAL_CAP: usize = 2000;

/// Complex pairs with imaginary part below this are stored as two real
/// eigenvalues.
pub const COLLAPSE_TOL: f64 = 1e-10;

/// Eigenvalues in block-real order: `real` sorted descending, `pairs`
/// `(re, im)` with `im > 0` sorted descending by real part.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    real: Vec<f64>,
    pairs: Vec<(f64, f64)>,
}

impl Spectrum {
    /// Builds a spectrum from explicit eigenvalue lists (sorted here).
    /// Mainly useful for synthetic tests of the theta machinery.
    pub fn from_eigenvalues(mut real: Vec<f64>, mut pairs: Vec<(f64, f64)>) -> Self {
        real.sort_by(|a, b| b.partial_cmp(a).unwrap());
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        for p in &mut pairs {
            p.1 = p.1.abs();
        }
        Spectrum { real, pairs }
    }

    pub fn r(&self) -> usize {
        self.real.len()
    }

    pub fn s(&self) -> usize {
        self.pairs.len()
    }

    /// Total dimension `r + 2s`.
    pub fn dim(&self) -> usize {
        self.real.len() + 2 * self.pairs.len()
    }

    pub fn real_eigs(&self) -> &[f64] {
        &self.real
    }

    pub fn complex_eigs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    /// Smallest gap between consecutive sorted eigenvalue real parts;
    /// used for the repeated-eigenvalue conditioning warning.
    fn min_real_gap(&self) -> f64 {
        let mut keys: Vec<f64> = self.real.clone();
        keys.extend(self.pairs.iter().map(|p| p.0));
        keys.sort_by(|a, b| a.partial_cmp(b).unwrap());
        keys.windows(2).map(|w| w[1] - w[0]).fold(f64::MAX, f64::min)
    }
}

/// Block-real eigendecomposition of a dense matrix.
///
/// Columns of `basis` follow the spectrum order: one column per real
/// eigenvalue, then `(real part, imaginary part)` column pairs per
/// complex pair.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    spectrum: Spectrum,
    basis: DenseMatrix,
    inverse: DenseMatrix,
    /// Set when two eigenvalue real parts nearly coincide, which makes
    /// the basis ill-conditioned.
    pub conditioning_warning: bool,
}

impl SpectralDecomposition {
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn r(&self) -> usize {
        self.spectrum.r()
    }

    pub fn s(&self) -> usize {
        self.spectrum.s()
    }

    pub fn n(&self) -> usize {
        self.basis.n_rows()
    }

    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    pub fn inverse_basis(&self) -> &DenseMatrix {
        &self.inverse
    }

    /// Coordinates of `w` in the eigenbasis: `V w` with `V = P^{-1}`.
    pub fn coords(&self, w: &[f64]) -> Vec<f64> {
        self.inverse.matvec(w)
    }

    /// Reconstructs `A` from the decomposition (dense, O(n^2) memory).
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.n();
        // A = P * blockdiag * V, assembled as P * (blockdiag * V).
        let mut bv = DenseMatrix::zeros(n, n);
        let r = self.r();
        for (k, &lambda) in self.spectrum.real.iter().enumerate() {
            for j in 0..n {
                bv.set(k, j, lambda * self.inverse.get(k, j));
            }
        }
        for (k, &(lr, li)) in self.spectrum.pairs.iter().enumerate() {
            let (row_b, row_c) = (r + 2 * k, r + 2 * k + 1);
            for j in 0..n {
                let vb = self.inverse.get(row_b, j);
                let vc = self.inverse.get(row_c, j);
                bv.set(row_b, j, lr * vb + li * vc);
                bv.set(row_c, j, -li * vb + lr * vc);
            }
        }
        self.basis.matmul(&bv)
    }

    /// Applies the block-diagonal middle factor at matrix power `k` to
    /// eigencoordinates in place.
    fn apply_block_power(&self, coords: &mut [f64], k: u32) {
        let r = self.r();
        for (idx, &lambda) in self.spectrum.real.iter().enumerate() {
            coords[idx] *= libm::pow(lambda, k as f64);
        }
        for (p, &(lr, li)) in self.spectrum.pairs.iter().enumerate() {
            let (re, im) = complex_pow(lr, li, k);
            let (b, c) = (r + 2 * p, r + 2 * p + 1);
            let (cb, cc) = (coords[b], coords[c]);
            coords[b] = re * cb + im * cc;
            coords[c] = -im * cb + re * cc;
        }
    }

    /// `A^k w` through the decomposition.
    pub fn apply_power(&self, w: &[f64], k: u32) -> Vec<f64> {
        let mut coords = self.coords(w);
        self.apply_block_power(&mut coords, k);
        self.basis.matvec(&coords)
    }

    /// Evaluates the curve `F(A, w, t)`: every real mode decays as
    /// `exp(l t)` and every complex pair as a decaying rotation. At
    /// `t = 0` this returns `w`; as `t` grows it converges to the
    /// projection of `w` on the stationary direction.
    pub fn curve_eval(&self, w: &[f64], t: f64) -> Vec<f64> {
        let mut coords = self.coords(w);
        let r = self.r();
        for (idx, &lambda) in self.spectrum.real.iter().enumerate() {
            coords[idx] *= libm::exp(lambda * t);
        }
        for (p, &(lr, li)) in self.spectrum.pairs.iter().enumerate() {
            let scale = libm::exp(lr * t);
            let (cos, sin) = (libm::cos(li * t), libm::sin(li * t));
            let (b, c) = (r + 2 * p, r + 2 * p + 1);
            let (cb, cc) = (coords[b], coords[c]);
            // exp(t * block) = exp(lr t) [[cos, sin], [-sin, cos]].
            coords[b] = scale * (cos * cb + sin * cc);
            coords[c] = scale * (-sin * cb + cos * cc);
        }
        self.basis.matvec(&coords)
    }
}

fn complex_pow(re: f64, im: f64, k: u32) -> (f64, f64) {
    let (mut ar, mut ai) = (1.0, 0.0);
    for _ in 0..k {
        let nr = ar * re - ai * im;
        let ni = ar * im + ai * re;
        ar = nr;
        ai = ni;
    }
    (ar, ai)
}

fn check_cap(n: usize) -> Result<(), Error> {
    if n > SPECTRAL_CAP {
        return Err(Error::CapacityExceeded {
            what: "eigendecomposition nodes",
            needed: n,
            budget: SPECTRAL_CAP,
        });
    }
    Ok(())
}

/// Eigenvalues only, in block-real order. Much cheaper than a full
/// decomposition; this is what the theta benchmarks use.
pub fn eigenvalues_only(a: &DenseMatrix) -> Result<Spectrum, Error> {
    check_cap(a.n_rows())?;
    let out = eigen::eigen(a, false)?;
    Ok(split_spectrum(&out.re, &out.im).0)
}

/// Splits raw eigenvalue arrays into reals and positive-imaginary
/// pairs, collapsing near-real pairs, and returns the source index of
/// every kept entry (real index, or index of the pair's first column).
fn split_spectrum(re: &[f64], im: &[f64]) -> (Spectrum, Vec<SpectrumSource>) {
    let n = re.len();
    let scale = re
        .iter()
        .zip(im)
        .map(|(r, i)| r.abs() + i.abs())
        .fold(0.0, f64::max)
        .max(1.0);
    let mut reals: Vec<(f64, SpectrumSource)> = Vec::new();
    let mut pairs: Vec<((f64, f64), SpectrumSource)> = Vec::new();
    let mut k = 0;
    while k < n {
        if im[k] == 0.0 {
            reals.push((re[k], SpectrumSource::Real(k)));
            k += 1;
        } else {
            debug_assert!(k + 1 < n && im[k] > 0.0 && im[k + 1] < 0.0);
            if im[k].abs() < COLLAPSE_TOL * scale {
                // Near-real pair: treat as two equal real eigenvalues;
                // the basis columns stay as-is, which keeps P
                // invertible while the block error is below tolerance.
                reals.push((re[k], SpectrumSource::Real(k)));
                reals.push((re[k + 1], SpectrumSource::Real(k + 1)));
            } else {
                pairs.push(((re[k], im[k]), SpectrumSource::Pair(k)));
            }
            k += 2;
        }
    }
    reals.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    pairs.sort_by(|a, b| b.0 .0.partial_cmp(&a.0 .0).unwrap());
    let mut sources = Vec::with_capacity(n);
    let spectrum = Spectrum {
        real: reals
            .iter()
            .map(|(v, s)| {
                sources.push(*s);
                *v
            })
            .collect(),
        pairs: pairs
            .iter()
            .map(|(v, s)| {
                sources.push(*s);
                *v
            })
            .collect(),
    };
    (spectrum, sources)
}

#[derive(Debug, Clone, Copy)]
enum SpectrumSource {
    Real(usize),
    Pair(usize),
}

/// Full block-real decomposition of a dense matrix (`n <= 2000`).
///
/// Eigenvalues come from Hessenberg reduction plus double-shift QR;
/// eigenvectors from the same sweep via back-substitution. Columns are
/// arranged in spectrum order. A conditioning warning is attached when
/// eigenvalue real parts nearly coincide.
pub fn decompose(a: &DenseMatrix) -> Result<SpectralDecomposition, Error> {
    check_cap(a.n_rows())?;
    let n = a.n_rows();
    let out = eigen::eigen(a, true)?;
    let raw = out.vectors.expect("vectors were requested");
    let (spectrum, sources) = split_spectrum(&out.re, &out.im);

    let mut basis = DenseMatrix::zeros(n, n);
    let mut col = 0usize;
    for src in &sources {
        match *src {
            SpectrumSource::Real(k) => {
                for i in 0..n {
                    basis.set(i, col, raw.get(i, k));
                }
                col += 1;
            }
            SpectrumSource::Pair(k) => {
                // Column k holds the real part, k+1 the imaginary part
                // of the eigenvector for the +im eigenvalue. Verify the
                // rotation-block convention on the fly and flip the
                // imaginary column if the solver produced the conjugate.
                let (lr, li) = pair_value(&spectrum, &sources, col);
                let vr: Vec<f64> = (0..n).map(|i| raw.get(i, k)).collect();
                let vi: Vec<f64> = (0..n).map(|i| raw.get(i, k + 1)).collect();
                let keep = block_residual(a, &vr, &vi, lr, li);
                let flip = block_residual(
                    a,
                    &vr,
                    &vi.iter().map(|x| -x).collect::<Vec<_>>(),
                    lr,
                    li,
                );
                let sign = if flip < keep { -1.0 } else { 1.0 };
                for i in 0..n {
                    basis.set(i, col, vr[i]);
                    basis.set(i, col + 1, sign * vi[i]);
                }
                col += 2;
            }
        }
    }

    let inverse = LuFactors::factor(&basis)
        .map_err(|_| Error::NumericalFailure {
            what: "eigenbasis inversion",
            reason: alloc::string::String::from("basis matrix is singular"),
        })?
        .inverse();

    let scale = spectrum
        .real
        .iter()
        .copied()
        .chain(spectrum.pairs.iter().map(|p| p.0))
        .map(f64::abs)
        .fold(0.0, f64::max)
        .max(1.0);
    let conditioning_warning = spectrum.min_real_gap() < 1e-12 * scale;

    Ok(SpectralDecomposition {
        spectrum,
        basis,
        inverse,
        conditioning_warning,
    })
}

fn pair_value(spectrum: &Spectrum, sources: &[SpectrumSource], col: usize) -> (f64, f64) {
    // `col` is the basis column where this pair starts; pairs live after
    // the r real columns, two columns each.
    let r = spectrum.r();
    debug_assert!(col >= r);
    let _ = sources;
    spectrum.pairs[(col - r) / 2]
}

fn block_residual(a: &DenseMatrix, vr: &[f64], vi: &[f64], lr: f64, li: f64) -> f64 {
    let avr = a.matvec(vr);
    let avi = a.matvec(vi);
    let mut worst: f64 = 0.0;
    for k in 0..vr.len() {
        let re = avr[k] - (lr * vr[k] - li * vi[k]);
        let im = avi[k] - (li * vr[k] + lr * vi[k]);
        worst = worst.max(re.abs()).max(im.abs());
    }
    worst
}

/// Finite-difference verification of the curve's derivative identities
/// at `t = 0`.
#[derive(Debug, Clone, Copy)]
pub struct DerivativeReport {
    /// Max norm-relative error of the first-derivative stencil vs `A w`.
    pub first_rel_err: f64,
    /// Max norm-relative error of the 5-point second-derivative stencil
    /// vs `A^2 w`.
    pub second_rel_err: f64,
}

/// Checks `F'(0) = A w` (central difference, step 1e-6) and
/// `F''(0) = A^2 w` (5-point stencil, step 1e-2) through the
/// decomposition; returns the norm-relative errors.
pub fn derivative_identities(dec: &SpectralDecomposition, w: &[f64]) -> DerivativeReport {
    let aw = dec.apply_power(w, 1);
    let a2w = dec.apply_power(w, 2);

    let h1 = 1e-6;
    let fp = dec.curve_eval(w, h1);
    let fm = dec.curve_eval(w, -h1);
    let first_rel_err = rel_vec_err(
        &fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h1)).collect::<Vec<_>>(),
        &aw,
    );

    let h2 = 1e-2;
    let f2p = dec.curve_eval(w, 2.0 * h2);
    let f1p = dec.curve_eval(w, h2);
    let f0 = dec.curve_eval(w, 0.0);
    let f1m = dec.curve_eval(w, -h2);
    let f2m = dec.curve_eval(w, -2.0 * h2);
    let stencil: Vec<f64> = (0..w.len())
        .map(|k| {
            (-f2p[k] + 16.0 * f1p[k] - 30.0 * f0[k] + 16.0 * f1m[k] - f2m[k]) / (12.0 * h2 * h2)
        })
        .collect();
    let second_rel_err = rel_vec_err(&stencil, &a2w);

    DerivativeReport {
        first_rel_err,
        second_rel_err,
    }
}

fn rel_vec_err(got: &[f64], want: &[f64]) -> f64 {
    let scale = want.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300);
    got.iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Which redundant item the Theorem-4 elimination removed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// A complex pair exists; its combined coordinate was eliminated.
    Case1,
    /// All-real leading spectrum; the second real coordinate was
    /// eliminated.
    Case2,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Case1 => "case1",
            CaseTag::Case2 => "case2",
        }
    }
}

/// One eigencoordinate of the beta vector: a real mode, or one of the
/// two combined coordinates of a complex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    /// Index into the sorted real eigenvalue list (1-based from lambda_2,
    /// stored as 0-based list index >= 1).
    Real(usize),
    /// Combined coordinate `w_B tau_B + w_C tau_C` of pair `k`.
    PairB(usize),
    /// Combined coordinate `w_C tau_B - w_B tau_C` of pair `k`.
    PairC(usize),
}

impl Coord {
    /// Coefficient of this coordinate in the order-`k` constraint (the
    /// expansion of `(A^k w)_i - (A^k w)_j`).
    fn coeff(self, spectrum: &Spectrum, k: u32) -> f64 {
        match self {
            Coord::Real(idx) => libm::pow(spectrum.real[idx], k as f64),
            Coord::PairB(p) => {
                let (lr, li) = spectrum.pairs[p];
                complex_pow(lr, li, k).0
            }
            Coord::PairC(p) => {
                let (lr, li) = spectrum.pairs[p];
                complex_pow(lr, li, k).1
            }
        }
    }

    /// Coefficient in the stationary difference `Delta(inf)`: 1 for real
    /// and B coordinates, 0 for C coordinates.
    fn delta_coeff(self) -> f64 {
        match self {
            Coord::Real(_) | Coord::PairB(_) => 1.0,
            Coord::PairC(_) => 0.0,
        }
    }
}

/// The two (n - m)-dimensional vectors of Theorem 4 (general order via
/// the eigencoordinate elimination), plus the coordinate plan needed to
/// evaluate the identity.
#[derive(Debug, Clone)]
pub struct Theorem4Vectors {
    pub lambda_bar_1: Vec<f64>,
    pub lambda_bar_2: Vec<f64>,
    pub case_tag: CaseTag,
    pub m: u32,
    /// Coordinates retained in the beta vector, in output order.
    pub retained: Vec<Coord>,
    /// Coordinates eliminated through the order-1..m-1 constraints.
    pub eliminated: Vec<Coord>,
}

/// Builds the Theorem-4 vector pair for sign-mirror order `m`.
///
/// All non-principal eigencoordinates are listed; `m - 1` of them are
/// eliminated through the constraints `(A^k w)_i = (A^k w)_j`,
/// `k = 1..m-1`, and the stationary difference and order-`m` value are
/// re-expressed over the rest:
///
/// - `Delta(inf) = lambda_bar_1 . beta`
/// - `phi = lambda_bar_2 . beta`
///
/// For `m = 2` the eliminated coordinate is the first complex pair's
/// combined coordinate when one exists (case 1), else the second real
/// coordinate (case 2), which reproduces the printed forms exactly,
/// including the all-real specialization. For `m > 2` the eliminated
/// set walks the eigencoordinates in descending real-part order, which
/// matches the paper's ordering assumption when the top of the spectrum
/// is real and falls back to case-1 ordering otherwise; near-dependent
/// columns are skipped to keep the small system invertible.
pub fn theorem4_vectors(spectrum: &Spectrum, m: u32) -> Result<Theorem4Vectors, Error> {
    if !(2..=4).contains(&m) {
        return Err(Error::param("m", "order must lie in 2..=4"));
    }
    let n = spectrum.dim();
    if n < m as usize + 2 {
        return Err(Error::param("n", "need n >= m + 2 eigenvalues"));
    }
    if spectrum.r() == 0 {
        return Err(Error::param("spectrum", "need the principal real eigenvalue"));
    }

    // All candidate coordinates except the principal one, in descending
    // real-part order with pair coordinates adjacent (B before C).
    let mut order: Vec<Coord> = Vec::with_capacity(n - 1);
    {
        let mut ri = 1usize;
        let mut pi = 0usize;
        while ri < spectrum.r() || pi < spectrum.s() {
            let take_real = match (spectrum.real.get(ri), spectrum.pairs.get(pi)) {
                (Some(&lr), Some(&(pr, _))) => lr >= pr,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if take_real {
                order.push(Coord::Real(ri));
                ri += 1;
            } else {
                order.push(Coord::PairB(pi));
                order.push(Coord::PairC(pi));
                pi += 1;
            }
        }
    }

    let needed = (m - 1) as usize;
    let mut eliminated: Vec<Coord> = Vec::with_capacity(needed);
    if m == 2 {
        // Theorem 4 precedence: case 1 whenever a complex pair exists.
        if spectrum.s() >= 1 {
            eliminated.push(Coord::PairB(0));
        } else {
            eliminated.push(Coord::Real(1));
        }
    } else {
        // Greedy pick down the merged order, skipping coordinates whose
        // constraint columns are nearly dependent on those chosen.
        let mut chosen_cols: Vec<Vec<f64>> = Vec::new();
        for &cand in &order {
            if eliminated.len() == needed {
                break;
            }
            let col: Vec<f64> = (1..m).map(|k| cand.coeff(spectrum, k)).collect();
            let norm = libm::sqrt(col.iter().map(|x| x * x).sum::<f64>());
            if norm == 0.0 {
                continue;
            }
            // Residual after projecting on the chosen columns.
            let mut resid = col.clone();
            for basis in &chosen_cols {
                let dot: f64 = resid.iter().zip(basis).map(|(a, b)| a * b).sum();
                for (r, b) in resid.iter_mut().zip(basis) {
                    *r -= dot * b;
                }
            }
            let rnorm = libm::sqrt(resid.iter().map(|x| x * x).sum::<f64>());
            if rnorm < 1e-9 * norm {
                continue;
            }
            for x in resid.iter_mut() {
                *x /= rnorm;
            }
            chosen_cols.push(resid);
            eliminated.push(cand);
        }
        if eliminated.len() < needed {
            return Err(Error::NumericalFailure {
                what: "theorem4 elimination",
                reason: alloc::string::String::from(
                    "could not find independent coordinates to eliminate",
                ),
            });
        }
    }

    let case_tag = match eliminated[0] {
        Coord::PairB(_) | Coord::PairC(_) => CaseTag::Case1,
        Coord::Real(_) => CaseTag::Case2,
    };

    let retained: Vec<Coord> = order
        .iter()
        .copied()
        .filter(|c| !eliminated.contains(c))
        .collect();
    debug_assert_eq!(retained.len(), n - m as usize);

    // Solve M^T y = rhs for the two folding vectors, where
    // M[k][e] = coeff(eliminated[e], order k+1).
    let dim = needed;
    let mut mt = DenseMatrix::zeros(dim, dim);
    for (e, &coord) in eliminated.iter().enumerate() {
        for k in 0..dim {
            // (M^T)[e][k] = M[k][e]
            mt.set(e, k, coord.coeff(spectrum, k as u32 + 1));
        }
    }
    let lu = LuFactors::factor(&mt).map_err(|_| Error::NumericalFailure {
        what: "theorem4 elimination",
        reason: alloc::string::String::from("singular elimination system"),
    })?;
    let a_e: Vec<f64> = eliminated.iter().map(|c| c.delta_coeff()).collect();
    let g_e: Vec<f64> = eliminated.iter().map(|c| c.coeff(spectrum, m)).collect();
    let fold_delta = lu.solve(&a_e);
    let fold_phi = lu.solve(&g_e);

    let mut lambda_bar_1 = Vec::with_capacity(retained.len());
    let mut lambda_bar_2 = Vec::with_capacity(retained.len());
    for &coord in &retained {
        let col: Vec<f64> = (1..=dim as u32).map(|k| coord.coeff(spectrum, k)).collect();
        let fold1: f64 = fold_delta.iter().zip(&col).map(|(a, b)| a * b).sum();
        let fold2: f64 = fold_phi.iter().zip(&col).map(|(a, b)| a * b).sum();
        lambda_bar_1.push(fold1 - coord.delta_coeff());
        lambda_bar_2.push(coord.coeff(spectrum, m) - fold2);
    }

    Ok(Theorem4Vectors {
        lambda_bar_1,
        lambda_bar_2,
        case_tag,
        m,
        retained,
        eliminated,
    })
}

/// Angle between the two vectors, in degrees within [0, 180].
pub fn theta_degrees(l1: &[f64], l2: &[f64]) -> Result<f64, Error> {
    let n1 = libm::sqrt(l1.iter().map(|x| x * x).sum::<f64>());
    let n2 = libm::sqrt(l2.iter().map(|x| x * x).sum::<f64>());
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::Precondition {
            what: "theta",
            reason: alloc::string::String::from("angle undefined for a zero vector"),
        });
    }
    let dot: f64 = l1.iter().zip(l2).map(|(a, b)| a * b).sum();
    let cos = (dot / (n1 * n2)).clamp(-1.0, 1.0);
    Ok(libm::acos(cos) * 180.0 / core::f64::consts::PI)
}

/// Correct-rate estimate `pi = 1 - theta / 180`.
pub fn pi_estimate(theta_deg: f64) -> f64 {
    1.0 - theta_deg / 180.0
}

/// Angle report for one (graph, m) configuration.
#[derive(Debug, Clone)]
pub struct ThetaReport {
    pub theta_deg: f64,
    pub pi_estimate: f64,
    pub case_tag: CaseTag,
    pub m: u32,
    pub lambda_bar_1: Vec<f64>,
    pub lambda_bar_2: Vec<f64>,
}

/// Convenience wrapper: Theorem-4 vectors plus their angle.
pub fn theta_report(spectrum: &Spectrum, m: u32) -> Result<ThetaReport, Error> {
    let v = theorem4_vectors(spectrum, m)?;
    let theta = theta_degrees(&v.lambda_bar_1, &v.lambda_bar_2)?;
    Ok(ThetaReport {
        theta_deg: theta,
        pi_estimate: pi_estimate(theta),
        case_tag: v.case_tag,
        m,
        lambda_bar_1: v.lambda_bar_1,
        lambda_bar_2: v.lambda_bar_2,
    })
}

/// Verifies the Theorem-4 product identity
/// `phi * Delta(inf) = (lambda_bar_1 . beta)(lambda_bar_2 . beta)` for a
/// weight vector `w` satisfying the order-`m` constraints for `(i, j)`,
/// returning the relative residual.
///
/// Only the equality constraints are checked as preconditions; the
/// identity is algebraic and does not need `w >= 0`.
pub fn theorem4_identity_check(
    dec: &SpectralDecomposition,
    w: &[f64],
    i: u32,
    j: u32,
    m: u32,
) -> Result<f64, Error> {
    let n = dec.n();
    let (iu, ju) = (i as usize, j as usize);
    assert!(iu < n && ju < n && iu != ju, "need two distinct nodes");

    let wscale = w.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300);
    if (w[iu] - w[ju]).abs() > 1e-9 * wscale {
        return Err(Error::Precondition {
            what: "theorem4_identity_check",
            reason: alloc::string::String::from("w_i != w_j"),
        });
    }
    for k in 1..m {
        let akw = dec.apply_power(w, k);
        let scale = akw.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300);
        if (akw[iu] - akw[ju]).abs() > 1e-8 * scale {
            return Err(Error::Precondition {
                what: "theorem4_identity_check",
                reason: alloc::format!("(A^{k} w)_i != (A^{k} w)_j"),
            });
        }
    }

    let coords = dec.coords(w);
    let spectrum = dec.spectrum();
    let r = spectrum.r();
    let tau = |k: usize| dec.basis().get(iu, k) - dec.basis().get(ju, k);

    // Coordinate values y_l of the expansion.
    let coord_value = |c: Coord| -> f64 {
        match c {
            Coord::Real(idx) => coords[idx] * tau(idx),
            Coord::PairB(p) => {
                let (b, c2) = (r + 2 * p, r + 2 * p + 1);
                coords[b] * tau(b) + coords[c2] * tau(c2)
            }
            Coord::PairC(p) => {
                let (b, c2) = (r + 2 * p, r + 2 * p + 1);
                coords[c2] * tau(b) - coords[b] * tau(c2)
            }
        }
    };

    let vectors = theorem4_vectors(spectrum, m)?;
    let beta: Vec<f64> = vectors.retained.iter().map(|&c| coord_value(c)).collect();

    // Delta(inf) = w_1 tau_1 (projection on the stationary direction).
    let delta = coords[0] * tau(0);
    let amw = dec.apply_power(w, m);
    let phi = amw[iu] - amw[ju];

    let lhs = phi * delta;
    let d1: f64 = vectors.lambda_bar_1.iter().zip(&beta).map(|(a, b)| a * b).sum();
    let d2: f64 = vectors.lambda_bar_2.iter().zip(&beta).map(|(a, b)| a * b).sum();
    let rhs = d1 * d2;
    Ok((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-300))
}
