//! Nonsymmetric dense eigensolver: Householder reduction to Hessenberg
//! form followed by Francis double-shift QR iteration, with optional
//! eigenvector recovery by quasi-triangular back-substitution.
//!
//! This is the classic EISPACK/JAMA algorithm specialized to `f64`.
//! Eigenvalues come back as parallel real/imaginary arrays; for a
//! complex conjugate pair at positions `(k, k+1)` the vector matrix
//! holds the real part in column `k` and the imaginary part in column
//! `k + 1`.

use alloc::vec::Vec;

use crate::dense::DenseMatrix;
use crate::error::Error;

const EPS: f64 = 2.220446049250313e-16;
/// QR sweeps allowed per eigenvalue before declaring non-convergence.
const MAX_ITER_PER_EIG: u32 = 100;

pub struct EigenOutput {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    /// Eigenvector matrix in the real-pair convention, when requested.
    pub vectors: Option<DenseMatrix>,
}

/// Computes eigenvalues (and optionally eigenvectors) of a real square
/// matrix.
pub fn eigen(a: &DenseMatrix, want_vectors: bool) -> Result<EigenOutput, Error> {
    assert_eq!(a.n_rows(), a.n_cols(), "matrix must be square");
    let n = a.n_rows();
    let mut h: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut v: Vec<Vec<f64>> = if want_vectors {
        (0..n)
            .map(|i| {
                let mut row = alloc::vec![0.0; n];
                row[i] = 1.0;
                row
            })
            .collect()
    } else {
        Vec::new()
    };

    orthes(&mut h, &mut v, want_vectors);
    let (re, im) = hqr2(&mut h, &mut v, want_vectors)?;

    let vectors = want_vectors.then(|| {
        let mut m = DenseMatrix::zeros(n, n);
        for (i, row) in v.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    });
    Ok(EigenOutput { re, im, vectors })
}

/// Householder reduction to upper Hessenberg form, accumulating the
/// orthogonal similarity in `v` when requested.
fn orthes(h: &mut [Vec<f64>], v: &mut [Vec<f64>], want_vectors: bool) {
    let n = h.len();
    if n < 3 {
        return;
    }
    let low = 0;
    let high = n - 1;
    let mut ort = alloc::vec![0.0; n];

    for m in low + 1..high {
        let mut scale = 0.0;
        for row in h.iter().take(high + 1).skip(m) {
            scale += row[m - 1].abs();
        }
        if scale != 0.0 {
            let mut hsum = 0.0;
            for i in (m..=high).rev() {
                ort[i] = h[i][m - 1] / scale;
                hsum += ort[i] * ort[i];
            }
            let mut g = libm::sqrt(hsum);
            if ort[m] > 0.0 {
                g = -g;
            }
            let hh = hsum - ort[m] * g;
            ort[m] -= g;

            for j in m..n {
                let mut f = 0.0;
                for i in (m..=high).rev() {
                    f += ort[i] * h[i][j];
                }
                f /= hh;
                for (i, o) in ort.iter().enumerate().take(high + 1).skip(m) {
                    h[i][j] -= f * o;
                }
            }
            for i in 0..=high {
                let mut f = 0.0;
                for j in (m..=high).rev() {
                    f += ort[j] * h[i][j];
                }
                f /= hh;
                for (j, o) in ort.iter().enumerate().take(high + 1).skip(m) {
                    h[i][j] -= f * o;
                }
            }
            ort[m] *= scale;
            h[m][m - 1] = scale * g;
        }
    }

    if want_vectors {
        for m in (low + 1..high).rev() {
            if h[m][m - 1] != 0.0 {
                for i in m + 1..=high {
                    ort[i] = h[i][m - 1];
                }
                for j in m..=high {
                    let mut g = 0.0;
                    for (i, row) in v.iter().enumerate().take(high + 1).skip(m) {
                        g += ort[i] * row[j];
                    }
                    // Double division avoids potential underflow.
                    g = (g / ort[m]) / h[m][m - 1];
                    for (i, row) in v.iter_mut().enumerate().take(high + 1).skip(m) {
                        row[j] += g * ort[i];
                    }
                }
            }
        }
    }
}

/// Complex scalar division `(xr + i xi) / (yr + i yi)` with scaling.
fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> (f64, f64) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

/// Francis double-shift QR on a Hessenberg matrix, with eigenvector
/// recovery by back-substitution when `want_vectors` is set.
#[allow(clippy::needless_range_loop)]
fn hqr2(
    h: &mut [Vec<f64>],
    v: &mut [Vec<f64>],
    want_vectors: bool,
) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let nn = h.len();
    let mut d = alloc::vec![0.0; nn];
    let mut e = alloc::vec![0.0; nn];
    if nn == 0 {
        return Ok((d, e));
    }
    let low = 0isize;
    let high = nn as isize - 1;
    let mut n = nn as isize - 1;
    let mut exshift = 0.0;
    let (mut p, mut q, mut r, mut s, mut z, mut w, mut x, mut y);
    p = 0.0;
    q = 0.0;
    r = 0.0;
    s = 0.0;
    z = 0.0;

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[i][j].abs();
        }
    }

    let mut iter: u32 = 0;
    while n >= low {
        // Look for a single small subdiagonal element.
        let mut l = n;
        while l > low {
            s = h[(l - 1) as usize][(l - 1) as usize].abs() + h[l as usize][l as usize].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[l as usize][(l - 1) as usize].abs() < EPS * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // One root found.
            let nu = n as usize;
            h[nu][nu] += exshift;
            d[nu] = h[nu][nu];
            e[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // Two roots found.
            let nu = n as usize;
            w = h[nu][nu - 1] * h[nu - 1][nu];
            p = (h[nu - 1][nu - 1] - h[nu][nu]) / 2.0;
            q = p * p + w;
            z = libm::sqrt(q.abs());
            h[nu][nu] += exshift;
            h[nu - 1][nu - 1] += exshift;
            x = h[nu][nu];

            if q >= 0.0 {
                // Real pair.
                z = if p >= 0.0 { p + z } else { p - z };
                d[nu - 1] = x + z;
                d[nu] = d[nu - 1];
                if z != 0.0 {
                    d[nu] = x - w / z;
                }
                e[nu - 1] = 0.0;
                e[nu] = 0.0;
                x = h[nu][nu - 1];
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = libm::sqrt(p * p + q * q);
                p /= r;
                q /= r;
                for j in nu - 1..nn {
                    z = h[nu - 1][j];
                    h[nu - 1][j] = q * z + p * h[nu][j];
                    h[nu][j] = q * h[nu][j] - p * z;
                }
                for i in 0..=nu {
                    z = h[i][nu - 1];
                    h[i][nu - 1] = q * z + p * h[i][nu];
                    h[i][nu] = q * h[i][nu] - p * z;
                }
                if want_vectors {
                    for i in low as usize..=high as usize {
                        z = v[i][nu - 1];
                        v[i][nu - 1] = q * z + p * v[i][nu];
                        v[i][nu] = q * v[i][nu] - p * z;
                    }
                }
            } else {
                // Complex pair.
                d[nu - 1] = x + p;
                d[nu] = x + p;
                e[nu - 1] = z;
                e[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // No convergence yet; form a shift.
            let nu = n as usize;
            x = h[nu][nu];
            y = 0.0;
            w = 0.0;
            if l < n {
                y = h[nu - 1][nu - 1];
                w = h[nu][nu - 1] * h[nu - 1][nu];
            }

            // Wilkinson's original ad hoc shift.
            if iter == 10 || iter == 20 {
                exshift += x;
                for i in low..=n {
                    h[i as usize][i as usize] -= x;
                }
                s = h[nu][nu - 1].abs() + h[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }

            // MATLAB's ad hoc shift.
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = libm::sqrt(s);
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low..=n {
                        h[i as usize][i as usize] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = 0.964;
                    w = 0.964;
                }
            }

            iter += 1;
            if iter > MAX_ITER_PER_EIG {
                return Err(Error::NumericalFailure {
                    what: "qr iteration",
                    reason: alloc::format!(
                        "no convergence for eigenvalue {n} after {MAX_ITER_PER_EIG} sweeps"
                    ),
                });
            }

            // Look for two consecutive small sub-diagonal elements.
            let mut m = n - 2;
            while m >= l {
                let mu = m as usize;
                z = h[mu][mu];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[mu + 1][mu] + h[mu][mu + 1];
                q = h[mu + 1][mu + 1] - z - r - s;
                r = h[mu + 2][mu + 1];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[mu][mu - 1].abs() * (q.abs() + r.abs())
                    < EPS
                        * (p.abs()
                            * (h[mu - 1][mu - 1].abs() + z.abs() + h[mu + 1][mu + 1].abs()))
                {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=n {
                let iu = i as usize;
                h[iu][iu - 2] = 0.0;
                if i > m + 2 {
                    h[iu][iu - 3] = 0.0;
                }
            }

            // Double QR step on rows l..n and columns m..n.
            for k in m..n {
                let ku = k as usize;
                let notlast = k != n - 1;
                if k != m {
                    p = h[ku][ku - 1];
                    q = h[ku + 1][ku - 1];
                    r = if notlast { h[ku + 2][ku - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = libm::sqrt(p * p + q * q + r * r);
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h[ku][ku - 1] = -s * x;
                    } else if l != m {
                        h[ku][ku - 1] = -h[ku][ku - 1];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in ku..nn {
                        p = h[ku][j] + q * h[ku + 1][j];
                        if notlast {
                            p += r * h[ku + 2][j];
                            h[ku + 2][j] -= p * z;
                        }
                        h[ku][j] -= p * x;
                        h[ku + 1][j] -= p * y;
                    }
                    let upper = if n < k + 3 { n } else { k + 3 } as usize;
                    for i in 0..=upper {
                        p = x * h[i][ku] + y * h[i][ku + 1];
                        if notlast {
                            p += z * h[i][ku + 2];
                            h[i][ku + 2] -= p * r;
                        }
                        h[i][ku] -= p;
                        h[i][ku + 1] -= p * q;
                    }
                    if want_vectors {
                        for i in low as usize..=high as usize {
                            p = x * v[i][ku] + y * v[i][ku + 1];
                            if notlast {
                                p += z * v[i][ku + 2];
                                v[i][ku + 2] -= p * r;
                            }
                            v[i][ku] -= p;
                            v[i][ku + 1] -= p * q;
                        }
                    }
                }
            }
        }
    }

    if !want_vectors {
        return Ok((d, e));
    }
    if norm == 0.0 {
        return Ok((d, e));
    }

    // Back-substitute to find vectors of the quasi-triangular form.
    for nb in (0..nn as isize).rev() {
        let nu = nb as usize;
        p = d[nu];
        q = e[nu];
        if q == 0.0 {
            // Real eigenvector.
            let mut l = nb;
            h[nu][nu] = 1.0;
            if nb > 0 {
                for i in (0..=nb - 1).rev() {
                    let iu = i as usize;
                    w = h[iu][iu] - p;
                    r = 0.0;
                    for j in l as usize..=nu {
                        r += h[iu][j] * h[j][nu];
                    }
                    if e[iu] < 0.0 {
                        z = w;
                        s = r;
                    } else {
                        l = i;
                        if e[iu] == 0.0 {
                            h[iu][nu] = if w != 0.0 { -r / w } else { -r / (EPS * norm) };
                        } else {
                            // Solve the 2x2 real system for the pair row.
                            x = h[iu][iu + 1];
                            y = h[iu + 1][iu];
                            q = (d[iu] - p) * (d[iu] - p) + e[iu] * e[iu];
                            let t = (x * s - z * r) / q;
                            h[iu][nu] = t;
                            h[iu + 1][nu] = if x.abs() > z.abs() {
                                (-r - w * t) / x
                            } else {
                                (-s - y * t) / z
                            };
                        }
                        // Overflow control.
                        let t = h[iu][nu].abs();
                        if (EPS * t) * t > 1.0 {
                            for j in iu..=nu {
                                h[j][nu] /= t;
                            }
                        }
                    }
                }
            }
        } else if q < 0.0 {
            // Complex eigenvector (the pair occupies columns nu-1, nu).
            let mut l = nb - 1;
            if h[nu][nu - 1].abs() > h[nu - 1][nu].abs() {
                h[nu - 1][nu - 1] = q / h[nu][nu - 1];
                h[nu - 1][nu] = -(h[nu][nu] - p) / h[nu][nu - 1];
            } else {
                let (cr, ci) = cdiv(0.0, -h[nu - 1][nu], h[nu - 1][nu - 1] - p, q);
                h[nu - 1][nu - 1] = cr;
                h[nu - 1][nu] = ci;
            }
            h[nu][nu - 1] = 0.0;
            h[nu][nu] = 1.0;
            if nb > 1 {
                for i in (0..=nb - 2).rev() {
                    let iu = i as usize;
                    let mut ra = 0.0;
                    let mut sa = 0.0;
                    for j in l as usize..=nu {
                        ra += h[iu][j] * h[j][nu - 1];
                        sa += h[iu][j] * h[j][nu];
                    }
                    w = h[iu][iu] - p;
                    if e[iu] < 0.0 {
                        z = w;
                        r = ra;
                        s = sa;
                    } else {
                        l = i;
                        if e[iu] == 0.0 {
                            let (cr, ci) = cdiv(-ra, -sa, w, q);
                            h[iu][nu - 1] = cr;
                            h[iu][nu] = ci;
                        } else {
                            // Solve complex 2x2 system.
                            x = h[iu][iu + 1];
                            y = h[iu + 1][iu];
                            let mut vr = (d[iu] - p) * (d[iu] - p) + e[iu] * e[iu] - q * q;
                            let vi = (d[iu] - p) * 2.0 * q;
                            if vr == 0.0 && vi == 0.0 {
                                vr = EPS
                                    * norm
                                    * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                            }
                            let (cr, ci) =
                                cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                            h[iu][nu - 1] = cr;
                            h[iu][nu] = ci;
                            if x.abs() > z.abs() + q.abs() {
                                h[iu + 1][nu - 1] =
                                    (-ra - w * h[iu][nu - 1] + q * h[iu][nu]) / x;
                                h[iu + 1][nu] = (-sa - w * h[iu][nu] - q * h[iu][nu - 1]) / x;
                            } else {
                                let (cr, ci) =
                                    cdiv(-r - y * h[iu][nu - 1], -s - y * h[iu][nu], z, q);
                                h[iu + 1][nu - 1] = cr;
                                h[iu + 1][nu] = ci;
                            }
                        }
                        // Overflow control.
                        let t = if h[iu][nu - 1].abs() > h[iu][nu].abs() {
                            h[iu][nu - 1].abs()
                        } else {
                            h[iu][nu].abs()
                        };
                        if (EPS * t) * t > 1.0 {
                            for j in iu..=nu {
                                h[j][nu - 1] /= t;
                                h[j][nu] /= t;
                            }
                        }
                    }
                }
            }
        }
    }

    // Back-transform to the original basis.
    for j in (low as usize..nn).rev() {
        for i in low as usize..=high as usize {
            let mut acc = 0.0;
            let upper = if j < high as usize { j } else { high as usize };
            for k in low as usize..=upper {
                acc += v[i][k] * h[k][j];
            }
            v[i][j] = acc;
        }
    }

    Ok((d, e))
}
