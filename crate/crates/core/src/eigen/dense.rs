//! Householder tridiagonalization followed by implicit QL with shifts.
//!
//! Follows the EISPACK `tred2`/`tql2` pair (via JAMA). Matrices are
//! row-major `n × n` slices.

use crate::error::{Error, Result};

/// Per-eigenvalue cap on QL sweeps.
pub const MAX_QL_SWEEPS: usize = 60;

/// Reduce the symmetric matrix `a` (row-major, overwritten with the
/// orthogonal transform Q, so that Qᵀ A Q = T) to tridiagonal form.
/// Returns (diagonal, subdiagonal) where `e[i]` couples `i` and `i + 1`.
pub(crate) fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a.len(), n * n);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 0 {
        return (d, e);
    }
    let idx = |r: usize, c: usize| r * n + c;

    d.copy_from_slice(&a[idx(n - 1, 0)..idx(n - 1, 0) + n]);

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = a[idx(i - 1, j)];
                a[idx(i, j)] = 0.0;
                a[idx(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in &mut e[..i] {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                a[idx(j, i)] = f;
                g = e[j] + a[idx(j, j)] * f;
                for k in j + 1..i {
                    g += a[idx(k, j)] * d[k];
                    e[k] += a[idx(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    a[idx(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = a[idx(i - 1, j)];
                a[idx(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // accumulate transformations
    for i in 0..n - 1 {
        a[idx(n - 1, i)] = a[idx(i, i)];
        a[idx(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = a[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += a[idx(k, i + 1)] * a[idx(k, j)];
                }
                for k in 0..=i {
                    a[idx(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            a[idx(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = a[idx(n - 1, j)];
        a[idx(n - 1, j)] = 0.0;
    }
    a[idx(n - 1, n - 1)] = 1.0;

    // shift so that e[i] couples i and i+1
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    (d, e)
}

/// Implicit QL on the tridiagonal (d, e). When `rows` is given it holds
/// n vectors of length `len` stored as rows; rotations are applied to
/// rows `i` and `i + 1`, so on entry it should be Qᵀ and on exit row k is
/// the eigenvector of `d[k]`. Output is unsorted.
pub(crate) fn tridiagonal_ql(
    d: &mut [f64],
    e: &mut [f64],
    mut rows: Option<(&mut [f64], usize)>,
) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_QL_SWEEPS {
                    return Err(Error::NoConvergence {
                        level: l,
                        iterations: MAX_QL_SWEEPS,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in &mut d[l + 2..] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some((w, len)) = rows.as_mut() {
                        let len = *len;
                        let (lo, hi) = w.split_at_mut((i + 1) * len);
                        let ri = &mut lo[i * len..];
                        let rj = &mut hi[..len];
                        for (x, y) in ri.iter_mut().zip(rj.iter_mut()) {
                            let t = *y;
                            *y = s * *x + c * t;
                            *x = c * *x - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Eigen-decomposition of a dense symmetric matrix (row-major).
/// Returns unsorted eigenvalues and eigenvectors stored as rows.
pub(crate) fn symmetric_eigen(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (mut d, mut e) = tridiagonalize(&mut a, n);
    // Q is in `a` with eigenvector basis as columns; QL rotates rows of Qᵀ.
    let mut qt = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            qt[c * n + r] = a[r * n + c];
        }
    }
    tridiagonal_ql(&mut d, &mut e, Some((&mut qt, n)))?;
    Ok((d, qt))
}
