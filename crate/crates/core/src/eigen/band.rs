//! Eigenvalues of a symmetric band matrix.
//!
//! Givens band-to-tridiagonal reduction with bulge chasing (Schwarz),
//! O(n² b) work and O(n b) storage, then eigenvalue-only QL.

use super::dense::tridiagonal_ql;
use crate::error::Result;

/// Lower band storage with room for one bulge diagonal.
pub(crate) struct SymmetricBand {
    n: usize,
    bandwidth: usize,
    // diags[d][c] = A[c + d][c], d = 0..=bandwidth + 1
    diags: Vec<Vec<f64>>,
}

impl SymmetricBand {
    pub(crate) fn zeros(n: usize, bandwidth: usize) -> Self {
        let diags = (0..=bandwidth + 1)
            .map(|d| vec![0.0; n.saturating_sub(d)])
            .collect();
        SymmetricBand {
            n,
            bandwidth,
            diags,
        }
    }

    pub(crate) fn from_fn(n: usize, bandwidth: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut band = Self::zeros(n, bandwidth);
        for d in 0..=bandwidth {
            for c in 0..n.saturating_sub(d) {
                band.diags[d][c] = f(c + d, c);
            }
        }
        band
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d > self.bandwidth + 1 {
            0.0
        } else {
            self.diags[d][c]
        }
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d > self.bandwidth + 1 {
            debug_assert!(v == 0.0, "fill outside band storage at ({r}, {c})");
            return;
        }
        self.diags[d][c] = v;
    }

    /// Similarity rotation in the adjacent plane (q − 1, q) chosen so that
    /// A[q][col] becomes zero.
    fn annihilate(&mut self, q: usize, col: usize) {
        let p = q - 1;
        let x = self.get(p, col);
        let y = self.get(q, col);
        if y == 0.0 {
            return;
        }
        let r = x.hypot(y);
        let (c, s) = (x / r, y / r);
        let reach = self.bandwidth + 1;
        let lo = q.saturating_sub(reach);
        let hi = (p + reach).min(self.n - 1);
        for k in lo..=hi {
            if k == p || k == q {
                continue;
            }
            let akp = self.get(p, k);
            let akq = self.get(q, k);
            self.set(p, k, c * akp + s * akq);
            self.set(q, k, -s * akp + c * akq);
        }
        let (app, apq, aqq) = (self.get(p, p), self.get(p, q), self.get(q, q));
        let (cc, ss, cs) = (c * c, s * s, c * s);
        self.set(p, p, cc * app + 2.0 * cs * apq + ss * aqq);
        self.set(q, q, ss * app - 2.0 * cs * apq + cc * aqq);
        self.set(p, q, cs * (aqq - app) + (cc - ss) * apq);
        self.set(q, col, 0.0);
    }

    /// Reduce to tridiagonal form; returns (diagonal, subdiagonal).
    pub(crate) fn into_tridiagonal(mut self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let b = self.bandwidth;
        if b >= 2 {
            for j in 0..n.saturating_sub(2) {
                for d in (2..=b).rev() {
                    let (mut r, mut c) = (j + d, j);
                    while r < n {
                        if self.get(r, c) == 0.0 {
                            break;
                        }
                        self.annihilate(r, c);
                        // the rotation leaves a bulge at (r + b, r − 1)
                        c = r - 1;
                        r += b;
                    }
                }
            }
        }
        let d = self.diags[0].clone();
        let mut e = vec![0.0; n];
        if n > 1 {
            e[..n - 1].copy_from_slice(&self.diags[1]);
        }
        (d, e)
    }
}

/// Unsorted eigenvalues of a symmetric band matrix.
pub(crate) fn band_eigenvalues(band: SymmetricBand) -> Result<Vec<f64>> {
    let (mut d, mut e) = band.into_tridiagonal();
    tridiagonal_ql(&mut d, &mut e, None)?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::super::dense::symmetric_eigen;
    use super::*;

    fn banded(n: usize, b: usize, seed: u64) -> Vec<f64> {
        let mut state = seed;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in i.saturating_sub(b)..=i {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let x = ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        a
    }

    #[test]
    fn matches_dense_route() {
        for (n, b) in [(1, 0), (2, 1), (5, 3), (17, 2), (40, 3), (33, 5), (64, 3)] {
            let a = banded(n, b, (n * 31 + b) as u64);
            let band = SymmetricBand::from_fn(n, b, |i, j| a[i * n + j]);
            let mut fast = band_eigenvalues(band).unwrap();
            let (mut slow, _) = symmetric_eigen(a, n).unwrap();
            fast.sort_by(f64::total_cmp);
            slow.sort_by(f64::total_cmp);
            for (x, y) in fast.iter().zip(&slow) {
                assert!((x - y).abs() < 1e-12, "n={n} b={b}: {x} vs {y}");
            }
        }
    }
}
