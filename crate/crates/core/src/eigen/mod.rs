//! Real-symmetric eigendecomposition of the model Hamiltonian with sorted
//! output, a fixed eigenvector sign convention and truncation control.
//!
//! The Hamiltonian is first split into the connected components of its
//! nonzero pattern. At ε = 0 these are the two parity sectors, so states
//! of different parity never pick up rounding-level admixtures of each
//! other even when their energies are nearly degenerate.

mod band;
mod dense;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, ModelParams, TruncatedBasis};

pub use dense::MAX_QL_SWEEPS;

/// Default convergence tolerance, in units of ω.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Smallest truncation tried by [`diagonalize_converged`].
pub const DEFAULT_FLOOR: usize = 32;
/// Largest truncation tried by [`diagonalize_converged`].
pub const DEFAULT_CAP: usize = 4096;
/// Levels closer than this (units of ω) are treated as degenerate.
pub const DEGENERACY_WINDOW: f64 = 1e-9;
/// Bound on g√n_fock · |amplitude on the last Fock level| for a level of a
/// single fixed-truncation solve to count as converged.
pub const LEAKAGE_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub params: ModelParams,
    pub n_fock: usize,
    /// Ascending.
    pub energies: Vec<f64>,
    /// Column k is the unit eigenvector of `energies[k]`.
    pub vectors: DMatrix<f64>,
    pub converged_levels: usize,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn vector(&self, k: usize) -> DVector<f64> {
        self.vectors.column(k).into_owned()
    }

    /// E_k − E_0 for the lowest `count` levels.
    pub fn relative_energies(&self, count: usize) -> Vec<f64> {
        let e0 = self.energies[0];
        self.energies.iter().take(count).map(|e| e - e0).collect()
    }

    /// Runs of consecutive levels closer than `window · ω`. Singletons are
    /// included so the blocks cover `0..limit`.
    pub fn degenerate_blocks(&self, limit: usize, window: f64) -> Vec<std::ops::Range<usize>> {
        let limit = limit.min(self.dim());
        let scale = window * self.params.omega;
        let mut blocks = Vec::new();
        let mut start = 0;
        for k in 1..=limit {
            if k == limit || self.energies[k] - self.energies[k - 1] >= scale {
                blocks.push(start..k);
                start = k;
            }
        }
        blocks
    }

    /// ‖H v_k − E_k v_k‖∞ with H rebuilt at this truncation.
    pub fn residual(&self, k: usize) -> f64 {
        let basis = TruncatedBasis::new(self.n_fock).expect("valid truncation");
        let h = build_hamiltonian(&self.params, &basis).expect("validated params");
        let v = self.vectors.column(k);
        let r = &h.matrix * v - v * self.energies[k];
        r.amax()
    }

    /// ⟨v_k|Π|v_k⟩.
    pub fn parity_expectation(&self, k: usize) -> f64 {
        let basis = TruncatedBasis::new(self.n_fock).expect("valid truncation");
        self.vectors
            .column(k)
            .iter()
            .enumerate()
            .map(|(i, x)| basis.parity_of(i) * x * x)
            .sum()
    }
}

/// Hamiltonian in units of ω, split into independent blocks.
struct Blocks {
    dim: usize,
    matrix: DMatrix<f64>,
    components: Vec<Vec<usize>>,
}

impl Blocks {
    fn new(p: &ModelParams, n_fock: usize) -> Result<Self> {
        let basis = TruncatedBasis::new(n_fock)?;
        let h = build_hamiltonian(&p.normalized(), &basis)?.matrix;
        let dim = basis.dim();
        Ok(Blocks {
            dim,
            components: connected_components(&h),
            matrix: h,
        })
    }
}

fn connected_components(h: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = h.nrows();
    let mut label = vec![usize::MAX; n];
    let mut components = Vec::new();
    for seed in 0..n {
        if label[seed] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![seed];
        label[seed] = id;
        let mut cursor = 0;
        while cursor < members.len() {
            let i = members[cursor];
            cursor += 1;
            // the model couples indices at most 3 apart
            let lo = i.saturating_sub(3);
            let hi = (i + 3).min(n - 1);
            for j in lo..=hi {
                if label[j] == usize::MAX && h[(i, j)] != 0.0 {
                    label[j] = id;
                    members.push(j);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

fn sub_bandwidth(h: &DMatrix<f64>, members: &[usize]) -> usize {
    let mut b = 0;
    for (a, &i) in members.iter().enumerate() {
        for (c, &j) in members.iter().enumerate().skip(a + 1) {
            if j > i + 3 {
                break;
            }
            if h[(i, j)] != 0.0 {
                b = b.max(c - a);
            }
        }
    }
    b
}

/// Sorted eigenvalues at a fixed truncation (no eigenvectors).
pub fn levels(p: &ModelParams, n_fock: usize) -> Result<Vec<f64>> {
    let blocks = Blocks::new(p, n_fock)?;
    let mut all = Vec::with_capacity(blocks.dim);
    for members in &blocks.components {
        let b = sub_bandwidth(&blocks.matrix, members);
        let band = band::SymmetricBand::from_fn(members.len(), b, |r, c| {
            blocks.matrix[(members[r], members[c])]
        });
        all.extend(band::band_eigenvalues(band)?);
    }
    all.sort_by(f64::total_cmp);
    for e in &mut all {
        *e *= p.omega;
    }
    Ok(all)
}

/// Full spectrum at a fixed truncation.
pub fn diagonalize(p: &ModelParams, n_fock: usize) -> Result<EigenSystem> {
    let blocks = Blocks::new(p, n_fock)?;
    let dim = blocks.dim;
    // (energy, component, vector)
    let mut pairs: Vec<(f64, usize, DVector<f64>)> = Vec::with_capacity(dim);
    for (ci, members) in blocks.components.iter().enumerate() {
        let m = members.len();
        let mut sub = vec![0.0; m * m];
        for (r, &i) in members.iter().enumerate() {
            for (c, &j) in members.iter().enumerate() {
                sub[r * m + c] = blocks.matrix[(i, j)];
            }
        }
        let (vals, rows) = dense::symmetric_eigen(sub, m)?;
        for (k, val) in vals.into_iter().enumerate() {
            let mut v = DVector::zeros(dim);
            for (r, &i) in members.iter().enumerate() {
                v[i] = rows[k * m + r];
            }
            pairs.push((val, ci, v));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut energies = Vec::with_capacity(dim);
    let mut vectors = DMatrix::zeros(dim, dim);
    for (k, (val, _, mut v)) in pairs.into_iter().enumerate() {
        fix_sign(&mut v);
        energies.push(val * p.omega);
        vectors.set_column(k, &v);
    }
    let converged_levels = leakage_converged(p, n_fock, &vectors);
    Ok(EigenSystem {
        params: *p,
        n_fock,
        energies,
        vectors,
        converged_levels,
    })
}

/// Largest-magnitude entry positive; first index wins ties.
fn fix_sign(v: &mut DVector<f64>) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.neg_mut();
    }
}

fn leakage_converged(p: &ModelParams, n_fock: usize, vectors: &DMatrix<f64>) -> usize {
    let (_, _, g) = p.ratios();
    let edge = 2 * (n_fock - 1);
    let scale = g * (n_fock as f64).sqrt();
    (0..vectors.ncols())
        .take_while(|&k| {
            let a = vectors[(edge, k)];
            let b = vectors[(edge + 1, k)];
            scale * a.hypot(b) <= LEAKAGE_TOL
        })
        .count()
}

#[derive(Debug, Clone, Copy)]
pub struct ConvergenceOptions {
    pub floor: usize,
    pub cap: usize,
    /// Initial truncation guess; the answer is still verified by doubling.
    pub hint: Option<usize>,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        ConvergenceOptions {
            floor: DEFAULT_FLOOR,
            cap: DEFAULT_CAP,
            hint: None,
        }
    }
}

impl ConvergenceOptions {
    pub fn with_cap(self, cap: usize) -> Self {
        ConvergenceOptions { cap, ..self }
    }

    pub fn with_hint(self, hint: Option<usize>) -> Self {
        ConvergenceOptions { hint, ..self }
    }
}

/// Converged low-lying energies without eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergedLevels {
    pub n_fock: usize,
    /// All energies at `n_fock`, ascending.
    pub energies: Vec<f64>,
    /// Length of the prefix that agreed with the half truncation.
    pub converged_levels: usize,
}

pub fn converged_levels(
    p: &ModelParams,
    k_levels: usize,
    tol: f64,
    opts: ConvergenceOptions,
) -> Result<ConvergedLevels> {
    p.validate()?;
    if k_levels == 0 || !(tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "need k_levels >= 1 and tol > 0 (got {k_levels}, {tol})"
        )));
    }
    let floor = opts.floor.max(2).max(k_levels.div_ceil(2));
    let mut n = opts.hint.map_or(floor, |h| h.max(floor));
    if 2 * n > opts.cap {
        return Err(Error::TruncationCap {
            n_fock: opts.cap,
            residual: f64::NAN,
        });
    }
    let threshold = tol * p.omega;
    let mut coarse = levels(p, n)?;
    loop {
        let fine = levels(p, 2 * n)?;
        let diff = |k: usize| (coarse[k] - fine[k]).abs();
        let residual = (0..k_levels).map(diff).fold(0.0, f64::max);
        if residual <= threshold {
            let converged = (0..coarse.len())
                .take_while(|&k| diff(k) <= threshold)
                .count();
            return Ok(ConvergedLevels {
                n_fock: 2 * n,
                energies: fine,
                converged_levels: converged,
            });
        }
        n *= 2;
        if 2 * n > opts.cap {
            return Err(Error::TruncationCap {
                n_fock: n,
                residual,
            });
        }
        coarse = fine;
    }
}

pub fn diagonalize_converged(p: &ModelParams, k_levels: usize, tol: f64) -> Result<EigenSystem> {
    diagonalize_converged_with(p, k_levels, tol, ConvergenceOptions::default())
}

pub fn diagonalize_converged_with(
    p: &ModelParams,
    k_levels: usize,
    tol: f64,
    opts: ConvergenceOptions,
) -> Result<EigenSystem> {
    let found = converged_levels(p, k_levels, tol, opts)?;
    let mut system = diagonalize(p, found.n_fock)?;
    system.converged_levels = found.converged_levels;
    Ok(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_parity;

    fn unit(delta: f64, epsilon: f64, g: f64) -> ModelParams {
        ModelParams::unit(delta, epsilon, g).unwrap()
    }

    #[test]
    fn decoupled_limit() {
        let sys = diagonalize(&unit(0.7, 0.0, 0.0), 8).unwrap();
        for (e, want) in sys.energies.iter().zip([0.15, 0.85, 1.15, 1.85]) {
            assert!((e - want).abs() < 1e-14);
        }
        assert_eq!(sys.converged_levels, sys.dim());
    }

    #[test]
    fn exactly_solvable_delta_zero_line() {
        let (eps, g) = (1.0, 0.8);
        let sys = diagonalize_converged(&unit(0.0, eps, g), 12, DEFAULT_TOL).unwrap();
        let mut base: Vec<f64> = (0..8)
            .flat_map(|n| [-1.0, 1.0].map(|s| n as f64 - g * g + s * eps / 2.0 + 0.5))
            .collect();
        base.sort_by(f64::total_cmp);
        for k in 0..12 {
            assert!((sys.energies[k] - base[k]).abs() < 1e-10, "level {k}");
        }
    }

    #[test]
    fn band_and_dense_routes_agree() {
        for p in [
            unit(0.7, 0.3, 1.1),
            unit(0.2, 0.0, 2.0),
            unit(1.5, 2.0, 0.4),
        ] {
            let a = levels(&p, 40).unwrap();
            let b = diagonalize(&p, 40).unwrap().energies;
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-11 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn omega_scaling() {
        let a = diagonalize(&ModelParams::new(1.4, 0.6, 2.0, 1.0).unwrap(), 30).unwrap();
        let b = diagonalize(&unit(0.7, 0.3, 0.5), 30).unwrap();
        for (x, y) in a.energies.iter().zip(&b.energies) {
            assert!((x - 2.0 * y).abs() < 1e-12);
        }
    }

    #[test]
    fn sign_convention_is_positive_max_entry() {
        let sys = diagonalize(&unit(0.7, 0.4, 0.9), 20).unwrap();
        for k in 0..sys.dim() {
            let v = sys.vector(k);
            let imax = v.iamax();
            assert!(v[imax] > 0.0);
        }
    }

    #[test]
    fn symmetric_point_splits_into_parity_sectors() {
        let sys = diagonalize(&unit(0.7, 0.0, 2.6), 60).unwrap();
        let basis = TruncatedBasis::new(60).unwrap();
        let pi = build_parity(&basis).matrix;
        for k in 0..20 {
            let v = sys.vector(k);
            let pv = &pi * &v;
            let s = pv.dot(&v).signum();
            assert!((pv - v * s).amax() == 0.0);
        }
    }

    #[test]
    fn zero_coupling_converges_at_floor() {
        let sys = diagonalize_converged(&unit(0.7, 0.5, 0.0), 10, DEFAULT_TOL).unwrap();
        assert_eq!(sys.n_fock, 2 * DEFAULT_FLOOR);
    }

    #[test]
    fn cap_is_reported() {
        let opts = ConvergenceOptions::default().with_cap(64);
        let err = converged_levels(&unit(0.5, 0.0, 3.0), 10, 1e-10, opts).unwrap_err();
        assert!(matches!(err, Error::TruncationCap { n_fock: 64, residual } if residual > 1e-10));
    }

    #[test]
    fn degenerate_blocks_cover_range() {
        let sys = diagonalize(&unit(0.0, 0.0, 0.5), 30).unwrap();
        let blocks = sys.degenerate_blocks(10, DEGENERACY_WINDOW);
        assert_eq!(blocks, vec![0..2, 2..4, 4..6, 6..8, 8..10]);
    }
}
