//! Minimum adjacent-level gap over a (Δ/ω, g/ω) mesh, per ε/ω.
//!
//! Rows of constant Δ are independent tasks and their minima are reduced in
//! grid order. Each point runs its own truncation search from the floor, so
//! the energies at a mesh point are the same bits whatever mesh, thread
//! count or evaluation order it is computed under.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{converged_levels, levels, ConvergenceOptions, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub delta_range: (f64, f64),
    pub g_range: (f64, f64),
    pub step: f64,
}

impl ScanGrid {
    /// Δ/ω, g/ω ∈ [0.1, 3.1] at the given spacing.
    pub fn standard(step: f64) -> Self {
        ScanGrid {
            delta_range: (0.1, 3.1),
            g_range: (0.1, 3.1),
            step,
        }
    }

    /// Desk-scale mesh, 61 × 61 points.
    pub fn desk() -> Self {
        Self::standard(0.05)
    }

    /// Full mesh, 301 × 301 points.
    pub fn full() -> Self {
        Self::standard(0.01)
    }

    pub fn delta_axis(&self) -> Result<Vec<f64>> {
        linear_grid(self.delta_range, self.step)
    }

    pub fn g_axis(&self) -> Result<Vec<f64>> {
        linear_grid(self.g_range, self.step)
    }
}

/// lo + (hi − lo)·i/(count − 1): the same real number always rounds to
/// the same double, so a mesh and its refinement share their common points
/// bit for bit.
pub fn linear_grid((lo, hi): (f64, f64), step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(Error::InvalidGrid(format!(
            "range [{lo}, {hi}] with step {step}"
        )));
    }
    let intervals = (hi - lo) / step;
    let count = intervals.round();
    if (intervals - count).abs() > 1e-6 {
        return Err(Error::InvalidGrid(format!(
            "step {step} does not divide [{lo}, {hi}]"
        )));
    }
    let count = count as usize;
    if count == 0 {
        return Ok(vec![lo]);
    }
    Ok((0..=count)
        .map(|i| lo + (hi - lo) * i as f64 / count as f64)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub delta: f64,
    pub g: f64,
    /// 1-based lower level of the pair (k, k + 1).
    pub k: usize,
    pub n_fock: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapScanResult {
    pub epsilon_over_omega: f64,
    pub grid: ScanGrid,
    pub k_levels: usize,
    pub min_gap: f64,
    pub argmin: ScanPoint,
    pub points: usize,
    pub max_n_fock: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub tol: f64,
    pub convergence: ConvergenceOptions,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            tol: DEFAULT_TOL,
            convergence: ConvergenceOptions::default(),
        }
    }
}

struct RowBest {
    gap: f64,
    point: ScanPoint,
    max_n_fock: usize,
}

fn scan_row(
    eps: f64,
    delta: f64,
    gs: &[f64],
    k_levels: usize,
    opts: &ScanOptions,
) -> Result<RowBest> {
    let mut best = RowBest {
        gap: f64::INFINITY,
        point: ScanPoint {
            delta,
            g: gs[0],
            k: 1,
            n_fock: 0,
        },
        max_n_fock: 0,
    };
    for &g in gs {
        let p = ModelParams::unit(delta, eps, g).map_err(|e| e.at("delta", delta))?;
        let found = converged_levels(&p, k_levels, opts.tol, opts.convergence)
            .map_err(|e| e.at("g", g).at("delta", delta))?;
        best.max_n_fock = best.max_n_fock.max(found.n_fock);
        let e = &found.energies;
        for k in 1..k_levels {
            let gap = e[k] - e[k - 1];
            if gap < best.gap {
                best.gap = gap;
                best.point = ScanPoint {
                    delta,
                    g,
                    k,
                    n_fock: found.n_fock,
                };
            }
        }
    }
    Ok(best)
}

pub fn min_gap_scan(
    eps_over_omega: f64,
    grid: &ScanGrid,
    k_levels: usize,
) -> Result<GapScanResult> {
    min_gap_scan_with(eps_over_omega, grid, k_levels, &ScanOptions::default())
}

pub fn min_gap_scan_with(
    eps_over_omega: f64,
    grid: &ScanGrid,
    k_levels: usize,
    opts: &ScanOptions,
) -> Result<GapScanResult> {
    if k_levels < 2 {
        return Err(Error::InvalidParams("a gap needs k_levels >= 2".into()));
    }
    if !eps_over_omega.is_finite() {
        return Err(Error::InvalidParams(format!(
            "epsilon/omega = {eps_over_omega}"
        )));
    }
    let deltas = grid.delta_axis()?;
    let gs = grid.g_axis()?;
    let rows = deltas
        .par_iter()
        .map(|&d| scan_row(eps_over_omega, d, &gs, k_levels, opts))
        .collect::<Result<Vec<_>>>()?;
    // rows arrive in Δ order; strict comparison keeps the lexicographic
    // (Δ, g, k) tie-break
    let mut best = &rows[0];
    for row in &rows[1..] {
        if row.gap < best.gap {
            best = row;
        }
    }
    Ok(GapScanResult {
        epsilon_over_omega: eps_over_omega,
        grid: *grid,
        k_levels,
        min_gap: best.gap,
        argmin: best.point,
        points: deltas.len() * gs.len(),
        max_n_fock: rows.iter().map(|r| r.max_n_fock).max().unwrap_or(0),
    })
}

pub fn epsilon_sweep(
    eps_grid: &[f64],
    grid: &ScanGrid,
    k_levels: usize,
) -> Result<Vec<GapScanResult>> {
    epsilon_sweep_with(eps_grid, grid, k_levels, &ScanOptions::default())
}

pub fn epsilon_sweep_with(
    eps_grid: &[f64],
    grid: &ScanGrid,
    k_levels: usize,
    opts: &ScanOptions,
) -> Result<Vec<GapScanResult>> {
    if eps_grid.is_empty() || eps_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "epsilon grid must be non-empty and ascending".into(),
        ));
    }
    eps_grid
        .iter()
        .map(|&eps| min_gap_scan_with(eps, grid, k_levels, opts).map_err(|e| e.at("epsilon", eps)))
        .collect()
}

impl GapScanResult {
    /// Gap at the recorded argmin, recomputed at the recorded truncation.
    pub fn recompute_gap(&self) -> Result<f64> {
        let a = self.argmin;
        let p = ModelParams::unit(a.delta, self.epsilon_over_omega, a.g)?;
        let e = levels(&p, a.n_fock)?;
        Ok(e[a.k] - e[a.k - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_shares_points_with_refinement() {
        let coarse = linear_grid((0.1, 3.1), 0.1).unwrap();
        let fine = linear_grid((0.1, 3.1), 0.05).unwrap();
        assert_eq!(coarse.len(), 31);
        assert_eq!(fine.len(), 61);
        for (i, x) in coarse.iter().enumerate() {
            assert_eq!(*x, fine[2 * i]);
        }
        assert_eq!(linear_grid((0.0, 0.0), 0.05).unwrap(), vec![0.0]);
        assert!(linear_grid((0.0, 1.0), 0.3).is_err());
        assert!(linear_grid((1.0, 0.0), 0.1).is_err());
    }

    #[test]
    fn degenerate_displaced_oscillators() {
        let grid = ScanGrid {
            delta_range: (0.0, 0.0),
            g_range: (0.5, 1.5),
            step: 0.5,
        };
        let r = min_gap_scan(0.0, &grid, 2).unwrap();
        assert_eq!(r.points, 3);
        assert!(r.min_gap.abs() < 1e-12);
        assert_eq!(r.argmin.g, 0.5);
    }

    #[test]
    fn argmin_reproduces() {
        let grid = ScanGrid {
            delta_range: (0.5, 1.0),
            g_range: (0.5, 1.5),
            step: 0.25,
        };
        let r = min_gap_scan(0.3, &grid, 6).unwrap();
        assert_eq!(r.recompute_gap().unwrap(), r.min_gap);
        assert!(r.min_gap >= 0.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let grid = ScanGrid::desk();
        assert!(min_gap_scan(0.5, &grid, 1).is_err());
        assert!(epsilon_sweep(&[1.0, 0.5], &grid, 10).is_err());
    }
}
