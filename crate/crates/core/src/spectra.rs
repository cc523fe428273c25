//! Level sweeps, gap curves, crossing refinement and baseline energies.
//!
//! Levels are tracked by energy order only. Level numbers in the public
//! API are 1-based (level 1 is the ground state), so `k` names the pair
//! of sorted levels (k, k+1), i.e. 0-based indices k−1 and k.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{converged_levels, levels, ConvergenceOptions, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Gap below which a crossing counts as certified, in units of ω.
pub const CROSSING_CERTIFICATE: f64 = 1e-8;
/// Parameter resolution of the golden-section refinement.
pub const REFINE_RESOLUTION: f64 = 1e-12;
const BRACKET_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweptParam {
    G,
    Delta,
    Epsilon,
}

impl SweptParam {
    pub fn apply(self, p: ModelParams, value: f64) -> ModelParams {
        match self {
            SweptParam::G => p.with_g(value),
            SweptParam::Delta => p.with_delta(value),
            SweptParam::Epsilon => p.with_epsilon(value),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SweptParam::G => "g",
            SweptParam::Delta => "delta",
            SweptParam::Epsilon => "epsilon",
        }
    }
}

impl std::str::FromStr for SweptParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" => Ok(SweptParam::G),
            "delta" => Ok(SweptParam::Delta),
            "eps" | "epsilon" => Ok(SweptParam::Epsilon),
            other => Err(Error::Usage(format!("unknown parameter '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub tol: f64,
    pub convergence: ConvergenceOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            tol: DEFAULT_TOL,
            convergence: ConvergenceOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LevelSweep {
    pub fixed: ModelParams,
    pub swept: SweptParam,
    pub grid: Vec<f64>,
    /// Row j: E_k − E_0 for the lowest K levels at `grid[j]`.
    pub levels: Vec<Vec<f64>>,
    /// Truncation used at each grid point.
    pub n_fock: Vec<usize>,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid("non-finite grid value".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Converged raw energies (lowest `k_levels`) at each grid point.
fn raw_levels(
    fixed: &ModelParams,
    swept: SweptParam,
    grid: &[f64],
    k_levels: usize,
    opts: &SweepOptions,
) -> Result<Vec<(usize, Vec<f64>)>> {
    check_grid(grid)?;
    grid.par_iter()
        .map(|&x| {
            let p = swept.apply(*fixed, x);
            p.validate().map_err(|e| e.at(swept.name(), x))?;
            let found = converged_levels(&p, k_levels, opts.tol, opts.convergence)
                .map_err(|e| e.at(swept.name(), x))?;
            Ok((found.n_fock, found.energies[..k_levels].to_vec()))
        })
        .collect()
}

pub fn sweep_levels(
    fixed: &ModelParams,
    swept: SweptParam,
    grid: &[f64],
    k: usize,
) -> Result<LevelSweep> {
    sweep_levels_with(fixed, swept, grid, k, &SweepOptions::default())
}

pub fn sweep_levels_with(
    fixed: &ModelParams,
    swept: SweptParam,
    grid: &[f64],
    k: usize,
    opts: &SweepOptions,
) -> Result<LevelSweep> {
    if k == 0 {
        return Err(Error::InvalidParams("need at least one level".into()));
    }
    let raw = raw_levels(fixed, swept, grid, k, opts)?;
    let (n_fock, levels) = raw
        .into_iter()
        .map(|(n, e)| {
            let e0 = e[0];
            (n, e.into_iter().map(|x| x - e0).collect())
        })
        .unzip();
    Ok(LevelSweep {
        fixed: *fixed,
        swept,
        grid: grid.to_vec(),
        levels,
        n_fock,
    })
}

/// E_{k+1} − E_k (1-based levels) along the grid.
pub fn gap_curve(
    fixed: &ModelParams,
    swept: SweptParam,
    grid: &[f64],
    k: usize,
) -> Result<Vec<f64>> {
    gap_curve_with(fixed, swept, grid, k, &SweepOptions::default())
}

pub fn gap_curve_with(
    fixed: &ModelParams,
    swept: SweptParam,
    grid: &[f64],
    k: usize,
    opts: &SweepOptions,
) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidParams("gap index k is 1-based".into()));
    }
    let raw = raw_levels(fixed, swept, grid, k + 1, opts)?;
    Ok(raw.into_iter().map(|(_, e)| e[k] - e[k - 1]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    /// 1-based levels (k, k + 1).
    pub level_pair: (usize, usize),
    pub swept: SweptParam,
    pub bracket: (f64, f64),
    /// Refined location of the minimum gap.
    pub param_star: f64,
    pub gap_at_star: f64,
    /// E_k − E_1 at `param_star`.
    pub relative_energy: f64,
    pub certified: bool,
    pub n_fock: usize,
}

struct GapProbe<'a> {
    fixed: &'a ModelParams,
    swept: SweptParam,
    k: usize,
    n_fock: usize,
}

impl GapProbe<'_> {
    fn levels(&self, x: f64) -> Result<Vec<f64>> {
        let p = self.swept.apply(*self.fixed, x);
        levels(&p, self.n_fock).map_err(|e| e.at(self.swept.name(), x))
    }

    fn gap(&self, x: f64) -> Result<f64> {
        let e = self.levels(x)?;
        Ok(e[self.k] - e[self.k - 1])
    }
}

/// One truncation, converged at both ends and the middle of the bracket,
/// used for every evaluation so the gap is a smooth function.
fn bracket_truncation(
    fixed: &ModelParams,
    swept: SweptParam,
    (lo, hi): (f64, f64),
    k_levels: usize,
    opts: &SweepOptions,
) -> Result<usize> {
    let mut n = 0;
    for x in [lo, 0.5 * (lo + hi), hi] {
        let p = swept.apply(*fixed, x);
        let found = converged_levels(&p, k_levels, opts.tol, opts.convergence)
            .map_err(|e| e.at(swept.name(), x))?;
        n = n.max(found.n_fock);
    }
    Ok(n)
}

fn check_bracket(fixed: &ModelParams, swept: SweptParam, (lo, hi): (f64, f64)) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidGrid(format!("bad bracket [{lo}, {hi}]")));
    }
    swept.apply(*fixed, lo).validate()?;
    swept.apply(*fixed, hi).validate()
}

fn samples(lo: f64, hi: f64) -> Vec<f64> {
    (0..=BRACKET_SAMPLES)
        .map(|i| lo + (hi - lo) * i as f64 / BRACKET_SAMPLES as f64)
        .collect()
}

pub fn refine_crossing(
    fixed: &ModelParams,
    swept: SweptParam,
    bracket: (f64, f64),
    k: usize,
) -> Result<CrossingReport> {
    refine_crossing_with(fixed, swept, bracket, k, &SweepOptions::default())
}

pub fn refine_crossing_with(
    fixed: &ModelParams,
    swept: SweptParam,
    bracket: (f64, f64),
    k: usize,
    opts: &SweepOptions,
) -> Result<CrossingReport> {
    if k == 0 {
        return Err(Error::InvalidParams("gap index k is 1-based".into()));
    }
    check_bracket(fixed, swept, bracket)?;
    let (lo, hi) = bracket;
    let probe = GapProbe {
        fixed,
        swept,
        k,
        n_fock: bracket_truncation(fixed, swept, bracket, k + 1, opts)?,
    };

    let xs = samples(lo, hi);
    let gaps = xs
        .iter()
        .map(|&x| probe.gap(x))
        .collect::<Result<Vec<_>>>()?;
    let (best, _) = gaps[1..BRACKET_SAMPLES]
        .iter()
        .enumerate()
        .map(|(i, g)| (i + 1, *g))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("interior samples");
    if gaps[best] >= gaps[0] || gaps[best] >= gaps[BRACKET_SAMPLES] {
        return Err(Error::MonotoneGap { lo, hi });
    }

    let (x_star, gap_star) = golden_section(|x| probe.gap(x), xs[best - 1], xs[best + 1])?;
    let e = probe.levels(x_star)?;
    let omega = fixed.omega;
    Ok(CrossingReport {
        level_pair: (k, k + 1),
        swept,
        bracket,
        param_star: x_star,
        gap_at_star: gap_star,
        relative_energy: e[k - 1] - e[0],
        certified: gap_star <= CROSSING_CERTIFICATE * omega,
        n_fock: probe.n_fock,
    })
}

/// Golden-section minimization to [`REFINE_RESOLUTION`]; returns the best
/// evaluated point.
fn golden_section(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    while b - a > REFINE_RESOLUTION {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid)?;
    if fm < best.1 {
        best = (mid, fm);
    }
    Ok(best)
}

/// Picks the adjacent pair among the lowest `k_max` levels whose gap has
/// the deepest bracketed interior minimum; returns the 1-based k.
pub fn closest_pair(
    fixed: &ModelParams,
    swept: SweptParam,
    bracket: (f64, f64),
    k_max: usize,
) -> Result<usize> {
    closest_pair_with(fixed, swept, bracket, k_max, &SweepOptions::default())
}

pub fn closest_pair_with(
    fixed: &ModelParams,
    swept: SweptParam,
    bracket: (f64, f64),
    k_max: usize,
    opts: &SweepOptions,
) -> Result<usize> {
    if k_max < 2 {
        return Err(Error::InvalidParams("a pair needs k_max >= 2".into()));
    }
    check_bracket(fixed, swept, bracket)?;
    let probe = GapProbe {
        fixed,
        swept,
        k: 1,
        n_fock: bracket_truncation(fixed, swept, bracket, k_max, opts)?,
    };
    let xs = samples(bracket.0, bracket.1);
    let spectra = xs
        .iter()
        .map(|&x| probe.levels(x))
        .collect::<Result<Vec<_>>>()?;
    let mut choice: Option<(usize, f64)> = None;
    for k in 1..k_max {
        let gaps: Vec<f64> = spectra.iter().map(|e| e[k] - e[k - 1]).collect();
        let interior = gaps[1..BRACKET_SAMPLES]
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if interior < gaps[0]
            && interior < gaps[BRACKET_SAMPLES]
            && choice.is_none_or(|(_, g)| interior < g)
        {
            choice = Some((k, interior));
        }
    }
    choice.map(|(k, _)| k).ok_or(Error::MonotoneGap {
        lo: bracket.0,
        hi: bracket.1,
    })
}

/// nω − g²/ω ± ε/2 for n = 0..=n_max, ascending.
pub fn baseline_energies(p: &ModelParams, n_max: usize) -> Vec<f64> {
    let shift = p.g * p.g / p.omega;
    let mut out: Vec<f64> = (0..=n_max)
        .flat_map(|n| {
            let base = n as f64 * p.omega - shift;
            [base - 0.5 * p.epsilon, base + 0.5 * p.epsilon]
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}
