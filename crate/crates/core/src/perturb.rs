//! Two-level effective model near the resonances ε ≈ nω.
//!
//! With Δσz/2 treated as a perturbation, the displaced states
//! |←⟩⊗D(α)|m⟩ and |→⟩⊗D(−α)|m−n⟩ (α = g/ω) are degenerate at ε = nω
//! and are mixed by
//!
//! Δ̃ₘₙ = Δ e^(−2g²/ω²) (−2g/ω)ⁿ √((m−n)!/m!) L_{m−n}^n(4g²/ω²).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Associated Laguerre polynomial L_k^α(x) by the three-term recurrence
/// (j+1) L_{j+1} = (2j + 1 + α − x) L_j − (j + α) L_{j−1}.
pub fn laguerre(k: usize, alpha: usize, x: f64) -> f64 {
    let a = alpha as f64;
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * cur - (jf + a) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Off-diagonal element Δ̃ₘₙ of the effective Hamiltonian.
pub fn dtilde(p: &ModelParams, m: usize, n: usize) -> Result<f64> {
    if m < n {
        return Err(Error::PairOrder { m, n });
    }
    let a = p.g / p.omega;
    // √((m−n)!/m!) = ∏_{j=m−n+1}^{m} j^(−1/2)
    let factorial_ratio: f64 = (m - n + 1..=m).map(|j| (j as f64).sqrt().recip()).product();
    let power = (-2.0 * a).powi(n as i32);
    Ok(p.delta * (-2.0 * a * a).exp() * power * factorial_ratio * laguerre(m - n, n, 4.0 * a * a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectivePair {
    pub m: usize,
    pub n: usize,
    pub dtilde: f64,
    /// ε − nω
    pub detuning: f64,
    /// √(detuning² + Δ̃²), the gap of the 2×2 model.
    pub splitting: f64,
}

pub fn effective_splitting(p: &ModelParams, m: usize, n: usize) -> Result<EffectivePair> {
    let dtilde = dtilde(p, m, n)?;
    let detuning = p.epsilon - n as f64 * p.omega;
    Ok(EffectivePair {
        m,
        n,
        dtilde,
        detuning,
        splitting: detuning.hypot(dtilde),
    })
}

/// 1-based exact levels that the (m, n) pair becomes, assuming ε ≈ nω and
/// small Δ/ω.
///
/// Unperturbed energies (up to a constant) are mω − ε/2 for |←, m⟩ and
/// m'ω + ε/2 for |→, m'⟩. Below the resonant pair at mω − nω/2 sit the m
/// states |←, m' < m⟩ and the m − n states |→, m' < m − n⟩, so the pair
/// occupies sorted positions 2m − n + 1 and 2m − n + 2.
pub fn level_pair(m: usize, n: usize) -> Result<(usize, usize)> {
    if m < n {
        return Err(Error::PairOrder { m, n });
    }
    let below = 2 * m - n;
    Ok((below + 1, below + 2))
}

/// Rows of the (m, n) → level-pair mapping for m = n..=m_max.
pub fn level_pair_table(n: usize, m_max: usize) -> Vec<(usize, usize, (usize, usize))> {
    (n..=m_max)
        .map(|m| (m, n, level_pair(m, n).expect("m >= n")))
        .collect()
}

/// Relative tolerance on ε/ω = n for [`predicted_crossings`].
pub const RESONANCE_TOL: f64 = 1e-12;

/// Positive g where Δ̃ₘₙ changes sign, i.e. the m − n roots of
/// L_{m−n}^n(4g²/ω²), located by bisection between sign changes on a
/// logarithmic grid.
pub fn predicted_crossings(p: &ModelParams, m: usize, n: usize) -> Result<Vec<f64>> {
    if m <= n {
        return Err(Error::PairOrder { m, n });
    }
    let ratio = p.epsilon / p.omega;
    if (ratio - n as f64).abs() > RESONANCE_TOL * (n as f64).max(1.0) {
        return Err(Error::NotResonant(ratio, n));
    }
    let k = m - n;
    let f = |a: f64| laguerre(k, n, 4.0 * a * a);
    // all zeros of L_k^n lie below 4k + 2n + 2
    let x_max = 4.0 * k as f64 + 2.0 * n as f64 + 2.0;
    let (a_lo, a_hi) = (1e-6f64, 0.5 * (x_max + 1.0).sqrt());
    let samples = 4000;
    let ratio_step = (a_hi / a_lo).powf(1.0 / samples as f64);
    let mut roots = Vec::new();
    let mut a0 = a_lo;
    let mut f0 = f(a0);
    for _ in 0..samples {
        let a1 = a0 * ratio_step;
        let f1 = f(a1);
        if f1 == 0.0 {
            roots.push(a1);
        } else if f0.signum() != f1.signum() && f0 != 0.0 {
            roots.push(bisect(&f, a0, a1, f0));
        }
        a0 = a1;
        f0 = f1;
    }
    if roots.len() != k {
        return Err(Error::RootCount {
            expected: k,
            found: roots.len(),
        });
    }
    Ok(roots.into_iter().map(|a| a * p.omega).collect())
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
