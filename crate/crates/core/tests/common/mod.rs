//! Shared fixtures for the integration tests.
#![allow(dead_code, unused_imports)]

mod tables;

pub use tables::{BIASED_VARY_DELTA, BIASED_VARY_G, UNBIASED_VARY_G};

use qrm::overlap::{overlap_between, OverlapMatrix};
use qrm::ModelParams;

pub const GOLDEN_TOL: f64 = 5e-5;
pub const ZERO_TOL: f64 = 1e-8;

pub fn unit(eps: f64, delta: f64, g: f64) -> ModelParams {
    ModelParams::unit(delta, eps, g).unwrap()
}

/// Overlap matrix in the reference layout: rows are eigenstates of the
/// second parameter set, columns of the first.
pub fn reference_layout(first: ModelParams, second: ModelParams, levels: usize) -> OverlapMatrix {
    overlap_between(&second, &first, levels, qrm::eigen::DEFAULT_TOL).unwrap()
}

/// Largest deviation from a reference table; "0" entries must be below
/// [`ZERO_TOL`]. Returns (max deviation on nonzero entries, number of
/// failing zeros).
pub fn compare(m: &OverlapMatrix, table: &[[f64; 10]; 10]) -> (f64, usize) {
    let mut worst: f64 = 0.0;
    let mut bad_zeros = 0;
    for (i, row) in table.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            let got = m.entries[(i, j)];
            if want == 0.0 {
                if got >= ZERO_TOL {
                    bad_zeros += 1;
                }
            } else {
                worst = worst.max((got - want).abs());
            }
        }
    }
    (worst, bad_zeros)
}

/// L_k^n(p/q) from the explicit series Σ (−1)^i C(k+n, k−i) x^i / i!,
/// summed exactly over the common denominator k!·q^k.
pub fn series_laguerre(k: usize, n: usize, p: i128, q: i128) -> f64 {
    let binom = |a: i128, b: i128| (0..b).fold(1i128, |acc, i| acc * (a - i) / (i + 1));
    let falling = |from: i128, to: i128| (to + 1..=from).product::<i128>();
    let (k, n) = (k as i128, n as i128);
    let numerator: i128 = (0..=k)
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            sign * binom(k + n, k - i) * falling(k, i) * p.pow(i as u32) * q.pow((k - i) as u32)
        })
        .sum();
    let denominator = falling(k, 0) * q.pow(k as u32);
    numerator as f64 / denominator as f64
}

/// Abscissae p/q used against [`series_laguerre`].
pub const LAGUERRE_POINTS: [(i128, i128); 6] = [(0, 1), (3, 10), (1, 1), (5, 2), (4, 1), (7, 1)];
