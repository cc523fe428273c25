//! Exact gap of levels 4 and 5 at ε = ω against the two-level splitting
//! |Δ̃₂₁|, and the g values where Δ̃ₘₙ vanishes.

use qrm::perturb::{effective_splitting, level_pair, predicted_crossings};
use qrm::scan::linear_grid;
use qrm::spectra::{gap_curve, SweptParam};
use qrm::ModelParams;

fn main() -> qrm::Result<()> {
    let (m, n) = (2, 1);
    let (lo, hi) = level_pair(m, n)?;
    for delta in [0.1, 0.8] {
        let fixed = ModelParams::unit(delta, 1.0, 0.0)?;
        let grid = linear_grid((0.0, 2.0), 0.1)?;
        let exact = gap_curve(&fixed, SweptParam::G, &grid, lo)?;
        println!("delta = {delta}, levels {lo} and {hi}");
        println!("{:>5} {:>10} {:>10}", "g", "exact", "two-level");
        for (g, e) in grid.iter().zip(&exact) {
            let eff = effective_splitting(&fixed.with_g(*g), m, n)?;
            println!("{g:5.2} {e:10.6} {:10.6}", eff.splitting);
        }
        println!();
    }

    for (m, n) in [(2, 1), (3, 1), (4, 1), (4, 2)] {
        let p = ModelParams::unit(0.05, n as f64, 0.0)?;
        let roots: Vec<String> = predicted_crossings(&p, m, n)?
            .iter()
            .map(|g| format!("{g:.6}"))
            .collect();
        println!("dtilde({m},{n}) vanishes at g = {}", roots.join(", "));
    }
    Ok(())
}
