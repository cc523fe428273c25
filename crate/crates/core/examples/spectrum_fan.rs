//! Lowest ten levels against g/ω for the symmetric model with Δ/ω = π^(-1/3),
//! printed every 0.25 in g.

use qrm::scan::linear_grid;
use qrm::spectra::{sweep_levels, SweptParam};
use qrm::ModelParams;

fn main() -> qrm::Result<()> {
    let delta = std::f64::consts::PI.powf(-1.0 / 3.0);
    let fixed = ModelParams::unit(delta, 0.0, 0.0)?;
    let grid = linear_grid((0.0, 3.0), 0.25)?;
    let sweep = sweep_levels(&fixed, SweptParam::G, &grid, 10)?;

    println!("    g  E_k - E_1, k = 1..10");
    for ((g, row), n) in sweep.grid.iter().zip(&sweep.levels).zip(&sweep.n_fock) {
        let cells: Vec<String> = row.iter().map(|e| format!("{e:6.3}")).collect();
        println!("{g:5.2}  {}  (n_fock {n})", cells.join(" "));
    }
    Ok(())
}
