//! Overlap magnitudes between two eigenbases, with and without the bias.
//! At ε = 0 half the entries vanish by parity; at ε/ω = 1 none do.

use qrm::eigen::DEFAULT_TOL;
use qrm::overlap::{format_table, overlap_between};
use qrm::ModelParams;

fn main() -> qrm::Result<()> {
    for eps in [0.0, 1.0] {
        // rows: g/ω = 2.6, columns: g/ω = 0.5
        let rows = ModelParams::unit(0.7, eps, 2.6)?;
        let cols = ModelParams::unit(0.7, eps, 0.5)?;
        let m = overlap_between(&rows, &cols, 10, DEFAULT_TOL)?;
        println!(
            "eps = {eps}: {} zeros, separation ratio {:.1e}",
            m.zero_count(),
            m.separation_ratio()
        );
        print!("{}", format_table(&m, 6));
        println!();
    }
    Ok(())
}
