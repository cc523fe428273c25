//! Searches for a block structure in the overlap matrix of two eigenbases
//! and prints the groups with 1-based state indices.

use qrm::eigen::DEFAULT_TOL;
use qrm::overlap::{find_partition, overlap_between};
use qrm::ModelParams;

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn main() -> qrm::Result<()> {
    for (eps, g_rows, g_cols) in [(0.0, 2.6, 0.5), (1.0, 2.6, 0.5)] {
        let rows = ModelParams::unit(0.7, eps, g_rows)?;
        let cols = ModelParams::unit(0.7, eps, g_cols)?;
        let m = overlap_between(&rows, &cols, 20, DEFAULT_TOL)?;
        let p = find_partition(&m)?;
        println!("eps = {eps}, g = {g_rows} vs {g_cols}");
        if !p.found {
            println!("  no partition");
            continue;
        }
        for (r, c) in p.groups_row.iter().zip(&p.groups_col) {
            println!("  rows {:?}\n  cols {:?}", one_based(r), one_based(c));
        }
    }
    Ok(())
}
