//! Builds a symmetry operator from a partition of two eigenbases and checks
//! it against the parity operator on the same subspace.

use qrm::eigen::{diagonalize_converged, DEFAULT_TOL};
use qrm::model::{build_hamiltonian, build_parity, TruncatedBasis};
use qrm::overlap::{
    align_truncation, find_partition, overlap_matrix, synthesize_symmetry_operator,
};
use qrm::ModelParams;

fn main() -> qrm::Result<()> {
    let levels = 20;
    let a = ModelParams::unit(0.7, 0.0, 0.5)?;
    let b = ModelParams::unit(0.7, 0.0, 2.6)?;
    let ea = diagonalize_converged(&a, levels, DEFAULT_TOL)?;
    let eb = diagonalize_converged(&b, levels, DEFAULT_TOL)?;
    let (ea, eb) = align_truncation(&ea, &eb)?;
    let partition = find_partition(&overlap_matrix(&ea, &eb, levels)?)?;

    // +1 / -1 by the parity of each group's first state
    let labels: Vec<f64> = partition
        .groups_row
        .iter()
        .map(|g| ea.parity_expectation(g[0]).round())
        .collect();
    let s = synthesize_symmetry_operator(&partition, &ea, &labels)?;

    let basis = TruncatedBasis::new(ea.n_fock)?;
    let h = build_hamiltonian(&a, &basis)?.matrix;
    let v = ea.vectors.columns(0, levels).into_owned();
    let proj = &v * v.transpose();
    let parity = &proj * build_parity(&basis).matrix * &proj;

    println!("groups: {}, labels {labels:?}", partition.groups_row.len());
    println!("|S - P Pi P|_max = {:.2e}", (&s.matrix - parity).amax());
    println!(
        "|[H, S]|_max     = {:.2e}",
        (&h * &s.matrix - &s.matrix * &h).amax()
    );
    Ok(())
}
