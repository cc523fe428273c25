//! Minimum adjacent gap over the (Δ/ω, g/ω) box for a few biases.
//!
//! Usage: `cargo run --release --example min_gap_scan [step]` (default 0.1;
//! 0.05 is the desk mesh, 0.01 the full one).

use qrm::scan::{epsilon_sweep, ScanGrid};

fn main() -> qrm::Result<()> {
    let step = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("step must be a number"))
        .unwrap_or(0.1);
    let eps = [0.5, 1.0, 1.5, 2.0];
    let results = epsilon_sweep(&eps, &ScanGrid::standard(step), 10)?;
    println!(
        "{:>5} {:>10} {:>6} {:>6} {:>3}",
        "eps", "min gap", "delta", "g", "k"
    );
    for r in results {
        let a = r.argmin;
        println!(
            "{:5.2} {:10.3e} {:6.2} {:6.2} {:3}",
            r.epsilon_over_omega, r.min_gap, a.delta, a.g, a.k
        );
    }
    Ok(())
}
