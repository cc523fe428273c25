//! Refines the level crossing near g/ω = 1.2128 at ε/ω = 5, picking the
//! level pair automatically from the bracket.

use qrm::spectra::{closest_pair, refine_crossing, SweptParam};
use qrm::ModelParams;

fn main() -> qrm::Result<()> {
    let delta = std::f64::consts::PI.powf(-1.0 / 3.0);
    let fixed = ModelParams::unit(delta, 5.0, 0.0)?;
    let bracket = (1.2127, 1.2129);
    let k = closest_pair(&fixed, SweptParam::G, bracket, 10)?;
    let r = refine_crossing(&fixed, SweptParam::G, bracket, k)?;
    println!("levels        {} and {}", r.level_pair.0, r.level_pair.1);
    println!("g*            {:.12}", r.param_star);
    println!("gap           {:.3e}", r.gap_at_star);
    println!("E_k - E_1     {:.10}", r.relative_energy);
    println!("certified     {}", r.certified);
    println!("n_fock        {}", r.n_fock);
    Ok(())
}
