//! Numerical toolkit for the asymmetric quantum Rabi model
//!
//! H = (Δ/2)σz + (ε/2)σx + ω(a†a + 1/2) + g σx (a + a†)
//!
//! * [`model`]: parameters, truncated basis, Hamiltonian and parity operator
//! * [`eigen`]: sorted eigensystems with truncation-convergence control
//! * [`spectra`]: level sweeps, gap curves, crossing refinement, baselines
//! * [`overlap`]: eigenbasis overlaps, partition search, symmetry operators
//! * [`perturb`]: the two-level effective model near ε = nω
//! * [`scan`]: minimum-gap scans over the (Δ/ω, g/ω) plane
//! * [`cli`]: run configurations and CSV output used by the `qrm` binary

pub mod cli;
pub mod eigen;
pub mod error;
pub mod model;
pub mod overlap;
pub mod perturb;
pub mod scan;
pub mod spectra;

pub use error::{Error, Result};
pub use model::{ModelParams, TruncatedBasis};
