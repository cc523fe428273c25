//! Model parameters and operators of the (asymmetric) quantum Rabi model
//!
//! H = (Δ/2)σz + (ε/2)σx + ω(a†a + 1/2) + g σx (a + a†)
//!
//! in a truncated qubit ⊗ Fock basis. The flat index of |s, m⟩ is
//! `2m + s` with s = 0 for ↑ and s = 1 for ↓, so H is banded with
//! bandwidth 3. ħ = 1 throughout.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four Hamiltonian parameters of one model instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub delta: f64,
    pub epsilon: f64,
    pub omega: f64,
    pub g: f64,
}

impl ModelParams {
    pub fn new(delta: f64, epsilon: f64, omega: f64, g: f64) -> Result<Self> {
        let p = ModelParams {
            delta,
            epsilon,
            omega,
            g,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters in units of ω (ω = 1).
    pub fn unit(delta: f64, epsilon: f64, g: f64) -> Result<Self> {
        Self::new(delta, epsilon, 1.0, g)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("delta", self.delta),
            ("epsilon", self.epsilon),
            ("omega", self.omega),
            ("g", self.g),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {v} is not finite")));
            }
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if self.delta < 0.0 {
            return Err(Error::InvalidParams(format!(
                "delta must be non-negative, got {}",
                self.delta
            )));
        }
        if self.g < 0.0 {
            return Err(Error::InvalidParams(format!(
                "g must be non-negative, got {}",
                self.g
            )));
        }
        Ok(())
    }

    /// Same instance expressed with ω = 1.
    pub fn normalized(&self) -> ModelParams {
        ModelParams {
            delta: self.delta / self.omega,
            epsilon: self.epsilon / self.omega,
            omega: 1.0,
            g: self.g / self.omega,
        }
    }

    /// Dimensionless identifiers (Δ/ω, ε/ω, g/ω).
    pub fn ratios(&self) -> (f64, f64, f64) {
        let n = self.normalized();
        (n.delta, n.epsilon, n.g)
    }

    pub fn with_delta(self, delta: f64) -> Self {
        ModelParams { delta, ..self }
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        ModelParams { epsilon, ..self }
    }

    pub fn with_g(self, g: f64) -> Self {
        ModelParams { g, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    Up = 0,
    Down = 1,
}

impl Qubit {
    pub fn sigma_z(self) -> f64 {
        match self {
            Qubit::Up => 1.0,
            Qubit::Down => -1.0,
        }
    }

    pub fn flip(self) -> Qubit {
        match self {
            Qubit::Up => Qubit::Down,
            Qubit::Down => Qubit::Up,
        }
    }
}

/// Fock states 0..n_fock of the oscillator times the two qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedBasis {
    n_fock: usize,
}

impl TruncatedBasis {
    pub fn new(n_fock: usize) -> Result<Self> {
        if n_fock < 2 {
            return Err(Error::BasisTooSmall(n_fock));
        }
        Ok(TruncatedBasis { n_fock })
    }

    pub fn n_fock(&self) -> usize {
        self.n_fock
    }

    pub fn dim(&self) -> usize {
        2 * self.n_fock
    }

    pub fn index(&self, s: Qubit, m: usize) -> usize {
        debug_assert!(m < self.n_fock);
        2 * m + s as usize
    }

    pub fn state(&self, index: usize) -> (Qubit, usize) {
        let s = if index % 2 == 0 {
            Qubit::Up
        } else {
            Qubit::Down
        };
        (s, index / 2)
    }

    /// Parity eigenvalue of a basis state, (−1)^((1+σz)/2 + m).
    pub fn parity_of(&self, index: usize) -> f64 {
        let (s, m) = self.state(index);
        let exponent = match s {
            Qubit::Up => 1 + m,
            Qubit::Down => m,
        };
        if exponent % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorLabel {
    Hamiltonian,
    Parity,
    Symmetry,
    Other(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub label: OperatorLabel,
    pub matrix: DMatrix<f64>,
}

impl OperatorMatrix {
    pub fn new(label: OperatorLabel, matrix: DMatrix<f64>) -> Self {
        assert!(matrix.is_square(), "operator matrices are square");
        OperatorMatrix { label, matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_fock(&self) -> usize {
        self.dim() / 2
    }

    /// Largest |a_ij − a_ji|.
    pub fn asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..j {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)]).abs());
            }
        }
        worst
    }
}

pub fn build_hamiltonian(p: &ModelParams, basis: &TruncatedBasis) -> Result<OperatorMatrix> {
    p.validate()?;
    let n = basis.n_fock();
    let mut h = DMatrix::zeros(basis.dim(), basis.dim());
    for m in 0..n {
        let oscillator = p.omega * (m as f64 + 0.5);
        for s in [Qubit::Up, Qubit::Down] {
            let i = basis.index(s, m);
            h[(i, i)] = 0.5 * p.delta * s.sigma_z() + oscillator;
        }
        let (up, down) = (basis.index(Qubit::Up, m), basis.index(Qubit::Down, m));
        h[(up, down)] = 0.5 * p.epsilon;
        h[(down, up)] = 0.5 * p.epsilon;
        if m + 1 < n {
            // σx(a + a†): |s, m⟩ ↔ |s̄, m+1⟩ with amplitude g√(m+1)
            let c = p.g * ((m + 1) as f64).sqrt();
            for s in [Qubit::Up, Qubit::Down] {
                let i = basis.index(s, m);
                let j = basis.index(s.flip(), m + 1);
                h[(i, j)] = c;
                h[(j, i)] = c;
            }
        }
    }
    Ok(OperatorMatrix::new(OperatorLabel::Hamiltonian, h))
}

pub fn build_parity(basis: &TruncatedBasis) -> OperatorMatrix {
    let d = basis.dim();
    let diag = nalgebra::DVector::from_iterator(d, (0..d).map(|i| basis.parity_of(i)));
    OperatorMatrix::new(OperatorLabel::Parity, DMatrix::from_diagonal(&diag))
}

/// Max |(AB − BA)_ij| over basis states with Fock index below n_fock − 1.
pub fn commutator_norm(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let inner = 2 * (a.n_fock().saturating_sub(1));
    let c = &a.matrix * &b.matrix - &b.matrix * &a.matrix;
    let mut worst = 0.0f64;
    for j in 0..inner {
        for i in 0..inner {
            worst = worst.max(c[(i, j)].abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize) -> TruncatedBasis {
        TruncatedBasis::new(n).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ModelParams::unit(f64::NAN, 0.0, 0.1).is_err());
        assert!(ModelParams::new(0.1, 0.0, 0.0, 0.1).is_err());
        assert!(ModelParams::new(0.1, 0.0, 1.0, f64::INFINITY).is_err());
        assert!(matches!(
            TruncatedBasis::new(1),
            Err(Error::BasisTooSmall(1))
        ));
    }

    #[test]
    fn decoupled_two_fock_block() {
        let p = ModelParams::unit(0.7, 0.0, 0.0).unwrap();
        let h = build_hamiltonian(&p, &basis(2)).unwrap();
        let mut diag: Vec<f64> = (0..4).map(|i| h.matrix[(i, i)]).collect();
        diag.sort_by(f64::total_cmp);
        let want = [0.15, 0.85, 1.15, 1.85];
        for (a, b) in diag.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(h.matrix.iter().filter(|x| **x != 0.0).count(), 4);
    }

    #[test]
    fn parity_signs() {
        let b = basis(5);
        let pi = build_parity(&b);
        assert_eq!(
            pi.matrix[(b.index(Qubit::Down, 0), b.index(Qubit::Down, 0))],
            1.0
        );
        assert_eq!(
            pi.matrix[(b.index(Qubit::Up, 0), b.index(Qubit::Up, 0))],
            -1.0
        );
        assert_eq!(
            pi.matrix[(b.index(Qubit::Up, 1), b.index(Qubit::Up, 1))],
            1.0
        );
        assert_eq!(pi.matrix.trace(), 0.0);
        let sq = &pi.matrix * &pi.matrix;
        assert_eq!(sq, DMatrix::identity(10, 10));
    }

    #[test]
    fn commutator_cases() {
        let b = basis(20);
        let pi = build_parity(&b);
        let sym = build_hamiltonian(&ModelParams::unit(0.7, 0.0, 0.5).unwrap(), &b).unwrap();
        assert!(commutator_norm(&sym, &pi).unwrap() <= 1e-12);
        assert_eq!(commutator_norm(&sym, &sym).unwrap(), 0.0);
        let asym = build_hamiltonian(&ModelParams::unit(0.7, 1.0, 0.5).unwrap(), &b).unwrap();
        // the bias term anticommutes with Π: entries of size 2·(ε/2)
        assert!((commutator_norm(&asym, &pi).unwrap() - 1.0).abs() < 1e-12);
        let small = build_parity(&basis(3));
        assert!(matches!(
            commutator_norm(&sym, &small),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn couplings_span_one_quantum() {
        let b = basis(12);
        let h = build_hamiltonian(&ModelParams::new(0.3, 0.4, 1.3, 0.9).unwrap(), &b).unwrap();
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                let (_, mi) = b.state(i);
                let (_, mj) = b.state(j);
                if mi.abs_diff(mj) > 1 {
                    assert_eq!(h.matrix[(i, j)], 0.0);
                }
                if i.abs_diff(j) > 3 {
                    assert_eq!(h.matrix[(i, j)], 0.0);
                }
            }
        }
        assert_eq!(h.asymmetry(), 0.0);
    }
}
