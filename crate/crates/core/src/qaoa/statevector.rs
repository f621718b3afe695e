use num_complex::Complex64;

use super::circuit::{Gate, GateList};
use super::hamiltonian::PauliHamiltonian;
use crate::error::{Error, Result};

/// Largest register [`simulate`] accepts.
pub const MAX_QUBITS: usize = 24;

/// `2^q` amplitudes; bit `q` of a basis index is the value of qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩`.
    pub fn zero(qubits: usize) -> Result<Self> {
        if qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                qubits,
                cap: MAX_QUBITS,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amplitudes })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Applies one gate in place; each amplitude pair is touched once.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    qubits: self.qubits,
                });
            }
        }
        match *gate {
            Gate::H(q) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.for_pairs(q, |a, b| (s * (a + b), s * (a - b)));
            }
            Gate::Rx(q, theta) => {
                let c = (theta / 2.0).cos();
                let is = Complex64::new(0.0, -(theta / 2.0).sin());
                self.for_pairs(q, |a, b| (c * a + is * b, is * a + c * b));
            }
            Gate::Rz(q, theta) => {
                let lo = Complex64::from_polar(1.0, -theta / 2.0);
                let hi = Complex64::from_polar(1.0, theta / 2.0);
                self.for_pairs(q, |a, b| (lo * a, hi * b));
            }
            Gate::Cnot(control, target) => {
                if control == target {
                    return Err(Error::InvalidConfig(format!(
                        "CNOT control and target are both qubit {control}"
                    )));
                }
                let (cbit, tbit) = (1usize << control, 1usize << target);
                for i in 0..self.amplitudes.len() {
                    if i & cbit != 0 && i & tbit == 0 {
                        self.amplitudes.swap(i, i | tbit);
                    }
                }
            }
        }
        Ok(())
    }

    fn for_pairs(&mut self, q: usize, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        let bit = 1usize << q;
        let dim = self.amplitudes.len();
        let mut base = 0;
        while base < dim {
            for i in base..base + bit {
                let (a, b) = f(self.amplitudes[i], self.amplitudes[i | bit]);
                self.amplitudes[i] = a;
                self.amplitudes[i | bit] = b;
            }
            base += bit << 1;
        }
    }

    /// Exact `⟨ψ|H|ψ⟩` against a precomputed diagonal.
    pub fn expectation_diagonal(&self, diagonal: &[f64]) -> Result<f64> {
        if diagonal.len() != self.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                got: diagonal.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(diagonal)
            .map(|(a, d)| a.norm_sqr() * d)
            .sum())
    }
}

/// Runs `gates` on `|0…0⟩`.
pub fn simulate(gates: &GateList) -> Result<Statevector> {
    let mut psi = Statevector::zero(gates.qubits())?;
    for gate in gates.gates() {
        psi.apply(gate)?;
    }
    Ok(psi)
}

/// `Σ_b |amp_b|² ⟨b|H|b⟩`.
pub fn hamiltonian_expectation(h: &PauliHamiltonian, psi: &Statevector) -> Result<f64> {
    if h.qubit_count() != psi.qubits() {
        return Err(Error::DimensionMismatch {
            expected: psi.qubits(),
            got: h.qubit_count(),
        });
    }
    psi.expectation_diagonal(&h.diagonal())
}
