use serde::{Deserialize, Serialize};

use super::hamiltonian::PauliHamiltonian;
use crate::error::{Error, Result};

/// Gate set of the ansatz. Rotations follow `R(θ) = exp(−iθP/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    Rx(usize, f64),
    Rz(usize, f64),
    /// `(control, target)`
    Cnot(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => vec![q],
            Gate::Cnot(c, t) => vec![c, t],
        }
    }

    fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, a) | Gate::Rz(_, a) => Some(a),
            _ => None,
        }
    }
}

/// Validated gate sequence on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct GateList {
    qubits: usize,
    gates: Vec<Gate>,
}

impl GateList {
    pub fn new(qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        for gate in &gates {
            for q in gate.qubits() {
                if q >= qubits {
                    return Err(Error::QubitOutOfRange { qubit: q, qubits });
                }
            }
            if let Gate::Cnot(c, t) = gate {
                if c == t {
                    return Err(Error::InvalidConfig(format!(
                        "CNOT control and target are both qubit {c}"
                    )));
                }
            }
            if gate.angle().is_some_and(|a| !a.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "non-finite angle in {gate:?}"
                )));
            }
        }
        Ok(Self { qubits, gates })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

/// Which variational angle a rotation depends on (layer index from 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Gamma(usize),
    Beta(usize),
}

/// A gate whose rotation angle is `scale · parameter`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnsatzGate {
    H(usize),
    Rx(usize, Param, f64),
    Rz(usize, Param, f64),
    Cnot(usize, usize),
}

/// Parameterized QAOA circuit; parameters are laid out as
/// `(γ₁, …, γ_p, β₁, …, β_p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ansatz {
    qubits: usize,
    layers: usize,
    gates: Vec<AnsatzGate>,
}

impl Ansatz {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn parameter_count(&self) -> usize {
        2 * self.layers
    }

    pub fn gates(&self) -> &[AnsatzGate] {
        &self.gates
    }

    /// Concrete gate list for `params = (γ₁..γ_p, β₁..β_p)`.
    pub fn bind(&self, params: &[f64]) -> Result<GateList> {
        if params.len() != self.parameter_count() {
            return Err(Error::DimensionMismatch {
                expected: self.parameter_count(),
                got: params.len(),
            });
        }
        let value = |p: Param| match p {
            Param::Gamma(k) => params[k],
            Param::Beta(k) => params[self.layers + k],
        };
        let gates = self
            .gates
            .iter()
            .map(|g| match *g {
                AnsatzGate::H(q) => Gate::H(q),
                AnsatzGate::Rx(q, p, s) => Gate::Rx(q, s * value(p)),
                AnsatzGate::Rz(q, p, s) => Gate::Rz(q, s * value(p)),
                AnsatzGate::Cnot(c, t) => Gate::Cnot(c, t),
            })
            .collect();
        GateList::new(self.qubits, gates)
    }
}

/// Compiles the `p`-layer QAOA ansatz for a diagonal Hamiltonian.
///
/// A Hadamard layer prepares `|+…+⟩`. Each layer `k` then applies the cost
/// unitary `exp(−iγ_k H)`: `RZ(q, 2cγ_k)` for a term `c·Z_q` and
/// `CNOT(a,b) RZ(b, 2cγ_k) CNOT(a,b)` for `c·Z_aZ_b`, followed by the mixer
/// `exp(−iβ_k H_M)` with `H_M = −Σ X_q`, i.e. `RX(q, −2β_k)` on every qubit.
/// Identity terms only add a global phase and are skipped.
pub fn compile_ansatz(h: &PauliHamiltonian, layers: usize) -> Result<Ansatz> {
    if layers == 0 {
        return Err(Error::InvalidConfig("QAOA needs at least one layer".into()));
    }
    if let Some((support, _)) = h.terms().find(|(s, _)| s.len() > 2) {
        return Err(Error::UnsupportedTerm {
            support: support.len(),
        });
    }
    let qubits = h.qubit_count();
    let mut gates: Vec<AnsatzGate> = (0..qubits).map(AnsatzGate::H).collect();
    for k in 0..layers {
        for (support, c) in h.terms() {
            match *support {
                [q] => gates.push(AnsatzGate::Rz(q, Param::Gamma(k), 2.0 * c)),
                [a, b] => {
                    gates.push(AnsatzGate::Cnot(a, b));
                    gates.push(AnsatzGate::Rz(b, Param::Gamma(k), 2.0 * c));
                    gates.push(AnsatzGate::Cnot(a, b));
                }
                _ => {}
            }
        }
        for q in 0..qubits {
            gates.push(AnsatzGate::Rx(q, Param::Beta(k), -2.0));
        }
    }
    Ok(Ansatz {
        qubits,
        layers,
        gates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_z_layer() {
        let mut h = PauliHamiltonian::new(2);
        h.add_term(1.0, &[0]).unwrap();
        let ansatz = compile_ansatz(&h, 1).unwrap();
        let gates = ansatz.bind(&[0.3, 0.7]).unwrap();
        assert_eq!(
            gates.gates(),
            [
                Gate::H(0),
                Gate::H(1),
                Gate::Rz(0, 0.6),
                Gate::Rx(0, -1.4),
                Gate::Rx(1, -1.4)
            ]
        );
    }

    #[test]
    fn zz_term_is_cnot_sandwich() {
        let mut h = PauliHamiltonian::new(3);
        h.add_term(-0.5, &[2, 0]).unwrap();
        let ansatz = compile_ansatz(&h, 2).unwrap();
        let gates = ansatz.bind(&[1.0, 2.0, 0.0, 0.0]).unwrap();
        let g = gates.gates();
        assert_eq!(
            &g[3..6],
            [Gate::Cnot(0, 2), Gate::Rz(2, -1.0), Gate::Cnot(0, 2)]
        );
        assert_eq!(
            &g[9..12],
            [Gate::Cnot(0, 2), Gate::Rz(2, -2.0), Gate::Cnot(0, 2)]
        );
        assert_eq!(g.len(), 3 + 2 * (3 + 3));
    }

    #[test]
    fn rejects_wide_terms_and_bad_parameters() {
        let mut h = PauliHamiltonian::new(3);
        h.add_term(1.0, &[0, 1, 2]).unwrap();
        assert!(matches!(
            compile_ansatz(&h, 1),
            Err(Error::UnsupportedTerm { support: 3 })
        ));
        let ok = compile_ansatz(&PauliHamiltonian::new(1), 2).unwrap();
        assert!(ok.bind(&[0.0; 3]).is_err());
        assert!(ok.bind(&[0.0, 0.0, f64::NAN, 0.0]).is_err());
        assert!(compile_ansatz(&PauliHamiltonian::new(1), 0).is_err());
    }

    #[test]
    fn gate_list_validation() {
        assert!(GateList::new(2, vec![Gate::H(2)]).is_err());
        assert!(GateList::new(2, vec![Gate::Cnot(0, 0)]).is_err());
        assert!(GateList::new(2, vec![Gate::Rz(0, f64::INFINITY)]).is_err());
    }
}
