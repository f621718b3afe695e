use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::circuit::{compile_ansatz, Ansatz};
use super::hamiltonian::PauliHamiltonian;
use super::nelder_mead::{nelder_mead, NelderMeadConfig};
use super::statevector::{simulate, Statevector, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::samples::{BitState, SampleSet, Vartype};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaConfig {
    pub layers: usize,
    /// `(γ₁..γ_p, β₁..β_p)` for the first restart; later restarts draw
    /// uniformly from `[0, 2π)`.
    pub initial_parameters: Option<Vec<f64>>,
    pub optimizer: NelderMeadConfig,
    pub restarts: usize,
    pub seed: u64,
    /// How many basis states the report keeps.
    pub top_k: usize,
}

impl Default for QaoaConfig {
    fn default() -> Self {
        Self {
            layers: 1,
            initial_parameters: None,
            optimizer: NelderMeadConfig {
                max_iterations: 500,
                tolerance: 1e-10,
                x_tolerance: 1e-8,
            },
            restarts: 10,
            seed: 0,
            top_k: 8,
        }
    }
}

impl QaoaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 {
            return Err(Error::InvalidConfig("layers must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if let Some(p) = &self.initial_parameters {
            if p.len() != 2 * self.layers {
                return Err(Error::DimensionMismatch {
                    expected: 2 * self.layers,
                    got: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidConfig(
                    "initial parameters must be finite".into(),
                ));
            }
        }
        if !(self.optimizer.tolerance >= 0.0 && self.optimizer.x_tolerance >= 0.0) {
            return Err(Error::InvalidConfig(
                "optimizer tolerance must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// One objective evaluation of the variational loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub restart: usize,
    pub evaluation: usize,
    pub parameters: Vec<f64>,
    pub expectation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub initial_parameters: Vec<f64>,
    pub parameters: Vec<f64>,
    pub expectation: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisState {
    pub index: u64,
    /// Qubit 0 first.
    pub bitstring: String,
    pub probability: f64,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct QaoaResult {
    pub parameters: Vec<f64>,
    pub expectation: f64,
    /// Index into `restarts` of the winning run.
    pub best_restart: usize,
    pub restarts: Vec<RestartSummary>,
    pub state: Statevector,
    /// Top basis states by probability, ties broken by index.
    pub top_states: Vec<BasisState>,
    pub log: Vec<Evaluation>,
}

impl QaoaResult {
    /// Top states as a binary [`SampleSet`] in probability order, energies
    /// from the Hamiltonian diagonal.
    pub fn samples(&self) -> SampleSet {
        let qubits = self.state.qubits();
        let mut set = SampleSet::with_capacity(Vartype::Binary, qubits, self.top_states.len());
        for s in &self.top_states {
            set.push(&BitState::from_index(qubits, s.index), s.energy, 1);
        }
        set
    }

    /// Lowest expectation among the first `k` restarts.
    pub fn best_of(&self, k: usize) -> Option<f64> {
        self.restarts
            .iter()
            .take(k)
            .map(|r| r.expectation)
            .min_by(f64::total_cmp)
    }

    pub fn log_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.log {
            out.push_str(&serde_json::to_string(e).expect("evaluation serializes"));
            out.push('\n');
        }
        out
    }

    pub fn report_json(&self) -> serde_json::Value {
        serde_json::json!({
            "qubits": self.state.qubits(),
            "parameters": self.parameters,
            "expectation": self.expectation,
            "best_restart": self.best_restart,
            "restarts": self.restarts,
            "top_states": self.top_states,
        })
    }
}

/// Precompiled circuit and diagonal for repeated expectation evaluation.
#[derive(Debug, Clone)]
pub struct QaoaObjective {
    ansatz: Ansatz,
    diagonal: Vec<f64>,
}

impl QaoaObjective {
    pub fn new(h: &PauliHamiltonian, layers: usize) -> Result<Self> {
        if h.qubit_count() > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                qubits: h.qubit_count(),
                cap: MAX_QUBITS,
            });
        }
        Ok(Self {
            ansatz: compile_ansatz(h, layers)?,
            diagonal: h.diagonal(),
        })
    }

    pub fn ansatz(&self) -> &Ansatz {
        &self.ansatz
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn state(&self, params: &[f64]) -> Result<Statevector> {
        simulate(&self.ansatz.bind(params)?)
    }

    pub fn expectation(&self, params: &[f64]) -> Result<f64> {
        self.state(params)?.expectation_diagonal(&self.diagonal)
    }
}

/// Minimizes `⟨ψ(γ,β)|H|ψ(γ,β)⟩` with Nelder-Mead from `restarts` starting
/// points and keeps the best run. Restarts are independent and each draws
/// its start from its own seeded stream, so results do not depend on thread
/// scheduling.
pub fn run_qaoa(h: &PauliHamiltonian, config: &QaoaConfig) -> Result<QaoaResult> {
    config.validate()?;
    let objective = QaoaObjective::new(h, config.layers)?;
    let dim = 2 * config.layers;

    let runs: Vec<(RestartSummary, Vec<Evaluation>)> = (0..config.restarts)
        .into_par_iter()
        .map(|restart| {
            let start = match (&config.initial_parameters, restart) {
                (Some(p), 0) => p.clone(),
                _ => {
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                    rng.set_stream(restart as u64);
                    (0..dim).map(|_| rng.gen_range(0.0..TAU)).collect()
                }
            };
            let mut log = Vec::new();
            let mut failure = None;
            let result = nelder_mead(
                |x| match objective.expectation(x) {
                    Ok(e) => {
                        log.push(Evaluation {
                            restart,
                            evaluation: log.len(),
                            parameters: x.to_vec(),
                            expectation: e,
                        });
                        e
                    }
                    Err(err) => {
                        failure.get_or_insert(err);
                        f64::INFINITY
                    }
                },
                &start,
                &config.optimizer,
            )?;
            if let Some(err) = failure {
                return Err(err);
            }
            Ok((
                RestartSummary {
                    restart,
                    initial_parameters: start,
                    parameters: result.x,
                    expectation: result.f,
                    iterations: result.iterations,
                    evaluations: result.evaluations,
                    converged: result.converged,
                },
                log,
            ))
        })
        .collect::<Result<_>>()?;

    let best_restart = runs
        .iter()
        .enumerate()
        .min_by(|a, b| {
            a.1 .0
                .expectation
                .total_cmp(&b.1 .0.expectation)
                .then(a.0.cmp(&b.0))
        })
        .map(|(i, _)| i)
        .expect("at least one restart");
    let best = runs[best_restart].0.clone();
    let state = objective.state(&best.parameters)?;
    let top_states = top_basis_states(&state, objective.diagonal(), config.top_k);

    let (restarts, logs): (Vec<_>, Vec<_>) = runs.into_iter().unzip();
    Ok(QaoaResult {
        parameters: best.parameters,
        expectation: best.expectation,
        best_restart,
        restarts,
        state,
        top_states,
        log: logs.into_iter().flatten().collect(),
    })
}

/// The `k` most probable basis states, ties broken by lower index.
pub fn top_basis_states(state: &Statevector, diagonal: &[f64], k: usize) -> Vec<BasisState> {
    let probs = state.probabilities();
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]).then(a.cmp(&b)));
    order
        .into_iter()
        .take(k)
        .map(|i| BasisState {
            index: i as u64,
            bitstring: (0..state.qubits())
                .map(|q| if i >> q & 1 == 1 { '1' } else { '0' })
                .collect(),
            probability: probs[i],
            energy: diagonal[i],
        })
        .collect()
}
