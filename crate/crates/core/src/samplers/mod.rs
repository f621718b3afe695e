//! Samplers for QUBO and Ising models.
//!
//! Both samplers work on a [`QuadraticForm`], a sparse compiled view of a
//! model with symmetric adjacency lists, so one implementation serves both
//! variable domains.

mod anneal;
mod exact;

pub use anneal::{solve_sa, AnnealSchedule};
pub use exact::{solve_exact, solve_exact_with_cap, EXACT_VARIABLE_CAP};

use crate::ising::IsingModel;
use crate::qubo::QuboModel;
use crate::samples::{BitState, Vartype};

/// Sparse quadratic objective over `{0,1}` or `{-1,+1}` variables:
/// `Σ linearᵢvᵢ + Σ_{i<j} Cᵢⱼvᵢvⱼ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    vartype: Vartype,
    linear: Vec<f64>,
    couplers: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl QuadraticForm {
    pub fn new(vartype: Vartype, linear: Vec<f64>, couplers: Vec<(usize, usize, f64)>) -> Self {
        let mut adjacency = vec![Vec::new(); linear.len()];
        for &(i, j, v) in &couplers {
            adjacency[i].push((j, v));
            adjacency[j].push((i, v));
        }
        Self {
            vartype,
            linear,
            couplers,
            adjacency,
        }
    }

    pub fn vartype(&self) -> Vartype {
        self.vartype
    }

    pub fn num_variables(&self) -> usize {
        self.linear.len()
    }

    fn value(&self, bit: bool) -> f64 {
        self.vartype.value(bit) as f64
    }

    /// Energy of a packed state, evaluated term by term.
    pub fn energy(&self, state: &BitState) -> f64 {
        let linear: f64 = self
            .linear
            .iter()
            .enumerate()
            .filter(|(_, &h)| h != 0.0)
            .map(|(i, h)| h * self.value(state.get(i)))
            .sum();
        let quadratic: f64 = self
            .couplers
            .iter()
            .map(|&(i, j, v)| v * self.value(state.get(i)) * self.value(state.get(j)))
            .sum();
        linear + quadratic
    }

    /// `Σ_j Cᵢⱼvⱼ` for every `i`.
    fn local_fields(&self, state: &BitState) -> Vec<f64> {
        self.adjacency
            .iter()
            .map(|row| row.iter().map(|&(j, v)| v * self.value(state.get(j))).sum())
            .collect()
    }

    /// Energy change from flipping variable `i`, given its local field.
    #[inline]
    fn flip_delta(&self, i: usize, current: bool, field: f64) -> f64 {
        let g = self.linear[i] + field;
        match self.vartype {
            Vartype::Binary => {
                if current {
                    -g
                } else {
                    g
                }
            }
            Vartype::Spin => {
                if current {
                    -2.0 * g
                } else {
                    2.0 * g
                }
            }
        }
    }

    /// Flips variable `i` and updates neighbour fields.
    #[inline]
    fn apply_flip(&self, i: usize, state: &mut BitState, fields: &mut [f64]) {
        let was = state.get(i);
        state.flip(i);
        // change of v_i
        let dv = match (self.vartype, was) {
            (Vartype::Binary, false) => 1.0,
            (Vartype::Binary, true) => -1.0,
            (Vartype::Spin, false) => 2.0,
            (Vartype::Spin, true) => -2.0,
        };
        for &(j, v) in &self.adjacency[i] {
            fields[j] += v * dv;
        }
    }

    /// Nonzero coefficient magnitudes (linear and quadratic).
    pub fn coefficient_magnitudes(&self) -> Vec<f64> {
        self.linear
            .iter()
            .copied()
            .chain(self.couplers.iter().map(|c| c.2))
            .filter(|v| *v != 0.0)
            .map(f64::abs)
            .collect()
    }
}

/// A model the samplers can consume.
pub trait SamplerModel {
    fn vartype(&self) -> Vartype;
    fn quadratic_form(&self) -> QuadraticForm;
}

impl SamplerModel for QuboModel {
    fn vartype(&self) -> Vartype {
        Vartype::Binary
    }

    fn quadratic_form(&self) -> QuadraticForm {
        let (diagonal, couplers) = self.canonical_terms();
        let mut linear = vec![0.0; self.num_variables()];
        for (i, v) in diagonal {
            linear[i] = v;
        }
        QuadraticForm::new(Vartype::Binary, linear, couplers)
    }
}

impl SamplerModel for IsingModel {
    fn vartype(&self) -> Vartype {
        Vartype::Spin
    }

    fn quadratic_form(&self) -> QuadraticForm {
        QuadraticForm::new(
            Vartype::Spin,
            self.h().to_vec(),
            self.couplings()
                .iter()
                .map(|(&(a, b), &v)| (a, b, v))
                .collect(),
        )
    }
}

impl<M: SamplerModel> SamplerModel for &M {
    fn vartype(&self) -> Vartype {
        (*self).vartype()
    }

    fn quadratic_form(&self) -> QuadraticForm {
        (*self).quadratic_form()
    }
}
