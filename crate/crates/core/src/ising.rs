//! Ising models over spins `s ∈ {-1, +1}` and the exact QUBO change of
//! variables `x = (s + 1) / 2`.
//!
//! Energies follow `E(s) = Σ hᵢsᵢ + Σ_{i<j} Jᵢⱼsᵢsⱼ` with coefficients used
//! as stored; the constant `offset` is kept separately so that
//! `E(s) + offset` equals the QUBO energy of the corresponding binary state.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::QuboModel;

#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    h: Vec<f64>,
    j: BTreeMap<(usize, usize), f64>,
    offset: f64,
    labels: Vec<String>,
}

impl IsingModel {
    pub fn new(num_variables: usize) -> Self {
        Self {
            h: vec![0.0; num_variables],
            j: BTreeMap::new(),
            offset: 0.0,
            labels: (0..num_variables).map(|i| format!("q{i}")).collect(),
        }
    }

    /// Builds a model from biases and couplings; coupling keys are folded to
    /// `i < j` and zero entries dropped.
    pub fn from_parts(
        h: Vec<f64>,
        couplings: impl IntoIterator<Item = ((usize, usize), f64)>,
        offset: f64,
    ) -> Result<Self> {
        let mut model = Self::new(h.len());
        model.h = h;
        model.offset = offset;
        for ((a, b), v) in couplings {
            model.add_coupling(a, b, v)?;
        }
        Ok(model)
    }

    /// Reads a QUBO coefficient table as Ising coefficients directly:
    /// diagonal entries become `h`, upper-triangular pair sums become `J`.
    pub fn from_coefficients(model: &QuboModel) -> Self {
        let (diagonal, couplers) = model.canonical_terms();
        let mut out = Self::new(model.num_variables());
        out.labels = model.labels().to_vec();
        for (i, v) in diagonal {
            out.h[i] = v;
        }
        for (i, j, v) in couplers {
            out.j.insert((i, j), v);
        }
        out
    }

    pub fn num_variables(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.j
    }

    pub fn coupling(&self, a: usize, b: usize) -> f64 {
        self.j.get(&(a.min(b), a.max(b))).copied().unwrap_or(0.0)
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.num_variables() {
            return Err(Error::DimensionMismatch {
                expected: self.num_variables(),
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(())
    }

    pub fn add_bias(&mut self, i: usize, value: f64) {
        self.h[i] += value;
    }

    pub fn add_coupling(&mut self, a: usize, b: usize, value: f64) -> Result<()> {
        let n = self.num_variables();
        if a == b || a >= n || b >= n {
            return Err(Error::InvalidConfig(format!(
                "coupling ({a}, {b}) is not a pair of distinct variables below {n}"
            )));
        }
        let key = (a.min(b), a.max(b));
        let entry = self.j.entry(key).or_insert(0.0);
        *entry += value;
        if *entry == 0.0 {
            self.j.remove(&key);
        }
        Ok(())
    }

    /// `Σ hᵢsᵢ + Σ Jᵢⱼsᵢsⱼ`, offset excluded.
    pub fn energy(&self, s: &[i8]) -> Result<f64> {
        if s.len() != self.num_variables() {
            return Err(Error::DimensionMismatch {
                expected: self.num_variables(),
                got: s.len(),
            });
        }
        if let Some(&bad) = s.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidValue {
                value: bad,
                vartype: "spin",
            });
        }
        let linear: f64 = self.h.iter().zip(s).map(|(h, &v)| h * v as f64).sum();
        let quadratic: f64 = self
            .j
            .iter()
            .map(|(&(a, b), &v)| v * (s[a] * s[b]) as f64)
            .sum();
        Ok(linear + quadratic)
    }

    pub fn max_abs_coupling(&self) -> f64 {
        self.j.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `Σ|h| + Σ|J|`.
    pub fn coefficient_l1(&self) -> f64 {
        self.h.iter().map(|v| v.abs()).sum::<f64>() + self.j.values().map(|v| v.abs()).sum::<f64>()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(IsingJson {
            num_variables: self.num_variables(),
            labels: self.labels.clone(),
            h: self.h.clone(),
            j: self.j.iter().map(|(&(a, b), &v)| (a, b, v)).collect(),
            offset: self.offset,
        })
        .expect("Ising model serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let dto: IsingJson = serde_json::from_value(value.clone())?;
        if dto.h.len() != dto.num_variables {
            return Err(Error::DimensionMismatch {
                expected: dto.num_variables,
                got: dto.h.len(),
            });
        }
        let mut model = Self::from_parts(
            dto.h,
            dto.j.into_iter().map(|(a, b, v)| ((a, b), v)),
            dto.offset,
        )?;
        model.set_labels(dto.labels)?;
        Ok(model)
    }
}

#[derive(Serialize, Deserialize)]
struct IsingJson {
    num_variables: usize,
    labels: Vec<String>,
    h: Vec<f64>,
    /// `[i, j, value]` with `i < j`.
    j: Vec<(usize, usize, f64)>,
    offset: f64,
}

/// Exact change of variables `x = (s + 1) / 2` applied to `xᵀQx`.
///
/// A diagonal entry `q` contributes `q/2` to `hᵢ` and to the offset; a
/// canonical coupler `q` contributes `q/4` to `Jᵢⱼ`, `hᵢ`, `hⱼ` and the
/// offset.
pub fn qubo_to_ising(model: &QuboModel) -> IsingModel {
    let (diagonal, couplers) = model.canonical_terms();
    let mut out = IsingModel::new(model.num_variables());
    out.labels = model.labels().to_vec();
    for (i, q) in diagonal {
        out.h[i] += q / 2.0;
        out.offset += q / 2.0;
    }
    for (i, j, q) in couplers {
        let quarter = q / 4.0;
        out.add_coupling(i, j, quarter)
            .expect("canonical coupler indices");
        out.h[i] += quarter;
        out.h[j] += quarter;
        out.offset += quarter;
    }
    out
}

/// `E(s)` without offset.
pub fn ising_energy(model: &IsingModel, s: &[i8]) -> Result<f64> {
    model.energy(s)
}

/// Spin vector for a binary one: `s = 2x - 1`.
pub fn binary_to_spin(x: &[i8]) -> Vec<i8> {
    x.iter().map(|&v| 2 * v - 1).collect()
}

/// Binary vector for a spin one: `x = (s + 1) / 2`.
pub fn spin_to_binary(s: &[i8]) -> Vec<i8> {
    s.iter().map(|&v| (v + 1) / 2).collect()
}
