use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::reads::OverlapGraph;

/// Weighted sum of Pauli-Z products, diagonal in the computational basis.
///
/// Terms with equal support are merged and terms whose coefficient becomes
/// exactly zero are dropped. An empty support is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliHamiltonian {
    qubits: usize,
    terms: BTreeMap<Vec<usize>, f64>,
}

impl PauliHamiltonian {
    pub fn new(qubits: usize) -> Self {
        Self {
            qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    /// Adds `coefficient · Π_{q ∈ support} Z_q`. Repeated qubits cancel in
    /// pairs (`Z² = I`).
    pub fn add_term(&mut self, coefficient: f64, support: &[usize]) -> Result<()> {
        if let Some(&q) = support.iter().find(|&&q| q >= self.qubits) {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                qubits: self.qubits,
            });
        }
        let mut sorted = support.to_vec();
        sorted.sort_unstable();
        let mut reduced: Vec<usize> = Vec::with_capacity(sorted.len());
        for q in sorted {
            if reduced.last() == Some(&q) {
                reduced.pop();
            } else {
                reduced.push(q);
            }
        }
        let entry = self.terms.entry(reduced.clone()).or_insert(0.0);
        *entry += coefficient;
        if *entry == 0.0 {
            self.terms.remove(&reduced);
        }
        Ok(())
    }

    /// `(support, coefficient)` in lexicographic support order.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.terms.iter().map(|(s, &c)| (s.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, support: &[usize]) -> f64 {
        let mut s = support.to_vec();
        s.sort_unstable();
        self.terms.get(&s).copied().unwrap_or(0.0)
    }

    /// `⟨b|H|b⟩ = Σ c_k Π_{q ∈ support_k} (1 − 2·bit_q(b))`.
    pub fn diagonal_value(&self, basis: u64) -> f64 {
        self.terms
            .iter()
            .map(|(support, &c)| {
                let mask: u64 = support.iter().map(|&q| 1u64 << q).sum();
                if (basis & mask).count_ones().is_multiple_of(2) {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// The full `2^q` diagonal.
    pub fn diagonal(&self) -> Vec<f64> {
        let dim = 1usize << self.qubits;
        let mut out = vec![0.0; dim];
        for (support, &c) in &self.terms {
            let mask: usize = support.iter().map(|&q| 1usize << q).sum();
            for (b, v) in out.iter_mut().enumerate() {
                if (b & mask).count_ones().is_multiple_of(2) {
                    *v += c;
                } else {
                    *v -= c;
                }
            }
        }
        out
    }
}

/// TSP cost Hamiltonian on `n²` qubits (qubit `i·n + r` is node `i` at slot
/// `r`), the sum of four parts:
///
/// - `w·Z_q` on every qubit,
/// - for each slot and node pair: `−w/2·Z_a − w/2·Z_b + w/2·Z_aZ_b`,
/// - the same for each node and slot pair,
/// - for each ordered node pair `i ≠ j` and slot `r`, with `s = r+1 mod n`
///   and `d = −weight(i, j)`: `−d/4·Z_{in+r} − d/4·Z_{jn+s} + d/4·Z_{in+r}Z_{jn+s}`.
pub fn build_cost_hamiltonian(graph: &OverlapGraph, w: f64) -> Result<PauliHamiltonian> {
    let n = graph.len();
    if n < 2 {
        return Err(Error::TooFewReads { needed: 2, got: n });
    }
    let mut h = PauliHamiltonian::new(n * n);
    let half = w / 2.0;
    for q in 0..n * n {
        h.add_term(w, &[q])?;
    }
    for r in 0..n {
        for i in 1..n {
            for j in 0..i {
                let (a, b) = (i * n + r, j * n + r);
                h.add_term(-half, &[a])?;
                h.add_term(-half, &[b])?;
                h.add_term(half, &[a, b])?;
            }
        }
    }
    for i in 0..n {
        for r in 1..n {
            for s in 0..r {
                let (a, b) = (i * n + r, i * n + s);
                h.add_term(-half, &[a])?;
                h.add_term(-half, &[b])?;
                h.add_term(half, &[a, b])?;
            }
        }
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let d = -graph.weight(i, j);
            let quarter = d / 4.0;
            for r in 0..n {
                let s = (r + 1) % n;
                let (a, b) = (i * n + r, j * n + s);
                h.add_term(-quarter, &[a])?;
                h.add_term(-quarter, &[b])?;
                h.add_term(quarter, &[a, b])?;
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The four printed sums evaluated literally on one basis state.
    fn printed_formula(graph: &OverlapGraph, w: f64, b: u64) -> f64 {
        let n = graph.len();
        let z = |q: usize| if b >> q & 1 == 1 { -1.0 } else { 1.0 };
        let mut e = 0.0;
        for q in 0..n * n {
            e += w * z(q);
        }
        for r in 0..n {
            for i in 1..n {
                for j in 0..i {
                    let (a, c) = (z(i * n + r), z(j * n + r));
                    e += -w / 2.0 * a - w / 2.0 * c + w / 2.0 * a * c;
                }
            }
        }
        for i in 0..n {
            for r in 1..n {
                for s in 0..r {
                    let (a, c) = (z(i * n + r), z(i * n + s));
                    e += -w / 2.0 * a - w / 2.0 * c + w / 2.0 * a * c;
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = -graph.weight(i, j);
                for r in 0..n {
                    let (a, c) = (z(i * n + r), z(j * n + (r + 1) % n));
                    e += -d / 4.0 * a - d / 4.0 * c + d / 4.0 * a * c;
                }
            }
        }
        e
    }

    #[test]
    fn two_node_zero_weights() {
        let g = OverlapGraph::from_weights(2, vec![0.0; 4]).unwrap();
        let h = build_cost_hamiltonian(&g, 1.0).unwrap();
        // each qubit: +1 from the first sum, −1/2 from each penalty sum
        for q in 0..4 {
            assert_eq!(h.coefficient(&[q]), 0.0);
        }
        let doubles: Vec<(Vec<usize>, f64)> = h.terms().map(|(s, c)| (s.to_vec(), c)).collect();
        assert_eq!(
            doubles,
            [
                (vec![0, 1], 0.5),
                (vec![0, 2], 0.5),
                (vec![1, 3], 0.5),
                (vec![2, 3], 0.5)
            ]
        );
    }

    #[test]
    fn zero_everything_is_empty() {
        let g = OverlapGraph::from_weights(3, vec![0.0; 9]).unwrap();
        assert!(build_cost_hamiltonian(&g, 0.0).unwrap().is_empty());
    }

    #[test]
    fn aggregated_terms_match_printed_sums() {
        let g = OverlapGraph::from_rows(&[
            vec![0.0, 2.0, 5.0],
            vec![1.0, 0.0, 3.0],
            vec![4.0, 0.5, 0.0],
        ])
        .unwrap();
        let h = build_cost_hamiltonian(&g, 7.0).unwrap();
        let diag = h.diagonal();
        for b in 0..1u64 << 9 {
            let expected = printed_formula(&g, 7.0, b);
            assert!((diag[b as usize] - expected).abs() < 1e-9);
            assert!((h.diagonal_value(b) - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn z_squared_cancels() {
        let mut h = PauliHamiltonian::new(3);
        h.add_term(2.0, &[1, 0, 1]).unwrap();
        assert_eq!(h.coefficient(&[0]), 2.0);
        h.add_term(1.0, &[2, 2]).unwrap();
        assert_eq!(h.coefficient(&[]), 1.0);
        assert_eq!(h.diagonal_value(0b111), -2.0 + 1.0);
        assert!(h.add_term(1.0, &[3]).is_err());
    }
}
