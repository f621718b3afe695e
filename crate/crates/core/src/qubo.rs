//! Travelling-salesman QUBO construction over one-hot `(node, time)`
//! variables, solution decoding, sequence stitching and the `.qubo` text
//! format.
//!
//! Variable `i * n + t` is 1 when node `i` is visited at time slot `t`; its
//! label is `n{i}t{t}`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt::format_g;
use crate::reads::{validate_tour, OverlapGraph, ReadSet};

/// Reward and penalty weights of the TSP encoding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Penalties {
    /// Self-bias on every variable (assignment reward, `<= 0`).
    pub a: f64,
    /// Same node in two time slots (`>= 0`).
    pub b: f64,
    /// Same time slot holding two nodes (`>= 0`).
    pub c: f64,
}

impl Default for Penalties {
    /// `a = 0, b = c = 13`, sized for raw (unnormalized) overlap weights.
    fn default() -> Self {
        Self {
            a: 0.0,
            b: 13.0,
            c: 13.0,
        }
    }
}

impl Penalties {
    /// The `a = -1.6, b = c = 1.6` parameterization, sized for normalized
    /// weights.
    pub fn normalized_default() -> Self {
        Self {
            a: -1.6,
            b: 1.6,
            c: 1.6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.a.is_finite() && self.b.is_finite() && self.c.is_finite();
        if !finite || self.a > 0.0 || self.b < 0.0 || self.c < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "penalties need a <= 0, b >= 0, c >= 0 (got a={}, b={}, c={})",
                self.a, self.b, self.c
            )));
        }
        Ok(())
    }
}

/// `(i, j, value)` with `i < j`.
pub type Coupler = (usize, usize, f64);

/// Dense QUBO `minimize xᵀQx` over `x ∈ {0,1}ᴺ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboModel {
    num_variables: usize,
    q: Vec<f64>,
    labels: Vec<String>,
    penalties: Option<Penalties>,
}

impl QuboModel {
    /// All-zero model with labels `q0..q{N-1}`.
    pub fn zeros(num_variables: usize) -> Self {
        Self {
            num_variables,
            q: vec![0.0; num_variables * num_variables],
            labels: (0..num_variables).map(|i| format!("q{i}")).collect(),
            penalties: None,
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut model = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            model.q[i * n..(i + 1) * n].copy_from_slice(row);
        }
        Ok(model)
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn penalties(&self) -> Option<Penalties> {
        self.penalties
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.num_variables + j]
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        self.q[i * self.num_variables + j] += value;
    }

    /// Row-major matrix entries.
    pub fn matrix(&self) -> &[f64] {
        &self.q
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.q
            .chunks(self.num_variables.max(1))
            .take(self.num_variables)
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// Node count `n` when `N = n²`.
    pub fn node_count(&self) -> Option<usize> {
        let n = (self.num_variables as f64).sqrt().round() as usize;
        (n * n == self.num_variables).then_some(n)
    }

    /// Diagonal entries and upper-triangular pair sums `Q[i][j] + Q[j][i]`,
    /// `i < j`, skipping zeros.
    pub fn canonical_terms(&self) -> (Vec<(usize, f64)>, Vec<Coupler>) {
        let n = self.num_variables;
        let diagonal = (0..n)
            .map(|i| (i, self.get(i, i)))
            .filter(|&(_, v)| v != 0.0)
            .collect();
        let mut couplers = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = self.get(i, j) + self.get(j, i);
                if v != 0.0 {
                    couplers.push((i, j, v));
                }
            }
        }
        (diagonal, couplers)
    }

    /// Equivalent upper-triangular model (same energy on every state).
    pub fn canonical(&self) -> QuboModel {
        let n = self.num_variables;
        let mut out = QuboModel {
            num_variables: n,
            q: vec![0.0; n * n],
            labels: self.labels.clone(),
            penalties: self.penalties,
        };
        let (diagonal, couplers) = self.canonical_terms();
        for (i, v) in diagonal {
            out.q[i * n + i] = v;
        }
        for (i, j, v) in couplers {
            out.q[i * n + j] = v;
        }
        out
    }

    /// `xᵀQx` for a `{0,1}` vector.
    pub fn energy(&self, x: &[i8]) -> Result<f64> {
        if x.len() != self.num_variables {
            return Err(Error::DimensionMismatch {
                expected: self.num_variables,
                got: x.len(),
            });
        }
        if let Some(&bad) = x.iter().find(|&&v| v != 0 && v != 1) {
            return Err(Error::InvalidValue {
                value: bad,
                vartype: "binary",
            });
        }
        let ones: Vec<usize> = (0..x.len()).filter(|&i| x[i] == 1).collect();
        Ok(ones
            .iter()
            .map(|&i| ones.iter().map(|&j| self.get(i, j)).sum::<f64>())
            .sum())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(QuboJson {
            labels: self.labels.clone(),
            q: self.rows(),
            penalties: self.penalties,
        })
        .expect("QUBO model serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let dto: QuboJson = serde_json::from_value(value.clone())?;
        let mut model = Self::from_rows(&dto.q)?;
        if dto.labels.len() != model.num_variables {
            return Err(Error::DimensionMismatch {
                expected: model.num_variables,
                got: dto.labels.len(),
            });
        }
        model.labels = dto.labels;
        model.penalties = dto.penalties;
        Ok(model)
    }
}

#[derive(Serialize, Deserialize)]
struct QuboJson {
    labels: Vec<String>,
    q: Vec<Vec<f64>>,
    penalties: Option<Penalties>,
}

/// `xᵀQx`.
pub fn qubo_energy(model: &QuboModel, x: &[i8]) -> Result<f64> {
    model.energy(x)
}

/// `(node, t1, t2)` for every node and ordered slot pair `t1 != t2`.
fn multi_location_cells(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |node| {
        (0..n).flat_map(move |t1| {
            (0..n)
                .filter(move |&t2| t2 != t1)
                .map(move |t2| (node * n + t1, node * n + t2))
        })
    })
}

fn repetition_cells(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |t| {
        (0..n).flat_map(move |i1| {
            (0..n)
                .filter(move |&i2| i2 != i1)
                .map(move |i2| (i1 * n + t, i2 * n + t))
        })
    })
}

/// `(row, col, from_node, to_node)`: node `from` at slot `t` followed by
/// node `to` at slot `(t + 1) mod n`.
fn path_cells(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |ci| {
        (0..n)
            .flat_map(move |cj| (0..n).map(move |ti| (ci * n + ti, cj * n + (ti + 1) % n, ci, cj)))
    })
}

/// Builds the `n²`-variable TSP QUBO from a directed overlap graph.
///
/// The matrix is the sum of the self-bias `a` on every variable, `b` on each
/// ordered pair of slots of one node, `c` on each ordered pair of nodes in
/// one slot, and the path cost `-w(i, j)` from `(i, t)` to `(j, t+1 mod n)`.
pub fn tsp_to_qubo(graph: &OverlapGraph, penalties: Penalties) -> Result<QuboModel> {
    let n = graph.len();
    if n < 2 {
        return Err(Error::TooFewReads { needed: 2, got: n });
    }
    penalties.validate()?;
    let size = n * n;
    let mut model = QuboModel {
        num_variables: size,
        q: vec![0.0; size * size],
        labels: (0..n)
            .flat_map(|i| (0..n).map(move |t| format!("n{i}t{t}")))
            .collect(),
        penalties: Some(penalties),
    };
    for v in 0..size {
        model.add(v, v, penalties.a);
    }
    for (r, c) in multi_location_cells(n) {
        model.add(r, c, penalties.b);
    }
    for (r, c) in repetition_cells(n) {
        model.add(r, c, penalties.c);
    }
    for (r, c, from, to) in path_cells(n) {
        model.add(r, c, -graph.weight(from, to));
    }
    Ok(model)
}

/// One-hot encoding of `tour`: `x[i * n + t] = 1` iff `tour[t] == i`.
pub fn encode_tour(tour: &[usize]) -> Result<Vec<i8>> {
    let n = tour.len();
    validate_tour(n, tour)?;
    let mut x = vec![0; n * n];
    for (t, &node) in tour.iter().enumerate() {
        x[node * n + t] = 1;
    }
    Ok(x)
}

/// Which one-hot constraints an assignment violates.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Infeasibility {
    /// Time slots with no node.
    pub empty_slots: Vec<usize>,
    /// Time slots holding more than one node.
    pub crowded_slots: Vec<usize>,
    /// Nodes never visited.
    pub unvisited_nodes: Vec<usize>,
    /// Nodes assigned to more than one slot.
    pub repeated_nodes: Vec<usize>,
}

impl Infeasibility {
    /// Short names of the violated constraint classes.
    pub fn classes(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.empty_slots.is_empty() {
            out.push("unassigned time slot");
        }
        if !self.crowded_slots.is_empty() {
            out.push("time slot with several nodes");
        }
        if !self.unvisited_nodes.is_empty() {
            out.push("unvisited node");
        }
        if !self.repeated_nodes.is_empty() {
            out.push("node in several time slots");
        }
        out
    }
}

/// Outcome of decoding a QUBO assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    /// `tour[t]` is the node visited at slot `t`.
    Tour(Vec<usize>),
    Invalid(Infeasibility),
}

impl Decoded {
    pub fn tour(&self) -> Option<&[usize]> {
        match self {
            Decoded::Tour(t) => Some(t),
            Decoded::Invalid(_) => None,
        }
    }
}

/// Decodes a `{0,1}` assignment of an `n²`-variable model into a tour.
pub fn decode_solution(model: &QuboModel, x: &[i8]) -> Result<Decoded> {
    if x.len() != model.num_variables() {
        return Err(Error::DimensionMismatch {
            expected: model.num_variables(),
            got: x.len(),
        });
    }
    let bits: Vec<bool> = x.iter().map(|&v| v == 1).collect();
    decode_bits(&bits)
}

/// Decodes an `n²`-long bit vector.
pub fn decode_bits(bits: &[bool]) -> Result<Decoded> {
    let n = (bits.len() as f64).sqrt().round() as usize;
    if n * n != bits.len() {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            got: bits.len(),
        });
    }
    let mut report = Infeasibility::default();
    let mut tour = vec![usize::MAX; n];
    for t in 0..n {
        let nodes: Vec<usize> = (0..n).filter(|&i| bits[i * n + t]).collect();
        match nodes.as_slice() {
            [] => report.empty_slots.push(t),
            [node] => tour[t] = *node,
            _ => report.crowded_slots.push(t),
        }
    }
    for i in 0..n {
        match (0..n).filter(|&t| bits[i * n + t]).count() {
            0 => report.unvisited_nodes.push(i),
            1 => {}
            _ => report.repeated_nodes.push(i),
        }
    }
    if report == Infeasibility::default() {
        Ok(Decoded::Tour(tour))
    } else {
        Ok(Decoded::Invalid(report))
    }
}

/// A linear stitching of reads along a tour.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assembly {
    pub tour: Vec<usize>,
    pub sequence: String,
    /// Overlap of the last read onto the first (the edge closing the cycle).
    pub closing_overlap: usize,
}

/// Concatenates reads along `tour`, dropping each successive read's overlap
/// with its predecessor. `graph` must hold raw overlaps.
pub fn assemble_sequence(
    reads: &ReadSet,
    tour: &[usize],
    graph: &OverlapGraph,
) -> Result<Assembly> {
    if graph.is_normalized() {
        return Err(Error::InvalidConfig(
            "sequence stitching needs raw overlaps, not normalized weights".into(),
        ));
    }
    if graph.len() != reads.len() {
        return Err(Error::DimensionMismatch {
            expected: reads.len(),
            got: graph.len(),
        });
    }
    validate_tour(reads.len(), tour)?;
    let overlap = |a: usize, b: usize| graph.weight(a, b).max(0.0) as usize;
    let mut sequence = reads[tour[0]].to_string();
    for pair in tour.windows(2) {
        let read = &reads[pair[1]];
        let skip = overlap(pair[0], pair[1]).min(read.len());
        sequence.push_str(&read[skip..]);
    }
    Ok(Assembly {
        tour: tour.to_vec(),
        sequence,
        closing_overlap: overlap(tour[tour.len() - 1], tour[0]),
    })
}

/// Serializes to the `.qubo` text format: a `p qubo 0 N nDiag nOff` header,
/// nonzero diagonal lines, then nonzero upper-triangular couplers holding
/// `Q[i][j] + Q[j][i]`.
pub fn write_qubo_file(model: &QuboModel) -> String {
    let (diagonal, couplers) = model.canonical_terms();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p qubo 0 {} {} {}",
        model.num_variables(),
        diagonal.len(),
        couplers.len()
    );
    for (i, v) in diagonal {
        let _ = writeln!(out, "q{i} q{i} {}", format_g(v, 17));
    }
    for (i, j, v) in couplers {
        let _ = writeln!(out, "q{i} q{j} {}", format_g(v, 17));
    }
    out
}

fn parse_variable(token: &str, line: usize, num_variables: usize) -> Result<usize> {
    let digits = token.strip_prefix('q').unwrap_or(token);
    let index: usize = digits.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid variable {token:?}"),
    })?;
    if index >= num_variables {
        return Err(Error::Parse {
            line,
            message: format!("variable {token} out of range for {num_variables} variables"),
        });
    }
    Ok(index)
}

/// Parses the `.qubo` text format into an upper-triangular model.
///
/// Lines starting with `c` are comments. Variables may be written `q3` or
/// `3`. Coupler lines with `i > j` are folded onto `(j, i)`.
pub fn read_qubo_file(text: &str) -> Result<QuboModel> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `p qubo` header".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 || fields[0] != "p" || fields[1] != "qubo" {
        return Err(Error::Parse {
            line: header_line,
            message: format!("malformed header {header:?}"),
        });
    }
    let numbers: Vec<usize> = fields[2..]
        .iter()
        .map(|f| {
            f.parse().map_err(|_| Error::Parse {
                line: header_line,
                message: format!("non-integer header field {f:?}"),
            })
        })
        .collect::<Result<_>>()?;
    let (num_variables, n_diag, n_off) = (numbers[1], numbers[2], numbers[3]);

    let mut model = QuboModel::zeros(num_variables);
    for k in 0..n_diag + n_off {
        let (line, body) = lines.next().ok_or_else(|| Error::Parse {
            line: header_line,
            message: format!(
                "header announces {} entries but only {k} were found",
                n_diag + n_off
            ),
        })?;
        let parts: Vec<&str> = body.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected `qi qj value`, got {body:?}"),
            });
        }
        let i = parse_variable(parts[0], line, num_variables)?;
        let j = parse_variable(parts[1], line, num_variables)?;
        let value: f64 = parts[2].parse().map_err(|_| Error::Parse {
            line,
            message: format!("non-numeric value {:?}", parts[2]),
        })?;
        let diagonal_section = k < n_diag;
        if diagonal_section != (i == j) {
            return Err(Error::Parse {
                line,
                message: if diagonal_section {
                    "coupler found where a diagonal entry was expected".into()
                } else {
                    "diagonal entry found where a coupler was expected".into()
                },
            });
        }
        model.add(i.min(j), i.max(j), value);
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse {
            line,
            message: format!("more entries than the {} announced", n_diag + n_off),
        });
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reads::{overlap_graph, tour_cost};

    const EXAMPLE_READS: [&str; 4] = ["ATGGCGTGCA", "GCGTGCAATG", "TGCAATGGCG", "AATGGCGTGC"];

    fn example_graph() -> OverlapGraph {
        overlap_graph(&ReadSet::new(EXAMPLE_READS).unwrap(), 0).unwrap()
    }

    fn bits(s: &str) -> Vec<i8> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| (c == '1') as i8)
            .collect()
    }

    #[test]
    fn labels_and_diagonal() {
        let model = tsp_to_qubo(
            &example_graph(),
            Penalties {
                a: -2.0,
                b: 13.0,
                c: 13.0,
            },
        )
        .unwrap();
        assert_eq!(model.num_variables(), 16);
        assert_eq!(model.labels()[0], "n0t0");
        assert_eq!(model.labels()[6], "n1t2");
        for i in 0..16 {
            assert_eq!(model.get(i, i), -2.0);
        }
    }

    #[test]
    fn penalty_blocks_are_symmetric() {
        let zero = OverlapGraph::from_weights(3, vec![0.0; 9]).unwrap();
        let model = tsp_to_qubo(
            &zero,
            Penalties {
                a: 0.0,
                b: 2.0,
                c: 5.0,
            },
        )
        .unwrap();
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(model.get(i, j), model.get(j, i));
            }
        }
        // n0t0 with n0t1: multi-location; n0t0 with n1t0: repetition
        assert_eq!(model.get(0, 1), 2.0);
        assert_eq!(model.get(0, 3), 5.0);
        assert_eq!(model.get(0, 4), 0.0);
    }

    #[test]
    fn constraint_cell_counts() {
        for n in 2..=5 {
            let cells = |it: Vec<(usize, usize)>| {
                let mut v = it;
                let len = v.len();
                v.sort_unstable();
                v.dedup();
                assert_eq!(v.len(), len, "cells must be distinct");
                len
            };
            assert_eq!(cells(multi_location_cells(n).collect()), n * n * (n - 1));
            assert_eq!(cells(repetition_cells(n).collect()), n * n * (n - 1));
            assert_eq!(
                cells(path_cells(n).map(|(r, c, _, _)| (r, c)).collect()),
                n * n * n
            );
        }
    }

    #[test]
    fn path_cost_wraps_around() {
        let model = tsp_to_qubo(
            &example_graph(),
            Penalties {
                a: 0.0,
                b: 0.0,
                c: 0.0,
            },
        )
        .unwrap();
        // n3 at t3 followed by n0 at t0
        assert_eq!(model.get(3 * 4 + 3, 0), -9.0);
        assert_eq!(model.get(0, 4 + 1), -7.0);
        assert_eq!(model.get(4 + 1, 0), 0.0);
    }

    #[test]
    fn energy_of_simple_states() {
        let model = tsp_to_qubo(&example_graph(), Penalties::default()).unwrap();
        assert_eq!(model.energy(&[0; 16]).unwrap(), 0.0);
        let mut e = vec![0; 16];
        e[5] = 1;
        assert_eq!(model.energy(&e).unwrap(), model.get(5, 5));
        assert!(model.energy(&[0; 15]).is_err());
        let mut bad = vec![0; 16];
        bad[0] = 2;
        assert!(model.energy(&bad).is_err());
    }

    #[test]
    fn valid_tour_energy_is_tour_cost_plus_rewards() {
        let g = example_graph();
        let p = Penalties {
            a: -1.5,
            b: 13.0,
            c: 13.0,
        };
        let model = tsp_to_qubo(&g, p).unwrap();
        for tour in [[0, 1, 2, 3], [2, 0, 3, 1], [3, 2, 1, 0]] {
            let x = encode_tour(&tour).unwrap();
            let expected = tour_cost(&g, &tour).unwrap() + 4.0 * p.a;
            assert_eq!(model.energy(&x).unwrap(), expected);
        }
    }

    #[test]
    fn zero_model() {
        let zero = OverlapGraph::from_weights(2, vec![0.0; 4]).unwrap();
        let model = tsp_to_qubo(
            &zero,
            Penalties {
                a: 0.0,
                b: 0.0,
                c: 0.0,
            },
        )
        .unwrap();
        assert!(model.matrix().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rejects_bad_penalties() {
        assert!(tsp_to_qubo(
            &example_graph(),
            Penalties {
                a: 1.0,
                b: 1.0,
                c: 1.0
            }
        )
        .is_err());
        assert!(tsp_to_qubo(
            &example_graph(),
            Penalties {
                a: 0.0,
                b: -1.0,
                c: 1.0
            }
        )
        .is_err());
    }

    #[test]
    fn decoding() {
        let model = QuboModel::zeros(16);
        assert_eq!(
            decode_solution(&model, &bits("1000 0100 0010 0001")).unwrap(),
            Decoded::Tour(vec![0, 1, 2, 3])
        );
        assert_eq!(
            decode_solution(&model, &bits("0100 0010 0001 1000")).unwrap(),
            Decoded::Tour(vec![3, 0, 1, 2])
        );
        match decode_solution(&model, &[0; 16]).unwrap() {
            Decoded::Invalid(r) => {
                assert_eq!(r.empty_slots, [0, 1, 2, 3]);
                assert!(r.classes().contains(&"unassigned time slot"));
            }
            other => panic!("{other:?}"),
        }
        match decode_solution(&model, &bits("1100 0000 0010 0001")).unwrap() {
            Decoded::Invalid(r) => {
                assert_eq!(r.repeated_nodes, [0]);
                assert_eq!(r.unvisited_nodes, [1]);
                assert!(r.empty_slots.is_empty() && r.crowded_slots.is_empty());
            }
            other => panic!("{other:?}"),
        }
        assert!(decode_solution(&model, &[0; 15]).is_err());
    }

    #[test]
    fn stitching() {
        let reads = ReadSet::new(EXAMPLE_READS).unwrap();
        let g = example_graph();
        let a = assemble_sequence(&reads, &[0, 1, 2, 3], &g).unwrap();
        assert_eq!(a.sequence, "ATGGCGTGCAATGGCGTGC");
        assert_eq!(a.closing_overlap, 9);
        let b = assemble_sequence(&reads, &[0, 3, 2, 1], &g).unwrap();
        assert_eq!(b.sequence.len(), 33);
        assert_eq!(b.closing_overlap, 3);
        assert!(assemble_sequence(&reads, &[0, 1, 2], &g).is_err());
        assert!(assemble_sequence(&reads, &[0, 1, 2, 3], &g.normalized().unwrap()).is_err());
        let single = ReadSet::new(["ACGT"]).unwrap();
        let g1 = OverlapGraph::from_weights(1, vec![0.0]).unwrap();
        assert!(assemble_sequence(&single, &[0], &g1).is_err());
    }

    #[test]
    fn reads_example_example_file() {
        let text = "c three-spin example\np qubo 0 3 1 2\nq0 q0 -0.5\nq0 q1 -1000.0\nq1 q2 -0.1\n";
        let model = read_qubo_file(text).unwrap();
        assert_eq!(model.num_variables(), 3);
        assert_eq!(model.get(0, 0), -0.5);
        assert_eq!(model.get(0, 1), -1000.0);
        assert_eq!(model.get(1, 2), -0.1);
        assert_eq!(model.get(1, 0), 0.0);
        assert_eq!(model.matrix().iter().filter(|&&v| v != 0.0).count(), 3);
    }

    #[test]
    fn empty_model_file() {
        let text = write_qubo_file(&QuboModel::zeros(0));
        assert_eq!(text, "p qubo 0 0 0 0\n");
        assert_eq!(read_qubo_file(&text).unwrap().num_variables(), 0);
    }

    #[test]
    fn writes_canonical_couplers() {
        let model = QuboModel::from_rows(&[vec![1.0, 2.0], vec![0.5, 0.0]]).unwrap();
        assert_eq!(
            write_qubo_file(&model),
            "p qubo 0 2 1 1\nq0 q0 1\nq0 q1 2.5\n"
        );
    }

    #[test]
    fn de_novo_round_trip() {
        let model = tsp_to_qubo(
            &example_graph().normalized().unwrap(),
            Penalties::normalized_default(),
        )
        .unwrap();
        let back = read_qubo_file(&write_qubo_file(&model)).unwrap();
        assert_eq!(back.matrix(), model.canonical().matrix());
    }

    #[test]
    fn malformed_files() {
        for bad in [
            "",
            "p qubo 0 3 1\n",
            "p qubx 0 3 1 2\n",
            "p qubo 0 3 1 1\nq0 q0 1\n",
            "p qubo 0 3 1 0\nq0 q0 1\nq1 q1 2\n",
            "p qubo 0 3 1 0\nq0 q0 abc\n",
            "p qubo 0 3 1 0\nq0 q1 1\n",
            "p qubo 0 3 0 1\nq2 q2 1\n",
            "p qubo 0 3 1 0\nq5 q5 1\n",
            "p qubo 0 3 1 0\nq0 1\n",
        ] {
            assert!(
                matches!(read_qubo_file(bad), Err(Error::Parse { .. })),
                "{bad:?} should fail"
            );
        }
    }

    #[test]
    fn accepts_bare_indices_and_folds_lower_couplers() {
        let model = read_qubo_file("p qubo 0 3 0 1\n2 0 4.0\n").unwrap();
        assert_eq!(model.get(0, 2), 4.0);
    }

    #[test]
    fn json_round_trip() {
        let model = tsp_to_qubo(&example_graph(), Penalties::default()).unwrap();
        let back = QuboModel::from_json(&model.to_json()).unwrap();
        assert_eq!(back, model);
    }
}
