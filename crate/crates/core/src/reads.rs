//! Read ingestion and suffix-prefix overlap scoring.
//!
//! Every ordered pair of reads `(i, j)` is scored by the longest suffix of
//! read `i` that matches a prefix of read `j` within a mismatch budget. The
//! resulting matrix is the adjacency of a directed TSP whose edge cost is the
//! negated overlap.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fmt::format_g;

/// An ordered, duplicate-free collection of reads over `{A, C, G, T}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadSet {
    reads: Vec<String>,
}

impl ReadSet {
    /// Validates and uppercases the given reads.
    pub fn new<I, S>(reads: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        for (index, read) in reads.into_iter().enumerate() {
            let read = read.as_ref().trim().to_ascii_uppercase();
            if read.is_empty() {
                return Err(Error::EmptyRead { index });
            }
            if let Some((position, base)) = read
                .chars()
                .enumerate()
                .find(|(_, c)| !matches!(c, 'A' | 'C' | 'G' | 'T'))
            {
                return Err(Error::InvalidBase {
                    index,
                    position,
                    base,
                });
            }
            if let Some(&first) = seen.get(&read) {
                return Err(Error::DuplicateRead { index, first });
            }
            seen.insert(read.clone(), index);
            out.push(read);
        }
        Ok(Self { reads: out })
    }

    /// Parses plain text (one read per line) or minimal FASTA.
    ///
    /// Blank lines are ignored. If any line starts with `>`, the input is
    /// treated as FASTA and the sequence lines of each record are joined.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        if lines.iter().any(|l| l.starts_with('>')) {
            let mut records: Vec<String> = Vec::new();
            let mut current: Option<String> = None;
            for line in lines {
                if line.starts_with('>') {
                    records.extend(current.take());
                    current = Some(String::new());
                } else {
                    current.get_or_insert_with(String::new).push_str(line);
                }
            }
            records.extend(current);
            Self::new(records)
        } else {
            Self::new(lines)
        }
    }

    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&str> {
        self.reads.get(index).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.reads.iter().map(String::as_str)
    }
}

impl std::ops::Index<usize> for ReadSet {
    type Output = str;

    fn index(&self, index: usize) -> &str {
        &self.reads[index]
    }
}

/// Dense directed overlap graph; `weight(i, j)` is the overlap of read `i`
/// followed by read `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapGraph {
    n: usize,
    weights: Vec<f64>,
    normalized: bool,
}

impl OverlapGraph {
    /// Builds a graph from a row-major `n × n` weight matrix. The diagonal is
    /// forced to zero.
    pub fn from_weights(n: usize, mut weights: Vec<f64>) -> Result<Self> {
        if weights.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: weights.len(),
            });
        }
        for i in 0..n {
            weights[i * n + i] = 0.0;
        }
        Ok(Self {
            n,
            weights,
            normalized: false,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut weights = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            weights.extend_from_slice(row);
        }
        Self::from_weights(n, weights)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.weights[from * self.n + to]
    }

    /// Row-major weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }

    /// Divides every weight by the Frobenius norm of the matrix.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.frobenius_norm();
        if norm == 0.0 {
            return Err(Error::ZeroOverlap);
        }
        Ok(Self {
            n: self.n,
            weights: self.weights.iter().map(|w| w / norm).collect(),
            normalized: true,
        })
    }

    /// CSV export, one matrix row per line, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| format_g(self.weight(i, j), 12))
                .collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Length of the longest suffix of `read1` that equals a prefix of `read2`
/// with at most `max_mismatch` substitutions, or 0 if none qualifies.
///
/// Shifts are scanned from `len1 - len2` (clamped to 0) upward, so the first
/// qualifying shift is the longest overlap.
pub fn align(read1: &str, read2: &str, max_mismatch: usize) -> usize {
    let r1 = read1.as_bytes();
    let r2 = read2.as_bytes();
    let l1 = r1.len();
    let start = l1.saturating_sub(r2.len());
    for shift in start..l1 {
        let overlap = l1 - shift;
        let mut mismatches = 0;
        for (a, b) in r1[shift..].iter().zip(&r2[..overlap]) {
            if a != b {
                mismatches += 1;
                if mismatches > max_mismatch {
                    break;
                }
            }
        }
        if mismatches <= max_mismatch {
            return overlap;
        }
    }
    0
}

/// Raw (integer-valued) overlap graph of `reads`.
pub fn overlap_graph(reads: &ReadSet, max_mismatch: usize) -> Result<OverlapGraph> {
    let n = reads.len();
    if n < 2 {
        return Err(Error::TooFewReads { needed: 2, got: n });
    }
    let mut weights = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                weights[i * n + j] = align(&reads[i], &reads[j], max_mismatch) as f64;
            }
        }
    }
    OverlapGraph::from_weights(n, weights)
}

/// Overlap graph normalized by its Frobenius norm.
pub fn reads_to_tsp(reads: &ReadSet, max_mismatch: usize) -> Result<OverlapGraph> {
    overlap_graph(reads, max_mismatch)?.normalized()
}

/// Checks that `tour` visits every node of an `n`-node graph exactly once.
pub fn validate_tour(n: usize, tour: &[usize]) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidTour(format!(
            "a tour needs at least 2 nodes, graph has {n}"
        )));
    }
    if tour.len() != n {
        return Err(Error::InvalidTour(format!(
            "tour has {} stops for {n} nodes",
            tour.len()
        )));
    }
    let mut seen = vec![false; n];
    for &node in tour {
        if node >= n || std::mem::replace(&mut seen[node], true) {
            return Err(Error::InvalidTour(format!(
                "{tour:?} is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}

/// Cyclic cost of `tour`: the sum of negated weights along consecutive stops,
/// including the closing edge back to the start.
pub fn tour_cost(graph: &OverlapGraph, tour: &[usize]) -> Result<f64> {
    validate_tour(graph.len(), tour)?;
    Ok(tour
        .iter()
        .zip(tour.iter().cycle().skip(1))
        .map(|(&a, &b)| -graph.weight(a, b))
        .sum())
}
