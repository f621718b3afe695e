//! Sample sets: multisets of variable assignments with energies and counts.
//!
//! States are stored packed, one bit per variable (`x_i = 1` or `s_i = +1`
//! sets bit `i`), so an exhaustive enumeration at the exact-solver cap stays
//! within a few hundred megabytes.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt::format_g;

/// Value domain of a model's variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vartype {
    /// `{0, 1}`
    Binary,
    /// `{-1, +1}`
    Spin,
}

impl Vartype {
    pub fn name(self) -> &'static str {
        match self {
            Vartype::Binary => "binary",
            Vartype::Spin => "spin",
        }
    }

    /// Value of a variable whose bit is `bit`.
    pub fn value(self, bit: bool) -> i8 {
        match (self, bit) {
            (Vartype::Binary, b) => b as i8,
            (Vartype::Spin, true) => 1,
            (Vartype::Spin, false) => -1,
        }
    }

    pub fn bit(self, value: i8) -> Result<bool> {
        match (self, value) {
            (Vartype::Binary, 0) | (Vartype::Spin, -1) => Ok(false),
            (Vartype::Binary, 1) | (Vartype::Spin, 1) => Ok(true),
            _ => Err(Error::InvalidValue {
                value,
                vartype: self.name(),
            }),
        }
    }
}

/// Packed assignment of `num_variables` bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitState(Vec<u64>);

impl BitState {
    pub fn zeros(num_variables: usize) -> Self {
        Self(vec![0; words_for(num_variables)])
    }

    pub fn from_index(num_variables: usize, index: u64) -> Self {
        let mut s = Self::zeros(num_variables);
        if let Some(w) = s.0.first_mut() {
            *w = index;
        }
        s
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    pub fn from_values(values: &[i8], vartype: Vartype) -> Result<Self> {
        let mut s = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            s.set(i, vartype.bit(v)?);
        }
        Ok(s)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        let mask = 1u64 << (i % 64);
        if bit {
            self.0[i / 64] |= mask;
        } else {
            self.0[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn words(&self) -> &[u64] {
        &self.0
    }

    /// Most-significant word first, for ordering states as unsigned integers.
    fn cmp_as_integer(a: &[u64], b: &[u64]) -> Ordering {
        a.iter().rev().cmp(b.iter().rev())
    }
}

fn words_for(num_variables: usize) -> usize {
    num_variables.div_ceil(64).max(1)
}

/// A set of samples over `num_variables` variables of one [`Vartype`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    vartype: Vartype,
    num_variables: usize,
    words: usize,
    bits: Vec<u64>,
    energies: Vec<f64>,
    counts: Vec<u64>,
}

/// Borrowed view of one entry of a [`SampleSet`].
#[derive(Debug, Clone, Copy)]
pub struct Sample<'a> {
    pub vartype: Vartype,
    pub num_variables: usize,
    pub bits: &'a [u64],
    pub energy: f64,
    pub count: u64,
}

impl Sample<'_> {
    pub fn bit(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn value(&self, i: usize) -> i8 {
        self.vartype.value(self.bit(i))
    }

    pub fn values(&self) -> Vec<i8> {
        (0..self.num_variables).map(|i| self.value(i)).collect()
    }

    pub fn bits_vec(&self) -> Vec<bool> {
        (0..self.num_variables).map(|i| self.bit(i)).collect()
    }

    pub fn state(&self) -> BitState {
        BitState(self.bits.to_vec())
    }

    /// Character `i` is `'1'` when bit `i` is set.
    pub fn bitstring(&self) -> String {
        (0..self.num_variables)
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }
}

impl SampleSet {
    pub fn new(vartype: Vartype, num_variables: usize) -> Self {
        Self {
            vartype,
            num_variables,
            words: words_for(num_variables),
            bits: Vec::new(),
            energies: Vec::new(),
            counts: Vec::new(),
        }
    }

    pub fn with_capacity(vartype: Vartype, num_variables: usize, capacity: usize) -> Self {
        let mut s = Self::new(vartype, num_variables);
        s.bits.reserve(capacity * s.words);
        s.energies.reserve(capacity);
        s.counts.reserve(capacity);
        s
    }

    pub fn vartype(&self) -> Vartype {
        self.vartype
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn push(&mut self, state: &BitState, energy: f64, count: u64) {
        assert_eq!(state.0.len(), self.words, "state width mismatch");
        self.bits.extend_from_slice(&state.0);
        self.energies.push(energy);
        self.counts.push(count);
    }

    /// Pushes a state given as raw words (low word first).
    pub(crate) fn push_words(&mut self, words: &[u64], energy: f64, count: u64) {
        debug_assert_eq!(words.len(), self.words);
        self.bits.extend_from_slice(words);
        self.energies.push(energy);
        self.counts.push(count);
    }

    pub fn push_values(&mut self, values: &[i8], energy: f64, count: u64) -> Result<()> {
        if values.len() != self.num_variables {
            return Err(Error::DimensionMismatch {
                expected: self.num_variables,
                got: values.len(),
            });
        }
        let state = BitState::from_values(values, self.vartype)?;
        self.push(&state, energy, count);
        Ok(())
    }

    pub fn get(&self, k: usize) -> Sample<'_> {
        Sample {
            vartype: self.vartype,
            num_variables: self.num_variables,
            bits: &self.bits[k * self.words..(k + 1) * self.words],
            energy: self.energies[k],
            count: self.counts[k],
        }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Sample<'_>> + '_ {
        (0..self.len()).map(move |k| self.get(k))
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn lowest_energy(&self) -> Option<f64> {
        self.energies.iter().copied().reduce(f64::min)
    }

    /// Samples whose energy is within `tolerance` of the lowest energy.
    pub fn lowest(&self, tolerance: f64) -> Vec<Sample<'_>> {
        match self.lowest_energy() {
            Some(min) => self
                .iter()
                .filter(|s| s.energy <= min + tolerance)
                .collect(),
            None => Vec::new(),
        }
    }

    fn permute(&mut self, order: &[usize]) {
        let mut bits = Vec::with_capacity(self.bits.len());
        for &k in order {
            bits.extend_from_slice(&self.bits[k * self.words..(k + 1) * self.words]);
        }
        self.bits = bits;
        self.energies = order.iter().map(|&k| self.energies[k]).collect();
        self.counts = order.iter().map(|&k| self.counts[k]).collect();
    }

    fn words_of(&self, k: usize) -> &[u64] {
        &self.bits[k * self.words..(k + 1) * self.words]
    }

    /// Ascending energy; ties ordered by the state read as an unsigned
    /// integer (bit `i` has weight `2^i`).
    pub fn sort_by_energy(&mut self) {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.energies[a]
                .total_cmp(&self.energies[b])
                .then_with(|| BitState::cmp_as_integer(self.words_of(a), self.words_of(b)))
        });
        self.permute(&order);
    }

    /// Descending count; ties by ascending energy, then state.
    pub fn sort_by_count(&mut self) {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.counts[b]
                .cmp(&self.counts[a])
                .then_with(|| self.energies[a].total_cmp(&self.energies[b]))
                .then_with(|| BitState::cmp_as_integer(self.words_of(a), self.words_of(b)))
        });
        self.permute(&order);
    }

    /// Merges duplicate states, summing their counts, and sorts by energy.
    pub fn aggregate(&self) -> SampleSet {
        let mut index: HashMap<&[u64], usize> = HashMap::new();
        let mut out = SampleSet::new(self.vartype, self.num_variables);
        for k in 0..self.len() {
            let w = self.words_of(k);
            match index.get(w) {
                Some(&slot) => out.counts[slot] += self.counts[k],
                None => {
                    index.insert(w, out.len());
                    out.push_words(w, self.energies[k], self.counts[k]);
                }
            }
        }
        out.sort_by_energy();
        out
    }

    /// Concatenates two sample sets over the same variables.
    pub fn extend(&mut self, other: &SampleSet) -> Result<()> {
        if other.vartype != self.vartype || other.num_variables != self.num_variables {
            return Err(Error::DimensionMismatch {
                expected: self.num_variables,
                got: other.num_variables,
            });
        }
        self.bits.extend_from_slice(&other.bits);
        self.energies.extend_from_slice(&other.energies);
        self.counts.extend_from_slice(&other.counts);
        Ok(())
    }

    /// Keeps the first `k` entries.
    pub fn truncate(&mut self, k: usize) {
        if k < self.len() {
            self.bits.truncate(k * self.words);
            self.energies.truncate(k);
            self.counts.truncate(k);
        }
    }

    /// `state,energy,count` with a header row; energies use 17 significant
    /// digits so they re-parse exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("state,energy,count\n");
        for s in self.iter() {
            let _ = writeln!(
                out,
                "{},{},{}",
                s.bitstring(),
                format_g(s.energy, 17),
                s.count
            );
        }
        out
    }

    /// Parses the output of [`SampleSet::to_csv`].
    pub fn from_csv(text: &str, vartype: Vartype) -> Result<SampleSet> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "state,energy,count")) => {}
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: "expected header `state,energy,count`".into(),
                })
            }
        }
        let mut set: Option<SampleSet> = None;
        for (ln, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: ln + 1,
                message,
            };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(parse_err(format!(
                    "expected 3 fields, got {}",
                    fields.len()
                )));
            }
            let bits: Vec<bool> = fields[0]
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(parse_err(format!("invalid state character {other:?}"))),
                })
                .collect::<Result<_>>()?;
            let energy: f64 = fields[1]
                .parse()
                .map_err(|_| parse_err(format!("invalid energy {:?}", fields[1])))?;
            let count: u64 = fields[2]
                .parse()
                .map_err(|_| parse_err(format!("invalid count {:?}", fields[2])))?;
            let set = set.get_or_insert_with(|| SampleSet::new(vartype, bits.len()));
            if bits.len() != set.num_variables {
                return Err(parse_err("inconsistent state width".into()));
            }
            set.push(&BitState::from_bits(&bits), energy, count);
        }
        Ok(set.unwrap_or_else(|| SampleSet::new(vartype, 0)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let samples: Vec<serde_json::Value> = self
            .iter()
            .map(|s| {
                serde_json::json!({
                    "state": s.bitstring(),
                    "energy": s.energy,
                    "count": s.count,
                })
            })
            .collect();
        serde_json::json!({
            "vartype": self.vartype,
            "num_variables": self.num_variables,
            "samples": samples,
        })
    }

    /// Count-weighted energy histogram with `bins` equal-width bins.
    pub fn histogram(&self, bins: usize) -> Histogram {
        Histogram::from_weighted(
            self.energies
                .iter()
                .copied()
                .zip(self.counts.iter().copied()),
            bins,
        )
    }
}

/// Equal-width histogram: `counts[k]` covers `[edges[k], edges[k+1])`, the
/// last bin being closed on the right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn from_weighted(values: impl Iterator<Item = (f64, u64)> + Clone, bins: usize) -> Self {
        let bins = bins.max(1);
        let (lo, hi) = values
            .clone()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (v, _)| {
                (lo.min(v), hi.max(v))
            });
        if lo > hi {
            return Self {
                bin_edges: Vec::new(),
                counts: Vec::new(),
            };
        }
        let (lo, hi) = if lo == hi {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        };
        let width = (hi - lo) / bins as f64;
        let bin_edges: Vec<f64> = (0..=bins)
            .map(|k| if k == bins { hi } else { lo + k as f64 * width })
            .collect();
        let mut counts = vec![0u64; bins];
        for (v, c) in values {
            let k = (((v - lo) / width) as usize).min(bins - 1);
            counts[k] += c;
        }
        Self { bin_edges, counts }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_from(rows: &[(&[i8], f64, u64)], vartype: Vartype) -> SampleSet {
        let mut s = SampleSet::new(vartype, rows[0].0.len());
        for (v, e, c) in rows {
            s.push_values(v, *e, *c).unwrap();
        }
        s
    }

    #[test]
    fn sorts_by_energy_then_state() {
        let mut s = set_from(
            &[
                (&[1, 1], 0.0, 1),
                (&[0, 1], -1.0, 1),
                (&[1, 0], 0.0, 1),
                (&[0, 0], 0.0, 1),
            ],
            Vartype::Binary,
        );
        s.sort_by_energy();
        let states: Vec<String> = s.iter().map(|x| x.bitstring()).collect();
        assert_eq!(states, ["01", "00", "10", "11"]);
    }

    #[test]
    fn sorts_by_count() {
        let mut s = set_from(
            &[(&[1, -1], 2.0, 3), (&[-1, 1], 1.0, 7), (&[1, 1], -4.0, 3)],
            Vartype::Spin,
        );
        s.sort_by_count();
        let counts: Vec<u64> = s.iter().map(|x| x.count).collect();
        assert_eq!(counts, [7, 3, 3]);
        assert_eq!(s.get(1).energy, -4.0);
        assert_eq!(s.get(0).values(), [-1, 1]);
    }

    #[test]
    fn aggregate_sums_counts() {
        let s = set_from(
            &[(&[1, 0], 1.0, 1), (&[0, 0], 0.0, 2), (&[1, 0], 1.0, 4)],
            Vartype::Binary,
        );
        let a = s.aggregate();
        assert_eq!(a.len(), 2);
        assert_eq!(a.get(1).count, 5);
        assert_eq!(a.total_count(), 7);
    }

    #[test]
    fn csv_round_trip() {
        let s = set_from(
            &[(&[1, 0, 1], 0.1, 2), (&[0, 0, 0], -1000.6, 1)],
            Vartype::Binary,
        );
        let csv = s.to_csv();
        assert!(csv.starts_with("state,energy,count\n101,0.10000000000000001,2\n"));
        assert_eq!(SampleSet::from_csv(&csv, Vartype::Binary).unwrap(), s);
    }

    #[test]
    fn rejects_out_of_domain_values() {
        let mut s = SampleSet::new(Vartype::Spin, 2);
        assert!(s.push_values(&[0, 1], 0.0, 1).is_err());
        assert!(s.push_values(&[1], 0.0, 1).is_err());
    }

    #[test]
    fn histogram_counts_everything() {
        let s = set_from(
            &[(&[0], 0.0, 1), (&[1], 1.0, 3), (&[0], 0.5, 2)],
            Vartype::Binary,
        );
        let h = s.histogram(2);
        assert_eq!(h.bin_edges, [0.0, 0.5, 1.0]);
        assert_eq!(h.counts, [1, 5]);
        let flat = set_from(&[(&[0], 2.0, 4)], Vartype::Binary).histogram(3);
        assert_eq!(flat.counts.iter().sum::<u64>(), 4);
    }

    #[test]
    fn wide_states_order_as_integers() {
        let mut s = SampleSet::new(Vartype::Binary, 70);
        let mut hi = BitState::zeros(70);
        hi.set(69, true);
        let mut lo = BitState::zeros(70);
        lo.set(0, true);
        s.push(&hi, 0.0, 1);
        s.push(&lo, 0.0, 1);
        s.sort_by_energy();
        assert!(s.get(0).bit(0));
        assert!(s.get(1).bit(69));
    }
}
