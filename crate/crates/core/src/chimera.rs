//! Chimera hardware graphs, minor embedding and majority-vote unembedding.
//!
//! Qubits use the standard linear Chimera index
//! `((row * cols + col) * 2 + shore) * t + k`. Shore 0 qubits couple
//! vertically to the same position in the cell below; shore 1 qubits couple
//! horizontally to the cell on the right. Within a cell the two shores form
//! a complete bipartite `K_{t,t}`.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::samples::{BitState, SampleSet, Vartype};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChimeraGraph {
    rows: usize,
    cols: usize,
    shore: usize,
    adjacency: Vec<Vec<usize>>,
}

impl ChimeraGraph {
    /// `C(rows, cols, shore)`.
    pub fn new(rows: usize, cols: usize, shore: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || shore == 0 {
            return Err(Error::InvalidConfig(format!(
                "Chimera dimensions must be positive, got ({rows}, {cols}, {shore})"
            )));
        }
        let t = shore;
        let index = |r: usize, c: usize, u: usize, k: usize| ((r * cols + c) * 2 + u) * t + k;
        let mut graph = Self {
            rows,
            cols,
            shore,
            adjacency: vec![Vec::new(); rows * cols * 2 * t],
        };
        for r in 0..rows {
            for c in 0..cols {
                for k in 0..t {
                    for k2 in 0..t {
                        graph.link(index(r, c, 0, k), index(r, c, 1, k2));
                    }
                    if r + 1 < rows {
                        graph.link(index(r, c, 0, k), index(r + 1, c, 0, k));
                    }
                    if c + 1 < cols {
                        graph.link(index(r, c, 1, k), index(r, c + 1, 1, k));
                    }
                }
            }
        }
        for neighbours in &mut graph.adjacency {
            neighbours.sort_unstable();
        }
        Ok(graph)
    }

    /// A graph with the given qubit count and explicit edges; used for
    /// degenerate hardware (e.g. no couplers).
    pub fn from_edges(qubits: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut graph = Self {
            rows: 0,
            cols: 0,
            shore: 0,
            adjacency: vec![Vec::new(); qubits],
        };
        for &(a, b) in edges {
            if a >= qubits || b >= qubits || a == b {
                return Err(Error::InvalidConfig(format!("invalid edge ({a}, {b})")));
            }
            if !graph.has_edge(a, b) {
                graph.link(a, b);
            }
        }
        for neighbours in &mut graph.adjacency {
            neighbours.sort_unstable();
        }
        Ok(graph)
    }

    fn link(&mut self, a: usize, b: usize) {
        self.adjacency[a].push(b);
        self.adjacency[b].push(a);
    }

    pub fn dimensions(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.shore)
    }

    pub fn num_qubits(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency.get(a).is_some_and(|n| n.contains(&b))
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, n)| n.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Standard Chimera graph `C(m, n, t)`.
pub fn chimera_graph(m: usize, n: usize, t: usize) -> Result<ChimeraGraph> {
    ChimeraGraph::new(m, n, t)
}

/// Logical variable → chain of physical qubits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Embedding {
    chains: BTreeMap<usize, BTreeSet<usize>>,
}

impl Embedding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_chains<I, C>(chains: I) -> Self
    where
        I: IntoIterator<Item = (usize, C)>,
        C: IntoIterator<Item = usize>,
    {
        Self {
            chains: chains
                .into_iter()
                .map(|(v, c)| (v, c.into_iter().collect()))
                .collect(),
        }
    }

    pub fn chain(&self, variable: usize) -> Option<&BTreeSet<usize>> {
        self.chains.get(&variable)
    }

    pub fn chains(&self) -> &BTreeMap<usize, BTreeSet<usize>> {
        &self.chains
    }

    pub fn insert(&mut self, variable: usize, chain: BTreeSet<usize>) {
        self.chains.insert(variable, chain);
    }

    pub fn max_chain_length(&self) -> usize {
        self.chains.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn qubit_count(&self) -> usize {
        self.chains.values().map(BTreeSet::len).sum()
    }

    /// `{"<variable>": [sorted qubits], ...}`.
    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, Vec<usize>> = self
            .chains
            .iter()
            .map(|(v, c)| (v.to_string(), c.iter().copied().collect()))
            .collect();
        serde_json::to_value(map).expect("embedding serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let map: BTreeMap<String, Vec<usize>> = serde_json::from_value(value.clone())?;
        let mut chains = BTreeMap::new();
        for (k, qubits) in map {
            let v: usize = k.parse().map_err(|_| {
                Error::InvalidEmbedding(format!("variable key {k:?} is not an index"))
            })?;
            chains.insert(v, qubits.into_iter().collect());
        }
        Ok(Self { chains })
    }
}

/// Per-invariant outcome of [`verify_embedding`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub disjoint: bool,
    pub chains_connected: bool,
    pub couplings_covered: bool,
    /// Every chain is nonempty and uses qubits that exist.
    pub qubits_valid: bool,
    pub max_chain_length: usize,
    pub qubit_count: usize,
    pub problems: Vec<String>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.disjoint && self.chains_connected && self.couplings_covered && self.qubits_valid
    }
}

/// Checks chain disjointness, chain connectivity and that every logical
/// coupling has a physical edge between its chains.
pub fn verify_embedding(
    graph: &ChimeraGraph,
    embedding: &Embedding,
    couplings: &[(usize, usize)],
) -> EmbeddingReport {
    let mut problems = Vec::new();

    let mut qubits_valid = true;
    for (v, chain) in embedding.chains() {
        if chain.is_empty() {
            qubits_valid = false;
            problems.push(format!("variable {v} has an empty chain"));
        }
        if let Some(q) = chain.iter().find(|&&q| q >= graph.num_qubits()) {
            qubits_valid = false;
            problems.push(format!("variable {v} uses nonexistent qubit {q}"));
        }
    }

    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut disjoint = true;
    for (&v, chain) in embedding.chains() {
        for &q in chain {
            if let Some(other) = owner.insert(q, v) {
                disjoint = false;
                problems.push(format!("qubit {q} is shared by variables {other} and {v}"));
            }
        }
    }

    let mut chains_connected = true;
    for (v, chain) in embedding.chains() {
        if !chain.is_empty() && !is_connected(graph, chain) {
            chains_connected = false;
            problems.push(format!("chain of variable {v} is not connected"));
        }
    }

    let mut couplings_covered = true;
    for &(u, v) in couplings {
        let covered = match (embedding.chain(u), embedding.chain(v)) {
            (Some(cu), Some(cv)) => cu
                .iter()
                .any(|&a| graph.neighbours_checked(a).iter().any(|b| cv.contains(b))),
            _ => false,
        };
        if !covered {
            couplings_covered = false;
            problems.push(format!("coupling ({u}, {v}) has no physical edge"));
        }
    }

    EmbeddingReport {
        disjoint,
        chains_connected,
        couplings_covered,
        qubits_valid,
        max_chain_length: embedding.max_chain_length(),
        qubit_count: embedding.qubit_count(),
        problems,
    }
}

impl ChimeraGraph {
    fn neighbours_checked(&self, q: usize) -> &[usize] {
        self.adjacency.get(q).map(Vec::as_slice).unwrap_or(&[])
    }
}

fn is_connected(graph: &ChimeraGraph, chain: &BTreeSet<usize>) -> bool {
    let Some(&start) = chain.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        for &n in graph.neighbours_checked(q) {
            if chain.contains(&n) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen.len() == chain.len()
}

/// Distinct undirected logical couplings `(u, v)`, `u < v`, of a model.
pub fn logical_couplings(model: &IsingModel) -> Vec<(usize, usize)> {
    model.couplings().keys().copied().collect()
}

/// Randomized minor embedding by iterative chain rerouting.
///
/// Chains may overlap while the search runs. Each pass rips up every
/// variable's chain in random order and regrows it as a Steiner-like tree:
/// the root is the qubit minimizing the summed weighted distance to the
/// neighbours' chains, and the chain is the union of the shortest paths from
/// the root to them. A qubit used by `k` other chains weighs about `αᵏ`
/// (with a little random jitter), `α` growing every pass, so overlaps are
/// driven out. Once no qubit is shared a couple of refinement passes try to
/// shorten chains without reintroducing overlap.
///
/// Dense models can defeat the search; when every try fails and the model
/// fits, [`clique_embedding`] is used instead. Every result is verified
/// before being returned.
pub fn find_embedding(
    couplings: &[(usize, usize)],
    num_variables: usize,
    graph: &ChimeraGraph,
    seed: u64,
    max_tries: usize,
) -> Result<Embedding> {
    let mut neighbours = vec![BTreeSet::new(); num_variables];
    for &(u, v) in couplings {
        if u >= num_variables || v >= num_variables || u == v {
            return Err(Error::InvalidConfig(format!(
                "coupling ({u}, {v}) is invalid for {num_variables} variables"
            )));
        }
        neighbours[u].insert(v);
        neighbours[v].insert(u);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_tries {
        if let Some(embedding) = try_embed(&neighbours, graph, &mut rng) {
            if verify_embedding(graph, &embedding, couplings).passed() {
                return Ok(embedding);
            }
        }
    }
    if max_tries > 0 {
        if let Ok(embedding) = clique_embedding(num_variables, graph) {
            if verify_embedding(graph, &embedding, couplings).passed() {
                return Ok(embedding);
            }
        }
    }
    Err(Error::EmbeddingNotFound { tries: max_tries })
}

/// Native clique embedding of `num_variables` fully connected variables in
/// the top-left `k × k` block of a Chimera graph, `k = ⌈num_variables / t⌉`.
///
/// Variable `v = c·t + i` owns the vertical qubits `i` of column `c` in rows
/// `0..=c` and the horizontal qubits `i` of row `c` in columns `c..k`, so
/// every chain has `k + 1` qubits and any two chains meet in some cell.
pub fn clique_embedding(num_variables: usize, graph: &ChimeraGraph) -> Result<Embedding> {
    let (rows, cols, t) = graph.dimensions();
    if t == 0 {
        return Err(Error::InvalidConfig(
            "clique embedding needs a Chimera lattice".into(),
        ));
    }
    let k = num_variables.div_ceil(t);
    if k > rows.min(cols) {
        return Err(Error::EmbeddingNotFound { tries: 0 });
    }
    let index = |r: usize, c: usize, u: usize, i: usize| ((r * cols + c) * 2 + u) * t + i;
    Ok(Embedding::from_chains((0..num_variables).map(|v| {
        let (c, i) = (v / t, v % t);
        let vertical = (0..=c).map(move |r| index(r, c, 0, i));
        let horizontal = (c..k).map(move |col| index(c, col, 1, i));
        (v, vertical.chain(horizontal).collect::<BTreeSet<_>>())
    })))
}

const ROUTING_PASSES: usize = 64;
const PATIENCE: usize = 12;
const ALPHA_GROWTH: f64 = 1.3;
const JITTER: f64 = 0.25;
const REFINE_PASSES: usize = 2;

struct Router<'a> {
    graph: &'a ChimeraGraph,
    neighbours: &'a [BTreeSet<usize>],
    chains: Vec<BTreeSet<usize>>,
    usage: Vec<u32>,
}

impl Router<'_> {
    fn rip_up(&mut self, v: usize) -> BTreeSet<usize> {
        let chain = std::mem::take(&mut self.chains[v]);
        for &q in &chain {
            self.usage[q] -= 1;
        }
        chain
    }

    fn install(&mut self, v: usize, chain: BTreeSet<usize>) {
        for &q in &chain {
            self.usage[q] += 1;
        }
        self.chains[v] = chain;
    }

    /// New chain for `v` given the other chains; `alpha = None` forbids
    /// shared qubits outright.
    fn route(&self, v: usize, alpha: Option<f64>, rng: &mut ChaCha8Rng) -> Option<BTreeSet<usize>> {
        let qubits = self.graph.num_qubits();
        let weight: Vec<f64> = self
            .usage
            .iter()
            .map(|&u| match alpha {
                Some(a) => a.powi(u as i32) * (1.0 + JITTER * rng.gen::<f64>()),
                None if u == 0 => 1.0 + JITTER * rng.gen::<f64>(),
                None => f64::INFINITY,
            })
            .collect();
        let placed: Vec<usize> = self.neighbours[v]
            .iter()
            .copied()
            .filter(|&u| !self.chains[u].is_empty())
            .collect();
        if placed.is_empty() {
            let lightest = weight.iter().copied().fold(f64::INFINITY, f64::min);
            if !lightest.is_finite() {
                return None;
            }
            let candidates: Vec<usize> = (0..qubits).filter(|&q| weight[q] == lightest).collect();
            return Some(BTreeSet::from([
                candidates[rng.gen_range(0..candidates.len())]
            ]));
        }
        let trees: Vec<(Vec<f64>, Vec<usize>)> = placed
            .iter()
            .map(|&u| weighted_paths(self.graph, &weight, &self.chains[u]))
            .collect();
        let mut best: Option<(usize, f64, u32)> = None;
        for q in 0..qubits {
            if !weight[q].is_finite() {
                continue;
            }
            // d_u(q) includes q itself unless q already lies in chain u;
            // count q once overall
            let mut total = weight[q];
            for (dist, _) in &trees {
                if dist[q] > 0.0 {
                    total += dist[q] - weight[q];
                }
            }
            if !total.is_finite() {
                continue;
            }
            let tiebreak = rng.gen::<u32>();
            if best.is_none_or(|(_, t, r)| total < t || (total == t && tiebreak < r)) {
                best = Some((q, total, tiebreak));
            }
        }
        let (root, _, _) = best?;
        let mut chain = BTreeSet::from([root]);
        for (u, (_, parent)) in placed.iter().zip(&trees) {
            let mut q = root;
            while !self.chains[*u].contains(&q) {
                chain.insert(q);
                q = parent[q];
                if q == usize::MAX {
                    break;
                }
            }
        }
        Some(chain)
    }
}

fn try_embed(
    neighbours: &[BTreeSet<usize>],
    graph: &ChimeraGraph,
    rng: &mut ChaCha8Rng,
) -> Option<Embedding> {
    let n = neighbours.len();
    let mut router = Router {
        graph,
        neighbours,
        chains: vec![BTreeSet::new(); n],
        usage: vec![0; graph.num_qubits()],
    };
    let mut order: Vec<usize> = (0..n).collect();
    let mut alpha = 2.0;
    let mut feasible = false;
    let mut best_overlap = usize::MAX;
    let mut stale = 0;
    for _ in 0..ROUTING_PASSES {
        order.shuffle(rng);
        for &v in &order {
            router.rip_up(v);
            let chain = router.route(v, Some(alpha), rng)?;
            router.install(v, chain);
        }
        let overlap = router.usage.iter().filter(|&&u| u > 1).count();
        if overlap == 0 {
            feasible = true;
            break;
        }
        if overlap < best_overlap {
            best_overlap = overlap;
            stale = 0;
        } else {
            stale += 1;
            if stale == PATIENCE {
                break;
            }
        }
        alpha *= ALPHA_GROWTH;
    }
    if !feasible {
        return None;
    }
    for _ in 0..REFINE_PASSES {
        order.shuffle(rng);
        for &v in &order {
            let old = router.rip_up(v);
            match router.route(v, None, rng) {
                Some(chain) if chain.len() <= old.len() => router.install(v, chain),
                _ => router.install(v, old),
            }
        }
    }
    Some(Embedding::from_chains(
        router.chains.into_iter().enumerate(),
    ))
}

#[derive(PartialEq)]
struct Frontier(f64, usize);

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Node-weighted shortest paths out of `chain`: `dist[q]` is the summed
/// weight of the path's qubits outside the chain (including `q`), `parent`
/// steps back toward the chain (`usize::MAX` on chain qubits).
fn weighted_paths(
    graph: &ChimeraGraph,
    weight: &[f64],
    chain: &BTreeSet<usize>,
) -> (Vec<f64>, Vec<usize>) {
    let qubits = graph.num_qubits();
    let mut dist = vec![f64::INFINITY; qubits];
    let mut parent = vec![usize::MAX; qubits];
    let mut heap = BinaryHeap::new();
    for &c in chain {
        dist[c] = 0.0;
        heap.push(Frontier(0.0, c));
    }
    while let Some(Frontier(d, q)) = heap.pop() {
        if d > dist[q] {
            continue;
        }
        for &next in graph.neighbours(q) {
            let candidate = d + weight[next];
            if candidate < dist[next] {
                dist[next] = candidate;
                parent[next] = q;
                heap.push(Frontier(candidate, next));
            }
        }
    }
    (dist, parent)
}

/// Default chain strength: twice the largest logical coupling magnitude.
pub fn default_chain_strength(model: &IsingModel) -> f64 {
    2.0 * model.max_abs_coupling()
}

/// Maps a logical Ising model onto physical qubits.
///
/// Biases are split uniformly across each chain, each logical coupling sits
/// on the lowest-index physical edge joining the two chains, and every
/// intra-chain edge gets `-chain_strength`. The physical model is indexed by
/// physical qubit over the whole graph.
pub fn embed_ising(
    model: &IsingModel,
    embedding: &Embedding,
    graph: &ChimeraGraph,
    chain_strength: f64,
) -> Result<IsingModel> {
    let couplings = logical_couplings(model);
    let report = verify_embedding(graph, embedding, &couplings);
    if !report.passed() {
        return Err(Error::InvalidEmbedding(report.problems.join("; ")));
    }
    let mut physical = IsingModel::new(graph.num_qubits());
    for v in 0..model.num_variables() {
        let chain = embedding
            .chain(v)
            .ok_or_else(|| Error::InvalidEmbedding(format!("variable {v} has no chain")))?;
        let share = model.h()[v] / chain.len() as f64;
        for &q in chain {
            physical.add_bias(q, share);
        }
        for &a in chain {
            for &b in graph.neighbours(a) {
                if a < b && chain.contains(&b) {
                    physical.add_coupling(a, b, -chain_strength)?;
                }
            }
        }
    }
    for (&(u, v), &j) in model.couplings() {
        let (cu, cv) = (embedding.chain(u).unwrap(), embedding.chain(v).unwrap());
        let edge = cu
            .iter()
            .flat_map(|&a| {
                graph
                    .neighbours(a)
                    .iter()
                    .filter(|b| cv.contains(b))
                    .map(move |&b| (a.min(b), a.max(b)))
            })
            .min()
            .expect("verified coverage");
        physical.add_coupling(edge.0, edge.1, j)?;
    }
    Ok(physical)
}

/// Collapses physical spin samples to logical ones by majority vote over
/// each chain (ties resolve to +1) and recomputes logical energies.
///
/// Duplicate logical states are merged, their counts summed.
pub fn unembed_majority(
    physical: &SampleSet,
    embedding: &Embedding,
    logical: &IsingModel,
) -> Result<SampleSet> {
    if physical.vartype() != Vartype::Spin {
        return Err(Error::InvalidConfig(
            "unembedding expects spin samples".into(),
        ));
    }
    let n = logical.num_variables();
    let mut out = SampleSet::new(Vartype::Spin, n);
    for sample in physical.iter() {
        let mut state = BitState::zeros(n);
        for v in 0..n {
            let chain = embedding
                .chain(v)
                .ok_or_else(|| Error::InvalidEmbedding(format!("variable {v} has no chain")))?;
            let mut sum = 0i64;
            for &q in chain {
                if q >= sample.num_variables {
                    return Err(Error::QubitOutOfRange {
                        qubit: q,
                        qubits: sample.num_variables,
                    });
                }
                sum += sample.value(q) as i64;
            }
            state.set(v, sum >= 0);
        }
        let values: Vec<i8> = (0..n).map(|v| Vartype::Spin.value(state.get(v))).collect();
        out.push(&state, logical.energy(&values)?, sample.count);
    }
    Ok(out.aggregate())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_embedding_covers_complete_graph() {
        let g = chimera_graph(8, 8, 4).unwrap();
        let couplings: Vec<(usize, usize)> = (0..16)
            .flat_map(|a| (a + 1..16).map(move |b| (a, b)))
            .collect();
        let e = clique_embedding(16, &g).unwrap();
        assert!(verify_embedding(&g, &e, &couplings).passed());
        assert_eq!(e.max_chain_length(), 5);
        assert_eq!(e.qubit_count(), 80);
        assert!(clique_embedding(33, &g).is_err());
    }

    #[test]
    fn graph_sizes() {
        let g = chimera_graph(1, 1, 1).unwrap();
        assert_eq!((g.num_qubits(), g.num_edges()), (2, 1));
        let g = chimera_graph(1, 1, 4).unwrap();
        assert_eq!((g.num_qubits(), g.num_edges()), (8, 16));
        let g = chimera_graph(2, 1, 4).unwrap();
        assert_eq!((g.num_qubits(), g.num_edges()), (16, 36));
        let g = chimera_graph(3, 3, 4).unwrap();
        assert_eq!((g.num_qubits(), g.num_edges()), (72, 192));
        assert!(chimera_graph(0, 1, 1).is_err());
    }

    #[test]
    fn inter_cell_edges_follow_shores() {
        let g = chimera_graph(2, 2, 2).unwrap();
        // cell (0,0) shore 0 k=1 is qubit 1; cell (1,0) shore 0 k=1 is ((1*2+0)*2+0)*2+1 = 9
        assert!(g.has_edge(1, 9));
        // cell (0,0) shore 1 k=0 is 2; cell (0,1) shore 1 k=0 is ((0*2+1)*2+1)*2 = 6
        assert!(g.has_edge(2, 6));
        // no vertical link for horizontal-shore qubits
        assert!(!g.has_edge(2, 10));
    }

    #[test]
    fn identity_embedding_passes() {
        let g = chimera_graph(1, 1, 1).unwrap();
        let e = Embedding::from_chains([(0, [0]), (1, [1])]);
        let r = verify_embedding(&g, &e, &[(0, 1)]);
        assert!(r.passed());
        assert_eq!(r.max_chain_length, 1);
    }

    #[test]
    fn shared_qubit_fails_disjointness() {
        let g = chimera_graph(1, 1, 2).unwrap();
        let e = Embedding::from_chains([(0, vec![0, 2]), (1, vec![2, 1])]);
        let r = verify_embedding(&g, &e, &[(0, 1)]);
        assert!(!r.disjoint);
        assert!(!r.passed());
    }

    #[test]
    fn disconnected_chain_and_missing_coupling() {
        let g = chimera_graph(1, 1, 2).unwrap();
        // qubits 0 and 1 share a shore and are not adjacent
        let e = Embedding::from_chains([(0, vec![0, 1]), (1, vec![2])]);
        let r = verify_embedding(&g, &e, &[(0, 1)]);
        assert!(!r.chains_connected);
        assert!(r.couplings_covered);
        let e = Embedding::from_chains([(0, vec![0]), (1, vec![1])]);
        let r = verify_embedding(&g, &e, &[(0, 1)]);
        assert!(!r.couplings_covered);
        let r = verify_embedding(&g, &e, &[(0, 2)]);
        assert!(!r.couplings_covered);
    }

    #[test]
    fn k2_into_single_edge() {
        let g = chimera_graph(1, 1, 1).unwrap();
        let e = find_embedding(&[(0, 1)], 2, &g, 0, 10).unwrap();
        assert_eq!(e.max_chain_length(), 1);
        let mut used: Vec<usize> = e.chains().values().flatten().copied().collect();
        used.sort_unstable();
        assert_eq!(used, [0, 1]);
    }

    #[test]
    fn triangle_into_k22() {
        let g = chimera_graph(1, 1, 2).unwrap();
        let couplings = [(0, 1), (1, 2), (0, 2)];
        let e = find_embedding(&couplings, 3, &g, 1, 50).unwrap();
        assert!(verify_embedding(&g, &e, &couplings).passed());
    }

    #[test]
    fn no_edges_means_failure() {
        let g = ChimeraGraph::from_edges(4, &[]).unwrap();
        assert!(matches!(
            find_embedding(&[(0, 1)], 2, &g, 0, 5),
            Err(Error::EmbeddingNotFound { tries: 5 })
        ));
    }

    #[test]
    fn bias_split_and_chain_couplings() {
        let g = chimera_graph(1, 1, 2).unwrap();
        // chain 0 = {0, 2, 1, 3} is K_{2,2}, connected
        let e = Embedding::from_chains([(0, vec![0, 1, 2, 3])]);
        let m = IsingModel::from_parts(vec![1.0], [], 0.0).unwrap();
        let p = embed_ising(&m, &e, &g, 3.0).unwrap();
        assert_eq!(p.h(), [0.25; 4]);
        assert_eq!(p.couplings().len(), 4);
        assert!(p.couplings().values().all(|&v| v == -3.0));
    }

    #[test]
    fn unit_chains_reproduce_logical_model() {
        let g = chimera_graph(1, 1, 1).unwrap();
        let e = Embedding::from_chains([(0, [1]), (1, [0])]);
        let m = IsingModel::from_parts(vec![0.5, -0.25], [((0, 1), 2.0)], 0.0).unwrap();
        let p = embed_ising(&m, &e, &g, 10.0).unwrap();
        assert_eq!(p.h(), [-0.25, 0.5]);
        assert_eq!(p.coupling(0, 1), 2.0);
        assert_eq!(p.couplings().len(), 1);
    }

    #[test]
    fn majority_vote() {
        let e = Embedding::from_chains([(0, vec![0, 1, 2]), (1, vec![3, 4])]);
        let logical = IsingModel::from_parts(vec![1.0, 0.0], [((0, 1), 1.0)], 0.0).unwrap();
        let mut physical = SampleSet::new(Vartype::Spin, 5);
        physical.push_values(&[1, 1, -1, 1, -1], 0.0, 2).unwrap();
        physical.push_values(&[-1, -1, -1, -1, -1], 0.0, 1).unwrap();
        let out = unembed_majority(&physical, &e, &logical).unwrap();
        let states: Vec<(Vec<i8>, f64, u64)> = out
            .iter()
            .map(|s| (s.values(), s.energy, s.count))
            .collect();
        assert_eq!(states, [(vec![-1, -1], 0.0, 1), (vec![1, 1], 2.0, 2)]);
    }

    #[test]
    fn embedding_json_round_trip() {
        let e = Embedding::from_chains([(0, vec![5, 1]), (3, vec![2])]);
        let json = e.to_json();
        assert_eq!(json, serde_json::json!({"0": [1, 5], "3": [2]}));
        assert_eq!(Embedding::from_json(&json).unwrap(), e);
    }
}
