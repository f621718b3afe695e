use olcqubo::chimera::{chimera_graph, find_embedding, verify_embedding};
use olcqubo::ising::{binary_to_spin, qubo_to_ising};
use olcqubo::qaoa::{hamiltonian_expectation, simulate, Gate, GateList, PauliHamiltonian};
use olcqubo::qubo::{decode_bits, encode_tour, read_qubo_file, write_qubo_file, Decoded};
use olcqubo::reads::{align, tour_cost, OverlapGraph};
use olcqubo::samplers::{solve_exact, solve_sa, AnnealSchedule};
use olcqubo::QuboModel;
use proptest::prelude::*;

fn qubo_model(max_n: usize) -> impl Strategy<Value = QuboModel> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(-8i32..=8, n * n).prop_map(move |cells| {
            let mut m = QuboModel::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    m.add(i, j, cells[i * n + j] as f64 / 4.0);
                }
            }
            m
        })
    })
}

fn bits_of(index: u64, n: usize) -> Vec<i8> {
    (0..n).map(|i| (index >> i & 1) as i8).collect()
}

/// Direct `Σ Q_ij x_i x_j`.
fn direct_energy(m: &QuboModel, x: &[i8]) -> f64 {
    let n = m.num_variables();
    let mut e = 0.0;
    for i in 0..n {
        for j in 0..n {
            e += m.get(i, j) * x[i] as f64 * x[j] as f64;
        }
    }
    e
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn all_tours(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !prefix.contains(&v) {
                prefix.push(v);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

proptest! {
    #[test]
    fn align_matches_brute_force(
        a in "[AC]{1,8}",
        b in "[AC]{1,8}",
        mm in 0usize..3,
    ) {
        let (ra, rb) = (a.as_bytes(), b.as_bytes());
        let mut expected = 0;
        for len in (1..=ra.len().min(rb.len())).rev() {
            let diff = ra[ra.len() - len..].iter().zip(&rb[..len]).filter(|(x, y)| x != y).count();
            if diff <= mm {
                expected = len;
                break;
            }
        }
        prop_assert_eq!(align(&a, &b, mm), expected);
    }

    #[test]
    fn decode_inverts_encode(tour in (2usize..7).prop_flat_map(permutation)) {
        let x = encode_tour(&tour).unwrap();
        let bits: Vec<bool> = x.iter().map(|&v| v == 1).collect();
        prop_assert_eq!(decode_bits(&bits).unwrap(), Decoded::Tour(tour));
    }

    #[test]
    fn ising_transform_is_exact(model in qubo_model(7)) {
        let ising = qubo_to_ising(&model);
        let n = model.num_variables();
        for index in 0..1u64 << n {
            let x = bits_of(index, n);
            let s = binary_to_spin(&x);
            let lhs = ising.energy(&s).unwrap() + ising.offset();
            prop_assert!((lhs - direct_energy(&model, &x)).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_solver_energies_are_direct(model in qubo_model(8)) {
        let n = model.num_variables();
        let samples = solve_exact(&model).unwrap();
        prop_assert_eq!(samples.len(), 1usize << n);
        let mut previous = f64::NEG_INFINITY;
        for s in samples.iter() {
            prop_assert!(s.energy >= previous);
            previous = s.energy;
            prop_assert!((s.energy - direct_energy(&model, &s.values())).abs() < 1e-9);
        }
    }

    #[test]
    fn annealing_never_undercuts_exact(model in qubo_model(8), seed in any::<u64>()) {
        let exact = solve_exact(&model).unwrap().lowest_energy().unwrap();
        let schedule = AnnealSchedule { sweeps: 20, reads: 10, ..AnnealSchedule::for_model(&model, seed) };
        let samples = solve_sa(&model, &schedule).unwrap();
        prop_assert_eq!(samples.total_count(), 10);
        for s in samples.iter() {
            prop_assert!(s.energy >= exact - 1e-9);
            prop_assert!((s.energy - direct_energy(&model, &s.values())).abs() < 1e-9);
        }
    }

    #[test]
    fn normalization_keeps_optimal_tours(
        n in 2usize..6,
        cells in proptest::collection::vec(0u8..10, 25),
    ) {
        let weights: Vec<f64> = cells[..n * n].iter().map(|&c| c as f64).collect();
        prop_assume!(weights.iter().enumerate().any(|(k, &w)| k / n != k % n && w > 0.0));
        let raw = OverlapGraph::from_weights(n, weights).unwrap();
        let normalized = raw.normalized().unwrap();
        let tours = all_tours(n);
        let best = |g: &OverlapGraph| {
            let costs: Vec<f64> = tours.iter().map(|t| tour_cost(g, t).unwrap()).collect();
            let min = costs.iter().copied().fold(f64::INFINITY, f64::min);
            costs.iter().map(|&c| (c - min).abs() < 1e-9 * (1.0 + min.abs())).collect::<Vec<_>>()
        };
        prop_assert_eq!(best(&raw), best(&normalized));
    }

    #[test]
    fn qubo_file_round_trip(model in qubo_model(10)) {
        let text = write_qubo_file(&model);
        let back = read_qubo_file(&text).unwrap();
        let canonical = model.canonical();
        prop_assert_eq!(back.matrix(), canonical.matrix());
        prop_assert_eq!(write_qubo_file(&back), text);
    }

    #[test]
    fn gates_preserve_norm(
        qubits in 1usize..=10,
        raw in proptest::collection::vec((0u8..4, 0usize..10, 0usize..10, -10.0f64..10.0), 0..120),
    ) {
        let gates: Vec<Gate> = raw
            .into_iter()
            .map(|(kind, a, b, theta)| {
                let (a, b) = (a % qubits, b % qubits);
                match kind {
                    0 => Gate::H(a),
                    1 => Gate::Rx(a, theta),
                    2 => Gate::Rz(a, theta),
                    _ if qubits > 1 && a != b => Gate::Cnot(a, b),
                    _ => Gate::H(a),
                }
            })
            .collect();
        let psi = simulate(&GateList::new(qubits, gates).unwrap()).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn expectation_is_weighted_diagonal(
        angles in proptest::collection::vec(-3.0f64..3.0, 4),
        terms in proptest::collection::vec((-2.0f64..2.0, 0usize..4, 0usize..4), 0..6),
    ) {
        let mut h = PauliHamiltonian::new(4);
        for &(c, a, b) in &terms {
            h.add_term(c, &[a, b]).unwrap();
        }
        let mut gates: Vec<Gate> = (0..4).map(Gate::H).collect();
        gates.extend((0..4).map(|q| Gate::Rx(q, angles[q])));
        gates.push(Gate::Cnot(0, 3));
        let psi = simulate(&GateList::new(4, gates).unwrap()).unwrap();
        let brute: f64 = psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(b, a)| a.norm_sqr() * h.diagonal_value(b as u64))
            .sum();
        prop_assert!((hamiltonian_expectation(&h, &psi).unwrap() - brute).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embeddings_verify(
        n in 1usize..7,
        pairs in proptest::collection::vec((0usize..7, 0usize..7), 0..12),
        seed in any::<u64>(),
    ) {
        let mut couplings: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| (a % n, b % n))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        couplings.sort_unstable();
        couplings.dedup();
        let graph = chimera_graph(3, 3, 4).unwrap();
        if let Ok(embedding) = find_embedding(&couplings, n, &graph, seed, 20) {
            let report = verify_embedding(&graph, &embedding, &couplings);
            prop_assert!(report.passed(), "{:?}", report.problems);
        }
    }
}
