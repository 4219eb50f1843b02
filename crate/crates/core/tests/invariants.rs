//! Property-based invariants shared by every evaluation route.

use ndarray::Array2;
use proptest::prelude::*;
use wsubgraph::engine;
use wsubgraph::oracle::{brute_force_count, OracleConfig};
use wsubgraph::{catalog, eval_closed_form, parse_edge_list, PatternMultigraph, WeightedGraph};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (3..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(
                    prop_oneof![3 => 0.0..2.0f64, 1 => Just(0.0)],
                    n * (n - 1) / 2,
                ),
            )
        })
        .prop_map(|(n, upper)| {
            let mut w = Array2::zeros((n, n));
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    let x = it.next().unwrap();
                    w[[i, j]] = x;
                    w[[j, i]] = x;
                }
            }
            WeightedGraph::from_matrix(w).unwrap()
        })
}

fn pattern_strategy() -> impl Strategy<Value = PatternMultigraph> {
    (2usize..=5)
        .prop_flat_map(|m| {
            let pair_count = m * (m - 1) / 2;
            (
                Just(m),
                proptest::collection::vec(0u32..=2, pair_count),
            )
        })
        .prop_map(|(m, mults)| {
            let mut pairs = Vec::new();
            let mut idx = 0;
            for u in 1..=m as u8 {
                for v in (u + 1)..=m as u8 {
                    for _ in 0..mults[idx] {
                        pairs.push((u, v));
                    }
                    idx += 1;
                }
            }
            PatternMultigraph::new(m, &pairs).unwrap()
        })
}

// Counts that are exactly zero can come out as ~1e-12 noise after the
// inclusion–exclusion cancellation, so the floor on the scale is 1.
fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Relabeling the graph's vertices never changes any count.
    #[test]
    fn permutation_invariance(g in graph_strategy(8), p in pattern_strategy(), seed in any::<u64>()) {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rng);
        let base = engine::count(&p, &g).unwrap().labeled;
        let permuted = engine::count(&p, &g.permuted(&perm)).unwrap().labeled;
        prop_assert!(close(base, permuted), "{base} vs {permuted}");
    }

    /// Scaling all weights by c scales the count by c^(total multiplicity).
    #[test]
    fn homogeneity(g in graph_strategy(7), p in pattern_strategy(), c in 0.25..4.0f64) {
        let base = engine::count(&p, &g).unwrap().labeled;
        let scaled_g = WeightedGraph::from_matrix(g.weights() * c).unwrap();
        let scaled = engine::count(&p, &scaled_g).unwrap().labeled;
        let expected = base * c.powi(p.total_multiplicity() as i32);
        prop_assert!(close(scaled, expected), "{scaled} vs {expected}");
    }

    /// Engine agrees with the brute-force oracle on every small instance.
    #[test]
    fn engine_matches_oracle(g in graph_strategy(7), p in pattern_strategy()) {
        let got = engine::count(&p, &g).unwrap().labeled;
        let want = brute_force_count(&p, &g, OracleConfig::default()).unwrap();
        prop_assert!(close(got, want), "{} on n={}: {got} vs {want}", p.render(), g.n());
    }

    /// Graph serialization round-trips through both text formats.
    #[test]
    fn graph_round_trip(g in graph_strategy(8)) {
        let via_edges = parse_edge_list(&g.render_edge_list()).unwrap();
        prop_assert_eq!(&via_edges, &g);
    }

    /// Closed forms agree with the engine on random graphs, all 29 patterns.
    #[test]
    fn closed_forms_match_engine(g in graph_strategy(7)) {
        for e in catalog() {
            let closed = eval_closed_form(e.id, &g).unwrap();
            let eng = engine::count(&e.pattern, &g).unwrap().labeled;
            prop_assert!(close(closed, eng), "{}: {closed} vs {eng}", e.id);
        }
    }
}

#[test]
fn counts_vanish_when_graph_is_smaller_than_pattern() {
    for e in catalog() {
        for n in 0..e.pattern.m() {
            let g = WeightedGraph::complete(n);
            let closed = eval_closed_form(e.id, &g).unwrap();
            let eng = engine::count(&e.pattern, &g).unwrap().labeled;
            assert!(closed.abs() < 1e-9, "{} closed on n={n}: {closed}", e.id);
            assert!(eng.abs() < 1e-9, "{} engine on n={n}: {eng}", e.id);
        }
    }
}

#[test]
fn unlabeled_counts_on_complete_graphs_are_binomial_multiples() {
    // On K_n with unit weights, the unlabeled count of any simple pattern
    // equals (number of occurrences of the pattern in K_n), an integer.
    let g = WeightedGraph::complete(6);
    for e in catalog() {
        let r = engine::count(&e.pattern, &g).unwrap();
        assert!(
            (r.unlabeled - r.unlabeled.round()).abs() < 1e-6,
            "{}: unlabeled {}",
            e.id,
            r.unlabeled
        );
    }
}
