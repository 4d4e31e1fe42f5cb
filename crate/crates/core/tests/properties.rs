//! Property tests for the graph-level invariants: stochastic rows, spectra
//! inside the unit interval, reversibility of undirected walks, lazy-loop
//! gap scaling, and the tensor min-rule.

use hdxlab_core::WeightedGraph64;
use proptest::prelude::*;

/// Connected weighted graph: a random spanning path plus extra edges.
fn graph_strategy() -> impl Strategy<Value = WeightedGraph64> {
    (2usize..=8)
        .prop_flat_map(|n| {
            let path_weights = proptest::collection::vec(0.1f64..10.0, n - 1);
            let extras = proptest::collection::vec(
                ((0..n as u32), (0..n as u32), 0.1f64..10.0),
                0..=n,
            );
            (Just(n), path_weights, extras)
        })
        .prop_map(|(n, path_weights, extras)| {
            let mut edges: Vec<(u32, u32, f64)> = path_weights
                .into_iter()
                .enumerate()
                .map(|(i, w)| (i as u32, i as u32 + 1, w))
                .collect();
            for (u, v, w) in extras {
                edges.push((u.min(v), u.max(v), w));
            }
            WeightedGraph64::undirected(n, edges).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rows_sum_to_one_and_spectrum_is_unit(g in graph_strategy()) {
        let p = g.normalized_adjacency().unwrap();
        for i in 0..g.vertex_count() {
            let sum: f64 = p.row(i).iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }
        let spec = g.spectrum().unwrap();
        prop_assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-9);
        for &ev in &spec.eigenvalues {
            prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&ev));
        }
    }

    #[test]
    fn undirected_walks_satisfy_detailed_balance(g in graph_strategy()) {
        let chain = hdxlab_core::MarkovChain64::from_graph(&g).unwrap();
        prop_assert!(chain.detailed_balance_residual() < 1e-12);
    }

    #[test]
    fn lazy_loops_scale_the_gap(g in graph_strategy(), c in 0.0f64..=1.0) {
        let base = g.spectrum().unwrap().one_sided_gap;
        let lazy = g.add_lazy_loops(c).unwrap();
        let scaled = lazy.spectrum().unwrap().one_sided_gap;
        prop_assert!((scaled - (1.0 - c) * base).abs() < 1e-9);
    }

    #[test]
    fn tensor_gap_is_the_min_rule(a in graph_strategy(), b in graph_strategy()) {
        let prod = a.tensor_product(&b).unwrap();
        let got = prod.spectrum().unwrap().two_sided_gap;
        let want = a
            .spectrum()
            .unwrap()
            .two_sided_gap
            .min(b.spectrum().unwrap().two_sided_gap);
        prop_assert!((got - want).abs() < 1e-9);
    }
}
