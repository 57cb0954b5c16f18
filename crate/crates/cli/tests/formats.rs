use associahedra::chain::Chain;
use associahedra::tree::{enumerate_metric, enumerate_trees, MetricTree, PlanarTree};
use associahedra_cli::json::{chain_from_json, chain_to_json, render, AnyChain, ChainJson};
use proptest::prelude::*;

fn k_chain() -> impl Strategy<Value = Chain<PlanarTree>> {
    (2usize..=6).prop_flat_map(|n| {
        let cells: Vec<PlanarTree> = (0..=n - 2).flat_map(|m| enumerate_trees(n, m).unwrap()).collect();
        prop::collection::vec((0..cells.len(), -3i64..=3), 0..6).prop_map(move |terms| {
            let mut x = Chain::zero(n);
            for (i, c) in terms {
                x.add_term(cells[i].clone(), c);
            }
            x
        })
    })
}

fn w_chain() -> impl Strategy<Value = Chain<MetricTree>> {
    (2usize..=5).prop_flat_map(|n| {
        let cells: Vec<MetricTree> = (0..=n - 2).flat_map(|k| enumerate_metric(n, k).unwrap()).collect();
        prop::collection::vec((0..cells.len(), -3i64..=3), 0..6).prop_map(move |terms| {
            let mut x = Chain::zero(n);
            for (i, c) in terms {
                x.add_term(cells[i].clone(), c);
            }
            x
        })
    })
}

proptest! {
    #[test]
    fn k_chains_round_trip(x in k_chain()) {
        let text = render(&chain_to_json(&x));
        let back: ChainJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(chain_from_json::<PlanarTree>(&back).unwrap(), x.clone());
        prop_assert_eq!(AnyChain::parse(&text).unwrap().render(), text);
    }

    #[test]
    fn w_chains_round_trip(x in w_chain()) {
        let text = render(&chain_to_json(&x));
        prop_assert_eq!(AnyChain::parse(&text).unwrap(), AnyChain::W(x));
        prop_assert_eq!(AnyChain::parse(&text).unwrap().render(), text);
    }
}
