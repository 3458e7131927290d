use std::path::PathBuf;

use mwio_cli::{parse_network, serialize_network, NetworkFile};
use mwio_core::{fixtures, random, EconomyNetwork};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn same_numbers(a: &EconomyNetwork, b: &EconomyNetwork) {
    assert_eq!(a.edges().len(), b.edges().len());
    for (x, y) in a.edges().iter().zip(b.edges()) {
        assert_eq!((x.importer, x.supplier), (y.importer, y.supplier));
        assert_eq!(x.weight.to_bits(), y.weight.to_bits());
        let bits =
            |m: &mwio_core::Matrix| m.as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&x.matrix), bits(&y.matrix));
    }
    assert_eq!(a.demand(), b.demand());
    assert_eq!(a.initial_state(), b.initial_state());
}

proptest! {
    #[test]
    fn parse_serialize_parse_is_identity(seed in any::<u64>(), open in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = random::shape(&mut rng, 5, 4);
        let net = if open {
            random::open_network(&mut rng, shape)
        } else {
            random::closed_network(&mut rng, shape, seed % 2 == 0)
        };
        let first = parse_network(&serialize_network(&net)).unwrap();
        same_numbers(&net, &first);
        let second = parse_network(&serialize_network(&first)).unwrap();
        same_numbers(&first, &second);
        prop_assert_eq!(serialize_network(&first), serialize_network(&second));
    }

    #[test]
    fn arbitrary_unit_interval_values_survive(w in 0.0f64..=1.0, a in 0.0f64..=1.0, y in 0.0f64..1e6) {
        let text = format!(
            r#"{{"n":1,"d":1,"edges":[{{"from":1,"to":1,"w":{w:?},"A":[[{a:?}]]}}],"demand":[{y:?}]}}"#
        );
        let net = parse_network(&text).unwrap();
        let again = parse_network(&serialize_network(&net)).unwrap();
        prop_assert_eq!(again.edges()[0].weight.to_bits(), w.to_bits());
        prop_assert_eq!(again.edges()[0].matrix[(0, 0)].to_bits(), a.to_bits());
        prop_assert_eq!(again.demand()[0].to_bits(), y.to_bits());
    }
}

fn shipped(name: &str) -> EconomyNetwork {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    parse_network(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn shipped_fixtures_match_library_networks() {
    let closed = shipped("closed_network.json");
    let reference = fixtures::closed_five_agent()
        .with_initial_state(closed.initial_state().clone())
        .unwrap();
    same_numbers(&closed, &reference);
    same_numbers(&shipped("open_network.json"), &fixtures::open_five_agent());
    let swd = shipped("stochastic_with_demand.json");
    same_numbers(&swd, &fixtures::stochastic_with_demand());
}

#[test]
fn labels_round_trip() {
    let net = shipped("open_network.json");
    assert_eq!(net.labels().unwrap().len(), 5);
    let file = NetworkFile::from_network(&net);
    assert_eq!(file.to_network().unwrap(), net);
}
