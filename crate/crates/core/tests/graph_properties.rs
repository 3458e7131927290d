use std::collections::{BTreeSet, VecDeque};

use mwio_core::graph::{is_aperiodic, root_report, scc, Digraph};
use mwio_core::random;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bfs(g: &Digraph, start: usize) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &(a, b) in g.edges() {
            if a == u && !seen[b] {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    seen
}

#[test]
fn roots_match_direct_reachability() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut nonempty = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=8);
        let density = rng.gen_range(0.05..0.5);
        let g = random::digraph(&mut rng, n, density);
        let r = root_report(&g);
        let reach: Vec<Vec<bool>> = (0..n).map(|v| bfs(&g, v)).collect();
        let out: BTreeSet<usize> = (0..n).filter(|&v| reach[v].iter().all(|&x| x)).collect();
        let inn: BTreeSet<usize> = (0..n).filter(|&v| (0..n).all(|u| reach[u][v])).collect();
        assert_eq!(r.out_roots, out);
        assert_eq!(r.in_roots, inn);
        for &v in &r.out_roots {
            assert!((0..n).all(|u| reach[v][u]));
        }
        nonempty += !out.is_empty() as usize;
    }
    assert!(nonempty > 5);
}

#[test]
fn condensation_is_acyclic_and_components_are_mutual_reachability() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..50 {
        let n = rng.gen_range(1..=10);
        let density = rng.gen_range(0.05..0.4);
        let g = random::digraph(&mut rng, n, density);
        let dec = scc(&g);
        // Kahn's algorithm must consume every component
        let mut indeg = vec![0; dec.component_count];
        for &(_, b) in &dec.condensation_edges {
            indeg[b] += 1;
        }
        let mut queue: VecDeque<usize> = (0..dec.component_count)
            .filter(|&c| indeg[c] == 0)
            .collect();
        let mut seen = 0;
        while let Some(c) = queue.pop_front() {
            seen += 1;
            for &(a, b) in &dec.condensation_edges {
                if a == c {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        queue.push_back(b);
                    }
                }
            }
        }
        assert_eq!(seen, dec.component_count);
        // reverse topological numbering: edges go from higher to lower ids
        assert!(dec.condensation_edges.iter().all(|&(a, b)| a > b));

        let reach: Vec<Vec<bool>> = (0..n).map(|v| bfs(&g, v)).collect();
        for u in 0..n {
            for v in 0..n {
                let mutual = reach[u][v] && reach[v][u];
                assert_eq!(dec.component_of[u] == dec.component_of[v], mutual);
            }
        }
    }
}

#[test]
fn scc_numbering_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let g = random::digraph(&mut rng, 12, 0.2);
    assert_eq!(scc(&g), scc(&g.clone()));
}

proptest! {
    #[test]
    fn aperiodicity_is_invariant_under_relabeling(
        seed in any::<u64>(),
        n in 1usize..9,
        chords in 0usize..4,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random::strongly_connected_digraph(&mut rng, n, chords);
        let all: BTreeSet<usize> = (0..n).collect();
        let base = is_aperiodic(&g, &all).unwrap();

        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let relabeled = Digraph::new(n, g.edges().iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap();
        prop_assert_eq!(is_aperiodic(&relabeled, &all).unwrap(), base);

        // a pure cycle has period n
        let cycle = random::strongly_connected_digraph(&mut rng, n, 0);
        prop_assert_eq!(is_aperiodic(&cycle, &all).unwrap(), n == 1);
    }
}
