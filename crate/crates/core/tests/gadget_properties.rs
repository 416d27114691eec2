//! Reduction identities against independent brute-force counts.

mod common;

use borderlab::gadgets::{
    expected_components, expected_forest_size, expected_max_matching, gadget_expected_matching,
    matroid_gadget_check, partition_count_via_khintchine, stconn_gadget, stconn_probability,
    stconn_recover, Multigraph, PartitionInstance,
};
use borderlab::optimize::opt_wel;
use borderlab::rational::Rational;
use num_bigint::BigInt;
use rand::Rng;

fn random_graph(
    rng: &mut impl Rng,
    vertices: usize,
    max_edges: usize,
    directed: bool,
    min_edges: usize,
) -> Multigraph {
    let m = rng.gen_range(min_edges..=max_edges);
    let edges = (0..m)
        .map(|_| (rng.gen_range(0..vertices), rng.gen_range(0..vertices)))
        .collect();
    Multigraph::new(vertices, directed, edges).unwrap()
}

/// Reachability by repeated relaxation over the surviving edges.
fn connected(g: &Multigraph, mask: u32, s: usize, t: usize) -> bool {
    let mut reach = vec![false; g.vertices];
    reach[s] = true;
    for _ in 0..g.vertices {
        for (j, &(u, w)) in g.edges.iter().enumerate() {
            if mask >> j & 1 == 1 {
                if reach[u] {
                    reach[w] = true;
                }
                if !g.directed && reach[w] {
                    reach[u] = true;
                }
            }
        }
    }
    reach[t]
}

fn naive_connection(g: &Multigraph, s: usize, t: usize) -> Rational {
    let m = g.edges.len();
    let hits = (0..1u32 << m)
        .filter(|&mask| connected(g, mask, s, t))
        .count();
    Rational::new(BigInt::from(hits), BigInt::from(1u64 << m))
}

#[test]
fn partition_probability_is_balanced_fraction() {
    let mut rng = common::rng(61);
    for _ in 0..40 {
        let n = rng.gen_range(1..=12);
        let w: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
        let count =
            partition_count_via_khintchine(&PartitionInstance::new(w.clone()).unwrap()).unwrap();
        let total: i64 = w.iter().map(|&v| v as i64).sum();
        let balanced = (0..1u32 << n)
            .filter(|x| {
                2 * (0..n)
                    .filter(|i| x >> i & 1 == 1)
                    .map(|i| w[i] as i64)
                    .sum::<i64>()
                    == total
            })
            .count();
        assert_eq!(count.count, BigInt::from(balanced));
        assert_eq!(
            count.probability,
            Rational::new(BigInt::from(balanced), BigInt::from(1u64 << n))
        );
    }
}

#[test]
fn connection_probability_matches_relaxation() {
    let mut rng = common::rng(62);
    for case in 0..40 {
        let g = random_graph(&mut rng, 5, 7, case % 2 == 0, 0);
        assert_eq!(
            stconn_probability(&g, 0, 1).unwrap(),
            naive_connection(&g, 0, 1)
        );
    }
}

#[test]
fn gadget_recovers_connection_probability() {
    let mut rng = common::rng(63);
    for _ in 0..30 {
        let vertices = rng.gen_range(2..=5);
        let g = random_graph(&mut rng, vertices, 6, true, 1);
        let r = stconn_recover(&g, 0, 1, None).unwrap();
        assert!(
            r.check,
            "graph {g:?}: recovered {} vs {}",
            r.p, r.brute_force
        );
        assert!(r.sandwich_holds, "graph {g:?}");
        let larger = stconn_recover(&g, 0, 1, Some(r.k + 3)).unwrap();
        assert!(larger.check && larger.sandwich_holds);
    }
}

#[test]
fn analytic_gadget_matching_matches_enumeration() {
    let mut rng = common::rng(64);
    for _ in 0..15 {
        let vertices = rng.gen_range(2..=4);
        let g = random_graph(&mut rng, vertices, 5, true, 0);
        for k in 1..=3 {
            let gadget = stconn_gadget(&g, 0, 1, k).unwrap();
            assert_eq!(
                gadget_expected_matching(&gadget).unwrap(),
                expected_max_matching(&gadget.h).unwrap()
            );
        }
    }
}

#[test]
fn component_identity_holds() {
    let mut rng = common::rng(65);
    for _ in 0..40 {
        let vertices = rng.gen_range(2..=6);
        let g = random_graph(&mut rng, vertices, 6, false, 0);
        let r = matroid_gadget_check(&g, 0, 1).unwrap();
        assert!(r.identity_holds);
        assert_eq!(r.p, naive_connection(&g, 0, 1));
    }
}

#[test]
fn welfare_oracles_agree() {
    let mut rng = common::rng(66);
    for _ in 0..20 {
        let vertices = rng.gen_range(2..=5);
        let mut g = random_graph(&mut rng, vertices, 6, false, 1);
        g.edges.retain(|&(u, w)| u != w);
        if g.edges.is_empty() {
            continue;
        }
        assert_eq!(
            opt_wel(&g.single_minded_environment().unwrap()).unwrap(),
            expected_max_matching(&g).unwrap()
        );
        assert_eq!(
            opt_wel(&g.matroid_environment().unwrap()).unwrap(),
            expected_forest_size(&g).unwrap()
        );
        assert_eq!(
            expected_forest_size(&g).unwrap(),
            Rational::from_integer(BigInt::from(g.vertices)) - expected_components(&g).unwrap()
        );
    }
}
