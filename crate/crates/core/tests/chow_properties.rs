//! Chow-polytope identities, duality, and the vertex/halfspace correspondence.

mod common;

use borderlab::boolpp::{khintchine, pp_opt_rev, WeightVector};
use borderlab::chow::{
    affine_abs_expectation, chow_membership, chow_opt, chow_vector, is_vertex, BoundedFunction,
    ChowMembership, ChowVector, VertexVerdict,
};
use borderlab::rational::{int, rat, Rational};
use num_traits::{One, Zero};
use rand::Rng;

fn random_affine(rng: &mut impl Rng, n: usize) -> WeightVector {
    let weights = (0..n).map(|_| common::signed_rational(rng, 7, 5)).collect();
    WeightVector::affine(common::signed_rational(rng, 7, 5), weights)
}

#[test]
fn abs_expectation_is_extended_khintchine() {
    let mut rng = common::rng(51);
    for _ in 0..50 {
        let n = rng.gen_range(0..=10);
        let a = random_affine(&mut rng, n);
        let extended = WeightVector::new(a.with_offset_first());
        assert_eq!(
            affine_abs_expectation(&a).unwrap(),
            khintchine(&extended).unwrap()
        );
    }
}

#[test]
fn membership_respects_linear_optimum() {
    let mut rng = common::rng(52);
    let directions: Vec<WeightVector> = (0..100).map(|_| random_affine(&mut rng, 2)).collect();
    let optima: Vec<Rational> = directions
        .iter()
        .map(|a| chow_opt(a).unwrap().value)
        .collect();
    let (mut feasible, mut infeasible) = (0, 0);
    for _ in 0..40 {
        let c = ChowVector(vec![
            rat(rng.gen_range(0..=10), 10),
            rat(rng.gen_range(-5..=5), 10),
            rat(rng.gen_range(-5..=5), 10),
        ]);
        match chow_membership(&c).unwrap() {
            ChowMembership::Feasible(f) => {
                feasible += 1;
                assert_eq!(chow_vector(&f), c);
                for (a, best) in directions.iter().zip(&optima) {
                    assert!(c.dot(a) <= *best);
                }
            }
            ChowMembership::Infeasible(a) => {
                infeasible += 1;
                assert!(c.dot(&a) > chow_opt(&a).unwrap().value);
            }
        }
    }
    assert!(feasible > 0 && infeasible > 0);
}

#[test]
fn random_functions_are_members() {
    let mut rng = common::rng(53);
    for _ in 0..20 {
        let n = rng.gen_range(1..=4);
        let table = (0..1 << n).map(|_| rat(rng.gen_range(0..=6), 6)).collect();
        let f = BoundedFunction::new(n, table).unwrap();
        let c = chow_vector(&f);
        assert!(matches!(
            chow_membership(&c).unwrap(),
            ChowMembership::Feasible(_)
        ));
    }
}

#[test]
fn public_project_revenue_is_a_chow_optimum() {
    let mut rng = common::rng(54);
    for _ in 0..40 {
        let n = rng.gen_range(1..=10);
        let stakes: Vec<Rational> = (0..n)
            .map(|_| common::positive_rational(&mut rng, 9, 4))
            .collect();
        let direct = pp_opt_rev(&WeightVector::new(stakes.clone())).unwrap();
        assert_eq!(
            chow_opt(&WeightVector::affine(Rational::zero(), stakes))
                .unwrap()
                .value,
            direct
        );
    }
}

/// A nonvanishing halfspace representation with small integer weights, if any.
fn small_halfspace(f: &BoundedFunction) -> Option<Vec<i64>> {
    let n = f.n();
    let mut a = vec![-4i64; n + 1];
    loop {
        let agrees = (0..1usize << n).all(|x| {
            let s: i64 = a[0]
                + (0..n)
                    .map(|i| if x >> i & 1 == 1 { a[i + 1] } else { -a[i + 1] })
                    .sum::<i64>();
            s != 0 && (s > 0) == f.value(x).is_one()
        });
        if agrees {
            return Some(a);
        }
        let mut j = 0;
        while j <= n && a[j] == 4 {
            a[j] = -4;
            j += 1;
        }
        if j > n {
            return None;
        }
        a[j] += 1;
    }
}

#[test]
fn vertices_are_exactly_the_halfspaces() {
    for n in 1..=3 {
        for bits in 0u64..1 << (1 << n) {
            let f = BoundedFunction::from_fn(n, |x| int((bits >> x & 1) as i64)).unwrap();
            let c = chow_vector(&f);
            let verdict = is_vertex(&c).unwrap();
            match (small_halfspace(&f), verdict) {
                (Some(_), VertexVerdict::Vertex { function, weights }) => {
                    assert_eq!(function, f);
                    let opt = chow_opt(&weights).unwrap();
                    assert_eq!(opt.optimizer, f);
                    assert_eq!(chow_vector(&opt.optimizer), c);
                }
                (None, VertexVerdict::NotVertex(_)) => {}
                (oracle, verdict) => {
                    panic!("n={n} f={bits:b}: oracle {oracle:?}, verdict {verdict:?}")
                }
            }
        }
    }
}
