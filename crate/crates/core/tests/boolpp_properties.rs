//! Khintchine constants against naive enumeration and the public-project identities.

mod common;

use borderlab::boolpp::{
    expected_positive_part, halfspace_mechanism, khintchine, khintchine_bounds_check,
    mechanism_audit, WeightVector,
};
use borderlab::rational::{int, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

/// `(E|x·a|, E max{0, x·a})` by plain enumeration of every sign pattern.
fn naive(a: &[Rational]) -> (Rational, Rational) {
    let count = 1usize << a.len();
    let (mut abs, mut pos) = (Rational::zero(), Rational::zero());
    for x in 0..count {
        let s: Rational = a
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if x >> i & 1 == 1 {
                    -v.clone()
                } else {
                    v.clone()
                }
            })
            .sum();
        if s.is_positive() {
            pos += &s;
        }
        abs += s.abs();
    }
    let size = Rational::from_integer(BigInt::from(count));
    (abs / &size, pos / size)
}

fn random_weights(rng: &mut impl Rng, n: usize, signed: bool) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            if signed {
                common::signed_rational(rng, 9, 7)
            } else {
                common::positive_rational(rng, 9, 7)
            }
        })
        .collect()
}

#[test]
fn gray_code_matches_naive_enumeration() {
    let mut rng = common::rng(41);
    for _ in 0..60 {
        let n = rng.gen_range(1..=12);
        let a = random_weights(&mut rng, n, true);
        let (abs, pos) = naive(&a);
        let w = WeightVector::new(a);
        assert_eq!(khintchine(&w).unwrap(), abs);
        assert_eq!(expected_positive_part(&w).unwrap(), pos);
    }
}

#[test]
fn positive_part_is_half_khintchine() {
    let mut rng = common::rng(42);
    for _ in 0..60 {
        let n = rng.gen_range(1..=12);
        let a = WeightVector::new(random_weights(&mut rng, n, false));
        assert_eq!(
            expected_positive_part(&a).unwrap(),
            khintchine(&a).unwrap() / int(2)
        );
    }
}

#[test]
fn khintchine_inequality_bounds_hold() {
    let mut rng = common::rng(43);
    for _ in 0..60 {
        let n = rng.gen_range(1..=10);
        let a = WeightVector::new(random_weights(&mut rng, n, true));
        assert!(khintchine_bounds_check(&a).unwrap().holds());
    }
}

#[test]
fn pivotal_revenue_and_monotonicity() {
    let mut rng = common::rng(44);
    for _ in 0..40 {
        let n = rng.gen_range(1..=12);
        let a = WeightVector::new(random_weights(&mut rng, n, false));
        let mechanism = halfspace_mechanism(&a).unwrap();
        let mut revenue = Rational::zero();
        for i in 0..n {
            let (high, low) = mechanism.interim_allocation(i);
            assert!(high >= low);
            let pivotal = mechanism.pivotal_probability(i);
            assert_eq!(pivotal, (&high - &low) / int(2));
            revenue += &a.weights[i] * pivotal;
        }
        assert_eq!(revenue, khintchine(&a).unwrap() / int(2));
        for x in 0..1usize << n {
            for i in 0..n {
                if x >> i & 1 == 0 {
                    assert!(mechanism.decision(x) <= mechanism.decision(x | 1 << i));
                }
            }
        }
        if n <= 8 {
            assert!(mechanism_audit(&a).unwrap().passes());
        }
    }
}
