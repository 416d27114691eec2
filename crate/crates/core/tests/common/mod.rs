//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use borderlab::model::{Environment, FeasibleFamily};
use borderlab::rational::{int, rat, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Strictly increasing positive integer support of the given size.
pub fn support(rng: &mut impl Rng, size: usize, max: i64) -> Vec<Rational> {
    let mut values: Vec<i64> = (1..=max).collect();
    values.shuffle(rng);
    let mut chosen = values[..size].to_vec();
    chosen.sort();
    chosen.into_iter().map(int).collect()
}

/// Strictly positive prior with small integer weights.
pub fn prior(rng: &mut impl Rng, size: usize) -> Vec<Rational> {
    let weights: Vec<i64> = (0..size).map(|_| rng.gen_range(1..=5)).collect();
    let total: i64 = weights.iter().sum();
    weights.into_iter().map(|w| rat(w, total)).collect()
}

pub fn environment(
    rng: &mut impl Rng,
    max_players: usize,
    max_support: usize,
    family: FeasibleFamily,
) -> Environment {
    let n = rng.gen_range(1..=max_players);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max_support)).collect();
    let supports = sizes.iter().map(|&s| support(rng, s, 6)).collect();
    let priors = sizes.iter().map(|&s| prior(rng, s)).collect();
    Environment::new(supports, priors, family).expect("generated environments are valid")
}

pub fn single_item(rng: &mut impl Rng, max_players: usize, max_support: usize) -> Environment {
    environment(rng, max_players, max_support, FeasibleFamily::SingleItem)
}

/// Interim rule on the grid `{0, 1/d, …, top/d}`.
pub fn grid_rule(rng: &mut impl Rng, env: &Environment, d: i64, top: i64) -> Vec<Vec<Rational>> {
    (0..env.players())
        .map(|i| {
            (0..env.support(i).len())
                .map(|_| rat(rng.gen_range(0..=top), d))
                .collect()
        })
        .collect()
}

pub fn positive_rational(rng: &mut impl Rng, max_numer: i64, max_denom: i64) -> Rational {
    rat(rng.gen_range(1..=max_numer), rng.gen_range(1..=max_denom))
}

pub fn signed_rational(rng: &mut impl Rng, max_numer: i64, max_denom: i64) -> Rational {
    rat(
        rng.gen_range(-max_numer..=max_numer),
        rng.gen_range(1..=max_denom),
    )
}
