//! Khintchine constants and the optimal Boolean public-project mechanism.
//!
//! Player `i` is equally likely to value the project at 0 or at the stake
//! `a_i`. Profiles are bitmasks over `{0,1}^n`, bit `i` set when player `i`
//! has the high value.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits;
use crate::rational::{common_denominator, pow2, Rational};

/// Linear weights with an optional affine offset `a_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub weights: Vec<Rational>,
    pub offset: Option<Rational>,
}

impl WeightVector {
    pub fn new(weights: Vec<Rational>) -> Self {
        WeightVector {
            weights,
            offset: None,
        }
    }

    pub fn affine(offset: Rational, weights: Vec<Rational>) -> Self {
        WeightVector {
            weights,
            offset: Some(offset),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn offset_or_zero(&self) -> Rational {
        self.offset.clone().unwrap_or_else(Rational::zero)
    }

    /// `(a_0, a_1, …, a_n)` as one flat vector.
    pub fn with_offset_first(&self) -> Vec<Rational> {
        std::iter::once(self.offset_or_zero())
            .chain(self.weights.iter().cloned())
            .collect()
    }
}

/// How each signed sum contributes to the total.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SumKernel {
    Abs,
    PositivePart,
}

impl SumKernel {
    fn apply_i128(self, s: i128) -> i128 {
        match self {
            SumKernel::Abs => s.abs(),
            SumKernel::PositivePart => s.max(0),
        }
    }

    fn apply_big(self, s: &BigInt) -> BigInt {
        match self {
            SumKernel::Abs => s.abs(),
            SumKernel::PositivePart => {
                if s.is_positive() {
                    s.clone()
                } else {
                    BigInt::zero()
                }
            }
        }
    }
}

const CHUNK_BITS: usize = 14;

/// `E_{x ∈ {±1}^n} kernel(offset + x·weights)`, exact.
///
/// Weights are scaled to integers and the sign vectors are walked in Gray
/// code order so each step is one addition.
pub(crate) fn signed_sum_expectation(
    offset: &Rational,
    weights: &[Rational],
    kernel: SumKernel,
) -> Result<Rational> {
    let n = weights.len();
    let count = limits::check_power_of_two("sign vectors", n)?;
    let scale = common_denominator(weights.iter().chain(std::iter::once(offset)));
    let to_int = |v: &Rational| (v * Rational::from_integer(scale.clone())).to_integer();
    let base = to_int(offset);
    let ints: Vec<BigInt> = weights.iter().map(to_int).collect();
    let spread: BigInt = ints.iter().map(|a| a.abs()).sum::<BigInt>() + base.abs();

    let total = if spread.bits() as usize + n < 120 {
        let base = base.to_i128().expect("bounded by spread");
        let ints: Vec<i128> = ints
            .iter()
            .map(|a| a.to_i128().expect("bounded by spread"))
            .collect();
        let chunk = 1usize << CHUNK_BITS.min(n);
        let sum: i128 = (0..count / chunk)
            .into_par_iter()
            .map(|c| gray_chunk_i128(base, &ints, c * chunk, chunk, kernel))
            .sum();
        BigInt::from(sum)
    } else {
        gray_chunk_big(&base, &ints, count, kernel)
    };
    Ok(Rational::new(total, scale * BigInt::from(count)))
}

/// Sign of coordinate `j` in Gray code word `g`: bit set means `−1`.
fn gray(index: usize) -> usize {
    index ^ (index >> 1)
}

fn gray_chunk_i128(base: i128, ints: &[i128], start: usize, len: usize, kernel: SumKernel) -> i128 {
    let mut word = gray(start);
    let mut s = base
        + ints
            .iter()
            .enumerate()
            .map(|(j, a)| if word >> j & 1 == 1 { -a } else { *a })
            .sum::<i128>();
    let mut total = kernel.apply_i128(s);
    for index in start + 1..start + len {
        let j = index.trailing_zeros() as usize;
        word ^= 1 << j;
        if word >> j & 1 == 1 {
            s -= 2 * ints[j];
        } else {
            s += 2 * ints[j];
        }
        total += kernel.apply_i128(s);
    }
    total
}

fn gray_chunk_big(base: &BigInt, ints: &[BigInt], count: usize, kernel: SumKernel) -> BigInt {
    let mut word = 0usize;
    let mut s: BigInt = base + ints.iter().sum::<BigInt>();
    let mut total = kernel.apply_big(&s);
    for index in 1..count {
        let j = index.trailing_zeros() as usize;
        word ^= 1 << j;
        let step: BigInt = &ints[j] * 2;
        if word >> j & 1 == 1 {
            s -= step;
        } else {
            s += step;
        }
        total += kernel.apply_big(&s);
    }
    total
}

fn require_nonempty(a: &WeightVector) -> Result<()> {
    if a.is_empty() {
        Err(Error::InvalidInput("weight vector must be nonempty".into()))
    } else {
        Ok(())
    }
}

fn require_positive(a: &WeightVector) -> Result<()> {
    require_nonempty(a)?;
    match a.weights.iter().position(|w| !w.is_positive()) {
        Some(index) => Err(Error::NonPositiveStake { index }),
        None => Ok(()),
    }
}

/// The Khintchine constant `K(a) = E_{x ∈ {±1}^n} |x·a|`.
pub fn khintchine(a: &WeightVector) -> Result<Rational> {
    require_nonempty(a)?;
    signed_sum_expectation(&Rational::zero(), &a.weights, SumKernel::Abs)
}

/// `E_{x ∈ {±1}^n} max{0, x·a}`: the expected virtual welfare of the optimal
/// public-project mechanism.
pub fn expected_positive_part(a: &WeightVector) -> Result<Rational> {
    require_nonempty(a)?;
    signed_sum_expectation(&Rational::zero(), &a.weights, SumKernel::PositivePart)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KhintchineBounds {
    pub k: Rational,
    pub k_squared: Rational,
    pub norm_squared: Rational,
    /// `K² ≥ ‖a‖²/2`.
    pub lower_holds: bool,
    /// `K² ≤ ‖a‖²`.
    pub upper_holds: bool,
    pub lower_tight: bool,
    pub upper_tight: bool,
}

impl KhintchineBounds {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// Checks `‖a‖/√2 ≤ K(a) ≤ ‖a‖` by comparing squares exactly.
pub fn khintchine_bounds_check(a: &WeightVector) -> Result<KhintchineBounds> {
    let k = khintchine(a)?;
    let k_squared = &k * &k;
    let norm_squared: Rational = a.weights.iter().map(|w| w * w).sum();
    let half = &norm_squared / Rational::from_integer(2.into());
    Ok(KhintchineBounds {
        lower_holds: k_squared >= half,
        upper_holds: k_squared <= norm_squared,
        lower_tight: k_squared == half,
        upper_tight: k_squared == norm_squared,
        k,
        k_squared,
        norm_squared,
    })
}

/// Optimal BIC and IIR revenue of the two-point uniform public project: `K(a)/2`.
pub fn pp_opt_rev(a: &WeightVector) -> Result<Rational> {
    require_positive(a)?;
    Ok(khintchine(a)? / Rational::from_integer(2.into()))
}

/// Build exactly when `Σ a_i (−1)^{1+x_i} ≥ 0`; a high-value player pays
/// their stake when pivotal.
#[derive(Clone, Debug, PartialEq)]
pub struct PublicProjectMechanism {
    stakes: Vec<Rational>,
    decisions: Vec<bool>,
}

impl PublicProjectMechanism {
    pub fn players(&self) -> usize {
        self.stakes.len()
    }

    pub fn stakes(&self) -> &[Rational] {
        &self.stakes
    }

    pub fn decision(&self, profile: usize) -> bool {
        self.decisions[profile]
    }

    pub fn is_pivotal(&self, profile: usize, player: usize) -> bool {
        profile >> player & 1 == 1
            && self.decisions[profile]
            && !self.decisions[profile & !(1 << player)]
    }

    pub fn payment(&self, profile: usize, player: usize) -> Rational {
        if self.is_pivotal(profile, player) {
            self.stakes[player].clone()
        } else {
            Rational::zero()
        }
    }

    /// `(f^i(1), f^i(0))`: build probability conditioned on player `i`'s type.
    pub fn interim_allocation(&self, player: usize) -> (Rational, Rational) {
        let mut counts = [0u64; 2];
        for (x, &d) in self.decisions.iter().enumerate() {
            if d {
                counts[x >> player & 1] += 1;
            }
        }
        let half = (self.decisions.len() / 2) as i64;
        let f = |c: u64| Rational::new(BigInt::from(c), BigInt::from(half));
        (f(counts[1]), f(counts[0]))
    }

    pub fn pivotal_probability(&self, player: usize) -> Rational {
        let pivotal = (0..self.decisions.len())
            .filter(|&x| self.is_pivotal(x, player))
            .count();
        Rational::new(BigInt::from(pivotal), BigInt::from(self.decisions.len()))
    }
}

/// `sign⁺` of the affine form at every profile, `sign⁺(0) = 1`.
pub(crate) fn halfspace_table(offset: &Rational, weights: &[Rational]) -> Result<Vec<bool>> {
    let count = limits::check_power_of_two("profiles", weights.len())?;
    Ok((0..count)
        .into_par_iter()
        .map(|x| !affine_value(offset, weights, x).is_negative())
        .collect())
}

/// `a_0 + Σ a_i (−1)^{1+x_i}`.
pub(crate) fn affine_value(offset: &Rational, weights: &[Rational], x: usize) -> Rational {
    let mut s = offset.clone();
    for (i, a) in weights.iter().enumerate() {
        if x >> i & 1 == 1 {
            s += a;
        } else {
            s -= a;
        }
    }
    s
}

pub fn halfspace_mechanism(a: &WeightVector) -> Result<PublicProjectMechanism> {
    require_positive(a)?;
    Ok(PublicProjectMechanism {
        decisions: halfspace_table(&Rational::zero(), &a.weights)?,
        stakes: a.weights.clone(),
    })
}

/// Revenue-maximal interim payments `(p(0), p(1)) = (0, a·(f(1) − f(0)))`
/// for a BIC and IIR mechanism with interim build probabilities `f(1), f(0)`.
pub fn interim_payment_bound(
    interim_high: &Rational,
    interim_low: &Rational,
    stake: &Rational,
) -> Result<(Rational, Rational)> {
    let unit = Rational::zero()..=Rational::one();
    if !unit.contains(interim_high) || !unit.contains(interim_low) {
        return Err(Error::Range(
            "interim probabilities must lie in [0, 1]".into(),
        ));
    }
    if interim_high < interim_low {
        return Err(Error::MonotonicityViolated {
            high: interim_high.to_string(),
            low: interim_low.to_string(),
        });
    }
    Ok((Rational::zero(), stake * (interim_high - interim_low)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MechanismAudit {
    pub dominant_strategy_truthful: bool,
    pub ex_post_ir: bool,
    pub expected_revenue: Rational,
    pub khintchine_half: Rational,
    pub violations: Vec<String>,
}

impl MechanismAudit {
    pub fn passes(&self) -> bool {
        self.dominant_strategy_truthful
            && self.ex_post_ir
            && self.expected_revenue == self.khintchine_half
    }
}

/// Exhaustive ex post audit of the halfspace mechanism.
pub fn mechanism_audit(a: &WeightVector) -> Result<MechanismAudit> {
    let mech = halfspace_mechanism(a)?;
    let n = mech.players();
    let count = 1usize << n;
    let mut violations = Vec::new();
    let mut revenue = Rational::zero();
    let utility = |value: &Rational, reported: usize, i: usize| -> Rational {
        let built = if mech.decision(reported) {
            value.clone()
        } else {
            Rational::zero()
        };
        built - mech.payment(reported, i)
    };
    for x in 0..count {
        for i in 0..n {
            let value = if x >> i & 1 == 1 {
                mech.stakes[i].clone()
            } else {
                Rational::zero()
            };
            let truthful = utility(&value, x, i);
            if truthful.is_negative() {
                violations.push(format!("player {i} has negative utility at profile {x:#b}"));
            }
            let lie = utility(&value, x ^ (1 << i), i);
            if lie > truthful {
                violations.push(format!(
                    "player {i} gains by misreporting at profile {x:#b}"
                ));
            }
            revenue += mech.payment(x, i);
        }
    }
    let expected_revenue = revenue / pow2(n);
    let khintchine_half = khintchine(a)? / Rational::from_integer(2.into());
    Ok(MechanismAudit {
        dominant_strategy_truthful: !violations.iter().any(|v| v.contains("misreport")),
        ex_post_ir: !violations.iter().any(|v| v.contains("negative utility")),
        expected_revenue,
        khintchine_half,
        violations,
    })
}
