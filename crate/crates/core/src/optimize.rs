//! Optimal expected revenue and welfare.
//!
//! The revenue LP is the ground truth; the virtual-valuation path is a fast
//! path for regular single-item environments that must agree with it.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interim::{self, ExPostRule, InterimRule, ReducedForm};
use crate::limits;
use crate::model::{feasible_sets, profile_probability, Environment, PlayerSet};
use crate::rational::Rational;
use crate::ratlp::{self, LinearProgram, LpOutcome, Relation};

#[derive(Clone, Debug, PartialEq)]
pub struct RevenueOptimum {
    pub value: Rational,
    pub reduced_form: ReducedForm,
    pub expost: ExPostRule,
}

/// Maximizes expected revenue over BIC and IIR mechanisms with an explicit
/// LP over ex post allocation distributions and interim payments.
pub fn opt_rev_lp(env: &Environment) -> Result<RevenueOptimum> {
    let profiles = env.profile_count()?;
    let sets = feasible_sets(env)?;
    let width = sets.len();
    limits::check_enumeration("profiles × feasible sets", profiles as u128 * width as u128)?;

    // Payment variables follow the allocation block.
    let mut payment_var = Vec::with_capacity(env.players());
    let mut next = profiles * width;
    for s in env.supports() {
        payment_var.push((next..next + s.len()).collect::<Vec<_>>());
        next += s.len();
    }
    let variables = next;
    let mut lp = LinearProgram::new(variables);
    for vars in &payment_var {
        for &q in vars {
            lp.set_bounds(q, None, None);
        }
    }

    // Interim allocation of (i, k) as a linear form in the allocation block.
    let mut interim_form: Vec<Vec<Vec<(usize, Rational)>>> = env
        .supports()
        .iter()
        .map(|s| vec![Vec::new(); s.len()])
        .collect();
    let one = Rational::one();
    for t in 0..profiles {
        let terms: Vec<(usize, Rational)> =
            (0..width).map(|f| (t * width + f, one.clone())).collect();
        lp.add_sparse(&terms, Relation::Eq, one.clone());
        let profile = env.profile_at(t);
        for i in 0..env.players() {
            let others = env.others_probability(i, &profile);
            for (f, set) in sets.iter().enumerate() {
                if set.contains(i) {
                    interim_form[i][profile.0[i]].push((t * width + f, others.clone()));
                }
            }
        }
    }

    let scaled = |form: &[(usize, Rational)], by: &Rational| -> Vec<(usize, Rational)> {
        form.iter().map(|(j, c)| (*j, c * by)).collect()
    };
    for (i, support) in env.supports().iter().enumerate() {
        for (k, v) in support.iter().enumerate() {
            // v·y_i(k) − q_i(k) ≥ 0
            let mut iir = scaled(&interim_form[i][k], v);
            iir.push((payment_var[i][k], -one.clone()));
            lp.add_sparse(&iir, Relation::Ge, Rational::zero());
            // v·y_i(k) − q_i(k) − v·y_i(r) + q_i(r) ≥ 0
            for r in 0..support.len() {
                if r == k {
                    continue;
                }
                let mut bic = iir.clone();
                bic.extend(scaled(&interim_form[i][r], &-v.clone()));
                bic.push((payment_var[i][r], one.clone()));
                lp.add_sparse(&bic, Relation::Ge, Rational::zero());
            }
        }
    }

    let mut objective = vec![Rational::zero(); variables];
    for (i, prior) in env.priors().iter().enumerate() {
        for (k, p) in prior.iter().enumerate() {
            objective[payment_var[i][k]] = p.clone();
        }
    }
    lp.set_objective(objective);

    let (value, x) = match ratlp::solve(&lp)? {
        LpOutcome::Optimal { value, assignment } => (value, assignment),
        other => {
            return Err(Error::IdentityViolated(format!(
                "revenue LP must have an optimum, got {other:?}"
            )))
        }
    };
    let expost = ExPostRule {
        sets,
        weights: x[..profiles * width]
            .chunks(width)
            .map(|c| c.to_vec())
            .collect(),
    };
    let y = interim::interim_of_expost(env, &expost)?;
    let q = payment_var
        .iter()
        .map(|vars| vars.iter().map(|&j| x[j].clone()).collect())
        .collect();
    Ok(RevenueOptimum {
        value,
        reduced_form: ReducedForm { y, q },
        expost,
    })
}

/// Expected maximum welfare: pointwise best feasible set per profile.
pub fn opt_wel(env: &Environment) -> Result<Rational> {
    let profiles = env.profile_count()?;
    let sets = feasible_sets(env)?;
    limits::check_enumeration(
        "profiles × feasible sets",
        profiles as u128 * sets.len() as u128,
    )?;
    let mut total = Rational::zero();
    for profile in env.profiles()? {
        let best = sets
            .iter()
            .map(|set| {
                set.players()
                    .map(|i| env.value(i, &profile))
                    .sum::<Rational>()
            })
            .max()
            .unwrap_or_else(Rational::zero);
        if best.is_positive() {
            total += profile_probability(env, &profile) * best;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VirtualValuationTable {
    pub phi: Vec<Vec<Rational>>,
    /// Every player's virtual valuation is nondecreasing in the value.
    pub regular: bool,
}

impl VirtualValuationTable {
    pub fn first_irregular_player(&self) -> Option<usize> {
        self.phi
            .iter()
            .position(|row| row.windows(2).any(|w| w[0] > w[1]))
    }
}

/// Discrete virtual valuations
/// `φ(v_k) = v_k − (v_{k+1} − v_k)(1 − F(v_k)) / f(v_k)`, with `φ(v_max) = v_max`.
pub fn virtual_values(env: &Environment) -> VirtualValuationTable {
    let phi: Vec<Vec<Rational>> = env
        .supports()
        .iter()
        .zip(env.priors())
        .map(|(values, prior)| {
            let mut cdf = Rational::zero();
            (0..values.len())
                .map(|k| {
                    cdf += &prior[k];
                    match values.get(k + 1) {
                        Some(next) => {
                            &values[k] - (next - &values[k]) * (Rational::one() - &cdf) / &prior[k]
                        }
                        None => values[k].clone(),
                    }
                })
                .collect()
        })
        .collect();
    let mut table = VirtualValuationTable {
        phi,
        regular: false,
    };
    table.regular = table.first_irregular_player().is_none();
    table
}

#[derive(Clone, Debug, PartialEq)]
pub struct MyersonOutcome {
    pub value: Rational,
    pub allocation: InterimRule,
    pub virtual_values: VirtualValuationTable,
}

/// The winner under virtual-welfare maximization: the lowest-index bidder
/// among those with the highest positive virtual valuation.
fn virtual_winner(phi: &[Vec<Rational>], profile: &[usize]) -> PlayerSet {
    let mut best: Option<(usize, &Rational)> = None;
    for (i, &k) in profile.iter().enumerate() {
        let v = &phi[i][k];
        if v.is_positive() && best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map_or(PlayerSet::EMPTY, |(i, _)| PlayerSet::from_players([i]))
}

/// Optimal single-item revenue for regular environments via virtual welfare.
pub fn myerson_single_item(env: &Environment) -> Result<MyersonOutcome> {
    if !env.is_single_item() {
        return Err(Error::WrongFamily {
            expected: "single-item",
        });
    }
    let table = virtual_values(env);
    if let Some(player) = table.first_irregular_player() {
        return Err(Error::NotRegular { player });
    }
    let y = interim::interim_of_allocation(env, |profile| virtual_winner(&table.phi, &profile.0))?;
    let value = (0..env.players())
        .flat_map(|i| (0..env.support(i).len()).map(move |k| (i, k)))
        .map(|(i, k)| &env.prior(i)[k] * &table.phi[i][k] * &y[i][k])
        .sum();
    Ok(MyersonOutcome {
        value,
        allocation: y,
        virtual_values: table,
    })
}

/// Closed-form interim rule `Π_{j≠i} Pr[φ_j(v_j) < φ_i(v)]` for positive
/// `φ_i(v)`. Only valid without cross-player ties, so returns `None` when two
/// players share a virtual value.
pub fn myerson_product_formula(
    env: &Environment,
    table: &VirtualValuationTable,
) -> Option<InterimRule> {
    for i in 0..table.phi.len() {
        for j in i + 1..table.phi.len() {
            if table.phi[i].iter().any(|a| table.phi[j].contains(a)) {
                return None;
            }
        }
    }
    Some(
        table
            .phi
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .map(|v| {
                        if !v.is_positive() {
                            return Rational::zero();
                        }
                        (0..table.phi.len())
                            .filter(|&j| j != i)
                            .map(|j| {
                                table.phi[j]
                                    .iter()
                                    .zip(env.prior(j))
                                    .filter(|(w, _)| *w < v)
                                    .map(|(_, p)| p.clone())
                                    .sum::<Rational>()
                            })
                            .product()
                    })
                    .collect()
            })
            .collect(),
    )
}
