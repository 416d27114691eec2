//! Reduced forms and interim feasibility.
//!
//! Two independent deciders: an exact LP over ex post rules (any family) and
//! enumeration of Border's inequalities (single-item only).

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits;
use crate::model::{feasible_sets, profile_probability, Environment, PlayerSet};
use crate::rational::Rational;
use crate::ratlp::{self, FarkasCertificate, LinearProgram, LpOutcome, Relation};

/// Interim allocation probability per player and valuation index.
pub type InterimRule = Vec<Vec<Rational>>;

/// A randomized ex post allocation rule: for each type profile (in
/// [`Environment::profile_at`] order) a distribution over `sets`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExPostRule {
    pub sets: Vec<PlayerSet>,
    pub weights: Vec<Vec<Rational>>,
}

impl ExPostRule {
    /// Point mass on `set` at every profile.
    pub fn constant(env: &Environment, set: PlayerSet) -> Result<Self> {
        let profiles = env.profile_count()?;
        Ok(ExPostRule {
            sets: vec![set],
            weights: vec![vec![Rational::one()]; profiles],
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedForm {
    pub y: InterimRule,
    pub q: Vec<Vec<Rational>>,
}

impl ReducedForm {
    /// Zero payments.
    pub fn allocation_only(y: InterimRule) -> Self {
        let q = y
            .iter()
            .map(|row| vec![Rational::zero(); row.len()])
            .collect();
        ReducedForm { y, q }
    }
}

/// One distinguished subset of valuation indices per player, bit `k` of
/// entry `i` standing for `V_i[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishedSets(pub Vec<u64>);

impl DistinguishedSets {
    pub fn contains(&self, player: usize, index: usize) -> bool {
        self.0[player] >> index & 1 == 1
    }
}

/// A candidate inequality `Σ coefficients[i][k] · y_i(k) ≤ rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct BorderInequality {
    pub coefficients: Vec<Vec<Rational>>,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Border(DistinguishedSets),
    Farkas(FarkasCertificate),
}

#[derive(Clone, Debug, PartialEq)]
pub enum FeasibilityVerdict {
    Feasible { witness: Option<ExPostRule> },
    Infeasible(Certificate),
}

impl FeasibilityVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityVerdict::Feasible { .. })
    }
}

fn check_shape(env: &Environment, table: &[Vec<Rational>], name: &str) -> Result<()> {
    let ok = table.len() == env.players()
        && table
            .iter()
            .zip(env.supports())
            .all(|(row, s)| row.len() == s.len());
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} does not match the environment's supports"
        )))
    }
}

fn require_single_item(env: &Environment) -> Result<()> {
    if env.is_single_item() {
        Ok(())
    } else {
        Err(Error::WrongFamily {
            expected: "single-item",
        })
    }
}

/// Interim allocation rule induced by an ex post rule.
pub fn interim_of_expost(env: &Environment, rule: &ExPostRule) -> Result<InterimRule> {
    let profiles = env.profile_count()?;
    limits::check_enumeration(
        "profiles × feasible sets",
        profiles as u128 * rule.sets.len() as u128,
    )?;
    if rule.weights.len() != profiles {
        return Err(Error::MalformedRule(format!(
            "{} rows for {} type profiles",
            rule.weights.len(),
            profiles
        )));
    }
    let family = feasible_sets(env)?;
    for (f, set) in rule.sets.iter().enumerate() {
        let used = rule
            .weights
            .iter()
            .any(|row| row.get(f).is_some_and(|w| !w.is_zero()));
        if used && !family.contains(set) {
            return Err(Error::MalformedRule(format!("{set} is not a feasible set")));
        }
    }
    let mut y: InterimRule = env
        .supports()
        .iter()
        .map(|s| vec![Rational::zero(); s.len()])
        .collect();
    for (t, row) in rule.weights.iter().enumerate() {
        if row.len() != rule.sets.len() {
            return Err(Error::MalformedRule(format!(
                "row {t} has the wrong length"
            )));
        }
        if row.iter().any(|w| w < &Rational::zero()) {
            return Err(Error::MalformedRule(format!(
                "row {t} has a negative weight"
            )));
        }
        if !row.iter().sum::<Rational>().is_one() {
            return Err(Error::MalformedRule(format!("row {t} does not sum to 1")));
        }
        let profile = env.profile_at(t);
        for i in 0..env.players() {
            let chosen: Rational = row
                .iter()
                .zip(&rule.sets)
                .filter(|(w, s)| s.contains(i) && !w.is_zero())
                .map(|(w, _)| w.clone())
                .sum();
            if !chosen.is_zero() {
                y[i][profile.0[i]] += env.others_probability(i, &profile) * chosen;
            }
        }
    }
    Ok(y)
}

/// Decides feasibility of `y` with the exact LP over ex post rules.
pub fn membership_lp(env: &Environment, y: &[Vec<Rational>]) -> Result<FeasibilityVerdict> {
    check_shape(env, y, "interim rule")?;
    let profiles = env.profile_count()?;
    let sets = feasible_sets(env)?;
    let width = sets.len();
    limits::check_enumeration("profiles × feasible sets", profiles as u128 * width as u128)?;

    let mut lp = LinearProgram::new(profiles * width);
    let one = Rational::one();
    let mut marginals: Vec<Vec<Vec<(usize, Rational)>>> = env
        .supports()
        .iter()
        .map(|s| vec![Vec::new(); s.len()])
        .collect();
    for t in 0..profiles {
        let terms: Vec<(usize, Rational)> =
            (0..width).map(|f| (t * width + f, one.clone())).collect();
        lp.add_sparse(&terms, Relation::Eq, one.clone());
        let profile = env.profile_at(t);
        for i in 0..env.players() {
            let others = env.others_probability(i, &profile);
            for (f, set) in sets.iter().enumerate() {
                if set.contains(i) {
                    marginals[i][profile.0[i]].push((t * width + f, others.clone()));
                }
            }
        }
    }
    for (i, row) in marginals.iter().enumerate() {
        for (k, terms) in row.iter().enumerate() {
            lp.add_sparse(terms, Relation::Eq, y[i][k].clone());
        }
    }
    Ok(match ratlp::feasible_point(&lp)? {
        LpOutcome::Optimal { assignment, .. } => FeasibilityVerdict::Feasible {
            witness: Some(ExPostRule {
                sets,
                weights: assignment.chunks(width).map(|c| c.to_vec()).collect(),
            }),
        },
        LpOutcome::Infeasible(cert) => FeasibilityVerdict::Infeasible(Certificate::Farkas(cert)),
        LpOutcome::Unbounded => {
            return Err(Error::IdentityViolated(
                "feasibility LP reported unbounded".into(),
            ))
        }
    })
}

/// The Border inequality identified by `sets`.
pub fn border_inequality(env: &Environment, sets: &DistinguishedSets) -> Result<BorderInequality> {
    require_single_item(env)?;
    if sets.0.len() != env.players() {
        return Err(Error::InvalidInput(
            "one distinguished set per player".into(),
        ));
    }
    let mut no_distinguished = Rational::one();
    let coefficients = env
        .priors()
        .iter()
        .enumerate()
        .map(|(i, prior)| {
            let row: Vec<Rational> = prior
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    if sets.contains(i, k) {
                        p.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            no_distinguished *= Rational::one() - row.iter().sum::<Rational>();
            row
        })
        .collect();
    Ok(BorderInequality {
        coefficients,
        rhs: Rational::one() - no_distinguished,
    })
}

/// Both sides of a Border inequality: the probability that the winner has a
/// distinguished type, and the probability that some bidder does.
pub fn border_inequality_eval(
    env: &Environment,
    y: &[Vec<Rational>],
    sets: &DistinguishedSets,
) -> Result<(Rational, Rational)> {
    check_shape(env, y, "interim rule")?;
    let ineq = border_inequality(env, sets)?;
    let lhs = ineq
        .coefficients
        .iter()
        .flatten()
        .zip(y.iter().flatten())
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, v)| c * v)
        .sum();
    Ok((lhs, ineq.rhs))
}

/// Checks every Border inequality in lexicographic order of the per-player
/// bitmasks (player 0 most significant) and reports the first violation.
pub fn border_check(env: &Environment, y: &[Vec<Rational>]) -> Result<FeasibilityVerdict> {
    require_single_item(env)?;
    check_shape(env, y, "interim rule")?;
    let bits: usize = env.supports().iter().map(|s| s.len()).sum();
    let total = limits::check_power_of_two("distinguished-set patterns", bits)?;
    let widths: Vec<usize> = env.supports().iter().map(|s| s.len()).collect();
    let decode = |mut index: usize| {
        let mut masks = vec![0u64; widths.len()];
        for (i, w) in widths.iter().enumerate().rev() {
            masks[i] = (index & ((1 << w) - 1)) as u64;
            index >>= w;
        }
        DistinguishedSets(masks)
    };
    let violation = (0..total).into_par_iter().find_first(|&index| {
        let sets = decode(index);
        border_inequality_eval(env, y, &sets).is_ok_and(|(lhs, rhs)| lhs > rhs)
    });
    Ok(match violation {
        Some(index) => FeasibilityVerdict::Infeasible(Certificate::Border(decode(index))),
        None => FeasibilityVerdict::Feasible { witness: None },
    })
}

/// Recognizes members of the Border family: the coefficients must be `f_i(v)`
/// on some distinguished pattern and zero elsewhere, with the matching rhs.
pub fn recognize_border_inequality(env: &Environment, candidate: &BorderInequality) -> bool {
    if !env.is_single_item() || candidate.coefficients.len() != env.players() {
        return false;
    }
    let mut masks = Vec::with_capacity(env.players());
    for (row, prior) in candidate.coefficients.iter().zip(env.priors()) {
        if row.len() != prior.len() || row.len() > 64 {
            return false;
        }
        let mut mask = 0u64;
        for (k, (c, p)) in row.iter().zip(prior).enumerate() {
            if c == p {
                mask |= 1 << k;
            } else if !c.is_zero() {
                return false;
            }
        }
        masks.push(mask);
    }
    border_inequality(env, &DistinguishedSets(masks)).is_ok_and(|ineq| ineq.rhs == candidate.rhs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BicViolation {
    pub player: usize,
    pub true_index: usize,
    pub report_index: usize,
    /// Utility gained by misreporting.
    pub gain: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IirViolation {
    pub player: usize,
    pub index: usize,
    pub utility: Rational,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct IncentiveReport {
    pub bic: Vec<BicViolation>,
    pub iir: Vec<IirViolation>,
}

impl IncentiveReport {
    pub fn passes(&self) -> bool {
        self.bic.is_empty() && self.iir.is_empty()
    }
}

/// Checks interim incentive compatibility and interim individual rationality.
pub fn bic_iir_check(env: &Environment, rf: &ReducedForm) -> Result<IncentiveReport> {
    check_shape(env, &rf.y, "interim allocation")?;
    check_shape(env, &rf.q, "interim payment")?;
    let mut report = IncentiveReport::default();
    for (i, support) in env.supports().iter().enumerate() {
        for (k, v) in support.iter().enumerate() {
            let truthful = v * &rf.y[i][k] - &rf.q[i][k];
            if truthful < Rational::zero() {
                report.iir.push(IirViolation {
                    player: i,
                    index: k,
                    utility: truthful.clone(),
                });
            }
            for r in 0..support.len() {
                let deviation = v * &rf.y[i][r] - &rf.q[i][r];
                if deviation > truthful {
                    report.bic.push(BicViolation {
                        player: i,
                        true_index: k,
                        report_index: r,
                        gain: deviation - &truthful,
                    });
                }
            }
        }
    }
    Ok(report)
}

pub fn expected_revenue(env: &Environment, rf: &ReducedForm) -> Result<Rational> {
    check_shape(env, &rf.q, "interim payment")?;
    Ok(env
        .priors()
        .iter()
        .zip(&rf.q)
        .flat_map(|(f, q)| f.iter().zip(q))
        .map(|(p, q)| p * q)
        .sum())
}

/// Interim rule of a deterministic ex post rule given as a function of the
/// type profile, without materializing the rule.
pub fn interim_of_allocation(
    env: &Environment,
    mut allocate: impl FnMut(&crate::model::TypeProfile) -> PlayerSet,
) -> Result<InterimRule> {
    let mut y: InterimRule = env
        .supports()
        .iter()
        .map(|s| vec![Rational::zero(); s.len()])
        .collect();
    for profile in env.profiles()? {
        let winners = allocate(&profile);
        if winners.is_empty() {
            continue;
        }
        let p = profile_probability(env, &profile);
        for i in winners.players() {
            let k = profile.0[i];
            y[i][k] += &p / &env.prior(i)[k];
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FeasibleFamily;
    use crate::rational::{int, rat};

    fn two_bidders() -> Environment {
        Environment::iid_uniform(2, &[int(1), int(2)], FeasibleFamily::SingleItem).unwrap()
    }

    /// Highest bid wins, ties split evenly.
    fn second_price_uniform_ties(env: &Environment) -> ExPostRule {
        let sets = feasible_sets(env).unwrap();
        let weights = (0..env.profile_count().unwrap())
            .map(|t| {
                let p = env.profile_at(t);
                let mut row = vec![Rational::zero(); sets.len()];
                match p.0[0].cmp(&p.0[1]) {
                    std::cmp::Ordering::Greater => row[1] = int(1),
                    std::cmp::Ordering::Less => row[2] = int(1),
                    std::cmp::Ordering::Equal => {
                        row[1] = rat(1, 2);
                        row[2] = rat(1, 2);
                    }
                }
                row
            })
            .collect();
        ExPostRule { sets, weights }
    }

    fn symmetric(low: Rational, high: Rational) -> InterimRule {
        vec![vec![low.clone(), high.clone()], vec![low, high]]
    }

    #[test]
    fn second_price_interim_rule() {
        let env = two_bidders();
        let y = interim_of_expost(&env, &second_price_uniform_ties(&env)).unwrap();
        assert_eq!(y, symmetric(rat(1, 4), rat(3, 4)));
    }

    #[test]
    fn constant_rules() {
        let env =
            Environment::iid_uniform(1, &[int(0), int(3)], FeasibleFamily::PublicProject).unwrap();
        let y = interim_of_expost(
            &env,
            &ExPostRule::constant(&env, PlayerSet::all(1)).unwrap(),
        )
        .unwrap();
        assert_eq!(y, vec![vec![int(1), int(1)]]);
        let env = two_bidders();
        let y = interim_of_expost(&env, &ExPostRule::constant(&env, PlayerSet::EMPTY).unwrap())
            .unwrap();
        assert_eq!(y, symmetric(int(0), int(0)));
    }

    #[test]
    fn malformed_rules_are_rejected() {
        let env = two_bidders();
        let mut rule = second_price_uniform_ties(&env);
        rule.weights[0][0] = int(1);
        assert!(matches!(
            interim_of_expost(&env, &rule),
            Err(Error::MalformedRule(_))
        ));
        let both = ExPostRule::constant(&env, PlayerSet::all(2)).unwrap();
        assert!(matches!(
            interim_of_expost(&env, &both),
            Err(Error::MalformedRule(_))
        ));
    }

    #[test]
    fn membership_lp_examples() {
        let env = two_bidders();
        let verdict = membership_lp(&env, &symmetric(rat(1, 4), rat(3, 4))).unwrap();
        let FeasibilityVerdict::Feasible { witness: Some(w) } = verdict else {
            panic!("expected a witness");
        };
        assert_eq!(
            interim_of_expost(&env, &w).unwrap(),
            symmetric(rat(1, 4), rat(3, 4))
        );

        let verdict = membership_lp(&env, &symmetric(rat(1, 4), int(1))).unwrap();
        assert!(matches!(
            verdict,
            FeasibilityVerdict::Infeasible(Certificate::Farkas(_))
        ));
        assert!(membership_lp(&env, &symmetric(int(0), int(0)))
            .unwrap()
            .is_feasible());
    }

    #[test]
    fn border_inequality_examples() {
        let env = two_bidders();
        let high = DistinguishedSets(vec![0b10, 0b10]);
        let y = symmetric(rat(1, 4), rat(3, 4));
        assert_eq!(
            border_inequality_eval(&env, &y, &high).unwrap(),
            (rat(3, 4), rat(3, 4))
        );
        let none = DistinguishedSets(vec![0, 0]);
        assert_eq!(
            border_inequality_eval(&env, &y, &none).unwrap(),
            (int(0), int(0))
        );
        let y = symmetric(rat(1, 4), int(1));
        assert_eq!(
            border_inequality_eval(&env, &y, &high).unwrap(),
            (int(1), rat(3, 4))
        );
    }

    #[test]
    fn border_check_examples() {
        let env = two_bidders();
        assert_eq!(
            border_check(&env, &symmetric(rat(1, 4), rat(3, 4))).unwrap(),
            FeasibilityVerdict::Feasible { witness: None }
        );
        assert_eq!(
            border_check(&env, &symmetric(rat(1, 4), int(1))).unwrap(),
            FeasibilityVerdict::Infeasible(Certificate::Border(DistinguishedSets(vec![
                0b10, 0b10
            ])))
        );
        assert!(border_check(&env, &symmetric(int(0), int(0)))
            .unwrap()
            .is_feasible());
        let pp =
            Environment::iid_uniform(2, &[int(0), int(1)], FeasibleFamily::PublicProject).unwrap();
        assert!(matches!(
            border_check(&pp, &symmetric(int(0), int(0))),
            Err(Error::WrongFamily { .. })
        ));
    }

    #[test]
    fn recognition() {
        let env = two_bidders();
        let ineq = border_inequality(&env, &DistinguishedSets(vec![0b10, 0b10])).unwrap();
        assert!(recognize_border_inequality(&env, &ineq));
        let mut wrong_rhs = ineq.clone();
        wrong_rhs.rhs = rat(1, 2);
        assert!(!recognize_border_inequality(&env, &wrong_rhs));
        let mut wrong_coeff = ineq;
        wrong_coeff.coefficients[0][1] = int(1);
        assert!(!recognize_border_inequality(&env, &wrong_coeff));
    }

    #[test]
    fn incentive_checks() {
        let env = two_bidders();
        let rf = ReducedForm {
            y: vec![vec![int(1), int(1)], vec![int(0), int(0)]],
            q: symmetric(int(0), int(0)),
        };
        assert!(bic_iir_check(&env, &rf).unwrap().passes());

        let a = int(5);
        let env = Environment::iid_uniform(1, &[int(0), a.clone()], FeasibleFamily::PublicProject)
            .unwrap();
        let posted = ReducedForm {
            y: vec![vec![int(0), int(1)]],
            q: vec![vec![int(0), a.clone()]],
        };
        assert!(bic_iir_check(&env, &posted).unwrap().passes());
        assert_eq!(expected_revenue(&env, &posted).unwrap(), &a / int(2));

        let overcharged = ReducedForm {
            y: posted.y.clone(),
            q: vec![vec![int(0), &a + int(1)]],
        };
        let report = bic_iir_check(&env, &overcharged).unwrap();
        assert_eq!(
            report.iir,
            vec![IirViolation {
                player: 0,
                index: 1,
                utility: int(-1)
            }]
        );
    }

    #[test]
    fn revenue_is_linear() {
        let env = two_bidders();
        let rf = ReducedForm {
            y: symmetric(int(0), int(1)),
            q: symmetric(int(0), rat(1, 2)),
        };
        assert_eq!(expected_revenue(&env, &rf).unwrap(), rat(1, 2));
        assert_eq!(
            expected_revenue(
                &env,
                &ReducedForm::allocation_only(symmetric(int(0), int(0)))
            )
            .unwrap(),
            int(0)
        );
    }
}
