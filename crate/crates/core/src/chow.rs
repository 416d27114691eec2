//! Chow parameters of bounded functions on the hypercube and the polytope
//! `C_n` of all achievable Chow vectors.
//!
//! Tables are indexed by the bitstring value of `x`, with `x_1` the least
//! significant bit. The sign character is `(−1)^{1+x_i}`: `+1` when `x_i = 1`.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::boolpp::{self, affine_value, halfspace_table, SumKernel, WeightVector};
use crate::error::{Error, Result};
use crate::limits;
use crate::rational::{int, pow2, Rational};
use crate::ratlp::{self, LinearProgram, LpOutcome, Relation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedFunction {
    n: usize,
    table: Vec<Rational>,
}

impl BoundedFunction {
    pub fn new(n: usize, table: Vec<Rational>) -> Result<Self> {
        let expected = limits::check_power_of_two("function table", n)?;
        if table.len() != expected {
            return Err(Error::InvalidInput(format!(
                "a function on {n} bits needs {expected} values, got {}",
                table.len()
            )));
        }
        if let Some(index) = table
            .iter()
            .position(|v| v.is_negative() || *v > Rational::one())
        {
            return Err(Error::Range(format!(
                "value at index {index} is outside [0, 1]"
            )));
        }
        Ok(BoundedFunction { n, table })
    }

    /// Infers `n` from a table of length `2^n`.
    pub fn from_table(table: Vec<Rational>) -> Result<Self> {
        let len = table.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "table length {len} is not a power of two"
            )));
        }
        BoundedFunction::new(len.trailing_zeros() as usize, table)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> Rational) -> Result<Self> {
        let count = limits::check_power_of_two("function table", n)?;
        BoundedFunction::new(n, (0..count).map(f).collect())
    }

    pub fn constant(n: usize, value: Rational) -> Result<Self> {
        BoundedFunction::from_fn(n, |_| value.clone())
    }

    pub fn majority(n: usize) -> Result<Self> {
        BoundedFunction::from_fn(n, |x| {
            if 2 * x.count_ones() as usize > n {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// `f(x) = x_{i+1}`.
    pub fn dictator(n: usize, i: usize) -> Result<Self> {
        BoundedFunction::from_fn(n, |x| int((x >> i & 1) as i64))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    pub fn value(&self, x: usize) -> &Rational {
        &self.table[x]
    }

    pub fn is_boolean(&self) -> bool {
        self.table.iter().all(|v| v.is_zero() || v.is_one())
    }
}

/// `(ĉ_0, ĉ_1, …, ĉ_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowVector(pub Vec<Rational>);

impl ChowVector {
    pub fn n(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn dot(&self, a: &WeightVector) -> Rational {
        a.with_offset_first()
            .iter()
            .zip(&self.0)
            .map(|(w, c)| w * c)
            .sum()
    }
}

pub fn chow_vector(f: &BoundedFunction) -> ChowVector {
    let mut c = vec![Rational::zero(); f.n + 1];
    for (x, v) in f.table.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        c[0] += v;
        for i in 0..f.n {
            if x >> i & 1 == 1 {
                c[i + 1] += v;
            } else {
                c[i + 1] -= v;
            }
        }
    }
    let size = pow2(f.n);
    ChowVector(c.into_iter().map(|v| v / &size).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChowOptimum {
    /// `E_x[sign⁺(a(x)) a(x)]`, enumerated.
    pub value: Rational,
    /// `(K(a_0, …, a_n) + a_0) / 2`.
    pub closed_form: Rational,
    /// `sign⁺(a(x))`, equal to 1 where `a(x) = 0`.
    pub optimizer: BoundedFunction,
}

/// Maximum of `a · c` over the Chow polytope, computed both by enumeration
/// and in closed form through the Khintchine constant.
pub fn chow_opt(a: &WeightVector) -> Result<ChowOptimum> {
    let offset = a.offset_or_zero();
    let value = boolpp::signed_sum_expectation(&offset, &a.weights, SumKernel::PositivePart)?;
    let extended = WeightVector::new(a.with_offset_first());
    let closed_form = (boolpp::khintchine(&extended)? + &offset) / int(2);
    if value != closed_form {
        return Err(Error::IdentityViolated(format!(
            "enumerated optimum {value} differs from closed form {closed_form}"
        )));
    }
    let table = halfspace_table(&offset, &a.weights)?
        .into_iter()
        .map(|b| if b { Rational::one() } else { Rational::zero() })
        .collect();
    Ok(ChowOptimum {
        value,
        closed_form,
        optimizer: BoundedFunction::new(a.len(), table)?,
    })
}

/// `E_{x ∈ {0,1}^n} |a(x)|`, which equals `K(a_0, a_1, …, a_n)`.
pub fn affine_abs_expectation(a: &WeightVector) -> Result<Rational> {
    boolpp::signed_sum_expectation(&a.offset_or_zero(), &a.weights, SumKernel::Abs)
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChowMembership {
    Feasible(BoundedFunction),
    /// A functional `a` with `a · c` above the polytope's maximum in direction `a`.
    Infeasible(WeightVector),
}

/// The LP `{f ∈ [0,1]^{2^n} : chow_vector(f) = c}`, rows scaled by `2^n`.
fn membership_program(c: &ChowVector) -> Result<LinearProgram> {
    if c.0.is_empty() {
        return Err(Error::InvalidInput(
            "a Chow vector has at least one entry".into(),
        ));
    }
    let n = c.n();
    let count = limits::check_power_of_two("function table", n)?;
    let mut lp = LinearProgram::new(count);
    for x in 0..count {
        lp.set_bounds(x, Some(Rational::zero()), Some(Rational::one()));
    }
    let size = pow2(n);
    lp.add_constraint(vec![Rational::one(); count], Relation::Eq, &c.0[0] * &size);
    for i in 0..n {
        let row = (0..count)
            .map(|x| {
                if x >> i & 1 == 1 {
                    Rational::one()
                } else {
                    -Rational::one()
                }
            })
            .collect();
        lp.add_constraint(row, Relation::Eq, &c.0[i + 1] * &size);
    }
    Ok(lp)
}

/// Decides `c ∈ C_n` exactly.
pub fn chow_membership(c: &ChowVector) -> Result<ChowMembership> {
    let lp = membership_program(c)?;
    match ratlp::feasible_point(&lp)? {
        LpOutcome::Optimal { assignment, .. } => Ok(ChowMembership::Feasible(
            BoundedFunction::new(c.n(), assignment)?,
        )),
        LpOutcome::Infeasible(cert) => {
            // The equality multipliers, negated, separate c from the polytope.
            let mut a = cert.constraint_multipliers.iter().map(|y| -y.clone());
            let offset = a.next().unwrap_or_else(Rational::zero);
            let functional = WeightVector::affine(offset, a.collect());
            let best = chow_opt(&functional)?.value;
            if c.dot(&functional) <= best {
                return Err(Error::IdentityViolated(
                    "membership certificate does not separate".into(),
                ));
            }
            Ok(ChowMembership::Infeasible(functional))
        }
        LpOutcome::Unbounded => Err(Error::IdentityViolated(
            "membership LP reported unbounded".into(),
        )),
    }
}

/// `(p_0, p_1, …, p_n)` with `p_0 = Pr[E]` and `p_i = Pr[E | X_i]` for
/// independent fair events `X_i`, mapped to `ĉ_0 = p_0`, `ĉ_i = p_i − p_0`.
pub fn conditionals_to_chow(p: &[Rational]) -> Result<ChowVector> {
    let Some(p0) = p.first() else {
        return Err(Error::InvalidInput("at least p_0 is required".into()));
    };
    if !p0.is_positive() || *p0 > Rational::one() {
        return Err(Error::Range(format!("p_0 = {p0} must lie in (0, 1]")));
    }
    let unit = Rational::zero()..=Rational::one();
    let mut c = vec![p0.clone()];
    for (i, pi) in p.iter().enumerate().skip(1) {
        if !unit.contains(pi) {
            return Err(Error::Range(format!("p_{i} = {pi} must lie in [0, 1]")));
        }
        let complement = p0 * int(2) - pi;
        if !unit.contains(&complement) {
            return Err(Error::Range(format!(
                "Pr[E | not X_{i}] = {complement} is not a probability"
            )));
        }
        c.push(pi - p0);
    }
    Ok(ChowVector(c))
}

/// Per-entry extremes of `f(x)` over every bounded function with Chow vector `c`.
fn entry_ranges(c: &ChowVector) -> Result<Vec<(Rational, Rational)>> {
    let lp = membership_program(c)?;
    let count = lp.variables;
    (0..count)
        .into_par_iter()
        .map(|x| {
            let mut probe = lp.clone();
            let mut objective = vec![Rational::zero(); count];
            objective[x] = Rational::one();
            probe.set_objective(objective.clone());
            let hi = optimum(&probe)?;
            objective[x] = -Rational::one();
            probe.set_objective(objective);
            let lo = -optimum(&probe)?;
            Ok((lo, hi))
        })
        .collect()
}

fn optimum(lp: &LinearProgram) -> Result<Rational> {
    match ratlp::solve(lp)? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Infeasible(_) => Err(Error::NotInPolytope),
        LpOutcome::Unbounded => Err(Error::IdentityViolated(
            "bounded probe reported unbounded".into(),
        )),
    }
}

/// The unique bounded function with Chow vector `c`, if there is exactly one.
pub fn unique_witness(c: &ChowVector) -> Result<Option<BoundedFunction>> {
    if let ChowMembership::Infeasible(_) = chow_membership(c)? {
        return Err(Error::NotInPolytope);
    }
    let ranges = entry_ranges(c)?;
    if ranges.iter().any(|(lo, hi)| lo != hi) {
        return Ok(None);
    }
    Ok(Some(BoundedFunction::new(
        c.n(),
        ranges.into_iter().map(|(lo, _)| lo).collect(),
    )?))
}

#[derive(Clone, Debug, PartialEq)]
pub enum NotVertexReason {
    /// More than one bounded function has this Chow vector.
    MultipleWitnesses,
    /// The only witness takes a fractional value.
    FractionalWitness(BoundedFunction),
}

#[derive(Clone, Debug, PartialEq)]
pub enum VertexVerdict {
    Vertex {
        function: BoundedFunction,
        weights: WeightVector,
    },
    NotVertex(NotVertexReason),
}

/// Vertex test by per-entry LP probing: `c` is a vertex exactly when its
/// witness is unique and Boolean, and then the witness is a halfspace whose
/// weights are recovered from a strict-separation LP.
pub fn is_vertex(c: &ChowVector) -> Result<VertexVerdict> {
    let Some(function) = unique_witness(c)? else {
        return Ok(VertexVerdict::NotVertex(NotVertexReason::MultipleWitnesses));
    };
    if !function.is_boolean() {
        return Ok(VertexVerdict::NotVertex(
            NotVertexReason::FractionalWitness(function),
        ));
    }
    let weights = recover_halfspace(&function)?.ok_or_else(|| {
        Error::IdentityViolated("unique Boolean witness is not a halfspace".into())
    })?;
    Ok(VertexVerdict::Vertex { function, weights })
}

/// Weights with `a(x) ≥ 1` where `f = 1` and `a(x) ≤ −1` where `f = 0`, if any.
pub fn recover_halfspace(f: &BoundedFunction) -> Result<Option<WeightVector>> {
    if !f.is_boolean() {
        return Ok(None);
    }
    let n = f.n();
    let mut lp = LinearProgram::new(n + 1);
    for j in 0..=n {
        lp.set_bounds(j, None, None);
    }
    for (x, v) in f.table.iter().enumerate() {
        let mut row = vec![Rational::one()];
        row.extend((0..n).map(|i| {
            if x >> i & 1 == 1 {
                Rational::one()
            } else {
                -Rational::one()
            }
        }));
        if v.is_one() {
            lp.add_constraint(row, Relation::Ge, Rational::one());
        } else {
            lp.add_constraint(row, Relation::Le, -Rational::one());
        }
    }
    Ok(match ratlp::feasible_point(&lp)? {
        LpOutcome::Optimal { mut assignment, .. } => {
            let offset = assignment.remove(0);
            Some(WeightVector::affine(offset, assignment))
        }
        _ => None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessReport {
    pub chow: ChowVector,
    pub unique: bool,
    pub entries_probed: usize,
}

/// Confirms by LP probing that a nonvanishing halfspace is the only bounded
/// function with its Chow vector.
pub fn chow_uniqueness_check(
    h: &BoundedFunction,
    weights: &WeightVector,
) -> Result<UniquenessReport> {
    if weights.len() != h.n() {
        return Err(Error::InvalidInput(
            "weights must have one entry per input bit".into(),
        ));
    }
    let offset = weights.offset_or_zero();
    for x in 0..h.table.len() {
        let a = affine_value(&offset, &weights.weights, x);
        if a.is_zero() {
            return Err(Error::VanishingWitness { index: x });
        }
        let expected = if a.is_positive() {
            Rational::one()
        } else {
            Rational::zero()
        };
        if h.table[x] != expected {
            return Err(Error::NotHalfspace { index: x });
        }
    }
    let chow = chow_vector(h);
    let unique = unique_witness(&chow)?.is_some_and(|w| w == *h);
    Ok(UniquenessReport {
        chow,
        unique,
        entries_probed: h.table.len(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MajorityReport {
    pub n: usize,
    /// `Σ_{i≥1} ĉ_i(Maj_n)`.
    pub chow_sum: Rational,
    /// `chow_opt` for `a_0 = 0`, `a = (1, …, 1)`.
    pub chow_opt_value: Rational,
    pub identity_holds: bool,
    /// Largest `Σ ĉ_i` over all Boolean functions, when small enough to sweep.
    pub exhaustive_max: Option<Rational>,
    pub extremal: Option<bool>,
}

/// Largest `n` for which every Boolean function is swept.
const SWEEP_MAX_N: usize = 4;

pub fn majority_extremality(n: usize) -> Result<MajorityReport> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenN(n));
    }
    let maj = BoundedFunction::majority(n)?;
    let chow_sum: Rational = chow_vector(&maj).0[1..].iter().sum();
    let chow_opt_value = chow_opt(&WeightVector::affine(
        Rational::zero(),
        vec![Rational::one(); n],
    ))?
    .value;
    let exhaustive_max = (n <= SWEEP_MAX_N).then(|| boolean_sweep_max(n));
    Ok(MajorityReport {
        n,
        identity_holds: chow_sum == chow_opt_value,
        extremal: exhaustive_max.as_ref().map(|m| *m <= chow_sum),
        exhaustive_max,
        chow_opt_value,
        chow_sum,
    })
}

/// Max of `Σ_i ĉ_i(f)` over all `2^{2^n}` Boolean functions.
fn boolean_sweep_max(n: usize) -> Rational {
    let points = 1usize << n;
    // Σ_i ĉ_i(f) = 2^{-n} Σ_{x: f(x)=1} (2|x| − n).
    let gain: Vec<i64> = (0..points)
        .map(|x| 2 * x.count_ones() as i64 - n as i64)
        .collect();
    let best = (0u64..1 << points)
        .into_par_iter()
        .map(|f| {
            (0..points)
                .filter(|x| f >> x & 1 == 1)
                .map(|x| gain[x])
                .sum::<i64>()
        })
        .max()
        .unwrap_or(0);
    Rational::new(best.into(), (points as i64).into())
}
