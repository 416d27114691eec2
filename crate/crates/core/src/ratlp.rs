//! Exact rational linear programming.
//!
//! Two-phase tableau simplex with Bland's rule. Infeasible programs come back
//! with a Farkas certificate read off the phase-one duals and expressed in
//! terms of the caller's own constraints and bounds.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::limits;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Maximize `objective · x` subject to the constraints and per-variable bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub variables: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

impl LinearProgram {
    /// Variables default to `x ≥ 0` with a zero objective.
    pub fn new(variables: usize) -> Self {
        LinearProgram {
            variables,
            objective: vec![Rational::zero(); variables],
            constraints: Vec::new(),
            lower: vec![Some(Rational::zero()); variables],
            upper: vec![None; variables],
        }
    }

    pub fn set_objective(&mut self, objective: Vec<Rational>) {
        assert_eq!(objective.len(), self.variables);
        self.objective = objective;
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn add_constraint(
        &mut self,
        coefficients: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) {
        assert_eq!(coefficients.len(), self.variables);
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
    }

    /// Adds a constraint given as `(variable, coefficient)` pairs.
    pub fn add_sparse(&mut self, terms: &[(usize, Rational)], relation: Relation, rhs: Rational) {
        let mut coefficients = vec![Rational::zero(); self.variables];
        for (j, a) in terms {
            coefficients[*j] += a;
        }
        self.add_constraint(coefficients, relation, rhs);
    }

    /// Exact check of every constraint and bound.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.variables {
            return false;
        }
        let bounds_ok = x.iter().enumerate().all(|(j, v)| {
            self.lower[j].as_ref().is_none_or(|l| v >= l)
                && self.upper[j].as_ref().is_none_or(|u| v <= u)
        });
        bounds_ok
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coefficients, x);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }
}

/// Multipliers proving a program infeasible.
///
/// With `y` over constraints (`≥ 0` on `≤` rows, `≤ 0` on `≥` rows, free on
/// equalities), `upper ≥ 0` on `x_j ≤ u_j` and `lower ≥ 0` on `x_j ≥ l_j`:
/// `Σ y_k a_k + upper − lower = 0` while `Σ y_k b_k + upper·u − lower·l < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FarkasCertificate {
    pub constraint_multipliers: Vec<Rational>,
    pub lower_multipliers: Vec<Rational>,
    pub upper_multipliers: Vec<Rational>,
}

impl FarkasCertificate {
    /// The constant the certificate derives `0 ≤` to; negative when valid.
    pub fn bound(&self, lp: &LinearProgram) -> Rational {
        let mut total = Rational::zero();
        for (y, c) in self.constraint_multipliers.iter().zip(&lp.constraints) {
            total += y * &c.rhs;
        }
        for j in 0..lp.variables {
            if let Some(u) = &lp.upper[j] {
                total += &self.upper_multipliers[j] * u;
            }
            if let Some(l) = &lp.lower[j] {
                total -= &self.lower_multipliers[j] * l;
            }
        }
        total
    }

    pub fn verify(&self, lp: &LinearProgram) -> bool {
        if self.constraint_multipliers.len() != lp.constraints.len()
            || self.lower_multipliers.len() != lp.variables
            || self.upper_multipliers.len() != lp.variables
        {
            return false;
        }
        let signs_ok =
            self.constraint_multipliers
                .iter()
                .zip(&lp.constraints)
                .all(|(y, c)| match c.relation {
                    Relation::Le => !y.is_negative(),
                    Relation::Ge => !y.is_positive(),
                    Relation::Eq => true,
                });
        let bounds_ok = (0..lp.variables).all(|j| {
            let l = &self.lower_multipliers[j];
            let u = &self.upper_multipliers[j];
            !l.is_negative()
                && !u.is_negative()
                && (lp.lower[j].is_some() || l.is_zero())
                && (lp.upper[j].is_some() || u.is_zero())
        });
        if !signs_ok || !bounds_ok {
            return false;
        }
        let combination = self.combination(lp);
        combination
            .iter()
            .enumerate()
            .all(|(j, g)| (g + &self.upper_multipliers[j] - &self.lower_multipliers[j]).is_zero())
            && self.bound(lp).is_negative()
    }

    /// `Σ_k y_k a_k`.
    pub fn combination(&self, lp: &LinearProgram) -> Vec<Rational> {
        let mut g = vec![Rational::zero(); lp.variables];
        for (y, c) in self.constraint_multipliers.iter().zip(&lp.constraints) {
            if y.is_zero() {
                continue;
            }
            for (gj, a) in g.iter_mut().zip(&c.coefficients) {
                if !a.is_zero() {
                    *gj += y * a;
                }
            }
        }
        g
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        assignment: Vec<Rational>,
    },
    Infeasible(FarkasCertificate),
    Unbounded,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible(_))
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn assignment(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { assignment, .. } => Some(assignment),
            _ => None,
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    Solver::build(lp)?.run()
}

/// Any feasible point (objective ignored).
pub fn feasible_point(lp: &LinearProgram) -> Result<LpOutcome> {
    let mut zero = lp.clone();
    zero.objective = vec![Rational::zero(); lp.variables];
    solve(&zero)
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter()
        .zip(x)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, v)| c * v)
        .sum()
}

/// How an original variable maps onto nonnegative standard-form columns.
#[derive(Clone, Debug)]
enum VarMap {
    /// `x = lower + z`.
    Shift { lower: Rational, col: usize },
    /// `x = upper − z`.
    Flip { upper: Rational, col: usize },
    /// `x = z⁺ − z⁻`.
    Free { pos: usize, neg: usize },
}

#[derive(Clone, Copy, Debug)]
enum RowOrigin {
    Constraint(usize),
    /// `x_j ≤ u_j` for a variable that also has a lower bound.
    UpperBound(usize),
}

struct Solver<'a> {
    lp: &'a LinearProgram,
    maps: Vec<VarMap>,
    origins: Vec<RowOrigin>,
    /// `+1` or `−1`: the sign applied to make the right-hand side nonnegative.
    signs: Vec<bool>,
    /// Column that starts as the identity for each row.
    identity: Vec<usize>,
    structural: usize,
    first_artificial: usize,
    columns: usize,
    /// `rows × (columns + 1)`, last entry is the right-hand side.
    tableau: Vec<Vec<Rational>>,
    basis: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn build(lp: &'a LinearProgram) -> Result<Self> {
        if lp.objective.len() != lp.variables
            || lp.lower.len() != lp.variables
            || lp.upper.len() != lp.variables
            || lp
                .constraints
                .iter()
                .any(|c| c.coefficients.len() != lp.variables)
        {
            return Err(Error::InvalidInput(
                "linear program dimensions disagree".into(),
            ));
        }
        let mut maps = Vec::with_capacity(lp.variables);
        let mut structural = 0;
        for j in 0..lp.variables {
            let map = match (&lp.lower[j], &lp.upper[j]) {
                (Some(l), _) => VarMap::Shift {
                    lower: l.clone(),
                    col: structural,
                },
                (None, Some(u)) => VarMap::Flip {
                    upper: u.clone(),
                    col: structural,
                },
                (None, None) => {
                    structural += 1;
                    VarMap::Free {
                        pos: structural - 1,
                        neg: structural,
                    }
                }
            };
            structural += 1;
            maps.push(map);
        }

        // Rows over structural columns, before slack/artificial columns.
        let mut rows: Vec<(Vec<Rational>, Relation, Rational, RowOrigin)> = Vec::new();
        for (k, c) in lp.constraints.iter().enumerate() {
            let mut coeffs = vec![Rational::zero(); structural];
            let mut rhs = c.rhs.clone();
            for (j, a) in c.coefficients.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                match &maps[j] {
                    VarMap::Shift { lower, col } => {
                        coeffs[*col] += a;
                        rhs -= a * lower;
                    }
                    VarMap::Flip { upper, col } => {
                        coeffs[*col] -= a;
                        rhs -= a * upper;
                    }
                    VarMap::Free { pos, neg } => {
                        coeffs[*pos] += a;
                        coeffs[*neg] -= a;
                    }
                }
            }
            rows.push((coeffs, c.relation, rhs, RowOrigin::Constraint(k)));
        }
        for (j, (map, upper)) in maps.iter().zip(&lp.upper).enumerate() {
            if let (VarMap::Shift { lower, col }, Some(u)) = (map, upper) {
                let mut coeffs = vec![Rational::zero(); structural];
                coeffs[*col] = Rational::from_integer(1.into());
                rows.push((coeffs, Relation::Le, u - lower, RowOrigin::UpperBound(j)));
            }
        }

        let m = rows.len();
        let mut signs = Vec::with_capacity(m);
        for row in rows.iter_mut() {
            let negate = row.2.is_negative();
            if negate {
                for a in row.0.iter_mut() {
                    *a = -a.clone();
                }
                row.2 = -row.2.clone();
                row.1 = match row.1 {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            signs.push(!negate);
        }

        let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let artificial_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let first_artificial = structural + slack_count;
        let columns = first_artificial + artificial_count;
        limits::check_lp("linear program", columns, m)?;

        let mut tableau = Vec::with_capacity(m);
        let mut identity = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (structural, first_artificial);
        let one = Rational::from_integer(1.into());
        for (coeffs, relation, rhs, _) in &rows {
            let mut row = coeffs.clone();
            row.resize(columns + 1, Rational::zero());
            row[columns] = rhs.clone();
            match relation {
                Relation::Le => {
                    row[next_slack] = one.clone();
                    identity.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -one.clone();
                    next_slack += 1;
                    row[next_art] = one.clone();
                    identity.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = one.clone();
                    identity.push(next_art);
                    next_art += 1;
                }
            }
            tableau.push(row);
        }
        Ok(Solver {
            lp,
            maps,
            origins: rows.into_iter().map(|r| r.3).collect(),
            signs,
            basis: identity.clone(),
            identity,
            structural,
            first_artificial,
            columns,
            tableau,
        })
    }

    fn run(mut self) -> Result<LpOutcome> {
        // Phase one: minimize the sum of artificial variables.
        let mut phase_one = vec![Rational::zero(); self.columns];
        for c in phase_one.iter_mut().skip(self.first_artificial) {
            *c = Rational::from_integer(1.into());
        }
        let reduced = self.optimize(&phase_one, self.columns)?;
        let Some(reduced) = reduced else {
            return Err(Error::IdentityViolated(
                "phase one cannot be unbounded".into(),
            ));
        };
        let infeasibility = -reduced[self.columns].clone();
        if infeasibility.is_positive() {
            return self
                .certificate(&phase_one, &reduced)
                .map(LpOutcome::Infeasible);
        }
        self.expel_artificials();

        // Phase two: minimize −c over the structural columns.
        let mut cost = vec![Rational::zero(); self.columns];
        let mut offset = Rational::zero();
        for (j, map) in self.maps.iter().enumerate() {
            let c = &self.lp.objective[j];
            match map {
                VarMap::Shift { lower, col } => {
                    cost[*col] = -c.clone();
                    offset += c * lower;
                }
                VarMap::Flip { upper, col } => {
                    cost[*col] = c.clone();
                    offset += c * upper;
                }
                VarMap::Free { pos, neg } => {
                    cost[*pos] = -c.clone();
                    cost[*neg] = c.clone();
                }
            }
        }
        let first_artificial = self.first_artificial;
        let Some(reduced) = self.optimize(&cost, first_artificial)? else {
            return Ok(LpOutcome::Unbounded);
        };
        let value = reduced[self.columns].clone() + offset;
        let assignment = self.assignment();
        if !self.lp.is_satisfied_by(&assignment) || self.lp.objective_value(&assignment) != value {
            return Err(Error::IdentityViolated(
                "simplex returned a point that fails its own constraints".into(),
            ));
        }
        Ok(LpOutcome::Optimal { value, assignment })
    }

    /// Minimizes `cost · z` from the current basis, letting only columns below
    /// `eligible` enter. Returns the final reduced-cost row (its last entry is
    /// minus the objective), or `None` when unbounded.
    fn optimize(&mut self, cost: &[Rational], eligible: usize) -> Result<Option<Vec<Rational>>> {
        let mut reduced: Vec<Rational> = cost.to_vec();
        reduced.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (r, t) in reduced.iter_mut().zip(&self.tableau[i]) {
                if !t.is_zero() {
                    *r -= cb * t;
                }
            }
        }
        loop {
            let Some(entering) = (0..eligible).find(|&j| reduced[j].is_negative()) else {
                return Ok(Some(reduced));
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for (i, row) in self.tableau.iter().enumerate() {
                let a = &row[entering];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row[self.columns] / a;
                let better = match &leaving {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((row, _)) = leaving else {
                return Ok(None);
            };
            self.pivot(row, entering, Some(&mut reduced));
        }
    }

    fn pivot(&mut self, row: usize, col: usize, reduced: Option<&mut Vec<Rational>>) {
        let pivot = self.tableau[row][col].clone();
        for v in self.tableau[row].iter_mut() {
            if !v.is_zero() {
                *v /= &pivot;
            }
        }
        let pivot_row = std::mem::take(&mut self.tableau[row]);
        let support: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        let eliminate = |target: &mut Vec<Rational>| {
            let factor = target[col].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &support {
                target[j] -= &factor * &pivot_row[j];
            }
        };
        for (i, target) in self.tableau.iter_mut().enumerate() {
            if i != row {
                eliminate(target);
            }
        }
        if let Some(r) = reduced {
            eliminate(r);
        }
        self.tableau[row] = pivot_row;
        self.basis[row] = col;
    }

    /// Pivots zero-valued artificial variables out of the basis; rows with no
    /// nonzero real column are redundant and left alone (they never change).
    fn expel_artificials(&mut self) {
        for i in 0..self.tableau.len() {
            if self.basis[i] < self.first_artificial {
                continue;
            }
            if let Some(col) = (0..self.first_artificial).find(|&j| !self.tableau[i][j].is_zero()) {
                self.pivot(i, col, None);
            }
        }
    }

    fn assignment(&self) -> Vec<Rational> {
        let mut z = vec![Rational::zero(); self.structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.structural {
                z[b] = self.tableau[i][self.columns].clone();
            }
        }
        self.maps
            .iter()
            .map(|map| match map {
                VarMap::Shift { lower, col } => lower + &z[*col],
                VarMap::Flip { upper, col } => upper - &z[*col],
                VarMap::Free { pos, neg } => &z[*pos] - &z[*neg],
            })
            .collect()
    }

    fn certificate(&self, cost: &[Rational], reduced: &[Rational]) -> Result<FarkasCertificate> {
        let lp = self.lp;
        let mut y = vec![Rational::zero(); lp.constraints.len()];
        let mut upper = vec![Rational::zero(); lp.variables];
        let mut lower = vec![Rational::zero(); lp.variables];
        for (r, origin) in self.origins.iter().enumerate() {
            // Phase-one dual of standard row r, then undo the row's sign flip
            // and negate so the combination derives `0 ≤ negative`.
            let id = self.identity[r];
            let dual = &cost[id] - &reduced[id];
            let multiplier = if self.signs[r] { -dual } else { dual };
            match origin {
                RowOrigin::Constraint(k) => y[*k] = multiplier,
                RowOrigin::UpperBound(j) => upper[*j] = multiplier,
            }
        }
        let mut cert = FarkasCertificate {
            constraint_multipliers: y,
            lower_multipliers: lower.clone(),
            upper_multipliers: upper.clone(),
        };
        let g = cert.combination(lp);
        for (j, map) in self.maps.iter().enumerate() {
            match map {
                VarMap::Shift { .. } => lower[j] = &g[j] + &upper[j],
                VarMap::Flip { .. } => upper[j] = -g[j].clone(),
                VarMap::Free { .. } => {}
            }
        }
        cert.lower_multipliers = lower;
        cert.upper_multipliers = upper;
        if !cert.verify(lp) {
            return Err(Error::IdentityViolated(
                "Farkas certificate failed verification".into(),
            ));
        }
        Ok(cert)
    }
}
