//! The simplex solver against brute-force vertex enumeration on small boxed LPs.

use borderlab::rational::{int, Rational};
use borderlab::ratlp::{solve, LinearProgram, LpOutcome, Relation};
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Solves a square system by Gaussian elimination; `None` when singular.
fn solve_square(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        rhs.swap(col, pivot);
        let (pivot_row, pivot_rhs) = (rows[col].clone(), rhs[col].clone());
        for (r, (row, b)) in rows.iter_mut().zip(rhs.iter_mut()).enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = &row[col] / &pivot_row[col];
                for (entry, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *entry -= &factor * p;
                }
                *b -= &factor * &pivot_rhs;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &rows[i][i]).collect())
}

/// Every constraint and bound as an equality row.
fn tight_rows(lp: &LinearProgram) -> Vec<(Vec<Rational>, Rational)> {
    let mut rows: Vec<_> = lp
        .constraints
        .iter()
        .map(|c| (c.coefficients.clone(), c.rhs.clone()))
        .collect();
    for j in 0..lp.variables {
        let unit: Vec<Rational> = (0..lp.variables)
            .map(|k| {
                if k == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        for bound in [&lp.lower[j], &lp.upper[j]].into_iter().flatten() {
            rows.push((unit.clone(), bound.clone()));
        }
    }
    rows
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(i + 1, n, k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Best objective over feasible basic solutions, `None` when none is feasible.
fn vertex_optimum(lp: &LinearProgram) -> Option<Rational> {
    let rows = tight_rows(lp);
    combinations(rows.len(), lp.variables)
        .into_iter()
        .filter_map(|chosen| {
            let a = chosen.iter().map(|&i| rows[i].0.clone()).collect();
            let b = chosen.iter().map(|&i| rows[i].1.clone()).collect();
            solve_square(a, b)
        })
        .filter(|x| lp.is_satisfied_by(x))
        .map(|x| lp.objective_value(&x))
        .max()
}

fn relation(code: u8) -> Relation {
    match code % 3 {
        0 => Relation::Le,
        1 => Relation::Ge,
        _ => Relation::Eq,
    }
}

fn boxed_lp(max_vars: usize, max_rows: usize) -> impl Strategy<Value = LinearProgram> {
    (1..=max_vars, 0..=max_rows).prop_flat_map(|(vars, rows)| {
        (
            proptest::collection::vec(-4i64..=4, vars),
            proptest::collection::vec((-3i64..=0, 1i64..=5), vars),
            proptest::collection::vec(
                (
                    proptest::collection::vec(-3i64..=3, vars),
                    0u8..6,
                    -6i64..=6,
                ),
                rows,
            ),
        )
            .prop_map(move |(objective, bounds, constraints)| {
                let mut lp = LinearProgram::new(vars);
                lp.set_objective(objective.into_iter().map(int).collect());
                for (j, (lo, width)) in bounds.into_iter().enumerate() {
                    lp.set_bounds(j, Some(int(lo)), Some(int(lo + width)));
                }
                for (coefficients, rel, rhs) in constraints {
                    // Equalities are rarer than inequalities.
                    let rel = if rel == 5 {
                        Relation::Eq
                    } else {
                        relation(rel % 2)
                    };
                    lp.add_constraint(coefficients.into_iter().map(int).collect(), rel, int(rhs));
                }
                lp
            })
    })
}

fn check_against_vertices(lp: &LinearProgram) -> Result<(), TestCaseError> {
    let outcome = solve(lp).expect("small LPs are within the cap");
    match (outcome, vertex_optimum(lp)) {
        (LpOutcome::Optimal { value, assignment }, Some(best)) => {
            prop_assert!(lp.is_satisfied_by(&assignment));
            prop_assert_eq!(lp.objective_value(&assignment), value.clone());
            prop_assert_eq!(value, best);
        }
        (LpOutcome::Infeasible(cert), None) => prop_assert!(cert.verify(lp)),
        (outcome, best) => {
            prop_assert!(false, "solver {:?} but vertex optimum {:?}", outcome, best)
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]
    #[test]
    fn small_lps_match_vertex_enumeration(lp in boxed_lp(3, 5)) {
        check_against_vertices(&lp)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn larger_lps_match_vertex_enumeration(lp in boxed_lp(6, 8)) {
        check_against_vertices(&lp)?;
    }
}

#[test]
fn free_variables_against_vertices() {
    // max x + y  s.t.  x − y ≤ 1, x + 2y ≤ 4, −x + y ≤ 2, y ≥ −1, x free.
    let mut lp = LinearProgram::new(2);
    lp.set_bounds(0, None, None);
    lp.set_bounds(1, Some(int(-1)), None);
    lp.set_objective(vec![int(1), int(1)]);
    lp.add_constraint(vec![int(1), int(-1)], Relation::Le, int(1));
    lp.add_constraint(vec![int(1), int(2)], Relation::Le, int(4));
    lp.add_constraint(vec![int(-1), int(1)], Relation::Le, int(2));
    let value = solve(&lp).unwrap().value().cloned().unwrap();
    assert_eq!(Some(value), vertex_optimum(&lp));
}
