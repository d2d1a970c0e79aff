//! Exact phase-one simplex for linear feasibility.
//!
//! Decides whether `{ x : A x = b, x >= 0 }` is nonempty by minimizing the
//! sum of artificial variables with Bland's pivoting rule (smallest-index
//! entering column, smallest basis index on ratio ties), which rules out
//! cycling. All arithmetic is exact rational. The solver stops at the first
//! tableau whose artificial objective hits zero, so the returned basic
//! feasible solution is a deterministic function of the input.

use num_traits::{One, Signed, Zero};

use super::Rational;

/// A basic feasible solution of `A x = b, x >= 0`, or `None` when the
/// system is infeasible.
pub(crate) fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // Tableau columns: n structural, m artificial, then the right-hand
    // side. Rows are sign-flipped so every right-hand side is nonnegative.
    let width = n + m + 1;
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = Vec::with_capacity(width);
        for j in 0..n {
            row.push(if flip { -&a[i][j] } else { a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i {
                Rational::one()
            } else {
                Rational::zero()
            });
        }
        row.push(if flip { -&b[i] } else { b[i].clone() });
        rows.push(row);
    }

    // Reduced costs for the artificial objective with the artificial basis:
    // cost_j = -sum_i rows[i][j] for structural columns, 0 for artificials.
    // The last cell carries -objective.
    let mut cost: Vec<Rational> = vec![Rational::zero(); width];
    for j in (0..n).chain([width - 1]) {
        let mut s = Rational::zero();
        for row in &rows {
            s += &row[j];
        }
        cost[j] = -s;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let objective_is_zero = |cost: &[Rational]| -> bool { cost[width - 1].is_zero() };

    while !objective_is_zero(&cost) {
        // Bland: smallest-index column with a negative reduced cost.
        let Some(entering) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            return None; // optimal with positive artificial mass
        };
        // Ratio test over rows with a positive pivot column entry; ties go
        // to the row whose basic variable has the smallest index.
        let mut leaving: Option<(usize, Rational)> = None;
        for (i, row) in rows.iter().enumerate() {
            if row[entering].is_positive() {
                let ratio = &row[width - 1] / &row[entering];
                let replace = match &leaving {
                    None => true,
                    Some((best_i, best)) => {
                        ratio < *best || (ratio == *best && basis[i] < basis[*best_i])
                    }
                };
                if replace {
                    leaving = Some((i, ratio));
                }
            }
        }
        // The artificial objective is bounded below by zero, so a pivot row
        // always exists while the objective is positive.
        let (pivot_row, _) = leaving.expect("phase-one objective cannot be unbounded");

        let pivot = rows[pivot_row][entering].clone();
        for cell in &mut rows[pivot_row] {
            *cell /= &pivot;
        }
        let pivot_cells = rows[pivot_row].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != pivot_row && !row[entering].is_zero() {
                let factor = row[entering].clone();
                for (cell, p) in row.iter_mut().zip(&pivot_cells) {
                    *cell -= &factor * p;
                }
            }
        }
        if !cost[entering].is_zero() {
            let factor = cost[entering].clone();
            for (cell, p) in cost.iter_mut().zip(&pivot_cells) {
                *cell -= &factor * p;
            }
        }
        basis[pivot_row] = entering;
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = rows[i][width - 1].clone();
        }
    }
    Some(x)
}
